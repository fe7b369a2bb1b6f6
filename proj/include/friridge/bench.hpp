#ifndef FRIRIDGE_BENCH_HPP
#define FRIRIDGE_BENCH_HPP

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "friridge/modes.hpp"
#include "friridge/ridge.hpp"
#include "friridge/signal.hpp"
#include "friridge/stft.hpp"

namespace friridge {

/// Estimator variants: fri is Prony on the spectrogram, fri-tls is total
/// least squares on the spectrogram, fri-sst is total least squares on the
/// synchrosqueezed representation with its own narrow kernel.
enum class Method { fri, fri_tls, fri_sst };

std::string to_string(Method m);
Method parse_method(const std::string& name);

/// Parametric description of one synthetic component, parseable from
/// "sinusoid:f0[:amp]", "chirp:f_start:f_end[:amp]" or
/// "sinfm:f_center:f_dev:f_mod[:amp]".
struct ComponentSpec {
    enum class Kind { sinusoid, chirp, sin_fm };
    Kind kind = Kind::sinusoid;
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;
    double amp = 1.0;
};

ComponentSpec parse_component_spec(const std::string& text);
std::string to_string(const ComponentSpec& spec);
Component realize(const ComponentSpec& spec, int n_samples);

/// Everything one experiment needs: signal recipe (or input file), analysis
/// parameters, estimator selection and the SNR sweep.
struct ExperimentConfig {
    std::vector<ComponentSpec> components;
    int n_samples = 500;
    std::string input_file;
    double input_snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;

    AnalysisConfig analysis;
    int boundary_exclusion = -1; // -1 selects ceil(2*L)

    Method method = Method::fri_tls;
    int n_components = 3;
    double sst_kernel_std = 0.5;
    int mask_halfwidth = 10;

    std::vector<double> sweep_snr_db{-5.0, 0.0, 5.0, 10.0};
    int n_realizations = 100;
    std::uint64_t base_seed = 1;

    std::string out_dir = "out";

    int resolved_boundary_exclusion() const;
    void validate() const;
};

/// The stock three-component test signal and sweep (see configs/default.cfg).
ExperimentConfig default_experiment();

/// Applies `key = value` entries onto a config; unknown keys are an error.
void apply_config_map(ExperimentConfig& config,
                      const std::map<std::string, std::string>& entries);
void apply_config_file(ExperimentConfig& config, const std::string& path);

/// Synthesizes the configured mixture (no noise).
Signal clean_signal(const ExperimentConfig& config);

/// Ground-truth instantaneous frequencies in bin units, K x N.
Eigen::MatrixXd truth_if_bins(const std::vector<Component>& truth, int n_bins);

/// One estimator pass over one observation. Metrics and reconstruction
/// scores are filled only when `clean` carries ground truth whose component
/// count matches the estimator order.
struct SingleRun {
    RidgeTrajectories trajectories;
    bool has_metrics = false;
    MetricsReport metrics;
    std::vector<double> rqf_components;
    double rqf_average = std::numeric_limits<double>::quiet_NaN();
};

SingleRun run_single(const Signal& observed, const Signal& clean,
                     const ExperimentConfig& config, Method method);

/// Aggregated sweep results for one (method, SNR) cell.
struct BenchRow {
    Method method = Method::fri_tls;
    double snr_db = 0.0;
    int n_realizations = 0;
    double rmse_mean = 0.0;
    double rmse_std = 0.0;
    double rmae_mean = 0.0;
    double rmae_std = 0.0;
    std::vector<double> rqf_mean;
    std::vector<double> rqf_std;
    double rqf_avg_mean = 0.0;
    double rqf_avg_std = 0.0;
};

/// Full sweep: every method against every SNR, n_realizations noise draws
/// each, realization r seeded with base_seed + r so rows are independent of
/// sweep order and methods share noise.
std::vector<BenchRow> run_bench(const ExperimentConfig& config,
                                const std::vector<Method>& methods);

std::string render_bench_csv(const std::vector<BenchRow>& rows);
std::string render_rqf_csv(const std::vector<BenchRow>& rows);

enum class PivotMetric { rmse, rmae };

/// Plot-ready table: SNR on rows, methods on columns.
std::string render_pivot_csv(const std::vector<BenchRow>& rows, PivotMetric metric);

} // namespace friridge

#endif // FRIRIDGE_BENCH_HPP
