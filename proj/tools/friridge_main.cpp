#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "friridge/bench.hpp"
#include "friridge/errors.hpp"
#include "friridge/fri.hpp"
#include "friridge/io.hpp"

namespace {

using namespace friridge;

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

/// Signal source shared by estimate/extract: either a file (CSV or WAV by
/// extension) or the configured synthetic mixture with optional noise.
struct LoadedSignal {
    Signal observed;
    Signal clean; // carries ground truth when synthetic
};

LoadedSignal load_signal(const ExperimentConfig& config) {
    LoadedSignal out;
    if (!config.input_file.empty()) {
        const std::string ext = std::filesystem::path(config.input_file).extension().string();
        out.observed = (ext == ".wav" || ext == ".WAV") ? read_wav_analytic(config.input_file)
                                                        : read_signal_csv(config.input_file);
        out.clean = out.observed;
        return out;
    }
    out.clean = clean_signal(config);
    out.observed = add_noise(out.clean, config.input_snr_db, config.seed);
    return out;
}

void add_common_options(CLI::App* cmd, std::string& config_path, ExperimentConfig& config,
                        std::optional<double>& snr, std::optional<std::uint64_t>& seed) {
    cmd->add_option("--config", config_path, "experiment config file (key = value lines)");
    cmd->add_option("--out", config.out_dir, "output directory");
    cmd->add_option("--snr", snr, "SNR in dB for the generated observation (inf = noiseless)");
    cmd->add_option("--seed", seed, "noise seed");
    cmd->add_option("--input", config.input_file, "input signal file (.csv or .wav)");
    cmd->add_option("--n-samples", config.n_samples, "synthetic signal length");
    cmd->add_option("--k", config.n_components, "number of components K");
    cmd->add_option("--window-spread", config.analysis.window_spread,
                    "Gaussian window time spread L");
    cmd->add_option("--n-bins", config.analysis.n_bins, "frequency bin count M");
    cmd->add_option("--bandlimit", config.analysis.bandlimit,
                    "retained coefficient half-count M0 (0 = auto)");
}

/// --config is applied before CLI11 parses the remaining flags, so the
/// precedence is defaults < config file < command line.
std::string prescan_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) {
            return argv[i + 1];
        }
        if (arg.rfind("--config=", 0) == 0) {
            return arg.substr(9);
        }
    }
    return {};
}

int cmd_generate(const ExperimentConfig& config) {
    const Signal clean = clean_signal(config);
    const Signal observed = add_noise(clean, config.input_snr_db, config.seed);
    const std::string signal_path = join_path(config.out_dir, "signal.csv");
    const std::string truth_path = join_path(config.out_dir, "truth.csv");
    write_signal_csv(signal_path, observed);
    write_truth_csv(truth_path, clean);
    std::cout << "wrote " << signal_path << " (" << observed.size() << " samples, "
              << clean.ground_truth.size() << " components)\n"
              << "wrote " << truth_path << "\n";
    return 0;
}

void write_debug_dump(const std::string& path, const Signal& observed,
                      const ExperimentConfig& config, Method method) {
    const bool sst = method == Method::fri_sst;
    const FilterKernel kernel = sst ? build_sst_kernel(config.sst_kernel_std, config.analysis)
                                    : build_kernel(config.analysis);
    const FilterMethod fm = method == Method::fri ? FilterMethod::prony : FilterMethod::tls;
    const Signal projected = analytic_projection(observed);
    Eigen::MatrixXd tfr;
    if (sst) {
        tfr = subtract_noise_floor(vsst(projected, config.analysis)).values;
    } else {
        tfr = subtract_noise_floor(spectrogram(stft(projected, config.analysis))).values;
    }
    std::ostringstream out;
    out << "frame,kind,index,re,im\n";
    Eigen::VectorXd frame(tfr.cols());
    for (int n = 0; n < tfr.rows(); ++n) {
        frame = tfr.row(n);
        RecoveryTrace trace;
        try {
            const DiracStream stream =
                recover_frame(frame, kernel, config.n_components, fm, &trace);
            const int m0 = trace.coefficients.bandlimit;
            for (int lambda = -m0; lambda <= m0; ++lambda) {
                const auto c = trace.coefficients(lambda);
                out << n << ",fhat," << lambda << ',' << c.real() << ',' << c.imag() << '\n';
            }
            for (int i = 0; i < trace.filter.coefficients.size(); ++i) {
                const auto c = trace.filter.coefficients(i);
                out << n << ",h," << i << ',' << c.real() << ',' << c.imag() << '\n';
            }
            for (std::size_t i = 0; i < stream.positions.size(); ++i) {
                out << n << ",pulse," << i << ',' << stream.positions[i] << ','
                    << stream.weights[i] << '\n';
            }
        } catch (const Error& e) {
            out << n << ",degenerate,0,0,0\n";
        }
    }
    write_text_file(path, out.str());
}

int cmd_estimate(const ExperimentConfig& config, bool dump_tfr, const std::string& debug_dump,
                 const std::string& truth_path) {
    const LoadedSignal sig = load_signal(config);
    ExperimentConfig cfg = config;
    const SingleRun run = run_single(sig.observed, sig.clean, cfg, cfg.method);

    const std::string traj_path = join_path(cfg.out_dir, "trajectories.csv");
    write_trajectories_csv(traj_path, run.trajectories, cfg.analysis.n_bins);
    std::cout << "wrote " << traj_path << "\n";

    if (dump_tfr) {
        const Spectrogram spec = spectrogram(stft(sig.observed, cfg.analysis));
        write_tfr_csv(join_path(cfg.out_dir, "tfr.csv"), spec.values);
        write_tfr_pgm(join_path(cfg.out_dir, "tfr.pgm"), spec.values);
        std::cout << "wrote " << join_path(cfg.out_dir, "tfr.csv") << " and .pgm\n";
    }
    if (!debug_dump.empty()) {
        write_debug_dump(debug_dump, sig.observed, cfg, cfg.method);
        std::cout << "wrote " << debug_dump << "\n";
    }

    if (run.has_metrics) {
        std::cout << "rmse " << run.metrics.rmse << "  rmae " << run.metrics.rmae
                  << "  (boundary exclusion " << run.metrics.excluded_boundary_frames
                  << " frames)\n";
    } else if (!truth_path.empty()) {
        // file-based truth for externally generated signals
        const GroundTruthTable table = read_truth_csv(truth_path);
        if (table.if_normalized.rows() == cfg.n_components &&
            table.if_normalized.cols() == run.trajectories.n_frames()) {
            const Eigen::MatrixXd truth = table.if_normalized * cfg.analysis.n_bins;
            const MetricsReport report =
                compute_metrics(run.trajectories, truth, cfg.analysis.n_bins,
                                cfg.resolved_boundary_exclusion());
            std::cout << "rmse " << report.rmse << "  rmae " << report.rmae << "\n";
        } else {
            std::cout << "truth file shape does not match the estimate; metrics skipped\n";
        }
    }
    return 0;
}

int cmd_bench(const ExperimentConfig& config, const std::vector<std::string>& method_names) {
    std::vector<Method> methods;
    for (const std::string& name : method_names) {
        methods.push_back(parse_method(name));
    }
    if (methods.empty()) {
        methods = {Method::fri, Method::fri_tls, Method::fri_sst};
    }
    const std::vector<BenchRow> rows = run_bench(config, methods);
    write_text_file(join_path(config.out_dir, "bench_metrics.csv"), render_bench_csv(rows));
    write_text_file(join_path(config.out_dir, "bench_rqf.csv"), render_rqf_csv(rows));
    write_text_file(join_path(config.out_dir, "bench_rmse_pivot.csv"),
                    render_pivot_csv(rows, PivotMetric::rmse));
    write_text_file(join_path(config.out_dir, "bench_rmae_pivot.csv"),
                    render_pivot_csv(rows, PivotMetric::rmae));
    std::cout << render_bench_csv(rows);
    std::cout << "wrote bench_metrics.csv, bench_rqf.csv and pivot tables under "
              << config.out_dir << "\n";
    return 0;
}

int cmd_extract(const ExperimentConfig& config, bool all_pass, bool write_wav_files) {
    const LoadedSignal sig = load_signal(config);
    ExperimentConfig cfg = config;
    const StftMatrix f = stft(sig.observed, cfg.analysis);

    if (all_pass) {
        BinaryMask mask;
        mask.halfwidth = cfg.analysis.n_bins;
        mask.support.setConstant(f.n_frames(), f.n_bins(), true);
        const Signal round_trip = extract_mode(f, mask);
        std::cout << "all-pass mask RQF vs input: " << rqf(sig.observed, round_trip)
                  << " dB\n";
        return 0;
    }

    const SingleRun run = run_single(sig.observed, sig.clean, cfg, cfg.method);
    const std::vector<BinaryMask> masks =
        build_mask(run.trajectories, cfg.mask_halfwidth, cfg.analysis.n_bins);

    std::ostringstream report;
    report << "component,rqf_db\n";
    for (int k = 0; k < cfg.n_components; ++k) {
        const int track = run.has_metrics ? run.metrics.assignment[k] : k;
        const Signal mode = extract_mode(f, masks[track]);
        const std::string base = "mode_" + std::to_string(k + 1);
        write_signal_csv(join_path(cfg.out_dir, base + ".csv"), mode);
        if (write_wav_files) {
            write_wav(join_path(cfg.out_dir, base + ".wav"), mode);
        }
        if (run.has_metrics) {
            report << 'C' << (k + 1) << ',' << run.rqf_components[k] << '\n';
        }
        std::cout << "wrote " << join_path(cfg.out_dir, base + ".csv") << "\n";
    }
    if (run.has_metrics) {
        report << "average," << run.rqf_average << '\n';
        write_text_file(join_path(cfg.out_dir, "rqf_report.csv"), report.str());
        std::cout << "average RQF " << run.rqf_average << " dB (report in "
                  << join_path(cfg.out_dir, "rqf_report.csv") << ")\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Instantaneous-frequency ridge estimation by sparse pulse-stream recovery"};
    app.require_subcommand(1);

    ExperimentConfig config = default_experiment();
    std::string config_path;
    std::optional<double> snr;
    std::optional<std::uint64_t> seed;

    try {
        const std::string pre = prescan_config_path(argc, argv);
        if (!pre.empty()) {
            apply_config_file(config, pre);
        }
    } catch (const friridge::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App* generate = app.add_subcommand("generate", "synthesize a test signal + ground truth");
    add_common_options(generate, config_path, config, snr, seed);

    CLI::App* estimate = app.add_subcommand("estimate", "estimate ridge trajectories");
    add_common_options(estimate, config_path, config, snr, seed);
    std::string method_name;
    std::string truth_path;
    std::string debug_dump;
    bool dump_tfr = false;
    estimate->add_option("--method", method_name, "fri | fri-tls | fri-sst");
    estimate->add_option("--truth", truth_path, "ground-truth CSV for metrics");
    estimate->add_flag("--dump-tfr", dump_tfr, "also write the spectrogram as CSV and PGM");
    estimate->add_option("--debug-dump", debug_dump,
                         "write per-frame coefficients, filters and pulses to this CSV");

    CLI::App* bench = app.add_subcommand("bench", "SNR sweep over noise realizations");
    add_common_options(bench, config_path, config, snr, seed);
    std::vector<std::string> method_names;
    std::vector<double> snr_list;
    std::optional<int> realizations;
    std::optional<std::uint64_t> base_seed;
    bench->add_option("--methods", method_names, "methods to compare")->delimiter(',');
    bench->add_option("--snr-list", snr_list, "SNR sweep values in dB")->delimiter(',');
    bench->add_option("--realizations", realizations, "noise realizations per point");
    bench->add_option("--base-seed", base_seed, "seed of realization 0");

    CLI::App* extract = app.add_subcommand("extract", "reconstruct components by masked inversion");
    add_common_options(extract, config_path, config, snr, seed);
    std::string extract_method;
    bool all_pass = false;
    bool wav_out = false;
    extract->add_option("--method", extract_method, "fri | fri-tls | fri-sst");
    extract->add_option("--halfwidth", config.mask_halfwidth, "mask halfwidth in bins");
    extract->add_flag("--all-pass-mask", all_pass, "debug: bypass masking, check the round trip");
    extract->add_flag("--wav", wav_out, "also write modes as WAV files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (snr) {
            config.input_snr_db = *snr;
        }
        if (seed) {
            config.seed = *seed;
        }
        if (generate->parsed()) {
            return cmd_generate(config);
        }
        if (estimate->parsed()) {
            if (!method_name.empty()) {
                config.method = parse_method(method_name);
            }
            return cmd_estimate(config, dump_tfr, debug_dump, truth_path);
        }
        if (bench->parsed()) {
            if (!snr_list.empty()) {
                config.sweep_snr_db = snr_list;
            } else if (snr) {
                // for bench, --snr selects a single-point sweep
                config.sweep_snr_db = {*snr};
            }
            if (realizations) {
                config.n_realizations = *realizations;
            }
            if (base_seed) {
                config.base_seed = *base_seed;
            }
            return cmd_bench(config, method_names);
        }
        if (extract->parsed()) {
            if (!extract_method.empty()) {
                config.method = parse_method(extract_method);
            }
            return cmd_extract(config, all_pass, wav_out);
        }
    } catch (const friridge::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
