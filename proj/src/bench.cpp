#include "friridge/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "friridge/errors.hpp"
#include "friridge/fri.hpp"
#include "friridge/io.hpp"

namespace friridge {

namespace {

std::string fmt(double v, const char* spec = "%.12g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::istringstream in(text);
    std::string part;
    while (std::getline(in, part, sep)) {
        parts.push_back(part);
    }
    return parts;
}

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
    const std::string v = strip(text);
    if (v == "inf" || v == "+inf" || v == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    try {
        std::size_t used = 0;
        const double parsed = std::stod(v, &used);
        if (used != v.size()) {
            throw std::invalid_argument(v);
        }
        return parsed;
    } catch (const std::exception&) {
        throw InvalidParameterError("cannot parse " + what + " from '" + text + "'");
    }
}

long parse_long(const std::string& text, const std::string& what) {
    const std::string v = strip(text);
    try {
        std::size_t used = 0;
        const long parsed = std::stol(v, &used);
        if (used != v.size()) {
            throw std::invalid_argument(v);
        }
        return parsed;
    } catch (const std::exception&) {
        throw InvalidParameterError("cannot parse " + what + " from '" + text + "'");
    }
}

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
};

Stats summarize(const std::vector<double>& values) {
    Stats s;
    if (values.empty()) {
        return s;
    }
    for (double v : values) {
        s.mean += v;
    }
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double acc = 0.0;
        for (double v : values) {
            acc += (v - s.mean) * (v - s.mean);
        }
        s.stddev = std::sqrt(acc / static_cast<double>(values.size() - 1));
    }
    return s;
}

} // namespace

std::string to_string(Method m) {
    switch (m) {
    case Method::fri:
        return "fri";
    case Method::fri_tls:
        return "fri-tls";
    case Method::fri_sst:
        return "fri-sst";
    }
    return "?";
}

Method parse_method(const std::string& name) {
    if (name == "fri") {
        return Method::fri;
    }
    if (name == "fri-tls" || name == "fri_tls") {
        return Method::fri_tls;
    }
    if (name == "fri-sst" || name == "fri_sst") {
        return Method::fri_sst;
    }
    throw InvalidParameterError("unknown method '" + name +
                                "' (expected fri, fri-tls or fri-sst)");
}

ComponentSpec parse_component_spec(const std::string& text) {
    const std::vector<std::string> parts = split(strip(text), ':');
    if (parts.empty()) {
        throw InvalidParameterError("empty component spec");
    }
    const std::string kind = strip(parts[0]);
    ComponentSpec spec;
    auto num = [&](std::size_t i) { return parse_double(parts[i], "component parameter"); };
    if (kind == "sinusoid") {
        if (parts.size() < 2 || parts.size() > 3) {
            throw InvalidParameterError("sinusoid spec wants sinusoid:f0[:amp]");
        }
        spec.kind = ComponentSpec::Kind::sinusoid;
        spec.p1 = num(1);
        spec.amp = parts.size() == 3 ? num(2) : 1.0;
    } else if (kind == "chirp") {
        if (parts.size() < 3 || parts.size() > 4) {
            throw InvalidParameterError("chirp spec wants chirp:f_start:f_end[:amp]");
        }
        spec.kind = ComponentSpec::Kind::chirp;
        spec.p1 = num(1);
        spec.p2 = num(2);
        spec.amp = parts.size() == 4 ? num(3) : 1.0;
    } else if (kind == "sinfm") {
        if (parts.size() < 4 || parts.size() > 5) {
            throw InvalidParameterError("sinfm spec wants sinfm:f_center:f_dev:f_mod[:amp]");
        }
        spec.kind = ComponentSpec::Kind::sin_fm;
        spec.p1 = num(1);
        spec.p2 = num(2);
        spec.p3 = num(3);
        spec.amp = parts.size() == 5 ? num(4) : 1.0;
    } else {
        throw InvalidParameterError("unknown component kind '" + kind +
                                    "' (expected sinusoid, chirp or sinfm)");
    }
    return spec;
}

std::string to_string(const ComponentSpec& spec) {
    std::ostringstream out;
    switch (spec.kind) {
    case ComponentSpec::Kind::sinusoid:
        out << "sinusoid:" << fmt(spec.p1);
        break;
    case ComponentSpec::Kind::chirp:
        out << "chirp:" << fmt(spec.p1) << ':' << fmt(spec.p2);
        break;
    case ComponentSpec::Kind::sin_fm:
        out << "sinfm:" << fmt(spec.p1) << ':' << fmt(spec.p2) << ':' << fmt(spec.p3);
        break;
    }
    out << ':' << fmt(spec.amp);
    return out.str();
}

Component realize(const ComponentSpec& spec, int n_samples) {
    switch (spec.kind) {
    case ComponentSpec::Kind::sinusoid:
        return make_sinusoid(n_samples, spec.p1, spec.amp);
    case ComponentSpec::Kind::chirp:
        return make_linear_chirp(n_samples, spec.p1, spec.p2, spec.amp);
    case ComponentSpec::Kind::sin_fm:
        return make_sin_fm(n_samples, spec.p1, spec.p2, spec.p3, spec.amp);
    }
    throw InvalidParameterError("unreachable component kind");
}

int ExperimentConfig::resolved_boundary_exclusion() const {
    if (boundary_exclusion >= 0) {
        return boundary_exclusion;
    }
    return static_cast<int>(std::ceil(2.0 * analysis.window_spread));
}

void ExperimentConfig::validate() const {
    analysis.validate();
    if (n_samples < 1) {
        throw InvalidParameterError("n_samples must be positive");
    }
    if (n_components < 1) {
        throw InvalidParameterError("n_components must be positive");
    }
    if (!(sst_kernel_std > 0.0)) {
        throw InvalidParameterError("sst_kernel_std must be positive");
    }
    if (mask_halfwidth < 0) {
        throw InvalidParameterError("mask_halfwidth must be nonnegative");
    }
    if (sweep_snr_db.empty()) {
        throw InvalidParameterError("SNR sweep must not be empty");
    }
    if (n_realizations < 1) {
        throw InvalidParameterError("need at least one realization");
    }
}

ExperimentConfig default_experiment() {
    ExperimentConfig config;
    config.components = {parse_component_spec("sinusoid:0.1"),
                         parse_component_spec("chirp:0.15:0.35"),
                         parse_component_spec("sinfm:0.42:0.04:0.001")};
    return config;
}

void apply_config_map(ExperimentConfig& config,
                      const std::map<std::string, std::string>& entries) {
    for (const auto& [key, value] : entries) {
        if (key == "signal.components") {
            config.components.clear();
            for (const std::string& part : split(value, ',')) {
                if (!strip(part).empty()) {
                    config.components.push_back(parse_component_spec(part));
                }
            }
        } else if (key == "signal.n_samples") {
            config.n_samples = static_cast<int>(parse_long(value, key));
        } else if (key == "signal.input") {
            config.input_file = strip(value);
        } else if (key == "signal.snr_db") {
            config.input_snr_db = parse_double(value, key);
        } else if (key == "signal.seed") {
            config.seed = static_cast<std::uint64_t>(parse_long(value, key));
        } else if (key == "analysis.window_spread") {
            config.analysis.window_spread = parse_double(value, key);
        } else if (key == "analysis.n_bins") {
            config.analysis.n_bins = static_cast<int>(parse_long(value, key));
        } else if (key == "analysis.window_halfwidth") {
            config.analysis.window_halfwidth = static_cast<int>(parse_long(value, key));
        } else if (key == "analysis.bandlimit") {
            config.analysis.bandlimit = static_cast<int>(parse_long(value, key));
        } else if (key == "analysis.boundary_exclusion") {
            config.boundary_exclusion = static_cast<int>(parse_long(value, key));
        } else if (key == "estimator.method") {
            config.method = parse_method(strip(value));
        } else if (key == "estimator.n_components") {
            config.n_components = static_cast<int>(parse_long(value, key));
        } else if (key == "estimator.sst_kernel_std") {
            config.sst_kernel_std = parse_double(value, key);
        } else if (key == "estimator.mask_halfwidth") {
            config.mask_halfwidth = static_cast<int>(parse_long(value, key));
        } else if (key == "sweep.snr_db") {
            config.sweep_snr_db.clear();
            for (const std::string& part : split(value, ',')) {
                config.sweep_snr_db.push_back(parse_double(part, key));
            }
        } else if (key == "sweep.n_realizations") {
            config.n_realizations = static_cast<int>(parse_long(value, key));
        } else if (key == "sweep.base_seed") {
            config.base_seed = static_cast<std::uint64_t>(parse_long(value, key));
        } else if (key == "output.dir") {
            config.out_dir = strip(value);
        } else {
            throw InvalidParameterError("unknown config key '" + key + "'");
        }
    }
}

void apply_config_file(ExperimentConfig& config, const std::string& path) {
    apply_config_map(config, read_key_value_file(path));
}

Signal clean_signal(const ExperimentConfig& config) {
    if (config.components.empty()) {
        throw InvalidParameterError("config defines no signal components");
    }
    std::vector<Component> parts;
    parts.reserve(config.components.size());
    for (const ComponentSpec& spec : config.components) {
        parts.push_back(realize(spec, config.n_samples));
    }
    return synthesize(parts);
}

Eigen::MatrixXd truth_if_bins(const std::vector<Component>& truth, int n_bins) {
    if (truth.empty()) {
        throw InvalidParameterError("no ground truth components");
    }
    const int n = truth.front().size();
    Eigen::MatrixXd bins(truth.size(), n);
    for (std::size_t k = 0; k < truth.size(); ++k) {
        if (truth[k].size() != n) {
            throw InvalidParameterError("ground truth components have mismatched lengths");
        }
        for (int i = 0; i < n; ++i) {
            bins(static_cast<int>(k), i) = truth[k].inst_freq[i] * n_bins;
        }
    }
    return bins;
}

SingleRun run_single(const Signal& observed, const Signal& clean,
                     const ExperimentConfig& config, Method method) {
    config.validate();
    const int k = config.n_components;
    // The model signals are analytic, so project the observation onto the
    // analytic subspace (halving the admissible noise) and strip the white
    // noise floor of the energy distribution before pulse recovery.
    const Signal projected = analytic_projection(observed);
    const StftMatrix f = stft(projected, config.analysis);

    SingleRun run;
    if (method == Method::fri_sst) {
        const FilterKernel kernel = build_sst_kernel(config.sst_kernel_std, config.analysis);
        const SharpenedTfr tfr = subtract_noise_floor(vsst(projected, config.analysis));
        run.trajectories = estimate_ridges(tfr, k, FilterMethod::tls, kernel);
    } else {
        const FilterKernel kernel = build_kernel(config.analysis);
        const Spectrogram tfr = subtract_noise_floor(spectrogram(f));
        const FilterMethod fm =
            (method == Method::fri) ? FilterMethod::prony : FilterMethod::tls;
        run.trajectories = estimate_ridges(tfr, k, fm, kernel);
    }

    if (clean.ground_truth.size() == static_cast<std::size_t>(k) &&
        clean.size() == observed.size()) {
        const Eigen::MatrixXd truth = truth_if_bins(clean.ground_truth, config.analysis.n_bins);
        run.metrics = compute_metrics(run.trajectories, truth, config.analysis.n_bins,
                                      config.resolved_boundary_exclusion());
        run.has_metrics = true;

        const std::vector<BinaryMask> masks =
            build_mask(run.trajectories, config.mask_halfwidth, config.analysis.n_bins);
        run.rqf_components.resize(k);
        double total = 0.0;
        for (int i = 0; i < k; ++i) {
            const Signal reference = synthesize({clean.ground_truth[i]});
            const Signal mode = extract_mode(f, masks[run.metrics.assignment[i]]);
            run.rqf_components[i] = rqf(reference, mode);
            total += run.rqf_components[i];
        }
        run.rqf_average = total / k;
    }
    return run;
}

std::vector<BenchRow> run_bench(const ExperimentConfig& config,
                                const std::vector<Method>& methods) {
    config.validate();
    if (methods.empty()) {
        throw InvalidParameterError("no methods selected");
    }
    const Signal clean = clean_signal(config);
    const int k = config.n_components;

    std::vector<BenchRow> rows;
    rows.reserve(methods.size() * config.sweep_snr_db.size());
    for (Method method : methods) {
        for (double snr : config.sweep_snr_db) {
            std::vector<double> rmse_vals;
            std::vector<double> rmae_vals;
            std::vector<std::vector<double>> rqf_vals(k);
            std::vector<double> rqf_avg_vals;
            for (int r = 0; r < config.n_realizations; ++r) {
                const Signal observed = add_noise(clean, snr, config.base_seed + r);
                const SingleRun run = run_single(observed, clean, config, method);
                if (!run.has_metrics) {
                    throw PipelineFailureError("bench requires ground truth metrics");
                }
                rmse_vals.push_back(run.metrics.rmse);
                rmae_vals.push_back(run.metrics.rmae);
                for (int i = 0; i < k; ++i) {
                    rqf_vals[i].push_back(run.rqf_components[i]);
                }
                rqf_avg_vals.push_back(run.rqf_average);
            }
            BenchRow row;
            row.method = method;
            row.snr_db = snr;
            row.n_realizations = config.n_realizations;
            const Stats rmse_stats = summarize(rmse_vals);
            const Stats rmae_stats = summarize(rmae_vals);
            const Stats rqf_avg_stats = summarize(rqf_avg_vals);
            row.rmse_mean = rmse_stats.mean;
            row.rmse_std = rmse_stats.stddev;
            row.rmae_mean = rmae_stats.mean;
            row.rmae_std = rmae_stats.stddev;
            row.rqf_avg_mean = rqf_avg_stats.mean;
            row.rqf_avg_std = rqf_avg_stats.stddev;
            row.rqf_mean.resize(k);
            row.rqf_std.resize(k);
            for (int i = 0; i < k; ++i) {
                const Stats s = summarize(rqf_vals[i]);
                row.rqf_mean[i] = s.mean;
                row.rqf_std[i] = s.stddev;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string render_bench_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "method,snr_db,n_realizations,rmse_mean,rmse_std,rmae_mean,rmae_std,"
           "rqf_avg_mean,rqf_avg_std\n";
    for (const BenchRow& row : rows) {
        out << to_string(row.method) << ',' << fmt(row.snr_db) << ',' << row.n_realizations
            << ',' << fmt(row.rmse_mean) << ',' << fmt(row.rmse_std) << ','
            << fmt(row.rmae_mean) << ',' << fmt(row.rmae_std) << ',' << fmt(row.rqf_avg_mean)
            << ',' << fmt(row.rqf_avg_std) << '\n';
    }
    return out.str();
}

std::string render_rqf_csv(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out << "method,snr_db,component,rqf_mean,rqf_std\n";
    for (const BenchRow& row : rows) {
        for (std::size_t i = 0; i < row.rqf_mean.size(); ++i) {
            out << to_string(row.method) << ',' << fmt(row.snr_db) << ",C" << (i + 1) << ','
                << fmt(row.rqf_mean[i]) << ',' << fmt(row.rqf_std[i]) << '\n';
        }
        out << to_string(row.method) << ',' << fmt(row.snr_db) << ",average,"
            << fmt(row.rqf_avg_mean) << ',' << fmt(row.rqf_avg_std) << '\n';
    }
    return out.str();
}

std::string render_pivot_csv(const std::vector<BenchRow>& rows, PivotMetric metric) {
    std::vector<Method> methods;
    std::vector<double> snrs;
    for (const BenchRow& row : rows) {
        if (std::find(methods.begin(), methods.end(), row.method) == methods.end()) {
            methods.push_back(row.method);
        }
        if (std::find(snrs.begin(), snrs.end(), row.snr_db) == snrs.end()) {
            snrs.push_back(row.snr_db);
        }
    }
    auto cell = [&](Method m, double snr) -> std::string {
        for (const BenchRow& row : rows) {
            if (row.method == m && row.snr_db == snr) {
                return fmt(metric == PivotMetric::rmse ? row.rmse_mean : row.rmae_mean);
            }
        }
        return "";
    };
    std::ostringstream out;
    out << "snr_db";
    for (Method m : methods) {
        out << ',' << to_string(m);
    }
    out << '\n';
    for (double snr : snrs) {
        out << fmt(snr);
        for (Method m : methods) {
            out << ',' << cell(m, snr);
        }
        out << '\n';
    }
    return out.str();
}

} // namespace friridge
