#include "friridge/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "friridge/errors.hpp"

namespace friridge {

namespace {

constexpr int kMaxExhaustiveComponents = 8;

void check_component_count(int k) {
    if (k < 1) {
        throw InvalidParameterError("need at least one component");
    }
    if (k > kMaxExhaustiveComponents) {
        throw InvalidParameterError("exhaustive assignment is limited to " +
                                    std::to_string(kMaxExhaustiveComponents) + " components");
    }
}

/// Permutation of `values` minimizing total |values[p(k)] - reference[k]|.
std::vector<int> best_assignment(const Eigen::VectorXd& reference,
                                 const std::vector<double>& values) {
    const int k = static_cast<int>(values.size());
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do {
        double cost = 0.0;
        for (int i = 0; i < k; ++i) {
            cost += std::abs(values[perm[i]] - reference(i));
        }
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

RidgeTrajectories estimate_ridges_impl(const Eigen::MatrixXd& values, int n_components,
                                       FilterMethod method, const FilterKernel& kernel) {
    check_component_count(n_components);
    if (static_cast<int>(values.cols()) != kernel.n_bins) {
        throw InvalidParameterError("TFR bin count does not match the kernel grid");
    }
    const int n_frames = static_cast<int>(values.rows());
    std::vector<std::optional<DiracStream>> per_frame(n_frames);
    int recovered = 0;
    Eigen::VectorXd frame(kernel.n_bins);
    for (int n = 0; n < n_frames; ++n) {
        frame = values.row(n);
        try {
            per_frame[n] = recover_frame(frame, kernel, n_components, method);
            ++recovered;
        } catch (const DegenerateSystemError&) {
            // marked and filled by association
        } catch (const NumericalFailureError&) {
        }
    }
    if (recovered == 0) {
        throw PipelineFailureError("ridge recovery degenerated on every frame");
    }
    return associate(per_frame, n_components);
}

} // namespace

RidgeTrajectories estimate_ridges(const Spectrogram& tfr, int n_components,
                                  FilterMethod method, const FilterKernel& kernel) {
    return estimate_ridges_impl(tfr.values, n_components, method, kernel);
}

RidgeTrajectories estimate_ridges(const SharpenedTfr& tfr, int n_components,
                                  FilterMethod method, const FilterKernel& kernel) {
    return estimate_ridges_impl(tfr.values, n_components, method, kernel);
}

RidgeTrajectories associate(const std::vector<std::optional<DiracStream>>& per_frame,
                            int n_components) {
    check_component_count(n_components);
    const int n_frames = static_cast<int>(per_frame.size());
    if (n_frames == 0) {
        throw InvalidParameterError("cannot associate zero frames");
    }
    const int k = n_components;
    for (int n = 0; n < n_frames; ++n) {
        if (per_frame[n] &&
            static_cast<int>(per_frame[n]->positions.size()) != k) {
            throw InvalidParameterError("frame " + std::to_string(n) +
                                        " does not carry " + std::to_string(k) + " pulses");
        }
    }

    int first_ok = 0;
    while (first_ok < n_frames && !per_frame[first_ok]) {
        ++first_ok;
    }
    if (first_ok == n_frames) {
        throw PipelineFailureError("no recovered frame to seed the association");
    }

    RidgeTrajectories traj;
    traj.if_bins.resize(k, n_frames);
    traj.amplitude.resize(k, n_frames);
    traj.frame_status.assign(n_frames, FrameStatus::degenerate);

    // Seed from the first recovered frame, ordered by ascending position
    // (recover_frame already sorts), and backfill the leading gap.
    const DiracStream& seed = *per_frame[first_ok];
    for (int n = 0; n <= first_ok; ++n) {
        for (int i = 0; i < k; ++i) {
            traj.if_bins(i, n) = seed.positions[i];
            traj.amplitude(i, n) = seed.weights[i];
        }
    }
    traj.frame_status[first_ok] = seed.warned ? FrameStatus::warned : FrameStatus::ok;

    for (int n = first_ok + 1; n < n_frames; ++n) {
        if (!per_frame[n]) {
            traj.if_bins.col(n) = traj.if_bins.col(n - 1);
            traj.amplitude.col(n) = traj.amplitude.col(n - 1);
            continue;
        }
        const DiracStream& stream = *per_frame[n];
        const std::vector<int> pick = best_assignment(traj.if_bins.col(n - 1), stream.positions);
        for (int i = 0; i < k; ++i) {
            traj.if_bins(i, n) = stream.positions[pick[i]];
            traj.amplitude(i, n) = stream.weights[pick[i]];
        }
        traj.frame_status[n] = stream.warned ? FrameStatus::warned : FrameStatus::ok;
    }
    return traj;
}

namespace {

struct MetricAccumulator {
    double rmse_best = std::numeric_limits<double>::infinity();
    double rmae_best = std::numeric_limits<double>::infinity();
    std::vector<int> rmse_perm;
};

void check_metric_inputs(const RidgeTrajectories& est, const Eigen::MatrixXd& truth_bins,
                         int n_bins, int exclude_boundary) {
    if (est.if_bins.rows() != truth_bins.rows() || est.if_bins.cols() != truth_bins.cols()) {
        throw InvalidParameterError("estimate and truth shapes differ");
    }
    if (n_bins < 1) {
        throw InvalidParameterError("bin count must be positive");
    }
    if (exclude_boundary < 0 ||
        2 * exclude_boundary >= static_cast<int>(est.if_bins.cols())) {
        throw InvalidParameterError("boundary exclusion leaves no frames to evaluate");
    }
    check_component_count(static_cast<int>(est.if_bins.rows()));
}

/// Scans all truth-to-track permutations; the metrics are label free.
MetricAccumulator scan_permutations(const RidgeTrajectories& est,
                                    const Eigen::MatrixXd& truth_bins, int n_bins,
                                    int exclude_boundary) {
    const int k = static_cast<int>(truth_bins.rows());
    const int n_frames = static_cast<int>(truth_bins.cols());
    const int lo = exclude_boundary;
    const int hi = n_frames - exclude_boundary;
    const double m2 = static_cast<double>(n_bins) * n_bins;

    MetricAccumulator acc;
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        double se = 0.0;
        double ae = 0.0;
        for (int i = 0; i < k; ++i) {
            for (int n = lo; n < hi; ++n) {
                const double d = truth_bins(i, n) - est.if_bins(perm[i], n);
                se += d * d;
                ae += std::abs(d);
            }
        }
        const double rmse_val = se / m2;
        const double rmae_val = ae / n_bins;
        if (rmse_val < acc.rmse_best) {
            acc.rmse_best = rmse_val;
            acc.rmse_perm = perm;
        }
        acc.rmae_best = std::min(acc.rmae_best, rmae_val);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

} // namespace

double rmse(const RidgeTrajectories& est, const Eigen::MatrixXd& truth_bins, int n_bins,
            int exclude_boundary) {
    check_metric_inputs(est, truth_bins, n_bins, exclude_boundary);
    return scan_permutations(est, truth_bins, n_bins, exclude_boundary).rmse_best;
}

double rmae(const RidgeTrajectories& est, const Eigen::MatrixXd& truth_bins, int n_bins,
            int exclude_boundary) {
    check_metric_inputs(est, truth_bins, n_bins, exclude_boundary);
    return scan_permutations(est, truth_bins, n_bins, exclude_boundary).rmae_best;
}

MetricsReport compute_metrics(const RidgeTrajectories& est, const Eigen::MatrixXd& truth_bins,
                              int n_bins, int exclude_boundary) {
    check_metric_inputs(est, truth_bins, n_bins, exclude_boundary);
    const MetricAccumulator acc = scan_permutations(est, truth_bins, n_bins, exclude_boundary);

    MetricsReport report;
    report.rmse = acc.rmse_best;
    report.rmae = acc.rmae_best;
    report.assignment = acc.rmse_perm;
    report.excluded_boundary_frames = exclude_boundary;

    const int k = static_cast<int>(truth_bins.rows());
    const int lo = exclude_boundary;
    const int hi = static_cast<int>(truth_bins.cols()) - exclude_boundary;
    const double m2 = static_cast<double>(n_bins) * n_bins;
    report.per_component.resize(k);
    for (int i = 0; i < k; ++i) {
        double se = 0.0;
        double ae = 0.0;
        for (int n = lo; n < hi; ++n) {
            const double d = truth_bins(i, n) - est.if_bins(acc.rmse_perm[i], n);
            se += d * d;
            ae += std::abs(d);
        }
        report.per_component[i] = {se / m2, ae / n_bins};
    }
    return report;
}

} // namespace friridge
