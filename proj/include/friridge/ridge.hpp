#ifndef FRIRIDGE_RIDGE_HPP
#define FRIRIDGE_RIDGE_HPP

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "friridge/fri.hpp"
#include "friridge/stft.hpp"

namespace friridge {

enum class FrameStatus : unsigned char { ok, degenerate, warned };

/// K continuous ridge tracks over N frames, in off-grid bin units [0, M).
struct RidgeTrajectories {
    Eigen::MatrixXd if_bins;   // K x N
    Eigen::MatrixXd amplitude; // K x N
    std::vector<FrameStatus> frame_status;

    int n_components() const { return static_cast<int>(if_bins.rows()); }
    int n_frames() const { return static_cast<int>(if_bins.cols()); }
};

/// Ridge-position error metrics against ground truth. assignment[k] is the
/// estimated track matched to truth component k by the reported RMSE.
struct MetricsReport {
    double rmse = 0.0;
    double rmae = 0.0;
    std::vector<std::pair<double, double>> per_component; // (rmse_k, rmae_k)
    std::vector<int> assignment;
    int excluded_boundary_frames = 0;
};

/// Runs recover_frame on every TFR column and links the per-frame pulses into
/// K tracks. Frames whose recovery degenerates are marked and filled by the
/// association rule instead of aborting the run.
///
/// Throws PipelineFailureError if no frame at all could be recovered.
RidgeTrajectories estimate_ridges(const Spectrogram& tfr, int n_components,
                                  FilterMethod method, const FilterKernel& kernel);
RidgeTrajectories estimate_ridges(const SharpenedTfr& tfr, int n_components,
                                  FilterMethod method, const FilterKernel& kernel);

/// Greedy frame-to-frame linking: each frame's pulses are matched to the
/// previous frame's values by the assignment with minimal total frequency
/// displacement. The first recovered frame is ordered by ascending position;
/// degenerate frames hold the previous values (leading ones copy the first
/// recovered frame).
RidgeTrajectories associate(const std::vector<std::optional<DiracStream>>& per_frame,
                            int n_components);

/// sum_k sum_n (truth(k,n) - est(k,n))^2 / M^2 over the evaluated frames,
/// minimized over track-to-truth permutations.
double rmse(const RidgeTrajectories& est, const Eigen::MatrixXd& truth_bins, int n_bins,
            int exclude_boundary = 0);

/// (1/M) * sum_k sum_n |truth(k,n) - est(k,n)|, same permutation rule.
double rmae(const RidgeTrajectories& est, const Eigen::MatrixXd& truth_bins, int n_bins,
            int exclude_boundary = 0);

/// Both metrics plus the per-component breakdown under the RMSE-optimal
/// assignment. exclude_boundary frames are dropped at each end.
MetricsReport compute_metrics(const RidgeTrajectories& est, const Eigen::MatrixXd& truth_bins,
                              int n_bins, int exclude_boundary = 0);

} // namespace friridge

#endif // FRIRIDGE_RIDGE_HPP
