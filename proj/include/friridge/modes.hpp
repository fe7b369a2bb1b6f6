#ifndef FRIRIDGE_MODES_HPP
#define FRIRIDGE_MODES_HPP

#include <vector>

#include <Eigen/Core>

#include "friridge/ridge.hpp"
#include "friridge/signal.hpp"
#include "friridge/stft.hpp"

namespace friridge {

/// Time-frequency support of one component: per frame, the bins within
/// halfwidth of the rounded ridge position (clipped at the grid edges, no
/// frequency wrap).
struct BinaryMask {
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> support; // N x M
    int halfwidth = 10;

    int n_frames() const { return static_cast<int>(support.rows()); }
    int n_bins() const { return static_cast<int>(support.cols()); }
};

/// One mask per ridge track: mask_k(n, m) = 1 iff |m - round(if_bins(k, n))|
/// <= halfwidth.
std::vector<BinaryMask> build_mask(const RidgeTrajectories& traj, int halfwidth, int n_bins);

/// inverse_stft(F masked to the given support).
Signal extract_mode(const StftMatrix& f, const BinaryMask& mask);

/// Reconstruction quality factor 10*log10(||x||^2 / ||x - x_hat||^2) in dB.
/// Returns +infinity when the estimate equals the reference exactly.
double rqf(const Signal& reference, const Signal& estimate);

} // namespace friridge

#endif // FRIRIDGE_MODES_HPP
