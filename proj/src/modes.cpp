#include "friridge/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "friridge/errors.hpp"

namespace friridge {

std::vector<BinaryMask> build_mask(const RidgeTrajectories& traj, int halfwidth, int n_bins) {
    if (halfwidth < 0) {
        throw InvalidParameterError("mask halfwidth must be nonnegative");
    }
    if (n_bins < 1) {
        throw InvalidParameterError("bin count must be positive");
    }
    const int k = traj.n_components();
    const int n_frames = traj.n_frames();
    std::vector<BinaryMask> masks(k);
    for (int i = 0; i < k; ++i) {
        BinaryMask& mask = masks[i];
        mask.halfwidth = halfwidth;
        mask.support.setConstant(n_frames, n_bins, false);
        for (int n = 0; n < n_frames; ++n) {
            const long center = std::lround(traj.if_bins(i, n));
            const int lo = static_cast<int>(std::max<long>(0, center - halfwidth));
            const int hi = static_cast<int>(std::min<long>(n_bins - 1, center + halfwidth));
            for (int m = lo; m <= hi; ++m) {
                mask.support(n, m) = true;
            }
        }
    }
    return masks;
}

Signal extract_mode(const StftMatrix& f, const BinaryMask& mask) {
    if (f.values.rows() != mask.support.rows() || f.values.cols() != mask.support.cols()) {
        throw InvalidParameterError("mask shape does not match the STFT");
    }
    StftMatrix filtered;
    filtered.config = f.config;
    filtered.values = f.values;
    for (int n = 0; n < mask.support.rows(); ++n) {
        for (int m = 0; m < mask.support.cols(); ++m) {
            if (!mask.support(n, m)) {
                filtered.values(n, m) = 0.0;
            }
        }
    }
    return inverse_stft(filtered);
}

double rqf(const Signal& reference, const Signal& estimate) {
    if (reference.size() != estimate.size()) {
        throw InvalidParameterError("signals must have equal length");
    }
    const double ref_energy = energy(reference);
    if (ref_energy <= 0.0) {
        throw InvalidParameterError("reference signal has zero energy");
    }
    double err_energy = 0.0;
    for (int n = 0; n < reference.size(); ++n) {
        err_energy += std::norm(reference.samples[n] - estimate.samples[n]);
    }
    if (err_energy == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 10.0 * std::log10(ref_energy / err_energy);
}

} // namespace friridge
