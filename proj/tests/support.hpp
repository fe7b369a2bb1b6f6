#ifndef FRIRIDGE_TESTS_SUPPORT_HPP
#define FRIRIDGE_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "friridge/rng.hpp"
#include "friridge/signal.hpp"
#include "friridge/stft.hpp"

namespace testsupport {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Gaussian-bump frame built directly from the model, independent of the
/// library kernel code: each pulse contributes w * g(m - p) with
/// g(d) = exp(-(2*pi*d*L/M)^2), periodized over three images.
inline Eigen::VectorXd model_frame(int n_bins, double spread,
                                   const std::vector<double>& positions,
                                   const std::vector<double>& weights) {
    Eigen::VectorXd frame = Eigen::VectorXd::Zero(n_bins);
    const double scale = kTwoPi * spread / n_bins;
    for (std::size_t k = 0; k < positions.size(); ++k) {
        for (int m = 0; m < n_bins; ++m) {
            for (int image = -1; image <= 1; ++image) {
                const double d = scale * (m - positions[k] + image * n_bins);
                frame(m) += weights[k] * std::exp(-d * d);
            }
        }
    }
    return frame;
}

/// Same with a unit-peak Gaussian of standard deviation std_bins.
inline Eigen::VectorXd narrow_model_frame(int n_bins, double std_bins,
                                          const std::vector<double>& positions,
                                          const std::vector<double>& weights) {
    Eigen::VectorXd frame = Eigen::VectorXd::Zero(n_bins);
    for (std::size_t k = 0; k < positions.size(); ++k) {
        for (int m = 0; m < n_bins; ++m) {
            for (int image = -1; image <= 1; ++image) {
                const double d = (m - positions[k] + image * n_bins) / std_bins;
                frame(m) += weights[k] * std::exp(-0.5 * d * d);
            }
        }
    }
    return frame;
}

/// Direct quadratic-cost evaluation of the windowed transform definition.
inline Eigen::MatrixXcd brute_stft(const friridge::Signal& x,
                                   const friridge::AnalysisConfig& config) {
    const int n = x.size();
    const int m = config.n_bins;
    const int h = config.resolved_halfwidth();
    Eigen::MatrixXcd out(n, m);
    for (int frame = 0; frame < n; ++frame) {
        for (int bin = 0; bin < m; ++bin) {
            std::complex<double> acc = 0.0;
            const int lo = std::max(0, frame - h);
            const int hi = std::min(n - 1, frame + h);
            for (int l = lo; l <= hi; ++l) {
                const double w = friridge::gaussian_window(frame - l, config.window_spread);
                const double ang = -kTwoPi * l * bin / m;
                acc += x.samples[l] * w * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            out(frame, bin) = acc;
        }
    }
    return out;
}

/// K positions on the circular bin grid with pairwise (wrapped) separation of
/// at least min_sep. half_integer forces every position onto the x.5 grid.
inline std::vector<double> random_positions(friridge::Rng& rng, int n_bins, int k,
                                            double min_sep, bool half_integer = false) {
    for (;;) {
        std::vector<double> pos(k);
        for (int i = 0; i < k; ++i) {
            pos[i] = rng.uniform(0.0, static_cast<double>(n_bins));
            if (half_integer) {
                pos[i] = std::floor(pos[i]) + 0.5;
            }
        }
        std::sort(pos.begin(), pos.end());
        bool ok = true;
        for (int i = 0; i < k && ok; ++i) {
            const double next = (i + 1 < k) ? pos[i + 1] : pos[0] + n_bins;
            ok = (next - pos[i]) >= min_sep;
        }
        if (ok) {
            return pos;
        }
    }
}

struct CleanFrame {
    Eigen::VectorXd frame;
    std::vector<double> positions;
    std::vector<double> weights;
};

inline CleanFrame random_clean_frame(friridge::Rng& rng, int n_bins, double spread, int k,
                                     double min_sep = 3.0, bool half_integer = false) {
    CleanFrame out;
    out.positions = random_positions(rng, n_bins, k, min_sep, half_integer);
    out.weights.resize(k);
    for (int i = 0; i < k; ++i) {
        out.weights[i] = rng.uniform(0.5, 5.0);
    }
    out.frame = model_frame(n_bins, spread, out.positions, out.weights);
    return out;
}

/// Wrapped absolute distance between two bin positions.
inline double circular_distance(double a, double b, int n_bins) {
    double d = std::abs(a - b);
    return std::min(d, n_bins - d);
}

inline friridge::Signal random_complex_signal(friridge::Rng& rng, int n) {
    friridge::Signal x;
    x.samples.resize(n);
    for (auto& s : x.samples) {
        s = {rng.normal(), rng.normal()};
    }
    return x;
}

} // namespace testsupport

#endif // FRIRIDGE_TESTS_SUPPORT_HPP
