#include "friridge/stft.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include <unsupported/Eigen/FFT>

#include "friridge/errors.hpp"

namespace friridge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Cplx = std::complex<double>;

/// STFT with an arbitrary coefficient taper c(r), r in [-h, h]:
/// out(n, m) = sum_r x(n+r) c(r) exp(-2*pi*j*(n+r)*m/M).
/// The absolute-index phase is realized by placing each windowed sample at
/// buffer slot (n+r) mod M before the DFT.
Eigen::MatrixXcd sliding_dft(const Signal& x, const Eigen::VectorXd& taper, int halfwidth,
                             int n_bins) {
    const int n_frames = x.size();
    const int m = n_bins;
    Eigen::MatrixXcd out(n_frames, m);
    Eigen::FFT<double> fft;
    Eigen::VectorXcd buffer(m);
    Eigen::VectorXcd row(m);
    for (int n = 0; n < n_frames; ++n) {
        buffer.setZero();
        const int lo = std::max(0, n - halfwidth);
        const int hi = std::min(n_frames - 1, n + halfwidth);
        for (int l = lo; l <= hi; ++l) {
            buffer(l % m) += x.samples[l] * taper(l - n + halfwidth);
        }
        fft.fwd(row, buffer);
        out.row(n) = row;
    }
    return out;
}

Eigen::VectorXd window_samples(const AnalysisConfig& config) {
    const int h = config.resolved_halfwidth();
    Eigen::VectorXd w(2 * h + 1);
    for (int r = -h; r <= h; ++r) {
        w(r + h) = gaussian_window(r, config.window_spread);
    }
    return w;
}

} // namespace

int AnalysisConfig::resolved_halfwidth() const {
    if (window_halfwidth > 0) {
        return window_halfwidth;
    }
    return static_cast<int>(std::ceil(4.0 * window_spread));
}

void AnalysisConfig::validate() const {
    if (!(window_spread > 0.0)) {
        throw InvalidParameterError("window spread must be positive");
    }
    if (n_bins < 2) {
        throw InvalidParameterError("need at least two frequency bins");
    }
    const int h = resolved_halfwidth();
    if (h < static_cast<int>(std::ceil(4.0 * window_spread))) {
        throw InvalidParameterError("window halfwidth below ceil(4*L) truncates the Gaussian too hard");
    }
    if (h >= n_bins) {
        throw InvalidParameterError("window halfwidth must be smaller than the bin count");
    }
    if (bandlimit != 0 && (bandlimit < 1 || 2 * bandlimit + 1 > n_bins)) {
        throw InvalidParameterError("bandlimit must satisfy 1 <= M0 <= (M-1)/2");
    }
}

double gaussian_window(double n, double spread) {
    if (!(spread > 0.0)) {
        throw InvalidParameterError("window spread must be positive");
    }
    const double z = n / spread;
    return std::exp(-0.5 * z * z) / (std::sqrt(kTwoPi) * spread);
}

StftMatrix stft(const Signal& x, const AnalysisConfig& config) {
    config.validate();
    if (x.size() <= 0) {
        throw InvalidParameterError("cannot transform an empty signal");
    }
    return {sliding_dft(x, window_samples(config), config.resolved_halfwidth(), config.n_bins),
            config};
}

Spectrogram spectrogram(const StftMatrix& f) {
    return {f.values.cwiseAbs2(), f.config};
}

Signal inverse_stft(const StftMatrix& f) {
    f.config.validate();
    if (f.n_bins() != f.config.n_bins) {
        throw InvalidParameterError("STFT matrix width does not match its analysis config");
    }
    const int n_frames = f.n_frames();
    const int m = f.config.n_bins;
    const int h = f.config.resolved_halfwidth();
    const Eigen::VectorXd window = window_samples(f.config);

    // Weighted overlap synthesis. Each frame l resynthesizes its windowed
    // segment z_l(t) = x(t) * theta(t - l); combining all frames covering a
    // sample with theta weights and normalizing by sum theta^2 makes the
    // round trip exact and averages per-frame defects of modified matrices.
    Signal x;
    x.samples.assign(n_frames, {0.0, 0.0});
    std::vector<double> weight(n_frames, 0.0);
    Eigen::FFT<double> fft;
    Eigen::VectorXcd row(m);
    Eigen::VectorXcd segment(m);
    for (int l = 0; l < n_frames; ++l) {
        row = f.values.row(l);
        fft.inv(segment, row);
        const int lo = std::max(0, l - h);
        const int hi = std::min(n_frames - 1, l + h);
        for (int t = lo; t <= hi; ++t) {
            const double w = window(t - l + h);
            x.samples[t] += w * segment(t % m);
            weight[t] += w * w;
        }
    }
    for (int t = 0; t < n_frames; ++t) {
        x.samples[t] /= weight[t];
    }
    return x;
}

namespace {

void subtract_floor_rows(Eigen::MatrixXd& values) {
    const int m = static_cast<int>(values.cols());
    Eigen::VectorXd scratch(m);
    for (int n = 0; n < values.rows(); ++n) {
        scratch = values.row(n);
        std::nth_element(scratch.data(), scratch.data() + m / 2, scratch.data() + m);
        const double floor_mean = scratch(m / 2) / std::numbers::ln2;
        if (floor_mean > 0.0) {
            values.row(n).array() -= floor_mean;
        }
    }
}

} // namespace

Spectrogram subtract_noise_floor(Spectrogram tfr) {
    subtract_floor_rows(tfr.values);
    return tfr;
}

SharpenedTfr subtract_noise_floor(SharpenedTfr tfr) {
    subtract_floor_rows(tfr.values);
    return tfr;
}

SharpenedTfr vsst(const Signal& x, const AnalysisConfig& config) {
    config.validate();
    if (x.size() <= 0) {
        throw InvalidParameterError("cannot transform an empty signal");
    }
    const int h = config.resolved_halfwidth();
    const int m = config.n_bins;
    const int n_frames = x.size();
    const double spread = config.window_spread;

    // Windows theta(r), -r*theta(r) and r^2*theta(r) give access to the
    // STFTs with tapers theta(n-l), (n-l)*theta(n-l) and (n-l)^2*theta(n-l).
    Eigen::VectorXd w0 = window_samples(config);
    Eigen::VectorXd w1(2 * h + 1);
    Eigen::VectorXd w2(2 * h + 1);
    for (int r = -h; r <= h; ++r) {
        w1(r + h) = -r * w0(r + h);
        w2(r + h) = static_cast<double>(r) * r * w0(r + h);
    }
    const Eigen::MatrixXcd f0 = sliding_dft(x, w0, h, m);
    const Eigen::MatrixXcd f1 = sliding_dft(x, w1, h, m);
    const Eigen::MatrixXcd f2 = sliding_dft(x, w2, h, m);

    const double gamma = 1e-8 * f0.cwiseAbs().maxCoeff();
    const double inv_l2 = 1.0 / (spread * spread);

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_frames, m);
    for (int n = 0; n < n_frames; ++n) {
        for (int mm = 0; mm < m; ++mm) {
            const Cplx v = f0(n, mm);
            const double s = std::norm(v);
            int target = mm;
            if (std::abs(v) > gamma) {
                // For a Gaussian window and a local linear-chirp model,
                // rt = -j*pi*nu/beta and rt2 - rt^2 = 1/(2*beta) with
                // beta = 1/(2L^2) - j*pi*q, so the pair recovers both the
                // frequency offset nu and the modulation rate q.
                const Cplx rt = f1(n, mm) / v;
                const Cplx rt2 = f2(n, mm) / v;
                double freq = static_cast<double>(mm) / m -
                              rt.imag() * inv_l2 / kTwoPi;
                const Cplx den = rt2 - rt * rt;
                if (std::abs(den) > 1e-12) {
                    const Cplx beta = 0.5 / den;
                    const double qhat = -beta.imag() / std::numbers::pi;
                    const double second = freq + qhat * rt.real();
                    if (std::isfinite(second)) {
                        freq = second;
                    }
                }
                if (std::isfinite(freq)) {
                    target = static_cast<int>(std::lround(freq * m));
                    target = std::clamp(target, 0, m - 1);
                }
            }
            out(n, target) += s;
        }
    }
    return {std::move(out), config};
}

} // namespace friridge
