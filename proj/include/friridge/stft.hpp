#ifndef FRIRIDGE_STFT_HPP
#define FRIRIDGE_STFT_HPP

#include <Eigen/Core>

#include "friridge/signal.hpp"

namespace friridge {

/// Analysis parameters shared by the transforms and the pulse-recovery stage.
///
/// window_spread is the Gaussian time spread L in samples. n_bins is the
/// number of frequency bins M covering normalized frequency [0, 1) with one
/// frame per sample (hop 1). window_halfwidth truncates the Gaussian window;
/// 0 selects ceil(4*L), where the tail is below 4e-4 of the peak. bandlimit
/// is the half-count M0 of retained Fourier-series coefficients; 0 defers the
/// choice to the kernel builder, which caps it where the kernel spectrum
/// decays to 1e-6 of its peak.
struct AnalysisConfig {
    double window_spread = 20.0;
    int n_bins = 500;
    int window_halfwidth = 0;
    int bandlimit = 0;

    int resolved_halfwidth() const;

    /// Throws InvalidParameterError on an unusable combination.
    void validate() const;
};

/// Gaussian analysis window (1/(sqrt(2*pi)*L)) * exp(-n^2 / (2*L^2)).
double gaussian_window(double n, double spread);

/// Complex STFT, one row per time frame: values(n, m) = F(n, m), N x M.
struct StftMatrix {
    Eigen::MatrixXcd values;
    AnalysisConfig config;

    int n_frames() const { return static_cast<int>(values.rows()); }
    int n_bins() const { return static_cast<int>(values.cols()); }
};

/// Squared-modulus STFT, entries >= 0, same layout as StftMatrix.
struct Spectrogram {
    Eigen::MatrixXd values;
    AnalysisConfig config;

    int n_frames() const { return static_cast<int>(values.rows()); }
    int n_bins() const { return static_cast<int>(values.cols()); }
};

/// Spectrogram energy reallocated onto per-bin instantaneous-frequency
/// estimates (vertical second-order synchrosqueezing).
struct SharpenedTfr {
    Eigen::MatrixXd values;
    AnalysisConfig config;

    int n_frames() const { return static_cast<int>(values.rows()); }
    int n_bins() const { return static_cast<int>(values.cols()); }
};

/// F(n, m) = sum_l x(l) theta(n-l) exp(-2*pi*j*l*m/M), truncated to
/// |n - l| <= window_halfwidth and zero-padded outside the signal.
StftMatrix stft(const Signal& x, const AnalysisConfig& config);

/// Entry-wise |F|^2.
Spectrogram spectrogram(const StftMatrix& f);

/// Exact hop-1 inverse: x(n) = (1/(M*theta(0))) * sum_m F(n, m) exp(2*pi*j*n*m/M).
/// Applied to a modified matrix (e.g. after masking) this is the usual
/// least-squares style mode reconstruction.
Signal inverse_stft(const StftMatrix& f);

/// Vertical second-order synchrosqueezing of the spectrogram energy. Each
/// bin's energy moves within its own column to the bin nearest the local
/// second-order instantaneous-frequency estimate, which is exact for Gaussian
/// windows on linear chirps. Column sums are preserved.
SharpenedTfr vsst(const Signal& x, const AnalysisConfig& config);

/// Removes the white-noise energy floor from each frame: the floor mean is
/// estimated robustly as the column median divided by ln 2 (the median of an
/// exponential distribution) and subtracted. On noiseless model signals the
/// median is numerically zero, so clean frames pass through unchanged.
Spectrogram subtract_noise_floor(Spectrogram tfr);
SharpenedTfr subtract_noise_floor(SharpenedTfr tfr);

} // namespace friridge

#endif // FRIRIDGE_STFT_HPP
