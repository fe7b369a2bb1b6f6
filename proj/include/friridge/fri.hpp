#ifndef FRIRIDGE_FRI_HPP
#define FRIRIDGE_FRI_HPP

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "friridge/stft.hpp"

namespace friridge {

/// Periodized frequency-domain kernel g and its Fourier-series coefficients.
///
/// g(m) is sampled on the M-periodic bin grid using the wrapped distance, with
/// g(0) = 1 at the peak. g_hat holds the 2*M0+1 retained coefficients, stored
/// with lambda = index - bandlimit; for the real even kernels used here
/// g_hat(-lambda) = conj(g_hat(lambda)) and every retained coefficient is
/// bounded away from zero, so dividing by g_hat is well posed.
struct FilterKernel {
    Eigen::VectorXd g;
    Eigen::VectorXcd g_hat;
    int n_bins = 0;
    int bandlimit = 0;

    std::complex<double> coeff(int lambda) const { return g_hat(lambda + bandlimit); }
};

/// Kernel matching the squared-modulus spectrum of the Gaussian analysis
/// window: g(m) = exp(-(2*pi*m*L/M)^2). If config.bandlimit is 0 the
/// bandlimit is capped at the last lambda with |g_hat| >= 1e-6 * |g_hat(0)|.
///
/// Throws IllConditionedKernelError when a retained coefficient falls below
/// 1e-12 of the peak; pick a smaller bandlimit in that case.
FilterKernel build_kernel(const AnalysisConfig& config);

/// Unit-peak Gaussian kernel of standard deviation std_bins bins, for use on
/// sharpened (synchrosqueezed) representations whose ridges are much narrower
/// than the spectrogram's.
FilterKernel build_sst_kernel(double std_bins, const AnalysisConfig& config);

/// Fourier-series coefficients f_hat(lambda), lambda in [-M0, M0], of one
/// TFR column, indexed like FilterKernel::g_hat.
struct FourierCoefficients {
    Eigen::VectorXcd values;
    int bandlimit = 0;
    int frame_index = -1;

    std::complex<double> operator()(int lambda) const { return values(lambda + bandlimit); }
};

/// Recovers f_hat from a frame: DFT analysis of the column divided by
/// g_hat(lambda). This is the least-squares solution of frame = V * D_g * f_hat
/// for the M x (2*M0+1) Fourier matrix V, and the exact inverse when
/// M = 2*M0+1.
FourierCoefficients fourier_coefficients(const Eigen::VectorXd& frame,
                                         const FilterKernel& kernel, int frame_index = -1);

enum class FilterMethod { prony, tls };

/// FIR filter h(0..K) annihilating an exponential-sum coefficient sequence.
/// Prony normalizes h(0) = 1; total least squares normalizes ||h|| = 1.
struct AnnihilatingFilter {
    Eigen::VectorXcd coefficients;
    FilterMethod method = FilterMethod::prony;

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
};

/// Solves the K x K Toeplitz (Yule-Walker) system under h(0) = 1.
///
/// Throws DegenerateSystemError when the system is rank deficient, which
/// happens for coincident pulse positions or fewer than K actual pulses.
AnnihilatingFilter prony_filter(const FourierCoefficients& coeffs, int n_pulses);

/// Total-least-squares filter: the right singular vector of the smallest
/// singular value of the full (2*M0+1-K) x (K+1) Toeplitz convolution matrix
/// built from all available coefficients.
AnnihilatingFilter tls_filter(const FourierCoefficients& coeffs, int n_pulses);

/// Roots of H(z) mapped to positions (-M/(2*pi)) * arg(z) mod M, sorted
/// ascending. Positions are real valued; they are not snapped to the bin
/// grid. Roots closer than 1e-6 bins are spread apart by 1e-6 and reported
/// through *deduplicated when provided.
std::vector<double> roots_to_positions(const AnnihilatingFilter& filter, int n_bins,
                                       bool* deduplicated = nullptr);

/// Complex solution of the K x K Vandermonde system W * a = f_hat(0..K-1),
/// W(p, q) = exp(-2*pi*j*p*positions[q]/M). For clean model data the
/// imaginary parts vanish.
Eigen::VectorXcd solve_amplitudes_raw(const FourierCoefficients& coeffs,
                                      const std::vector<double>& positions, int n_bins);

/// Real parts of solve_amplitudes_raw clamped at zero.
std::vector<double> solve_amplitudes(const FourierCoefficients& coeffs,
                                     const std::vector<double>& positions, int n_bins);

/// Sparse per-frame result: pulse positions in bin units [0, M), ascending,
/// with nonnegative weights.
struct DiracStream {
    std::vector<double> positions;
    std::vector<double> weights;
    bool warned = false;
};

/// Intermediate values of one recover_frame call, for diagnostic dumps.
struct RecoveryTrace {
    FourierCoefficients coefficients;
    AnnihilatingFilter filter;
};

/// Full single-frame recovery: coefficient extraction, annihilating filter,
/// rooting, amplitude solve. A non-null trace receives the intermediates.
DiracStream recover_frame(const Eigen::VectorXd& frame, const FilterKernel& kernel,
                          int n_pulses, FilterMethod method, RecoveryTrace* trace = nullptr);

} // namespace friridge

#endif // FRIRIDGE_FRI_HPP
