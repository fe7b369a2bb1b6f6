#ifndef FRIRIDGE_SIGNAL_HPP
#define FRIRIDGE_SIGNAL_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace friridge {

/// One AM-FM component of a multi-component signal, sampled at n = 0..N-1.
/// Phase is in cycles; inst_freq is the normalized instantaneous frequency
/// in cycles/sample and is the ground truth the estimators are scored against.
struct Component {
    std::vector<double> amplitude;
    std::vector<double> phase;
    std::vector<double> inst_freq;

    int size() const { return static_cast<int>(amplitude.size()); }
};

/// Complex discrete-time signal. ground_truth is empty for real-world inputs.
struct Signal {
    std::vector<std::complex<double>> samples;
    std::vector<Component> ground_truth;

    int size() const { return static_cast<int>(samples.size()); }
};

/// Constant-frequency component: phase(n) = f0*n.
///
/// Throws InvalidParameterError unless 0 < f0 < 0.5 and amp >= 0.
Component make_sinusoid(int n_samples, double f0, double amp = 1.0);

/// Linear chirp from f_start at n=0 to f_end at n=N-1, phase(0) = 0.
Component make_linear_chirp(int n_samples, double f_start, double f_end, double amp = 1.0);

/// Sinusoidal FM: inst_freq(n) = f_center + f_dev*sin(2*pi*f_mod*n).
/// The full excursion [f_center - f_dev, f_center + f_dev] must stay in (0, 0.5).
Component make_sin_fm(int n_samples, double f_center, double f_dev, double f_mod,
                      double amp = 1.0);

/// Sum of components: samples(n) = sum_k amp_k(n) * exp(2*pi*j*phase_k(n)).
/// Components must share a common length. An empty list needs an explicit
/// n_samples and yields the zero signal of that length; otherwise n_samples
/// may be left at -1 to infer the length.
Signal synthesize(const std::vector<Component>& components, int n_samples = -1);

/// Adds circular complex white Gaussian noise scaled so the expected SNR
/// in total energy is snr_db. Deterministic for a given seed. An infinite
/// snr_db returns the input unchanged.
Signal add_noise(const Signal& x, double snr_db, std::uint64_t seed);

/// Total energy sum |x(n)|^2.
double energy(const Signal& x);

/// Projects onto the analytic subspace by zeroing the negative-frequency
/// half of the DFT. The AM-FM signal model lives entirely in [0, 0.5), so
/// for noisy observations this discards the half of the noise the model
/// cannot occupy while leaving model signals essentially untouched.
Signal analytic_projection(const Signal& x);

} // namespace friridge

#endif // FRIRIDGE_SIGNAL_HPP
