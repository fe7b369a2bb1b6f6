#include "friridge/signal.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "dft.hpp"
#include "friridge/errors.hpp"
#include "friridge/rng.hpp"

namespace friridge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_length(int n_samples) {
    if (n_samples <= 0) {
        throw InvalidParameterError("signal length must be positive, got " +
                                    std::to_string(n_samples));
    }
}

void check_amp(double amp) {
    if (!(amp >= 0.0)) {
        throw InvalidParameterError("amplitude must be nonnegative, got " +
                                    std::to_string(amp));
    }
}

void check_freq_range(double f, const char* name) {
    if (!(f > 0.0 && f < 0.5)) {
        throw InvalidParameterError(std::string(name) + " must lie in (0, 0.5), got " +
                                    std::to_string(f));
    }
}

} // namespace

Component make_sinusoid(int n_samples, double f0, double amp) {
    check_length(n_samples);
    check_freq_range(f0, "f0");
    check_amp(amp);
    Component c;
    c.amplitude.assign(n_samples, amp);
    c.phase.resize(n_samples);
    c.inst_freq.assign(n_samples, f0);
    for (int n = 0; n < n_samples; ++n) {
        c.phase[n] = f0 * n;
    }
    return c;
}

Component make_linear_chirp(int n_samples, double f_start, double f_end, double amp) {
    check_length(n_samples);
    check_freq_range(f_start, "f_start");
    check_freq_range(f_end, "f_end");
    check_amp(amp);
    if (n_samples == 1) {
        return make_sinusoid(1, f_start, amp);
    }
    const double rate = (f_end - f_start) / (n_samples - 1);
    Component c;
    c.amplitude.assign(n_samples, amp);
    c.phase.resize(n_samples);
    c.inst_freq.resize(n_samples);
    for (int n = 0; n < n_samples; ++n) {
        c.inst_freq[n] = f_start + rate * n;
        c.phase[n] = f_start * n + 0.5 * rate * n * static_cast<double>(n);
    }
    return c;
}

Component make_sin_fm(int n_samples, double f_center, double f_dev, double f_mod,
                      double amp) {
    check_length(n_samples);
    if (f_dev < 0.0) {
        throw InvalidParameterError("f_dev must be nonnegative");
    }
    if (!(f_center - f_dev > 0.0 && f_center + f_dev < 0.5)) {
        throw InvalidParameterError("instantaneous frequency excursion [" +
                                    std::to_string(f_center - f_dev) + ", " +
                                    std::to_string(f_center + f_dev) +
                                    "] must stay inside (0, 0.5)");
    }
    check_amp(amp);
    if (f_dev == 0.0 || f_mod == 0.0) {
        return make_sinusoid(n_samples, f_center, amp);
    }
    Component c;
    c.amplitude.assign(n_samples, amp);
    c.phase.resize(n_samples);
    c.inst_freq.resize(n_samples);
    const double depth = f_dev / (kTwoPi * f_mod);
    for (int n = 0; n < n_samples; ++n) {
        const double arg = kTwoPi * f_mod * n;
        c.inst_freq[n] = f_center + f_dev * std::sin(arg);
        // integral of inst_freq with phase(0) = 0
        c.phase[n] = f_center * n - depth * (std::cos(arg) - 1.0);
    }
    return c;
}

Signal synthesize(const std::vector<Component>& components, int n_samples) {
    if (components.empty()) {
        check_length(n_samples);
        Signal zero;
        zero.samples.assign(n_samples, {0.0, 0.0});
        return zero;
    }
    const int n = components.front().size();
    if (n_samples >= 0 && n_samples != n) {
        throw InvalidParameterError("requested length does not match component length");
    }
    for (const Component& c : components) {
        if (c.size() != n) {
            throw InvalidParameterError("components have mismatched lengths");
        }
    }
    Signal x;
    x.samples.assign(n, {0.0, 0.0});
    for (const Component& c : components) {
        for (int i = 0; i < n; ++i) {
            const double ph = kTwoPi * c.phase[i];
            x.samples[i] += c.amplitude[i] * std::complex<double>(std::cos(ph), std::sin(ph));
        }
    }
    x.ground_truth = components;
    return x;
}

double energy(const Signal& x) {
    double e = 0.0;
    for (const auto& s : x.samples) {
        e += std::norm(s);
    }
    return e;
}

Signal analytic_projection(const Signal& x) {
    const int n = x.size();
    check_length(n);
    Eigen::VectorXcd time(n);
    for (int i = 0; i < n; ++i) {
        time(i) = x.samples[i];
    }
    Eigen::VectorXcd spec(n);
    detail::dft_forward(spec, time);
    // keep bins [0, n/2], zero the negative-frequency half
    for (int k = n / 2 + 1; k < n; ++k) {
        spec(k) = 0.0;
    }
    Eigen::VectorXcd back(n);
    detail::dft_inverse(back, spec);
    Signal y;
    y.ground_truth = x.ground_truth;
    y.samples.assign(back.data(), back.data() + n);
    return y;
}

Signal add_noise(const Signal& x, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0.0) {
        return x;
    }
    const double e = energy(x);
    if (e <= 0.0) {
        throw InvalidParameterError("cannot add noise at a prescribed SNR to a zero-energy signal");
    }
    const int n = x.size();
    // per-sample complex variance so that E||w||^2 = ||x||^2 / 10^(snr/10)
    const double sigma2 = e / (n * std::pow(10.0, snr_db / 10.0));
    const double sigma = std::sqrt(sigma2);
    Rng rng(seed);
    Signal y = x;
    for (auto& s : y.samples) {
        s += sigma * rng.complex_normal();
    }
    return y;
}

} // namespace friridge
