#include "friridge/fri.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "dft.hpp"
#include "friridge/errors.hpp"

namespace friridge {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kKernelFloor = 1e-12;     // hard invertibility floor for g_hat
constexpr double kAutoBandlimitCut = 1e-6; // decay cap used when bandlimit is auto
constexpr double kCoincidenceTol = 1e-6;   // bins

using Cplx = std::complex<double>;

/// Wrapped bin distance on the M-periodic grid.
double wrapped_distance(int m, int n_bins) {
    const int d = std::min(m, n_bins - m);
    return static_cast<double>(d);
}

FilterKernel finish_kernel(Eigen::VectorXd g, const AnalysisConfig& config) {
    const int m = config.n_bins;
    // g is even on the wrapped grid, so its Fourier series is real. Summing
    // cosines keeps g_hat(-lambda) == g_hat(lambda) exact, which in turn
    // keeps recovered coefficient sequences exactly conjugate symmetric.
    const int cap = (m - 1) / 2;
    Eigen::VectorXd spectrum(cap + 2 > m ? m : cap + 2);
    for (int lambda = 0; lambda < spectrum.size(); ++lambda) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            acc += g(i) * std::cos(kTwoPi * lambda * i / m);
        }
        spectrum(lambda) = acc / m; // Fourier-series convention
    }

    const double peak = std::abs(spectrum(0));
    int m0 = config.bandlimit;
    if (m0 == 0) {
        m0 = 1;
        while (m0 < cap &&
               std::abs(spectrum(m0 + 1)) >= kAutoBandlimitCut * peak) {
            ++m0;
        }
    }
    if (m0 < 1 || m0 > cap) {
        throw InvalidParameterError("bandlimit must satisfy 1 <= M0 <= (M-1)/2");
    }

    FilterKernel kernel;
    kernel.g = std::move(g);
    kernel.n_bins = m;
    kernel.bandlimit = m0;
    kernel.g_hat.resize(2 * m0 + 1);
    for (int lambda = -m0; lambda <= m0; ++lambda) {
        const double value = spectrum(std::abs(lambda));
        kernel.g_hat(lambda + m0) = value;
        if (std::abs(value) < kKernelFloor * peak) {
            throw IllConditionedKernelError(
                "kernel spectrum at lambda=" + std::to_string(lambda) +
                " is below 1e-12 of its peak; use a smaller bandlimit M0");
        }
    }
    return kernel;
}

void check_pulse_count(const FourierCoefficients& coeffs, int n_pulses) {
    if (n_pulses < 1) {
        throw InvalidParameterError("need at least one pulse");
    }
    if (2 * coeffs.bandlimit + 1 < 2 * n_pulses + 1) {
        throw InvalidParameterError(
            "annihilating filter of degree " + std::to_string(n_pulses) +
            " needs at least " + std::to_string(2 * n_pulses + 1) +
            " coefficients, have " + std::to_string(2 * coeffs.bandlimit + 1));
    }
}

bool all_zero(const FourierCoefficients& coeffs) {
    return coeffs.values.cwiseAbs().maxCoeff() == 0.0;
}

} // namespace

FilterKernel build_kernel(const AnalysisConfig& config) {
    config.validate();
    const int m = config.n_bins;
    const double scale = kTwoPi * config.window_spread / m;
    Eigen::VectorXd g(m);
    for (int i = 0; i < m; ++i) {
        const double d = scale * wrapped_distance(i, m);
        g(i) = std::exp(-d * d);
    }
    return finish_kernel(std::move(g), config);
}

FilterKernel build_sst_kernel(double std_bins, const AnalysisConfig& config) {
    config.validate();
    if (!(std_bins > 0.0)) {
        throw InvalidParameterError("kernel standard deviation must be positive");
    }
    const int m = config.n_bins;
    Eigen::VectorXd g(m);
    for (int i = 0; i < m; ++i) {
        const double d = wrapped_distance(i, m) / std_bins;
        g(i) = std::exp(-0.5 * d * d);
    }
    return finish_kernel(std::move(g), config);
}

FourierCoefficients fourier_coefficients(const Eigen::VectorXd& frame,
                                         const FilterKernel& kernel, int frame_index) {
    if (frame.size() != kernel.n_bins) {
        throw InvalidParameterError("frame length does not match the kernel grid");
    }
    const int m = kernel.n_bins;
    const int m0 = kernel.bandlimit;
    const double peak = std::abs(kernel.g_hat(m0));
    Eigen::VectorXcd spectrum(m);
    {
        Eigen::VectorXcd in = frame.cast<Cplx>();
        detail::dft_forward(spectrum, in);
    }
    // The frame is real, so enforce the spectrum's conjugate symmetry
    // exactly; FFT round-off would otherwise be amplified by the division
    // at weak kernel coefficients.
    for (int lambda = 1; lambda <= m0; ++lambda) {
        const Cplx avg = 0.5 * (spectrum(lambda) + std::conj(spectrum(m - lambda)));
        spectrum(lambda) = avg;
        spectrum(m - lambda) = std::conj(avg);
    }
    FourierCoefficients out;
    out.bandlimit = m0;
    out.frame_index = frame_index;
    out.values.resize(2 * m0 + 1);
    for (int lambda = -m0; lambda <= m0; ++lambda) {
        const Cplx ghat = kernel.g_hat(lambda + m0);
        if (std::abs(ghat) < kKernelFloor * peak) {
            throw IllConditionedKernelError(
                "kernel spectrum too small at lambda=" + std::to_string(lambda));
        }
        out.values(lambda + m0) = spectrum((lambda + m) % m) / (static_cast<double>(m) * ghat);
    }
    return out;
}

AnnihilatingFilter prony_filter(const FourierCoefficients& coeffs, int n_pulses) {
    check_pulse_count(coeffs, n_pulses);
    if (all_zero(coeffs)) {
        throw DegenerateSystemError("cannot fit an annihilating filter to all-zero coefficients");
    }
    const int k = n_pulses;
    Eigen::MatrixXcd a(k, k);
    Eigen::VectorXcd rhs(k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            a(i, j) = coeffs(i - j);
        }
        rhs(i) = -coeffs(i + 1);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) {
        throw DegenerateSystemError(
            "Toeplitz system is rank deficient: coincident or missing pulses");
    }
    AnnihilatingFilter filter;
    filter.method = FilterMethod::prony;
    filter.coefficients.resize(k + 1);
    filter.coefficients(0) = 1.0;
    filter.coefficients.tail(k) = qr.solve(rhs);
    return filter;
}

AnnihilatingFilter tls_filter(const FourierCoefficients& coeffs, int n_pulses) {
    check_pulse_count(coeffs, n_pulses);
    const int k = n_pulses;
    const int m0 = coeffs.bandlimit;
    const int rows = 2 * m0 + 1 - k;
    if (rows < k + 1) {
        throw InvalidParameterError("not enough coefficients for a degree-" +
                                    std::to_string(k) + " total-least-squares filter");
    }
    if (all_zero(coeffs)) {
        throw DegenerateSystemError("cannot fit an annihilating filter to all-zero coefficients");
    }
    // Convolution output index l runs over [-M0+K, M0]; row l holds
    // (f_hat(l), f_hat(l-1), ..., f_hat(l-K)).
    Eigen::MatrixXcd a(rows, k + 1);
    for (int r = 0; r < rows; ++r) {
        const int l = -m0 + k + r;
        for (int i = 0; i <= k; ++i) {
            a(r, i) = coeffs(l - i);
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
    AnnihilatingFilter filter;
    filter.method = FilterMethod::tls;
    filter.coefficients = svd.matrixV().col(k);
    return filter;
}

std::vector<double> roots_to_positions(const AnnihilatingFilter& filter, int n_bins,
                                       bool* deduplicated) {
    const int k = filter.degree();
    if (k < 1) {
        throw InvalidParameterError("filter must have positive degree");
    }
    const double scale = filter.coefficients.cwiseAbs().maxCoeff();
    if (scale == 0.0) {
        throw NumericalFailureError("cannot root an all-zero filter");
    }
    const Cplx lead = filter.coefficients(0);
    if (std::abs(lead) < 1e-14 * scale) {
        throw NumericalFailureError("leading filter coefficient underflows; roots escape to infinity");
    }

    std::vector<double> positions;
    positions.reserve(k);
    if (k == 1) {
        const Cplx z = -filter.coefficients(1) / lead;
        if (std::abs(z) < 1e-300) {
            throw NumericalFailureError("filter root collapsed to the origin");
        }
        positions.push_back(std::arg(z));
    } else {
        // Companion matrix of the monic polynomial sum_i (h(i)/h(0)) z^(K-i).
        Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(k, k);
        for (int i = 1; i < k; ++i) {
            companion(i, i - 1) = 1.0;
        }
        for (int i = 0; i < k; ++i) {
            companion(i, k - 1) = -filter.coefficients(k - i) / lead;
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
        if (es.info() != Eigen::Success) {
            throw NumericalFailureError("companion eigenvalue iteration did not converge");
        }
        for (int i = 0; i < k; ++i) {
            const Cplx z = es.eigenvalues()(i);
            if (std::abs(z) < 1e-300) {
                throw NumericalFailureError("filter root collapsed to the origin");
            }
            // Radial projection onto the unit circle keeps only the argument.
            positions.push_back(std::arg(z));
        }
    }

    const double m = static_cast<double>(n_bins);
    for (double& p : positions) {
        p = std::fmod(-m / kTwoPi * p, m);
        if (p < 0.0) {
            p += m;
        }
    }
    std::sort(positions.begin(), positions.end());

    bool spread = false;
    for (std::size_t i = 1; i < positions.size(); ++i) {
        if (positions[i] - positions[i - 1] < kCoincidenceTol) {
            positions[i] = positions[i - 1] + kCoincidenceTol;
            spread = true;
        }
    }
    if (deduplicated != nullptr) {
        *deduplicated = spread;
    }
    return positions;
}

Eigen::VectorXcd solve_amplitudes_raw(const FourierCoefficients& coeffs,
                                      const std::vector<double>& positions, int n_bins) {
    const int k = static_cast<int>(positions.size());
    if (k < 1) {
        throw InvalidParameterError("need at least one position");
    }
    if (coeffs.bandlimit < k - 1) {
        throw InvalidParameterError("not enough coefficients for the amplitude solve");
    }
    // Coincident Vandermonde nodes live on a circle, so compare circularly.
    std::vector<double> sorted = positions;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < k; ++i) {
        const double next = (i + 1 < k) ? sorted[i + 1] : sorted[0] + n_bins;
        if (next - sorted[i] < kCoincidenceTol) {
            throw DegenerateSystemError("pulse positions closer than 1e-6 bins");
        }
    }
    Eigen::MatrixXcd w(k, k);
    Eigen::VectorXcd rhs(k);
    for (int p = 0; p < k; ++p) {
        for (int q = 0; q < k; ++q) {
            const double ang = -kTwoPi * p * positions[q] / n_bins;
            w(p, q) = Cplx(std::cos(ang), std::sin(ang));
        }
        rhs(p) = coeffs(p);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(w);
    qr.setThreshold(1e-12);
    if (qr.rank() < k) {
        throw DegenerateSystemError("amplitude Vandermonde system is rank deficient");
    }
    return qr.solve(rhs);
}

std::vector<double> solve_amplitudes(const FourierCoefficients& coeffs,
                                     const std::vector<double>& positions, int n_bins) {
    const Eigen::VectorXcd raw = solve_amplitudes_raw(coeffs, positions, n_bins);
    std::vector<double> weights(raw.size());
    for (int i = 0; i < raw.size(); ++i) {
        weights[i] = std::max(0.0, raw(i).real());
    }
    return weights;
}

DiracStream recover_frame(const Eigen::VectorXd& frame, const FilterKernel& kernel,
                          int n_pulses, FilterMethod method, RecoveryTrace* trace) {
    const FourierCoefficients coeffs = fourier_coefficients(frame, kernel);
    const AnnihilatingFilter filter = (method == FilterMethod::prony)
                                          ? prony_filter(coeffs, n_pulses)
                                          : tls_filter(coeffs, n_pulses);
    if (trace != nullptr) {
        trace->coefficients = coeffs;
        trace->filter = filter;
    }
    DiracStream stream;
    stream.positions = roots_to_positions(filter, kernel.n_bins, &stream.warned);
    stream.weights = solve_amplitudes(coeffs, stream.positions, kernel.n_bins);
    return stream;
}

} // namespace friridge
