#ifndef FRIRIDGE_SRC_DFT_HPP
#define FRIRIDGE_SRC_DFT_HPP

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

namespace friridge::detail {

/// out(k) = sum_m in(m) exp(-2*pi*j*k*m/M). Plans are cached per thread.
inline void dft_forward(Eigen::VectorXcd& out, const Eigen::VectorXcd& in) {
    thread_local Eigen::FFT<double> fft;
    fft.fwd(out, in);
}

/// out(k) = (1/M) sum_m in(m) exp(2*pi*j*k*m/M).
inline void dft_inverse(Eigen::VectorXcd& out, const Eigen::VectorXcd& in) {
    thread_local Eigen::FFT<double> fft;
    fft.inv(out, in);
}

} // namespace friridge::detail

#endif // FRIRIDGE_SRC_DFT_HPP
