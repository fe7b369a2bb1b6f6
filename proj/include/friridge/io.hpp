#ifndef FRIRIDGE_IO_HPP
#define FRIRIDGE_IO_HPP

#include <map>
#include <string>

#include <Eigen/Core>

#include "friridge/ridge.hpp"
#include "friridge/signal.hpp"

namespace friridge {

/// Two-column CSV (real, imaginary), one sample per line, written with
/// round-trip precision.
void write_signal_csv(const std::string& path, const Signal& x);
Signal read_signal_csv(const std::string& path);

/// Mono WAV holding the real part as IEEE float32 samples.
void write_wav(const std::string& path, const Signal& x, int sample_rate = 16000);

/// Loads a mono WAV (PCM16 or float32) and analytically extends it by
/// discarding negative frequencies, so the result matches the complex
/// signal model used everywhere else.
Signal read_wav_analytic(const std::string& path);

/// Ground-truth sidecar in long form: frame,component,if_normalized,amplitude.
struct GroundTruthTable {
    Eigen::MatrixXd if_normalized; // K x N
    Eigen::MatrixXd amplitude;     // K x N
};
void write_truth_csv(const std::string& path, const Signal& x);
GroundTruthTable read_truth_csv(const std::string& path);

/// Trajectory export: frame,component,if_bins,if_normalized,amplitude,flag.
std::string render_trajectories_csv(const RidgeTrajectories& traj, int n_bins);
void write_trajectories_csv(const std::string& path, const RidgeTrajectories& traj, int n_bins);

/// TFR dumps: CSV with one row per time frame, and a textual grayscale
/// image (plain PGM, frequency along rows) for quick inspection.
void write_tfr_csv(const std::string& path, const Eigen::MatrixXd& values);
void write_tfr_pgm(const std::string& path, const Eigen::MatrixXd& values);

/// Key-value config format: one `key = value` per line, '#' comments.
std::map<std::string, std::string> read_key_value_file(const std::string& path);

/// Writes content to path, creating parent directories as needed.
void write_text_file(const std::string& path, const std::string& content);

} // namespace friridge

#endif // FRIRIDGE_IO_HPP
