#include "friridge/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "dft.hpp"
#include "friridge/errors.hpp"

namespace friridge {

namespace {

std::string fmt(double v, const char* spec = "%.17g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(p, mode);
    if (!out) {
        throw InvalidParameterError("cannot open " + path + " for writing");
    }
    return out;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) {
        throw InvalidParameterError("cannot open " + path);
    }
    return in;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) {
        return {};
    }
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

const char* flag_name(FrameStatus status) {
    switch (status) {
    case FrameStatus::ok:
        return "ok";
    case FrameStatus::degenerate:
        return "degenerate";
    case FrameStatus::warned:
        return "warned";
    }
    return "unknown";
}

} // namespace

void write_signal_csv(const std::string& path, const Signal& x) {
    std::ostringstream out;
    out << "real,imag\n";
    for (const auto& s : x.samples) {
        out << fmt(s.real()) << ',' << fmt(s.imag()) << '\n';
    }
    write_text_file(path, out.str());
}

Signal read_signal_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    Signal x;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (first) {
            first = false;
            if (line.find("real") != std::string::npos) {
                continue; // header
            }
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw InvalidParameterError(path + ": expected two comma-separated columns");
        }
        try {
            x.samples.emplace_back(std::stod(line.substr(0, comma)),
                                   std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw InvalidParameterError(path + ": malformed sample line '" + line + "'");
        }
    }
    if (x.samples.empty()) {
        throw InvalidParameterError(path + ": no samples");
    }
    return x;
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(b, 4);
}

void put_u16(std::ostream& out, std::uint16_t v) {
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
    out.write(b, 2);
}

std::uint32_t get_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t get_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

} // namespace

void write_wav(const std::string& path, const Signal& x, int sample_rate) {
    if (sample_rate <= 0) {
        throw InvalidParameterError("sample rate must be positive");
    }
    std::ofstream out = open_out(path, std::ios::binary);
    const std::uint32_t n = static_cast<std::uint32_t>(x.size());
    const std::uint32_t data_bytes = n * 4;
    out.write("RIFF", 4);
    put_u32(out, 36 + data_bytes);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(out, 16);
    put_u16(out, 3); // IEEE float
    put_u16(out, 1); // mono
    put_u32(out, static_cast<std::uint32_t>(sample_rate));
    put_u32(out, static_cast<std::uint32_t>(sample_rate) * 4);
    put_u16(out, 4);
    put_u16(out, 32);
    out.write("data", 4);
    put_u32(out, data_bytes);
    for (const auto& s : x.samples) {
        const float v = static_cast<float>(s.real());
        char b[4];
        std::memcpy(b, &v, 4);
        out.write(b, 4);
    }
}

Signal read_wav_analytic(const std::string& path) {
    std::ifstream in = open_in(path, std::ios::binary);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw InvalidParameterError(path + ": not a RIFF/WAVE file");
    }
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint16_t bits = 0;
    const unsigned char* data = nullptr;
    std::uint32_t data_len = 0;
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint32_t chunk_len = get_u32(bytes.data() + pos + 4);
        if (std::memcmp(bytes.data() + pos, "fmt ", 4) == 0 && chunk_len >= 16) {
            format = get_u16(bytes.data() + pos + 8);
            channels = get_u16(bytes.data() + pos + 10);
            bits = get_u16(bytes.data() + pos + 22);
        } else if (std::memcmp(bytes.data() + pos, "data", 4) == 0) {
            data = bytes.data() + pos + 8;
            data_len = std::min<std::uint32_t>(chunk_len,
                                               static_cast<std::uint32_t>(bytes.size() - pos - 8));
        }
        pos += 8 + chunk_len + (chunk_len & 1);
    }
    if (data == nullptr) {
        throw InvalidParameterError(path + ": missing data chunk");
    }
    if (channels != 1) {
        throw InvalidParameterError(path + ": only mono WAV input is supported");
    }

    std::vector<double> samples;
    if (format == 1 && bits == 16) {
        samples.reserve(data_len / 2);
        for (std::uint32_t i = 0; i + 1 < data_len; i += 2) {
            const std::int16_t v = static_cast<std::int16_t>(data[i] | (data[i + 1] << 8));
            samples.push_back(v / 32768.0);
        }
    } else if (format == 3 && bits == 32) {
        samples.reserve(data_len / 4);
        for (std::uint32_t i = 0; i + 3 < data_len; i += 4) {
            float v;
            std::memcpy(&v, data + i, 4);
            samples.push_back(v);
        }
    } else {
        throw InvalidParameterError(path + ": unsupported WAV encoding (need PCM16 or float32)");
    }
    if (samples.empty()) {
        throw InvalidParameterError(path + ": no samples");
    }

    // Analytic extension: zero the negative-frequency half, double the rest.
    const int n = static_cast<int>(samples.size());
    Eigen::VectorXcd time(n);
    for (int i = 0; i < n; ++i) {
        time(i) = samples[i];
    }
    Eigen::VectorXcd spec(n);
    detail::dft_forward(spec, time);
    for (int k = 1; k < (n + 1) / 2; ++k) {
        spec(k) *= 2.0;
    }
    for (int k = n / 2 + 1; k < n; ++k) {
        spec(k) = 0.0;
    }
    Eigen::VectorXcd analytic(n);
    detail::dft_inverse(analytic, spec);
    Signal x;
    x.samples.assign(analytic.data(), analytic.data() + n);
    return x;
}

void write_truth_csv(const std::string& path, const Signal& x) {
    if (x.ground_truth.empty()) {
        throw InvalidParameterError("signal carries no ground truth to export");
    }
    std::ostringstream out;
    out << "frame,component,if_normalized,amplitude\n";
    for (std::size_t k = 0; k < x.ground_truth.size(); ++k) {
        const Component& c = x.ground_truth[k];
        for (int n = 0; n < c.size(); ++n) {
            out << n << ',' << k << ',' << fmt(c.inst_freq[n]) << ',' << fmt(c.amplitude[n])
                << '\n';
        }
    }
    write_text_file(path, out.str());
}

GroundTruthTable read_truth_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    std::vector<std::vector<double>> freqs;
    std::vector<std::vector<double>> amps;
    bool first = true;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (first) {
            first = false;
            if (line.find("frame") != std::string::npos) {
                continue;
            }
        }
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != 4) {
            throw InvalidParameterError(path + ": expected 4 columns, got line '" + line + "'");
        }
        const int frame = std::stoi(cells[0]);
        const std::size_t comp = static_cast<std::size_t>(std::stoi(cells[1]));
        if (comp >= freqs.size()) {
            freqs.resize(comp + 1);
            amps.resize(comp + 1);
        }
        if (frame != static_cast<int>(freqs[comp].size())) {
            throw InvalidParameterError(path + ": frames of component " +
                                        std::to_string(comp) + " are not contiguous");
        }
        freqs[comp].push_back(std::stod(cells[2]));
        amps[comp].push_back(std::stod(cells[3]));
    }
    if (freqs.empty()) {
        throw InvalidParameterError(path + ": no rows");
    }
    const std::size_t n = freqs.front().size();
    for (const auto& f : freqs) {
        if (f.size() != n) {
            throw InvalidParameterError(path + ": components have mismatched lengths");
        }
    }
    GroundTruthTable table;
    table.if_normalized.resize(freqs.size(), n);
    table.amplitude.resize(freqs.size(), n);
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            table.if_normalized(k, i) = freqs[k][i];
            table.amplitude(k, i) = amps[k][i];
        }
    }
    return table;
}

std::string render_trajectories_csv(const RidgeTrajectories& traj, int n_bins) {
    std::ostringstream out;
    out << "frame,component,if_bins,if_normalized,amplitude,flag\n";
    for (int n = 0; n < traj.n_frames(); ++n) {
        for (int k = 0; k < traj.n_components(); ++k) {
            const double bins = traj.if_bins(k, n);
            out << n << ',' << k << ',' << fmt(bins, "%.12g") << ','
                << fmt(bins / n_bins, "%.12g") << ',' << fmt(traj.amplitude(k, n), "%.12g")
                << ',' << flag_name(traj.frame_status[n]) << '\n';
        }
    }
    return out.str();
}

void write_trajectories_csv(const std::string& path, const RidgeTrajectories& traj,
                            int n_bins) {
    write_text_file(path, render_trajectories_csv(traj, n_bins));
}

void write_tfr_csv(const std::string& path, const Eigen::MatrixXd& values) {
    std::ostringstream out;
    for (int n = 0; n < values.rows(); ++n) {
        for (int m = 0; m < values.cols(); ++m) {
            if (m > 0) {
                out << ',';
            }
            out << fmt(values(n, m), "%.9g");
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

void write_tfr_pgm(const std::string& path, const Eigen::MatrixXd& values) {
    // Plain (ASCII) PGM, frequency on the vertical axis, log-compressed.
    const int rows = static_cast<int>(values.cols());
    const int cols = static_cast<int>(values.rows());
    const double peak = values.maxCoeff();
    const double floor_db = -60.0;
    std::ostringstream out;
    out << "P2\n" << cols << ' ' << rows << "\n255\n";
    for (int m = rows - 1; m >= 0; --m) {
        for (int n = 0; n < cols; ++n) {
            int level = 0;
            if (peak > 0.0 && values(n, m) > 0.0) {
                const double db = 10.0 * std::log10(values(n, m) / peak);
                level = static_cast<int>(std::lround(255.0 * std::clamp(1.0 - db / floor_db, 0.0, 1.0)));
            }
            out << level << (n + 1 < cols ? ' ' : '\n');
        }
    }
    write_text_file(path, out.str());
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
    std::ifstream in = open_in(path);
    std::map<std::string, std::string> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InvalidParameterError(path + ":" + std::to_string(line_no) +
                                        ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw InvalidParameterError(path + ":" + std::to_string(line_no) + ": empty key");
        }
        entries[key] = trim(line.substr(eq + 1));
    }
    return entries;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out = open_out(path, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw InvalidParameterError("failed writing " + path);
    }
}

} // namespace friridge
