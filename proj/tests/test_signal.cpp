#include <cmath>
#include <complex>
#include <limits>

#include <doctest.h>

#include "friridge/errors.hpp"
#include "friridge/rng.hpp"
#include "friridge/signal.hpp"

using namespace friridge;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE_BEGIN("signal");

TEST_CASE("sinusoid has constant frequency and linear phase") {
    const Component c = make_sinusoid(500, 0.1, 1.0);
    for (int n = 0; n < 500; ++n) {
        CHECK(c.inst_freq[n] == 0.1);
    }
    CHECK(c.phase[250] == doctest::Approx(25.0));
    CHECK(c.amplitude[123] == 1.0);
}

TEST_CASE("sinusoid rejects out-of-range frequency") {
    CHECK_THROWS_AS(make_sinusoid(100, 0.0, 1.0), InvalidParameterError);
    CHECK_THROWS_AS(make_sinusoid(100, 0.5, 1.0), InvalidParameterError);
    CHECK_THROWS_AS(make_sinusoid(100, -0.1, 1.0), InvalidParameterError);
    CHECK_THROWS_AS(make_sinusoid(0, 0.1, 1.0), InvalidParameterError);
}

TEST_CASE("quarter-band sinusoid samples are the fourth roots of unity") {
    const Signal x = synthesize({make_sinusoid(4, 0.25, 1.0)});
    REQUIRE(x.size() == 4);
    const std::complex<double> expected[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (int n = 0; n < 4; ++n) {
        CHECK(std::abs(x.samples[n] - expected[n]) < 1e-12);
    }
}

TEST_CASE("chirp endpoints and degenerate case") {
    const Component c = make_linear_chirp(500, 0.1, 0.3, 1.0);
    CHECK(c.inst_freq[0] == doctest::Approx(0.1));
    CHECK(c.inst_freq[499] == doctest::Approx(0.3));

    const Component flat = make_linear_chirp(500, 0.2, 0.2, 1.0);
    const Component sine = make_sinusoid(500, 0.2, 1.0);
    for (int n = 0; n < 500; ++n) {
        CHECK(flat.inst_freq[n] == sine.inst_freq[n]);
        CHECK(flat.phase[n] == sine.phase[n]);
    }
}

TEST_CASE("chirp frequency matches the central difference of its phase") {
    const Component c = make_linear_chirp(500, 0.1, 0.3, 1.0);
    for (int n = 1; n < 499; ++n) {
        const double diff = 0.5 * (c.phase[n + 1] - c.phase[n - 1]);
        CHECK(std::abs(diff - c.inst_freq[n]) < 1e-6);
    }
}

TEST_CASE("sinusoidal FM stays inside its band and matches its phase") {
    const Component c = make_sin_fm(500, 0.25, 0.05, 0.004, 1.0);
    for (int n = 0; n < 500; ++n) {
        CHECK(c.inst_freq[n] >= 0.2 - 1e-12);
        CHECK(c.inst_freq[n] <= 0.3 + 1e-12);
    }
    for (int n = 1; n < 499; ++n) {
        const double diff = 0.5 * (c.phase[n + 1] - c.phase[n - 1]);
        CHECK(std::abs(diff - c.inst_freq[n]) < 1e-5);
    }
}

TEST_CASE("sinusoidal FM degenerates to a sinusoid when the deviation vanishes") {
    const Component fm = make_sin_fm(500, 0.25, 0.0, 0.01, 1.0);
    const Component sine = make_sinusoid(500, 0.25, 1.0);
    for (int n = 0; n < 500; ++n) {
        CHECK(fm.phase[n] == sine.phase[n]);
    }
}

TEST_CASE("sinusoidal FM rejects excursions leaving the band") {
    CHECK_THROWS_AS(make_sin_fm(500, 0.45, 0.1, 0.004, 1.0), InvalidParameterError);
    CHECK_THROWS_AS(make_sin_fm(500, 0.05, 0.06, 0.004, 1.0), InvalidParameterError);
}

TEST_CASE("every generator keeps the forward phase difference near the frequency") {
    const Component gens[] = {make_sinusoid(500, 0.1), make_linear_chirp(500, 0.15, 0.35),
                              make_sin_fm(500, 0.35, 0.04, 0.004)};
    for (const Component& c : gens) {
        for (int n = 0; n + 1 < c.size(); ++n) {
            CHECK(std::abs(c.inst_freq[n] - (c.phase[n + 1] - c.phase[n])) <= 1e-3);
        }
    }
}

TEST_CASE("synthesize of an empty list is the zero signal") {
    const Signal x = synthesize({}, 32);
    REQUIRE(x.size() == 32);
    for (const auto& s : x.samples) {
        CHECK(s == std::complex<double>(0.0, 0.0));
    }
    CHECK_THROWS_AS(synthesize({}), InvalidParameterError);
}

TEST_CASE("synthesize is linear") {
    const Component a = make_sinusoid(200, 0.1, 1.5);
    const Component b = make_linear_chirp(200, 0.2, 0.3, 0.7);
    const Signal xa = synthesize({a});
    const Signal xb = synthesize({b});
    const Signal xab = synthesize({a, b});
    for (int n = 0; n < 200; ++n) {
        CHECK(xab.samples[n] == xa.samples[n] + xb.samples[n]);
    }

    const Signal twice = synthesize({a, a});
    for (int n = 0; n < 200; ++n) {
        CHECK(std::abs(twice.samples[n] - 2.0 * xa.samples[n]) < 1e-15);
    }
}

TEST_CASE("synthesize rejects mismatched lengths") {
    CHECK_THROWS_AS(synthesize({make_sinusoid(100, 0.1), make_sinusoid(101, 0.2)}),
                    InvalidParameterError);
}

TEST_CASE("noiseless sentinel returns the input unchanged") {
    const Signal x = synthesize({make_sinusoid(100, 0.1)});
    const Signal y = add_noise(x, kInf, 42);
    for (int n = 0; n < 100; ++n) {
        CHECK(y.samples[n] == x.samples[n]);
    }
}

TEST_CASE("noise is deterministic in the seed") {
    const Signal x = synthesize({make_sinusoid(256, 0.2)});
    const Signal a = add_noise(x, 5.0, 1234);
    const Signal b = add_noise(x, 5.0, 1234);
    const Signal c = add_noise(x, 5.0, 1235);
    int distinct = 0;
    for (int n = 0; n < 256; ++n) {
        CHECK(a.samples[n] == b.samples[n]);
        distinct += a.samples[n] != c.samples[n];
    }
    CHECK(distinct > 0);
}

TEST_CASE("noise rejects zero-energy input") {
    const Signal zero = synthesize({}, 16);
    CHECK_THROWS_AS(add_noise(zero, 10.0, 1), InvalidParameterError);
}

TEST_CASE("analytic projection keeps model signals and halves white noise") {
    const Signal x = synthesize({make_sinusoid(500, 0.1), make_linear_chirp(500, 0.2, 0.3)});
    const Signal p = analytic_projection(x);
    double diff = 0.0;
    for (int n = 0; n < 500; ++n) {
        diff += std::norm(p.samples[n] - x.samples[n]);
    }
    CHECK(diff < 1e-2 * energy(x)); // only spectral leakage is clipped

    const Signal pp = analytic_projection(p);
    for (int n = 0; n < 500; ++n) {
        CHECK(std::abs(pp.samples[n] - p.samples[n]) < 1e-12);
    }
}

TEST_CASE("analytic projection halves broadband noise energy") {
    double ratio_sum = 0.0;
    const int n_seeds = 20;
    for (int seed = 0; seed < n_seeds; ++seed) {
        Rng rng(500 + seed);
        Signal noise;
        noise.samples.resize(400);
        for (auto& s : noise.samples) {
            s = rng.complex_normal();
        }
        ratio_sum += energy(analytic_projection(noise)) / energy(noise);
    }
    CHECK(ratio_sum / n_seeds == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("realized SNR is calibrated") {
    const Signal x = synthesize({make_sinusoid(500, 0.1)});
    const double ex = energy(x);
    double mean_db = 0.0;
    double pooled_noise = 0.0;
    const int n_seeds = 100;
    for (int seed = 0; seed < n_seeds; ++seed) {
        const Signal y = add_noise(x, 0.0, 9000 + seed);
        double noise_energy = 0.0;
        for (int n = 0; n < x.size(); ++n) {
            noise_energy += std::norm(y.samples[n] - x.samples[n]);
        }
        mean_db += 10.0 * std::log10(ex / noise_energy);
        pooled_noise += noise_energy;
    }
    mean_db /= n_seeds;
    CHECK(std::abs(mean_db) <= 0.2);
    // realized SNR pooled over the whole ensemble
    CHECK(std::abs(10.0 * std::log10(n_seeds * ex / pooled_noise)) <= 0.5);
}

TEST_SUITE_END();
