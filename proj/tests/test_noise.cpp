#include <cmath>
#include <vector>

#include "doctest.h"
#include "lumen/noise.hpp"

using namespace lumen;

namespace {

NoiseConfig gigahertz_config() {
    NoiseConfig cfg;
    cfg.enabled = true;
    cfg.delta_f = 1e9;
    cfg.noise_scale = 1.0;
    cfg.photodiode.dark_current = 0.0;
    cfg.photodiode.shunt_resistance = 10e3;
    cfg.photodiode.temperature = 300.0;
    return cfg;
}

}  // namespace

TEST_CASE("shot noise sigma spot values") {
    CHECK(shot_noise_sigma(0.0, 0.0, 1e9) == 0.0);
    CHECK(shot_noise_sigma(1e-3, 0.0, 0.0) == 0.0);
    CHECK(shot_noise_sigma(1e-3, 0.0, 1e9) == doctest::Approx(5.661e-7).epsilon(1e-3));
}

TEST_CASE("thermal noise sigma spot values and sqrt scaling") {
    CHECK(thermal_noise_sigma(300.0, 0.0, 10e3) == 0.0);
    CHECK(thermal_noise_sigma(300.0, 1e9, 10e3) == doctest::Approx(4.070e-8).epsilon(1e-3));
    const double s1 = thermal_noise_sigma(300.0, 2.5e8, 10e3);
    const double s4 = thermal_noise_sigma(300.0, 1e9, 10e3);
    CHECK(s4 == doctest::Approx(2.0 * s1).epsilon(1e-12));
}

TEST_CASE("total sigma scales as sqrt(bandwidth)") {
    NoiseConfig cfg = gigahertz_config();
    const double s1 = total_noise_sigma(1e-4, cfg);
    cfg.delta_f *= 4.0;
    const double s2 = total_noise_sigma(1e-4, cfg);
    CHECK(s2 == doctest::Approx(2.0 * s1).epsilon(1e-12));
}

TEST_CASE("disabled noise and zero bandwidth are exact identities") {
    const RngStream rng{42};
    NoiseConfig cfg = gigahertz_config();
    cfg.enabled = false;
    CHECK(sample_noisy_current(1.25e-3, cfg, rng, 0, 0, 0) == 1.25e-3);

    cfg.enabled = true;
    cfg.delta_f = 0.0;
    CHECK(sample_noisy_current(1.25e-3, cfg, rng, 0, 0, 0) == 1.25e-3);
}

TEST_CASE("fixed coordinates give bit-identical draws") {
    const RngStream a{123};
    const RngStream b{123};
    const NoiseConfig cfg = gigahertz_config();
    for (std::uint64_t i = 0; i < 100; ++i) {
        CHECK(sample_noisy_current(1e-3, cfg, a, i, 7, 3) ==
              sample_noisy_current(1e-3, cfg, b, i, 7, 3));
    }
    // different seed, different sequence
    const RngStream c{124};
    int differing = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        differing += sample_noisy_current(1e-3, cfg, a, i, 7, 3) !=
                             sample_noisy_current(1e-3, cfg, c, i, 7, 3)
                         ? 1
                         : 0;
    }
    CHECK(differing == 100);
}

TEST_CASE("sampled mean and standard deviation match the configured sigma") {
    const RngStream rng{2025};
    const NoiseConfig cfg = gigahertz_config();
    const double i_ph = 1e-3;
    const double sigma = total_noise_sigma(i_ph, cfg);

    const std::size_t n = 1000000;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = sample_noisy_current(i_ph, cfg, rng, i, 0, 0) - i_ph;
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / n;
    const double stdev = std::sqrt(sumsq / n - mean * mean);
    CHECK(std::abs(mean) <= 5.0 * sigma / std::sqrt(static_cast<double>(n)));
    CHECK(stdev == doctest::Approx(sigma).epsilon(0.01));
}

TEST_CASE("draws at disjoint node coordinates are uncorrelated") {
    const RngStream rng{7};
    const std::size_t n = 100000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.normal(i, 1, 0);
        const double y = rng.normal(i, 2, 0);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double mx = sx / n, my = sy / n;
    const double cov = sxy / n - mx * my;
    const double vx = sxx / n - mx * mx, vy = syy / n - my * my;
    const double rho = cov / std::sqrt(vx * vy);
    CHECK(std::abs(rho) < 0.01);
}
