#pragma once

#include <cstdint>

#include "lumen/devices.hpp"
#include "lumen/rng.hpp"

namespace lumen {

// Detector-noise settings. noise_scale = 1 is the physical magnitude; the
// knob exists for accuracy-degradation sweeps.
struct NoiseConfig {
    bool enabled = false;
    double delta_f = 0.0;      // detection bandwidth [Hz]
    double noise_scale = 1.0;  // dimensionless multiplier, >= 0
    PhotodiodeParams photodiode;

    void validate() const;
};

// sqrt(2 q (I_ph + I_D) delta_f)
double shot_noise_sigma(double i_ph, double i_dark, double delta_f);

// sqrt(4 k_B T delta_f / R_SH)
double thermal_noise_sigma(double temperature, double delta_f, double shunt_resistance);

// Quadrature sum of shot and thermal sigmas; shot noise uses |i_ph| since
// balanced detection can yield negative net current.
double total_noise_sigma(double i_ph, const NoiseConfig& cfg);

// i_ph + noise_scale * sigma_total * g with g drawn at the given stream
// coordinates. Disabled noise or zero bandwidth returns i_ph unchanged.
double sample_noisy_current(double i_ph, const NoiseConfig& cfg, const RngStream& rng,
                            std::uint64_t sample_index, std::uint64_t node_id,
                            std::uint64_t draw_counter);

}  // namespace lumen
