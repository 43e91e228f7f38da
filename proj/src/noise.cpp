#include "lumen/noise.hpp"

#include <cmath>

#include "lumen/constants.hpp"
#include "lumen/error.hpp"

namespace lumen {

void NoiseConfig::validate() const {
    if (delta_f < 0.0) throw ConfigError("noise: bandwidth delta_f must be nonnegative");
    if (noise_scale < 0.0) throw ConfigError("noise: noise_scale must be nonnegative");
    photodiode.validate();
}

double shot_noise_sigma(double i_ph, double i_dark, double delta_f) {
    return std::sqrt(2.0 * constants::q * (i_ph + i_dark) * delta_f);
}

double thermal_noise_sigma(double temperature, double delta_f, double shunt_resistance) {
    return std::sqrt(4.0 * constants::k_b * temperature * delta_f / shunt_resistance);
}

double total_noise_sigma(double i_ph, const NoiseConfig& cfg) {
    const double sn = shot_noise_sigma(std::abs(i_ph), cfg.photodiode.dark_current, cfg.delta_f);
    const double tn = thermal_noise_sigma(cfg.photodiode.temperature, cfg.delta_f,
                                          cfg.photodiode.shunt_resistance);
    return std::sqrt(sn * sn + tn * tn);
}

double sample_noisy_current(double i_ph, const NoiseConfig& cfg, const RngStream& rng,
                            std::uint64_t sample_index, std::uint64_t node_id,
                            std::uint64_t draw_counter) {
    if (!cfg.enabled || cfg.delta_f == 0.0 || cfg.noise_scale == 0.0) return i_ph;
    const double sigma = total_noise_sigma(i_ph, cfg);
    return i_ph + cfg.noise_scale * sigma * rng.normal(sample_index, node_id, draw_counter);
}

}  // namespace lumen
