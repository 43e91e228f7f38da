#include "lumen/rng.hpp"

#include <cmath>

#include "lumen/constants.hpp"

namespace lumen {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t absorb(std::uint64_t h, std::uint64_t v) {
    return mix64((h + kGolden) ^ v);
}

std::uint64_t key_for(std::uint64_t seed, std::uint64_t sample, std::uint64_t node,
                      std::uint64_t counter) {
    std::uint64_t h = mix64(seed);
    h = absorb(h, sample);
    h = absorb(h, node);
    h = absorb(h, counter);
    return h;
}

// 53-bit mantissa in [0, 1)
double to_unit(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ull;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBull;
    x ^= x >> 31;
    return x;
}

double RngStream::uniform(std::uint64_t sample_index, std::uint64_t node_id,
                          std::uint64_t draw_counter) const {
    return to_unit(key_for(global_seed, sample_index, node_id, draw_counter));
}

double RngStream::normal(std::uint64_t sample_index, std::uint64_t node_id,
                         std::uint64_t draw_counter) const {
    const std::uint64_t k = key_for(global_seed, sample_index, node_id, draw_counter);
    const std::uint64_t a = mix64(k ^ 0xD6E8FEB86659FD93ull);
    const std::uint64_t b = mix64(k ^ 0xA5A5A5A5A5A5A5A5ull);
    // u1 in (0, 1] so the log is finite
    const double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;
    const double u2 = to_unit(b);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * constants::pi * u2);
}

}  // namespace lumen
