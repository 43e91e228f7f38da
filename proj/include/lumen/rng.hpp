#pragma once

#include <cstdint>

namespace lumen {

// Counter-based randomness: every draw is a pure function of
// (global_seed, sample_index, node_id, draw_counter). Identical coordinates
// give identical values for any evaluation order or worker count.
struct RngStream {
    std::uint64_t global_seed = 0;

    // uniform in [0, 1)
    double uniform(std::uint64_t sample_index, std::uint64_t node_id,
                   std::uint64_t draw_counter) const;

    // standard normal (Box-Muller)
    double normal(std::uint64_t sample_index, std::uint64_t node_id,
                  std::uint64_t draw_counter) const;
};

// splitmix64 finalizer; the building block for coordinate hashing.
std::uint64_t mix64(std::uint64_t x);

}  // namespace lumen
