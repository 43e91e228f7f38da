#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace lumen {

// Procedurally rendered 28x28 digit corpus in canonical IDX files: balanced
// labels, jittered glyphs (shift/rotation/scale/brightness) plus pixel
// noise. Stands in for handwriting corpora where none is available and
// doubles as a parser fixture. Deterministic for a fixed seed.
struct SynthDigits {
    std::vector<std::uint8_t> pixels;  // count * 28 * 28
    std::vector<std::uint8_t> labels;
};

SynthDigits make_synthetic_digits(std::size_t count, std::uint64_t seed);

void write_synthetic_digits(const std::filesystem::path& images_path,
                            const std::filesystem::path& labels_path, std::size_t count,
                            std::uint64_t seed);

}  // namespace lumen
