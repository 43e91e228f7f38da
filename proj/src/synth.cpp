#include "lumen/synth.hpp"

#include <algorithm>
#include <cmath>

#include "lumen/idx.hpp"
#include "lumen/rng.hpp"

namespace lumen {

namespace {

constexpr int kImage = 28;
constexpr int kGlyphW = 5;
constexpr int kGlyphH = 7;

// 5x7 digit glyphs, one row per string.
constexpr const char* kGlyphs[10][kGlyphH] = {
    {"01110", "10001", "10011", "10101", "11001", "10001", "01110"},
    {"00100", "01100", "00100", "00100", "00100", "00100", "01110"},
    {"01110", "10001", "00001", "00010", "00100", "01000", "11111"},
    {"11111", "00010", "00100", "00010", "00001", "10001", "01110"},
    {"00010", "00110", "01010", "10010", "11111", "00010", "00010"},
    {"11111", "10000", "11110", "00001", "00001", "10001", "01110"},
    {"00110", "01000", "10000", "11110", "10001", "10001", "01110"},
    {"11111", "00001", "00010", "00100", "01000", "01000", "01000"},
    {"01110", "10001", "10001", "01110", "10001", "10001", "01110"},
    {"01110", "10001", "10001", "01111", "00001", "00010", "01100"}};

double glyph_bilinear(int digit, double col, double row) {
    const int c0 = static_cast<int>(std::floor(col));
    const int r0 = static_cast<int>(std::floor(row));
    const double fc = col - c0;
    const double fr = row - r0;
    const auto mask = [&](int r, int c) -> double {
        if (r < 0 || r >= kGlyphH || c < 0 || c >= kGlyphW) return 0.0;
        return kGlyphs[digit][r][c] == '1' ? 1.0 : 0.0;
    };
    return mask(r0, c0) * (1 - fr) * (1 - fc) + mask(r0, c0 + 1) * (1 - fr) * fc +
           mask(r0 + 1, c0) * fr * (1 - fc) + mask(r0 + 1, c0 + 1) * fr * fc;
}

}  // namespace

SynthDigits make_synthetic_digits(std::size_t count, std::uint64_t seed) {
    const RngStream rng{seed};
    SynthDigits out;
    out.pixels.resize(count * kImage * kImage);
    out.labels.resize(count);

    for (std::size_t i = 0; i < count; ++i) {
        const int digit = static_cast<int>(i % 10);
        out.labels[i] = static_cast<std::uint8_t>(digit);

        const double shift_x = 5.0 * (rng.uniform(i, 0, 0) - 0.5);
        const double shift_y = 5.0 * (rng.uniform(i, 0, 1) - 0.5);
        const double angle = 0.55 * (rng.uniform(i, 0, 2) - 0.5);
        const double cell = 2.8 * (0.75 + 0.55 * rng.uniform(i, 0, 3));  // px per glyph cell
        const double brightness = 0.70 + 0.30 * rng.uniform(i, 0, 4);
        const double ca = std::cos(angle), sa = std::sin(angle);

        std::uint8_t* img = &out.pixels[i * kImage * kImage];
        for (int y = 0; y < kImage; ++y) {
            for (int x = 0; x < kImage; ++x) {
                const double dx = x + 0.5 - kImage / 2.0 - shift_x;
                const double dy = y + 0.5 - kImage / 2.0 - shift_y;
                const double gx = (ca * dx + sa * dy) / cell + kGlyphW / 2.0 - 0.5;
                const double gy = (-sa * dx + ca * dy) / cell + kGlyphH / 2.0 - 0.5;
                double v = brightness * glyph_bilinear(digit, gx, gy);
                // per-pixel sensor-style noise
                v += 0.06 * (rng.uniform(i, 1, static_cast<std::uint64_t>(y * kImage + x)) - 0.5);
                img[y * kImage + x] =
                    static_cast<std::uint8_t>(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5);
            }
        }
    }
    return out;
}

void write_synthetic_digits(const std::filesystem::path& images_path,
                            const std::filesystem::path& labels_path, std::size_t count,
                            std::uint64_t seed) {
    const SynthDigits d = make_synthetic_digits(count, seed);
    write_idx_images(images_path, count, kImage, kImage, d.pixels);
    write_idx_labels(labels_path, d.labels);
}

}  // namespace lumen
