#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lumen/engine.hpp"
#include "lumen/error.hpp"

namespace lumen {

enum class IdxErrorKind { kIo, kWrongMagic, kTruncated, kCountMismatch };

std::string to_string(IdxErrorKind k);

class IdxError : public DataError {
public:
    IdxError(IdxErrorKind kind, std::size_t offset, const std::string& msg)
        : DataError(msg), kind_(kind), offset_(offset) {}

    IdxErrorKind kind() const { return kind_; }
    std::size_t offset() const { return offset_; }

private:
    IdxErrorKind kind_;
    std::size_t offset_;
};

// Image/label pair parsed from big-endian IDX files (magic 0x00000803 for
// images, 0x00000801 for labels). Pixels are stored scaled to [0,1].
struct IdxDataset {
    std::size_t count = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> pixels;        // count * rows * cols, pixel / 255
    std::vector<std::uint8_t> labels;  // one per image

    // flat = {rows*cols} inputs for MLPs, otherwise {rows, cols, 1}.
    Dataset to_dataset(bool flat, std::size_t limit = 0) const;
};

IdxDataset load_idx(const std::filesystem::path& images_path,
                    const std::filesystem::path& labels_path);

// Canonical writers, used for fixtures and synthetic corpora.
void write_idx_images(const std::filesystem::path& path, std::size_t count, std::size_t rows,
                      std::size_t cols, const std::vector<std::uint8_t>& pixels);
void write_idx_labels(const std::filesystem::path& path,
                      const std::vector<std::uint8_t>& labels);

}  // namespace lumen
