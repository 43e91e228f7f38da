#include "lumen/idx.hpp"

#include <fstream>

namespace lumen {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IdxError(IdxErrorKind::kIo, 0, "cannot open " + path.string());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::uint32_t read_u32_be(const std::vector<std::uint8_t>& buf, std::size_t offset,
                          const std::string& what, const std::filesystem::path& path) {
    if (offset + 4 > buf.size()) {
        throw IdxError(IdxErrorKind::kTruncated, offset,
                       path.string() + ": truncated " + what + " at byte offset " +
                           std::to_string(offset));
    }
    return (static_cast<std::uint32_t>(buf[offset]) << 24) |
           (static_cast<std::uint32_t>(buf[offset + 1]) << 16) |
           (static_cast<std::uint32_t>(buf[offset + 2]) << 8) |
           static_cast<std::uint32_t>(buf[offset + 3]);
}

void check_magic(const std::vector<std::uint8_t>& buf, std::uint32_t want,
                 const std::filesystem::path& path) {
    const std::uint32_t got = read_u32_be(buf, 0, "magic", path);
    if (got != want) {
        char msg[160];
        std::snprintf(msg, sizeof(msg), "%s: wrong magic 0x%08x at byte offset 0, expected 0x%08x",
                      path.string().c_str(), got, want);
        throw IdxError(IdxErrorKind::kWrongMagic, 0, msg);
    }
}

void write_u32_be(std::ofstream& f, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>((v >> 24) & 0xFF), static_cast<char>((v >> 16) & 0xFF),
                           static_cast<char>((v >> 8) & 0xFF), static_cast<char>(v & 0xFF)};
    f.write(bytes, 4);
}

}  // namespace

std::string to_string(IdxErrorKind k) {
    switch (k) {
        case IdxErrorKind::kIo: return "io";
        case IdxErrorKind::kWrongMagic: return "wrong-magic";
        case IdxErrorKind::kTruncated: return "truncated";
        case IdxErrorKind::kCountMismatch: return "count-mismatch";
    }
    return "?";
}

IdxDataset load_idx(const std::filesystem::path& images_path,
                    const std::filesystem::path& labels_path) {
    const std::vector<std::uint8_t> img = read_file(images_path);
    check_magic(img, kImagesMagic, images_path);
    const std::uint32_t n_images = read_u32_be(img, 4, "image count", images_path);
    const std::uint32_t rows = read_u32_be(img, 8, "row count", images_path);
    const std::uint32_t cols = read_u32_be(img, 12, "column count", images_path);
    const std::size_t payload = static_cast<std::size_t>(n_images) * rows * cols;
    if (img.size() < 16 + payload) {
        throw IdxError(IdxErrorKind::kTruncated, img.size(),
                       images_path.string() + ": image payload truncated at byte offset " +
                           std::to_string(img.size()) + ", expected " +
                           std::to_string(16 + payload) + " bytes");
    }

    const std::vector<std::uint8_t> lab = read_file(labels_path);
    check_magic(lab, kLabelsMagic, labels_path);
    const std::uint32_t n_labels = read_u32_be(lab, 4, "label count", labels_path);
    if (lab.size() < 8 + n_labels) {
        throw IdxError(IdxErrorKind::kTruncated, lab.size(),
                       labels_path.string() + ": label payload truncated at byte offset " +
                           std::to_string(lab.size()) + ", expected " +
                           std::to_string(8 + static_cast<std::size_t>(n_labels)) + " bytes");
    }
    if (n_images != n_labels) {
        throw IdxError(IdxErrorKind::kCountMismatch, 4,
                       "image count " + std::to_string(n_images) + " != label count " +
                           std::to_string(n_labels) + " (headers at byte offset 4)");
    }

    IdxDataset ds;
    ds.count = n_images;
    ds.rows = rows;
    ds.cols = cols;
    ds.pixels.resize(payload);
    for (std::size_t i = 0; i < payload; ++i) ds.pixels[i] = img[16 + i] / 255.0;
    ds.labels.assign(lab.begin() + 8, lab.begin() + 8 + n_labels);
    return ds;
}

Dataset IdxDataset::to_dataset(bool flat, std::size_t limit) const {
    const std::size_t n = limit == 0 ? count : std::min(limit, count);
    Dataset out;
    out.inputs.reserve(n);
    out.labels.reserve(n);
    const std::size_t stride = rows * cols;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> v(pixels.begin() + static_cast<std::ptrdiff_t>(i * stride),
                              pixels.begin() + static_cast<std::ptrdiff_t>((i + 1) * stride));
        if (flat) {
            out.inputs.emplace_back(std::vector<std::size_t>{stride}, std::move(v));
        } else {
            out.inputs.emplace_back(std::vector<std::size_t>{rows, cols, 1}, std::move(v));
        }
        out.labels.push_back(labels[i]);
    }
    return out;
}

void write_idx_images(const std::filesystem::path& path, std::size_t count, std::size_t rows,
                      std::size_t cols, const std::vector<std::uint8_t>& pixels) {
    if (pixels.size() != count * rows * cols) {
        throw DataError("write_idx_images: pixel buffer does not match extents");
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IdxError(IdxErrorKind::kIo, 0, "cannot write " + path.string());
    write_u32_be(f, kImagesMagic);
    write_u32_be(f, static_cast<std::uint32_t>(count));
    write_u32_be(f, static_cast<std::uint32_t>(rows));
    write_u32_be(f, static_cast<std::uint32_t>(cols));
    f.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
}

void write_idx_labels(const std::filesystem::path& path,
                      const std::vector<std::uint8_t>& labels) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IdxError(IdxErrorKind::kIo, 0, "cannot write " + path.string());
    write_u32_be(f, kLabelsMagic);
    write_u32_be(f, static_cast<std::uint32_t>(labels.size()));
    f.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
}

}  // namespace lumen
