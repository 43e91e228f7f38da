#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "lumen/network.hpp"
#include "lumen/tensor.hpp"

namespace lumen {

// Parameters of one weighted layer. Dense weights are [out x in]; conv
// weights are [Kh x Kw x Cin x Cout]; bias has one entry per output unit.
struct LayerWeights {
    Tensor w;
    std::vector<double> b;

    bool empty() const { return w.size() == 0; }
};

// One slot per spec layer; layers without parameters stay empty.
struct WeightSet {
    std::vector<LayerWeights> layers;

    void validate_against(const NetworkSpec& spec) const;
    double max_abs_weight(std::size_t layer) const;
};

// FNV-1a 64-bit over raw bytes; manifest checksum of the weight blob.
std::uint64_t fnv1a64(const void* data, std::size_t len);

// JSON manifest (shapes, scales, checksum, format version) plus an adjacent
// little-endian float32 blob, row-major, layers in listed order.
void save_weights(const std::filesystem::path& manifest_path, const WeightSet& ws,
                  const NetworkSpec& spec);
WeightSet load_weights(const std::filesystem::path& manifest_path, const NetworkSpec& spec);

}  // namespace lumen
