#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lumen/tensor.hpp"

namespace lumen {

enum class LayerKind { kDense, kConv2D, kMaxPool, kFlatten, kActivation, kOutput };

std::string to_string(LayerKind k);

struct Layer {
    LayerKind kind = LayerKind::kDense;

    // dense
    std::size_t in = 0;
    std::size_t out = 0;

    // conv2d
    std::size_t kh = 0, kw = 0, cin = 0, cout = 0;
    std::size_t stride = 1;
    Padding padding = Padding::kValid;

    // maxpool (square window)
    std::size_t pool = 2;
    std::size_t pool_stride = 2;

    // output
    std::size_t logits = 0;

    static Layer dense(std::size_t in, std::size_t out);
    static Layer conv2d(std::size_t kh, std::size_t kw, std::size_t cin, std::size_t cout,
                        std::size_t stride = 1, Padding padding = Padding::kSame);
    static Layer maxpool(std::size_t pool = 2, std::size_t stride = 2);
    static Layer flatten();
    static Layer activation();
    static Layer output(std::size_t logits);

    bool has_weights() const { return kind == LayerKind::kDense || kind == LayerKind::kConv2D; }
};

// Ordered layer graph of one network. census_only entries carry a layer
// inventory for device counting but are not a runnable chain (branching
// architectures flattened into their weighted layers).
struct NetworkSpec {
    std::string name;
    std::vector<std::size_t> input_shape;  // {D} or {H, W, C}
    std::vector<Layer> layers;
    bool census_only = false;

    // Shape chaining plus the exactly-one-Output-last rule; throws with the
    // offending layer index. census_only specs check per-layer fields only.
    void validate() const;

    std::size_t logits_dim() const;
};

// Output shape of one layer given its input shape; throws on mismatch.
std::vector<std::size_t> layer_output_shape(const Layer& layer,
                                            const std::vector<std::size_t>& in_shape,
                                            std::size_t layer_index);

NetworkSpec make_mlp(const std::string& name, std::size_t input_dim,
                     const std::vector<std::size_t>& hidden, std::size_t logits);

// Built-in networks: the desk-scale functional MLPs/CNNs plus census-only
// inventories of well-known large architectures.
std::vector<std::string> zoo_names();
NetworkSpec zoo_lookup(const std::string& name);

}  // namespace lumen
