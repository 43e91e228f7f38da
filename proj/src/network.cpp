#include "lumen/network.hpp"

#include <algorithm>
#include <numeric>

#include "lumen/error.hpp"

namespace lumen {

std::string to_string(LayerKind k) {
    switch (k) {
        case LayerKind::kDense: return "dense";
        case LayerKind::kConv2D: return "conv2d";
        case LayerKind::kMaxPool: return "maxpool";
        case LayerKind::kFlatten: return "flatten";
        case LayerKind::kActivation: return "activation";
        case LayerKind::kOutput: return "output";
    }
    return "?";
}

Layer Layer::dense(std::size_t in, std::size_t out) {
    Layer l;
    l.kind = LayerKind::kDense;
    l.in = in;
    l.out = out;
    return l;
}

Layer Layer::conv2d(std::size_t kh, std::size_t kw, std::size_t cin, std::size_t cout,
                    std::size_t stride, Padding padding) {
    Layer l;
    l.kind = LayerKind::kConv2D;
    l.kh = kh;
    l.kw = kw;
    l.cin = cin;
    l.cout = cout;
    l.stride = stride;
    l.padding = padding;
    return l;
}

Layer Layer::maxpool(std::size_t pool, std::size_t stride) {
    Layer l;
    l.kind = LayerKind::kMaxPool;
    l.pool = pool;
    l.pool_stride = stride;
    return l;
}

Layer Layer::flatten() {
    Layer l;
    l.kind = LayerKind::kFlatten;
    return l;
}

Layer Layer::activation() {
    Layer l;
    l.kind = LayerKind::kActivation;
    return l;
}

Layer Layer::output(std::size_t logits) {
    Layer l;
    l.kind = LayerKind::kOutput;
    l.logits = logits;
    return l;
}

namespace {

void layer_require(bool ok, std::size_t index, const std::string& msg) {
    if (!ok) throw ConfigError("layer " + std::to_string(index) + ": " + msg);
}

std::size_t flat_size(const std::vector<std::size_t>& shape) {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<std::size_t>());
}

void check_layer_fields(const Layer& l, std::size_t i) {
    switch (l.kind) {
        case LayerKind::kDense:
            layer_require(l.in > 0 && l.out > 0, i, "dense extents must be positive");
            break;
        case LayerKind::kConv2D:
            layer_require(l.kh > 0 && l.kw > 0 && l.cin > 0 && l.cout > 0, i,
                          "conv2d extents must be positive");
            layer_require(l.stride >= 1, i, "conv2d stride must be >= 1");
            break;
        case LayerKind::kMaxPool:
            layer_require(l.pool > 0 && l.pool_stride > 0, i,
                          "maxpool window and stride must be positive");
            break;
        case LayerKind::kOutput:
            layer_require(l.logits > 0, i, "output logits dim must be positive");
            break;
        default:
            break;
    }
}

}  // namespace

std::vector<std::size_t> layer_output_shape(const Layer& layer,
                                            const std::vector<std::size_t>& in_shape,
                                            std::size_t i) {
    switch (layer.kind) {
        case LayerKind::kDense: {
            layer_require(in_shape.size() == 1, i, "dense expects a flat input, got rank " +
                                                       std::to_string(in_shape.size()));
            layer_require(in_shape[0] == layer.in, i,
                          "dense expects " + std::to_string(layer.in) + " inputs, got " +
                              std::to_string(in_shape[0]));
            return {layer.out};
        }
        case LayerKind::kConv2D: {
            layer_require(in_shape.size() == 3, i, "conv2d expects HxWxC input");
            const std::size_t h = in_shape[0], w = in_shape[1], c = in_shape[2];
            layer_require(c == layer.cin, i,
                          "conv2d expects " + std::to_string(layer.cin) + " channels, got " +
                              std::to_string(c));
            if (layer.padding == Padding::kValid) {
                layer_require(layer.kh <= h && layer.kw <= w, i, "conv2d kernel larger than input");
                return {(h - layer.kh) / layer.stride + 1, (w - layer.kw) / layer.stride + 1,
                        layer.cout};
            }
            return {(h + layer.stride - 1) / layer.stride, (w + layer.stride - 1) / layer.stride,
                    layer.cout};
        }
        case LayerKind::kMaxPool: {
            layer_require(in_shape.size() == 3, i, "maxpool expects HxWxC input");
            layer_require(layer.pool <= in_shape[0] && layer.pool <= in_shape[1], i,
                          "maxpool window larger than input");
            return {(in_shape[0] - layer.pool) / layer.pool_stride + 1,
                    (in_shape[1] - layer.pool) / layer.pool_stride + 1, in_shape[2]};
        }
        case LayerKind::kFlatten:
            return {flat_size(in_shape)};
        case LayerKind::kActivation:
            return in_shape;
        case LayerKind::kOutput: {
            layer_require(in_shape.size() == 1, i, "output expects a flat input");
            layer_require(in_shape[0] == layer.logits, i,
                          "output expects " + std::to_string(layer.logits) + " logits, got " +
                              std::to_string(in_shape[0]));
            return in_shape;
        }
    }
    throw ConfigError("layer " + std::to_string(i) + ": unknown kind");
}

void NetworkSpec::validate() const {
    if (layers.empty()) throw ConfigError("network '" + name + "': no layers");
    for (std::size_t i = 0; i < layers.size(); ++i) check_layer_fields(layers[i], i);

    std::size_t n_output = 0;
    for (const Layer& l : layers) n_output += (l.kind == LayerKind::kOutput) ? 1 : 0;
    if (n_output != 1 || layers.back().kind != LayerKind::kOutput) {
        throw ConfigError("network '" + name + "': exactly one output layer, last, is required");
    }
    if (census_only) return;

    if (input_shape.empty()) throw ConfigError("network '" + name + "': missing input shape");
    std::vector<std::size_t> shape = input_shape;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        shape = layer_output_shape(layers[i], shape, i);
    }
}

std::size_t NetworkSpec::logits_dim() const {
    for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
        if (it->kind == LayerKind::kOutput) return it->logits;
    }
    throw ConfigError("network '" + name + "': no output layer");
}

NetworkSpec make_mlp(const std::string& name, std::size_t input_dim,
                     const std::vector<std::size_t>& hidden, std::size_t logits) {
    NetworkSpec spec;
    spec.name = name;
    spec.input_shape = {input_dim};
    std::size_t prev = input_dim;
    for (std::size_t width : hidden) {
        spec.layers.push_back(Layer::dense(prev, width));
        spec.layers.push_back(Layer::activation());
        prev = width;
    }
    spec.layers.push_back(Layer::dense(prev, logits));
    spec.layers.push_back(Layer::output(logits));
    return spec;
}

namespace {

// k conv layers of 16 3x3 kernels, then pool / flatten / classifier.
NetworkSpec make_cnn(const std::string& name, std::size_t n_conv) {
    NetworkSpec spec;
    spec.name = name;
    spec.input_shape = {28, 28, 1};
    std::size_t c = 1;
    for (std::size_t i = 0; i < n_conv; ++i) {
        spec.layers.push_back(Layer::conv2d(3, 3, c, 16, 1, Padding::kSame));
        spec.layers.push_back(Layer::activation());
        c = 16;
    }
    spec.layers.push_back(Layer::maxpool(2, 2));
    spec.layers.push_back(Layer::flatten());
    spec.layers.push_back(Layer::dense(14 * 14 * 16, 10));
    spec.layers.push_back(Layer::output(10));
    return spec;
}

struct ConvRow {
    std::size_t kh, kw, cin, cout;
};
struct DenseRow {
    std::size_t in, out;
};

// Weighted-layer inventory of a well-known architecture, flattened for
// device counting; branching topology is not preserved, so these specs are
// census-only. An activation follows every weighted layer but the last.
NetworkSpec make_census_net(const std::string& name, const std::vector<ConvRow>& convs,
                            const std::vector<DenseRow>& denses,
                            std::vector<std::size_t> input_shape) {
    NetworkSpec spec;
    spec.name = name;
    spec.input_shape = std::move(input_shape);
    spec.census_only = true;
    for (const ConvRow& r : convs) {
        spec.layers.push_back(Layer::conv2d(r.kh, r.kw, r.cin, r.cout));
        spec.layers.push_back(Layer::activation());
    }
    for (std::size_t i = 0; i < denses.size(); ++i) {
        spec.layers.push_back(Layer::dense(denses[i].in, denses[i].out));
        if (i + 1 < denses.size()) spec.layers.push_back(Layer::activation());
    }
    spec.layers.push_back(Layer::output(denses.empty() ? 1 : denses.back().out));
    return spec;
}

NetworkSpec make_alexnet() {
    return make_census_net(
        "alexnet",
        {{11, 11, 3, 64}, {5, 5, 64, 192}, {3, 3, 192, 384}, {3, 3, 384, 256}, {3, 3, 256, 256}},
        {{9216, 4096}, {4096, 4096}, {4096, 1000}}, {224, 224, 3});
}

NetworkSpec make_vgg16() {
    return make_census_net("vgg16",
                           {{3, 3, 3, 64},
                            {3, 3, 64, 64},
                            {3, 3, 64, 128},
                            {3, 3, 128, 128},
                            {3, 3, 128, 256},
                            {3, 3, 256, 256},
                            {3, 3, 256, 256},
                            {3, 3, 256, 512},
                            {3, 3, 512, 512},
                            {3, 3, 512, 512},
                            {3, 3, 512, 512},
                            {3, 3, 512, 512},
                            {3, 3, 512, 512}},
                           {{25088, 4096}, {4096, 4096}, {4096, 1000}}, {224, 224, 3});
}

NetworkSpec make_resnet18() {
    return make_census_net("resnet18",
                           {{7, 7, 3, 64},    {3, 3, 64, 64},   {3, 3, 64, 64},
                            {3, 3, 64, 64},   {3, 3, 64, 64},   {3, 3, 64, 128},
                            {3, 3, 128, 128}, {1, 1, 64, 128},  {3, 3, 128, 128},
                            {3, 3, 128, 128}, {3, 3, 128, 256}, {3, 3, 256, 256},
                            {1, 1, 128, 256}, {3, 3, 256, 256}, {3, 3, 256, 256},
                            {3, 3, 256, 512}, {3, 3, 512, 512}, {1, 1, 256, 512},
                            {3, 3, 512, 512}, {3, 3, 512, 512}},
                           {{512, 1000}}, {224, 224, 3});
}

NetworkSpec make_inception_v3() {
    return make_census_net(
        "inception_v3",
        {{3, 3, 3, 32},     {3, 3, 32, 32},    {3, 3, 32, 64},    {1, 1, 64, 80},
         {3, 3, 80, 192},   {1, 1, 192, 64},   {1, 1, 192, 48},   {5, 5, 48, 64},
         {1, 1, 192, 64},   {3, 3, 64, 96},    {3, 3, 96, 96},    {1, 1, 192, 32},
         {1, 1, 256, 64},   {1, 1, 256, 48},   {5, 5, 48, 64},    {1, 1, 256, 64},
         {3, 3, 64, 96},    {3, 3, 96, 96},    {1, 1, 256, 64},   {1, 1, 288, 64},
         {1, 1, 288, 48},   {5, 5, 48, 64},    {1, 1, 288, 64},   {3, 3, 64, 96},
         {3, 3, 96, 96},    {1, 1, 288, 64},   {3, 3, 288, 384},  {1, 1, 288, 64},
         {3, 3, 64, 96},    {3, 3, 96, 96},    {1, 1, 768, 192},  {1, 1, 768, 128},
         {1, 7, 128, 128},  {7, 1, 128, 192},  {1, 1, 768, 128},  {7, 1, 128, 128},
         {1, 7, 128, 128},  {7, 1, 128, 128},  {1, 7, 128, 192},  {1, 1, 768, 192},
         {1, 1, 768, 192},  {1, 1, 768, 160},  {1, 7, 160, 160},  {7, 1, 160, 192},
         {1, 1, 768, 160},  {7, 1, 160, 160},  {1, 7, 160, 160},  {7, 1, 160, 160},
         {1, 7, 160, 192},  {1, 1, 768, 192},  {1, 1, 768, 192},  {1, 1, 768, 160},
         {1, 7, 160, 160},  {7, 1, 160, 192},  {1, 1, 768, 160},  {7, 1, 160, 160},
         {1, 7, 160, 160},  {7, 1, 160, 160},  {1, 7, 160, 192},  {1, 1, 768, 192},
         {1, 1, 768, 192},  {1, 1, 768, 192},  {1, 7, 192, 192},  {7, 1, 192, 192},
         {1, 1, 768, 192},  {7, 1, 192, 192},  {1, 7, 192, 192},  {7, 1, 192, 192},
         {1, 7, 192, 192},  {1, 1, 768, 192},  {1, 1, 768, 192},  {3, 3, 192, 320},
         {1, 1, 768, 192},  {1, 7, 192, 192},  {7, 1, 192, 192},  {3, 3, 192, 192},
         {1, 1, 1280, 320}, {1, 1, 1280, 384}, {1, 3, 384, 384},  {3, 1, 384, 384},
         {1, 1, 1280, 448}, {3, 3, 448, 384},  {1, 3, 384, 384},  {3, 1, 384, 384},
         {1, 1, 1280, 192}, {1, 1, 2048, 320}, {1, 1, 2048, 384}, {1, 3, 384, 384},
         {3, 1, 384, 384},  {1, 1, 2048, 448}, {3, 3, 448, 384},  {1, 3, 384, 384},
         {3, 1, 384, 384},  {1, 1, 2048, 192}},
        {{2048, 1000}}, {299, 299, 3});
}

}  // namespace

std::vector<std::string> zoo_names() {
    return {"mlp-784-16-10", "mlp3", "mlp5",    "mlp9",         "cnn3",    "cnn5",
            "cnn9",          "toy",  "alexnet", "inception_v3", "resnet18", "vgg16"};
}

NetworkSpec zoo_lookup(const std::string& name) {
    if (name == "mlp-784-16-10") return make_mlp(name, 784, {16}, 10);
    if (name == "mlp3") return make_mlp(name, 784, {16, 16}, 10);
    if (name == "mlp5") return make_mlp(name, 784, {16, 16, 16, 16}, 10);
    if (name == "mlp9") return make_mlp(name, 784, {16, 16, 16, 16, 16, 16, 16, 16}, 10);
    if (name == "cnn3") return make_cnn(name, 3);
    if (name == "cnn5") return make_cnn(name, 5);
    if (name == "cnn9") return make_cnn(name, 9);
    if (name == "toy") return make_mlp(name, 2, {4}, 2);
    if (name == "alexnet") return make_alexnet();
    if (name == "vgg16") return make_vgg16();
    if (name == "resnet18") return make_resnet18();
    if (name == "inception_v3") return make_inception_v3();
    throw ConfigError("unknown network '" + name + "'");
}

}  // namespace lumen
