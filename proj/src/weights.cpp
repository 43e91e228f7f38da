#include "lumen/weights.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "json.hpp"
#include "lumen/error.hpp"

namespace lumen {

namespace {

std::vector<std::size_t> expected_w_shape(const Layer& l) {
    if (l.kind == LayerKind::kDense) return {l.out, l.in};
    return {l.kh, l.kw, l.cin, l.cout};
}

std::size_t expected_bias_size(const Layer& l) {
    return l.kind == LayerKind::kDense ? l.out : l.cout;
}

void append_f32_le(std::vector<std::uint8_t>& out, double v) {
    const float f = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof(bits));
    out.push_back(static_cast<std::uint8_t>(bits & 0xFF));
    out.push_back(static_cast<std::uint8_t>((bits >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((bits >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((bits >> 24) & 0xFF));
}

double read_f32_le(const std::uint8_t* p) {
    const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                               (static_cast<std::uint32_t>(p[1]) << 8) |
                               (static_cast<std::uint32_t>(p[2]) << 16) |
                               (static_cast<std::uint32_t>(p[3]) << 24);
    float f;
    std::memcpy(&f, &bits, sizeof(f));
    return static_cast<double>(f);
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

void WeightSet::validate_against(const NetworkSpec& spec) const {
    if (layers.size() != spec.layers.size()) {
        throw DataError("weight set has " + std::to_string(layers.size()) +
                        " layer slots, network '" + spec.name + "' has " +
                        std::to_string(spec.layers.size()));
    }
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const Layer& l = spec.layers[i];
        if (!l.has_weights()) {
            if (!layers[i].empty()) {
                throw DataError("layer " + std::to_string(i) + " carries unexpected weights");
            }
            continue;
        }
        if (layers[i].w.shape() != expected_w_shape(l)) {
            throw DataError("layer " + std::to_string(i) + " weight shape " +
                            layers[i].w.shape_str() + " does not match the network");
        }
        if (layers[i].b.size() != expected_bias_size(l)) {
            throw DataError("layer " + std::to_string(i) + " bias size mismatch");
        }
        if (!layers[i].w.all_finite()) {
            throw DataError("layer " + std::to_string(i) + " has non-finite weights");
        }
        for (double v : layers[i].b) {
            if (!std::isfinite(v)) {
                throw DataError("layer " + std::to_string(i) + " has non-finite bias");
            }
        }
    }
}

double WeightSet::max_abs_weight(std::size_t layer) const {
    double m = 0.0;
    for (double v : layers.at(layer).w.values()) m = std::max(m, std::abs(v));
    return m;
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001B3ull;
    }
    return h;
}

void save_weights(const std::filesystem::path& manifest_path, const WeightSet& ws,
                  const NetworkSpec& spec) {
    ws.validate_against(spec);

    std::vector<std::uint8_t> blob;
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t i = 0; i < ws.layers.size(); ++i) {
        const Layer& l = spec.layers[i];
        if (!l.has_weights()) continue;
        const LayerWeights& lw = ws.layers[i];
        for (double v : lw.w.values()) append_f32_le(blob, v);
        for (double v : lw.b) append_f32_le(blob, v);
        layers.push_back({{"layer", i},
                          {"kind", to_string(l.kind)},
                          {"w_shape", lw.w.shape()},
                          {"b_size", lw.b.size()},
                          {"scale", ws.max_abs_weight(i)}});
    }

    std::filesystem::path blob_path = manifest_path;
    blob_path.replace_extension(".bin");

    const nlohmann::json manifest = {{"format_version", 1},
                                     {"network", spec.name},
                                     {"dtype", "f32_le"},
                                     {"blob", blob_path.filename().string()},
                                     {"checksum_fnv1a64", hex64(fnv1a64(blob.data(), blob.size()))},
                                     {"layers", layers}};

    std::ofstream mf(manifest_path, std::ios::binary | std::ios::trunc);
    if (!mf) throw DataError("cannot write " + manifest_path.string());
    mf << manifest.dump(2) << "\n";

    std::ofstream bf(blob_path, std::ios::binary | std::ios::trunc);
    if (!bf) throw DataError("cannot write " + blob_path.string());
    bf.write(reinterpret_cast<const char*>(blob.data()),
             static_cast<std::streamsize>(blob.size()));
}

WeightSet load_weights(const std::filesystem::path& manifest_path, const NetworkSpec& spec) {
    std::ifstream mf(manifest_path, std::ios::binary);
    if (!mf) throw DataError("cannot open " + manifest_path.string());
    nlohmann::json manifest;
    try {
        mf >> manifest;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("bad weight manifest " + manifest_path.string() + ": " + e.what());
    }

    if (manifest.value("format_version", 0) != 1) {
        throw DataError("unsupported weight manifest version in " + manifest_path.string());
    }
    if (manifest.value("dtype", "") != "f32_le") {
        throw DataError("unsupported weight dtype in " + manifest_path.string());
    }
    if (manifest.value("network", "") != spec.name) {
        throw DataError("weight manifest is for network '" + manifest.value("network", "") +
                        "', expected '" + spec.name + "'");
    }

    const std::filesystem::path blob_path =
        manifest_path.parent_path() / manifest.at("blob").get<std::string>();
    std::ifstream bf(blob_path, std::ios::binary);
    if (!bf) throw DataError("cannot open " + blob_path.string());
    std::vector<std::uint8_t> blob((std::istreambuf_iterator<char>(bf)),
                                   std::istreambuf_iterator<char>());

    const std::string want = manifest.at("checksum_fnv1a64").get<std::string>();
    const std::string got = hex64(fnv1a64(blob.data(), blob.size()));
    if (want != got) {
        throw DataError("weight blob checksum mismatch: manifest " + want + ", blob " + got);
    }

    WeightSet ws;
    ws.layers.resize(spec.layers.size());
    std::size_t off = 0;
    const auto take = [&](std::size_t n) {
        if (off + 4 * n > blob.size()) {
            throw DataError("weight blob truncated at byte " + std::to_string(off));
        }
        std::vector<double> vals(n);
        for (std::size_t i = 0; i < n; ++i, off += 4) vals[i] = read_f32_le(&blob[off]);
        return vals;
    };

    for (const auto& entry : manifest.at("layers")) {
        const std::size_t li = entry.at("layer").get<std::size_t>();
        if (li >= spec.layers.size() || !spec.layers[li].has_weights()) {
            throw DataError("weight manifest entry for non-weighted layer " + std::to_string(li));
        }
        const std::vector<std::size_t> shape = entry.at("w_shape").get<std::vector<std::size_t>>();
        std::size_t n = 1;
        for (std::size_t e : shape) n *= e;
        ws.layers[li].w = Tensor(shape, take(n));
        ws.layers[li].b = take(entry.at("b_size").get<std::size_t>());
    }
    if (off != blob.size()) {
        throw DataError("weight blob has " + std::to_string(blob.size() - off) +
                        " trailing bytes");
    }
    ws.validate_against(spec);
    return ws;
}

}  // namespace lumen
