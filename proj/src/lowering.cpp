#include "lumen/lowering.hpp"

#include "lumen/error.hpp"

namespace lumen {

std::string to_string(NodeKind k) {
    switch (k) {
        case NodeKind::kMultiplier: return "multiplier";
        case NodeKind::kSummation: return "summation";
        case NodeKind::kEom: return "eom";
    }
    return "?";
}

DeviceCensus& DeviceCensus::operator+=(const DeviceCensus& o) {
    n_multipliers += o.n_multipliers;
    n_summation_units += o.n_summation_units;
    n_eoms += o.n_eoms;
    n_waveguides += o.n_waveguides;
    return *this;
}

namespace {

// Units carried by a shape at one point in the chain: width of a flat
// vector, channel count of a feature map (spatial positions are
// time-multiplexed in the weight-stationary mapping).
std::size_t unit_count(const std::vector<std::size_t>& shape) {
    return shape.size() == 3 ? shape[2] : shape.empty() ? 0 : shape[0];
}

DeviceCensus layer_census(const Layer& l, std::size_t units_before, std::size_t mult_factor) {
    DeviceCensus c;
    switch (l.kind) {
        case LayerKind::kDense:
            c.n_multipliers = l.in * l.out * mult_factor;
            c.n_summation_units = l.out;
            c.n_waveguides = c.n_multipliers;
            break;
        case LayerKind::kConv2D:
            c.n_multipliers = l.kh * l.kw * l.cin * l.cout * mult_factor;
            c.n_summation_units = l.cout;
            c.n_waveguides = c.n_multipliers;
            break;
        case LayerKind::kActivation:
            c.n_eoms = units_before;
            break;
        default:
            break;  // pooling, flatten and output readout are electronic
    }
    return c;
}

// Tracks the unit count along the layer list. census_only nets do not chain,
// so per-layer fields are trusted there instead of propagated shapes.
class UnitWalker {
public:
    explicit UnitWalker(const NetworkSpec& spec) : spec_(spec), shape_(spec.input_shape) {
        if (!spec.census_only) spec.validate();
    }

    std::size_t units_before() const {
        return spec_.census_only ? last_weighted_units_ : unit_count(shape_);
    }

    void advance(std::size_t i, const Layer& l) {
        if (spec_.census_only) {
            if (l.kind == LayerKind::kDense) last_weighted_units_ = l.out;
            if (l.kind == LayerKind::kConv2D) last_weighted_units_ = l.cout;
            return;
        }
        shape_ = layer_output_shape(l, shape_, i);
    }

private:
    const NetworkSpec& spec_;
    std::vector<std::size_t> shape_;
    std::size_t last_weighted_units_ = 0;
};

}  // namespace

std::vector<DeviceCensus> census_per_layer(const NetworkSpec& spec, Backend backend) {
    const std::size_t mult_factor = backend == Backend::kMzi ? 2 : 1;
    std::vector<DeviceCensus> out;
    out.reserve(spec.layers.size());
    UnitWalker walker(spec);
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const Layer& l = spec.layers[i];
        out.push_back(layer_census(l, walker.units_before(), mult_factor));
        walker.advance(i, l);
    }
    return out;
}

DeviceCensus census_from_shape(const NetworkSpec& spec, Backend backend) {
    DeviceCensus total;
    for (const DeviceCensus& c : census_per_layer(spec, backend)) total += c;
    return total;
}

std::size_t encoded_input_channels(const NetworkSpec& spec) {
    for (const Layer& l : spec.layers) {
        if (l.kind == LayerKind::kDense) return l.in;
        if (l.kind == LayerKind::kConv2D) return l.kh * l.kw * l.cin;
    }
    return 0;
}

LoweredGraph lower(const NetworkSpec& spec, Backend backend) {
    if (spec.census_only) {
        throw ConfigError("network '" + spec.name +
                          "' is census-only and cannot be lowered to a device graph");
    }
    spec.validate();

    LoweredGraph g;
    g.network = spec.name;
    g.backend = backend;

    std::vector<std::size_t> shape = spec.input_shape;
    std::uint32_t next_id = 0;
    const int arms = backend == Backend::kMzi ? 2 : 1;

    for (std::size_t li = 0; li < spec.layers.size(); ++li) {
        const Layer& l = spec.layers[li];
        DeviceCensus layer_counts;

        if (l.kind == LayerKind::kDense || l.kind == LayerKind::kConv2D) {
            const std::size_t fan_in =
                l.kind == LayerKind::kDense ? l.in : l.kh * l.kw * l.cin;
            const std::size_t n_out = l.kind == LayerKind::kDense ? l.out : l.cout;

            std::vector<std::uint32_t> summation_ids(n_out);
            for (std::size_t u = 0; u < n_out; ++u) {
                summation_ids[u] = next_id;
                g.nodes.push_back({next_id++, NodeKind::kSummation,
                                   static_cast<std::uint32_t>(li), static_cast<std::uint32_t>(u),
                                   0});
            }
            for (std::size_t u = 0; u < n_out; ++u) {
                for (std::size_t k = 0; k < fan_in; ++k) {
                    const std::uint32_t widx = static_cast<std::uint32_t>(u * fan_in + k);
                    for (int arm = 0; arm < arms; ++arm) {
                        g.nodes.push_back({next_id, NodeKind::kMultiplier,
                                           static_cast<std::uint32_t>(li), widx,
                                           static_cast<std::int8_t>(
                                               arms == 2 ? (arm == 0 ? 1 : -1) : 0)});
                        g.edges.push_back({next_id, summation_ids[u]});
                        ++next_id;
                    }
                }
            }
            layer_counts.n_multipliers = fan_in * n_out * arms;
            layer_counts.n_summation_units = n_out;
            layer_counts.n_waveguides = layer_counts.n_multipliers;
        } else if (l.kind == LayerKind::kActivation) {
            const std::size_t units = shape.size() == 3 ? shape[2] : shape[0];
            for (std::size_t u = 0; u < units; ++u) {
                g.nodes.push_back({next_id++, NodeKind::kEom, static_cast<std::uint32_t>(li),
                                   static_cast<std::uint32_t>(u), 0});
            }
            layer_counts.n_eoms = units;
        }

        g.per_layer.push_back(layer_counts);
        shape = layer_output_shape(l, shape, li);
    }
    return g;
}

DeviceCensus census(const LoweredGraph& g) {
    DeviceCensus c;
    for (const GraphNode& n : g.nodes) {
        switch (n.kind) {
            case NodeKind::kMultiplier: ++c.n_multipliers; break;
            case NodeKind::kSummation: ++c.n_summation_units; break;
            case NodeKind::kEom: ++c.n_eoms; break;
        }
    }
    c.n_waveguides = g.edges.size();
    return c;
}

nlohmann::json netlist_json(const LoweredGraph& g) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const GraphNode& n : g.nodes) {
        nlohmann::json jn = {{"id", n.id},
                             {"type", to_string(n.kind)},
                             {"layer", n.layer},
                             {"unit", n.unit}};
        if (n.arm != 0) jn["arm"] = n.arm > 0 ? "+" : "-";
        nodes.push_back(std::move(jn));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const GraphEdge& e : g.edges) {
        edges.push_back({{"from", e.from}, {"to", e.to}});
    }
    const DeviceCensus c = census(g);
    return {{"network", g.network},
            {"backend", to_string(g.backend)},
            {"census",
             {{"multipliers", c.n_multipliers},
              {"summation_units", c.n_summation_units},
              {"eoms", c.n_eoms},
              {"waveguides", c.n_waveguides}}},
            {"nodes", std::move(nodes)},
            {"edges", std::move(edges)}};
}

}  // namespace lumen
