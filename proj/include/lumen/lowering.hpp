#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "lumen/devices.hpp"
#include "lumen/network.hpp"

namespace lumen {

enum class NodeKind { kMultiplier, kSummation, kEom };

std::string to_string(NodeKind k);

struct GraphNode {
    std::uint32_t id = 0;
    NodeKind kind = NodeKind::kMultiplier;
    std::uint32_t layer = 0;  // index into NetworkSpec::layers
    std::uint32_t unit = 0;   // summation/EOM: output unit; multiplier: flat weight index
    std::int8_t arm = 0;      // MZI push-pull arm: +1/-1; 0 for MRR
};

struct GraphEdge {
    std::uint32_t from = 0;  // multiplier
    std::uint32_t to = 0;    // summation unit
};

struct DeviceCensus {
    std::uint64_t n_multipliers = 0;
    std::uint64_t n_summation_units = 0;
    std::uint64_t n_eoms = 0;
    std::uint64_t n_waveguides = 0;

    DeviceCensus& operator+=(const DeviceCensus& o);
    friend DeviceCensus operator+(DeviceCensus a, const DeviceCensus& b) { return a += b; }
    bool operator==(const DeviceCensus&) const = default;
};

// Weight-stationary device realization of a network: one multiplier (or
// push-pull pair) per scalar weight, one balanced-detector summation unit
// per output neuron/channel, one EOM per activated unit, a waveguide per
// multiplier-to-summation connection.
struct LoweredGraph {
    std::string network;
    Backend backend = Backend::kMrr;
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
    std::vector<DeviceCensus> per_layer;
};

LoweredGraph lower(const NetworkSpec& spec, Backend backend);

DeviceCensus census(const LoweredGraph& g);

// Same counts as census(lower(spec, backend)), computed arithmetically so
// large architectures never need device instantiation.
DeviceCensus census_from_shape(const NetworkSpec& spec, Backend backend);

std::vector<DeviceCensus> census_per_layer(const NetworkSpec& spec, Backend backend);

// Optical input channels presented to the first weighted layer; the laser
// count for power estimation.
std::size_t encoded_input_channels(const NetworkSpec& spec);

nlohmann::json netlist_json(const LoweredGraph& g);

}  // namespace lumen
