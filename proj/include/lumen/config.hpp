#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "lumen/devices.hpp"
#include "lumen/engine.hpp"
#include "lumen/network.hpp"
#include "lumen/noise.hpp"
#include "lumen/power.hpp"

namespace lumen {

struct DatasetPaths {
    std::string train_images;
    std::string train_labels;
    std::string test_images;
    std::string test_labels;
    std::size_t limit_train = 0;  // 0 = all
    std::size_t limit_test = 0;
};

struct SweepConfig {
    std::string param = "noise_scale";  // or "delta_f"
    std::vector<double> values;
    std::vector<Backend> backends;
    std::vector<std::uint64_t> seeds;
};

// One validated run manifest; every command is a pure function of this plus
// the referenced input files.
struct RunConfig {
    int schema_version = 1;
    nlohmann::json network_json = "mlp-784-16-10";  // zoo name or inline spec
    EvalPath path = EvalPath::kMrr;
    std::uint64_t seed = 1;
    std::size_t workers = 1;

    DeviceParams devices;
    bool noise_enabled = false;
    double noise_delta_f = 0.0;
    double noise_scale = 1.0;
    EncodingConfig encoding;
    PowerParams power;
    TrainConfig train;
    DatasetPaths dataset;
    std::string weights_file = "weights.json";
    SweepConfig sweep;
    std::vector<std::string> power_networks;
    std::vector<Backend> power_backends;
    std::string out_dir = "out";

    NetworkSpec resolve_network() const;
    NoiseConfig noise_config() const;  // photodiode taken from devices
    Backend require_backend(const std::string& command) const;
};

// Throws ConfigError naming the JSON path of any missing/invalid/unknown
// field.
RunConfig parse_config(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& cfg);
RunConfig load_config_file(const std::filesystem::path& path);

// `--set key=value` with dotted paths; the value parses as JSON when it can,
// else as a plain string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

NetworkSpec network_from_json(const nlohmann::json& j);
nlohmann::json network_to_json(const NetworkSpec& spec);

// Placeholder per-device powers for the shipped default config; magnitudes
// only, deliberately not tied to any foundry.
PowerParams default_power_params();

}  // namespace lumen
