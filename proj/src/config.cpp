#include "lumen/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "lumen/error.hpp"

namespace lumen {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& why) {
    throw ConfigError("config: " + path + ": " + why);
}

// Strict object reader: every key must be consumed, typos surface as errors.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j.is_object()) bad(path_, "expected an object");
    }

    ~ObjectReader() = default;

    void finish() const {
        for (const auto& [key, _] : j_.items()) {
            if (!seen_.count(key)) bad(path_ + "." + key, "unknown field");
        }
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    template <typename T>
    T get(const std::string& key, T fallback) {
        seen_.insert(key);
        if (!j_.contains(key)) return fallback;
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            bad(path_ + "." + key, "wrong type");
        }
    }

    double number(const std::string& key, double fallback, double lo, double hi) {
        const double v = get<double>(key, fallback);
        if (!(v >= lo && v <= hi)) {
            bad(path_ + "." + key, "value " + std::to_string(v) + " outside [" +
                                       std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        return v;
    }

    const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

constexpr double kInf = 1e300;

Layer layer_from_json(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    const std::string kind = r.get<std::string>("kind", "");
    Layer l;
    if (kind == "dense") {
        l = Layer::dense(r.get<std::size_t>("in", 0), r.get<std::size_t>("out", 0));
    } else if (kind == "conv2d") {
        l = Layer::conv2d(r.get<std::size_t>("kh", 0), r.get<std::size_t>("kw", 0),
                          r.get<std::size_t>("cin", 0), r.get<std::size_t>("cout", 0),
                          r.get<std::size_t>("stride", 1),
                          padding_from_string(r.get<std::string>("padding", "same")));
    } else if (kind == "maxpool") {
        l = Layer::maxpool(r.get<std::size_t>("pool", 2), r.get<std::size_t>("stride", 2));
    } else if (kind == "flatten") {
        l = Layer::flatten();
    } else if (kind == "activation") {
        l = Layer::activation();
    } else if (kind == "output") {
        l = Layer::output(r.get<std::size_t>("logits", 0));
    } else {
        bad(path + ".kind", "unknown layer kind '" + kind + "'");
    }
    r.finish();
    return l;
}

json layer_to_json(const Layer& l) {
    switch (l.kind) {
        case LayerKind::kDense:
            return {{"kind", "dense"}, {"in", l.in}, {"out", l.out}};
        case LayerKind::kConv2D:
            return {{"kind", "conv2d"}, {"kh", l.kh},         {"kw", l.kw},
                    {"cin", l.cin},     {"cout", l.cout},     {"stride", l.stride},
                    {"padding", to_string(l.padding)}};
        case LayerKind::kMaxPool:
            return {{"kind", "maxpool"}, {"pool", l.pool}, {"stride", l.pool_stride}};
        case LayerKind::kFlatten:
            return {{"kind", "flatten"}};
        case LayerKind::kActivation:
            return {{"kind", "activation"}};
        case LayerKind::kOutput:
            return {{"kind", "output"}, {"logits", l.logits}};
    }
    return {};
}

std::vector<Backend> backends_from_json(ObjectReader& r, const std::string& key,
                                        std::vector<Backend> fallback) {
    if (!r.has(key)) return fallback;
    std::vector<Backend> out;
    for (const auto& b : r.raw(key)) {
        out.push_back(backend_from_string(b.get<std::string>()));
    }
    return out;
}

}  // namespace

NetworkSpec network_from_json(const json& j) {
    if (j.is_string()) return zoo_lookup(j.get<std::string>());
    ObjectReader r(j, "network");
    NetworkSpec spec;
    spec.name = r.get<std::string>("name", "custom");
    spec.input_shape = r.get<std::vector<std::size_t>>("input_shape", {});
    if (!r.has("layers")) bad("network.layers", "missing");
    const json& layers = r.raw("layers");
    if (!layers.is_array()) bad("network.layers", "expected an array");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        spec.layers.push_back(
            layer_from_json(layers[i], "network.layers[" + std::to_string(i) + "]"));
    }
    r.finish();
    spec.validate();
    return spec;
}

json network_to_json(const NetworkSpec& spec) {
    json layers = json::array();
    for (const Layer& l : spec.layers) layers.push_back(layer_to_json(l));
    return {{"name", spec.name}, {"input_shape", spec.input_shape}, {"layers", layers}};
}

PowerParams default_power_params() {
    // Placeholder magnitudes for exploratory runs; experiments should supply
    // their own values.
    PowerParams pp;
    pp.p_multiplier_mrr = 2e-3;
    pp.p_multiplier_mzi = 1.5e-3;
    pp.p_summation = 5e-4;
    pp.p_eom = 1e-3;
    pp.p_laser_per_input = 1e-3;
    pp.p_waveguide = 0.0;
    return pp;
}

NetworkSpec RunConfig::resolve_network() const {
    return network_from_json(network_json);
}

NoiseConfig RunConfig::noise_config() const {
    NoiseConfig n;
    n.enabled = noise_enabled;
    n.delta_f = noise_delta_f;
    n.noise_scale = noise_scale;
    n.photodiode = devices.photodiode;
    n.validate();
    return n;
}

Backend RunConfig::require_backend(const std::string& command) const {
    if (path == EvalPath::kIdeal) {
        throw ConfigError("config: backend: '" + command + "' needs 'mrr' or 'mzi', not 'ideal'");
    }
    return path == EvalPath::kMrr ? Backend::kMrr : Backend::kMzi;
}

RunConfig parse_config(const json& doc) {
    ObjectReader top(doc, "$");
    RunConfig cfg;

    cfg.schema_version = top.get<int>("schema_version", 0);
    if (cfg.schema_version != 1) bad("$.schema_version", "expected 1");

    if (top.has("network")) cfg.network_json = top.raw("network");
    (void)network_from_json(cfg.network_json);  // validate now, before any compute

    cfg.path = eval_path_from_string(top.get<std::string>("backend", "mrr"));
    cfg.seed = top.get<std::uint64_t>("seed", 1);
    cfg.workers = top.get<std::size_t>("workers", 1);
    if (cfg.workers == 0) bad("$.workers", "must be at least 1");

    if (top.has("devices")) {
        ObjectReader dev(top.raw("devices"), "$.devices");
        if (dev.has("mrr")) {
            ObjectReader r(dev.raw("mrr"), "$.devices.mrr");
            cfg.devices.mrr.a = r.number("a", 1.0, 1e-12, 1.0);
            cfg.devices.mrr.r1 = r.number("r1", 0.9, 0.0, 1.0 - 1e-12);
            cfg.devices.mrr.r2 = r.number("r2", 0.9, 0.0, 1.0 - 1e-12);
            r.finish();
        }
        if (dev.has("mzi")) {
            ObjectReader r(dev.raw("mzi"), "$.devices.mzi");
            cfg.devices.mzi.split_imbalance = r.number("split_imbalance", 0.0, 0.0, 0.5 - 1e-12);
            cfg.devices.mzi.insertion_loss = r.number("insertion_loss", 1.0, 1e-12, 1.0);
            r.finish();
        }
        if (dev.has("photodiode")) {
            ObjectReader r(dev.raw("photodiode"), "$.devices.photodiode");
            cfg.devices.photodiode.lambda = r.number("lambda_m", 1550e-9, 1e-12, 1.0);
            cfg.devices.photodiode.eta = r.number("eta", 1.0, 1e-12, 1.0);
            cfg.devices.photodiode.dark_current = r.number("dark_current_a", 0.0, 0.0, kInf);
            cfg.devices.photodiode.shunt_resistance =
                r.number("shunt_resistance_ohm", 10e3, 1e-12, kInf);
            cfg.devices.photodiode.temperature = r.number("temperature_k", 300.0, 1e-12, kInf);
            r.finish();
        }
        if (dev.has("eom")) {
            ObjectReader r(dev.raw("eom"), "$.devices.eom");
            cfg.devices.eom.v_pi = r.number("v_pi", 1.0, 1e-12, kInf);
            cfg.devices.eom.v_bias = r.number("v_bias", 0.5, -kInf, kInf);
            r.finish();
        }
        dev.finish();
    }
    cfg.devices.validate();

    if (top.has("noise")) {
        ObjectReader r(top.raw("noise"), "$.noise");
        cfg.noise_enabled = r.get<bool>("enabled", false);
        cfg.noise_delta_f = r.number("delta_f_hz", 0.0, 0.0, kInf);
        cfg.noise_scale = r.number("noise_scale", 1.0, 0.0, kInf);
        r.finish();
    }

    if (top.has("encoding")) {
        ObjectReader r(top.raw("encoding"), "$.encoding");
        cfg.encoding.p_fullscale = r.number("p_fullscale_w", 1e-3, 1e-30, kInf);
        cfg.encoding.weight_scale = r.get<std::vector<double>>("weight_scale", {});
        r.finish();
        cfg.encoding.validate();
    }

    cfg.power = default_power_params();
    if (top.has("power")) {
        ObjectReader r(top.raw("power"), "$.power");
        cfg.power.p_multiplier_mrr =
            r.number("p_multiplier_mrr_w", cfg.power.p_multiplier_mrr, 0.0, kInf);
        cfg.power.p_multiplier_mzi =
            r.number("p_multiplier_mzi_w", cfg.power.p_multiplier_mzi, 0.0, kInf);
        cfg.power.p_summation = r.number("p_summation_w", cfg.power.p_summation, 0.0, kInf);
        cfg.power.p_eom = r.number("p_eom_w", cfg.power.p_eom, 0.0, kInf);
        cfg.power.p_laser_per_input =
            r.number("p_laser_per_input_w", cfg.power.p_laser_per_input, 0.0, kInf);
        cfg.power.p_waveguide = r.number("p_waveguide_w", cfg.power.p_waveguide, 0.0, kInf);
        r.finish();
    }

    if (top.has("train")) {
        ObjectReader r(top.raw("train"), "$.train");
        cfg.train.learning_rate = r.number("learning_rate", 0.1, 1e-30, kInf);
        cfg.train.epochs = r.get<std::size_t>("epochs", 5);
        cfg.train.batch = r.get<std::size_t>("batch", 32);
        if (cfg.train.batch == 0) bad("$.train.batch", "must be positive");
        r.finish();
    }
    cfg.train.seed = cfg.seed;

    if (top.has("dataset")) {
        ObjectReader r(top.raw("dataset"), "$.dataset");
        cfg.dataset.train_images = r.get<std::string>("train_images", "");
        cfg.dataset.train_labels = r.get<std::string>("train_labels", "");
        cfg.dataset.test_images = r.get<std::string>("test_images", "");
        cfg.dataset.test_labels = r.get<std::string>("test_labels", "");
        cfg.dataset.limit_train = r.get<std::size_t>("limit_train", 0);
        cfg.dataset.limit_test = r.get<std::size_t>("limit_test", 0);
        r.finish();
    }

    cfg.weights_file = top.get<std::string>("weights", "weights.json");

    if (top.has("sweep")) {
        ObjectReader r(top.raw("sweep"), "$.sweep");
        cfg.sweep.param = r.get<std::string>("param", "noise_scale");
        if (cfg.sweep.param != "noise_scale" && cfg.sweep.param != "delta_f") {
            bad("$.sweep.param", "expected 'noise_scale' or 'delta_f'");
        }
        cfg.sweep.values = r.get<std::vector<double>>("values", {});
        for (double v : cfg.sweep.values) {
            if (v < 0.0) bad("$.sweep.values", "sweep values must be nonnegative");
        }
        cfg.sweep.backends = backends_from_json(r, "backends", {Backend::kMrr, Backend::kMzi});
        cfg.sweep.seeds = r.get<std::vector<std::uint64_t>>("seeds", {1});
        r.finish();
    } else {
        cfg.sweep.backends = {Backend::kMrr, Backend::kMzi};
        cfg.sweep.seeds = {1};
    }

    cfg.power_networks = top.get<std::vector<std::string>>(
        "power_networks", {"mlp3", "mlp5", "mlp9", "cnn3"});
    for (const std::string& n : cfg.power_networks) (void)zoo_lookup(n);
    if (top.has("power_backends")) {
        std::vector<Backend> out;
        for (const auto& b : top.raw("power_backends")) {
            out.push_back(backend_from_string(b.get<std::string>()));
        }
        cfg.power_backends = out;
    } else {
        cfg.power_backends = {Backend::kMrr, Backend::kMzi};
    }

    cfg.out_dir = top.get<std::string>("out_dir", "out");
    top.finish();
    return cfg;
}

json to_json(const RunConfig& cfg) {
    json backends = json::array();
    for (Backend b : cfg.sweep.backends) backends.push_back(to_string(b));
    json pbackends = json::array();
    for (Backend b : cfg.power_backends) pbackends.push_back(to_string(b));

    return {
        {"schema_version", cfg.schema_version},
        {"network", cfg.network_json},
        {"backend", to_string(cfg.path)},
        {"seed", cfg.seed},
        {"workers", cfg.workers},
        {"devices",
         {{"mrr", {{"a", cfg.devices.mrr.a}, {"r1", cfg.devices.mrr.r1}, {"r2", cfg.devices.mrr.r2}}},
          {"mzi",
           {{"split_imbalance", cfg.devices.mzi.split_imbalance},
            {"insertion_loss", cfg.devices.mzi.insertion_loss}}},
          {"photodiode",
           {{"lambda_m", cfg.devices.photodiode.lambda},
            {"eta", cfg.devices.photodiode.eta},
            {"dark_current_a", cfg.devices.photodiode.dark_current},
            {"shunt_resistance_ohm", cfg.devices.photodiode.shunt_resistance},
            {"temperature_k", cfg.devices.photodiode.temperature}}},
          {"eom", {{"v_pi", cfg.devices.eom.v_pi}, {"v_bias", cfg.devices.eom.v_bias}}}}},
        {"noise",
         {{"enabled", cfg.noise_enabled},
          {"delta_f_hz", cfg.noise_delta_f},
          {"noise_scale", cfg.noise_scale}}},
        {"encoding",
         {{"p_fullscale_w", cfg.encoding.p_fullscale},
          {"weight_scale", cfg.encoding.weight_scale}}},
        {"power",
         {{"p_multiplier_mrr_w", cfg.power.p_multiplier_mrr},
          {"p_multiplier_mzi_w", cfg.power.p_multiplier_mzi},
          {"p_summation_w", cfg.power.p_summation},
          {"p_eom_w", cfg.power.p_eom},
          {"p_laser_per_input_w", cfg.power.p_laser_per_input},
          {"p_waveguide_w", cfg.power.p_waveguide}}},
        {"train",
         {{"learning_rate", cfg.train.learning_rate},
          {"epochs", cfg.train.epochs},
          {"batch", cfg.train.batch}}},
        {"dataset",
         {{"train_images", cfg.dataset.train_images},
          {"train_labels", cfg.dataset.train_labels},
          {"test_images", cfg.dataset.test_images},
          {"test_labels", cfg.dataset.test_labels},
          {"limit_train", cfg.dataset.limit_train},
          {"limit_test", cfg.dataset.limit_test}}},
        {"weights", cfg.weights_file},
        {"sweep",
         {{"param", cfg.sweep.param},
          {"values", cfg.sweep.values},
          {"backends", backends},
          {"seeds", cfg.sweep.seeds}}},
        {"power_networks", cfg.power_networks},
        {"power_backends", pbackends},
        {"out_dir", cfg.out_dir}};
}

RunConfig load_config_file(const std::filesystem::path& path) {
    std::filesystem::path resolved = path;
    if (!std::filesystem::exists(resolved) && resolved.is_relative()) {
        // the one environment hook: a default directory for config files
        if (const char* dir = std::getenv("LUMEN_SIM_CONFIG_DIR")) {
            const std::filesystem::path alt = std::filesystem::path(dir) / path;
            if (std::filesystem::exists(alt)) resolved = alt;
        }
    }
    std::ifstream f(resolved);
    if (!f) throw ConfigError("cannot open config file " + path.string());
    json doc;
    try {
        f >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config: " + path.string() + ": " + e.what());
    }
    return parse_config(doc);
}

void apply_override(json& doc, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::exception&) {
        parsed = value;  // plain string
    }

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = key.find('.', start);
        const std::string part = key.substr(start, dot - start);
        if (part.empty()) throw ConfigError("--set: empty path segment in '" + key + "'");
        if (dot == std::string::npos) {
            (*node)[part] = parsed;
            return;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

}  // namespace lumen
