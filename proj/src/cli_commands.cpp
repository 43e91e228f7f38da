#include "lumen/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "lumen/error.hpp"
#include "lumen/idx.hpp"
#include "lumen/lowering.hpp"
#include "lumen/weights.hpp"

namespace lumen::cli {

namespace {

std::string fmt(double v, const char* spec = "%.9g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + p.string());
    return f;
}

constexpr const char* kEvalHeader =
    "network,path,noise_enabled,noise_scale,delta_f_hz,seed,n_samples,n_correct,accuracy,"
    "clipped_weights\n";

}  // namespace

std::filesystem::path resolve_out_dir(const RunConfig& cfg,
                                      const std::filesystem::path& out_dir) {
    return out_dir.empty() ? std::filesystem::path(cfg.out_dir) : out_dir;
}

std::filesystem::path weights_path(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    const std::filesystem::path p(cfg.weights_file);
    return p.is_absolute() ? p : resolve_out_dir(cfg, out_dir) / p;
}

Dataset load_split(const RunConfig& cfg, bool train_split) {
    const std::string& images = train_split ? cfg.dataset.train_images : cfg.dataset.test_images;
    const std::string& labels = train_split ? cfg.dataset.train_labels : cfg.dataset.test_labels;
    if (images.empty() || labels.empty()) {
        throw ConfigError(std::string("config: dataset.") +
                          (train_split ? "train_images/train_labels" : "test_images/test_labels") +
                          ": missing path");
    }
    const IdxDataset idx = load_idx(images, labels);
    const NetworkSpec spec = cfg.resolve_network();
    const bool flat = spec.input_shape.size() == 1;
    return idx.to_dataset(flat, train_split ? cfg.dataset.limit_train : cfg.dataset.limit_test);
}

void write_eval_csv(std::ostream& os, const AccuracyReport& r) {
    os << kEvalHeader;
    os << r.network << ',' << to_string(r.path) << ',' << (r.noise_enabled ? 1 : 0) << ','
       << fmt(r.noise_scale) << ',' << fmt(r.delta_f) << ',' << r.seed << ',' << r.n_samples
       << ',' << r.n_correct << ',' << fmt(r.accuracy, "%.6f") << ',' << r.clipped_weights
       << '\n';
}

int cmd_train(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
    const NetworkSpec spec = cfg.resolve_network();
    const Dataset data = load_split(cfg, /*train_split=*/true);
    const WeightSet ws = train(spec, data, cfg.train, cfg.devices.eom);

    const std::filesystem::path wpath = weights_path(cfg, out_dir);
    std::filesystem::create_directories(wpath.parent_path().empty()
                                            ? std::filesystem::path(".")
                                            : wpath.parent_path());
    save_weights(wpath, ws, spec);
    log << "trained " << spec.name << " on " << data.size() << " samples, " << cfg.train.epochs
        << " epochs -> " << wpath.string() << "\n";
    return 0;
}

int cmd_eval(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
    const NetworkSpec spec = cfg.resolve_network();
    const WeightSet ws = load_weights(weights_path(cfg, out_dir), spec);
    const Dataset data = load_split(cfg, /*train_split=*/false);

    const AccuracyReport report = evaluate(spec, ws, data, cfg.path, cfg.devices, cfg.encoding,
                                           cfg.noise_config(), cfg.seed, cfg.workers);

    const std::filesystem::path csv = resolve_out_dir(cfg, out_dir) / "eval.csv";
    auto f = open_out(csv);
    write_eval_csv(f, report);
    log << "eval " << spec.name << " path=" << to_string(report.path)
        << " accuracy=" << fmt(report.accuracy, "%.6f") << " -> " << csv.string() << "\n";
    return 0;
}

int cmd_power(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
    std::vector<NetworkSpec> specs;
    specs.reserve(cfg.power_networks.size());
    for (const std::string& name : cfg.power_networks) specs.push_back(zoo_lookup(name));

    const std::vector<PowerReport> reports = power_sweep(specs, cfg.power_backends, cfg.power);
    const std::filesystem::path csv = resolve_out_dir(cfg, out_dir) / "power.csv";
    auto f = open_out(csv);
    write_power_csv(f, reports);
    log << "power: " << reports.size() << " rows -> " << csv.string() << "\n";
    return 0;
}

int cmd_lower(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
    const NetworkSpec spec = cfg.resolve_network();
    const Backend backend = cfg.require_backend("lower");
    const LoweredGraph graph = lower(spec, backend);

    const std::filesystem::path path = resolve_out_dir(cfg, out_dir) / "netlist.json";
    auto f = open_out(path);
    f << netlist_json(graph).dump(2) << "\n";

    const DeviceCensus c = census(graph);
    log << "lowered " << spec.name << " (" << to_string(backend) << "): " << c.n_multipliers
        << " multipliers, " << c.n_summation_units << " summation units, " << c.n_eoms
        << " eoms, " << c.n_waveguides << " waveguides -> " << path.string() << "\n";
    return 0;
}

int cmd_sweep(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log) {
    if (cfg.sweep.values.empty()) throw ConfigError("config: sweep.values: missing");
    if (cfg.sweep.seeds.empty()) throw ConfigError("config: sweep.seeds: missing");
    if (cfg.sweep.backends.empty()) throw ConfigError("config: sweep.backends: missing");

    const NetworkSpec spec = cfg.resolve_network();
    const WeightSet ws = load_weights(weights_path(cfg, out_dir), spec);
    const Dataset data = load_split(cfg, /*train_split=*/false);

    // Cells keyed lexicographically: backend name, then zero-padded value
    // index. Rows land in key order no matter how cells are executed.
    std::map<std::string, std::vector<AccuracyReport>> cells;
    for (Backend backend : cfg.sweep.backends) {
        for (std::size_t vi = 0; vi < cfg.sweep.values.size(); ++vi) {
            char key[64];
            std::snprintf(key, sizeof(key), "%s|%06zu", to_string(backend).c_str(), vi);
            std::vector<AccuracyReport>& runs = cells[key];
            for (std::uint64_t seed : cfg.sweep.seeds) {
                NoiseConfig noise = cfg.noise_config();
                noise.enabled = true;
                if (cfg.sweep.param == "noise_scale") {
                    noise.noise_scale = cfg.sweep.values[vi];
                } else {
                    noise.delta_f = cfg.sweep.values[vi];
                }
                const EvalPath path =
                    backend == Backend::kMrr ? EvalPath::kMrr : EvalPath::kMzi;
                runs.push_back(evaluate(spec, ws, data, path, cfg.devices, cfg.encoding, noise,
                                        seed, cfg.workers));
            }
        }
    }

    const std::filesystem::path csv = resolve_out_dir(cfg, out_dir) / "sweep.csv";
    auto f = open_out(csv);
    f << "row,network,backend,param,value,seed,n_samples,n_correct,accuracy,accuracy_std,"
         "clipped_weights\n";
    for (const auto& [key, runs] : cells) {
        const std::string backend = key.substr(0, key.find('|'));
        const std::size_t vi = std::stoul(key.substr(key.find('|') + 1));
        const std::string value = fmt(cfg.sweep.values[vi]);

        double mean = 0.0;
        for (const AccuracyReport& r : runs) {
            f << "data," << r.network << ',' << backend << ',' << cfg.sweep.param << ',' << value
              << ',' << r.seed << ',' << r.n_samples << ',' << r.n_correct << ','
              << fmt(r.accuracy, "%.6f") << ",," << r.clipped_weights << '\n';
            mean += r.accuracy;
        }
        mean /= static_cast<double>(runs.size());
        double var = 0.0;
        for (const AccuracyReport& r : runs) {
            var += (r.accuracy - mean) * (r.accuracy - mean);
        }
        const double stdev = runs.size() > 1
                                 ? std::sqrt(var / static_cast<double>(runs.size() - 1))
                                 : 0.0;
        f << "summary," << spec.name << ',' << backend << ',' << cfg.sweep.param << ',' << value
          << ",," << data.size() << ",," << fmt(mean, "%.6f") << ',' << fmt(stdev, "%.6f") << ",\n";
    }
    log << "sweep: " << cells.size() << " cells x " << cfg.sweep.seeds.size() << " seeds -> "
        << csv.string() << "\n";
    return 0;
}

}  // namespace lumen::cli
