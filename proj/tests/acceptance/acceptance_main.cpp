// Acceptance suite: one checked criterion per --criterion value, one
// PASS/FAIL line each. Every tolerance is pinned here, in code.
//
// The desk-scale experiments prefer real MNIST IDX files under --mnist-dir;
// when they are absent the suite generates its synthetic digit corpus
// instead and says so in the status line.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "lumen/cli.hpp"
#include "lumen/config.hpp"
#include "lumen/constants.hpp"
#include "lumen/devices.hpp"
#include "lumen/engine.hpp"
#include "lumen/idx.hpp"
#include "lumen/lowering.hpp"
#include "lumen/noise.hpp"
#include "lumen/power.hpp"
#include "lumen/synth.hpp"
#include "lumen/weights.hpp"

namespace fs = std::filesystem;
using namespace lumen;

namespace {

struct Options {
    int criterion = 0;  // 0 = all
    fs::path work_dir = "acceptance_work";
    fs::path mnist_dir = "data/mnist";
    fs::path cli;
};

struct Failure {
    std::string detail;
};

void require(bool ok, const std::string& detail) {
    if (!ok) throw Failure{detail};
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

// ---------------------------------------------------------------- datasets

struct MnistFiles {
    fs::path train_images, train_labels, test_images, test_labels;
    bool real = false;
};

bool has_real_mnist(const fs::path& dir, MnistFiles* out) {
    const MnistFiles candidate = {dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte",
                                  dir / "t10k-images-idx3-ubyte", dir / "t10k-labels-idx1-ubyte",
                                  true};
    if (fs::exists(candidate.train_images) && fs::exists(candidate.train_labels) &&
        fs::exists(candidate.test_images) && fs::exists(candidate.test_labels)) {
        *out = candidate;
        return true;
    }
    return false;
}

MnistFiles resolve_dataset(const Options& opt, const fs::path& scratch) {
    MnistFiles files;
    if (has_real_mnist(opt.mnist_dir, &files)) return files;
    fs::create_directories(scratch);
    files = {scratch / "train-images-idx3-ubyte", scratch / "train-labels-idx1-ubyte",
             scratch / "t10k-images-idx3-ubyte", scratch / "t10k-labels-idx1-ubyte", false};
    if (!fs::exists(files.train_images)) {
        write_synthetic_digits(files.train_images, files.train_labels, 12000, 1001);
        write_synthetic_digits(files.test_images, files.test_labels, 2500, 2002);
    }
    return files;
}

// ------------------------------------------------------------- criterion 1

void criterion_physics(const Options&, std::string* note) {
    PhotodiodeParams pd;
    pd.lambda = 1550e-9;
    pd.eta = 1.0;
    const double resp = responsivity(pd);
    require(std::abs(resp - 1.2502) <= 1e-4,
            "responsivity(1550nm, eta=1) = " + fmt("%.6f", resp) + ", expected 1.2502 +- 1e-4");

    const double shot = shot_noise_sigma(1e-3, 0.0, 1e9);
    require(std::abs(shot - 5.661e-7) <= 1e-3 * 5.661e-7,
            "shot sigma = " + fmt("%.4e", shot) + ", expected 5.661e-7 +- 0.1%");

    const double thermal = thermal_noise_sigma(300.0, 1e9, 10e3);
    require(std::abs(thermal - 4.070e-8) <= 1e-3 * 4.070e-8,
            "thermal sigma = " + fmt("%.4e", thermal) + ", expected 4.070e-8 +- 0.1%");

    *note = "R=" + fmt("%.5f", resp) + " A/W, shot=" + fmt("%.4e", shot) +
            " A, thermal=" + fmt("%.4e", thermal) + " A";
}

// ------------------------------------------------------------- criterion 2

void criterion_mrr_identities(const Options&, std::string* note) {
    std::mt19937_64 gen(20240817);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * constants::pi);
    std::uniform_real_distribution<double> coupling(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        MrrParams m;
        m.a = 1.0;
        m.r1 = coupling(gen);
        m.r2 = coupling(gen);
        if (m.r1 >= 1.0 || m.r2 >= 1.0) continue;
        const double phi = phase(gen);
        const double err = std::abs(mrr_through(phi, m) + mrr_drop(phi, m) - 1.0);
        worst = std::max(worst, err);
    }
    require(worst <= 1e-12,
            "lossless through+drop deviates from 1 by " + fmt("%.3e", worst));

    MrrParams symmetric;  // a = 1, r1 = r2 = 0.9
    const double extinction = mrr_through(0.0, symmetric);
    require(extinction == 0.0, "on-resonance extinction is " + fmt("%.3e", extinction) +
                                   ", expected exactly 0");

    const double anti = mrr_through(constants::pi, symmetric);
    require(std::abs(anti - 0.98898) <= 1e-5,
            "through(pi) = " + fmt("%.6f", anti) + ", expected 0.98898 +- 1e-5");

    *note = "max |T_th + T_dr - 1| = " + fmt("%.2e", worst) + " over 1e5 draws";
}

// ------------------------------------------------------------- criterion 3

void criterion_calibration(const Options&, std::string* note) {
    const DeviceParams dev;
    std::mt19937_64 gen(77001);
    double worst = 0.0;
    for (Backend backend : {Backend::kMrr, Backend::kMzi}) {
        const WeightRange range = device_weight_range(backend, dev);
        std::uniform_real_distribution<double> targets(range.lo, range.hi);
        for (int i = 0; i < 10000; ++i) {
            const double target = targets(gen);
            const CalibrationResult res = calibrate(target, backend, dev);
            require(!res.clipped, "in-range target flagged clipped");
            worst = std::max(worst, std::abs(res.achieved - target));
        }
        const CalibrationResult above = calibrate(range.hi + 0.5, backend, dev);
        const CalibrationResult below = calibrate(range.lo - 0.5, backend, dev);
        require(above.clipped && below.clipped, "out-of-range targets must flag clipped");
        require(above.achieved == range.hi && below.achieved == range.lo,
                "clipped calibration must land on the range endpoint");
    }
    require(worst <= 1e-9, "calibration round-trip error " + fmt("%.3e", worst) + " > 1e-9");
    *note = "max round-trip error " + fmt("%.2e", worst) + " over 2x1e4 targets";
}

// ------------------------------------------------------------- criterion 4

void criterion_equivalence(const Options&, std::string* note) {
    std::mt19937_64 gen(424242);
    std::uniform_int_distribution<int> width(1, 8);
    std::uniform_int_distribution<int> depth(1, 3);
    std::uniform_real_distribution<double> weight(-1.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const DeviceParams dev;  // a = 1 (lossless), ideal MZI
    const EncodingConfig enc;
    const NoiseConfig off;
    const RngStream rng{5};

    double worst = 0.0;
    for (int net = 0; net < 100; ++net) {
        NetworkSpec spec;
        spec.name = "rnd" + std::to_string(net);
        const int n_layers = depth(gen);
        std::size_t prev = static_cast<std::size_t>(width(gen));
        spec.input_shape = {prev};
        for (int li = 0; li < n_layers; ++li) {
            const std::size_t next = static_cast<std::size_t>(width(gen));
            spec.layers.push_back(Layer::dense(prev, next));
            if (li + 1 < n_layers) spec.layers.push_back(Layer::activation());
            prev = next;
        }
        spec.layers.push_back(Layer::output(prev));

        WeightSet ws = init_weights(spec, 1);
        for (std::size_t li = 0; li < spec.layers.size(); ++li) {
            if (!spec.layers[li].has_weights()) continue;
            for (std::size_t i = 0; i < ws.layers[li].w.size(); ++i) {
                ws.layers[li].w[i] = weight(gen);
            }
            for (double& b : ws.layers[li].b) b = weight(gen);
        }

        const Backend backend = net % 2 == 0 ? Backend::kMrr : Backend::kMzi;
        const ProgrammedNetwork prog = program_network(spec, ws, backend, dev, enc);
        require(prog.clipped_weights == 0, "lossless programming must not clip");

        for (int trial = 0; trial < 100; ++trial) {
            Tensor x({spec.input_shape[0]});
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = unit(gen);
            const Tensor ideal = forward_ideal(spec, ws, x, dev.eom);
            const Tensor photonic =
                forward_programmed(spec, prog, ws, x, dev, enc, off, rng, 0);
            require(argmax(ideal) == argmax(photonic), "argmax mismatch on net " + spec.name);
            for (std::size_t i = 0; i < ideal.size(); ++i) {
                const double rel =
                    std::abs(photonic[i] - ideal[i]) / std::max(1.0, std::abs(ideal[i]));
                worst = std::max(worst, rel);
            }
        }
    }
    require(worst <= 1e-6, "ideal/photonic relative error " + fmt("%.3e", worst) + " > 1e-6");
    *note = "max relative logit error " + fmt("%.2e", worst) + " over 100 nets x 100 inputs";
}

// ------------------------------------------------------------- criterion 5

void criterion_noise_accuracy(const Options& opt, std::string* note) {
    const fs::path dir = opt.work_dir / "c5";
    fs::create_directories(dir);
    const MnistFiles files = resolve_dataset(opt, dir / "dataset");

    const Dataset train_ds =
        load_idx(files.train_images, files.train_labels).to_dataset(true);
    const Dataset test_ds = load_idx(files.test_images, files.test_labels).to_dataset(true);
    require(test_ds.size() >= 2000, "test split must hold at least 2000 samples");

    const NetworkSpec spec = zoo_lookup("mlp-784-16-10");
    TrainConfig tc;
    tc.learning_rate = 0.3;
    tc.epochs = 15;
    tc.batch = 32;
    tc.seed = 1;
    const WeightSet ws = train(spec, train_ds, tc, EomParams{});

    const DeviceParams dev;
    EncodingConfig enc;
    enc.p_fullscale = 1e-5;  // 10 uW full scale makes detector noise visible
    const NoiseConfig off;

    const AccuracyReport ideal =
        evaluate(spec, ws, test_ds, EvalPath::kIdeal, dev, enc, off, 1, 2);
    require(ideal.accuracy >= 0.93, "ideal test accuracy " + fmt("%.4f", ideal.accuracy) +
                                        " below the 0.93 gate");

    for (EvalPath path : {EvalPath::kMrr, EvalPath::kMzi}) {
        const AccuracyReport r = evaluate(spec, ws, test_ds, path, dev, enc, off, 1, 2);
        require(r.n_correct == ideal.n_correct,
                "photonic noise-off accuracy differs from ideal on " + to_string(path));
    }

    // noise_scale sweep, 10 seeds per point, both backends
    const std::vector<double> scales = {0.0, 1.0, 10.0, 100.0};
    std::ostringstream table;
    table << "backend,noise_scale,mean_accuracy,std_accuracy\n";
    std::string direction;
    for (EvalPath path : {EvalPath::kMrr, EvalPath::kMzi}) {
        std::vector<double> means;
        for (double scale : scales) {
            NoiseConfig noisy;
            noisy.enabled = true;
            noisy.delta_f = 5e9;
            noisy.noise_scale = scale;
            double sum = 0.0, sumsq = 0.0;
            for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                const double acc =
                    evaluate(spec, ws, test_ds, path, dev, enc, noisy, seed, 2).accuracy;
                sum += acc;
                sumsq += acc * acc;
            }
            const double mean = sum / 10.0;
            const double var = std::max(0.0, sumsq / 10.0 - mean * mean);
            means.push_back(mean);
            table << to_string(path) << ',' << fmt("%g", scale) << ',' << fmt("%.4f", mean)
                  << ',' << fmt("%.4f", std::sqrt(var)) << '\n';
        }
        for (std::size_t i = 0; i + 1 < means.size(); ++i) {
            require(means[i + 1] <= means[i] + 0.01,
                    to_string(path) + " mean accuracy rose from scale " + fmt("%g", scales[i]) +
                        " to " + fmt("%g", scales[i + 1]) + " beyond the 1pp slack");
        }
        direction += to_string(path) + "@100=" + fmt("%.3f", means.back()) + " ";

        // extreme noise approaches chance
        NoiseConfig extreme;
        extreme.enabled = true;
        extreme.delta_f = 5e9;
        extreme.noise_scale = 1e6;
        double sum = 0.0;
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            sum += evaluate(spec, ws, test_ds, path, dev, enc, extreme, seed, 2).accuracy;
        }
        const double chance = sum / 10.0;
        require(std::abs(chance - 0.10) <= 0.03, to_string(path) + " extreme-noise accuracy " +
                                                     fmt("%.4f", chance) + " outside 10% +- 3%");
    }

    std::ofstream(dir / "noise_accuracy.csv") << table.str();
    *note = std::string(files.real ? "mnist" : "synthetic digits") +
            ", ideal=" + fmt("%.4f", ideal.accuracy) + ", " + direction + "-> " +
            (dir / "noise_accuracy.csv").string();
}

// ------------------------------------------------------------- criterion 6

void criterion_power(const Options& opt, std::string* note) {
    const fs::path dir = opt.work_dir / "c6";
    fs::create_directories(dir);

    PowerParams pp;
    pp.p_multiplier_mrr = 1e-3;
    pp.p_multiplier_mzi = 0.8e-3;  // 2 * p_mzi > p_mrr: the census ratio rules
    pp.p_summation = 0.1e-3;
    pp.p_eom = 0.5e-3;
    pp.p_laser_per_input = 0.0;

    // hand-count anchor
    {
        const PowerReport r = power_report(make_mlp("mlp222", 2, {2}, 2), Backend::kMrr, pp);
        require(std::abs(r.p_total_w - 9.4e-3) <= 1e-12,
                "2-2-2 MLP total " + fmt("%.6e", r.p_total_w) + " W, expected 9.4 mW");
    }

    const std::vector<std::string> names = {"mlp3", "mlp5", "mlp9", "cnn3"};
    std::vector<NetworkSpec> specs;
    for (const std::string& n : names) specs.push_back(zoo_lookup(n));
    const std::vector<PowerReport> table =
        power_sweep(specs, {Backend::kMrr, Backend::kMzi}, pp);

    // totals match the one-line recomputation
    for (const PowerReport& r : table) {
        const double oracle =
            static_cast<double>(r.census.n_multipliers) * pp.multiplier_power(r.backend) +
            static_cast<double>(r.census.n_summation_units) * pp.p_summation +
            static_cast<double>(r.census.n_eoms) * pp.p_eom +
            static_cast<double>(r.n_inputs) * pp.p_laser_per_input;
        require(std::abs(r.p_total_w - oracle) <= 1e-12 * std::max(1.0, oracle),
                r.network + " total deviates from the census oracle");
    }

    // strictly increasing with depth, per backend (specs x backends layout)
    for (std::size_t b = 0; b < 2; ++b) {
        const double mlp3 = table[0 * 2 + b].p_total_w;
        const double mlp5 = table[1 * 2 + b].p_total_w;
        const double mlp9 = table[2 * 2 + b].p_total_w;
        require(mlp3 < mlp5 && mlp5 < mlp9, "totals must increase strictly with MLP depth");
    }

    // the MZI-MRR gap widens with multiplier count (networks ordered by
    // census here: mlp3 < mlp5 < mlp9 < cnn3)
    double prev_gap = -1.0;
    std::uint64_t prev_mult = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double gap = table[i * 2 + 1].p_total_w - table[i * 2 + 0].p_total_w;
        require(table[i * 2].census.n_multipliers > prev_mult, "census ordering broke");
        require(gap > prev_gap, "MZI-MRR gap failed to widen at " + names[i]);
        prev_gap = gap;
        prev_mult = table[i * 2].census.n_multipliers;
    }

    std::ofstream csv(dir / "power.csv");
    write_power_csv(csv, table);
    *note = "8 rows, gap mlp3 " + fmt("%.3f", (table[1].p_total_w - table[0].p_total_w) * 1e3) +
            " mW -> cnn3 " + fmt("%.3f", prev_gap * 1e3) + " mW, -> " +
            (dir / "power.csv").string();
}

// ------------------------------------------------------------- criterion 7

void run_cli(const Options& opt, const std::string& args) {
    const std::string cmd = opt.cli.string() + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc != 0) throw Failure{"command failed (" + std::to_string(rc) + "): " + cmd};
}

std::vector<char> slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    require(static_cast<bool>(f), "missing output file " + p.string());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void require_identical(const fs::path& a, const fs::path& b) {
    require(slurp(a) == slurp(b), "outputs differ: " + a.string() + " vs " + b.string());
}

void criterion_determinism(const Options& opt, std::string* note) {
    require(!opt.cli.empty() && fs::exists(opt.cli), "lumen-sim binary not found (pass --cli)");
    const fs::path dir = opt.work_dir / "c7";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const fs::path data = dir / "dataset";
    fs::create_directories(data);
    write_synthetic_digits(data / "train-img", data / "train-lab", 600, 11);
    write_synthetic_digits(data / "test-img", data / "test-lab", 300, 12);

    nlohmann::json cfg = {
        {"schema_version", 1},
        {"network", "mlp-784-16-10"},
        {"backend", "mrr"},
        {"seed", 7},
        {"workers", 2},
        {"noise", {{"enabled", true}, {"delta_f_hz", 5e9}, {"noise_scale", 10.0}}},
        {"encoding", {{"p_fullscale_w", 1e-5}}},
        {"train", {{"learning_rate", 0.3}, {"epochs", 2}, {"batch", 32}}},
        {"dataset",
         {{"train_images", (data / "train-img").string()},
          {"train_labels", (data / "train-lab").string()},
          {"test_images", (data / "test-img").string()},
          {"test_labels", (data / "test-lab").string()}}},
        {"sweep",
         {{"param", "noise_scale"},
          {"values", {0.0, 1.0, 10.0}},
          {"backends", {"mrr", "mzi"}},
          {"seeds", {1, 2, 3}}}},
        {"power_networks", {"mlp3", "cnn3"}}};
    const fs::path cfg_path = dir / "config.json";
    std::ofstream(cfg_path) << cfg.dump(2);

    const std::string base = "--config " + cfg_path.string();
    for (const char* run : {"runA", "runB"}) {
        const fs::path out = dir / run;
        run_cli(opt, "train " + base + " --out " + out.string());
        run_cli(opt, "eval " + base + " --out " + out.string());
        run_cli(opt, "power " + base + " --out " + out.string());
        run_cli(opt, "lower " + base + " --out " + out.string());
        run_cli(opt, "sweep " + base + " --out " + out.string());
    }
    for (const char* file :
         {"weights.json", "weights.bin", "eval.csv", "power.csv", "netlist.json", "sweep.csv"}) {
        require_identical(dir / "runA" / file, dir / "runB" / file);
    }

    // 18 data rows + 6 summary rows for the 3-value x 2-backend x 3-seed grid
    {
        std::ifstream f(dir / "runA" / "sweep.csv");
        std::string line;
        int data_rows = 0, summary_rows = 0;
        while (std::getline(f, line)) {
            if (line.rfind("data,", 0) == 0) ++data_rows;
            if (line.rfind("summary,", 0) == 0) ++summary_rows;
        }
        require(data_rows == 18 && summary_rows == 6,
                "sweep grid produced " + std::to_string(data_rows) + " data rows and " +
                    std::to_string(summary_rows) + " summaries, expected 18 and 6");
    }

    // engine-level: noisy evaluation identical across 1, 2 and 8 workers
    const NetworkSpec spec = zoo_lookup("mlp-784-16-10");
    const Dataset test_ds = load_idx(data / "test-img", data / "test-lab").to_dataset(true);
    const WeightSet ws = load_weights(dir / "runA" / "weights.json", spec);
    const DeviceParams dev;
    EncodingConfig enc;
    enc.p_fullscale = 1e-5;
    NoiseConfig noisy;
    noisy.enabled = true;
    noisy.delta_f = 5e9;
    noisy.noise_scale = 10.0;

    std::vector<int> p1, p2, p8;
    evaluate(spec, ws, test_ds, EvalPath::kMrr, dev, enc, noisy, 7, 1, &p1);
    evaluate(spec, ws, test_ds, EvalPath::kMrr, dev, enc, noisy, 7, 2, &p2);
    evaluate(spec, ws, test_ds, EvalPath::kMrr, dev, enc, noisy, 7, 8, &p8);
    require(p1 == p2 && p1 == p8, "noisy evaluation depends on the worker count");

    *note = "5 commands byte-identical across reruns; workers {1,2,8} bit-identical";
}

// ------------------------------------------------------------- criterion 8

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

void push_u32_be(std::vector<std::uint8_t>& v, std::uint32_t x) {
    v.push_back((x >> 24) & 0xFF);
    v.push_back((x >> 16) & 0xFF);
    v.push_back((x >> 8) & 0xFF);
    v.push_back(x & 0xFF);
}

void criterion_idx_parser(const Options& opt, std::string* note) {
    const fs::path dir = opt.work_dir / "c8";
    fs::remove_all(dir);
    fs::create_directories(dir);

    std::string source;
    MnistFiles real;
    if (has_real_mnist(opt.mnist_dir, &real)) {
        const IdxDataset ds = load_idx(real.test_images, real.test_labels);
        require(ds.count == 10000 && ds.rows == 28 && ds.cols == 28,
                "canonical MNIST test split should parse as 10000 x 28 x 28");
        source = "mnist t10k";
    } else {
        // canonical-structure fixture assembled byte by byte
        std::vector<std::uint8_t> img;
        push_u32_be(img, 0x00000803);
        push_u32_be(img, 3);
        push_u32_be(img, 28);
        push_u32_be(img, 28);
        for (int i = 0; i < 3 * 28 * 28; ++i) {
            img.push_back(static_cast<std::uint8_t>(i == 0 ? 255 : i % 251));
        }
        std::vector<std::uint8_t> lab;
        push_u32_be(lab, 0x00000801);
        push_u32_be(lab, 3);
        lab.insert(lab.end(), {5, 0, 9});
        write_bytes(dir / "img", img);
        write_bytes(dir / "lab", lab);

        const IdxDataset ds = load_idx(dir / "img", dir / "lab");
        require(ds.count == 3 && ds.rows == 28 && ds.cols == 28, "fixture failed to parse");
        require(ds.pixels[0] == 1.0, "pixel 255 must scale to exactly 1.0");
        require(ds.labels[0] == 5, "fixture labels misread");
        source = "canonical-structure fixture";
    }

    // wrong magic: a labels file offered as images
    {
        std::vector<std::uint8_t> lab;
        push_u32_be(lab, 0x00000801);
        push_u32_be(lab, 1);
        lab.push_back(3);
        write_bytes(dir / "lab_only", lab);
        bool ok = false;
        try {
            load_idx(dir / "lab_only", dir / "lab_only");
        } catch (const IdxError& e) {
            ok = e.kind() == IdxErrorKind::kWrongMagic && e.offset() == 0;
        }
        require(ok, "wrong-magic fixture not rejected as wrong magic at offset 0");
    }

    // truncated payload
    {
        std::vector<std::uint8_t> img;
        push_u32_be(img, 0x00000803);
        push_u32_be(img, 2);
        push_u32_be(img, 28);
        push_u32_be(img, 28);
        for (int i = 0; i < 900; ++i) img.push_back(1);  // 668 bytes short
        write_bytes(dir / "img_trunc", img);
        std::vector<std::uint8_t> lab;
        push_u32_be(lab, 0x00000801);
        push_u32_be(lab, 2);
        lab.insert(lab.end(), {1, 2});
        write_bytes(dir / "lab2", lab);
        bool ok = false;
        try {
            load_idx(dir / "img_trunc", dir / "lab2");
        } catch (const IdxError& e) {
            ok = e.kind() == IdxErrorKind::kTruncated;
        }
        require(ok, "truncated fixture not rejected as truncated");
    }

    // count mismatch
    {
        std::vector<std::uint8_t> img;
        push_u32_be(img, 0x00000803);
        push_u32_be(img, 1);
        push_u32_be(img, 2);
        push_u32_be(img, 2);
        img.insert(img.end(), {9, 9, 9, 9});
        write_bytes(dir / "img1", img);
        std::vector<std::uint8_t> lab;
        push_u32_be(lab, 0x00000801);
        push_u32_be(lab, 2);
        lab.insert(lab.end(), {1, 2});
        write_bytes(dir / "lab_mismatch", lab);
        bool ok = false;
        try {
            load_idx(dir / "img1", dir / "lab_mismatch");
        } catch (const IdxError& e) {
            ok = e.kind() == IdxErrorKind::kCountMismatch;
        }
        require(ok, "count-mismatch fixture not rejected");
    }

    *note = "accepted " + source + "; rejected wrong-magic/truncated/count-mismatch";
}

// ------------------------------------------------------------------ driver

struct Criterion {
    int number;
    const char* name;
    std::function<void(const Options&, std::string*)> run;
};

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        const auto next = [&]() -> std::string {
            if (i + 1 >= argc) {
                std::fprintf(stderr, "missing value after %s\n", arg.c_str());
                std::exit(2);
            }
            return argv[++i];
        };
        if (arg == "--criterion") {
            opt.criterion = std::stoi(next());
        } else if (arg == "--work-dir") {
            opt.work_dir = next();
        } else if (arg == "--mnist-dir") {
            opt.mnist_dir = next();
        } else if (arg == "--cli") {
            opt.cli = next();
        } else {
            std::fprintf(stderr, "unknown argument %s\n", arg.c_str());
            return 2;
        }
    }
    fs::create_directories(opt.work_dir);

    const std::vector<Criterion> criteria = {
        {1, "physics unit checks", criterion_physics},
        {2, "mrr transfer identities", criterion_mrr_identities},
        {3, "calibration round-trip", criterion_calibration},
        {4, "ideal/photonic equivalence", criterion_equivalence},
        {5, "desk-scale noise-accuracy reproduction", criterion_noise_accuracy},
        {6, "desk-scale power estimation", criterion_power},
        {7, "determinism", criterion_determinism},
        {8, "idx parser", criterion_idx_parser},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        if (opt.criterion != 0 && opt.criterion != c.number) continue;
        try {
            std::string note;
            c.run(opt, &note);
            std::printf("[PASS] criterion %d: %s (%s)\n", c.number, c.name, note.c_str());
        } catch (const Failure& f) {
            std::printf("[FAIL] criterion %d: %s: %s\n", c.number, c.name, f.detail.c_str());
            ++failures;
        } catch (const std::exception& e) {
            std::printf("[FAIL] criterion %d: %s: unexpected error: %s\n", c.number, c.name,
                        e.what());
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
