#include "lumen/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "lumen/error.hpp"

namespace lumen {

void EncodingConfig::validate() const {
    if (p_fullscale <= 0.0) throw ConfigError("encoding: p_fullscale must be positive");
    for (double s : weight_scale) {
        if (!std::isfinite(s)) throw ConfigError("encoding: weight_scale must be finite");
    }
}

void Dataset::validate(std::size_t n_classes) const {
    if (inputs.size() != labels.size()) {
        throw DataError("dataset has " + std::to_string(inputs.size()) + " inputs but " +
                        std::to_string(labels.size()) + " labels");
    }
    for (int l : labels) {
        if (l < 0 || static_cast<std::size_t>(l) >= n_classes) {
            throw DataError("dataset label " + std::to_string(l) + " outside 0.." +
                            std::to_string(n_classes - 1));
        }
    }
}

namespace {

void check_input_shapes(const NetworkSpec& spec, const Dataset& data) {
    for (std::size_t i = 0; i < data.inputs.size(); ++i) {
        if (data.inputs[i].shape() != spec.input_shape) {
            throw DataError("sample " + std::to_string(i) + " shape " +
                            data.inputs[i].shape_str() + " does not match network input");
        }
    }
}

}  // namespace

EvalPath eval_path_from_string(const std::string& s) {
    if (s == "ideal") return EvalPath::kIdeal;
    if (s == "mrr") return EvalPath::kMrr;
    if (s == "mzi") return EvalPath::kMzi;
    throw ConfigError("unknown path '" + s + "' (expected 'ideal', 'mrr' or 'mzi')");
}

std::string to_string(EvalPath p) {
    switch (p) {
        case EvalPath::kIdeal: return "ideal";
        case EvalPath::kMrr: return "mrr";
        case EvalPath::kMzi: return "mzi";
    }
    return "?";
}

namespace {

std::vector<std::size_t> dense_w_shape(const Layer& l) { return {l.out, l.in}; }
std::vector<std::size_t> conv_w_shape(const Layer& l) { return {l.kh, l.kw, l.cin, l.cout}; }

Tensor dense_forward(const Layer& l, const Tensor& w, const std::vector<double>& b,
                     const Tensor& x) {
    Tensor z({l.out});
    for (std::size_t j = 0; j < l.out; ++j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < l.in; ++k) acc += w.at(j, k) * x[k];
        z[j] = acc + b[j];
    }
    return z;
}

Tensor add_channel_bias(Tensor t, const std::vector<double>& b) {
    const std::size_t c = t.extent(2);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += b[i % c];
    return t;
}

Tensor eom_map(const Tensor& x, const EomParams& eom) {
    Tensor y(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = eom_activation(x[i], eom);
    return y;
}

struct ConvGeometry {
    std::size_t h = 0, w = 0, out_h = 0, out_w = 0;
    std::ptrdiff_t pad_top = 0, pad_left = 0;
};

ConvGeometry conv_geometry(const Layer& l, const std::vector<std::size_t>& in_shape) {
    ConvGeometry g;
    g.h = in_shape[0];
    g.w = in_shape[1];
    if (l.padding == Padding::kValid) {
        g.out_h = (g.h - l.kh) / l.stride + 1;
        g.out_w = (g.w - l.kw) / l.stride + 1;
    } else {
        g.out_h = (g.h + l.stride - 1) / l.stride;
        g.out_w = (g.w + l.stride - 1) / l.stride;
        const std::size_t need_h = (g.out_h - 1) * l.stride + l.kh;
        const std::size_t need_w = (g.out_w - 1) * l.stride + l.kw;
        g.pad_top = need_h > g.h ? static_cast<std::ptrdiff_t>((need_h - g.h) / 2) : 0;
        g.pad_left = need_w > g.w ? static_cast<std::ptrdiff_t>((need_w - g.w) / 2) : 0;
    }
    return g;
}

}  // namespace

WeightSet init_weights(const NetworkSpec& spec, std::uint64_t seed) {
    spec.validate();
    RngStream rng{seed};
    WeightSet ws;
    ws.layers.resize(spec.layers.size());
    for (std::size_t li = 0; li < spec.layers.size(); ++li) {
        const Layer& l = spec.layers[li];
        if (!l.has_weights()) continue;
        const bool dense = l.kind == LayerKind::kDense;
        const std::size_t fan_in = dense ? l.in : l.kh * l.kw * l.cin;
        const std::size_t fan_out = dense ? l.out : l.cout;
        const double lim = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Tensor w(dense ? dense_w_shape(l) : conv_w_shape(l));
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] = lim * (2.0 * rng.uniform(li, 0, i) - 1.0);
        }
        ws.layers[li].w = std::move(w);
        ws.layers[li].b.assign(fan_out, 0.0);
    }
    return ws;
}

Tensor forward_ideal(const NetworkSpec& spec, const WeightSet& ws, const Tensor& x,
                     const EomParams& eom) {
    ws.validate_against(spec);
    Tensor cur = x;
    for (std::size_t li = 0; li < spec.layers.size(); ++li) {
        const Layer& l = spec.layers[li];
        switch (l.kind) {
            case LayerKind::kDense:
                if (cur.rank() != 1 || cur.size() != l.in) {
                    throw NumericError("layer " + std::to_string(li) + ": dense expects [" +
                                       std::to_string(l.in) + "], got " + cur.shape_str());
                }
                cur = dense_forward(l, ws.layers[li].w, ws.layers[li].b, cur);
                break;
            case LayerKind::kConv2D:
                cur = add_channel_bias(conv2d(cur, ws.layers[li].w, l.stride, l.padding),
                                       ws.layers[li].b);
                break;
            case LayerKind::kMaxPool:
                cur = maxpool2d(cur, l.pool, l.pool, l.pool_stride);
                break;
            case LayerKind::kFlatten:
                cur = flatten(cur);
                break;
            case LayerKind::kActivation:
                cur = eom_map(cur, eom);
                break;
            case LayerKind::kOutput:
                if (cur.rank() != 1 || cur.size() != l.logits) {
                    throw NumericError("output layer: expected " + std::to_string(l.logits) +
                                       " logits, got " + cur.shape_str());
                }
                break;
        }
    }
    return cur;
}

namespace {

// Smallest scale placing every weight of the layer inside the signed device
// range; sides of the range that cannot host a sign are left to clip.
double auto_scale(const Tensor& w, const WeightRange& range) {
    double max_pos = 0.0, max_neg = 0.0;
    for (double v : w.values()) {
        if (v > max_pos) max_pos = v;
        if (-v > max_neg) max_neg = -v;
    }
    double s = 0.0;
    if (max_pos > 0.0 && range.hi > 0.0) s = std::max(s, max_pos / range.hi);
    if (max_neg > 0.0 && range.lo < 0.0) s = std::max(s, max_neg / -range.lo);
    // headroom so the boundary weight cannot round an ulp past the range
    return s > 0.0 ? s * (1.0 + 1e-12) : 1.0;
}

// Push-pull decomposition: the active arm carries the magnitude above the
// parked arm's floor.
double program_mzi_pair(double target, const DeviceParams& dev, bool* clipped) {
    const WeightRange single = device_weight_range(Backend::kMzi, dev);
    const double floor = single.lo;
    const double magnitude = std::abs(target) + floor;
    const CalibrationResult active = calibrate(magnitude, Backend::kMzi, dev);
    const CalibrationResult parked = calibrate(floor, Backend::kMzi, dev);
    *clipped = active.clipped || parked.clipped;
    const double achieved = active.achieved - parked.achieved;
    return target < 0.0 ? -achieved : achieved;
}

}  // namespace

ProgrammedNetwork program_network(const NetworkSpec& spec, const WeightSet& ws, Backend backend,
                                  const DeviceParams& dev, const EncodingConfig& enc) {
    spec.validate();
    ws.validate_against(spec);
    dev.validate();
    enc.validate();
    if (!enc.weight_scale.empty() && enc.weight_scale.size() != spec.layers.size()) {
        throw ConfigError("encoding: weight_scale must have one entry per layer (" +
                          std::to_string(spec.layers.size()) + "), got " +
                          std::to_string(enc.weight_scale.size()));
    }

    const WeightRange range = signed_weight_range(backend, dev);

    ProgrammedNetwork prog;
    prog.backend = backend;
    prog.layers.resize(spec.layers.size());
    prog.node_base.resize(spec.layers.size(), 0);

    std::uint64_t next_node = 0;
    for (std::size_t li = 0; li < spec.layers.size(); ++li) {
        const Layer& l = spec.layers[li];
        prog.node_base[li] = next_node;
        if (!l.has_weights()) continue;
        next_node += l.kind == LayerKind::kDense ? l.out : l.cout;

        const Tensor& w = ws.layers[li].w;
        double scale = 0.0;
        if (li < enc.weight_scale.size()) scale = enc.weight_scale[li];
        if (scale <= 0.0) scale = auto_scale(w, range);

        Tensor device(w.shape());
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double target = w[i] / scale;
            bool clipped = false;
            if (backend == Backend::kMrr) {
                const CalibrationResult res = calibrate(target, Backend::kMrr, dev);
                device[i] = res.achieved;
                clipped = res.clipped;
            } else {
                device[i] = program_mzi_pair(target, dev, &clipped);
            }
            if (clipped) ++prog.clipped_weights;
        }
        prog.layers[li].device_weights = std::move(device);
        prog.layers[li].scale = scale;
    }
    return prog;
}

namespace {

void check_encodable(const Tensor& x, std::size_t layer_index) {
    for (double v : x.values()) {
        if (v < 0.0) {
            throw NumericError("layer " + std::to_string(layer_index) +
                               ": negative activation cannot be encoded as optical power");
        }
    }
}

}  // namespace

Tensor forward_programmed(const NetworkSpec& spec, const ProgrammedNetwork& prog,
                          const WeightSet& ws, const Tensor& x, const DeviceParams& dev,
                          const EncodingConfig& enc, const NoiseConfig& noise,
                          const RngStream& rng, std::uint64_t sample_index) {
    const double resp = responsivity(dev.photodiode);
    const double gain = resp * enc.p_fullscale;  // A per unit activation

    Tensor cur = x;
    for (std::size_t li = 0; li < spec.layers.size(); ++li) {
        const Layer& l = spec.layers[li];
        switch (l.kind) {
            case LayerKind::kDense: {
                check_encodable(cur, li);
                if (cur.rank() != 1 || cur.size() != l.in) {
                    throw NumericError("layer " + std::to_string(li) + ": dense expects [" +
                                       std::to_string(l.in) + "], got " + cur.shape_str());
                }
                const Tensor& wd = prog.layers[li].device_weights;
                const double scale = prog.layers[li].scale;
                Tensor z({l.out});
                for (std::size_t j = 0; j < l.out; ++j) {
                    double acc = 0.0;
                    for (std::size_t k = 0; k < l.in; ++k) acc += wd.at(j, k) * cur[k];
                    // photodiode current of the balanced pair, then back to
                    // signal units with the digital scale undo
                    const double i_ph = gain * acc;
                    const double i_noisy = sample_noisy_current(
                        i_ph, noise, rng, sample_index, prog.node_base[li] + j, 0);
                    z[j] = i_noisy / gain * scale + ws.layers[li].b[j];
                }
                cur = std::move(z);
                break;
            }
            case LayerKind::kConv2D: {
                check_encodable(cur, li);
                if (cur.rank() != 3 || cur.extent(2) != l.cin) {
                    throw NumericError("layer " + std::to_string(li) + ": conv expects HxWx" +
                                       std::to_string(l.cin) + ", got " + cur.shape_str());
                }
                const ConvGeometry g = conv_geometry(l, cur.shape());
                const Tensor& wd = prog.layers[li].device_weights;
                const double scale = prog.layers[li].scale;
                Tensor z({g.out_h, g.out_w, l.cout});
                for (std::size_t oy = 0; oy < g.out_h; ++oy) {
                    for (std::size_t ox = 0; ox < g.out_w; ++ox) {
                        for (std::size_t oc = 0; oc < l.cout; ++oc) {
                            double acc = 0.0;
                            for (std::size_t ky = 0; ky < l.kh; ++ky) {
                                const std::ptrdiff_t iy =
                                    static_cast<std::ptrdiff_t>(oy * l.stride + ky) - g.pad_top;
                                if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) continue;
                                for (std::size_t kx = 0; kx < l.kw; ++kx) {
                                    const std::ptrdiff_t ix =
                                        static_cast<std::ptrdiff_t>(ox * l.stride + kx) -
                                        g.pad_left;
                                    if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.w)) continue;
                                    for (std::size_t ic = 0; ic < l.cin; ++ic) {
                                        acc += wd[((ky * l.kw + kx) * l.cin + ic) * l.cout + oc] *
                                               cur[(static_cast<std::size_t>(iy) * g.w +
                                                    static_cast<std::size_t>(ix)) * l.cin + ic];
                                    }
                                }
                            }
                            const double i_ph = gain * acc;
                            const double i_noisy = sample_noisy_current(
                                i_ph, noise, rng, sample_index, prog.node_base[li] + oc,
                                oy * g.out_w + ox);
                            z[(oy * g.out_w + ox) * l.cout + oc] =
                                i_noisy / gain * scale + ws.layers[li].b[oc];
                        }
                    }
                }
                cur = std::move(z);
                break;
            }
            case LayerKind::kMaxPool:
                cur = maxpool2d(cur, l.pool, l.pool, l.pool_stride);
                break;
            case LayerKind::kFlatten:
                cur = flatten(cur);
                break;
            case LayerKind::kActivation:
                cur = eom_map(cur, dev.eom);
                break;
            case LayerKind::kOutput:
                break;
        }
    }
    return cur;
}

Tensor forward_photonic(const NetworkSpec& spec, const WeightSet& ws, const Tensor& x,
                        Backend backend, const DeviceParams& dev, const EncodingConfig& enc,
                        const NoiseConfig& noise, const RngStream& rng,
                        std::uint64_t sample_index, std::uint64_t* clipped_out) {
    const ProgrammedNetwork prog = program_network(spec, ws, backend, dev, enc);
    if (clipped_out) *clipped_out = prog.clipped_weights;
    return forward_programmed(spec, prog, ws, x, dev, enc, noise, rng, sample_index);
}

AccuracyReport evaluate(const NetworkSpec& spec, const WeightSet& ws, const Dataset& data,
                        EvalPath path, const DeviceParams& dev, const EncodingConfig& enc,
                        const NoiseConfig& noise, std::uint64_t seed, std::size_t n_workers,
                        std::vector<int>* predictions_out) {
    spec.validate();
    ws.validate_against(spec);
    if (data.size() == 0) throw DataError("evaluate: empty dataset");
    data.validate(spec.logits_dim());
    check_input_shapes(spec, data);

    AccuracyReport report;
    report.network = spec.name;
    report.path = path;
    report.n_samples = data.size();
    report.noise_enabled = noise.enabled;
    report.noise_scale = noise.noise_scale;
    report.delta_f = noise.delta_f;
    report.seed = seed;

    ProgrammedNetwork prog;
    const bool photonic = path != EvalPath::kIdeal;
    if (photonic) {
        const Backend backend = path == EvalPath::kMrr ? Backend::kMrr : Backend::kMzi;
        prog = program_network(spec, ws, backend, dev, enc);
        report.clipped_weights = prog.clipped_weights;
    }

    const RngStream rng{seed};
    std::vector<int> predictions(data.size(), -1);

    const auto run_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Tensor logits =
                photonic ? forward_programmed(spec, prog, ws, data.inputs[i], dev, enc, noise,
                                              rng, i)
                         : forward_ideal(spec, ws, data.inputs[i], dev.eom);
            predictions[i] = static_cast<int>(argmax(logits));
        }
    };

    n_workers = std::max<std::size_t>(1, std::min(n_workers, data.size()));
    if (n_workers == 1) {
        run_range(0, data.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (data.size() + n_workers - 1) / n_workers;
        for (std::size_t w = 0; w < n_workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(begin + chunk, data.size());
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (std::thread& t : pool) t.join();
    }

    std::size_t correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (predictions[i] == data.labels[i]) ++correct;
    }
    report.n_correct = correct;
    report.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    if (predictions_out) *predictions_out = std::move(predictions);
    return report;
}

// ---------------------------------------------------------------------------
// training

namespace {

struct LayerGrads {
    Tensor w;
    std::vector<double> b;
};

// Forward pass keeping every layer input for the backward sweep.
Tensor forward_cached(const NetworkSpec& spec, const WeightSet& ws, const Tensor& x,
                      const EomParams& eom, std::vector<Tensor>& cache) {
    cache.clear();
    cache.reserve(spec.layers.size());
    Tensor cur = x;
    for (std::size_t li = 0; li < spec.layers.size(); ++li) {
        const Layer& l = spec.layers[li];
        cache.push_back(cur);
        switch (l.kind) {
            case LayerKind::kDense:
                cur = dense_forward(l, ws.layers[li].w, ws.layers[li].b, cur);
                break;
            case LayerKind::kConv2D:
                cur = add_channel_bias(conv2d(cur, ws.layers[li].w, l.stride, l.padding),
                                       ws.layers[li].b);
                break;
            case LayerKind::kMaxPool:
                cur = maxpool2d(cur, l.pool, l.pool, l.pool_stride);
                break;
            case LayerKind::kFlatten:
                cur = flatten(cur);
                break;
            case LayerKind::kActivation:
                cur = eom_map(cur, eom);
                break;
            case LayerKind::kOutput:
                break;
        }
    }
    return cur;
}

void backward(const NetworkSpec& spec, const WeightSet& ws, const std::vector<Tensor>& cache,
              Tensor grad, const EomParams& eom, std::vector<LayerGrads>& grads) {
    for (std::size_t ri = spec.layers.size(); ri-- > 0;) {
        const Layer& l = spec.layers[ri];
        const Tensor& input = cache[ri];
        switch (l.kind) {
            case LayerKind::kOutput:
                break;
            case LayerKind::kActivation: {
                Tensor g(input.shape());
                for (std::size_t i = 0; i < input.size(); ++i) {
                    g[i] = grad[i] * eom_activation_grad(input[i], eom);
                }
                grad = std::move(g);
                break;
            }
            case LayerKind::kFlatten:
                grad = Tensor(input.shape(), grad.values());
                break;
            case LayerKind::kMaxPool: {
                const std::size_t h = input.extent(0), w = input.extent(1), c = input.extent(2);
                const std::size_t out_h = (h - l.pool) / l.pool_stride + 1;
                const std::size_t out_w = (w - l.pool) / l.pool_stride + 1;
                Tensor g(input.shape());
                for (std::size_t oy = 0; oy < out_h; ++oy) {
                    for (std::size_t ox = 0; ox < out_w; ++ox) {
                        for (std::size_t ic = 0; ic < c; ++ic) {
                            std::size_t best = ((oy * l.pool_stride) * w + ox * l.pool_stride) * c +
                                               ic;
                            for (std::size_t py = 0; py < l.pool; ++py) {
                                for (std::size_t px = 0; px < l.pool; ++px) {
                                    const std::size_t idx =
                                        ((oy * l.pool_stride + py) * w +
                                         (ox * l.pool_stride + px)) * c + ic;
                                    if (input[idx] > input[best]) best = idx;
                                }
                            }
                            g[best] += grad[(oy * out_w + ox) * c + ic];
                        }
                    }
                }
                grad = std::move(g);
                break;
            }
            case LayerKind::kDense: {
                LayerGrads& lg = grads[ri];
                Tensor g({l.in});
                for (std::size_t j = 0; j < l.out; ++j) {
                    const double gj = grad[j];
                    lg.b[j] += gj;
                    for (std::size_t k = 0; k < l.in; ++k) {
                        lg.w.at(j, k) += gj * input[k];
                        g[k] += ws.layers[ri].w.at(j, k) * gj;
                    }
                }
                grad = std::move(g);
                break;
            }
            case LayerKind::kConv2D: {
                LayerGrads& lg = grads[ri];
                const ConvGeometry geo = conv_geometry(l, input.shape());
                Tensor g(input.shape());
                const Tensor& w = ws.layers[ri].w;
                for (std::size_t oy = 0; oy < geo.out_h; ++oy) {
                    for (std::size_t ox = 0; ox < geo.out_w; ++ox) {
                        for (std::size_t oc = 0; oc < l.cout; ++oc) {
                            const double go = grad[(oy * geo.out_w + ox) * l.cout + oc];
                            if (go == 0.0) continue;
                            lg.b[oc] += go;
                            for (std::size_t ky = 0; ky < l.kh; ++ky) {
                                const std::ptrdiff_t iy =
                                    static_cast<std::ptrdiff_t>(oy * l.stride + ky) - geo.pad_top;
                                if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(geo.h)) continue;
                                for (std::size_t kx = 0; kx < l.kw; ++kx) {
                                    const std::ptrdiff_t ix =
                                        static_cast<std::ptrdiff_t>(ox * l.stride + kx) -
                                        geo.pad_left;
                                    if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(geo.w)) {
                                        continue;
                                    }
                                    const std::size_t base =
                                        (static_cast<std::size_t>(iy) * geo.w +
                                         static_cast<std::size_t>(ix)) * l.cin;
                                    for (std::size_t ic = 0; ic < l.cin; ++ic) {
                                        const std::size_t kidx =
                                            ((ky * l.kw + kx) * l.cin + ic) * l.cout + oc;
                                        lg.w[kidx] += go * input[base + ic];
                                        g[base + ic] += go * w[kidx];
                                    }
                                }
                            }
                        }
                    }
                }
                grad = std::move(g);
                break;
            }
        }
    }
}

}  // namespace

WeightSet train(const NetworkSpec& spec, const Dataset& data, const TrainConfig& cfg,
                const EomParams& eom) {
    spec.validate();
    if (spec.census_only) {
        throw ConfigError("network '" + spec.name + "' is census-only and cannot be trained");
    }
    data.validate(spec.logits_dim());
    if (data.size() == 0) throw DataError("train: empty dataset");
    check_input_shapes(spec, data);
    if (cfg.batch == 0) throw ConfigError("train: batch size must be positive");

    WeightSet ws = init_weights(spec, cfg.seed);
    if (cfg.epochs == 0) return ws;

    const std::size_t n = data.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    const RngStream shuffle_rng{cfg.seed ^ 0x5EEDF00Dull};
    std::vector<Tensor> cache;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        // Fisher-Yates driven by counter-based draws: deterministic
        for (std::size_t i = n; i-- > 1;) {
            const std::size_t j = static_cast<std::size_t>(
                shuffle_rng.uniform(epoch, 1, i) * static_cast<double>(i + 1));
            std::swap(order[i], order[std::min(j, i)]);
        }

        for (std::size_t start = 0, batch_idx = 0; start < n; start += cfg.batch, ++batch_idx) {
            const std::size_t end = std::min(start + cfg.batch, n);
            const double batch_n = static_cast<double>(end - start);

            std::vector<LayerGrads> grads(spec.layers.size());
            for (std::size_t li = 0; li < spec.layers.size(); ++li) {
                if (!spec.layers[li].has_weights()) continue;
                grads[li].w = Tensor(ws.layers[li].w.shape());
                grads[li].b.assign(ws.layers[li].b.size(), 0.0);
            }

            double batch_loss = 0.0;
            try {
                for (std::size_t s = start; s < end; ++s) {
                    const std::size_t idx = order[s];
                    const Tensor logits = forward_cached(spec, ws, data.inputs[idx], eom, cache);
                    const Tensor probs = softmax(logits);
                    const int label = data.labels[idx];
                    batch_loss += -std::log(std::max(probs[static_cast<std::size_t>(label)],
                                                     std::numeric_limits<double>::min()));
                    Tensor grad = probs;
                    grad[static_cast<std::size_t>(label)] -= 1.0;
                    backward(spec, ws, cache, std::move(grad), eom, grads);
                }
            } catch (const NumericError& e) {
                throw NumericError("training diverged at epoch " + std::to_string(epoch) +
                                   " batch " + std::to_string(batch_idx) + ": " + e.what());
            }
            if (!std::isfinite(batch_loss)) {
                throw NumericError("training diverged (non-finite loss) at epoch " +
                                   std::to_string(epoch) + " batch " + std::to_string(batch_idx));
            }

            const double step = cfg.learning_rate / batch_n;
            for (std::size_t li = 0; li < spec.layers.size(); ++li) {
                if (!spec.layers[li].has_weights()) continue;
                Tensor& w = ws.layers[li].w;
                for (std::size_t i = 0; i < w.size(); ++i) w[i] -= step * grads[li].w[i];
                for (std::size_t i = 0; i < ws.layers[li].b.size(); ++i) {
                    ws.layers[li].b[i] -= step * grads[li].b[i];
                }
            }
        }
    }
    ws.validate_against(spec);
    return ws;
}

}  // namespace lumen
