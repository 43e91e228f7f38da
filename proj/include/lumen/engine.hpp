#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lumen/devices.hpp"
#include "lumen/network.hpp"
#include "lumen/noise.hpp"
#include "lumen/rng.hpp"
#include "lumen/tensor.hpp"
#include "lumen/weights.hpp"

namespace lumen {

// Bridges signal units to optical watts: activations encode as
// P = x * p_fullscale, and trained weights map into the realizable device
// range through a per-layer scale that is undone digitally after detection.
struct EncodingConfig {
    double p_fullscale = 1e-3;  // W of optical power per unit activation

    // Per spec-layer overrides; empty vector or a non-positive entry selects
    // the automatic scale (smallest scale placing the layer in range).
    std::vector<double> weight_scale;

    void validate() const;
};

struct Dataset {
    std::vector<Tensor> inputs;
    std::vector<int> labels;

    std::size_t size() const { return inputs.size(); }
    void validate(std::size_t n_classes) const;
};

// Which forward path evaluate() runs: the noise-free reference or the
// device simulation on one of the two multiplier backends.
enum class EvalPath { kIdeal, kMrr, kMzi };

EvalPath eval_path_from_string(const std::string& s);
std::string to_string(EvalPath p);

struct AccuracyReport {
    std::string network;
    EvalPath path = EvalPath::kIdeal;
    std::size_t n_samples = 0;
    std::size_t n_correct = 0;
    double accuracy = 0.0;
    bool noise_enabled = false;
    double noise_scale = 0.0;
    double delta_f = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t clipped_weights = 0;
};

// Deterministic per-(seed, layer, index) initialization, uniform in the
// usual fan-in/fan-out limits; biases zero.
WeightSet init_weights(const NetworkSpec& spec, std::uint64_t seed);

// Noise-free reference pass; activations use the same EOM transfer as the
// photonic path so the two paths train and infer the same function.
Tensor forward_ideal(const NetworkSpec& spec, const WeightSet& ws, const Tensor& x,
                     const EomParams& eom);

// Weights calibrated onto devices once; reused across samples.
struct ProgrammedLayer {
    Tensor device_weights;  // achieved signed device weight per scalar weight
    double scale = 1.0;     // digital undo factor
};

struct ProgrammedNetwork {
    Backend backend = Backend::kMrr;
    std::vector<ProgrammedLayer> layers;      // slot per spec layer
    std::vector<std::uint64_t> node_base;     // first summation node id per layer
    std::uint64_t clipped_weights = 0;
};

ProgrammedNetwork program_network(const NetworkSpec& spec, const WeightSet& ws, Backend backend,
                                  const DeviceParams& dev, const EncodingConfig& enc);

Tensor forward_programmed(const NetworkSpec& spec, const ProgrammedNetwork& prog,
                          const WeightSet& ws, const Tensor& x, const DeviceParams& dev,
                          const EncodingConfig& enc, const NoiseConfig& noise,
                          const RngStream& rng, std::uint64_t sample_index);

// program_network + forward_programmed in one call; clipped_out, when given,
// receives the per-run clipped-weight count.
Tensor forward_photonic(const NetworkSpec& spec, const WeightSet& ws, const Tensor& x,
                        Backend backend, const DeviceParams& dev, const EncodingConfig& enc,
                        const NoiseConfig& noise, const RngStream& rng,
                        std::uint64_t sample_index, std::uint64_t* clipped_out = nullptr);

// Argmax classification accuracy. Bit-identical for any worker count: every
// sample's randomness is addressed by (seed, sample index, node, draw).
AccuracyReport evaluate(const NetworkSpec& spec, const WeightSet& ws, const Dataset& data,
                        EvalPath path, const DeviceParams& dev, const EncodingConfig& enc,
                        const NoiseConfig& noise, std::uint64_t seed, std::size_t n_workers = 1,
                        std::vector<int>* predictions_out = nullptr);

struct TrainConfig {
    double learning_rate = 0.1;
    std::size_t epochs = 5;
    std::size_t batch = 32;
    std::uint64_t seed = 1;
};

// Mini-batch SGD with softmax cross-entropy on the ideal path; deterministic
// for a fixed seed. Aborts with epoch/batch context if the loss diverges.
WeightSet train(const NetworkSpec& spec, const Dataset& data, const TrainConfig& cfg,
                const EomParams& eom);

}  // namespace lumen
