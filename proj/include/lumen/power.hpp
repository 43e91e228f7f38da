#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "lumen/lowering.hpp"

namespace lumen {

// Per-device steady-state power. Values are configuration-supplied; the
// shipped defaults are order-of-magnitude placeholders, not measurements.
struct PowerParams {
    double p_multiplier_mrr = 0.0;   // W per MRR
    double p_multiplier_mzi = 0.0;   // W per MZI (per physical device)
    double p_summation = 0.0;        // W per balanced-detector summation unit
    double p_eom = 0.0;              // W per EOM
    double p_laser_per_input = 0.0;  // W per encoded input channel
    double p_waveguide = 0.0;        // W per waveguide; passive, default 0

    void validate() const;
    double multiplier_power(Backend b) const {
        return b == Backend::kMrr ? p_multiplier_mrr : p_multiplier_mzi;
    }
};

struct PowerBreakdownRow {
    std::string label;  // "layer <i> <kind>" or "laser"
    double power_w = 0.0;
};

struct PowerReport {
    std::string network;
    Backend backend = Backend::kMrr;
    DeviceCensus census;
    std::size_t n_inputs = 0;

    double p_multipliers_w = 0.0;
    double p_summation_w = 0.0;
    double p_eom_w = 0.0;
    double p_laser_w = 0.0;
    double p_waveguide_w = 0.0;
    double p_total_w = 0.0;

    std::vector<PowerBreakdownRow> breakdown;
};

// total = n_mult * p_mult(backend) + n_sum * p_summation + n_eom * p_eom
//       + n_inputs * p_laser_per_input + n_wg * p_waveguide
PowerReport estimate_power(const DeviceCensus& c, Backend backend, const PowerParams& pp,
                           std::size_t n_inputs);

// estimate_power over the whole network plus a per-layer breakdown.
PowerReport power_report(const NetworkSpec& spec, Backend backend, const PowerParams& pp);

// One report per (spec, backend) pair, specs outermost, deterministic order.
std::vector<PowerReport> power_sweep(const std::vector<NetworkSpec>& specs,
                                     const std::vector<Backend>& backends,
                                     const PowerParams& pp);

// Fixed columns: network,backend,n_multipliers,n_summation,n_eom,
// p_total_mW,p_mult_mW,p_sum_mW,p_eom_mW,p_laser_mW
void write_power_csv(std::ostream& os, const std::vector<PowerReport>& reports);

}  // namespace lumen
