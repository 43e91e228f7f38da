#include "lumen/power.hpp"

#include <cstdio>

#include "lumen/error.hpp"

namespace lumen {

void PowerParams::validate() const {
    const double all[] = {p_multiplier_mrr, p_multiplier_mzi, p_summation,
                          p_eom,            p_laser_per_input, p_waveguide};
    for (double v : all) {
        if (v < 0.0) throw ConfigError("power: device powers must be nonnegative");
    }
}

namespace {

double class_total(const DeviceCensus& c, Backend backend, const PowerParams& pp,
                   std::size_t n_inputs, double* mult, double* sum, double* eom, double* laser,
                   double* wg) {
    *mult = static_cast<double>(c.n_multipliers) * pp.multiplier_power(backend);
    *sum = static_cast<double>(c.n_summation_units) * pp.p_summation;
    *eom = static_cast<double>(c.n_eoms) * pp.p_eom;
    *laser = static_cast<double>(n_inputs) * pp.p_laser_per_input;
    *wg = static_cast<double>(c.n_waveguides) * pp.p_waveguide;
    return *mult + *sum + *eom + *laser + *wg;
}

std::string format_mw(double watts) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", watts * 1e3);
    return buf;
}

}  // namespace

PowerReport estimate_power(const DeviceCensus& c, Backend backend, const PowerParams& pp,
                           std::size_t n_inputs) {
    pp.validate();
    PowerReport r;
    r.backend = backend;
    r.census = c;
    r.n_inputs = n_inputs;
    r.p_total_w = class_total(c, backend, pp, n_inputs, &r.p_multipliers_w, &r.p_summation_w,
                              &r.p_eom_w, &r.p_laser_w, &r.p_waveguide_w);
    return r;
}

PowerReport power_report(const NetworkSpec& spec, Backend backend, const PowerParams& pp) {
    const std::vector<DeviceCensus> per_layer = census_per_layer(spec, backend);
    DeviceCensus total;
    for (const DeviceCensus& c : per_layer) total += c;

    PowerReport r = estimate_power(total, backend, pp, encoded_input_channels(spec));
    r.network = spec.name;

    for (std::size_t i = 0; i < per_layer.size(); ++i) {
        double m, s, e, l, w;
        const double p = class_total(per_layer[i], backend, pp, 0, &m, &s, &e, &l, &w);
        r.breakdown.push_back(
            {"layer " + std::to_string(i) + " " + to_string(spec.layers[i].kind), p});
    }
    r.breakdown.push_back({"laser", r.p_laser_w});
    return r;
}

std::vector<PowerReport> power_sweep(const std::vector<NetworkSpec>& specs,
                                     const std::vector<Backend>& backends,
                                     const PowerParams& pp) {
    std::vector<PowerReport> out;
    out.reserve(specs.size() * backends.size());
    for (const NetworkSpec& spec : specs) {
        for (Backend b : backends) {
            out.push_back(power_report(spec, b, pp));
        }
    }
    return out;
}

void write_power_csv(std::ostream& os, const std::vector<PowerReport>& reports) {
    os << "network,backend,n_multipliers,n_summation,n_eom,"
          "p_total_mW,p_mult_mW,p_sum_mW,p_eom_mW,p_laser_mW\n";
    for (const PowerReport& r : reports) {
        os << r.network << ',' << to_string(r.backend) << ',' << r.census.n_multipliers << ','
           << r.census.n_summation_units << ',' << r.census.n_eoms << ','
           << format_mw(r.p_total_w) << ',' << format_mw(r.p_multipliers_w) << ','
           << format_mw(r.p_summation_w) << ',' << format_mw(r.p_eom_w) << ','
           << format_mw(r.p_laser_w) << '\n';
    }
}

}  // namespace lumen
