#include "lumen/devices.hpp"

#include <algorithm>
#include <cmath>

#include "lumen/constants.hpp"
#include "lumen/error.hpp"

namespace lumen {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

// 4 * r1 * r2 * a * sin^2(phi/2); shared by numerator and denominator so the
// lossless through+drop identity survives floating point at any finesse.
double detuning_term(double phi, const MrrParams& m) {
    const double s = std::sin(0.5 * phi);
    return 4.0 * m.r1 * m.r2 * m.a * s * s;
}

double mrr_denominator(double phi, const MrrParams& m) {
    const double g = m.r1 * m.r2 * m.a;
    const double base = 1.0 - g;
    return base * base + detuning_term(phi, m);
}

}  // namespace

Backend backend_from_string(const std::string& s) {
    if (s == "mrr") return Backend::kMrr;
    if (s == "mzi") return Backend::kMzi;
    throw ConfigError("unknown backend '" + s + "' (expected 'mrr' or 'mzi')");
}

std::string to_string(Backend b) {
    return b == Backend::kMrr ? "mrr" : "mzi";
}

void PhotodiodeParams::validate() const {
    require(lambda > 0.0, "photodiode: wavelength must be positive");
    require(eta > 0.0 && eta <= 1.0, "photodiode: quantum efficiency must be in (0,1]");
    require(dark_current >= 0.0, "photodiode: dark current must be nonnegative");
    require(shunt_resistance > 0.0, "photodiode: shunt resistance must be positive");
    require(temperature > 0.0, "photodiode: temperature must be positive");
}

void MrrParams::validate() const {
    require(a > 0.0 && a <= 1.0, "mrr: attenuation a must be in (0,1]");
    require(r1 >= 0.0 && r1 < 1.0, "mrr: r1 must be in [0,1)");
    require(r2 >= 0.0 && r2 < 1.0, "mrr: r2 must be in [0,1)");
}

void MziParams::validate() const {
    require(split_imbalance >= 0.0 && split_imbalance < 0.5,
            "mzi: split imbalance must be in [0,0.5)");
    require(insertion_loss > 0.0 && insertion_loss <= 1.0,
            "mzi: insertion loss factor must be in (0,1]");
}

void EomParams::validate() const {
    require(v_pi > 0.0, "eom: v_pi must be positive");
}

void DeviceParams::validate() const {
    mrr.validate();
    mzi.validate();
    photodiode.validate();
    eom.validate();
}

double responsivity(const PhotodiodeParams& p) {
    p.validate();
    return p.lambda * constants::q / (constants::h * constants::c) * p.eta;
}

double photocurrent(double p_in, double resp) {
    if (p_in < 0.0) throw NumericError("photocurrent: negative optical power");
    return resp * p_in;
}

double mrr_through(double phi, const MrrParams& m) {
    const double base = m.r1 - m.r2 * m.a;
    return (base * base + detuning_term(phi, m)) / mrr_denominator(phi, m);
}

double mrr_drop(double phi, const MrrParams& m) {
    const double num = (1.0 - m.r1 * m.r1) * (1.0 - m.r2 * m.r2) * m.a;
    return num / mrr_denominator(phi, m);
}

double mrr_weight(double phi, const MrrParams& m) {
    return mrr_through(phi, m) - mrr_drop(phi, m);
}

double mzi_weight(double delta_phi, const MziParams& z) {
    const double eps = z.split_imbalance;
    const double c = std::cos(0.5 * delta_phi);
    // (0.5+eps)(0.5-eps) * 2 * (1 + cos) written via cos^2(dphi/2);
    // (2 eps)^2 * 0.5 is the extinction floor.
    const double interference = (0.25 - eps * eps) * 4.0 * c * c;
    const double floor = 2.0 * eps * eps;
    return z.insertion_loss * (interference + floor);
}

double eom_activation(double v, const EomParams& e) {
    double u = (e.v_bias - v) / e.v_pi;
    u = std::clamp(u, 0.0, 1.0);
    const double c = std::cos(0.5 * constants::pi * u);
    return c * c;
}

double eom_activation_grad(double v, const EomParams& e) {
    const double u = (e.v_bias - v) / e.v_pi;
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return constants::pi / (2.0 * e.v_pi) * std::sin(constants::pi * u);
}

WeightRange device_weight_range(Backend backend, const DeviceParams& d) {
    if (backend == Backend::kMrr) {
        // monotone increasing in phi on [0, pi]
        return {mrr_weight(0.0, d.mrr), mrr_weight(constants::pi, d.mrr)};
    }
    // monotone decreasing in delta_phi on [0, pi]
    return {mzi_weight(constants::pi, d.mzi), mzi_weight(0.0, d.mzi)};
}

WeightRange signed_weight_range(Backend backend, const DeviceParams& d) {
    const WeightRange single = device_weight_range(backend, d);
    if (backend == Backend::kMrr) return single;
    // push-pull pair: w = w_plus - w_minus with both arms in [lo, hi]
    return {single.lo - single.hi, single.hi - single.lo};
}

CalibrationResult calibrate(double target, Backend backend, const DeviceParams& d, double tol) {
    if (!std::isfinite(target)) throw NumericError("calibrate: target weight is not finite");
    d.validate();

    const auto weight_at = [&](double phase) {
        return backend == Backend::kMrr ? mrr_weight(phase, d.mrr) : mzi_weight(phase, d.mzi);
    };

    double lo_phase = 0.0, hi_phase = constants::pi;
    double w_lo = weight_at(lo_phase), w_hi = weight_at(hi_phase);
    const bool increasing = w_hi >= w_lo;
    const double w_min = increasing ? w_lo : w_hi;
    const double w_max = increasing ? w_hi : w_lo;

    if (target <= w_min) {
        return {increasing ? lo_phase : hi_phase, w_min, target < w_min};
    }
    if (target >= w_max) {
        return {increasing ? hi_phase : lo_phase, w_max, target > w_max};
    }

    // Bisection on the principal monotone branch; the interval collapses to
    // machine resolution well before the iteration cap.
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo_phase + hi_phase);
        if (mid <= lo_phase || mid >= hi_phase) break;
        const double w_mid = weight_at(mid);
        if ((w_mid < target) == increasing) {
            lo_phase = mid;
        } else {
            hi_phase = mid;
        }
        if (std::abs(w_mid - target) <= tol) {
            return {mid, w_mid, false};
        }
    }
    const double w_end_lo = weight_at(lo_phase);
    const double w_end_hi = weight_at(hi_phase);
    if (std::abs(w_end_lo - target) <= std::abs(w_end_hi - target)) {
        return {lo_phase, w_end_lo, false};
    }
    return {hi_phase, w_end_hi, false};
}

}  // namespace lumen
