#pragma once

#include <string>

namespace lumen {

enum class Backend { kMrr, kMzi };

Backend backend_from_string(const std::string& s);
std::string to_string(Backend b);

struct PhotodiodeParams {
    double lambda = 1550e-9;         // wavelength [m]
    double eta = 1.0;                // quantum efficiency, (0,1]
    double dark_current = 0.0;       // I_D [A]
    double shunt_resistance = 10e3;  // R_SH [ohm]
    double temperature = 300.0;      // T [K]

    void validate() const;
};

struct MrrParams {
    double a = 1.0;   // single-pass amplitude attenuation, (0,1]; 1 = lossless
    double r1 = 0.9;  // through-coupler self-coupling, [0,1)
    double r2 = 0.9;  // drop-coupler self-coupling, [0,1)

    void validate() const;
};

struct MziParams {
    double split_imbalance = 0.0;  // deviation from 50:50, [0,0.5)
    double insertion_loss = 1.0;   // amplitude factor, (0,1]; 1 = ideal

    void validate() const;
};

struct EomParams {
    double v_pi = 1.0;    // half-wave voltage, signal units
    double v_bias = 0.5;  // bias point, signal units

    void validate() const;
};

// One bundle for everything the photonic path needs; immutable after config.
struct DeviceParams {
    MrrParams mrr;
    MziParams mzi;
    PhotodiodeParams photodiode;
    EomParams eom;

    void validate() const;
};

// R = lambda * q / (h c) * eta  [A/W]
double responsivity(const PhotodiodeParams& p);

// I_ph = R * P_in; rejects negative optical power.
double photocurrent(double p_in, double resp);

// Through-port intensity transmission of an add-drop ring at round-trip
// phase phi. Evaluated in a cancellation-free form so the lossless
// through+drop identity holds to machine precision at any finesse.
double mrr_through(double phi, const MrrParams& m);

// Drop-port counterpart (standard add-drop form).
double mrr_drop(double phi, const MrrParams& m);

// Signed weight via balanced detection: through minus drop.
double mrr_weight(double phi, const MrrParams& m);

// Two-arm interferometer transmission vs arm phase difference. Ideal case
// reduces to cos^2(delta_phi / 2); imbalance raises the extinction floor.
double mzi_weight(double delta_phi, const MziParams& z);

// Transmission of a quadrature-biased modulator driven by a signal-unit
// voltage; the activation function of both inference paths. Monotone
// non-decreasing in v, bounded in [0,1].
double eom_activation(double v, const EomParams& e);

// Analytic dy/dv (zero outside the monotone branch).
double eom_activation_grad(double v, const EomParams& e);

struct WeightRange {
    double lo = 0.0;
    double hi = 0.0;
};

// Weight reachable by a single device over the principal phase branch
// [0, pi]. MRR weights straddle zero; a single MZI is nonnegative.
WeightRange device_weight_range(Backend backend, const DeviceParams& d);

// Signed weight range of the programmed multiplier: the MRR itself for the
// MRR backend, a push-pull pair for the MZI backend.
WeightRange signed_weight_range(Backend backend, const DeviceParams& d);

struct CalibrationResult {
    double phase = 0.0;
    double achieved = 0.0;
    bool clipped = false;
};

inline constexpr double kCalibrationTolerance = 1e-9;

// Solves for the phase whose device weight best matches target, by bisection
// on the principal monotone branch. Out-of-range targets return the nearest
// endpoint with clipped = true; otherwise |achieved - target| <= tol.
CalibrationResult calibrate(double target, Backend backend, const DeviceParams& d,
                            double tol = kCalibrationTolerance);

}  // namespace lumen
