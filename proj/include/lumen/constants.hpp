#pragma once

namespace lumen::constants {

// CODATA SI values. Fixed by definition, never configurable.
inline constexpr double q = 1.602176634e-19;    // electron charge [C]
inline constexpr double h = 6.62607015e-34;     // Planck constant [J s]
inline constexpr double c = 2.99792458e8;       // speed of light [m/s]
inline constexpr double k_b = 1.380649e-23;     // Boltzmann constant [J/K]

inline constexpr double pi = 3.14159265358979323846;

}  // namespace lumen::constants
