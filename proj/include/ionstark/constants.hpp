#pragma once

// Physical constants, SI, CODATA 2018. Everything downstream works in SI with
// angular frequencies (rad/s); wavelengths are vacuum wavelengths.

namespace ionstark::constants {

inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double c = 299792458.0;               // m/s
inline constexpr double e_charge = 1.602176634e-19;    // C
inline constexpr double epsilon_0 = 8.8541878128e-12;  // F/m
inline constexpr double amu = 1.66053906660e-27;       // kg
inline constexpr double pi = 3.14159265358979323846;

}  // namespace ionstark::constants
