#pragma once

// Parameter sweeps over the shift/scattering pipeline: one row per point
// with required power, scattering, coherence and the geometry factor.
// Points hitting the near-resonance guard or a vanishing inversion become
// gap rows instead of failures.

#include <string>
#include <vector>

#include "ionstark/atomic_data.hpp"
#include "ionstark/stark.hpp"

namespace ionstark {

enum class SweepVariable { wavelength, waist, omega_z, offset };
SweepVariable sweep_variable_from_string(const std::string& s);
const char* to_string(SweepVariable v);

// target splitting, either absolute or tied to the (possibly swept) trap
// frequency in units of the motional quantum; default half a quantum
struct TargetSplitting {
    bool absolute = false;
    double quanta = 0.5;
    double joules = 0;
    double resolve(double omega_z) const;
};

struct Scenario {
    IonSpecies species;  // by value: sweep workers share nothing mutable
    double omega_z = 0;  // rad/s
    int n_ions = 2;
    double waist = 0;       // m
    double wavelength = 0;  // m
    double offset = 0;      // m, only used when sweeping the offset
    TargetSplitting target;
    PsiMode mode = PsiMode::fine;
};

struct SweepSpec {
    SweepVariable variable = SweepVariable::wavelength;
    double min = 0, max = 0;  // SI units of the swept variable
    int points = 2;
    bool log_spacing = false;
    Scenario scenario;
};

struct SweepRow {
    double x = 0;  // swept value, SI
    bool gap = false;
    double wavelength = 0;   // m
    double power = 0;        // W
    double scatter = 0;      // 1/s
    double coherence = 0;    // s
    double kappa_eff = 0;    // geometry factor used in the inversion
    double psi = 0;          // (rad/s)/(W/m^2)
    std::string warnings;    // "; " joined
};

std::vector<SweepRow> run_sweep(const SweepSpec& spec);

}  // namespace ionstark
