#pragma once

// Per-ion ac Stark shifts of the qubit transition, pairwise splittings,
// photon-scattering budgets, and the inverse solve for the laser power that
// reaches a target splitting.

#include <string>
#include <vector>

#include "ionstark/atomic_data.hpp"
#include "ionstark/beam.hpp"
#include "ionstark/chain.hpp"

namespace ionstark {

// coarse: each (lower level, upper nL) group collapsed to one effective line
//         with branch-weight averaged frequency and summed decay strength,
//         i.e. fine structure neglected.
// fine:   every fine-structure line enters with its own branch weight.
enum class PsiMode { coarse, fine };
const char* to_string(PsiMode m);
PsiMode psi_mode_from_string(const std::string& s);

struct LineContribution {
    std::string label;           // "4S1/2->4P3/2", or group label in coarse mode
    double shift_coefficient;    // (rad/s)/(W/m^2), signed
    double scatter_coefficient;  // (1/s)/(W/m^2)
};

struct StarkResponse {
    double psi = 0;  // (rad/s)/(W/m^2): up-state minus down-state shift per intensity
    double scatter_per_intensity = 0;   // (1/s)/(W/m^2), summed over lines
    double lower_level_coefficient = 0; // level shift of the down state per intensity
    double upper_level_coefficient = 0;
    double omega = 0;
    PsiMode mode = PsiMode::fine;
    Polarization polarization = Polarization::linear_pi;
    std::vector<LineContribution> per_line;  // sums to psi exactly
    std::vector<std::string> warnings;
};

// Shift-per-intensity of the optical S-D qubit. Both rotating and
// counter-rotating denominators are always kept. Throws NearResonanceError
// if omega comes within 1000 linewidths of a contributing line.
StarkResponse psi(const IonSpecies& s, double omega, PsiMode mode,
                  Polarization pol = Polarization::linear_pi);

// Differential shift of the two ground Zeeman sublevels under sigma+ or
// sigma- light tuned inside the fine-structure window of the S-P doublet.
// Scattering counts both sublevels. Linear polarization or a wavelength
// outside the window is a validation error.
StarkResponse zeeman_response(const IonSpecies& s, double omega,
                              Polarization pol);

struct StarkProfile {
    std::vector<double> per_ion_shift;            // rad/s
    std::vector<std::vector<double>> splitting;   // E_ij, J; antisymmetric
    std::vector<double> per_ion_scatter;          // 1/s
    double total_scatter = 0;                     // 1/s
    double coherence_time = 0;                    // s, 1/total_scatter
    StarkResponse response;
    std::vector<std::string> warnings;
};

StarkProfile stark_profile(const IonSpecies& s, const ChainGeometry& g,
                           const BeamConfig& beam, PsiMode mode);
StarkProfile zeeman_qubit_shift(const IonSpecies& s, const ChainGeometry& g,
                                const BeamConfig& beam);

// Two-ion closed form for the total scattering rate at a target splitting,
// beam at W/2 from the midpoint: both ions see I0 e^(-1/2) to zeroth order
// in dz/W and I0 follows from target_E = kappa |psi| hbar I0.
double scatter_closed_form(const StarkResponse& resp, double delta_z,
                           double waist, double target_E);

struct PowerSolve {
    double power = 0;          // W
    BeamConfig beam;           // centered W/2 beyond the central pair midpoint
    StarkProfile profile;
    double kappa_used = 0;
    int up_shifted_ion = 0;    // 0-based
    StarkResponse response;
};

// Exact one-step inversion of target_E = kappa psi hbar I0 for the central
// adjacent ion pair. SingularInversionError when psi cancels (magic
// wavelength); ValidationError for non-positive targets or n_ions < 2.
PowerSolve required_power(const IonSpecies& s, const TrapConfig& trap,
                          double waist, double wavelength, double target_E,
                          PsiMode mode);

struct ZeemanOptimum {
    double wavelength = 0;  // m
    double power = 0;       // W
    BeamConfig beam;
    StarkProfile profile;
};

// Scans the fine-structure window for the wavelength minimizing the total
// scattering rate at fixed target splitting, then refines by golden section.
ZeemanOptimum zeeman_optimum(const IonSpecies& s, const TrapConfig& trap,
                             double waist, double target_E,
                             Polarization pol = Polarization::sigma_plus);

}  // namespace ionstark
