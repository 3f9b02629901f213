#pragma once

// Addressing plans on top of Stark profiles: regime selection, selectivity
// margins, crosstalk estimates, pair-gate beam placement, mechanical safety
// checks and the per-ion phase ledger.

#include <vector>

#include "ionstark/chain.hpp"
#include "ionstark/stark.hpp"

namespace ionstark {

enum class Regime { case_a, case_b };
const char* to_string(Regime r);

struct AddressingPlan {
    Regime regime = Regime::case_a;
    double gamma_res = 0;  // rad/s probe spectral resolution
    std::vector<double> per_ion_resonance;  // rad/s offsets from the bare line
    // smallest detuning between a target carrier and any spectator
    // transition with non-negligible amplitude
    double selectivity_margin = 0;  // rad/s
    double crosstalk_bound = 0;     // worst spectator excitation amplitude
    std::vector<double> mode_collision_flags;  // rad/s, colliding mode freqs
    bool feasible = false;
    std::vector<std::string> warnings;
};

// Weak-shift regime: every splitting below one motional quantum; spectator
// spectrum = carriers plus first red/blue sidebands of every mode.
// RegimeError when some splitting reaches hbar omega_z.
AddressingPlan plan_case_a(const StarkProfile& profile, const ChainGeometry& g,
                           double gamma_res);

// Strong-shift regime: every nonzero splitting above 3 hbar omega_z;
// spectator sidebands up to max_sideband_order, amplitude
// eta^|m| sqrt((n+|m|)!/n!)/|m|! at thermal occupation n. RegimeError when
// the premise or the Lamb-Dicke condition (eta < 0.3) fails.
AddressingPlan plan_case_b(const StarkProfile& profile, const ChainGeometry& g,
                           double gamma_res, double probe_wavevector,
                           int max_sideband_order = 50, int thermal_n = 0);

struct PairGatePlan {
    BeamConfig beam;            // centered on the pair midpoint
    AddressingPlan plan;
    double common_shift = 0;    // rad/s shared by the addressed pair
    double residual_mismatch = 0;  // rad/s between the two target ions
    double best_margin = 0;     // rad/s achieved within the power cap
};

// Beam centered between ions i and j (their shifts match exactly by
// symmetry); power raised until every other ion is detuned by at least
// 10 gamma_res, capped by the template's power. Under-cap infeasibility is
// reported in the plan, not thrown.
PairGatePlan pair_gate_plan(const ChainGeometry& g, const IonSpecies& s,
                            const BeamConfig& beam_template, int ion_i,
                            int ion_j, double gamma_res, PsiMode mode);

struct MechanicalCheck {
    double f_grad_estimate = 0;  // N, splitting / spacing
    double f_grad_exact = 0;     // N, hbar |psi| max |dI/dz|
    double trap_force = 0;       // N, restoring force at half the spacing
    double force_ratio = 0;      // trap_force / f_grad_exact
    double delta_z_shift = 0;    // m, gradient-induced displacement
    double spread_ratio = 0;     // sigma_z / delta_z_shift
    double min_rise_time = 0;    // s, kinetic energy <= 0.01 hbar omega_z
    bool pass = false;
};

MechanicalCheck mechanical_check(const StarkProfile& profile,
                                 const ChainGeometry& g, const BeamConfig& beam,
                                 const TrapConfig& trap);

struct PhaseLedger {
    double duration = 0;             // s
    std::vector<double> rate;        // rad/s, per ion
    std::vector<double> phase;       // rad accumulated over the pulse
    std::vector<double> phase_mod_2pi;
};

PhaseLedger phase_ledger(const StarkProfile& profile, double pulse_duration);

}  // namespace ionstark
