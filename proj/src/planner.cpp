#include "ionstark/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "ionstark/constants.hpp"
#include "ionstark/errors.hpp"

namespace ionstark {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// sideband amplitudes below this are treated as absent when taking margins
// and flagging collisions; keeps dense high-order combs from zeroing the
// margin with transitions nothing can drive
constexpr double amp_floor = 1e-6;

std::string hz(double rad_s) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g Hz", rad_s / (2.0 * constants::pi));
    return buf;
}

// |m|-th order sideband amplitude at thermal occupation n, leading order in
// the Lamb-Dicke expansion
double sideband_amp(double eta, int m, int n) {
    if (m == 0) return 1.0;
    double log_amp = m * std::log(eta) +
                     0.5 * (std::lgamma(n + m + 1.0) - std::lgamma(n + 1.0)) -
                     std::lgamma(m + 1.0);
    return std::exp(log_amp);
}

// resolution-limited suppression of an off-resonant drive
double detuning_suppression(double detuning, double gamma_res) {
    return detuning <= gamma_res ? 1.0 : gamma_res / detuning;
}

void flag_collisions(AddressingPlan& plan, const StarkProfile& profile,
                     const ChainGeometry& g, double gamma_res,
                     const std::vector<std::vector<double>>* eta,
                     int max_harmonic, int thermal_n) {
    const int n = g.n();
    for (int k = 0; k < n; ++k) {
        double nu = g.mode_frequencies[k];
        bool hit = false;
        for (int i = 0; i < n && !hit; ++i)
            for (int j = i + 1; j < n && !hit; ++j) {
                double split =
                    std::abs(profile.per_ion_shift[i] - profile.per_ion_shift[j]);
                if (split == 0) continue;
                int h_max = eta ? max_harmonic : 1;
                for (int h = 1; h <= h_max; ++h) {
                    if (std::abs(split - h * nu) > 5.0 * gamma_res) continue;
                    if (eta) {
                        double eta_k = 0;
                        for (int q = 0; q < n; ++q)
                            eta_k = std::max(eta_k, (*eta)[k][q]);
                        if (sideband_amp(eta_k, h, thermal_n) < amp_floor)
                            continue;
                    }
                    hit = true;
                    break;
                }
            }
        if (hit) {
            plan.mode_collision_flags.push_back(nu);
            plan.warnings.push_back("splitting collides with the motional mode at " +
                                    hz(nu));
        }
    }
}

void finish_plan(AddressingPlan& plan) {
    plan.feasible = plan.selectivity_margin >= 10.0 * plan.gamma_res &&
                    plan.mode_collision_flags.empty();
}

}  // namespace

const char* to_string(Regime r) {
    return r == Regime::case_a ? "case_A" : "case_B";
}

AddressingPlan plan_case_a(const StarkProfile& profile, const ChainGeometry& g,
                           double gamma_res) {
    if (!(gamma_res > 0))
        throw ValidationError("spectral resolution must be positive");
    const int n = g.n();

    AddressingPlan plan;
    plan.regime = Regime::case_a;
    plan.gamma_res = gamma_res;
    plan.per_ion_resonance = profile.per_ion_shift;
    plan.selectivity_margin = inf;

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double split =
                std::abs(profile.per_ion_shift[i] - profile.per_ion_shift[j]);
            if (split >= g.omega_z)
                throw RegimeError(
                    "splitting " + hz(split) + " reaches one motional quantum (" +
                    hz(g.omega_z) + "); the weak-shift analysis does not "
                    "apply, consider the strong-shift regime");
            plan.selectivity_margin = std::min(plan.selectivity_margin, split);
            for (double nu : g.mode_frequencies) {
                plan.selectivity_margin =
                    std::min(plan.selectivity_margin, std::abs(split - nu));
                plan.selectivity_margin =
                    std::min(plan.selectivity_margin, split + nu);
            }
        }

    plan.crosstalk_bound =
        plan.selectivity_margin == inf
            ? 0.0
            : detuning_suppression(plan.selectivity_margin, gamma_res);
    flag_collisions(plan, profile, g, gamma_res, nullptr, 1, 0);
    finish_plan(plan);
    return plan;
}

AddressingPlan plan_case_b(const StarkProfile& profile, const ChainGeometry& g,
                           double gamma_res, double probe_wavevector,
                           int max_sideband_order, int thermal_n) {
    if (!(gamma_res > 0))
        throw ValidationError("spectral resolution must be positive");
    if (!(probe_wavevector > 0))
        throw ValidationError("probe wavevector must be positive");
    if (max_sideband_order < 1 || thermal_n < 0)
        throw ValidationError("bad sideband order cap or thermal occupation");
    const int n = g.n();

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double split =
                std::abs(profile.per_ion_shift[i] - profile.per_ion_shift[j]);
            if (split != 0 && split <= 3.0 * g.omega_z)
                throw RegimeError("splitting " + hz(split) +
                                  " is not far above the motional quantum (" +
                                  hz(g.omega_z) +
                                  "); the strong-shift analysis does not "
                                  "apply, consider the weak-shift regime");
        }

    std::vector<std::vector<double>> eta(n, std::vector<double>(n));
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i) {
            eta[k][i] = lamb_dicke(g, k, probe_wavevector, i);
            if (eta[k][i] >= 0.3)
                throw RegimeError(
                    "Lamb-Dicke parameter " + std::to_string(eta[k][i]) +
                    " of mode " + std::to_string(k) +
                    " breaks the sideband-suppression assumption (needs < 0.3)");
        }

    AddressingPlan plan;
    plan.regime = Regime::case_b;
    plan.gamma_res = gamma_res;
    plan.per_ion_resonance = profile.per_ion_shift;
    plan.selectivity_margin = inf;
    plan.crosstalk_bound = 0;

    // target carrier t against every sideband of every spectator s
    for (int t = 0; t < n; ++t)
        for (int s = 0; s < n; ++s) {
            if (s == t) continue;
            double delta = profile.per_ion_shift[t] - profile.per_ion_shift[s];
            double carrier_det = std::abs(delta);
            plan.selectivity_margin =
                std::min(plan.selectivity_margin, carrier_det);
            plan.crosstalk_bound =
                std::max(plan.crosstalk_bound,
                         detuning_suppression(carrier_det, gamma_res));
            for (int k = 0; k < n; ++k)
                for (int m = 1; m <= max_sideband_order; ++m) {
                    double amp = sideband_amp(eta[k][s], m, thermal_n);
                    double det = std::min(
                        std::abs(delta - m * g.mode_frequencies[k]),
                        std::abs(delta + m * g.mode_frequencies[k]));
                    if (amp >= amp_floor)
                        plan.selectivity_margin =
                            std::min(plan.selectivity_margin, det);
                    plan.crosstalk_bound =
                        std::max(plan.crosstalk_bound,
                                 amp * detuning_suppression(det, gamma_res));
                }
        }

    flag_collisions(plan, profile, g, gamma_res, &eta, max_sideband_order,
                    thermal_n);
    finish_plan(plan);
    return plan;
}

PairGatePlan pair_gate_plan(const ChainGeometry& g, const IonSpecies& s,
                            const BeamConfig& beam_template, int ion_i,
                            int ion_j, double gamma_res, PsiMode mode) {
    const int n = g.n();
    if (n < 2) throw ValidationError("pair planning needs at least two ions");
    if (ion_i < 0 || ion_i >= n || ion_j < 0 || ion_j >= n)
        throw ValidationError("ion index out of range");
    if (ion_i == ion_j) throw ValidationError("pick two distinct ions");
    if (!(gamma_res > 0))
        throw ValidationError("spectral resolution must be positive");
    validate_beam(beam_template);

    double mid = 0.5 * (g.positions[ion_i] + g.positions[ion_j]);
    StarkResponse resp = psi(s, beam_template.omega(), mode,
                             beam_template.polarization);

    auto gauss = [&](int ion) {
        double d = g.positions[ion] - mid;
        return std::exp(-2.0 * d * d /
                        (beam_template.waist * beam_template.waist));
    };
    double g_common = gauss(ion_i);  // identical for ion_j by construction
    double sep_per_i0 = inf;
    for (int o = 0; o < n; ++o) {
        if (o == ion_i || o == ion_j) continue;
        sep_per_i0 = std::min(sep_per_i0,
                              std::abs(resp.psi) * std::abs(gauss(o) - g_common));
    }

    double cap_i0 = beam_template.peak_intensity;
    double i0;
    if (sep_per_i0 == inf) {
        i0 = cap_i0;  // no spectators; any power works, keep the template's
    } else if (sep_per_i0 == 0) {
        i0 = cap_i0;  // a spectator sits symmetrically; power cannot help
    } else {
        // minimal intensity reaching the 10 gamma_res separation, with a hair
        // of headroom so the feasibility comparison survives round-off
        i0 = std::min(cap_i0,
                      10.0 * gamma_res / sep_per_i0 * (1.0 + 1e-9));
    }

    PairGatePlan out;
    out.beam = beam_template;
    out.beam.center_offset = mid;
    out.beam.set_peak_intensity(i0);

    StarkProfile profile = stark_profile(s, g, out.beam, mode);
    out.common_shift = profile.per_ion_shift[ion_i];
    out.residual_mismatch = std::abs(profile.per_ion_shift[ion_i] -
                                     profile.per_ion_shift[ion_j]);

    AddressingPlan& plan = out.plan;
    plan.regime = Regime::case_a;
    plan.gamma_res = gamma_res;
    plan.per_ion_resonance = profile.per_ion_shift;
    plan.selectivity_margin = inf;
    for (int o = 0; o < n; ++o) {
        if (o == ion_i || o == ion_j) continue;
        plan.selectivity_margin =
            std::min(plan.selectivity_margin,
                     std::abs(profile.per_ion_shift[o] - out.common_shift));
    }
    plan.crosstalk_bound =
        plan.selectivity_margin == inf
            ? 0.0
            : detuning_suppression(plan.selectivity_margin, gamma_res);
    flag_collisions(plan, profile, g, gamma_res, nullptr, 1, 0);
    finish_plan(plan);
    out.best_margin = plan.selectivity_margin;
    if (!plan.feasible && plan.mode_collision_flags.empty())
        plan.warnings.push_back(
            "power cap too low: best spectator separation " +
            hz(out.best_margin) + " < " + hz(10.0 * gamma_res));
    return out;
}

MechanicalCheck mechanical_check(const StarkProfile& profile,
                                 const ChainGeometry& g, const BeamConfig& beam,
                                 const TrapConfig& trap) {
    const int n = g.n();
    if (n < 2)
        throw ValidationError("mechanical check needs at least two ions");

    MechanicalCheck mc;
    int a = (n - 1) / 2, b = a + 1;
    double gap = g.positions[b] - g.positions[a];
    mc.f_grad_estimate = std::abs(profile.splitting[a][b]) / gap;

    double max_grad = 0;
    for (int i = 0; i < n; ++i) {
        double d = g.positions[i] - beam.center_offset;
        double grad = std::abs(-4.0 * d / (beam.waist * beam.waist) *
                               intensity_at(beam, g.positions[i]));
        max_grad = std::max(max_grad, grad);
    }
    mc.f_grad_exact =
        constants::hbar * std::abs(profile.response.psi) * max_grad;

    double m = g.mass;
    double w2 = trap.omega_z * trap.omega_z;
    mc.trap_force = m * w2 * 0.5 * g.min_spacing;
    mc.force_ratio = mc.trap_force / mc.f_grad_exact;
    mc.delta_z_shift = mc.f_grad_exact / (m * w2);
    mc.spread_ratio = g.sigma_z / mc.delta_z_shift;
    mc.min_rise_time = mc.delta_z_shift *
                       std::sqrt(m / (0.02 * constants::hbar * trap.omega_z));
    mc.pass = mc.force_ratio >= 1e3 && mc.spread_ratio >= 10.0 &&
              beam.rise_time >= mc.min_rise_time;
    return mc;
}

PhaseLedger phase_ledger(const StarkProfile& profile, double pulse_duration) {
    if (pulse_duration < 0)
        throw ValidationError("pulse duration must be non-negative");
    PhaseLedger ledger;
    ledger.duration = pulse_duration;
    ledger.rate = profile.per_ion_shift;
    for (double r : ledger.rate) {
        double phi = r * pulse_duration;
        ledger.phase.push_back(phi);
        double wrapped = std::fmod(phi, 2.0 * constants::pi);
        if (wrapped < 0) wrapped += 2.0 * constants::pi;
        ledger.phase_mod_2pi.push_back(wrapped);
    }
    return ledger;
}

}  // namespace ionstark
