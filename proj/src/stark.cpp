#include "ionstark/stark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "ionstark/constants.hpp"
#include "ionstark/errors.hpp"

namespace ionstark {

namespace {

using constants::c;
using constants::hbar;
using constants::pi;

// both rotating and counter-rotating denominators, always
double line_f(double omega_line, double omega) {
    return 1.0 / (omega_line - omega) + 1.0 / (omega_line + omega);
}

double line_base(double omega_line) {
    return 3.0 * pi * c * c / (2.0 * hbar * std::pow(omega_line, 3));
}

void guard_resonance(double omega, double omega_line, double gamma,
                     const std::string& label,
                     std::vector<std::string>& warnings) {
    double det = std::abs(omega - omega_line);
    if (det <= 1e3 * gamma)
        throw NearResonanceError("probe within 1000 linewidths of " + label +
                                 "; the far-off-resonance model does not hold");
    if (det <= 1e4 * gamma)
        warnings.push_back("probe within 10^4 linewidths of " + label);
}

struct EffLine {
    std::string label;
    double omega_line;
    double gamma;       // effective decay strength, branch weighted
    double weight;      // 1 for collapsed coarse groups
    bool upper_state;   // true: shifts the up qubit state (enters psi with -)
};

// Expands the species' dipole lines into the list actually summed over:
// per fine-structure line in fine mode, per (lower, upper nL) group with
// weight-averaged frequency and summed strength in coarse mode.
std::vector<EffLine> effective_lines(const IonSpecies& s, PsiMode mode,
                                     Polarization pol) {
    std::vector<EffLine> out;
    if (mode == PsiMode::fine) {
        for (const auto& t : s.transitions) {
            if (t.role == LineRole::qubit_e2) continue;
            double w = t.weight(pol);
            if (w == 0) continue;
            out.push_back({t.lower.raw + "->" + t.upper.raw,
                           t.angular_frequency, t.decay_rate, w,
                           t.role == LineRole::df_dipole});
        }
        return out;
    }
    struct Acc { double wsum = 0, womega = 0, wgamma = 0; bool upper = false; };
    std::vector<std::string> order;
    std::map<std::string, Acc> groups;
    for (const auto& t : s.transitions) {
        if (t.role == LineRole::qubit_e2) continue;
        double w = t.weight(pol);
        if (w == 0) continue;
        std::string key =
            t.lower.raw + "->" + std::to_string(t.upper.n) + t.upper.l;
        if (groups.find(key) == groups.end()) order.push_back(key);
        auto& a = groups[key];
        a.wsum += w;
        a.womega += w * t.angular_frequency;
        a.wgamma += w * t.decay_rate;
        a.upper = t.role == LineRole::df_dipole;
    }
    for (const auto& key : order) {
        const auto& a = groups[key];
        out.push_back({key, a.womega / a.wsum, a.wgamma, 1.0, a.upper});
    }
    return out;
}

StarkResponse sum_lines(const IonSpecies& s, double omega, PsiMode mode,
                        Polarization pol) {
    StarkResponse r;
    r.omega = omega;
    r.mode = mode;
    r.polarization = pol;

    // guard against the physical lines, whatever the mode
    for (const auto& t : s.transitions) {
        if (t.role == LineRole::qubit_e2 || t.weight(pol) == 0) continue;
        guard_resonance(omega, t.angular_frequency, t.decay_rate,
                        t.lower.raw + "->" + t.upper.raw, r.warnings);
    }

    for (const auto& l : effective_lines(s, mode, pol)) {
        double f = line_f(l.omega_line, omega);
        double base = line_base(l.omega_line);
        double shift = base * l.weight * l.gamma * f;  // level pulled by -shift
        double scatter = base * l.weight * (l.gamma * f) * (l.gamma * f) *
                         std::pow(omega / l.omega_line, 3);
        double signed_shift = l.upper_state ? -shift : shift;
        if (l.upper_state)
            r.upper_level_coefficient -= shift;
        else
            r.lower_level_coefficient -= shift;
        r.per_line.push_back({l.label, signed_shift, scatter});
        r.psi += signed_shift;
        r.scatter_per_intensity += scatter;
    }
    return r;
}

}  // namespace

const char* to_string(PsiMode m) {
    return m == PsiMode::coarse ? "coarse" : "fine";
}

PsiMode psi_mode_from_string(const std::string& s) {
    if (s == "coarse") return PsiMode::coarse;
    if (s == "fine") return PsiMode::fine;
    throw ValidationError("unknown mode '" + s + "' (expected fine or coarse)");
}

StarkResponse psi(const IonSpecies& s, double omega, PsiMode mode,
                  Polarization pol) {
    if (s.qubit_kind != QubitKind::optical_sd)
        throw ValidationError("species '" + s.name +
                              "' is not an optical S-D qubit; use the Zeeman "
                              "qubit entry point");
    if (!(omega > 0)) throw ValidationError("probe frequency must be positive");
    return sum_lines(s, omega, mode, pol);
}

StarkResponse zeeman_response(const IonSpecies& s, double omega,
                              Polarization pol) {
    if (s.qubit_kind != QubitKind::zeeman_ground)
        throw ValidationError("species '" + s.name +
                              "' is not a ground-state Zeeman qubit");
    if (pol == Polarization::linear_pi)
        throw ValidationError(
            "linear polarization produces no differential shift between the "
            "two ground sublevels; use sigma+ or sigma-");
    if (!(omega > 0)) throw ValidationError("probe frequency must be positive");

    double lo = 0, hi = 0;
    for (const auto& t : s.transitions) {
        if (t.role != LineRole::sp_dipole) continue;
        if (lo == 0 || t.angular_frequency < lo) lo = t.angular_frequency;
        if (t.angular_frequency > hi) hi = t.angular_frequency;
    }
    if (!(omega > lo && omega < hi))
        throw ValidationError(
            "wavelength outside the fine-structure window of the S-P doublet");

    StarkResponse r;
    r.omega = omega;
    r.mode = PsiMode::fine;
    r.polarization = pol;

    for (const auto& t : s.transitions) {
        if (t.role != LineRole::sp_dipole) continue;
        guard_resonance(omega, t.angular_frequency, t.decay_rate,
                        t.lower.raw + "->" + t.upper.raw, r.warnings);

        // driving weight for the mJ=+1/2 sublevel; the mJ=-1/2 sublevel sees
        // the mirrored column of the same multiplet
        double w_up = t.sigma_plus_weight, w_dn = t.sigma_minus_weight;
        if (pol == Polarization::sigma_minus) std::swap(w_up, w_dn);

        double f = line_f(t.angular_frequency, omega);
        double base = line_base(t.angular_frequency);
        double shift_up = -base * w_up * t.decay_rate * f;
        double shift_dn = -base * w_dn * t.decay_rate * f;
        double scatter = base * (t.sigma_plus_weight + t.sigma_minus_weight) *
                         std::pow(t.decay_rate * f, 2) *
                         std::pow(omega / t.angular_frequency, 3);

        r.upper_level_coefficient += shift_up;
        r.lower_level_coefficient += shift_dn;
        r.per_line.push_back(
            {t.lower.raw + "->" + t.upper.raw, shift_up - shift_dn, scatter});
        r.psi += shift_up - shift_dn;
        r.scatter_per_intensity += scatter;
    }
    return r;
}

namespace {

StarkProfile profile_from_response(const StarkResponse& resp,
                                   const ChainGeometry& g,
                                   const BeamConfig& beam) {
    StarkProfile p;
    p.response = resp;
    p.warnings = resp.warnings;
    const int n = g.n();
    p.per_ion_shift.resize(n);
    p.per_ion_scatter.resize(n);
    for (int i = 0; i < n; ++i) {
        double intensity = intensity_at(beam, g.positions[i]);
        p.per_ion_shift[i] = resp.psi * intensity;
        p.per_ion_scatter[i] = resp.scatter_per_intensity * intensity;
        p.total_scatter += p.per_ion_scatter[i];
    }
    p.splitting.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            p.splitting[i][j] =
                constants::hbar * (p.per_ion_shift[i] - p.per_ion_shift[j]);
    p.coherence_time = p.total_scatter > 0
                           ? 1.0 / p.total_scatter
                           : std::numeric_limits<double>::infinity();
    if (n >= 2 && g.min_spacing > 0.3 * beam.waist)
        p.warnings.push_back(
            "ion spacing exceeds 0.3 of the beam waist; the displaced-beam "
            "shift contrast degrades");
    return p;
}

}  // namespace

StarkProfile stark_profile(const IonSpecies& s, const ChainGeometry& g,
                           const BeamConfig& beam, PsiMode mode) {
    validate_beam(beam);
    return profile_from_response(psi(s, beam.omega(), mode, beam.polarization),
                                 g, beam);
}

StarkProfile zeeman_qubit_shift(const IonSpecies& s, const ChainGeometry& g,
                                const BeamConfig& beam) {
    validate_beam(beam);
    return profile_from_response(
        zeeman_response(s, beam.omega(), beam.polarization), g, beam);
}

namespace {

void check_not_singular(const StarkResponse& resp) {
    double scale = 0;
    for (const auto& l : resp.per_line) scale += std::abs(l.shift_coefficient);
    if (std::abs(resp.psi) <= 1e-9 * scale)
        throw SingularInversionError(
            "shift per intensity cancels at this wavelength (magic "
            "crossing); pick a different wavelength");
}

}  // namespace

double scatter_closed_form(const StarkResponse& resp, double delta_z,
                           double waist, double target_E) {
    check_not_singular(resp);
    double i0 = target_E / (hbar * kappa(delta_z, waist) * std::abs(resp.psi));
    return 2.0 * resp.scatter_per_intensity * std::exp(-0.5) * i0;
}

PowerSolve required_power(const IonSpecies& s, const TrapConfig& trap,
                          double waist, double wavelength, double target_E,
                          PsiMode mode) {
    if (!(target_E > 0))
        throw ValidationError("target splitting must be positive");
    if (!(waist > 0)) throw ValidationError("waist must be positive");
    if (!(wavelength > 0)) throw ValidationError("wavelength must be positive");
    if (trap.n_ions < 2)
        throw ValidationError("a shift difference needs at least two ions");

    TrapConfig t = trap;
    t.species = &s;
    ChainGeometry g = equilibrium_positions(t);

    // central adjacent pair; the beam sits W/2 beyond its midpoint, which is
    // within 3% of the true optimum for dz/W <= 0.2
    int a = (g.n() - 1) / 2, b = a + 1;
    double mid = 0.5 * (g.positions[a] + g.positions[b]);
    double dz = g.positions[b] - g.positions[a];

    double omega = 2.0 * pi * c / wavelength;
    StarkResponse resp = psi(s, omega, mode);
    check_not_singular(resp);

    double k = kappa(dz, waist);
    double i0 = target_E / (hbar * k * std::abs(resp.psi));

    PowerSolve out;
    out.beam = BeamConfig::from_peak_intensity(wavelength, waist, i0,
                                               mid + 0.5 * waist);
    out.power = out.beam.power;
    out.kappa_used = k;
    out.response = resp;
    out.profile = stark_profile(s, g, out.beam, mode);
    out.up_shifted_ion = resp.psi > 0 ? b : a;
    return out;
}

ZeemanOptimum zeeman_optimum(const IonSpecies& s, const TrapConfig& trap,
                             double waist, double target_E, Polarization pol) {
    if (!(target_E > 0))
        throw ValidationError("target splitting must be positive");
    if (trap.n_ions < 2)
        throw ValidationError("a shift difference needs at least two ions");

    TrapConfig t = trap;
    t.species = &s;
    ChainGeometry g = equilibrium_positions(t);
    int a = (g.n() - 1) / 2, b = a + 1;
    double mid = 0.5 * (g.positions[a] + g.positions[b]);
    double dz = g.positions[b] - g.positions[a];
    double k = kappa(dz, waist);

    // window edges, pushed past the near-resonance guard
    double lo = 0, hi = 0, gamma_lo = 0, gamma_hi = 0;
    for (const auto& tr : s.transitions) {
        if (tr.role != LineRole::sp_dipole) continue;
        if (lo == 0 || tr.angular_frequency < lo) {
            lo = tr.angular_frequency;
            gamma_lo = tr.decay_rate;
        }
        if (tr.angular_frequency > hi) {
            hi = tr.angular_frequency;
            gamma_hi = tr.decay_rate;
        }
    }
    if (!(lo > 0 && hi > lo))
        throw ValidationError("species '" + s.name +
                              "' lacks a resolved S-P fine-structure doublet");
    lo += 1.01e3 * gamma_lo;
    hi -= 1.01e3 * gamma_hi;

    auto total_scatter = [&](double omega) {
        StarkResponse resp = zeeman_response(s, omega, pol);
        if (resp.psi == 0) return std::numeric_limits<double>::infinity();
        double i0 = target_E / (hbar * k * std::abs(resp.psi));
        double sum = 0;
        for (int i = 0; i < g.n(); ++i) {
            double d = g.positions[i] - (mid + 0.5 * waist);
            sum += resp.scatter_per_intensity * i0 *
                   std::exp(-2.0 * d * d / (waist * waist));
        }
        return sum;
    };

    const int grid = 4000;
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        double omega = lo + (hi - lo) * i / grid;
        double v = total_scatter(omega);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    double wa = lo + (hi - lo) * std::max(0, best - 1) / grid;
    double wb = lo + (hi - lo) * std::min(grid, best + 1) / grid;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = wb - inv_phi * (wb - wa);
    double x2 = wa + inv_phi * (wb - wa);
    double f1 = total_scatter(x1), f2 = total_scatter(x2);
    while (wb - wa > 1e-9 * wa) {
        if (f1 < f2) {
            wb = x2; x2 = x1; f2 = f1;
            x1 = wb - inv_phi * (wb - wa);
            f1 = total_scatter(x1);
        } else {
            wa = x1; x1 = x2; f1 = f2;
            x2 = wa + inv_phi * (wb - wa);
            f2 = total_scatter(x2);
        }
    }
    double omega_opt = 0.5 * (wa + wb);

    ZeemanOptimum out;
    out.wavelength = 2.0 * pi * c / omega_opt;
    StarkResponse resp = zeeman_response(s, omega_opt, pol);
    double i0 = target_E / (hbar * k * std::abs(resp.psi));
    out.beam = BeamConfig::from_peak_intensity(out.wavelength, waist, i0,
                                               mid + 0.5 * waist, pol);
    out.power = out.beam.power;
    out.profile = zeeman_qubit_shift(s, g, out.beam);
    return out;
}

}  // namespace ionstark
