#include "ionstark/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "ionstark/beam.hpp"
#include "ionstark/chain.hpp"
#include "ionstark/constants.hpp"
#include "ionstark/errors.hpp"

namespace ionstark {

SweepVariable sweep_variable_from_string(const std::string& s) {
    if (s == "wavelength") return SweepVariable::wavelength;
    if (s == "waist") return SweepVariable::waist;
    if (s == "omega_z") return SweepVariable::omega_z;
    if (s == "offset") return SweepVariable::offset;
    throw ValidationError("unknown sweep variable '" + s +
                          "' (wavelength, waist, omega_z or offset)");
}

const char* to_string(SweepVariable v) {
    switch (v) {
        case SweepVariable::wavelength: return "wavelength";
        case SweepVariable::waist: return "waist";
        case SweepVariable::omega_z: return "omega_z";
        default: return "offset";
    }
}

double TargetSplitting::resolve(double omega_z) const {
    return absolute ? joules : quanta * constants::hbar * omega_z;
}

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += "; ";
        out += p;
    }
    return out;
}

SweepRow evaluate_point(const SweepSpec& spec, double x) {
    const Scenario& sc = spec.scenario;
    SweepRow row;
    row.x = x;

    TrapConfig trap{sc.omega_z, sc.n_ions, &sc.species};
    double wavelength = sc.wavelength;
    double waist = sc.waist;
    if (spec.variable == SweepVariable::wavelength) wavelength = x;
    if (spec.variable == SweepVariable::waist) waist = x;
    if (spec.variable == SweepVariable::omega_z) trap.omega_z = x;
    double target = sc.target.resolve(trap.omega_z);

    try {
        if (spec.variable == SweepVariable::offset) {
            // beam pinned at offset x from the chain center; invert the
            // two-point intensity difference of the central pair directly
            ChainGeometry g = equilibrium_positions(trap);
            int a = (g.n() - 1) / 2, b = a + 1;
            double omega = 2.0 * constants::pi * constants::c / wavelength;
            StarkResponse resp = psi(sc.species, omega, sc.mode);
            auto gauss = [&](double z) {
                double d = z - x;
                return std::exp(-2.0 * d * d / (waist * waist));
            };
            double factor = gauss(g.positions[a]) - gauss(g.positions[b]);
            row.wavelength = wavelength;
            row.psi = resp.psi;
            row.kappa_eff = factor;
            if (std::abs(factor) * std::abs(resp.psi) < 1e-15) {
                row.gap = true;
                row.warnings = "no shift contrast at this offset";
                return row;
            }
            double i0 = target / (constants::hbar * std::abs(factor) *
                                  std::abs(resp.psi));
            BeamConfig beam = BeamConfig::from_peak_intensity(
                wavelength, waist, i0, x);
            StarkProfile profile = stark_profile(sc.species, g, beam, sc.mode);
            row.power = beam.power;
            row.scatter = profile.total_scatter;
            row.coherence = profile.coherence_time;
            row.warnings = join(profile.warnings);
            return row;
        }

        PowerSolve solve = required_power(sc.species, trap, waist, wavelength,
                                          target, sc.mode);
        row.wavelength = wavelength;
        row.power = solve.power;
        row.scatter = solve.profile.total_scatter;
        row.coherence = solve.profile.coherence_time;
        row.kappa_eff = solve.kappa_used;
        row.psi = solve.response.psi;
        row.warnings = join(solve.profile.warnings);
    } catch (const NumericError& e) {
        // near-resonance or singular inversion: a gap, not a failure
        row.gap = true;
        row.wavelength = wavelength;
        row.warnings = e.what();
    }
    return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    if (!(spec.min < spec.max))
        throw ValidationError("sweep needs min < max");
    if (spec.points < 2) throw ValidationError("sweep needs at least 2 points");
    if (spec.log_spacing && !(spec.min > 0))
        throw ValidationError("log spacing needs a positive minimum");

    std::vector<double> xs(spec.points);
    for (int i = 0; i < spec.points; ++i) {
        double t = static_cast<double>(i) / (spec.points - 1);
        xs[i] = spec.log_spacing
                    ? std::exp(std::log(spec.min) +
                               t * (std::log(spec.max) - std::log(spec.min)))
                    : spec.min + t * (spec.max - spec.min);
    }

    // validate the fixed part once so workers only see per-point numerics
    if (spec.scenario.species.qubit_kind != QubitKind::optical_sd)
        throw ValidationError("sweeps drive the optical S-D qubit pipeline");
    if (spec.variable != SweepVariable::waist && !(spec.scenario.waist > 0))
        throw ValidationError("waist must be positive");
    if (spec.variable != SweepVariable::wavelength &&
        !(spec.scenario.wavelength > 0))
        throw ValidationError("wavelength must be positive");
    if (spec.variable != SweepVariable::omega_z && !(spec.scenario.omega_z > 0))
        throw ValidationError("axial frequency must be positive");
    if (spec.scenario.n_ions < 2)
        throw ValidationError("a shift difference needs at least two ions");

    std::vector<SweepRow> rows(spec.points);
    std::vector<std::exception_ptr> failures;
    auto work = [&](int begin, int end, std::exception_ptr& failure) {
        try {
            for (int i = begin; i < end; ++i)
                rows[i] = evaluate_point(spec, xs[i]);
        } catch (...) {
            failure = std::current_exception();
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    if (spec.points >= 64 && hw > 1) {
        // independent points, each written to its own slot: deterministic
        unsigned n_threads = std::min(hw, 8u);
        std::vector<std::thread> pool;
        failures.resize(n_threads);
        int chunk = (spec.points + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            int begin = static_cast<int>(t) * chunk;
            int end = std::min(spec.points, begin + chunk);
            if (begin < end)
                pool.emplace_back(work, begin, end, std::ref(failures[t]));
        }
        for (auto& th : pool) th.join();
    } else {
        failures.resize(1);
        work(0, spec.points, failures[0]);
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    return rows;
}

}  // namespace ionstark
