#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "ionstark/constants.hpp"
#include "ionstark/errors.hpp"
#include "ionstark/planner.hpp"

using namespace ionstark;
namespace K = ionstark::constants;

static ChainGeometry geometry(const char* name, double omega_z, int n) {
    TrapConfig t;
    t.species = &builtin_species(name);
    t.omega_z = omega_z;
    t.n_ions = n;
    return equilibrium_positions(t);
}

static StarkProfile synthetic_shifts(std::vector<double> shifts) {
    StarkProfile p;
    p.per_ion_shift = std::move(shifts);
    return p;
}

TEST_CASE("weak-shift plan: two ions at half a quantum") {
    double w = 2 * K::pi * 1e6;
    ChainGeometry g = geometry("Ca40+", w, 2);
    StarkProfile p = synthetic_shifts({0.0, w / 2});

    double gamma = w / 40;
    AddressingPlan plan = plan_case_a(p, g, gamma);
    CHECK(plan.regime == Regime::case_a);
    // nearest spectator feature: the carrier at half a quantum, which also
    // equals its distance to the COM red sideband
    CHECK(plan.selectivity_margin == doctest::Approx(w / 2).epsilon(1e-12));
    CHECK(plan.crosstalk_bound == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(plan.mode_collision_flags.empty());
    CHECK(plan.feasible);

    // resolution too coarse: margin < 10 gamma_res
    AddressingPlan bad = plan_case_a(p, g, w / 10);
    CHECK_FALSE(bad.feasible);

    CHECK_THROWS_AS(plan_case_a(p, g, 0.0), ValidationError);
}

TEST_CASE("weak-shift plan rejects splittings at the motional quantum") {
    double w = 2 * K::pi * 1e6;
    ChainGeometry g = geometry("Ca40+", w, 2);
    CHECK_THROWS_AS(plan_case_a(synthetic_shifts({0.0, w}), g, w / 100),
                    RegimeError);
    CHECK_THROWS_AS(plan_case_a(synthetic_shifts({0.0, 1.5 * w}), g, w / 100),
                    RegimeError);
    CHECK_NOTHROW(plan_case_a(synthetic_shifts({0.0, 0.999 * w}), g, w / 2000));
}

TEST_CASE("weak-shift margin matches an independent enumeration") {
    double w = 2 * K::pi * 1e6;
    ChainGeometry g = geometry("Ca40+", w, 3);
    std::vector<double> shifts = {0.0, 0.3 * w, 0.5 * w};
    AddressingPlan plan = plan_case_a(synthetic_shifts(shifts), g, w / 1000);

    double expect = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            double split = std::abs(shifts[i] - shifts[j]);
            expect = std::min(expect, split);
            for (double nu : g.mode_frequencies) {
                expect = std::min(expect, std::abs(split - nu));
                expect = std::min(expect, split + nu);
            }
        }
    CHECK(plan.selectivity_margin == doctest::Approx(expect).epsilon(1e-12));
    CHECK(plan.selectivity_margin == doctest::Approx(0.2 * w).epsilon(1e-9));
}

TEST_CASE("weak-shift plan flags a splitting parked on a sideband") {
    double w = 2 * K::pi * 1e6;
    ChainGeometry g = geometry("Ca40+", w, 2);
    // splitting within 5 gamma_res of the COM mode frequency
    AddressingPlan plan =
        plan_case_a(synthetic_shifts({0.0, 0.99 * w}), g, 0.0021 * w);
    REQUIRE_FALSE(plan.mode_collision_flags.empty());
    CHECK(plan.mode_collision_flags[0] == doctest::Approx(w).epsilon(1e-9));
    CHECK_FALSE(plan.feasible);
    bool mentioned = false;
    for (const auto& msg : plan.warnings)
        if (msg.find("collides") != std::string::npos) mentioned = true;
    CHECK(mentioned);
}

TEST_CASE("strong-shift plan: ten quanta, quiet spectator comb") {
    double w = 2 * K::pi * 1e6;
    ChainGeometry g = geometry("Ca40+", w, 2);
    double k = 2 * K::pi / 729.347e-9;
    StarkProfile p = synthetic_shifts({0.0, 10.0 * w});

    double gamma = 2 * K::pi * 5.0;
    AddressingPlan plan = plan_case_b(p, g, gamma, k);
    CHECK(plan.regime == Regime::case_b);
    CHECK(plan.feasible);
    CHECK(plan.mode_collision_flags.empty());
    // nearest drivable spectator feature: 4th stretch sideband at
    // |10 - 4 sqrt(3)| motional quanta
    CHECK(plan.selectivity_margin ==
          doctest::Approx((10.0 - 4.0 * std::sqrt(3.0)) * w).epsilon(1e-6));
    // worst drivable excitation: the suppressed spectator carrier
    CHECK(plan.crosstalk_bound == doctest::Approx(gamma / (10.0 * w)).epsilon(1e-9));
    CHECK(plan.crosstalk_bound < 1e-6);
}

TEST_CASE("strong-shift plan premise and Lamb-Dicke guards") {
    double w = 2 * K::pi * 1e6;
    ChainGeometry g = geometry("Ca40+", w, 2);
    double k = 2 * K::pi / 729.347e-9;
    // nonzero splitting at only two quanta: premise fails
    CHECK_THROWS_AS(plan_case_b(synthetic_shifts({0.0, 2.0 * w}), g,
                                2 * K::pi * 5.0, k),
                    RegimeError);
    // short-wavelength probe: eta leaves the Lamb-Dicke regime
    CHECK_THROWS_AS(plan_case_b(synthetic_shifts({0.0, 10.0 * w}), g,
                                2 * K::pi * 5.0, 2 * K::pi / 50e-9),
                    RegimeError);
    CHECK_THROWS_AS(plan_case_b(synthetic_shifts({0.0, 10.0 * w}), g,
                                2 * K::pi * 5.0, 0.0),
                    ValidationError);
    CHECK_THROWS_AS(plan_case_b(synthetic_shifts({0.0, 10.0 * w}), g,
                                2 * K::pi * 5.0, k, 0),
                    ValidationError);
    CHECK_THROWS_AS(plan_case_b(synthetic_shifts({0.0, 10.0 * w}), g,
                                2 * K::pi * 5.0, k, 50, -1),
                    ValidationError);
}

TEST_CASE("strong-shift crosstalk reproduces the sideband amplitude") {
    double w = 2 * K::pi * 1e6;
    ChainGeometry g = geometry("Ca40+", w, 2);
    double k = 2 * K::pi / 729.347e-9;
    // splitting parked exactly on the 5th COM sideband, resolution narrow
    // enough that every off-resonant term is negligible
    StarkProfile p = synthetic_shifts({0.0, 5.0 * w});
    double gamma = 2 * K::pi * 0.01;
    AddressingPlan plan = plan_case_b(p, g, gamma, k);

    double eta = lamb_dicke(g, 0, k, 0);
    double amp5 = std::pow(eta, 5) / std::sqrt(120.0);  // sqrt(5!)
    CHECK(plan.crosstalk_bound == doctest::Approx(amp5).epsilon(1e-9));
    // the same resonant term gates the collision flag: amplitude below the
    // 1e-6 floor, so the mode is not flagged
    CHECK(amp5 < 1e-6);
    CHECK(plan.mode_collision_flags.empty());

    // thermal occupation scales the amplitude by sqrt((n+m)!/(n! m!)) ratios
    AddressingPlan warm = plan_case_b(p, g, gamma, k, 50, 1);
    CHECK(warm.crosstalk_bound ==
          doctest::Approx(amp5 * std::sqrt(6.0)).epsilon(1e-9));
}

TEST_CASE("strong-shift plan flags a drivable harmonic collision") {
    double w = 2 * K::pi * 1e6;
    ChainGeometry g = geometry("Ca40+", w, 2);
    double k = 2 * K::pi / 729.347e-9;
    // splitting at twice the stretch mode: premise holds (2 sqrt(3) > 3),
    // second-order sideband amplitude ~2e-3 is well above the floor
    StarkProfile p = synthetic_shifts({0.0, 2.0 * std::sqrt(3.0) * w});
    AddressingPlan plan = plan_case_b(p, g, 2 * K::pi * 5.0, k);
    REQUIRE_FALSE(plan.mode_collision_flags.empty());
    CHECK(plan.mode_collision_flags[0] ==
          doctest::Approx(std::sqrt(3.0) * w).epsilon(1e-9));
    CHECK_FALSE(plan.feasible);
}

TEST_CASE("pair plan: two ions need no spectator separation") {
    ChainGeometry g = geometry("Ca40+", 2 * K::pi * 1e6, 2);
    const IonSpecies& ca = builtin_species("Ca40+");
    BeamConfig tmpl = BeamConfig::from_power(1064e-9, 30e-6, 5.0);
    PairGatePlan pp = pair_gate_plan(g, ca, tmpl, 0, 1, 2 * K::pi * 1000,
                                     PsiMode::fine);
    CHECK(pp.beam.center_offset == 0.0);
    CHECK(pp.residual_mismatch == 0.0);
    CHECK(pp.beam.power == doctest::Approx(tmpl.power).epsilon(1e-12));
    CHECK(pp.plan.feasible);
    CHECK(pp.plan.selectivity_margin == std::numeric_limits<double>::infinity());
    CHECK(pp.common_shift > 0);
}

TEST_CASE("pair plan: outer pair of three, minimal power for the margin") {
    ChainGeometry g = geometry("Ca40+", 2 * K::pi * 1e6, 3);
    const IonSpecies& ca = builtin_species("Ca40+");
    BeamConfig tmpl = BeamConfig::from_power(1064e-9, 30e-6, 20.0);
    double gamma = 2 * K::pi * 1000;

    PairGatePlan pp = pair_gate_plan(g, ca, tmpl, 0, 2, gamma, PsiMode::fine);
    CHECK(pp.beam.center_offset == 0.0);
    CHECK(pp.plan.feasible);
    CHECK(pp.residual_mismatch <= 1e-6 * std::abs(pp.common_shift));
    // power is raised exactly to the 10 gamma_res separation (plus headroom)
    CHECK(pp.best_margin ==
          doctest::Approx(10 * gamma * (1 + 1e-9)).epsilon(1e-9));

    // direct evaluation of the spectator separation per unit intensity
    StarkResponse resp = psi(ca, pp.beam.omega(), PsiMode::fine);
    double W = pp.beam.waist;
    auto gauss = [&](double z) { return std::exp(-2 * z * z / (W * W)); };
    double sep = std::abs(resp.psi) * pp.beam.peak_intensity *
                 std::abs(gauss(g.positions[1]) - gauss(g.positions[0]));
    CHECK(pp.best_margin == doctest::Approx(sep).epsilon(1e-9));
    CHECK(pp.beam.power < tmpl.power);
}

TEST_CASE("pair plan: adjacent pair margins and the power cap") {
    ChainGeometry g = geometry("Ca40+", 2 * K::pi * 1e6, 3);
    const IonSpecies& ca = builtin_species("Ca40+");
    double gamma = 2 * K::pi * 1000;

    BeamConfig tmpl = BeamConfig::from_power(1064e-9, 30e-6, 20.0);
    PairGatePlan pp = pair_gate_plan(g, ca, tmpl, 0, 1, gamma, PsiMode::fine);
    double mid = 0.5 * (g.positions[0] + g.positions[1]);
    CHECK(pp.beam.center_offset == mid);
    CHECK(pp.plan.feasible);
    CHECK(pp.best_margin == doctest::Approx(10 * gamma * (1 + 1e-9)).epsilon(1e-9));
    CHECK(pp.residual_mismatch <= 1e-6 * std::abs(pp.common_shift));

    // an uncapped solve would need more power than this template offers
    BeamConfig weak = BeamConfig::from_power(1064e-9, 30e-6, 1e-9);
    PairGatePlan capped = pair_gate_plan(g, ca, weak, 0, 1, gamma, PsiMode::fine);
    CHECK_FALSE(capped.plan.feasible);
    CHECK(capped.best_margin > 0);
    CHECK(capped.best_margin < 10 * gamma);
    bool mentioned = false;
    for (const auto& msg : capped.plan.warnings)
        if (msg.find("power cap") != std::string::npos) mentioned = true;
    CHECK(mentioned);

    CHECK_THROWS_AS(pair_gate_plan(g, ca, tmpl, 0, 0, gamma, PsiMode::fine),
                    ValidationError);
    CHECK_THROWS_AS(pair_gate_plan(g, ca, tmpl, 0, 3, gamma, PsiMode::fine),
                    ValidationError);
    CHECK_THROWS_AS(pair_gate_plan(g, ca, tmpl, 0, 1, 0.0, PsiMode::fine),
                    ValidationError);
}

static PowerSolve standard_solve() {
    const IonSpecies& ca = builtin_species("Ca40+");
    TrapConfig t;
    t.species = &ca;
    t.omega_z = 2 * K::pi * 1e6;
    t.n_ions = 2;
    return required_power(ca, t, 30e-6, 1064e-9, K::hbar * t.omega_z / 2,
                          PsiMode::fine);
}

TEST_CASE("mechanical check: internal identities and the pass gates") {
    const IonSpecies& ca = builtin_species("Ca40+");
    TrapConfig t;
    t.species = &ca;
    t.omega_z = 2 * K::pi * 1e6;
    t.n_ions = 2;
    PowerSolve ps = standard_solve();
    ChainGeometry g = equilibrium_positions(t);

    MechanicalCheck mc = mechanical_check(ps.profile, g, ps.beam, t);
    double m = g.mass, w2 = t.omega_z * t.omega_z;
    CHECK(mc.trap_force ==
          doctest::Approx(m * w2 * g.min_spacing / 2).epsilon(1e-12));
    CHECK(mc.delta_z_shift ==
          doctest::Approx(mc.f_grad_exact / (m * w2)).epsilon(1e-12));
    CHECK(mc.spread_ratio ==
          doctest::Approx(g.sigma_z / mc.delta_z_shift).epsilon(1e-12));
    CHECK(mc.force_ratio ==
          doctest::Approx(mc.trap_force / mc.f_grad_exact).epsilon(1e-12));
    // at the minimal rise time the kick deposits exactly 1% of a quantum
    double v = mc.delta_z_shift / mc.min_rise_time;
    CHECK(0.5 * m * v * v ==
          doctest::Approx(0.01 * K::hbar * t.omega_z).epsilon(1e-12));

    // the coarse estimate and the gradient-true force agree within a factor 3
    double r = mc.f_grad_estimate / mc.f_grad_exact;
    CHECK(r > 1.0 / 3.0);
    CHECK(r < 3.0);
    CHECK(mc.pass);

    // the gradient force comes from the true beam profile
    double max_grad = 0;
    double h = 1e-9;
    for (double z : g.positions) {
        double grad =
            std::abs(intensity_at(ps.beam, z + h) - intensity_at(ps.beam, z - h)) /
            (2 * h);
        max_grad = std::max(max_grad, grad);
    }
    CHECK(mc.f_grad_exact ==
          doctest::Approx(K::hbar * std::abs(ps.response.psi) * max_grad)
              .epsilon(1e-6));

    BeamConfig snap = ps.beam;
    snap.rise_time = 1e-12;
    MechanicalCheck fast = mechanical_check(ps.profile, g, snap, t);
    CHECK_FALSE(fast.pass);

    ChainGeometry g1 = geometry("Ca40+", t.omega_z, 1);
    CHECK_THROWS_AS(mechanical_check(ps.profile, g1, ps.beam, t),
                    ValidationError);
}

TEST_CASE("phase ledger integrates the shift rates") {
    PowerSolve ps = standard_solve();
    double w = 2 * K::pi * 1e6;

    PhaseLedger zero = phase_ledger(ps.profile, 0.0);
    for (double phi : zero.phase) CHECK(phi == 0.0);

    double t = 2 * K::pi / w;  // one trap period at half a quantum: pi phase
    PhaseLedger led = phase_ledger(ps.profile, t);
    REQUIRE(led.phase.size() == 2);
    int up = ps.up_shifted_ion;
    CHECK(led.phase[up] - led.phase[1 - up] ==
          doctest::Approx(K::pi).epsilon(1e-9));
    // ledger is consistent with the splitting matrix
    double dphi = led.phase[0] - led.phase[1];
    CHECK(dphi == doctest::Approx(ps.profile.splitting[0][1] * t / K::hbar)
                      .epsilon(1e-12));
    for (size_t i = 0; i < led.phase.size(); ++i) {
        CHECK(led.phase[i] == led.rate[i] * t);
        CHECK(led.phase_mod_2pi[i] >= 0.0);
        CHECK(led.phase_mod_2pi[i] < 2 * K::pi);
    }
    CHECK_THROWS_AS(phase_ledger(ps.profile, -1.0), ValidationError);
}
