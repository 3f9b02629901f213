#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "ionstark/chain.hpp"
#include "ionstark/constants.hpp"
#include "ionstark/errors.hpp"

using namespace ionstark;
namespace K = ionstark::constants;

static TrapConfig trap_of(const char* name, double omega_z_2pi_hz, int n) {
    TrapConfig t;
    t.species = &builtin_species(name);
    t.omega_z = 2 * K::pi * omega_z_2pi_hz;
    t.n_ions = n;
    return t;
}

TEST_CASE("two-ion spacing has a closed form") {
    for (const char* name : {"Ca40+", "Sr88+", "Ba138+"}) {
        TrapConfig t = trap_of(name, 1.0e6, 2);
        ChainGeometry g = equilibrium_positions(t);
        double m = t.species->mass;
        double d = std::cbrt(K::e_charge * K::e_charge /
                             (2 * K::pi * K::epsilon_0 * m * t.omega_z * t.omega_z));
        CHECK(g.min_spacing == doctest::Approx(d).epsilon(1e-9));
        CHECK(g.positions[0] == doctest::Approx(-d / 2).epsilon(1e-9));
        CHECK(g.positions[1] == doctest::Approx(d / 2).epsilon(1e-9));
    }
}

TEST_CASE("two-ion spacings at reference trap frequencies") {
    CHECK(equilibrium_positions(trap_of("Ca40+", 0.7e6, 2)).min_spacing ==
          doctest::Approx(7.1e-6).epsilon(0.02));
    CHECK(equilibrium_positions(trap_of("Ca40+", 1.0e6, 2)).min_spacing ==
          doctest::Approx(5.6e-6).epsilon(0.02));
    CHECK(equilibrium_positions(trap_of("Sr88+", 1.0e6, 2)).min_spacing ==
          doctest::Approx(4.3e-6).epsilon(0.02));
    CHECK(equilibrium_positions(trap_of("Ba138+", 1.0e6, 2)).min_spacing ==
          doctest::Approx(3.7e-6).epsilon(0.02));
}

TEST_CASE("single ion sits at the origin") {
    ChainGeometry g = equilibrium_positions(trap_of("Ca40+", 1.0e6, 1));
    REQUIRE(g.n() == 1);
    CHECK(g.positions[0] == 0.0);
    REQUIRE(g.mode_frequencies.size() == 1);
    CHECK(g.mode_frequencies[0] == doctest::Approx(g.omega_z).epsilon(1e-12));
}

TEST_CASE("positions are centered, ordered, and scale as omega^(-2/3)") {
    ChainGeometry g = equilibrium_positions(trap_of("Ca40+", 1.0e6, 7));
    double sum = 0;
    for (double z : g.positions) sum += z;
    CHECK(std::abs(sum) <= 1e-13 * g.length_scale);
    CHECK(std::is_sorted(g.positions.begin(), g.positions.end()));

    ChainGeometry g2 = equilibrium_positions(trap_of("Ca40+", 2.0e6, 7));
    double p = std::log(g.min_spacing / g2.min_spacing) / std::log(2.0);
    CHECK(p == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

// independent solver: plain gradient descent with backtracking on the
// dimensionless potential, started from a uniform stretch
static std::vector<double> descend_positions(int n) {
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = (i - 0.5 * (n - 1)) * 1.5;
    auto grad = [&](const std::vector<double>& x, std::vector<double>& out) {
        double norm = 0;
        for (int i = 0; i < n; ++i) {
            double gi = x[i];
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                double d = x[i] - x[j];
                gi -= (d > 0 ? 1.0 : -1.0) / (d * d);
            }
            out[i] = gi;
            norm = std::max(norm, std::abs(gi));
        }
        return norm;
    };
    auto energy = [&](const std::vector<double>& x) {
        double e = 0;
        for (int i = 0; i < n; ++i) {
            e += 0.5 * x[i] * x[i];
            for (int j = i + 1; j < n; ++j) e += 1.0 / std::abs(x[i] - x[j]);
        }
        return e;
    };
    std::vector<double> g(n), trial(n);
    double step = 0.1;
    bool stalled = false;
    for (int it = 0; it < 200000 && !stalled; ++it) {
        double norm = grad(u, g);
        if (norm < 1e-11) break;  // position error ~ norm / lambda_min << 1e-8
        double e0 = energy(u);
        while (true) {
            for (int i = 0; i < n; ++i) trial[i] = u[i] - step * g[i];
            if (energy(trial) < e0) break;
            step *= 0.5;
            if (step < 1e-16) { stalled = true; break; }  // at the fp floor
        }
        if (!stalled) {
            u = trial;
            step *= 1.1;
        }
    }
    double mean = 0;
    for (double x : u) mean += x / n;
    for (double& x : u) x -= mean;
    return u;
}

TEST_CASE("newton solution matches a from-scratch gradient descent") {
    for (int n : {3, 5, 10}) {
        TrapConfig t = trap_of("Ca40+", 1.0e6, n);
        ChainGeometry g = equilibrium_positions(t);
        std::vector<double> ref = descend_positions(n);
        double span = ref.back() - ref.front();
        for (int i = 0; i < n; ++i) {
            double ui = g.positions[i] / g.length_scale;
            // the descent oracle bottoms out near sqrt(eps); seven digits of
            // agreement is all it can certify
            CHECK(std::abs(ui - ref[i]) <= 5e-7 * span);
        }
    }
}

TEST_CASE("equilibrium satisfies the force balance in SI units") {
    TrapConfig t = trap_of("Ba138+", 0.9e6, 5);
    ChainGeometry g = equilibrium_positions(t);
    double coul = K::e_charge * K::e_charge / (4 * K::pi * K::epsilon_0);
    double scale = g.mass * g.omega_z * g.omega_z * g.min_spacing;
    for (int i = 0; i < g.n(); ++i) {
        double f = -g.mass * g.omega_z * g.omega_z * g.positions[i];
        for (int j = 0; j < g.n(); ++j) {
            if (j == i) continue;
            double d = g.positions[i] - g.positions[j];
            f += coul * (d > 0 ? 1.0 : -1.0) / (d * d);
        }
        CHECK(std::abs(f) <= 1e-10 * scale);
    }
}

TEST_CASE("axial mode frequencies: analytic low-N values") {
    ChainGeometry g2 = equilibrium_positions(trap_of("Ca40+", 1.0e6, 2));
    REQUIRE(g2.mode_frequencies.size() == 2);
    CHECK(g2.mode_frequencies[0] == doctest::Approx(g2.omega_z).epsilon(1e-9));
    CHECK(g2.mode_frequencies[1] ==
          doctest::Approx(std::sqrt(3.0) * g2.omega_z).epsilon(1e-9));

    ChainGeometry g3 = equilibrium_positions(trap_of("Sr88+", 1.0e6, 3));
    REQUIRE(g3.mode_frequencies.size() == 3);
    CHECK(g3.mode_frequencies[1] ==
          doctest::Approx(std::sqrt(3.0) * g3.omega_z).epsilon(1e-6));
    CHECK(g3.mode_frequencies[2] ==
          doctest::Approx(std::sqrt(29.0 / 5.0) * g3.omega_z).epsilon(1e-6));
}

TEST_CASE("mode vectors are orthonormal and the COM mode is uniform") {
    ChainGeometry g = equilibrium_positions(trap_of("Ca40+", 1.0e6, 6));
    int n = g.n();
    REQUIRE(static_cast<int>(g.mode_vectors.size()) == n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            double dot = 0;
            for (int i = 0; i < n; ++i)
                dot += g.mode_vectors[a][i] * g.mode_vectors[b][i];
            CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) <= 1e-10);
        }
    double uniform = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
        CHECK(g.mode_vectors[0][i] == doctest::Approx(uniform).epsilon(1e-10));
}

TEST_CASE("lamb-dicke parameter") {
    ChainGeometry g1 = equilibrium_positions(trap_of("Ca40+", 1.0e6, 1));
    double k729 = 2 * K::pi / 729.347e-9;
    // single ion, COM mode: eta = k sigma_z
    double eta = lamb_dicke(g1, 0, k729, 0);
    CHECK(eta == doctest::Approx(k729 * g1.sigma_z).epsilon(1e-12));
    CHECK(eta == doctest::Approx(0.0969).epsilon(2e-3));
    CHECK(lamb_dicke(g1, 0, 0.0, 0) == 0.0);

    // two ions: the stretch mode couples both ions equally in magnitude
    ChainGeometry g2 = equilibrium_positions(trap_of("Ca40+", 1.0e6, 2));
    CHECK(lamb_dicke(g2, 1, k729, 0) ==
          doctest::Approx(lamb_dicke(g2, 1, k729, 1)).epsilon(1e-12));
    // and sqrt(2) weaker per ion than a single-ion COM at the same frequency
    CHECK(lamb_dicke(g2, 0, k729, 0) ==
          doctest::Approx(eta / std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(lamb_dicke(g2, 5, k729, 0), ValidationError);
    CHECK_THROWS_AS(lamb_dicke(g2, 0, k729, -1), ValidationError);
}

TEST_CASE("ground state spread") {
    double m = builtin_species("Ca40+").mass;
    double w = 2 * K::pi * 1.0e6;
    CHECK(ground_state_spread(m, w) ==
          doctest::Approx(std::sqrt(K::hbar / (2 * m * w))).epsilon(1e-12));
}

TEST_CASE("long chains warn; solver is deterministic") {
    ChainGeometry g = equilibrium_positions(trap_of("Ca40+", 1.0e6, 21));
    CHECK_FALSE(g.warnings.empty());

    ChainGeometry a = equilibrium_positions(trap_of("Ca40+", 1.1e6, 9));
    ChainGeometry b = equilibrium_positions(trap_of("Ca40+", 1.1e6, 9));
    CHECK(a.positions == b.positions);
    CHECK(a.mode_frequencies == b.mode_frequencies);
    CHECK(a.mode_vectors == b.mode_vectors);
}

TEST_CASE("invalid trap configuration") {
    TrapConfig t = trap_of("Ca40+", 1.0e6, 0);
    CHECK_THROWS_AS(equilibrium_positions(t), ValidationError);
    t.n_ions = 2;
    t.omega_z = 0;
    CHECK_THROWS_AS(equilibrium_positions(t), ValidationError);
    t.omega_z = 2 * K::pi * 1e6;
    t.species = nullptr;
    CHECK_THROWS_AS(equilibrium_positions(t), ValidationError);
}
