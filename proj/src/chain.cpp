#include "ionstark/chain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "ionstark/constants.hpp"
#include "ionstark/errors.hpp"

namespace ionstark {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Dimensionless gradient of u_i^2/2 + sum_{i<j} 1/|u_i-u_j|.
VectorXd gradient(const VectorXd& u) {
    const int n = static_cast<int>(u.size());
    VectorXd g = u;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double d = u[i] - u[j];
            g[i] -= (d > 0 ? 1.0 : -1.0) / (d * d);
        }
    return g;
}

MatrixXd hessian(const VectorXd& u) {
    const int n = static_cast<int>(u.size());
    MatrixXd h = MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        h(i, i) = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double a = 2.0 / std::pow(std::abs(u[i] - u[j]), 3);
            h(i, i) += a;
            h(i, j) = -a;
        }
    }
    return h;
}

}  // namespace

double ground_state_spread(double mass, double omega) {
    return std::sqrt(constants::hbar / (2.0 * mass * omega));
}

ChainGeometry equilibrium_positions(const TrapConfig& trap) {
    if (trap.species == nullptr)
        throw ValidationError("trap configuration lacks a species");
    if (!(trap.omega_z > 0))
        throw ValidationError("axial frequency must be positive");
    if (trap.n_ions < 1)
        throw ValidationError("ion count must be at least 1");

    ChainGeometry g;
    g.mass = trap.species->mass;
    g.omega_z = trap.omega_z;
    const double q = trap.species->charge * constants::e_charge;
    g.length_scale = std::cbrt(q * q /
                               (4.0 * constants::pi * constants::epsilon_0 *
                                g.mass * g.omega_z * g.omega_z));
    g.sigma_z = ground_state_spread(g.mass, g.omega_z);

    const int n = trap.n_ions;
    if (n > 20)
        g.warnings.push_back(
            "chains longer than 20 ions strain the linear, axial-only model; "
            "check radial confinement");

    VectorXd u(n);
    if (n == 1) {
        u[0] = 0.0;
    } else {
        // quasi-uniform starting guess, good to a few percent
        for (int i = 0; i < n; ++i)
            u[i] = (i + 1 - 0.5 * (n + 1)) * 2.018 / std::pow(n, 0.559);

        bool converged = false;
        double gnorm = 0;
        for (int it = 0; it < 200; ++it) {
            VectorXd grad = gradient(u);
            gnorm = grad.lpNorm<Eigen::Infinity>();
            if (gnorm < 1e-13 * std::max(1.0, u.lpNorm<Eigen::Infinity>())) {
                converged = true;
                break;
            }
            VectorXd step = hessian(u).ldlt().solve(-grad);
            double alpha = 1.0;
            for (int back = 0; back < 8; ++back) {
                VectorXd trial = u + alpha * step;
                // keep the ordering; a collapsed ordering makes 1/d^2 blow up
                bool ordered = true;
                for (int i = 0; i + 1 < n; ++i)
                    if (!(trial[i] < trial[i + 1])) { ordered = false; break; }
                if (ordered &&
                    gradient(trial).lpNorm<Eigen::Infinity>() < gnorm) {
                    u = trial;
                    break;
                }
                alpha *= 0.5;
                if (back == 7) u += alpha * step;
            }
        }
        if (!converged)
            throw NumericError(
                "equilibrium solve did not converge in 200 iterations "
                "(residual " + std::to_string(gnorm) + ")");
    }

    // recentre exactly; the solve conserves the mean only to round-off
    u.array() -= u.mean();

    g.positions.resize(n);
    for (int i = 0; i < n; ++i) g.positions[i] = g.length_scale * u[i];
    g.min_spacing = 0;
    for (int i = 0; i + 1 < n; ++i) {
        double gap = g.positions[i + 1] - g.positions[i];
        if (g.min_spacing == 0 || gap < g.min_spacing) g.min_spacing = gap;
    }

    normal_modes(g);
    return g;
}

void normal_modes(ChainGeometry& g) {
    const int n = g.n();
    VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = g.positions[i] / g.length_scale;

    Eigen::SelfAdjointEigenSolver<MatrixXd> es(hessian(u));
    if (es.info() != Eigen::Success)
        throw NumericError("mode eigen-decomposition failed");

    g.mode_frequencies.resize(n);
    g.mode_vectors.assign(n, std::vector<double>(n));
    for (int k = 0; k < n; ++k) {
        g.mode_frequencies[k] = g.omega_z * std::sqrt(es.eigenvalues()[k]);
        VectorXd v = es.eigenvectors().col(k);
        // fix the sign for reproducibility across BLAS backends
        int lead = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(v[i]) > std::abs(v[lead])) lead = i;
        if (v[lead] < 0) v = -v;
        for (int i = 0; i < n; ++i) g.mode_vectors[k][i] = v[i];
    }
}

double lamb_dicke(const ChainGeometry& g, int mode_index,
                  double probe_wavevector, int ion_index) {
    const int n = g.n();
    if (mode_index < 0 || mode_index >= n)
        throw ValidationError("mode index out of range");
    if (ion_index < 0 || ion_index >= n)
        throw ValidationError("ion index out of range");
    if (probe_wavevector < 0)
        throw ValidationError("probe wavevector must be non-negative");
    double nu = g.mode_frequencies[mode_index];
    return probe_wavevector * std::abs(g.mode_vectors[mode_index][ion_index]) *
           std::sqrt(constants::hbar / (2.0 * g.mass * nu));
}

}  // namespace ionstark
