#pragma once

// Equilibrium positions, axial normal modes, Lamb-Dicke parameters and
// ground-state spread for N ions in a harmonic axial well.

#include <vector>

#include "ionstark/atomic_data.hpp"

namespace ionstark {

struct TrapConfig {
    double omega_z = 0;  // axial secular angular frequency, rad/s
    int n_ions = 1;
    const IonSpecies* species = nullptr;
};

struct ChainGeometry {
    double mass = 0;         // kg, of one ion
    double omega_z = 0;      // rad/s
    double length_scale = 0; // m, (q^2 / 4 pi eps0 m omega_z^2)^(1/3)
    std::vector<double> positions;  // m, ascending, sum = 0
    double min_spacing = 0;         // m, smallest adjacent gap
    double sigma_z = 0;             // m, sqrt(hbar / 2 m omega_z)
    std::vector<double> mode_frequencies;          // rad/s, ascending, COM first
    std::vector<std::vector<double>> mode_vectors; // [mode][ion], orthonormal
    std::vector<std::string> warnings;

    int n() const { return static_cast<int>(positions.size()); }
};

// Damped Newton solve of the force balance; deterministic, throws
// NumericError with the residual if 200 iterations do not converge.
ChainGeometry equilibrium_positions(const TrapConfig& trap);

// Eigen-decomposition of the scaled potential Hessian at the equilibrium.
// Returned (and stored) frequencies ascending, center-of-mass mode first.
void normal_modes(ChainGeometry& g);

// eta = k |b_{ion,mode}| sqrt(hbar / 2 m nu_mode)
double lamb_dicke(const ChainGeometry& g, int mode_index,
                  double probe_wavevector, int ion_index);

double ground_state_spread(double mass, double omega);

}  // namespace ionstark
