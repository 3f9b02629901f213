#pragma once

// Displaced Gaussian addressing beam: intensity profile along the chain
// axis, power <-> peak-intensity conversion, the two-ion geometry factor
// kappa and the offset that maximizes it.
//
// The beam is treated as collimated over the chain: at the waists and
// wavelengths of interest the Rayleigh range is metres while chains are
// tens of micrometres, so axial divergence is ignored.

#include "ionstark/atomic_data.hpp"

namespace ionstark {

struct BeamConfig {
    double wavelength = 0;     // m
    double waist = 0;          // m, 1/e^2 intensity radius
    double center_offset = 0;  // m along the chain axis, from chain center
    Polarization polarization = Polarization::linear_pi;
    double rise_time = 1e-6;   // s
    double peak_intensity = 0; // W/m^2
    double power = 0;          // W, = peak_intensity * pi W^2 / 2
    bool power_primary = false;

    double omega() const;  // rad/s

    static BeamConfig from_power(double wavelength, double waist, double power,
                                 double center_offset = 0,
                                 Polarization pol = Polarization::linear_pi);
    static BeamConfig from_peak_intensity(double wavelength, double waist,
                                          double peak_intensity,
                                          double center_offset = 0,
                                          Polarization pol = Polarization::linear_pi);
    void set_power(double p);
    void set_peak_intensity(double i0);
};

void validate_beam(const BeamConfig& b);

// I0 exp[-2 (z - center)^2 / W^2]
double intensity_at(const BeamConfig& b, double z);

// 2 sinh(dz/W) exp{-[1 + (dz/W)^2] / 2}; equals the normalized intensity
// difference between two ions dz apart with the beam centered W/2 from
// their midpoint.
double kappa(double delta_z, double waist);

// Offset from the two-ion midpoint maximizing the intensity difference;
// golden-section search on [0, 2W], tolerance 1e-4 W. Tends to W/2 for
// dz << W.
double optimal_offset(double delta_z, double waist);

}  // namespace ionstark
