#include "ionstark/beam.hpp"

#include <cmath>

#include "ionstark/constants.hpp"
#include "ionstark/errors.hpp"

namespace ionstark {

double BeamConfig::omega() const {
    return 2.0 * constants::pi * constants::c / wavelength;
}

BeamConfig BeamConfig::from_power(double wavelength, double waist, double power,
                                  double center_offset, Polarization pol) {
    BeamConfig b;
    b.wavelength = wavelength;
    b.waist = waist;
    b.center_offset = center_offset;
    b.polarization = pol;
    b.set_power(power);
    validate_beam(b);
    return b;
}

BeamConfig BeamConfig::from_peak_intensity(double wavelength, double waist,
                                           double peak_intensity,
                                           double center_offset,
                                           Polarization pol) {
    BeamConfig b;
    b.wavelength = wavelength;
    b.waist = waist;
    b.center_offset = center_offset;
    b.polarization = pol;
    b.set_peak_intensity(peak_intensity);
    validate_beam(b);
    return b;
}

void BeamConfig::set_power(double p) {
    power = p;
    power_primary = true;
    peak_intensity = 2.0 * p / (constants::pi * waist * waist);
}

void BeamConfig::set_peak_intensity(double i0) {
    peak_intensity = i0;
    power_primary = false;
    power = i0 * constants::pi * waist * waist / 2.0;
}

void validate_beam(const BeamConfig& b) {
    if (!(b.wavelength > 0))
        throw ValidationError("beam wavelength must be positive");
    if (!(b.waist > 0)) throw ValidationError("beam waist must be positive");
    if (b.peak_intensity < 0)
        throw ValidationError("beam intensity must be non-negative");
    if (b.rise_time < 0)
        throw ValidationError("beam rise time must be non-negative");
}

double intensity_at(const BeamConfig& b, double z) {
    double d = z - b.center_offset;
    return b.peak_intensity * std::exp(-2.0 * d * d / (b.waist * b.waist));
}

double kappa(double delta_z, double waist) {
    double x = delta_z / waist;
    return 2.0 * std::sinh(x) * std::exp(-0.5 * (1.0 + x * x));
}

double optimal_offset(double delta_z, double waist) {
    if (!(delta_z > 0) || !(waist > 0))
        throw ValidationError("optimal_offset needs positive spacing and waist");
    // normalized difference of intensities of ions at -+dz/2 around 0 for a
    // beam centered at c; unimodal in c > 0
    auto diff = [&](double c) {
        auto gauss = [&](double d) {
            return std::exp(-2.0 * d * d / (waist * waist));
        };
        return gauss(c - 0.5 * delta_z) - gauss(c + 0.5 * delta_z);
    };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 2.0 * waist;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = diff(x1), f2 = diff(x2);
    while (b - a > 1e-4 * waist) {
        if (f1 > f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = diff(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = diff(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace ionstark
