#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "qkerr/core.hpp"

namespace qkerr {

// Scalar mode-profile magnitude |f(r)| sampled on a regular grid,
// x-fastest ordering. Normalized profiles carry units m^(-3/2).
struct FieldGrid {
    int nx = 1, ny = 1, nz = 1;
    double dx = 0.0, dy = 0.0, dz = 0.0; // meters
    std::vector<double> amplitude;       // size nx*ny*nz

    std::size_t size() const { return amplitude.size(); }
    double cell_volume() const { return dx * dy * dz; }
    bool same_geometry(const FieldGrid& other) const;
};

struct PhotonicSpec {
    double wavelength_m = 0.0; // lambda
    double n0 = 0.0;           // refractive index
    double chi3 = 0.0;         // (m/V)^2
    double v_eff_m3 = 0.0;     // meters^3
    double gamma0 = 0.0;       // reference nonlinear overlap, m^-3
};

// Text format: line 1 "nx ny nz", line 2 "dx dy dz" (meters), then
// nx*ny*nz whitespace-separated amplitudes, x fastest. '#' starts a comment.
FieldGrid read_field_grid(const std::string& path);
FieldGrid read_field_grid(std::istream& in, const std::string& name);

// Deterministic pairwise reduction; result is independent of any chunked
// evaluation order.
double pairwise_sum(const double* data, std::size_t n);

// Integral of |f|^2 dV (midpoint rule).
double grid_norm_sq(const FieldGrid& g);

// Rescale so that the norm integral is 1 to 1e-12 relative.
FieldGrid normalize_grid(const FieldGrid& g);

// Midpoint-rule integral of |f_a|^2 |f_b|^2 dV, in m^-3.
double overlap_integral(const FieldGrid& a, const FieldGrid& b);

// Peak-normalized mode volume 1/max|f|^2 of a unit-normalized profile.
// Reduces to the geometric volume for a uniform field.
double mode_volume(const FieldGrid& g);

// eta = (lambda^3 / V_eff) * (overlap / Gamma0).
ProjectionFactor eta_photonic(const PhotonicSpec& spec, double overlap_m3);

// E4/h = [3 hbar omega^2 chi3 / (4 eps0^2 n0^4 V_eff)] / h, omega in rad/s.
EnergyScale e4_photonic(const PhotonicSpec& spec, double omega_rad_s);

// chi3 = 4 n0^2 eps0 c n2 / 3, n2 in m^2/W.
double chi3_from_n2(double n2, double n0);

} // namespace qkerr
