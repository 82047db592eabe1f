#pragma once

#include <complex>

#include "qkerr/core.hpp"

namespace qkerr {

struct DrudeParams {
    double eps_inf = 1.0;      // high-frequency permittivity, >= 1 for real fits
    double omega_p_rad_s = 0.0; // plasma frequency, > 0
    double gamma_rad_s = 0.0;   // damping, >= 0
};

struct EnzSpec {
    DrudeParams drude;
    double chi3_eff = 0.0; // (m/V)^2, >= 0
    double v_eff_m3 = 0.0; // > 0
};

// eps(omega) = eps_inf - omega_p^2 / (omega^2 + i gamma omega).
// With the e^{-i omega t} convention used here, Im eps >= 0 for gamma >= 0.
std::complex<double> drude_permittivity(const DrudeParams& p, double omega_rad_s);

// Bisect Re eps = 0 on (0, 10 omega_p] to 1e-10 relative. For gamma = 0 this
// is omega_p / sqrt(eps_inf).
double find_enz_frequency(const DrudeParams& p);

// E4/h = [3 hbar omega^2 |chi3_eff| / (4 eps0^2 |eps(omega)|^2 V_eff)] / h.
// Refuses |eps| < 1e-12: a tiny error near the ENZ point would otherwise
// blow up the scale arbitrarily.
EnergyScale e4_enz(const EnzSpec& spec, double omega_rad_s);

inline constexpr double kEnzEpsGuard = 1e-12;

} // namespace qkerr
