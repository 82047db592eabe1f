#pragma once

#include "qkerr/core.hpp"

namespace qkerr {

struct JunctionParams {
    EnergyScale ej; // Josephson energy, E_J/h in Hz, > 0
    EnergyScale ec; // charging energy, E_C/h in Hz, > 0
};

struct QuartonSpec {
    JunctionParams junction;
    double p_a = 0.0;     // participation of the element in mode A, [0, 1]
    double p_b = 0.0;     // participation in mode B, [0, 1]
    double omega_a_hz = 0.0;
    double omega_b_hz = 0.0;
};

struct SnailSpec {
    int n_junctions = 3;  // N >= 2 small junctions in the array arm
    double alpha = 0.0;   // shunt junction energy ratio, > 0
    EnergyScale ej;       // E_J/h of one array junction
    double flux = 0.0;    // external flux in units of Phi_0, taken mod 1
};

// Taylor data of the flux-biased potential about its minimum:
// V(phi_min + x)/h = V0 + c2 x^2/2! + c3 x^3/3! + c4 x^4/4! + ...
struct SnailExpansion {
    double phi_min_rad = 0.0;
    double c2_hz = 0.0; // > 0 at a true minimum
    double c3_hz = 0.0;
    double c4_hz = 0.0;
};

// Phase zero-point amplitude in charge normalization, (2 E_C / E_J)^(1/4).
double phi_zpf(const JunctionParams& j);

// Single-element cross-Kerr projection: p_A^2 p_B^2 phi^4, identical to
// eta_quarton(p_A phi, p_B phi).
ProjectionFactor eta_junction(double p_a, double p_b, double phi);

// Quarton projection from the mode-projected zero-point amplitudes:
// phi_A^2 phi_B^2.
ProjectionFactor eta_quarton(double phi_a, double phi_b);

// Transmon-coupler (SQUID) projection: E_C / (8 E_J).
ProjectionFactor eta_squid(const JunctionParams& coupler);

// Fluxonium projection: p^2 phi^4. phi may exceed 1 by design.
ProjectionFactor eta_fluxonium(double p, double phi);

// V(phi)/h = -N EJ cos((phi - 2 pi flux)/N) - alpha EJ cos(phi).
// The external flux sits in the array arm (loop-constraint gauge); the
// positions of the c4 zeros are gauge independent.
double snail_potential(double phi_rad, const SnailSpec& spec);

// Locate the global minimum over one 2 pi N period (multistart bracketed
// search polished to |V'| < 1e-10 EJ) and return closed-form derivatives
// of the potential there.
SnailExpansion snail_expansion(const SnailSpec& spec);

// Bisect flux in (0, 0.5) for c4(flux) = 0 to |c4| < 1e-9 EJ.
// Throws NoKerrFreePoint when c4 keeps one sign over the interval.
double find_kerr_free_flux(int n_junctions, double alpha, const EnergyScale& ej);

// delta eta / eta = (1/2) delta E_C/E_C + (1/2) delta E_J/E_J.
double sc_eta_uncertainty(double rel_ec, double rel_ej);

} // namespace qkerr
