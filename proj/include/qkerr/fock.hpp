#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qkerr/core.hpp"

namespace qkerr {

struct FockMode {
    double omega_hz = 0.0; // bare mode frequency, > 0
    double phi_zpf = 0.0;  // dimensionless zero-point amplitude, >= 0
};

// One quartic monomial: (E4/h) * c / prod(k_mu!) * prod_mu [phi_mu (a+a^dag)]^{k_mu}.
// The 1/prod(k!) bookkeeping gives the monomial-coefficient convention for
// both cases of interest: 1/4 for an AABB term and 1/24 for a single-mode
// phi^4 term.
struct QuarticTerm {
    std::vector<int> exponents; // one entry per mode, >= 0
    double c = 0.0;             // signed dimensionless coefficient
    EnergyScale e4;             // intrinsic quartic scale
};

struct FockSystem {
    std::vector<FockMode> modes;
    std::vector<QuarticTerm> quartic;
    int dim = 12; // per-mode truncation, >= 4
};

using FockLabel = std::vector<int>;

std::string label_to_string(const FockLabel& label);

// Bare-label energies and assignment fidelities after diagonalization.
// Every retained label carries fidelity > 0.5 (unambiguous assignment).
struct LabeledSpectrum {
    std::map<FockLabel, double> energies_hz;
    std::map<FockLabel, double> overlaps;

    double energy(const FockLabel& label) const; // throws on missing label
};

// Total Hilbert dimension dim^n_modes; systems above this are rejected.
inline constexpr long kMaxTotalDimension = 10000;

// Dense H/h in Hz, exactly symmetric by construction.
Eigen::MatrixXd build_hamiltonian(const FockSystem& sys);

// Full dense symmetric eigendecomposition; every bare label with all
// occupations < dim-3 is assigned the max-overlap eigenvector. A fidelity
// <= 0.5 anywhere raises StrongMixing naming the label.
LabeledSpectrum diagonalize_and_label(const FockSystem& sys);

// E(1,1) - E(1,0) - E(0,1) + E(0,0): the double difference cancels the
// linear occupation shifts of the normal-ordered quartic.
double extract_cross_kerr(const LabeledSpectrum& spec);

// E(2) - 2E(1) + E(0) = K/2pi under the (hbar K/2) n(n-1) convention.
double extract_self_kerr(const LabeledSpectrum& spec);

// Normalized quartic strength (E4/h) * prod(phi^k) / min(omega), the
// computable form of the perturbative control parameter. Max over terms.
double lambda_star(const FockSystem& sys);

struct RwaReport {
    double chi_full_hz = 0.0;     // from diagonalization
    double chi_analytic_hz = 0.0; // c * phi_A^2 phi_B^2 * E4/h
    double rel_dev = 0.0;         // 0 when both vanish
};

// Requires a two-mode system with a single AABB term.
RwaReport verify_rwa_reduction(const FockSystem& sys);

struct ConvergedKerr {
    double chi_hz = 0.0;
    int dim = 0;         // per-mode truncation actually used
    bool converged = false;
};

// Raise the per-mode truncation in steps of 2 until successive extractions
// agree to rel_tol or the total-dimension guard trips.
ConvergedKerr cross_kerr_converged(const FockSystem& sys, double rel_tol = 1e-9);

} // namespace qkerr
