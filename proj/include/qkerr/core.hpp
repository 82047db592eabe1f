#pragma once

#include <optional>
#include <string>

#include "qkerr/errors.hpp"

namespace qkerr {

// A frequency-equivalent energy E/h. All energies in this library are
// carried in Hz; h never appears in user-facing arithmetic.
struct EnergyScale {
    double freq_equiv_hz = 0.0; // E/h, >= 0
    double rel_unc = 0.0;       // relative uncertainty, >= 0

    static EnergyScale from_hz(double hz, double rel_unc = 0.0);
};

// Which kernel produced a projection factor.
enum class EtaKernel {
    junction,
    quarton,
    squid,
    fluxonium,
    snail,
    photonic,
    paper_kernel, // stored device-file constant, not recomputed
    inverted,     // obtained from a measured rate via invert_eta
};

const char* to_string(EtaKernel k);

// Dimensionless projection coefficient. Nonnegative for every shipped
// kernel; the sign of a physical coupling rides on the monomial coefficient.
struct ProjectionFactor {
    double value = 0.0;
    double rel_unc = 0.0;
    EtaKernel kernel = EtaKernel::junction;
};

// Signed dimensionless coefficient of a quartic monomial.
struct MonomialCoefficient {
    double c = 0.0;
};

enum class Regime { weak, intermediate, strong, unknown };

const char* to_string(Regime r);

struct KerrPrediction {
    double chi_over_2pi_hz = 0.0; // signed
    double abs_unc_hz = 0.0;      // >= 0
    Regime regime = Regime::unknown;
    std::optional<double> deviation_pct;
};

struct RegimeInputs {
    double chi_hz = 0.0;   // magnitude is what matters
    double omega_hz = 0.0; // bare mode frequency, > 0
    std::optional<double> kappa_hz;        // linewidth
    std::optional<double> mode_spacing_hz; // |omega_A - omega_B|
};

// Classification thresholds. The qualitative regime boundaries come with no
// numbers attached; these are fixed configuration constants of this library.
inline constexpr double kRegimeFreqRatio = 0.01;    // chi/omega limit for RWA validity
inline constexpr double kRegimeSpacingRatio = 0.01; // chi/mode-spacing limit

// chi/2pi = eta * E4/h. Uncertainty is first-order linear; regime stays
// unknown until classify_regime is applied.
KerrPrediction predict_cross_kerr(const ProjectionFactor& eta, const EnergyScale& e4);

// K/2pi = (E4/h) * (1/2) * c * phi_zpf^4 under the (hbar K/2) n(n-1) convention.
KerrPrediction predict_self_kerr(MonomialCoefficient c_aaaa, double phi_zpf,
                                 const EnergyScale& e4);

// Ordered-index tensor element -> monomial coefficient: the AABB monomial
// carries multiplicity 4!/(2!2!) = 6 in the symmetric tensor sum.
MonomialCoefficient monomial_from_ordered(MonomialCoefficient c_bar);

enum class UncertaintyModel { linear_sum, quadrature };

// First-order linear sum, exact at first order. Quadrature is a non-default
// alternative for sensitivity studies.
double propagate_uncertainty(double rel_e4, double rel_eta,
                             UncertaintyModel model = UncertaintyModel::linear_sum);

// eta = |chi_meas| / (E4/h). Ill-posed for E4 = 0.
ProjectionFactor invert_eta(double chi_meas_hz, const EnergyScale& e4);

// 100 * |pred - meas| / |meas|.
double percent_deviation(double pred_hz, double meas_hz);

Regime classify_regime(const RegimeInputs& in);

} // namespace qkerr
