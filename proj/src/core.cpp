#include "qkerr/core.hpp"

#include <cmath>

namespace qkerr {

EnergyScale EnergyScale::from_hz(double hz, double rel_unc) {
    if (!(hz >= 0.0))
        throw DomainError("EnergyScale: freq_equiv must be >= 0, got " + std::to_string(hz));
    if (!(rel_unc >= 0.0))
        throw DomainError("EnergyScale: rel_unc must be >= 0, got " + std::to_string(rel_unc));
    return EnergyScale{hz, rel_unc};
}

const char* to_string(EtaKernel k) {
    switch (k) {
        case EtaKernel::junction: return "junction";
        case EtaKernel::quarton: return "quarton";
        case EtaKernel::squid: return "squid";
        case EtaKernel::fluxonium: return "fluxonium";
        case EtaKernel::snail: return "snail";
        case EtaKernel::photonic: return "photonic";
        case EtaKernel::paper_kernel: return "paper-kernel";
        case EtaKernel::inverted: return "inverted";
    }
    return "?";
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::weak: return "weak";
        case Regime::intermediate: return "intermediate";
        case Regime::strong: return "strong";
        case Regime::unknown: return "unknown";
    }
    return "?";
}

KerrPrediction predict_cross_kerr(const ProjectionFactor& eta, const EnergyScale& e4) {
    if (!(eta.value >= 0.0))
        throw DomainError("predict_cross_kerr: eta must be >= 0");
    if (!(e4.freq_equiv_hz >= 0.0))
        throw DomainError("predict_cross_kerr: E4 must be >= 0");
    KerrPrediction p;
    p.chi_over_2pi_hz = eta.value * e4.freq_equiv_hz;
    p.abs_unc_hz = std::abs(p.chi_over_2pi_hz) * propagate_uncertainty(e4.rel_unc, eta.rel_unc);
    p.regime = Regime::unknown;
    return p;
}

KerrPrediction predict_self_kerr(MonomialCoefficient c_aaaa, double phi_zpf,
                                 const EnergyScale& e4) {
    if (!(phi_zpf >= 0.0))
        throw DomainError("predict_self_kerr: phi_zpf must be >= 0");
    const double phi2 = phi_zpf * phi_zpf;
    const double phi4 = phi2 * phi2;
    KerrPrediction p;
    p.chi_over_2pi_hz = 0.5 * c_aaaa.c * (phi4 * e4.freq_equiv_hz);
    p.abs_unc_hz = std::abs(p.chi_over_2pi_hz) * e4.rel_unc;
    p.regime = Regime::unknown;
    return p;
}

MonomialCoefficient monomial_from_ordered(MonomialCoefficient c_bar) {
    return MonomialCoefficient{c_bar.c / 6.0};
}

double propagate_uncertainty(double rel_e4, double rel_eta, UncertaintyModel model) {
    if (!(rel_e4 >= 0.0) || !(rel_eta >= 0.0))
        throw DomainError("propagate_uncertainty: relative uncertainties must be >= 0");
    if (model == UncertaintyModel::quadrature)
        return std::sqrt(rel_e4 * rel_e4 + rel_eta * rel_eta);
    return rel_e4 + rel_eta;
}

ProjectionFactor invert_eta(double chi_meas_hz, const EnergyScale& e4) {
    if (!(e4.freq_equiv_hz > 0.0))
        throw DomainError("invert_eta: inversion is ill-posed for E4 = 0");
    ProjectionFactor eta;
    eta.value = std::abs(chi_meas_hz) / e4.freq_equiv_hz;
    eta.rel_unc = e4.rel_unc;
    eta.kernel = EtaKernel::inverted;
    return eta;
}

double percent_deviation(double pred_hz, double meas_hz) {
    if (meas_hz == 0.0)
        throw DomainError("percent_deviation: measured value must be nonzero");
    return 100.0 * std::abs(pred_hz - meas_hz) / std::abs(meas_hz);
}

Regime classify_regime(const RegimeInputs& in) {
    if (!(in.omega_hz > 0.0))
        throw DomainError("classify_regime: omega must be > 0");
    if (in.kappa_hz && !(*in.kappa_hz > 0.0))
        throw DomainError("classify_regime: kappa must be > 0 when present");
    if (in.mode_spacing_hz && !(*in.mode_spacing_hz > 0.0))
        throw DomainError("classify_regime: mode spacing must be > 0 when present");

    const double chi = std::abs(in.chi_hz);
    if (chi / in.omega_hz >= kRegimeFreqRatio)
        return Regime::strong;

    // Weak needs a linewidth to compare against; the spacing bound applies
    // only when a spacing is known. Missing fields degrade to intermediate.
    if (in.kappa_hz && chi < *in.kappa_hz) {
        if (!in.mode_spacing_hz || chi < kRegimeSpacingRatio * *in.mode_spacing_hz)
            return Regime::weak;
    }
    return Regime::intermediate;
}

} // namespace qkerr
