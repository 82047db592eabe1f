#include "qkerr/enz.hpp"

#include <cmath>
#include <string>

#include "qkerr/constants.hpp"
#include "qkerr/errors.hpp"

namespace qkerr {

std::complex<double> drude_permittivity(const DrudeParams& p, double omega_rad_s) {
    if (!(p.omega_p_rad_s > 0.0))
        throw DomainError("drude_permittivity: omega_p must be > 0");
    if (!(p.gamma_rad_s >= 0.0))
        throw DomainError("drude_permittivity: gamma must be >= 0");
    if (!(omega_rad_s > 0.0))
        throw DomainError("drude_permittivity: omega must be > 0");
    const double wp2 = p.omega_p_rad_s * p.omega_p_rad_s;
    const std::complex<double> denom(omega_rad_s * omega_rad_s,
                                     p.gamma_rad_s * omega_rad_s);
    return std::complex<double>(p.eps_inf, 0.0) - wp2 / denom;
}

double find_enz_frequency(const DrudeParams& p) {
    if (!(p.eps_inf > 0.0))
        throw NoEnzPoint("find_enz_frequency: Re eps has no zero for eps_inf <= 0");
    if (!(p.omega_p_rad_s > 0.0))
        throw DomainError("find_enz_frequency: omega_p must be > 0");

    const auto re_eps = [&p](double w) { return drude_permittivity(p, w).real(); };

    // Re eps = eps_inf - omega_p^2/(omega^2 + gamma^2): monotone increasing
    // in omega, -> eps_inf > 0 at large omega. Bracket from a small start.
    double lo = 1e-9 * p.omega_p_rad_s;
    double hi = 10.0 * p.omega_p_rad_s;
    if (!(re_eps(lo) < 0.0))
        throw NoEnzPoint("find_enz_frequency: Re eps >= 0 over the whole interval "
                         "(gamma too large for an ENZ crossing)");
    if (!(re_eps(hi) > 0.0))
        throw NoEnzPoint("find_enz_frequency: Re eps < 0 up to 10 omega_p");

    // Tighter than the 1e-10 relative contract so that |eps| at the returned
    // point stays below 1e-9 even for steep lossless crossings.
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (re_eps(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

EnergyScale e4_enz(const EnzSpec& spec, double omega_rad_s) {
    if (!(spec.chi3_eff >= 0.0))
        throw DomainError("e4_enz: chi3_eff must be >= 0");
    if (!(spec.v_eff_m3 > 0.0))
        throw DomainError("e4_enz: V_eff must be > 0");
    const std::complex<double> eps = drude_permittivity(spec.drude, omega_rad_s);
    const double abs_eps = std::abs(eps);
    if (abs_eps < kEnzEpsGuard)
        throw SingularityError("e4_enz: |eps(omega)| = " + std::to_string(abs_eps) +
                               " is below the 1e-12 guard; use gamma > 0 or offset omega");
    using namespace constants;
    const double e4_joule = 3.0 * kHbar * omega_rad_s * omega_rad_s * std::abs(spec.chi3_eff) /
                            (4.0 * kEps0 * kEps0 * abs_eps * abs_eps * spec.v_eff_m3);
    return EnergyScale{e4_joule / kPlanck, 0.0};
}

} // namespace qkerr
