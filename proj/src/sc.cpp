#include "qkerr/sc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qkerr/constants.hpp"

namespace qkerr {

namespace {

using constants::kPi;

void check_snail(const SnailSpec& s) {
    if (s.n_junctions < 2)
        throw DomainError("snail: N must be >= 2, got " + std::to_string(s.n_junctions));
    if (!(s.alpha > 0.0))
        throw DomainError("snail: alpha must be > 0");
    if (!(s.ej.freq_equiv_hz > 0.0))
        throw DomainError("snail: EJ must be > 0");
}

double reduce_flux(double flux) { return flux - std::floor(flux); }

// k-th derivative of V/h at phi. The array arm contributes
// -N EJ cos(u)/N^k with u = (phi - 2 pi f)/N, the shunt -alpha EJ cos(phi),
// each advanced by k quarter periods.
double snail_derivative(double phi, const SnailSpec& s, int order) {
    const double ej = s.ej.freq_equiv_hz;
    const double nn = static_cast<double>(s.n_junctions);
    const double u = (phi - 2.0 * kPi * reduce_flux(s.flux)) / nn;
    switch (order) {
        case 0: return -nn * ej * std::cos(u) - s.alpha * ej * std::cos(phi);
        case 1: return ej * std::sin(u) + s.alpha * ej * std::sin(phi);
        case 2: return (ej / nn) * std::cos(u) + s.alpha * ej * std::cos(phi);
        case 3: return -(ej / (nn * nn)) * std::sin(u) - s.alpha * ej * std::sin(phi);
        case 4: return -(ej / (nn * nn * nn)) * std::cos(u) - s.alpha * ej * std::cos(phi);
        default: throw DomainError("snail_derivative: order out of range");
    }
}

// Walk downhill from the seed until V' changes sign, then bisect the
// bracket to |V'| < grad_tol. Returns false when no minimum is bracketed
// within 1.5 periods.
bool descend_to_minimum(double seed, const SnailSpec& s, double grad_tol, double& out) {
    const double period = 2.0 * kPi * s.n_junctions;
    double a = seed;
    double ga = snail_derivative(a, s, 1);
    if (std::abs(ga) < grad_tol) {
        if (snail_derivative(a, s, 2) > 0.0) {
            out = a;
            return true;
        }
        a += period / 64.0; // stationary maximum: step off it
        ga = snail_derivative(a, s, 1);
    }
    const double dir = ga > 0.0 ? -1.0 : 1.0;
    double step = period / 64.0;
    double b = a, gb = ga;
    bool bracketed = false;
    for (double travelled = 0.0; travelled < 1.5 * period;) {
        b = a + dir * step;
        gb = snail_derivative(b, s, 1);
        if ((ga < 0.0) != (gb < 0.0)) {
            bracketed = true;
            break;
        }
        a = b;
        ga = gb;
        travelled += step;
        step *= 1.5;
    }
    if (!bracketed) return false;

    double phi = 0.5 * (a + b);
    bool converged = false;
    for (int it = 0; it < 200; ++it) {
        const double gm = snail_derivative(phi, s, 1);
        if (std::abs(gm) < grad_tol) {
            converged = true;
            break;
        }
        if ((ga < 0.0) != (gm < 0.0)) {
            b = phi;
            gb = gm;
        } else {
            a = phi;
            ga = gm;
        }
        phi = 0.5 * (a + b);
    }
    (void)gb;
    if (!converged) return false;

    // Newton polish inside the bracket pushes |V'| from the bisection
    // tolerance to machine level, so symmetry-protected zeros (e.g. c3 at
    // integer flux) come out clean.
    for (int it = 0; it < 8; ++it) {
        const double g = snail_derivative(phi, s, 1);
        if (g == 0.0) break;
        const double h = snail_derivative(phi, s, 2);
        if (!(h > 0.0)) break;
        const double next = phi - g / h;
        if (!(next > std::min(a, b)) || !(next < std::max(a, b))) break;
        if (std::abs(snail_derivative(next, s, 1)) >= std::abs(g)) break;
        phi = next;
    }
    out = phi;
    return snail_derivative(phi, s, 2) > 0.0;
}

} // namespace

double phi_zpf(const JunctionParams& j) {
    if (!(j.ej.freq_equiv_hz > 0.0) || !(j.ec.freq_equiv_hz > 0.0))
        throw DomainError("phi_zpf: EJ and EC must be > 0");
    return std::pow(2.0 * j.ec.freq_equiv_hz / j.ej.freq_equiv_hz, 0.25);
}

ProjectionFactor eta_junction(double p_a, double p_b, double phi) {
    if (!(p_a >= 0.0 && p_a <= 1.0) || !(p_b >= 0.0 && p_b <= 1.0))
        throw DomainError("eta_junction: participation ratios must lie in [0, 1]");
    if (!(phi >= 0.0))
        throw DomainError("eta_junction: phi must be >= 0");
    ProjectionFactor eta = eta_quarton(p_a * phi, p_b * phi);
    eta.kernel = EtaKernel::junction;
    return eta;
}

ProjectionFactor eta_quarton(double phi_a, double phi_b) {
    if (!(phi_a >= 0.0) || !(phi_b >= 0.0))
        throw DomainError("eta_quarton: projected amplitudes must be >= 0");
    ProjectionFactor eta;
    eta.value = (phi_a * phi_a) * (phi_b * phi_b);
    eta.kernel = EtaKernel::quarton;
    return eta;
}

ProjectionFactor eta_squid(const JunctionParams& coupler) {
    if (!(coupler.ej.freq_equiv_hz > 0.0))
        throw DomainError("eta_squid: EJ must be > 0");
    ProjectionFactor eta;
    eta.value = coupler.ec.freq_equiv_hz / (8.0 * coupler.ej.freq_equiv_hz);
    eta.kernel = EtaKernel::squid;
    return eta;
}

ProjectionFactor eta_fluxonium(double p, double phi) {
    if (!(p >= 0.0 && p <= 1.0))
        throw DomainError("eta_fluxonium: participation must lie in [0, 1]");
    if (!(phi >= 0.0))
        throw DomainError("eta_fluxonium: phi must be >= 0");
    ProjectionFactor eta;
    eta.value = (p * p) * (phi * phi) * (phi * phi);
    eta.kernel = EtaKernel::fluxonium;
    return eta;
}

double snail_potential(double phi_rad, const SnailSpec& spec) {
    check_snail(spec);
    return snail_derivative(phi_rad, spec, 0);
}

SnailExpansion snail_expansion(const SnailSpec& spec) {
    check_snail(spec);
    const double ej = spec.ej.freq_equiv_hz;
    const double grad_tol = 1e-10 * ej;
    const double half_period = kPi * spec.n_junctions;

    // The potential can be multi-welled at large flux: descend from 8
    // equally spaced seeds across one full period and keep the deepest
    // bracketed minimum.
    constexpr int kSeeds = 8;
    double best_phi = 0.0;
    double best_v = 0.0;
    bool have = false;
    for (int i = 0; i < kSeeds; ++i) {
        const double seed = -half_period + (2.0 * half_period * i) / kSeeds;
        double phi = 0.0;
        if (!descend_to_minimum(seed, spec, grad_tol, phi)) continue;
        const double v = snail_derivative(phi, spec, 0);
        if (!have || v < best_v) {
            best_phi = phi;
            best_v = v;
            have = true;
        }
    }
    if (!have)
        throw NumericalError("snail_expansion: no bracketed minimum on one period "
                             "(N = " + std::to_string(spec.n_junctions) +
                             ", alpha = " + std::to_string(spec.alpha) + ")");

    // Report the representative inside (-pi N, pi N]; the walk may have
    // drifted into a neighboring period.
    const double period = 2.0 * half_period;
    best_phi -= period * std::round(best_phi / period);

    SnailExpansion ex;
    ex.phi_min_rad = best_phi;
    ex.c2_hz = snail_derivative(best_phi, spec, 2);
    ex.c3_hz = snail_derivative(best_phi, spec, 3);
    ex.c4_hz = snail_derivative(best_phi, spec, 4);
    return ex;
}

double find_kerr_free_flux(int n_junctions, double alpha, const EnergyScale& ej) {
    SnailSpec s;
    s.n_junctions = n_junctions;
    s.alpha = alpha;
    s.ej = ej;

    const auto c4_at = [&s](double flux) {
        SnailSpec t = s;
        t.flux = flux;
        return snail_expansion(t).c4_hz;
    };

    // Bracket the sign change on a coarse grid, endpoints included.
    constexpr int kScan = 64;
    double lo = 0.0;
    double f_lo = c4_at(lo);
    double hi = 0.0;
    double f_hi = 0.0;
    bool bracketed = false;
    for (int i = 1; i <= kScan; ++i) {
        const double x = 0.5 * i / kScan;
        const double fx = c4_at(x);
        if (fx == 0.0) return x;
        if ((f_lo < 0.0) != (fx < 0.0)) {
            hi = x;
            f_hi = fx;
            bracketed = true;
            break;
        }
        lo = x;
        f_lo = fx;
    }
    if (!bracketed)
        throw NoKerrFreePoint("find_kerr_free_flux: c4(flux) keeps one sign on (0, 0.5) "
                              "for N = " + std::to_string(n_junctions) +
                              ", alpha = " + std::to_string(alpha));

    const double tol = 1e-9 * ej.freq_equiv_hz;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = c4_at(mid);
        if (std::abs(f_mid) < tol) return mid;
        if ((f_lo < 0.0) != (f_mid < 0.0)) {
            hi = mid;
            f_hi = f_mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    (void)f_hi;
    throw NumericalError("find_kerr_free_flux: bisection failed to reach |c4| < 1e-9 EJ");
}

double sc_eta_uncertainty(double rel_ec, double rel_ej) {
    if (!(rel_ec >= 0.0) || !(rel_ej >= 0.0))
        throw DomainError("sc_eta_uncertainty: relative uncertainties must be >= 0");
    return 0.5 * rel_ec + 0.5 * rel_ej;
}

} // namespace qkerr
