#include "qkerr/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qkerr/errors.hpp"

namespace qkerr {

namespace {

long total_dimension(const FockSystem& sys) {
    long total = 1;
    for (std::size_t m = 0; m < sys.modes.size(); ++m) {
        total *= sys.dim;
        if (total > kMaxTotalDimension) return total;
    }
    return total;
}

void check_system(const FockSystem& sys) {
    if (sys.modes.empty())
        throw DomainError("fock: at least one mode is required");
    if (sys.dim < 4)
        throw DomainError("fock: per-mode truncation must be >= 4");
    for (const auto& m : sys.modes) {
        if (!(m.omega_hz > 0.0))
            throw DomainError("fock: mode frequencies must be > 0");
        if (!(m.phi_zpf >= 0.0))
            throw DomainError("fock: phi_zpf must be >= 0");
    }
    for (std::size_t i = 0; i < sys.modes.size(); ++i)
        for (std::size_t j = i + 1; j < sys.modes.size(); ++j)
            if (sys.modes[i].omega_hz == sys.modes[j].omega_hz)
                throw DomainError("fock: mode frequencies must be pairwise distinct");
    for (const auto& t : sys.quartic) {
        if (t.exponents.size() != sys.modes.size())
            throw DomainError("fock: term exponent count must match mode count");
        for (int k : t.exponents)
            if (k < 0)
                throw DomainError("fock: monomial exponents must be >= 0");
    }
    if (total_dimension(sys) > kMaxTotalDimension)
        throw DomainError("fock: total dimension exceeds the " +
                          std::to_string(kMaxTotalDimension) + " guard");
}

// Exact symmetrization: 0.5*(a_ij + a_ji) is bitwise symmetric.
void symmetrize(Eigen::MatrixXd& m) {
    m = 0.5 * (m + m.transpose()).eval();
}

// phi * (a + a^dag) truncated to dim levels.
Eigen::MatrixXd position_operator(double phi, int dim) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) {
        const double v = phi * std::sqrt(static_cast<double>(n + 1));
        x(n, n + 1) = v;
        x(n + 1, n) = v;
    }
    return x;
}

Eigen::MatrixXd matrix_power(const Eigen::MatrixXd& x, int k) {
    const int dim = static_cast<int>(x.rows());
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(dim, dim);
    for (int i = 0; i < k; ++i) {
        p = (p * x).eval();
        symmetrize(p); // powers of a symmetric matrix are symmetric
    }
    return p;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Basis index of a product label, first mode slowest.
long label_index(const FockLabel& label, int dim) {
    long idx = 0;
    for (int n : label) idx = idx * dim + n;
    return idx;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

} // namespace

std::string label_to_string(const FockLabel& label) {
    std::string s = "(";
    for (std::size_t i = 0; i < label.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(label[i]);
    }
    return s + ")";
}

double LabeledSpectrum::energy(const FockLabel& label) const {
    auto it = energies_hz.find(label);
    if (it == energies_hz.end())
        throw DomainError("spectrum: missing label " + label_to_string(label));
    return it->second;
}

Eigen::MatrixXd build_hamiltonian(const FockSystem& sys) {
    check_system(sys);
    const int dim = sys.dim;
    const auto n_modes = sys.modes.size();
    const long total = total_dimension(sys);

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(total, total);

    // Harmonic part: sum_mu omega_mu n_mu, diagonal in the product basis.
    for (long idx = 0; idx < total; ++idx) {
        long rest = idx;
        double e = 0.0;
        for (std::size_t m = n_modes; m-- > 0;) {
            e += sys.modes[m].omega_hz * static_cast<double>(rest % dim);
            rest /= dim;
        }
        h(idx, idx) = e;
    }

    for (const auto& term : sys.quartic) {
        if (term.c == 0.0 || term.e4.freq_equiv_hz == 0.0) continue;
        double prefactor = term.e4.freq_equiv_hz * term.c;
        Eigen::MatrixXd op = Eigen::MatrixXd::Identity(1, 1);
        for (std::size_t m = 0; m < n_modes; ++m) {
            const int k = term.exponents[m];
            prefactor /= factorial(k);
            if (k == 0) {
                op = kron(op, Eigen::MatrixXd::Identity(dim, dim));
            } else {
                op = kron(op, matrix_power(position_operator(sys.modes[m].phi_zpf, dim), k));
            }
        }
        h += prefactor * op;
    }
    symmetrize(h);
    return h;
}

LabeledSpectrum diagonalize_and_label(const FockSystem& sys) {
    const Eigen::MatrixXd h = build_hamiltonian(sys);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
    if (solver.info() != Eigen::Success)
        throw NumericalError("diagonalize_and_label: eigendecomposition failed");
    const Eigen::VectorXd& evals = solver.eigenvalues();
    const Eigen::MatrixXd& evecs = solver.eigenvectors();

    const int dim = sys.dim;
    const auto n_modes = sys.modes.size();
    const int n_keep = dim - 3; // labels with any n >= dim-3 are truncation-tainted

    LabeledSpectrum spec;
    FockLabel label(n_modes, 0);
    while (true) {
        const long idx = label_index(label, dim);
        // Greedy max-overlap assignment; ties resolve to the lower eigenvalue
        // index via strict comparison.
        int best_k = 0;
        double best_fid = -1.0;
        for (Eigen::Index k = 0; k < evals.size(); ++k) {
            const double amp = evecs(idx, k);
            const double fid = amp * amp;
            if (fid > best_fid) {
                best_fid = fid;
                best_k = static_cast<int>(k);
            }
        }
        if (!(best_fid > 0.5))
            throw StrongMixing(label_to_string(label), best_fid);
        spec.energies_hz[label] = evals(best_k);
        spec.overlaps[label] = best_fid;

        // Advance the product label through {0..n_keep-1}^n_modes.
        std::size_t pos = n_modes;
        while (pos-- > 0) {
            if (++label[pos] < n_keep) break;
            label[pos] = 0;
            if (pos == 0) return spec;
        }
    }
}

double extract_cross_kerr(const LabeledSpectrum& spec) {
    return spec.energy({1, 1}) - spec.energy({1, 0}) - spec.energy({0, 1}) +
           spec.energy({0, 0});
}

double extract_self_kerr(const LabeledSpectrum& spec) {
    return spec.energy({2}) - 2.0 * spec.energy({1}) + spec.energy({0});
}

double lambda_star(const FockSystem& sys) {
    check_system(sys);
    double omega_min = std::numeric_limits<double>::infinity();
    for (const auto& m : sys.modes) omega_min = std::min(omega_min, m.omega_hz);
    double lam = 0.0;
    for (const auto& t : sys.quartic) {
        double phi_pow = 1.0;
        for (std::size_t m = 0; m < sys.modes.size(); ++m)
            phi_pow *= std::pow(sys.modes[m].phi_zpf, t.exponents[m]);
        lam = std::max(lam, t.e4.freq_equiv_hz * phi_pow / omega_min);
    }
    return lam;
}

RwaReport verify_rwa_reduction(const FockSystem& sys) {
    check_system(sys);
    if (sys.modes.size() != 2)
        throw DomainError("verify_rwa_reduction: a two-mode system is required");
    if (sys.quartic.size() != 1 || sys.quartic[0].exponents != std::vector<int>{2, 2})
        throw DomainError("verify_rwa_reduction: a single AABB quartic term is required");

    const auto& term = sys.quartic[0];
    const double phi_a = sys.modes[0].phi_zpf;
    const double phi_b = sys.modes[1].phi_zpf;
    RwaReport r;
    r.chi_analytic_hz =
        term.c * (phi_a * phi_a) * (phi_b * phi_b) * term.e4.freq_equiv_hz;
    if (r.chi_analytic_hz == 0.0) {
        // Degenerate comparison: both sides vanish identically.
        r.chi_full_hz = 0.0;
        r.rel_dev = 0.0;
        return r;
    }
    r.chi_full_hz = extract_cross_kerr(diagonalize_and_label(sys));
    r.rel_dev = std::abs(r.chi_full_hz - r.chi_analytic_hz) / std::abs(r.chi_analytic_hz);
    return r;
}

ConvergedKerr cross_kerr_converged(const FockSystem& sys, double rel_tol) {
    FockSystem work = sys;
    ConvergedKerr out;
    double prev = std::numeric_limits<double>::quiet_NaN();
    while (total_dimension(work) <= kMaxTotalDimension) {
        const double chi = extract_cross_kerr(diagonalize_and_label(work));
        out.chi_hz = chi;
        out.dim = work.dim;
        if (std::isfinite(prev)) {
            const double scale = std::max(std::abs(chi), std::abs(prev));
            if (scale == 0.0 || std::abs(chi - prev) <= rel_tol * scale) {
                out.converged = true;
                return out;
            }
        }
        prev = chi;
        work.dim += 2;
    }
    return out; // guard tripped before convergence
}

} // namespace qkerr
