#include "qkerr/photonic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qkerr/constants.hpp"
#include "qkerr/errors.hpp"

namespace qkerr {

namespace {

void check_geometry(const FieldGrid& g, const std::string& who) {
    if (g.nx < 1 || g.ny < 1 || g.nz < 1)
        throw DomainError(who + ": grid dimensions must be >= 1");
    if (!(g.dx > 0.0) || !(g.dy > 0.0) || !(g.dz > 0.0))
        throw DomainError(who + ": grid spacings must be > 0");
    const auto expected = static_cast<std::size_t>(g.nx) * g.ny * g.nz;
    if (g.amplitude.size() != expected)
        throw DomainError(who + ": amplitude array has " +
                          std::to_string(g.amplitude.size()) + " values, expected " +
                          std::to_string(expected));
}

// Skips comment/blank lines, tracking the current line number.
bool next_data_line(std::istream& in, std::string& line, int& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
    }
    return false;
}

} // namespace

bool FieldGrid::same_geometry(const FieldGrid& other) const {
    return nx == other.nx && ny == other.ny && nz == other.nz &&
           dx == other.dx && dy == other.dy && dz == other.dz;
}

FieldGrid read_field_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open field grid file");
    return read_field_grid(in, path);
}

FieldGrid read_field_grid(std::istream& in, const std::string& name) {
    FieldGrid g;
    std::string line;
    int lineno = 0;

    if (!next_data_line(in, line, lineno))
        throw ParseError(name, lineno, "missing header line 'nx ny nz'");
    {
        std::istringstream ss(line);
        if (!(ss >> g.nx >> g.ny >> g.nz))
            throw ParseError(name, lineno, "expected three integers 'nx ny nz'");
        if (g.nx < 1 || g.ny < 1 || g.nz < 1)
            throw ParseError(name, lineno, "grid dimensions must be >= 1");
    }
    if (!next_data_line(in, line, lineno))
        throw ParseError(name, lineno, "missing spacing line 'dx dy dz'");
    {
        std::istringstream ss(line);
        if (!(ss >> g.dx >> g.dy >> g.dz))
            throw ParseError(name, lineno, "expected three reals 'dx dy dz'");
        if (!(g.dx > 0.0 && g.dy > 0.0 && g.dz > 0.0))
            throw ParseError(name, lineno, "grid spacings must be > 0");
    }

    const auto total = static_cast<std::size_t>(g.nx) * g.ny * g.nz;
    g.amplitude.reserve(total);
    while (g.amplitude.size() < total && next_data_line(in, line, lineno)) {
        std::istringstream ss(line);
        double v;
        while (ss >> v) {
            if (g.amplitude.size() == total)
                throw ParseError(name, lineno, "more amplitude values than nx*ny*nz");
            if (!std::isfinite(v))
                throw ParseError(name, lineno, "non-finite amplitude value");
            g.amplitude.push_back(std::abs(v)); // magnitudes only
        }
        std::string rest;
        if (ss.clear(), ss >> rest)
            throw ParseError(name, lineno, "unparsable token '" + rest + "'");
    }
    if (g.amplitude.size() != total)
        throw ParseError(name, lineno, "expected " + std::to_string(total) +
                         " amplitude values, got " + std::to_string(g.amplitude.size()));
    return g;
}

double pairwise_sum(const double* data, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = data[0];
        for (std::size_t i = 1; i < n; ++i) s += data[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double grid_norm_sq(const FieldGrid& g) {
    check_geometry(g, "grid_norm_sq");
    std::vector<double> sq(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) sq[i] = g.amplitude[i] * g.amplitude[i];
    return pairwise_sum(sq.data(), sq.size()) * g.cell_volume();
}

FieldGrid normalize_grid(const FieldGrid& g) {
    const double norm = grid_norm_sq(g);
    if (!(norm > 0.0))
        throw DomainError("normalize_grid: field is identically zero");
    const double scale = 1.0 / std::sqrt(norm);
    FieldGrid out = g;
    for (double& v : out.amplitude) v *= scale;
    return out;
}

double overlap_integral(const FieldGrid& a, const FieldGrid& b) {
    check_geometry(a, "overlap_integral");
    check_geometry(b, "overlap_integral");
    if (!a.same_geometry(b))
        throw ShapeError("overlap_integral: grid geometries differ");
    std::vector<double> prod(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double fa = a.amplitude[i];
        const double fb = b.amplitude[i];
        prod[i] = (fa * fa) * (fb * fb);
    }
    return pairwise_sum(prod.data(), prod.size()) * a.cell_volume();
}

double mode_volume(const FieldGrid& g) {
    check_geometry(g, "mode_volume");
    const double norm = grid_norm_sq(g);
    if (!(norm > 0.0))
        throw DomainError("mode_volume: field is identically zero");
    if (std::abs(norm - 1.0) > 1e-6)
        throw DomainError("mode_volume: grid is not normalized (|f|^2 integral = " +
                          std::to_string(norm) + ")");
    const double peak = *std::max_element(g.amplitude.begin(), g.amplitude.end());
    return 1.0 / (peak * peak);
}

ProjectionFactor eta_photonic(const PhotonicSpec& spec, double overlap_m3) {
    if (!(spec.wavelength_m > 0.0) || !(spec.v_eff_m3 > 0.0) || !(spec.gamma0 > 0.0))
        throw DomainError("eta_photonic: wavelength, V_eff and Gamma0 must be > 0");
    if (!(overlap_m3 >= 0.0))
        throw DomainError("eta_photonic: overlap must be >= 0");
    const double lam3 = spec.wavelength_m * spec.wavelength_m * spec.wavelength_m;
    ProjectionFactor eta;
    eta.value = (lam3 / spec.v_eff_m3) * (overlap_m3 / spec.gamma0);
    eta.kernel = EtaKernel::photonic;
    return eta;
}

EnergyScale e4_photonic(const PhotonicSpec& spec, double omega_rad_s) {
    if (!(spec.n0 > 0.0) || !(spec.v_eff_m3 > 0.0))
        throw DomainError("e4_photonic: n0 and V_eff must be > 0");
    if (!(spec.chi3 >= 0.0))
        throw DomainError("e4_photonic: chi3 must be >= 0");
    if (!(omega_rad_s > 0.0))
        throw DomainError("e4_photonic: omega must be > 0");
    using namespace constants;
    const double n0sq = spec.n0 * spec.n0;
    const double e4_joule = 3.0 * kHbar * omega_rad_s * omega_rad_s * spec.chi3 /
                            (4.0 * kEps0 * kEps0 * n0sq * n0sq * spec.v_eff_m3);
    return EnergyScale{e4_joule / kPlanck, 0.0};
}

double chi3_from_n2(double n2, double n0) {
    if (!(n0 > 0.0))
        throw DomainError("chi3_from_n2: n0 must be > 0");
    return 4.0 * n0 * n0 * constants::kEps0 * constants::kSpeedOfLight * n2 / 3.0;
}

} // namespace qkerr
