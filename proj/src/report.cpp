#include "qkerr/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "qkerr/constants.hpp"
#include "qkerr/enz.hpp"
#include "qkerr/errors.hpp"
#include "qkerr/fock.hpp"
#include "qkerr/photonic.hpp"

namespace qkerr {

namespace {

namespace fs = std::filesystem;

void echo_inputs(const DeviceFile& dev, PredictionReport& rep) {
    for (const auto& [key, dv] : dev.params)
        rep.inputs.push_back({key, dv.value, "", dv.prov});
}

void add_step(PredictionReport& rep, const std::string& name, double value,
              const std::string& unit, Provenance prov = Provenance::computed) {
    rep.steps.push_back({name, value, unit, prov});
}

// Linewidth/spacing-aware regime label; unknown when no mode frequency is given.
void classify(PredictionReport& rep, std::optional<double> omega_hz,
              std::optional<double> spacing_hz, std::optional<double> kappa_hz) {
    if (!omega_hz) {
        rep.prediction.regime = Regime::unknown;
        return;
    }
    RegimeInputs in;
    in.chi_hz = rep.prediction.chi_over_2pi_hz;
    in.omega_hz = *omega_hz;
    in.kappa_hz = kappa_hz;
    in.mode_spacing_hz = spacing_hz;
    rep.prediction.regime = classify_regime(in);
}

void attach_measurement(const DeviceFile& dev, PredictionReport& rep) {
    if (auto meas = dev.maybe("measured_chi")) {
        rep.measured_chi_hz = *meas;
        rep.measured_chi_unc_hz = dev.maybe("measured_chi_unc");
        rep.prediction.deviation_pct =
            percent_deviation(rep.prediction.chi_over_2pi_hz, *meas);
    }
}

// Kernel-vs-analytic selection: a stored eta_kernel wins, the analytic value
// is always reported next to it.
void choose_eta(const DeviceFile& dev, PredictionReport& rep,
                std::optional<double> analytic, Provenance analytic_prov) {
    rep.eta_analytic = analytic;
    if (auto stored = dev.maybe("eta_kernel")) {
        rep.eta_used = *stored;
        rep.eta_prov = dev.provenance("eta_kernel");
    } else if (analytic) {
        rep.eta_used = *analytic;
        rep.eta_prov = analytic_prov;
    } else {
        throw DomainError("device '" + dev.path +
                          "': no analytic projection and no stored eta_kernel");
    }
}

double rel_unc_e4(const DeviceFile& dev) {
    if (auto direct = dev.maybe("rel_unc_E4")) return *direct;
    if (auto ej = dev.maybe("rel_unc_EJ")) return *ej; // E4 = EJ on sc platforms
    return 0.0;
}

double rel_unc_eta_sc(const DeviceFile& dev) {
    if (auto direct = dev.maybe("rel_unc_eta")) return *direct;
    const double rel_ec = dev.maybe("rel_unc_EC").value_or(0.0);
    const double rel_ej = dev.maybe("rel_unc_EJ").value_or(0.0);
    return sc_eta_uncertainty(rel_ec, rel_ej);
}

PredictionReport predict_quarton(const DeviceFile& dev) {
    PredictionReport rep;
    JunctionParams j{EnergyScale::from_hz(dev.get("EJ")), EnergyScale::from_hz(dev.get("EC"))};
    const double p_a = dev.get("p_A");
    const double p_b = dev.get("p_B");
    const double omega_a = dev.get("omega_A");
    const double omega_b = dev.get("omega_B");
    if (omega_a == omega_b)
        throw DomainError("quarton: mode frequencies must be non-degenerate");

    const double phi = phi_zpf(j);
    add_step(rep, "phi_zpf", phi, "");
    add_step(rep, "phi_A_zpf", p_a * phi, "");
    add_step(rep, "phi_B_zpf", p_b * phi, "");

    const ProjectionFactor eta_an = eta_junction(p_a, p_b, phi);
    choose_eta(dev, rep, eta_an.value, Provenance::computed);

    rep.e4_used_hz = j.ej.freq_equiv_hz;
    rep.e4_prov = dev.provenance("EJ");

    ProjectionFactor eta_in{rep.eta_used, rel_unc_eta_sc(dev), eta_an.kernel};
    if (dev.has("eta_kernel")) eta_in.kernel = EtaKernel::paper_kernel;
    const EnergyScale e4{rep.e4_used_hz, rel_unc_e4(dev)};
    rep.prediction = predict_cross_kerr(eta_in, e4);

    classify(rep, std::min(omega_a, omega_b), std::abs(omega_a - omega_b),
             dev.maybe("kappa"));
    return rep;
}

PredictionReport predict_squid(const DeviceFile& dev) {
    PredictionReport rep;
    JunctionParams j{EnergyScale::from_hz(dev.get("EJ")), EnergyScale::from_hz(dev.get("EC"))};
    const ProjectionFactor eta_an = eta_squid(j);
    choose_eta(dev, rep, eta_an.value, Provenance::computed);
    rep.e4_used_hz = j.ej.freq_equiv_hz;
    rep.e4_prov = dev.provenance("EJ");

    ProjectionFactor eta_in{rep.eta_used, rel_unc_eta_sc(dev), eta_an.kernel};
    if (dev.has("eta_kernel")) eta_in.kernel = EtaKernel::paper_kernel;
    rep.prediction = predict_cross_kerr(eta_in, EnergyScale{rep.e4_used_hz, rel_unc_e4(dev)});

    std::optional<double> omega, spacing;
    if (auto a = dev.maybe("omega_A")) {
        omega = *a;
        if (auto b = dev.maybe("omega_B")) {
            omega = std::min(*a, *b);
            spacing = std::abs(*a - *b);
        }
    }
    classify(rep, omega, spacing, dev.maybe("kappa"));
    return rep;
}

PredictionReport predict_fluxonium(const DeviceFile& dev) {
    PredictionReport rep;
    const double p = dev.get("p");
    const double phi = dev.get("phi_zpf");
    const ProjectionFactor eta_an = eta_fluxonium(p, phi);
    choose_eta(dev, rep, eta_an.value, Provenance::computed);
    rep.e4_used_hz = dev.get("EJ");
    rep.e4_prov = dev.provenance("EJ");

    ProjectionFactor eta_in{rep.eta_used, dev.maybe("rel_unc_eta").value_or(0.0),
                            eta_an.kernel};
    if (dev.has("eta_kernel")) eta_in.kernel = EtaKernel::paper_kernel;
    rep.prediction = predict_cross_kerr(eta_in, EnergyScale{rep.e4_used_hz, rel_unc_e4(dev)});
    classify(rep, dev.maybe("omega"), std::nullopt, dev.maybe("kappa"));
    return rep;
}

PredictionReport predict_snail(const DeviceFile& dev) {
    PredictionReport rep;
    SnailSpec spec;
    spec.n_junctions = static_cast<int>(dev.get("N"));
    spec.alpha = dev.get("alpha");
    spec.ej = EnergyScale::from_hz(dev.get("EJ"), rel_unc_e4(dev));
    spec.flux = dev.get("flux");

    const SnailExpansion ex = snail_expansion(spec);
    rep.snail = ex;
    add_step(rep, "phi_min", ex.phi_min_rad, "rad");
    add_step(rep, "c2", ex.c2_hz, "Hz");
    add_step(rep, "c3", ex.c3_hz, "Hz");
    add_step(rep, "c4", ex.c4_hz, "Hz");

    // Self-Kerr of the snail mode with the quartic Taylor coefficient as the
    // monomial coefficient (unit zero-point amplitude): K/2pi = c4/2.
    const double c_eff = ex.c4_hz / spec.ej.freq_equiv_hz;
    rep.e4_used_hz = spec.ej.freq_equiv_hz;
    rep.e4_prov = dev.provenance("EJ");
    rep.eta_analytic = std::abs(c_eff) / 2.0;
    rep.eta_used = rep.eta_analytic.value();
    rep.eta_prov = Provenance::computed;

    rep.prediction = predict_self_kerr(MonomialCoefficient{c_eff}, 1.0, spec.ej);
    classify(rep, dev.maybe("omega"), std::nullopt, dev.maybe("kappa"));
    return rep;
}

PredictionReport predict_photonic(const DeviceFile& dev) {
    PredictionReport rep;
    PhotonicSpec spec;
    spec.wavelength_m = dev.get("lambda");
    spec.n0 = dev.get("n0");

    if (auto chi3 = dev.maybe("chi3")) {
        spec.chi3 = *chi3;
    } else {
        spec.chi3 = chi3_from_n2(dev.get("n2"), spec.n0);
        add_step(rep, "chi3_from_n2", spec.chi3, "(m/V)^2");
    }

    // Field grids, when referenced, supply the overlap and (absent an
    // explicit V_eff) the mode volume. Paths are relative to the device file.
    std::optional<double> overlap;
    std::optional<double> grid_veff;
    if (auto it = dev.paths.find("field_grid_A"); it != dev.paths.end()) {
        const fs::path base = fs::path(dev.path).parent_path();
        FieldGrid a = normalize_grid(read_field_grid((base / it->second).string()));
        grid_veff = mode_volume(a);
        if (auto jt = dev.paths.find("field_grid_B"); jt != dev.paths.end()) {
            FieldGrid b = normalize_grid(read_field_grid((base / jt->second).string()));
            overlap = overlap_integral(a, b);
        } else {
            overlap = overlap_integral(a, a);
        }
    }
    spec.v_eff_m3 = dev.has("V_eff") ? dev.get("V_eff")
                                     : grid_veff ? *grid_veff
                                                 : 0.0;
    if (grid_veff) add_step(rep, "grid_mode_volume", *grid_veff, "m^3");

    spec.gamma0 = dev.maybe("Gamma0").value_or(1.0 / spec.v_eff_m3);
    if (!overlap) overlap = dev.maybe("overlap");
    if (!overlap) overlap = 1.0 / spec.v_eff_m3; // uniform-field self-overlap
    add_step(rep, "overlap", *overlap, "m^-3");

    const double omega = 2.0 * constants::kPi * constants::kSpeedOfLight / spec.wavelength_m;
    add_step(rep, "omega", omega, "rad/s");

    const EnergyScale e4_an = e4_photonic(spec, omega);
    rep.e4_used_hz = dev.maybe("E4").value_or(e4_an.freq_equiv_hz);
    rep.e4_prov = dev.has("E4") ? dev.provenance("E4") : Provenance::computed;
    add_step(rep, "E4_analytic", e4_an.freq_equiv_hz, "Hz");

    const ProjectionFactor eta_an = eta_photonic(spec, *overlap);
    choose_eta(dev, rep, eta_an.value, Provenance::computed);

    ProjectionFactor eta_in{rep.eta_used, dev.maybe("rel_unc_eta").value_or(0.0),
                            eta_an.kernel};
    if (dev.has("eta_kernel")) eta_in.kernel = EtaKernel::paper_kernel;
    rep.prediction = predict_cross_kerr(
        eta_in, EnergyScale{rep.e4_used_hz, dev.maybe("rel_unc_E4").value_or(0.0)});

    classify(rep, constants::kSpeedOfLight / spec.wavelength_m, std::nullopt,
             dev.maybe("kappa"));
    return rep;
}

PredictionReport predict_enz(const DeviceFile& dev) {
    PredictionReport rep;

    std::optional<double> e4_analytic;
    if (dev.has("omega_p") && dev.has("chi3_eff") && dev.has("V_eff")) {
        EnzSpec spec;
        spec.drude.omega_p_rad_s = dev.get("omega_p");
        spec.drude.gamma_rad_s = dev.maybe("gamma").value_or(0.0);
        spec.drude.eps_inf = dev.maybe("eps_inf").value_or(1.0);
        spec.chi3_eff = dev.get("chi3_eff");
        spec.v_eff_m3 = dev.get("V_eff");

        double omega;
        if (auto w = dev.maybe("omega")) {
            omega = *w;
        } else {
            if (spec.drude.gamma_rad_s == 0.0)
                throw DomainError("enz device '" + dev.path + "': an explicit 'omega' is "
                                  "required for gamma = 0 (the lossless ENZ point is a pole)");
            omega = find_enz_frequency(spec.drude);
            add_step(rep, "omega_enz", omega, "rad/s");
        }
        const std::complex<double> eps = drude_permittivity(spec.drude, omega);
        rep.enz_eps = eps;
        add_step(rep, "re_eps", eps.real(), "");
        add_step(rep, "im_eps", eps.imag(), "");
        add_step(rep, "abs_eps", std::abs(eps), "");
        e4_analytic = e4_enz(spec, omega).freq_equiv_hz;
        add_step(rep, "E4_analytic", *e4_analytic, "Hz");
    }

    if (auto stored = dev.maybe("E4")) {
        rep.e4_used_hz = *stored;
        rep.e4_prov = dev.provenance("E4");
    } else {
        rep.e4_used_hz = *e4_analytic; // post_validate guarantees one of the two
        rep.e4_prov = Provenance::computed;
    }

    choose_eta(dev, rep, std::nullopt, Provenance::computed); // eta_kernel is required
    ProjectionFactor eta_in{rep.eta_used, dev.maybe("rel_unc_eta").value_or(0.0),
                            EtaKernel::paper_kernel};
    rep.prediction = predict_cross_kerr(
        eta_in, EnergyScale{rep.e4_used_hz, dev.maybe("rel_unc_E4").value_or(0.0)});

    std::optional<double> omega_hz;
    if (auto w = dev.maybe("omega")) omega_hz = *w / (2.0 * constants::kPi);
    classify(rep, omega_hz, std::nullopt, dev.maybe("kappa"));
    return rep;
}

} // namespace

PredictionReport run_prediction(const DeviceFile& dev) {
    PredictionReport rep;
    switch (dev.platform) {
        case Platform::quarton: rep = predict_quarton(dev); break;
        case Platform::squid: rep = predict_squid(dev); break;
        case Platform::fluxonium: rep = predict_fluxonium(dev); break;
        case Platform::snail: rep = predict_snail(dev); break;
        case Platform::photonic: rep = predict_photonic(dev); break;
        case Platform::enz: rep = predict_enz(dev); break;
    }
    rep.platform = dev.platform;
    rep.device_path = dev.path;
    attach_measurement(dev, rep);
    echo_inputs(dev, rep); // every step is recomputable from this echo
    return rep;
}

std::vector<ValidationRow> validate_table(const std::string& device_dir) {
    std::vector<std::string> files;
    if (!fs::is_directory(device_dir))
        throw DomainError("validate: '" + device_dir + "' is not a directory");
    for (const auto& entry : fs::directory_iterator(device_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".dev")
            files.push_back(entry.path().string());
    if (files.empty())
        throw DomainError("validate: no .dev files in '" + device_dir + "'");
    std::sort(files.begin(), files.end());

    std::vector<ValidationRow> rows;
    for (const auto& file : files) {
        const DeviceFile dev = parse_device_file(file); // aborts naming the file
        ValidationRow row;
        row.file = fs::path(file).filename().string();
        row.platform = dev.platform;

        if (dev.platform == Platform::snail) {
            // Qualitative cancellation row: the quartic coefficient must have
            // a root in (0, 0.5) and chi there must collapse relative to zero
            // flux.
            const EnergyScale ej = EnergyScale::from_hz(dev.get("EJ"));
            const double flux_star =
                find_kerr_free_flux(static_cast<int>(dev.get("N")), dev.get("alpha"), ej);

            DeviceFile at_bias = dev;
            at_bias.params["flux"].value = flux_star;
            at_bias.params["flux"].prov = Provenance::computed;
            const PredictionReport rep_bias = run_prediction(at_bias);

            DeviceFile at_zero = dev;
            at_zero.params["flux"].value = 0.0;
            const PredictionReport rep_zero = run_prediction(at_zero);

            row.e4_hz = rep_bias.e4_used_hz;
            row.eta_used = rep_bias.eta_used;
            row.chi_pred_hz = rep_bias.prediction.chi_over_2pi_hz;
            row.qualitative = true;
            const double ratio = std::abs(rep_bias.prediction.chi_over_2pi_hz) /
                                 std::abs(rep_zero.prediction.chi_over_2pi_hz);
            row.pass = ratio < kSnailCancellationRatio;
            row.note = "~0 at flux " + std::to_string(flux_star);
        } else {
            const PredictionReport rep = run_prediction(dev);
            row.e4_hz = rep.e4_used_hz;
            row.eta_used = rep.eta_used;
            row.chi_pred_hz = rep.prediction.chi_over_2pi_hz;
            row.chi_meas_hz = rep.measured_chi_hz;
            row.deviation_pct = rep.prediction.deviation_pct;
            row.reference_deviation_pct = dev.maybe("reference_deviation_pct");
            if (row.deviation_pct && row.reference_deviation_pct) {
                row.pass = std::abs(*row.deviation_pct - *row.reference_deviation_pct) <=
                           kTableTolerancePct;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

SweepResult sweep(const DeviceFile& dev, const std::string& param,
                  double from, double to, int points) {
    const auto keys = sweepable_keys(dev.platform);
    if (std::find(keys.begin(), keys.end(), param) == keys.end()) {
        std::string list;
        for (const auto& k : keys) list += (list.empty() ? "" : ", ") + k;
        throw DomainError("sweep: '" + param + "' is not sweepable for platform " +
                          std::string(to_string(dev.platform)) + " (sweepable: " + list + ")");
    }
    if (points < 1)
        throw DomainError("sweep: points must be >= 1");

    SweepResult result;
    result.param = param;
    const int n = (from == to) ? 1 : points;
    for (int i = 0; i < n; ++i) {
        const double x = (n == 1) ? from : from + (to - from) * i / (n - 1);
        DeviceFile varied = dev;
        varied.params[param] = DeviceValue{x, Provenance::computed, 0};
        SweepPoint pt;
        pt.param_value = x;
        pt.report = run_prediction(varied);
        result.points.push_back(std::move(pt));
    }
    return result;
}

OracleCheckReport oracle_check(const DeviceFile& dev, double lambda, int dim) {
    if (!(lambda >= 0.0))
        throw DomainError("oracle_check: lambda must be >= 0");

    FockSystem sys;
    sys.dim = dim;
    double chi_analytic = 0.0;
    bool self_kerr = false;

    switch (dev.platform) {
        case Platform::quarton: {
            JunctionParams j{EnergyScale::from_hz(dev.get("EJ")),
                             EnergyScale::from_hz(dev.get("EC"))};
            const double phi = phi_zpf(j);
            const double phi_a = dev.get("p_A") * phi;
            const double phi_b = dev.get("p_B") * phi;
            if (!(phi_a > 0.0) || !(phi_b > 0.0))
                throw DomainError("oracle_check: zero projected amplitude");
            const double omega_a = dev.get("omega_A");
            const double omega_b = dev.get("omega_B");
            const double e4 = lambda * std::min(omega_a, omega_b) /
                              ((phi_a * phi_a) * (phi_b * phi_b));
            sys.modes = {{omega_a, phi_a}, {omega_b, phi_b}};
            sys.quartic = {{{2, 2}, 1.0, EnergyScale::from_hz(e4)}};
            chi_analytic = (phi_a * phi_a) * (phi_b * phi_b) * e4;
            break;
        }
        case Platform::squid: {
            const auto omega_a = dev.maybe("omega_A");
            const auto omega_b = dev.maybe("omega_B");
            if (!omega_a || !omega_b)
                throw DomainError("oracle_check: squid reduction needs omega_A and omega_B");
            JunctionParams j{EnergyScale::from_hz(dev.get("EJ")),
                             EnergyScale::from_hz(dev.get("EC"))};
            // Effective two-mode quartic reproducing eta = EC/(8 EJ).
            const double phi = std::pow(eta_squid(j).value, 0.25);
            const double e4 = lambda * std::min(*omega_a, *omega_b) /
                              ((phi * phi) * (phi * phi));
            sys.modes = {{*omega_a, phi}, {*omega_b, phi}};
            sys.quartic = {{{2, 2}, 1.0, EnergyScale::from_hz(e4)}};
            chi_analytic = (phi * phi) * (phi * phi) * e4;
            break;
        }
        case Platform::fluxonium: {
            const auto omega = dev.maybe("omega");
            if (!omega)
                throw DomainError("oracle_check: fluxonium reduction needs omega");
            // Single-mode reduction: fold the participation into an effective
            // amplitude so that c * phi_eff^4 = p^2 phi^4.
            const double phi_eff = std::sqrt(dev.get("p")) * dev.get("phi_zpf");
            if (!(phi_eff > 0.0))
                throw DomainError("oracle_check: zero effective amplitude");
            const double phi4 = std::pow(phi_eff, 4);
            const double e4 = lambda * *omega / phi4;
            sys.modes = {{*omega, phi_eff}};
            sys.quartic = {{{4}, 1.0, EnergyScale::from_hz(e4)}};
            chi_analytic = 0.5 * phi4 * e4; // self-Kerr carries the 1/2
            self_kerr = true;
            break;
        }
        default:
            throw UnsupportedPlatform(
                "oracle_check: no one- or two-mode reduction for platform " +
                std::string(to_string(dev.platform)));
    }

    OracleCheckReport rep;
    rep.lambda_star = lambda_star(sys);
    rep.dim = dim;
    rep.self_kerr = self_kerr;
    rep.chi_analytic_hz = chi_analytic;

    if (chi_analytic == 0.0) {
        rep.chi_full_hz = 0.0;
        rep.rel_dev = 0.0;
        rep.pass = true;
        return rep;
    }
    try {
        const LabeledSpectrum spec = diagonalize_and_label(sys);
        rep.chi_full_hz = self_kerr ? extract_self_kerr(spec) : extract_cross_kerr(spec);
    } catch (const StrongMixing& ex) {
        rep.strong_mixing = true;
        rep.mixing_label = ex.label();
        rep.pass = false;
        return rep;
    }
    rep.rel_dev = std::abs(rep.chi_full_hz - rep.chi_analytic_hz) / std::abs(rep.chi_analytic_hz);
    rep.pass = rep.rel_dev < kOracleRelDevLimit;
    return rep;
}

} // namespace qkerr
