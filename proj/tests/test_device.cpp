#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <doctest.h>

#include "qkerr/device.hpp"
#include "qkerr/enz.hpp"
#include "qkerr/format.hpp"
#include "qkerr/photonic.hpp"
#include "qkerr/report.hpp"

using namespace qkerr;
namespace fs = std::filesystem;

namespace {

const std::string kDeviceDir = QKERR_DEVICE_DIR;

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Scratch directory that cleans up after itself.
struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qkerr_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    fs::path file(const std::string& name, const std::string& content) const {
        const fs::path p = path / name;
        std::ofstream(p) << content;
        return p;
    }
};

double step_value(const PredictionReport& rep, const std::string& name) {
    for (const auto& e : rep.steps)
        if (e.name == name) return e.value;
    throw std::runtime_error("no step named " + name);
}

} // namespace

TEST_CASE("parse_device_file reads the worked-example quarton") {
    const auto dev = parse_device_file(kDeviceDir + "/quarton.dev");
    CHECK(dev.platform == Platform::quarton);
    CHECK(dev.get("EJ") == doctest::Approx(14.8e9).epsilon(1e-15));
    CHECK(dev.get("EC") == doctest::Approx(0.21e9).epsilon(1e-15));
    CHECK(dev.get("p_A") == 0.88);
    CHECK(dev.get("p_B") == 0.86);
    CHECK(dev.get("omega_A") == doctest::Approx(5.12e9).epsilon(1e-15));
    CHECK(dev.get("omega_B") == doctest::Approx(5.38e9).epsilon(1e-15));
    CHECK(dev.get("measured_chi") == doctest::Approx(366.0e6).epsilon(1e-15));
    CHECK(dev.get("measured_chi_unc") == doctest::Approx(0.5e6).epsilon(1e-15));
    CHECK(dev.provenance("EJ") == Provenance::measured);
    CHECK(dev.provenance("eta_kernel") == Provenance::paper_kernel);
}

TEST_CASE("parser diagnostics") {
    TempDir tmp;

    // empty file: the platform key is missing
    CHECK_THROWS_AS(parse_device_file(tmp.file("empty.dev", "").string()), ParseError);

    // out-of-range participation
    try {
        parse_device_file(tmp.file("range.dev",
                                   "platform = quarton\nEJ = 1 GHz\nEC = 0.2 GHz\n"
                                   "p_A = 1.3\np_B = 0.5\nomega_A = 5 GHz\nomega_B = 6 GHz\n")
                              .string());
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("p_A") != std::string::npos);
    }

    // unknown key is named
    try {
        parse_device_file(
            tmp.file("unk.dev", "platform = squid\nEJ = 1 GHz\nEC = 0.1 GHz\nbogus = 3\n")
                .string());
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }

    // missing required key is named
    try {
        parse_device_file(tmp.file("mis.dev", "platform = squid\nEJ = 1 GHz\n").string());
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("EC") != std::string::npos);
    }

    // unknown platform
    CHECK_THROWS_AS(parse_device_file(tmp.file("plat.dev", "platform = maser\n").string()),
                    ParseError);

    // duplicate key
    CHECK_THROWS_AS(
        parse_device_file(
            tmp.file("dup.dev", "platform = squid\nEJ = 1 GHz\nEJ = 2 GHz\nEC = 0.1 GHz\n")
                .string()),
        ParseError);

    // malformed number
    CHECK_THROWS_AS(
        parse_device_file(
            tmp.file("num.dev", "platform = squid\nEJ = fast GHz\nEC = 0.1 GHz\n").string()),
        ParseError);

    // bad unit for the key kind
    CHECK_THROWS_AS(
        parse_device_file(
            tmp.file("unit.dev", "platform = squid\nEJ = 1 um\nEC = 0.1 GHz\n").string()),
        ParseError);
}

TEST_CASE("frequency suffix normalization") {
    CHECK(parse_frequency_hz("14.8 GHz") == doctest::Approx(14.8e9).epsilon(1e-15));
    CHECK(parse_frequency_hz("0.5 MHz") == doctest::Approx(0.5e6).epsilon(1e-15));
    CHECK(parse_frequency_hz("80 kHz") == doctest::Approx(8.0e4).epsilon(1e-15));
    CHECK(parse_frequency_hz("2.1 THz") == doctest::Approx(2.1e12).epsilon(1e-15));
    CHECK(parse_frequency_hz("42") == 42.0);
    CHECK_THROWS_AS(parse_frequency_hz("1 parsec"), DomainError);
}

TEST_CASE("run_prediction on the quarton reproduces the published chain") {
    const auto rep = run_prediction(parse_device_file(kDeviceDir + "/quarton.dev"));

    // phi_zpf = (2*0.21/14.8)^(1/4); the published 0.411 is a print rounding
    CHECK(step_value(rep, "phi_zpf") == doctest::Approx(0.4104373678).epsilon(1e-9));
    CHECK(std::abs(step_value(rep, "phi_zpf") - 0.411) < 1e-3);

    // analytic eta from the raw inputs; the published hand value 0.01641
    // arises only from its three-decimal intermediate rounding
    REQUIRE(rep.eta_analytic.has_value());
    CHECK(*rep.eta_analytic == doctest::Approx(0.0162536095).epsilon(1e-8));

    CHECK(rep.eta_used == 0.0244);
    CHECK(rep.eta_prov == Provenance::paper_kernel);
    CHECK(rep.e4_used_hz == doctest::Approx(14.8e9).epsilon(1e-15));

    CHECK(rep.prediction.chi_over_2pi_hz == doctest::Approx(361.12e6).epsilon(1e-12));
    CHECK(rep.prediction.abs_unc_hz == doctest::Approx(12.6392e6).epsilon(1e-9));
    REQUIRE(rep.prediction.deviation_pct.has_value());
    CHECK(*rep.prediction.deviation_pct == doctest::Approx(1.333333).epsilon(1e-6));
    CHECK(rep.prediction.regime == Regime::strong);
}

TEST_CASE("squid prediction collapses to EC/8 with only EC and EJ") {
    TempDir tmp;
    const auto dev = parse_device_file(
        tmp.file("sq.dev", "platform = squid\nEJ = 9.2 GHz\nEC = 198.4 MHz\n").string());
    const auto rep = run_prediction(dev);
    CHECK(rel_diff(rep.prediction.chi_over_2pi_hz, 198.4e6 / 8.0) < 1e-12);
    CHECK(rep.prediction.chi_over_2pi_hz == doctest::Approx(24.8e6).epsilon(1e-12));
    CHECK(rep.prediction.regime == Regime::unknown); // no mode frequency given
}

TEST_CASE("snail prediction at the stored Kerr-free bias is tiny and weak") {
    const auto dev = parse_device_file(kDeviceDir + "/snail.dev");
    const auto rep = run_prediction(dev);
    REQUIRE(rep.snail.has_value());
    // chi = c4/2 under the snail reduction
    CHECK(rel_diff(rep.prediction.chi_over_2pi_hz, 0.5 * rep.snail->c4_hz) < 1e-12);
    // the stored bias is the root to 7 digits; chi collapses by ~8 orders
    CHECK(std::abs(rep.prediction.chi_over_2pi_hz) < 1e3);
    CHECK(rep.prediction.regime == Regime::weak);
}

TEST_CASE("photonic prediction from field grids matches the kernel chain") {
    const auto dev = parse_device_file(kDeviceDir + "/demo/photonic_gaas.dev");
    const auto rep = run_prediction(dev);

    // reproduce by hand from the same grids
    const fs::path base = fs::path(dev.path).parent_path();
    const FieldGrid a = normalize_grid(read_field_grid((base / "grids/mode_a.grid").string()));
    const FieldGrid b = normalize_grid(read_field_grid((base / "grids/mode_b.grid").string()));
    const double veff = mode_volume(a);
    const double ovl = overlap_integral(a, b);
    const double chi3 = chi3_from_n2(3.1e-18, 3.3);

    PhotonicSpec spec{1.75e-6, 3.3, chi3, veff, 1.0 / veff};
    const double omega = 2.0 * 3.14159265358979323846 * 299792458.0 / 1.75e-6;
    const double eta = eta_photonic(spec, ovl).value;
    const double e4 = e4_photonic(spec, omega).freq_equiv_hz;

    CHECK(rel_diff(*rep.eta_analytic, eta) < 1e-12);
    CHECK(rel_diff(rep.e4_used_hz, e4) < 1e-12);
    CHECK(rel_diff(rep.prediction.chi_over_2pi_hz, eta * e4) < 1e-12);
}

TEST_CASE("enz prediction prefers stored constants and reports provenance") {
    const auto dev = parse_device_file(kDeviceDir + "/enz_ito.dev");
    const auto rep = run_prediction(dev);
    CHECK(rep.e4_used_hz == doctest::Approx(4.1e6).epsilon(1e-15));
    CHECK(rep.e4_prov == Provenance::paper_kernel);
    CHECK(rep.eta_used == doctest::Approx(6.2e-8).epsilon(1e-15));
    CHECK(rel_diff(rep.prediction.chi_over_2pi_hz, 0.2542) < 1e-12);
    REQUIRE(rep.prediction.deviation_pct.has_value());
    CHECK(*rep.prediction.deviation_pct == doctest::Approx(8.30848).epsilon(1e-5));
}

TEST_CASE("enz prediction with Drude parameters runs at the located crossing") {
    const auto dev = parse_device_file(kDeviceDir + "/demo/enz_drude.dev");
    const auto rep = run_prediction(dev);
    DrudeParams p{3.9, 2.8e15, 1.0e14};
    const double w_enz = find_enz_frequency(p);
    CHECK(step_value(rep, "omega_enz") == doctest::Approx(w_enz).epsilon(1e-12));
    EnzSpec spec{p, 1.8e-18, 2.0e-19};
    CHECK(rel_diff(step_value(rep, "E4_analytic"), e4_enz(spec, w_enz).freq_equiv_hz) <
          1e-12);
}

TEST_CASE("validate_table regenerates the cross-platform rows") {
    const auto rows = validate_table(kDeviceDir);
    REQUIRE(rows.size() == 5);
    int checked = 0;
    for (const auto& r : rows) {
        CHECK(r.pass);
        if (r.file == "quarton.dev") {
            CHECK(*r.deviation_pct == doctest::Approx(1.33333).epsilon(1e-5));
            ++checked;
        } else if (r.file == "transmon_coupler.dev") {
            CHECK(r.eta_used == doctest::Approx(2.69565e-3).epsilon(1e-5));
            CHECK(*r.deviation_pct == doctest::Approx(5.53191).epsilon(1e-5));
            ++checked;
        } else if (r.file == "photon_blockade.dev") {
            CHECK(r.eta_used == doctest::Approx(3.5e-3).epsilon(1e-12));
            CHECK(*r.deviation_pct == doctest::Approx(6.25).epsilon(1e-5));
            ++checked;
        } else if (r.file == "enz_ito.dev") {
            CHECK(*r.deviation_pct == doctest::Approx(8.30848).epsilon(1e-5));
            ++checked;
        } else if (r.file == "snail.dev") {
            CHECK(r.qualitative);
            ++checked;
        }
    }
    CHECK(checked == 5);
}

TEST_CASE("validate_table aborts naming a corrupted file") {
    TempDir tmp;
    tmp.file("ok.dev", "platform = squid\nEJ = 9.2 GHz\nEC = 0.2 GHz\n");
    tmp.file("broken.dev", "platform = squid\nEJ = 9.2 GHz\nEC = 0.2 GHz\nwhat = 1\n");
    try {
        validate_table(tmp.path.string());
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("broken.dev") != std::string::npos);
    }

    TempDir empty;
    CHECK_THROWS_AS(validate_table(empty.path.string()), DomainError);
}

TEST_CASE("sweep over snail flux crosses zero exactly once") {
    const auto dev = parse_device_file(kDeviceDir + "/snail.dev");
    const auto result = sweep(dev, "flux", 0.0, 0.5, 101);
    REQUIRE(result.points.size() == 101);
    int sign_changes = 0;
    for (std::size_t i = 1; i < result.points.size(); ++i) {
        const double a = result.points[i - 1].report.snail->c4_hz;
        const double b = result.points[i].report.snail->c4_hz;
        if ((a < 0.0) != (b < 0.0)) ++sign_changes;
    }
    CHECK(sign_changes == 1);
}

TEST_CASE("sweep edge cases") {
    const auto dev = parse_device_file(kDeviceDir + "/quarton.dev");

    // zero-width range collapses to one row
    const auto single = sweep(dev, "EC", 0.21e9, 0.21e9, 50);
    CHECK(single.points.size() == 1);

    // non-sweepable key lists the sweepable ones
    try {
        sweep(dev, "measured_chi", 0.0, 1.0, 3);
        CHECK(false);
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("p_A") != std::string::npos);
    }
}

TEST_CASE("sweep CSV columns are stable across parameters of one platform") {
    const auto dev = parse_device_file(kDeviceDir + "/quarton.dev");
    const auto header = [&](const std::string& param) {
        std::ostringstream os;
        print_sweep(os, sweep(dev, param, 1.0e9, 2.0e9, 2), dev.platform,
                    OutputMode::csv, false);
        const auto text = os.str();
        auto head = text.substr(0, text.find('\n'));
        return head.substr(head.find(',')); // drop the swept-key column name
    };
    CHECK(header("EC") == header("EJ"));
    CHECK(header("EC") == header("omega_A"));
}

TEST_CASE("enz frequency sweep peaks at the grid point nearest the crossing") {
    const auto dev = parse_device_file(kDeviceDir + "/demo/enz_drude.dev");
    const double w_enz = find_enz_frequency({3.9, 2.8e15, 1.0e14});
    // Grid coarse enough that the damping-induced offset of the continuous
    // maximum (a fraction of a percent of omega) stays well inside one step.
    const double step = w_enz / 40.0;
    const auto result = sweep(dev, "omega", w_enz - 20.0 * step, w_enz + 20.0 * step, 41);
    std::size_t best = 0;
    for (std::size_t i = 1; i < result.points.size(); ++i)
        if (result.points[i].report.e4_used_hz > result.points[best].report.e4_used_hz)
            best = i;
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < result.points.size(); ++i)
        if (std::abs(result.points[i].param_value - w_enz) <
            std::abs(result.points[nearest].param_value - w_enz))
            nearest = i;
    CHECK(best == nearest);
}

TEST_CASE("oracle_check on the quarton passes at lambda* = 1e-3") {
    const auto dev = parse_device_file(kDeviceDir + "/quarton.dev");
    const auto rep = oracle_check(dev, 1e-3);
    CHECK(rep.pass);
    CHECK_FALSE(rep.self_kerr);
    CHECK(rep.lambda_star == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(rep.rel_dev < 0.01);

    const auto zero = oracle_check(dev, 0.0);
    CHECK(zero.pass);
    CHECK(zero.rel_dev == 0.0);

    // at lambda* of order one the perturbative labeling must fail loudly
    for (double lam : {1.0, 1.5}) {
        const auto strong = oracle_check(dev, lam);
        CHECK_FALSE(strong.pass);
        CHECK((strong.strong_mixing || strong.rel_dev > 0.01));
    }
}

TEST_CASE("oracle_check reduces the fluxonium to a single mode") {
    const auto dev = parse_device_file(kDeviceDir + "/demo/fluxonium.dev");
    const auto rep = oracle_check(dev, 1e-3);
    CHECK(rep.self_kerr);
    CHECK(rep.pass);
}

TEST_CASE("oracle_check rejects platforms without a mode reduction") {
    CHECK_THROWS_AS(
        oracle_check(parse_device_file(kDeviceDir + "/demo/photonic_gaas.dev"), 1e-3),
        UnsupportedPlatform);
    CHECK_THROWS_AS(oracle_check(parse_device_file(kDeviceDir + "/enz_ito.dev"), 1e-3),
                    UnsupportedPlatform);
}

TEST_CASE("reports are byte-identical across repeated runs") {
    const auto dev = parse_device_file(kDeviceDir + "/quarton.dev");
    std::ostringstream a, b;
    print_prediction(a, run_prediction(dev), OutputMode::table, false);
    print_prediction(b, run_prediction(dev), OutputMode::table, false);
    CHECK(a.str() == b.str());

    std::ostringstream c, d;
    print_validation(c, validate_table(kDeviceDir), OutputMode::csv, false);
    print_validation(d, validate_table(kDeviceDir), OutputMode::csv, false);
    CHECK(c.str() == d.str());
    CHECK(c.str().find("FAIL") == std::string::npos);
}

TEST_CASE("every reported value carries a provenance tag") {
    const auto rep = run_prediction(parse_device_file(kDeviceDir + "/quarton.dev"));
    std::ostringstream os;
    print_prediction(os, rep, OutputMode::json_lines, false);
    const std::string out = os.str();
    for (const char* field : {"\"inputs\"", "\"steps\"", "\"provenance\""})
        CHECK(out.find(field) != std::string::npos);
}
