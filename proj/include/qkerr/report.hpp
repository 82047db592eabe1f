#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "qkerr/core.hpp"
#include "qkerr/device.hpp"
#include "qkerr/sc.hpp"

namespace qkerr {

struct ReportEntry {
    std::string name;
    double value = 0.0;
    std::string unit; // empty for dimensionless
    Provenance prov = Provenance::computed;
};

// Full trace of one prediction: echoed inputs, intermediates, result.
// Every intermediate is recomputable from the echoed inputs.
struct PredictionReport {
    Platform platform = Platform::quarton;
    std::string device_path;
    std::vector<ReportEntry> inputs;
    std::vector<ReportEntry> steps;

    double e4_used_hz = 0.0;
    Provenance e4_prov = Provenance::computed;
    std::optional<double> eta_analytic;
    double eta_used = 0.0;
    Provenance eta_prov = Provenance::computed;

    KerrPrediction prediction;
    std::optional<double> measured_chi_hz;
    std::optional<double> measured_chi_unc_hz;

    std::optional<SnailExpansion> snail;           // snail platform only
    std::optional<std::complex<double>> enz_eps;   // enz platform only
};

// Run the platform kernel chain on a parsed device.
PredictionReport run_prediction(const DeviceFile& dev);

// |delta_computed - delta_published| allowance when regenerating the
// cross-platform table: absorbs the printed rounding of the published rows.
inline constexpr double kTableTolerancePct = 0.15;

// chi at the Kerr-free bias must drop below this fraction of its flux = 0
// value for the snail row to count as cancelled.
inline constexpr double kSnailCancellationRatio = 1e-6;

struct ValidationRow {
    std::string file;
    Platform platform = Platform::quarton;
    double e4_hz = 0.0;
    double eta_used = 0.0;
    double chi_pred_hz = 0.0;
    std::optional<double> chi_meas_hz;
    std::optional<double> deviation_pct;
    std::optional<double> reference_deviation_pct;
    bool qualitative = false; // snail cancellation row
    bool pass = true;
    std::string note;
};

// Run every *.dev file in the directory (sorted by name) and check each row
// against its stored reference deviation; a snail row is checked for
// Kerr-free cancellation instead.
std::vector<ValidationRow> validate_table(const std::string& device_dir);

struct SweepPoint {
    double param_value = 0.0;
    PredictionReport report;
};

struct SweepResult {
    std::string param;
    std::vector<SweepPoint> points;
};

// Uniform sweep of one device key, inclusive endpoints. A zero-width range
// collapses to a single point.
SweepResult sweep(const DeviceFile& dev, const std::string& param,
                  double from, double to, int points);

// Acceptance threshold for the oracle agreement check.
inline constexpr double kOracleRelDevLimit = 0.01;

struct OracleCheckReport {
    double lambda_star = 0.0;
    int dim = 0;
    bool self_kerr = false; // single-mode reduction
    double chi_full_hz = 0.0;
    double chi_analytic_hz = 0.0;
    double rel_dev = 0.0;
    bool strong_mixing = false;
    std::string mixing_label;
    bool pass = false;
};

// Reduce the device to a one- or two-mode Fock system scaled to the given
// perturbation parameter and compare the diagonalized Kerr rate against the
// analytic law. Photonic/ENZ/snail devices have no such reduction.
OracleCheckReport oracle_check(const DeviceFile& dev, double lambda, int dim = 12);

} // namespace qkerr
