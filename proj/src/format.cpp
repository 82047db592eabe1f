#include "qkerr/format.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qkerr/errors.hpp"

namespace qkerr {

namespace {

using nlohmann::json;

std::string opt_num(const std::optional<double>& v) {
    return v ? fmt_num(*v) : std::string{};
}

// Compact cell format for aligned tables; CSV/JSON keep full precision.
std::string fmt_num_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.5g", v);
    return buf;
}

json opt_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << ",";
        os << cells[i];
    }
    os << "\n";
}

std::vector<std::string> sweep_columns(Platform platform, const std::string& param) {
    std::vector<std::string> cols = {param,       "e4_hz",      "eta_analytic",
                                     "eta_used",  "chi_hz",     "abs_unc_hz",
                                     "regime",    "deviation_pct"};
    if (platform == Platform::snail) {
        cols.insert(cols.end(), {"phi_min_rad", "c2_hz", "c3_hz", "c4_hz"});
    } else if (platform == Platform::enz) {
        cols.insert(cols.end(), {"re_eps", "im_eps", "abs_eps"});
    }
    return cols;
}

std::vector<std::string> sweep_cells(const SweepPoint& pt) {
    const auto& rep = pt.report;
    std::vector<std::string> cells = {
        fmt_num(pt.param_value),
        fmt_num(rep.e4_used_hz),
        rep.eta_analytic ? fmt_num(*rep.eta_analytic) : std::string{},
        fmt_num(rep.eta_used),
        fmt_num(rep.prediction.chi_over_2pi_hz),
        fmt_num(rep.prediction.abs_unc_hz),
        to_string(rep.prediction.regime),
        opt_num(rep.prediction.deviation_pct),
    };
    if (rep.snail) {
        cells.push_back(fmt_num(rep.snail->phi_min_rad));
        cells.push_back(fmt_num(rep.snail->c2_hz));
        cells.push_back(fmt_num(rep.snail->c3_hz));
        cells.push_back(fmt_num(rep.snail->c4_hz));
    } else if (rep.enz_eps) {
        cells.push_back(fmt_num(rep.enz_eps->real()));
        cells.push_back(fmt_num(rep.enz_eps->imag()));
        cells.push_back(fmt_num(std::abs(*rep.enz_eps)));
    }
    return cells;
}

std::vector<std::string> sweep_cells_short(const SweepPoint& pt) {
    const auto& rep = pt.report;
    std::vector<std::string> cells = {
        fmt_num_short(pt.param_value),
        fmt_num_short(rep.e4_used_hz),
        rep.eta_analytic ? fmt_num_short(*rep.eta_analytic) : std::string{},
        fmt_num_short(rep.eta_used),
        fmt_num_short(rep.prediction.chi_over_2pi_hz),
        fmt_num_short(rep.prediction.abs_unc_hz),
        to_string(rep.prediction.regime),
        rep.prediction.deviation_pct ? fmt_num_short(*rep.prediction.deviation_pct)
                                     : std::string{},
    };
    if (rep.snail) {
        cells.push_back(fmt_num_short(rep.snail->phi_min_rad));
        cells.push_back(fmt_num_short(rep.snail->c2_hz));
        cells.push_back(fmt_num_short(rep.snail->c3_hz));
        cells.push_back(fmt_num_short(rep.snail->c4_hz));
    } else if (rep.enz_eps) {
        cells.push_back(fmt_num_short(rep.enz_eps->real()));
        cells.push_back(fmt_num_short(rep.enz_eps->imag()));
        cells.push_back(fmt_num_short(std::abs(*rep.enz_eps)));
    }
    return cells;
}

json prediction_json(const PredictionReport& rep) {
    json j;
    j["platform"] = to_string(rep.platform);
    j["device"] = rep.device_path;
    json inputs = json::object();
    for (const auto& e : rep.inputs)
        inputs[e.name] = {{"value", e.value}, {"provenance", to_string(e.prov)}};
    j["inputs"] = inputs;
    json steps = json::object();
    for (const auto& e : rep.steps)
        steps[e.name] = {{"value", e.value},
                         {"unit", e.unit},
                         {"provenance", to_string(e.prov)}};
    j["steps"] = steps;
    j["e4_hz"] = {{"value", rep.e4_used_hz}, {"provenance", to_string(rep.e4_prov)}};
    j["eta_analytic"] = opt_json(rep.eta_analytic);
    j["eta_used"] = {{"value", rep.eta_used}, {"provenance", to_string(rep.eta_prov)}};
    j["chi_hz"] = {{"value", rep.prediction.chi_over_2pi_hz}, {"provenance", "computed"}};
    j["abs_unc_hz"] = {{"value", rep.prediction.abs_unc_hz}, {"provenance", "computed"}};
    j["regime"] = to_string(rep.prediction.regime);
    j["measured_chi_hz"] = opt_json(rep.measured_chi_hz);
    j["deviation_pct"] = opt_json(rep.prediction.deviation_pct);
    return j;
}

} // namespace

OutputMode output_mode_from_string(const std::string& s) {
    if (s == "table") return OutputMode::table;
    if (s == "csv") return OutputMode::csv;
    if (s == "json-lines") return OutputMode::json_lines;
    throw DomainError("unknown output mode '" + s + "' (table|csv|json-lines)");
}

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void print_prediction(std::ostream& os, const PredictionReport& rep,
                      OutputMode mode, bool quiet) {
    switch (mode) {
        case OutputMode::json_lines:
            os << prediction_json(rep).dump() << "\n";
            return;
        case OutputMode::csv: {
            csv_row(os, {"platform", "e4_hz", "eta_analytic", "eta_used", "chi_hz",
                         "abs_unc_hz", "regime", "measured_chi_hz", "deviation_pct"});
            csv_row(os, {to_string(rep.platform), fmt_num(rep.e4_used_hz),
                         rep.eta_analytic ? fmt_num(*rep.eta_analytic) : std::string{},
                         fmt_num(rep.eta_used), fmt_num(rep.prediction.chi_over_2pi_hz),
                         fmt_num(rep.prediction.abs_unc_hz),
                         to_string(rep.prediction.regime), opt_num(rep.measured_chi_hz),
                         opt_num(rep.prediction.deviation_pct)});
            return;
        }
        case OutputMode::table:
            break;
    }

    os << "device: " << rep.device_path << " (" << to_string(rep.platform) << ")\n";
    if (!quiet) {
        os << "inputs:\n";
        for (const auto& e : rep.inputs)
            os << "  " << std::left << std::setw(24) << e.name << " " << std::setw(16)
               << fmt_num(e.value) << " [" << to_string(e.prov) << "]\n";
        if (!rep.steps.empty()) {
            os << "steps:\n";
            for (const auto& e : rep.steps)
                os << "  " << std::left << std::setw(24) << e.name << " " << std::setw(16)
                   << fmt_num(e.value) << (e.unit.empty() ? "" : " " + e.unit) << " ["
                   << to_string(e.prov) << "]\n";
        }
    }
    os << "result:\n";
    os << "  E4/h          = " << fmt_num(rep.e4_used_hz) << " Hz ["
       << to_string(rep.e4_prov) << "]\n";
    if (rep.eta_analytic)
        os << "  eta_analytic  = " << fmt_num(*rep.eta_analytic) << " [computed]\n";
    os << "  eta_used      = " << fmt_num(rep.eta_used) << " [" << to_string(rep.eta_prov)
       << "]\n";
    os << "  chi/2pi       = " << fmt_num(rep.prediction.chi_over_2pi_hz) << " Hz +/- "
       << fmt_num(rep.prediction.abs_unc_hz) << " Hz [computed]\n";
    os << "  regime        = " << to_string(rep.prediction.regime) << "\n";
    if (rep.measured_chi_hz) {
        os << "  measured      = " << fmt_num(*rep.measured_chi_hz) << " Hz";
        if (rep.measured_chi_unc_hz)
            os << " +/- " << fmt_num(*rep.measured_chi_unc_hz) << " Hz";
        os << " [measured]\n";
        os << "  deviation     = " << fmt_num(*rep.prediction.deviation_pct)
           << " % [computed]\n";
    }
}

bool print_validation(std::ostream& os, const std::vector<ValidationRow>& rows,
                      OutputMode mode, bool quiet) {
    bool all_pass = true;
    for (const auto& r : rows) all_pass = all_pass && r.pass;

    if (mode == OutputMode::json_lines) {
        for (const auto& r : rows) {
            json j;
            j["file"] = r.file;
            j["platform"] = to_string(r.platform);
            j["e4_hz"] = r.e4_hz;
            j["eta"] = r.eta_used;
            j["chi_pred_hz"] = r.chi_pred_hz;
            j["chi_meas_hz"] = opt_json(r.chi_meas_hz);
            j["deviation_pct"] = opt_json(r.deviation_pct);
            j["reference_deviation_pct"] = opt_json(r.reference_deviation_pct);
            j["qualitative"] = r.qualitative;
            j["pass"] = r.pass;
            if (!r.note.empty()) j["note"] = r.note;
            os << j.dump() << "\n";
        }
        return all_pass;
    }
    if (mode == OutputMode::csv) {
        csv_row(os, {"file", "platform", "e4_hz", "eta", "chi_pred_hz", "chi_meas_hz",
                     "deviation_pct", "reference_deviation_pct", "status"});
        for (const auto& r : rows)
            csv_row(os, {r.file, to_string(r.platform), fmt_num(r.e4_hz),
                         fmt_num(r.eta_used), fmt_num(r.chi_pred_hz),
                         opt_num(r.chi_meas_hz), opt_num(r.deviation_pct),
                         opt_num(r.reference_deviation_pct),
                         r.pass ? "pass" : "FAIL"});
        return all_pass;
    }

    os << std::left << std::setw(22) << "file" << std::setw(11) << "platform"
       << std::right << std::setw(12) << "E4/h [Hz]" << std::setw(12) << "eta"
       << std::setw(15) << "chi_pred [Hz]" << std::setw(15) << "chi_meas [Hz]"
       << std::setw(8) << "D [%]" << std::setw(9) << "ref [%]" << "  status\n";
    for (const auto& r : rows) {
        os << std::left << std::setw(22) << r.file << std::setw(11)
           << to_string(r.platform) << std::right << std::setw(12)
           << fmt_num_short(r.e4_hz) << std::setw(12) << fmt_num_short(r.eta_used);
        if (r.qualitative) {
            os << std::setw(15) << "~0" << std::setw(15) << "-> 0" << std::setw(8) << "-"
               << std::setw(9) << "-";
        } else {
            os << std::setw(15) << fmt_num_short(r.chi_pred_hz) << std::setw(15)
               << (r.chi_meas_hz ? fmt_num_short(*r.chi_meas_hz) : "n/a") << std::setw(8)
               << (r.deviation_pct ? fmt_num_short(*r.deviation_pct) : "n/a")
               << std::setw(9)
               << (r.reference_deviation_pct ? fmt_num_short(*r.reference_deviation_pct)
                                             : "n/a");
        }
        os << "  " << (r.pass ? "pass" : "FAIL");
        if (!quiet && !r.note.empty()) os << "  (" << r.note << ")";
        os << "\n";
    }
    return all_pass;
}

void print_sweep(std::ostream& os, const SweepResult& result, Platform platform,
                 OutputMode mode, bool quiet) {
    const auto cols = sweep_columns(platform, result.param);
    if (mode == OutputMode::json_lines) {
        for (const auto& pt : result.points) {
            json j;
            const auto cells = sweep_cells(pt);
            for (std::size_t i = 0; i < cols.size(); ++i) {
                if (cols[i] == "regime") {
                    j[cols[i]] = cells[i];
                } else {
                    j[cols[i]] = cells[i].empty() ? json(nullptr)
                                                  : json(std::stod(cells[i]));
                }
            }
            os << j.dump() << "\n";
        }
        return;
    }
    if (mode == OutputMode::csv) {
        csv_row(os, cols);
        for (const auto& pt : result.points) csv_row(os, sweep_cells(pt));
        return;
    }
    if (!quiet) {
        for (std::size_t i = 0; i < cols.size(); ++i)
            os << (i ? " " : "") << std::setw(14) << cols[i];
        os << "\n";
    }
    for (const auto& pt : result.points) {
        const auto cells = sweep_cells_short(pt);
        for (std::size_t i = 0; i < cells.size(); ++i)
            os << (i ? " " : "") << std::setw(14) << (cells[i].empty() ? "n/a" : cells[i]);
        os << "\n";
    }
}

void print_oracle_check(std::ostream& os, const OracleCheckReport& rep,
                        OutputMode mode, bool quiet) {
    if (mode == OutputMode::json_lines) {
        json j;
        j["lambda_star"] = rep.lambda_star;
        j["dim"] = rep.dim;
        j["mode"] = rep.self_kerr ? "self-kerr" : "cross-kerr";
        j["chi_full_hz"] = rep.chi_full_hz;
        j["chi_analytic_hz"] = rep.chi_analytic_hz;
        j["rel_dev"] = rep.rel_dev;
        j["strong_mixing"] = rep.strong_mixing;
        if (rep.strong_mixing) j["mixing_label"] = rep.mixing_label;
        j["pass"] = rep.pass;
        os << j.dump() << "\n";
        return;
    }
    if (mode == OutputMode::csv) {
        csv_row(os, {"lambda_star", "dim", "mode", "chi_full_hz", "chi_analytic_hz",
                     "rel_dev", "strong_mixing", "status"});
        csv_row(os, {fmt_num(rep.lambda_star), std::to_string(rep.dim),
                     rep.self_kerr ? "self-kerr" : "cross-kerr", fmt_num(rep.chi_full_hz),
                     fmt_num(rep.chi_analytic_hz), fmt_num(rep.rel_dev),
                     rep.strong_mixing ? "yes" : "no", rep.pass ? "pass" : "FAIL"});
        return;
    }
    if (!quiet) {
        os << "lambda_star   = " << fmt_num(rep.lambda_star) << "\n";
        os << "dim per mode  = " << rep.dim << "\n";
        os << "reduction     = " << (rep.self_kerr ? "self-kerr" : "cross-kerr") << "\n";
    }
    if (rep.strong_mixing) {
        os << "strong mixing at label " << rep.mixing_label << "\n";
    } else {
        os << "chi_oracle    = " << fmt_num(rep.chi_full_hz) << " Hz\n";
        os << "chi_analytic  = " << fmt_num(rep.chi_analytic_hz) << " Hz\n";
        os << "rel_dev       = " << fmt_num(rep.rel_dev) << "\n";
    }
    os << (rep.pass ? "pass" : "FAIL") << " (threshold rel_dev < "
       << fmt_num(kOracleRelDevLimit) << ")\n";
}

} // namespace qkerr
