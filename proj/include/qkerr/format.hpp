#pragma once

#include <iosfwd>
#include <string>

#include "qkerr/report.hpp"

namespace qkerr {

enum class OutputMode { table, csv, json_lines };

OutputMode output_mode_from_string(const std::string& s);

// Locale-independent shortest-ish representation ("%.9g"); identical inputs
// always produce identical bytes.
std::string fmt_num(double v);

void print_prediction(std::ostream& os, const PredictionReport& rep,
                      OutputMode mode, bool quiet);

// Returns false when any row failed its check.
bool print_validation(std::ostream& os, const std::vector<ValidationRow>& rows,
                      OutputMode mode, bool quiet);

void print_sweep(std::ostream& os, const SweepResult& result, Platform platform,
                 OutputMode mode, bool quiet);

void print_oracle_check(std::ostream& os, const OracleCheckReport& rep,
                        OutputMode mode, bool quiet);

} // namespace qkerr
