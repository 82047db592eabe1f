#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qkerr/device.hpp"
#include "qkerr/errors.hpp"
#include "qkerr/format.hpp"
#include "qkerr/report.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;      // parse / validation errors
constexpr int kExitNumerical = 3;  // solver failures
constexpr int kExitAcceptance = 4; // validate / oracle-check mismatch

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kerr-type coupling prediction via the quartic projection law"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::string output = "table";
    bool quiet = false;
    app.add_option("--output", output, "Output format: table|csv|json-lines")
        ->check(CLI::IsMember({"table", "csv", "json-lines"}));
    app.add_flag("--quiet", quiet, "Suppress echo/step detail");

    std::string predict_file;
    auto* cmd_predict = app.add_subcommand("predict", "Run one device prediction");
    cmd_predict->add_option("device-file", predict_file, "Device description file")
        ->required();

    std::string validate_dir;
    auto* cmd_validate =
        app.add_subcommand("validate", "Regenerate the cross-platform table from a "
                                       "directory of device files");
    cmd_validate->add_option("device-dir", validate_dir, "Directory of .dev files")
        ->required();

    std::string sweep_file, sweep_param;
    double sweep_from = 0.0, sweep_to = 0.0;
    int sweep_points = 0;
    auto* cmd_sweep = app.add_subcommand("sweep", "Sweep one device parameter");
    cmd_sweep->add_option("device-file", sweep_file)->required();
    cmd_sweep->add_option("--param", sweep_param, "Device key to vary")->required();
    cmd_sweep->add_option("--from", sweep_from)->required();
    cmd_sweep->add_option("--to", sweep_to)->required();
    cmd_sweep->add_option("--points", sweep_points)->required();

    std::string oracle_file;
    double oracle_lambda = 1e-3;
    int oracle_dim = 12;
    auto* cmd_oracle =
        app.add_subcommand("oracle-check", "Diagonalize a truncated Fock model of the "
                                           "device and compare with the analytic law");
    cmd_oracle->add_option("device-file", oracle_file)->required();
    cmd_oracle->add_option("--lambda", oracle_lambda, "Target perturbation parameter")
        ->required();
    cmd_oracle->add_option("--dim", oracle_dim, "Per-mode truncation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    const qkerr::OutputMode mode = qkerr::output_mode_from_string(output);

    try {
        if (*cmd_predict) {
            const auto dev = qkerr::parse_device_file(predict_file);
            qkerr::print_prediction(std::cout, qkerr::run_prediction(dev), mode, quiet);
            return kExitOk;
        }
        if (*cmd_validate) {
            const auto rows = qkerr::validate_table(validate_dir);
            const bool ok = qkerr::print_validation(std::cout, rows, mode, quiet);
            return ok ? kExitOk : kExitAcceptance;
        }
        if (*cmd_sweep) {
            const auto dev = qkerr::parse_device_file(sweep_file);
            const auto result =
                qkerr::sweep(dev, sweep_param, sweep_from, sweep_to, sweep_points);
            qkerr::print_sweep(std::cout, result, dev.platform, mode, quiet);
            return kExitOk;
        }
        if (*cmd_oracle) {
            const auto dev = qkerr::parse_device_file(oracle_file);
            const auto rep = qkerr::oracle_check(dev, oracle_lambda, oracle_dim);
            qkerr::print_oracle_check(std::cout, rep, mode, quiet);
            return rep.pass ? kExitOk : kExitAcceptance;
        }
    } catch (const qkerr::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qkerr::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qkerr::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
