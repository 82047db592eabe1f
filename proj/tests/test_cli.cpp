#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <doctest.h>

namespace {

namespace fs = std::filesystem;

const std::string kCli = QKERR_CLI_PATH;
const std::string kDeviceDir = QKERR_DEVICE_DIR;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / "qkerr_cli_out.txt";
    const fs::path err = fs::temp_directory_path() / "qkerr_cli_err.txt";
    const std::string cmd =
        kCli + " " + args + " > " + out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_temp(const std::string& name, const std::string& content) {
    const fs::path p = fs::temp_directory_path() / name;
    std::ofstream(p) << content;
    return p;
}

} // namespace

TEST_CASE("predict succeeds on the shipped quarton") {
    const auto r = run("predict " + kDeviceDir + "/quarton.dev");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("chi/2pi") != std::string::npos);
    CHECK(r.out.find("361120000") != std::string::npos);
    CHECK(r.out.find("strong") != std::string::npos);
}

TEST_CASE("predict emits one JSON object in json-lines mode") {
    const auto r = run("--output json-lines predict " + kDeviceDir + "/quarton.dev");
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("{", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
    CHECK(r.out.find("\"chi_hz\"") != std::string::npos);
}

TEST_CASE("parse errors exit with code 2") {
    CHECK(run("predict /nonexistent.dev").exit_code == 2);
    const auto bad = write_temp("qkerr_bad.dev",
                                "platform = squid\nEJ = 1 GHz\nEC = 0.1 GHz\nzz = 1\n");
    const auto r = run("predict " + bad.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("zz") != std::string::npos);
}

TEST_CASE("numerical failures exit with code 3") {
    // eps_inf = 4, omega = omega_p/2 exactly: |eps| = 0 at the lossless pole
    const auto sing = write_temp("qkerr_sing.dev",
                                 "platform = enz\neps_inf = 4\nomega_p = 2e15\n"
                                 "gamma = 0\nchi3_eff = 1e-18\nV_eff = 1e-19\n"
                                 "omega = 1e15\neta_kernel = 1e-8\n");
    const auto r = run("predict " + sing.string());
    CHECK(r.exit_code == 3);
}

TEST_CASE("validate passes on the shipped corpus and exits 0") {
    const auto r = run("validate " + kDeviceDir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("quarton.dev") != std::string::npos);
}

TEST_CASE("validate exits 4 when a row misses its reference") {
    const fs::path dir = fs::temp_directory_path() / "qkerr_baddir";
    fs::create_directories(dir);
    std::ofstream(dir / "off.dev")
        << "platform = squid\nEJ = 9.2 GHz\nEC = 198.4 MHz\n"
        << "measured_chi = 23.5 MHz\nreference_deviation_pct = 9.9\n";
    const auto r = run("validate " + dir.string());
    CHECK(r.exit_code == 4);
    fs::remove_all(dir);
}

TEST_CASE("sweep prints a single CSV header plus data rows") {
    const auto r = run("--output csv sweep " + kDeviceDir +
                       "/snail.dev --param flux --from 0 --to 0.5 --points 11");
    CHECK(r.exit_code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 12);
    CHECK(r.out.find("c4_hz") != std::string::npos);

    const auto single = run("--output csv sweep " + kDeviceDir +
                            "/quarton.dev --param EC --from 0.21e9 --to 0.21e9 --points 7");
    CHECK(single.exit_code == 0);
    CHECK(std::count(single.out.begin(), single.out.end(), '\n') == 2);
}

TEST_CASE("oracle-check exit codes track the acceptance threshold") {
    CHECK(run("oracle-check " + kDeviceDir + "/quarton.dev --lambda 1e-3").exit_code == 0);
    CHECK(run("oracle-check " + kDeviceDir + "/quarton.dev --lambda 1.5").exit_code == 4);
    CHECK(run("oracle-check " + kDeviceDir + "/enz_ito.dev --lambda 1e-3").exit_code == 2);
}
