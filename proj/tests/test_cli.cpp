#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "perispec/fields.hpp"
#include "perispec/multipliers.hpp"
#include "perispec/solvers.hpp"
#include "perispec/table.hpp"

using namespace perispec;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    const char* bin = std::getenv("PERISPEC_BIN");
    REQUIRE(bin != nullptr);
    fs::path tmp = fs::temp_directory_path();
    fs::path out = tmp / "perispec_cli_out.txt";
    fs::path err = tmp / "perispec_cli_err.txt";
    std::string cmd = std::string(bin) + " " + args + " > " + out.string() + " 2> " +
                      err.string();
    int status = std::system(cmd.c_str());
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
    };
    int code = -1;
    if (WIFEXITED(status)) code = WEXITSTATUS(status);
    return {code, slurp(out), slurp(err)};
}

fs::path write_tmp(const std::string& name, const std::string& content) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    return p;
}

}  // namespace

TEST_CASE("eigenvalues command matches the library") {
    RunResult r = run_cli("eigenvalues --n 1 --delta 1 --beta 1 --mu 1 --lambda-star 1 --k 1");
    CHECK(r.exit_code == 0);
    Material m = make_material(1, 1.0, 1.0, 1.0, 1.0);
    std::vector<double> nu{1.0};
    EigenPair e = eigenvalues_exact(m, nu);
    CHECK(r.out.find("lambda1 = " + format_float(e.lambda1)) != std::string::npos);
    CHECK(r.out.find("lambda2 = " + format_float(e.lambda2)) != std::string::npos);
}

TEST_CASE("material validation failures exit with code 2") {
    fs::path cfg = write_tmp("bad_beta.json", R"({
      "command": "eigenvalues",
      "material": {"n": 1, "delta": 1.0, "beta": 3.0, "mu": 1.0, "lambda_star": 1.0},
      "problem": {"k": [1]}
    })");
    RunResult r = run_cli("eigenvalues --config " + cfg.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("beta < n+2") != std::string::npos);
    CHECK(r.err.rfind("perispec: error: VALIDATION:", 0) == 0);
}

TEST_CASE("unknown config keys are rejected") {
    fs::path cfg = write_tmp("unknown_key.json", R"({
      "command": "eigenvalues",
      "material": {"n": 1, "delta": 1.0, "beta": 1.0, "mu": 1.0, "lambda_star": 1.0},
      "problem": {"k": [1], "typo_field": 3}
    })");
    RunResult r = run_cli("eigenvalues --config " + cfg.string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("typo_field") != std::string::npos);

    RunResult missing = run_cli("sweep --config /nonexistent/path.json");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("sweep runs are byte-identical") {
    fs::path cfg = write_tmp("sweep.json", R"({
      "command": "sweep",
      "material": {"n": 1, "delta": 1.0, "beta": 1.5, "mu": 1.0, "lambda_star": 2.0},
      "problem": {"target": "equilibrium", "sweep": "delta_to_zero",
                  "j_min": 1, "j_max": 4, "cutoff": 4, "s": 1.0, "seed": 4660}
    })");
    RunResult a = run_cli("sweep --config " + cfg.string());
    RunResult b = run_cli("sweep --config " + cfg.string());
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("# study_kind=local_limit_sweep_equilibrium\n") != std::string::npos);
}

TEST_CASE("equilibrium solve through field files") {
    SpectralField b = make_random_field(1, 4, 1234);
    fs::path bpath = fs::temp_directory_path() / "cli_b.json";
    save_field(b, bpath.string());
    fs::path upath = fs::temp_directory_path() / "cli_u.json";
    fs::path cfg = write_tmp("solve.json", std::string(R"({
      "command": "solve-equilibrium",
      "material": {"n": 1, "delta": 1.0, "beta": 1.0, "mu": 1.0, "lambda_star": 1.0},
      "problem": {"cutoff": 4},
      "io": {"b": ")") + bpath.string() + R"(", "output": ")" + upath.string() + R"("}
    })");
    RunResult r = run_cli("solve-equilibrium --config " + cfg.string());
    CHECK(r.exit_code == 0);

    std::ifstream in(upath);
    nlohmann::json doc = nlohmann::json::parse(in);
    CHECK(doc.at("problem") == "equilibrium");
    SpectralField u = field_from_json(doc.at("field"));

    OperatorSelector op = OperatorSelector::peridynamic(make_material(1, 1, 1, 1, 1), 4);
    SpectralField want = solve_equilibrium(op, b);
    for (const auto& [k, v] : want.modes()) {
        const auto* w = u.mode(k);
        REQUIRE(w != nullptr);
        for (size_t i = 0; i < v.size(); ++i) CHECK(v[i] == (*w)[i]);
    }
}

TEST_CASE("remaining subcommands run end to end") {
    RunResult mult = run_cli("multiplier --n 2 --delta 1 --beta 1.5 --mu 1 --lambda-star 2 --k 1,0");
    CHECK(mult.exit_code == 0);
    CHECK(mult.out.find("lambda1 = ") != std::string::npos);

    SpectralField b = make_random_field(1, 4, 555);
    fs::path bpath = fs::temp_directory_path() / "cli_forced_b.json";
    save_field(b, bpath.string());
    fs::path upath = fs::temp_directory_path() / "cli_forced_u.json";
    fs::path fcfg = write_tmp("forced.json", std::string(R"({
      "command": "solve-forced",
      "material": {"n": 1, "delta": 1.0, "beta": 1.0, "mu": 1.0, "lambda_star": 1.0},
      "problem": {"cutoff": 4, "t": 1.5},
      "io": {"b": ")") + bpath.string() + R"(", "output": ")" + upath.string() + R"("}
    })");
    CHECK(run_cli("solve-forced --config " + fcfg.string()).exit_code == 0);
    std::ifstream in(upath);
    nlohmann::json doc = nlohmann::json::parse(in);
    CHECK(doc.at("problem") == "forced");
    CHECK(doc.at("t") == 1.5);

    fs::path wcfg = write_tmp("wave.json", std::string(R"({
      "command": "solve-wave",
      "material": {"n": 1, "delta": 1.0, "beta": 1.0, "mu": 1.0, "lambda_star": 1.0},
      "problem": {"cutoff": 4, "t": 0.5},
      "io": {"f": ")") + bpath.string() + R"(", "g": ")" + bpath.string() + R"("}
    })");
    RunResult wave = run_cli("solve-wave --config " + wcfg.string());
    CHECK(wave.exit_code == 0);
    CHECK(wave.out.find("\"problem\": \"homogeneous\"") != std::string::npos);

    fs::path tcfg = write_tmp("temporal.json", R"({
      "command": "temporal-check",
      "material": {"n": 1, "delta": 1.0, "beta": 1.5, "mu": 1.0, "lambda_star": 2.0},
      "problem": {"problem": "homogeneous", "cutoff": 4, "t": 1.0,
                  "h_values": [0.01, 0.005]}
    })");
    RunResult temporal = run_cli("temporal-check --config " + tcfg.string());
    CHECK(temporal.exit_code == 0);
    CHECK(temporal.out.find("h,residual") != std::string::npos);

    fs::path rcfg = write_tmp("regularity.json", R"({
      "command": "regularity",
      "material": {"n": 1, "delta": 1.0, "beta": 2.0, "mu": 1.0, "lambda_star": 2.0},
      "problem": {"problem": "equilibrium", "cutoff": 32, "s_input": 1.0}
    })");
    RunResult reg = run_cli("regularity --config " + rcfg.string() + " --format json");
    CHECK(reg.exit_code == 0);
    CHECK(reg.out.find("\"study_kind\": \"regularity_equilibrium\"") != std::string::npos);
}

TEST_CASE("numerical failures exit with code 3") {
    // frequency beyond every evaluation path: precision loss with no fallback
    fs::path cfg = write_tmp("envelope.json", R"({
      "command": "eigenvalues",
      "material": {"n": 1, "delta": 1.0, "beta": 1.0, "mu": 1.0, "lambda_star": 1.0},
      "problem": {"k": [2000]}
    })");
    RunResult r = run_cli("eigenvalues --config " + cfg.string());
    CHECK(r.exit_code == 3);
    CHECK(r.err.rfind("perispec: error: NUMERICAL:", 0) == 0);

    fs::path ok = write_tmp("asym.json", R"({
      "command": "asymptotics",
      "material": {"n": 1, "delta": 1.0, "beta": 0.0, "mu": 1.0, "lambda_star": 1.0},
      "problem": {"radii": [50.0, 100.0]}
    })");
    RunResult a = run_cli("asymptotics --config " + ok.string());
    CHECK(a.exit_code == 0);
    CHECK(a.out.find("lambda2_rel_err") != std::string::npos);
}
