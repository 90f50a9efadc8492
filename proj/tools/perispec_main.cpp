// perispec: config-driven front end for the peridynamic spectral solver.
//
// Exit codes: 0 success, 2 validation/config error, 3 numerical failure.
// The first stderr line on failure is machine parsable:
//   perispec: error: <VALIDATION|NUMERICAL|IO>: <message>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "perispec/asymptotics.hpp"
#include "perispec/quadrature.hpp"
#include "perispec/solvers.hpp"
#include "perispec/studies.hpp"

namespace {

using nlohmann::json;
using namespace perispec;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
    if (!j.is_object()) throw ConfigError("config: '" + ctx + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok |= key == a;
        if (!ok) throw ConfigError("config: unknown key '" + key + "' in " + ctx);
    }
}

json load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
}

Material material_from_json(const json& j) {
    check_keys(j, {"n", "delta", "beta", "mu", "lambda_star"}, "material");
    for (const char* key : {"n", "delta", "beta", "mu", "lambda_star"})
        if (!j.contains(key))
            throw ConfigError(std::string("config: material missing '") + key + "'");
    return make_material(j.at("n").get<int>(), j.at("delta").get<double>(),
                         j.at("beta").get<double>(), j.at("mu").get<double>(),
                         j.at("lambda_star").get<double>());
}

struct Io {
    std::string output;        // empty means stdout
    std::string format = "csv";
    std::string b, f, g;
};

Io io_from_json(const json& cfg) {
    Io io;
    if (!cfg.contains("io")) return io;
    const json& j = cfg.at("io");
    check_keys(j, {"output", "format", "b", "f", "g"}, "io");
    if (j.contains("output")) io.output = j.at("output").get<std::string>();
    if (j.contains("format")) io.format = j.at("format").get<std::string>();
    if (j.contains("b")) io.b = j.at("b").get<std::string>();
    if (j.contains("f")) io.f = j.at("f").get<std::string>();
    if (j.contains("g")) io.g = j.at("g").get<std::string>();
    if (io.format != "csv" && io.format != "json")
        throw ConfigError("config: format must be 'csv' or 'json'");
    return io;
}

void write_output(const std::string& path, const std::string& bytes) {
    if (path.empty()) {
        std::cout << bytes;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << bytes;
}

std::string render_table(const StudyTable& t, const std::string& format) {
    if (format == "json") return table_to_json(t).dump(2) + "\n";
    return to_csv(t);
}

std::vector<double> parse_k(const std::string& text) {
    std::vector<double> k;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        k.push_back(std::stod(item));
    }
    if (k.empty()) throw ConfigError("config: empty frequency vector");
    return k;
}

// shared state wired into every subcommand
struct Options {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::optional<std::uint64_t> seed;
    // inline material + frequency for the point commands
    std::optional<int> n;
    std::optional<double> delta, beta, mu, lambda_star;
    std::string k_text;
};

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--config", opt.config_path, "JSON run configuration");
    cmd->add_option("--out", opt.out_path, "output path (default stdout)");
    cmd->add_option("--format", opt.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", opt.seed, "override the study seed");
}

void add_point_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--n", opt.n, "spatial dimension");
    cmd->add_option("--delta", opt.delta, "horizon");
    cmd->add_option("--beta", opt.beta, "kernel exponent");
    cmd->add_option("--mu", opt.mu, "Lame mu");
    cmd->add_option("--lambda-star", opt.lambda_star, "Lame lambda*");
    cmd->add_option("--k", opt.k_text, "frequency vector, comma separated");
}

struct PointArgs {
    Material material;
    std::vector<double> nu;
};

PointArgs point_args(const Options& opt, const json* cfg, const char* command) {
    PointArgs out{};
    bool have_material = false;
    if (cfg) {
        check_keys(*cfg, {"command", "material", "problem", "io"}, "config");
        if (cfg->contains("command") && cfg->at("command").get<std::string>() != command)
            throw ConfigError("config: command mismatch");
        if (cfg->contains("material")) {
            out.material = material_from_json(cfg->at("material"));
            have_material = true;
        }
        if (cfg->contains("problem")) {
            check_keys(cfg->at("problem"), {"k"}, "problem");
            if (cfg->at("problem").contains("k"))
                out.nu = cfg->at("problem").at("k").get<std::vector<double>>();
        }
    }
    if (opt.n || opt.delta || opt.beta || opt.mu || opt.lambda_star) {
        if (!(opt.n && opt.delta && opt.beta && opt.mu && opt.lambda_star))
            throw ConfigError("inline material requires --n --delta --beta --mu --lambda-star");
        out.material = make_material(*opt.n, *opt.delta, *opt.beta, *opt.mu, *opt.lambda_star);
        have_material = true;
    }
    if (!opt.k_text.empty()) out.nu = parse_k(opt.k_text);
    if (!have_material) throw ConfigError("config: material required");
    if (out.nu.empty()) throw ConfigError("config: frequency vector 'k' required");
    if (static_cast<int>(out.nu.size()) != out.material.n)
        throw ConfigError("config: frequency vector has wrong dimension");
    return out;
}

OperatorSelector operator_from(const json& problem, const Material& m, int cutoff) {
    std::string kind = "peridynamic";
    if (problem.contains("operator")) kind = problem.at("operator").get<std::string>();
    if (kind == "peridynamic") return OperatorSelector::peridynamic(m, cutoff);
    if (kind == "navier")
        return OperatorSelector::navier(m.n, m.mu, m.lambda_star, cutoff);
    throw ConfigError("config: operator must be 'peridynamic' or 'navier'");
}

nlohmann::ordered_json solution_document(const json& problem_desc, const Material& m,
                                         const std::string& op_kind, double t,
                                         const SpectralField& u) {
    nlohmann::ordered_json doc;
    doc["operator"] = {{"kind", op_kind},
                       {"n", m.n},
                       {"delta", m.delta},
                       {"beta", m.beta},
                       {"mu", m.mu},
                       {"lambda_star", m.lambda_star}};
    doc["problem"] = problem_desc;
    doc["t"] = t;
    doc["field"] = field_to_json(u);
    return doc;
}

int run_point_command(const Options& opt, const char* command) {
    std::optional<json> cfg;
    if (!opt.config_path.empty()) cfg = load_config(opt.config_path);
    PointArgs args = point_args(opt, cfg ? &*cfg : nullptr, command);
    Io io = cfg ? io_from_json(*cfg) : Io{};
    if (!opt.out_path.empty()) io.output = opt.out_path;
    if (!opt.format.empty()) io.format = opt.format;

    nlohmann::ordered_json doc;
    std::string text;
    if (std::string(command) == "eigenvalues") {
        EigenEval e = eigenvalues(args.material, args.nu);
        doc["k"] = args.nu;
        doc["lambda1"] = e.lambda1;
        doc["lambda2"] = e.lambda2;
        doc["via_quadrature"] = e.via_quadrature;
        text = "lambda1 = " + format_float(e.lambda1) + "\n" +
               "lambda2 = " + format_float(e.lambda2) + "\n";
    } else {
        MultiplierEval e = multiplier(args.material, args.nu);
        doc["k"] = args.nu;
        doc["lambda1"] = e.matrix.lambda1;
        doc["lambda2"] = e.matrix.lambda2;
        doc["direction"] = e.matrix.direction;
        doc["dense"] = e.matrix.dense();
        doc["via_quadrature"] = e.via_quadrature;
        text = "lambda1 = " + format_float(e.matrix.lambda1) + "\n" +
               "lambda2 = " + format_float(e.matrix.lambda2) + "\n";
    }
    write_output(io.output, io.format == "json" || !io.output.empty() ? doc.dump(2) + "\n"
                                                                      : text);
    return 0;
}

int run_solve(const Options& opt, const std::string& command) {
    if (opt.config_path.empty()) throw ConfigError("config: --config required");
    json cfg = load_config(opt.config_path);
    check_keys(cfg, {"command", "material", "problem", "io"}, "config");
    if (cfg.contains("command") && cfg.at("command").get<std::string>() != command)
        throw ConfigError("config: command mismatch");
    if (!cfg.contains("material")) throw ConfigError("config: material required");
    Material m = material_from_json(cfg.at("material"));
    json problem = cfg.value("problem", json::object());
    check_keys(problem, {"cutoff", "t", "operator"}, "problem");
    Io io = io_from_json(cfg);
    if (!opt.out_path.empty()) io.output = opt.out_path;

    double t = problem.value("t", 0.0);
    std::string op_kind = problem.value("operator", std::string("peridynamic"));

    auto load_named = [&](const std::string& path, const char* what) {
        if (path.empty())
            throw ConfigError(std::string("config: io.") + what + " required");
        return load_field(path);
    };

    SpectralField u(m.n, 1, true);
    json desc;
    if (command == "solve-equilibrium") {
        SpectralField b = load_named(io.b, "b");
        int cutoff = problem.value("cutoff", b.cutoff());
        OperatorSelector op = operator_from(problem, m, cutoff);
        u = solve_equilibrium(op, b);
        desc = "equilibrium";
    } else if (command == "solve-wave") {
        SpectralField f = load_named(io.f, "f");
        SpectralField g = load_named(io.g, "g");
        int cutoff = problem.value("cutoff", std::max(f.cutoff(), g.cutoff()));
        OperatorSelector op = operator_from(problem, m, cutoff);
        u = evolve_homogeneous(op, f, g, t);
        desc = "homogeneous";
    } else {
        SpectralField b = load_named(io.b, "b");
        int cutoff = problem.value("cutoff", b.cutoff());
        OperatorSelector op = operator_from(problem, m, cutoff);
        u = evolve_forced(op, b, t);
        desc = "forced";
    }
    write_output(io.output, solution_document(desc, m, op_kind, t, u).dump(2) + "\n");
    return 0;
}

int run_asymptotics(const Options& opt) {
    if (opt.config_path.empty()) throw ConfigError("config: --config required");
    json cfg = load_config(opt.config_path);
    check_keys(cfg, {"command", "material", "problem", "io"}, "config");
    if (cfg.contains("command") && cfg.at("command").get<std::string>() != "asymptotics")
        throw ConfigError("config: command mismatch");
    AsymptoticConfig ac;
    ac.material = material_from_json(cfg.at("material"));
    json problem = cfg.value("problem", json::object());
    check_keys(problem, {"radii"}, "problem");
    if (!problem.contains("radii")) throw ConfigError("config: problem.radii required");
    ac.radii = problem.at("radii").get<std::vector<double>>();
    Io io = io_from_json(cfg);
    if (!opt.out_path.empty()) io.output = opt.out_path;
    if (!opt.format.empty()) io.format = opt.format;
    write_output(io.output, render_table(asymptotic_validation(ac), io.format));
    return 0;
}

int run_sweep(const Options& opt) {
    if (opt.config_path.empty()) throw ConfigError("config: --config required");
    json cfg = load_config(opt.config_path);
    check_keys(cfg, {"command", "material", "problem", "io"}, "config");
    if (cfg.contains("command") && cfg.at("command").get<std::string>() != "sweep")
        throw ConfigError("config: command mismatch");
    SweepConfig sc;
    sc.material = material_from_json(cfg.at("material"));
    json problem = cfg.value("problem", json::object());
    check_keys(problem,
               {"target", "sweep", "j_min", "j_max", "cutoff", "t", "s", "s1", "s2",
                "epsilon", "seed", "data_decay"},
               "problem");
    std::string target_s = problem.value("target", std::string("multiplier"));
    std::string kind_s = problem.value("sweep", std::string("delta_to_zero"));
    SweepTarget target;
    if (target_s == "multiplier") target = SweepTarget::multiplier;
    else if (target_s == "equilibrium") target = SweepTarget::equilibrium;
    else if (target_s == "homogeneous") target = SweepTarget::homogeneous;
    else if (target_s == "forced") target = SweepTarget::forced;
    else throw ConfigError("config: unknown sweep target '" + target_s + "'");
    SweepKind kind;
    if (kind_s == "delta_to_zero") kind = SweepKind::delta_to_zero;
    else if (kind_s == "beta_to_np2") kind = SweepKind::beta_to_np2;
    else throw ConfigError("config: unknown sweep kind '" + kind_s + "'");
    sc.j_min = problem.value("j_min", sc.j_min);
    sc.j_max = problem.value("j_max", sc.j_max);
    sc.cutoff = problem.value("cutoff", sc.cutoff);
    sc.t = problem.value("t", sc.t);
    sc.s = problem.value("s", sc.s);
    sc.s1 = problem.value("s1", sc.s1);
    sc.s2 = problem.value("s2", sc.s2);
    sc.epsilon = problem.value("epsilon", sc.epsilon);
    sc.seed = problem.value("seed", sc.seed);
    sc.data_decay = problem.value("data_decay", sc.data_decay);
    if (opt.seed) sc.seed = *opt.seed;
    Io io = io_from_json(cfg);
    if (!opt.out_path.empty()) io.output = opt.out_path;
    if (!opt.format.empty()) io.format = opt.format;
    write_output(io.output, render_table(local_limit_sweep(target, kind, sc), io.format));
    return 0;
}

int run_regularity(const Options& opt) {
    if (opt.config_path.empty()) throw ConfigError("config: --config required");
    json cfg = load_config(opt.config_path);
    check_keys(cfg, {"command", "material", "problem", "io"}, "config");
    if (cfg.contains("command") && cfg.at("command").get<std::string>() != "regularity")
        throw ConfigError("config: command mismatch");
    RegularityConfig rc;
    rc.material = material_from_json(cfg.at("material"));
    json problem = cfg.value("problem", json::object());
    check_keys(problem, {"problem", "cutoff", "s_input", "seed", "t_samples", "t_min", "t_max"},
               "problem");
    std::string kind_s = problem.value("problem", std::string("equilibrium"));
    ProblemKind kind;
    if (kind_s == "equilibrium") kind = ProblemKind::equilibrium;
    else if (kind_s == "homogeneous") kind = ProblemKind::homogeneous;
    else if (kind_s == "forced") kind = ProblemKind::forced;
    else throw ConfigError("config: unknown problem '" + kind_s + "'");
    rc.cutoff = problem.value("cutoff", rc.cutoff);
    rc.s_input = problem.value("s_input", rc.s_input);
    rc.seed = problem.value("seed", rc.seed);
    rc.t_samples = problem.value("t_samples", rc.t_samples);
    rc.t_min = problem.value("t_min", rc.t_min);
    rc.t_max = problem.value("t_max", rc.t_max);
    if (opt.seed) rc.seed = *opt.seed;
    Io io = io_from_json(cfg);
    if (!opt.out_path.empty()) io.output = opt.out_path;
    if (!opt.format.empty()) io.format = opt.format;
    write_output(io.output, render_table(regularity_study(kind, rc), io.format));
    return 0;
}

int run_temporal(const Options& opt) {
    if (opt.config_path.empty()) throw ConfigError("config: --config required");
    json cfg = load_config(opt.config_path);
    check_keys(cfg, {"command", "material", "problem", "io"}, "config");
    if (cfg.contains("command") && cfg.at("command").get<std::string>() != "temporal-check")
        throw ConfigError("config: command mismatch");
    TemporalConfig tc;
    tc.material = material_from_json(cfg.at("material"));
    json problem = cfg.value("problem", json::object());
    check_keys(problem, {"problem", "cutoff", "t", "h_values", "seed", "data_decay", "data_scale"},
               "problem");
    std::string kind_s = problem.value("problem", std::string("homogeneous"));
    ProblemKind kind;
    if (kind_s == "homogeneous") kind = ProblemKind::homogeneous;
    else if (kind_s == "forced") kind = ProblemKind::forced;
    else throw ConfigError("config: temporal check needs an evolution problem");
    tc.cutoff = problem.value("cutoff", tc.cutoff);
    tc.t = problem.value("t", tc.t);
    if (problem.contains("h_values"))
        tc.h_values = problem.at("h_values").get<std::vector<double>>();
    tc.seed = problem.value("seed", tc.seed);
    tc.data_decay = problem.value("data_decay", tc.data_decay);
    tc.data_scale = problem.value("data_scale", tc.data_scale);
    if (opt.seed) tc.seed = *opt.seed;
    Io io = io_from_json(cfg);
    if (!opt.out_path.empty()) io.output = opt.out_path;
    if (!opt.format.empty()) io.format = opt.format;
    write_output(io.output, render_table(temporal_consistency_check(kind, tc), io.format));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"peridynamic spectral solver and validation suite"};
    app.require_subcommand(1);

    Options opt;
    CLI::App* c_mult = app.add_subcommand("multiplier", "evaluate the multiplier matrix");
    CLI::App* c_eig = app.add_subcommand("eigenvalues", "evaluate lambda1, lambda2");
    CLI::App* c_seq = app.add_subcommand("solve-equilibrium", "solve L u = b");
    CLI::App* c_wav = app.add_subcommand("solve-wave", "evolve the initial-value problem");
    CLI::App* c_for = app.add_subcommand("solve-forced", "evolve the forced problem");
    CLI::App* c_asy = app.add_subcommand("asymptotics", "asymptotic validation table");
    CLI::App* c_swp = app.add_subcommand("sweep", "nonlocal-to-local limit sweep");
    CLI::App* c_reg = app.add_subcommand("regularity", "regularity exponent study");
    CLI::App* c_tmp = app.add_subcommand("temporal-check", "finite-difference consistency");
    for (CLI::App* c : {c_mult, c_eig, c_seq, c_wav, c_for, c_asy, c_swp, c_reg, c_tmp})
        add_common(c, opt);
    add_point_options(c_mult, opt);
    add_point_options(c_eig, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "perispec: error: VALIDATION: " << e.what() << "\n";
        return 2;
    }

    try {
        if (c_mult->parsed()) return run_point_command(opt, "multiplier");
        if (c_eig->parsed()) return run_point_command(opt, "eigenvalues");
        if (c_seq->parsed()) return run_solve(opt, "solve-equilibrium");
        if (c_wav->parsed()) return run_solve(opt, "solve-wave");
        if (c_for->parsed()) return run_solve(opt, "solve-forced");
        if (c_asy->parsed()) return run_asymptotics(opt);
        if (c_swp->parsed()) return run_sweep(opt);
        if (c_reg->parsed()) return run_regularity(opt);
        if (c_tmp->parsed()) return run_temporal(opt);
    } catch (const ValidationError& e) {
        std::cerr << "perispec: error: VALIDATION: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "perispec: error: NUMERICAL: " << e.what() << "\n";
        return 3;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "perispec: error: VALIDATION: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "perispec: error: IO: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
