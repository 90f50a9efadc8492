#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "perispec/asymptotics.hpp"
#include "perispec/quadrature.hpp"
#include "perispec/solvers.hpp"
#include "perispec/studies.hpp"

namespace py = pybind11;
using namespace perispec;

namespace {

py::dict table_as_dict(const StudyTable& t) {
    py::dict d;
    d["study_kind"] = t.study_kind;
    py::dict meta;
    for (const auto& [k, v] : t.metadata) meta[py::str(k)] = v;
    d["metadata"] = meta;
    d["parameter_name"] = t.parameter_name;
    d["parameter"] = t.parameter;
    py::dict cols;
    for (const auto& [name, col] : t.metrics) cols[py::str(name)] = col;
    d["metrics"] = cols;
    d["csv"] = to_csv(t);
    return d;
}

SweepTarget target_from(const std::string& s) {
    if (s == "multiplier") return SweepTarget::multiplier;
    if (s == "equilibrium") return SweepTarget::equilibrium;
    if (s == "homogeneous") return SweepTarget::homogeneous;
    if (s == "forced") return SweepTarget::forced;
    throw InvalidParameter("unknown sweep target '" + s + "'");
}

ProblemKind problem_from(const std::string& s) {
    if (s == "equilibrium") return ProblemKind::equilibrium;
    if (s == "homogeneous") return ProblemKind::homogeneous;
    if (s == "forced") return ProblemKind::forced;
    throw InvalidParameter("unknown problem kind '" + s + "'");
}

}  // namespace

PYBIND11_MODULE(_perispec, m) {
    m.doc() = "spectral solver for the linear state-based peridynamic operator on the torus";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<Material>(m, "Material")
        .def(py::init([](int n, double delta, double beta, double mu, double lambda_star) {
                 return make_material(n, delta, beta, mu, lambda_star);
             }),
             py::arg("n"), py::arg("delta"), py::arg("beta"), py::arg("mu"),
             py::arg("lambda_star"))
        .def_readonly("n", &Material::n)
        .def_readonly("delta", &Material::delta)
        .def_readonly("beta", &Material::beta)
        .def_readonly("mu", &Material::mu)
        .def_readonly("lambda_star", &Material::lambda_star)
        .def("__repr__", [](const Material& mt) {
            return "Material(n=" + std::to_string(mt.n) + ", delta=" + std::to_string(mt.delta) +
                   ", beta=" + std::to_string(mt.beta) + ", mu=" + std::to_string(mt.mu) +
                   ", lambda_star=" + std::to_string(mt.lambda_star) + ")";
        });

    m.def("scaling_constant", &scaling_constant);
    m.def(
        "eigenvalues",
        [](const Material& mt, const std::vector<double>& nu) {
            EigenEval e = eigenvalues(mt, nu);
            return py::make_tuple(e.lambda1, e.lambda2, e.via_quadrature);
        },
        py::arg("material"), py::arg("nu"),
        "Returns (lambda1, lambda2, via_quadrature) with automatic fallback.");
    m.def("eigenvalues_exact", [](const Material& mt, const std::vector<double>& nu) {
        EigenPair e = eigenvalues_exact(mt, nu);
        return py::make_tuple(e.lambda1, e.lambda2);
    });
    m.def("eigenvalues_quadrature", [](const Material& mt, const std::vector<double>& nu) {
        EigenPair e = eigenvalues_quadrature(mt, nu);
        return py::make_tuple(e.lambda1, e.lambda2);
    });
    m.def("multiplier_dense", [](const Material& mt, const std::vector<double>& nu) {
        MultiplierMatrix M = multiplier_matrix(mt, nu);
        std::vector<std::vector<double>> rows(static_cast<size_t>(M.dim));
        auto d = M.dense();
        for (int i = 0; i < M.dim; ++i)
            rows[static_cast<size_t>(i)] = {d.begin() + i * M.dim, d.begin() + (i + 1) * M.dim};
        return rows;
    });
    m.def("navier_dense", [](const Material& mt, const std::vector<double>& nu) {
        MultiplierMatrix M = navier_reference(mt, nu);
        std::vector<std::vector<double>> rows(static_cast<size_t>(M.dim));
        auto d = M.dense();
        for (int i = 0; i < M.dim; ++i)
            rows[static_cast<size_t>(i)] = {d.begin() + i * M.dim, d.begin() + (i + 1) * M.dim};
        return rows;
    });
    m.def("validate_negativity", [](const Material& mt, int K) {
        NegativityReport r = validate_negativity(mt, K);
        return py::make_tuple(r.pass, r.offenders);
    });
    m.def("growth_class", [](const Material& mt) {
        GrowthInfo g = growth_class(mt);
        switch (g.cls) {
            case GrowthClass::bounded: return py::make_tuple("bounded", 0.0);
            case GrowthClass::logarithmic: return py::make_tuple("logarithmic", 0.0);
            default: return py::make_tuple("power", g.exponent);
        }
    });
    m.def("lambda2_asymptotic",
          [](const Material& mt, double r) { return lambda2_asymptotic(mt, r).value; });
    m.def("lambda1_asymptotic_combined", [](const Material& mt, double r) {
        Lambda1Combined c = lambda1_asymptotic_combined(mt, r);
        return py::make_tuple(c.as_stated.value, c.as_sum.value);
    });

    py::class_<SpectralField>(m, "SpectralField")
        .def(py::init<int, int, bool>(), py::arg("n"), py::arg("cutoff"),
             py::arg("real_flag") = true)
        .def_property_readonly("n", &SpectralField::dim)
        .def_property_readonly("cutoff", &SpectralField::cutoff)
        .def_property_readonly("real_flag", &SpectralField::is_real)
        .def("set_mode", &SpectralField::set_mode)
        .def("mode",
             [](const SpectralField& f, const std::vector<int>& k)
                 -> std::optional<std::vector<std::complex<double>>> {
                 const auto* v = f.mode(k);
                 if (!v) return std::nullopt;
                 return *v;
             })
        .def("modes",
             [](const SpectralField& f) {
                 py::list out;
                 for (const auto& [k, v] : f.modes()) out.append(py::make_tuple(k, v));
                 return out;
             })
        .def("check_invariants", &SpectralField::check_invariants)
        .def("to_json", [](const SpectralField& f) { return field_to_json(f).dump(2); });

    m.def("field_from_json", [](const std::string& text) {
        return field_from_json(nlohmann::json::parse(text));
    });
    m.def("sobolev_norm", &sobolev_norm, py::arg("field"), py::arg("q"));
    m.def("synthesize", [](const SpectralField& f, const std::vector<double>& x) {
        return synthesize(f, x);
    });
    m.def("make_decay_field", &make_decay_field, py::arg("n"), py::arg("K"), py::arg("s"),
          py::arg("seed"));
    m.def("make_random_field", &make_random_field, py::arg("n"), py::arg("K"), py::arg("seed"),
          py::arg("decay") = 0.0);
    m.def("decay_exponent_fit", &decay_exponent_fit);

    py::class_<OperatorSelector>(m, "Operator")
        .def_static("peridynamic", &OperatorSelector::peridynamic, py::arg("material"),
                    py::arg("cutoff"))
        .def_static("navier", &OperatorSelector::navier, py::arg("n"), py::arg("mu"),
                    py::arg("lambda_star"), py::arg("cutoff"))
        .def_property_readonly("is_navier", &OperatorSelector::is_navier)
        .def_property_readonly("cutoff", &OperatorSelector::cutoff);

    m.def("apply_operator", &apply_operator);
    m.def("solve_equilibrium", &solve_equilibrium);
    m.def("evolve_homogeneous", &evolve_homogeneous, py::arg("op"), py::arg("f"), py::arg("g"),
          py::arg("t"));
    m.def("evolve_forced", &evolve_forced, py::arg("op"), py::arg("b"), py::arg("t"));

    py::class_<TimeSolution>(m, "TimeSolution")
        .def_static("homogeneous", &TimeSolution::homogeneous, py::keep_alive<0, 1>())
        .def_static("forced", &TimeSolution::forced, py::keep_alive<0, 1>())
        .def("at", &TimeSolution::at)
        .def("derivative", &TimeSolution::derivative, py::arg("t"), py::arg("p"))
        .def("energy", &TimeSolution::energy);

    m.def(
        "predicted_regularity",
        [](const OperatorSelector& op, const std::string& kind, py::kwargs kw) {
            RegularityIndices idx;
            if (kw.contains("s")) idx.s = kw["s"].cast<double>();
            if (kw.contains("s1")) idx.s1 = kw["s1"].cast<double>();
            if (kw.contains("s2")) idx.s2 = kw["s2"].cast<double>();
            if (kw.contains("S")) idx.S = kw["S"].cast<double>();
            if (kw.contains("q")) idx.q = kw["q"].cast<double>();
            RegularityPrediction p = predicted_regularity(op, problem_from(kind), idx);
            py::dict d;
            d["spatial_index"] = p.spatial_index;
            d["gateaux_smooth"] = p.gateaux_smooth;
            d["gateaux_class"] =
                p.gateaux_class ? py::object(py::int_(*p.gateaux_class)) : py::none();
            d["classical_smooth"] = p.classical_smooth;
            d["classical_class"] =
                p.classical_class ? py::object(py::int_(*p.classical_class)) : py::none();
            return d;
        },
        py::arg("op"), py::arg("kind"));

    m.def(
        "local_limit_sweep",
        [](const std::string& target, const std::string& kind, const Material& mt, int j_min,
           int j_max, int cutoff, double t, double s, double s1, double s2, double epsilon,
           std::uint64_t seed, double data_decay) {
            SweepConfig c{mt, j_min, j_max, cutoff, t, s, s1, s2, epsilon, seed, data_decay};
            SweepKind k = kind == "delta_to_zero" ? SweepKind::delta_to_zero
                                                  : SweepKind::beta_to_np2;
            return table_as_dict(local_limit_sweep(target_from(target), k, c));
        },
        py::arg("target"), py::arg("kind"), py::arg("material"), py::arg("j_min") = 0,
        py::arg("j_max") = 6, py::arg("cutoff") = 16, py::arg("t") = 1.0, py::arg("s") = 1.0,
        py::arg("s1") = 1.0, py::arg("s2") = 1.0, py::arg("epsilon") = 0.5,
        py::arg("seed") = 0x5eed, py::arg("data_decay") = 1.0);

    m.def(
        "asymptotic_validation",
        [](const Material& mt, const std::vector<double>& radii) {
            return table_as_dict(asymptotic_validation({mt, radii}));
        },
        py::arg("material"), py::arg("radii"));

    m.def(
        "regularity_study",
        [](const std::string& kind, const Material& mt, int cutoff, double s_input,
           std::uint64_t seed) {
            RegularityConfig c;
            c.material = mt;
            c.cutoff = cutoff;
            c.s_input = s_input;
            c.seed = seed;
            return table_as_dict(regularity_study(problem_from(kind), c));
        },
        py::arg("kind"), py::arg("material"), py::arg("cutoff") = 256,
        py::arg("s_input") = 1.0, py::arg("seed") = 0x5eed);

    m.def(
        "temporal_consistency_check",
        [](const std::string& kind, const Material& mt, int cutoff, double t,
           const std::vector<double>& h_values, std::uint64_t seed) {
            TemporalConfig c;
            c.material = mt;
            c.cutoff = cutoff;
            c.t = t;
            c.h_values = h_values;
            c.seed = seed;
            return table_as_dict(temporal_consistency_check(problem_from(kind), c));
        },
        py::arg("kind"), py::arg("material"), py::arg("cutoff") = 16, py::arg("t") = 1.0,
        py::arg("h_values") = std::vector<double>{1e-2, 5e-3, 2.5e-3},
        py::arg("seed") = 0x5eed);
}
