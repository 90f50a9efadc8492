#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "perispec/multipliers.hpp"
#include "perispec/studies.hpp"

using namespace perispec;

namespace {

const std::vector<double>& column(const StudyTable& t, const std::string& name) {
    for (const auto& [n, col] : t.metrics)
        if (n == name) return col;
    REQUIRE(false);
    static std::vector<double> empty;
    return empty;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

}  // namespace

TEST_CASE("multiplier delta sweep converges to the local symbol") {
    SweepConfig cfg;
    cfg.material = make_material(1, 1.0, 1.0, 1.0, 1.0);
    cfg.j_min = 0;
    cfg.j_max = 6;
    cfg.cutoff = 1;
    StudyTable t = local_limit_sweep(SweepTarget::multiplier, SweepKind::delta_to_zero, cfg);
    const auto& err = column(t, "error");
    CHECK(strictly_decreasing(err));
    CHECK(err.back() / err.front() < 1e-2);
    for (double e : err) {
        CHECK(std::isfinite(e));
        CHECK(e > 0.0);
    }
}

TEST_CASE("equilibrium delta sweep matches the per-mode hand computation") {
    SweepConfig cfg;
    cfg.material = make_material(1, 1.0, 1.5, 1.0, 2.0);
    cfg.j_min = 1;
    cfg.j_max = 4;
    cfg.cutoff = 1;
    cfg.s = 1.0;
    StudyTable t = local_limit_sweep(SweepTarget::equilibrium, SweepKind::delta_to_zero, cfg);

    // single-frequency data: the error per delta is a scalar inverse difference
    SpectralField b = make_random_field(1, 1, cfg.seed, cfg.data_decay);
    const auto* bk = b.mode({1});
    REQUIRE(bk != nullptr);
    double q = cfg.s + std::max(0.0, cfg.material.beta - 1.0);
    const auto& err = column(t, "error");
    for (int j = cfg.j_min; j <= cfg.j_max; ++j) {
        Material m = cfg.material;
        m.delta = std::pow(2.0, -j);
        std::vector<double> nu{1.0};
        double l1 = eigenvalues_exact(m, nu).lambda1;
        double l1N = -(m.lambda_star + 2.0 * m.mu);
        double per_mode = std::abs((*bk)[0]) * std::fabs(1.0 / l1 - 1.0 / l1N);
        double want = std::sqrt(2.0 * std::pow(2.0, q) * per_mode * per_mode);
        CHECK(err[static_cast<size_t>(j - cfg.j_min)] ==
              doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("forced beta sweep error decreases") {
    SweepConfig cfg;
    cfg.material = make_material(1, 1.0, 1.5, 1.0, 2.0);
    cfg.j_min = 3;
    cfg.j_max = 8;
    cfg.cutoff = 8;
    cfg.t = 1.0;
    cfg.epsilon = 0.5;
    StudyTable t = local_limit_sweep(SweepTarget::forced, SweepKind::beta_to_np2, cfg);
    const auto& err = column(t, "error");
    CHECK(strictly_decreasing(err));
}

TEST_CASE("sweep tables re-run bit-identically from their metadata") {
    SweepConfig cfg;
    cfg.material = make_material(1, 1.0, 1.5, 1.0, 2.0);
    cfg.j_min = 2;
    cfg.j_max = 5;
    cfg.cutoff = 4;
    StudyTable t = local_limit_sweep(SweepTarget::homogeneous, SweepKind::delta_to_zero, cfg);
    SweepConfig back = sweep_config_from_metadata(t);
    StudyTable t2 = local_limit_sweep(SweepTarget::homogeneous, SweepKind::delta_to_zero, back);
    CHECK(to_csv(t) == to_csv(t2));
}

TEST_CASE("every study re-runs bit-identically from its metadata") {
    AsymptoticConfig ac;
    ac.material = make_material(1, 1.0, 0.0, 1.0, 2.0);
    ac.radii = {30.0, 60.0};
    StudyTable ta = asymptotic_validation(ac);
    CHECK(to_csv(asymptotic_validation(asymptotic_config_from_metadata(ta))) == to_csv(ta));

    RegularityConfig rc;
    rc.material = make_material(1, 1.0, 2.0, 1.0, 2.0);
    rc.cutoff = 32;
    StudyTable tr = regularity_study(ProblemKind::equilibrium, rc);
    CHECK(to_csv(regularity_study(ProblemKind::equilibrium,
                                  regularity_config_from_metadata(tr))) == to_csv(tr));

    TemporalConfig tc;
    tc.material = make_material(1, 1.0, 1.5, 1.0, 2.0);
    tc.cutoff = 4;
    tc.h_values = {1e-2, 5e-3};
    StudyTable tt = temporal_consistency_check(ProblemKind::forced, tc);
    CHECK(to_csv(temporal_consistency_check(ProblemKind::forced,
                                            temporal_config_from_metadata(tt))) == to_csv(tt));
}

TEST_CASE("asymptotic validation table") {
    AsymptoticConfig cfg;
    cfg.material = make_material(1, 1.0, 0.0, 1.0, 1.0);
    cfg.radii = {50.0, 100.0, 200.0, 500.0};
    StudyTable t = asymptotic_validation(cfg);

    // lambda2 column approaches -18 + 9 pi / r
    const auto& l2q = column(t, "lambda2_quad");
    for (size_t i = 0; i < cfg.radii.size(); ++i) {
        double want = -18.0 + 9.0 * std::numbers::pi / cfg.radii[i];
        CHECK(std::fabs(l2q[i] - want) < 0.01 * std::fabs(want));
    }
    CHECK(std::fabs(l2q.back() - (-18.0 + 9.0 * std::numbers::pi / 500.0)) <
          0.002 * 18.0);

    // two-term expansion error decreases along the radius grid
    CHECK(strictly_decreasing(column(t, "lambda2_rel_err")));

    // lambda* = mu: the lambda1 and lambda11 columns coincide
    AsymptoticConfig eq;
    eq.material = make_material(1, 1.0, 0.5, 1.0, 1.0);
    eq.radii = {40.0, 80.0};
    StudyTable te = asymptotic_validation(eq);
    const auto& sum = column(te, "lambda1_as_sum");
    const auto& l11 = column(te, "lambda11_asym");
    for (size_t i = 0; i < sum.size(); ++i)
        CHECK(sum[i] == doctest::Approx(l11[i]).epsilon(1e-14));
}

TEST_CASE("log-branch remainder is bounded by 1/r^2") {
    AsymptoticConfig cfg;
    cfg.material = make_material(1, 1.0, 1.0, 1.0, 1.0);
    cfg.radii = {50.0, 100.0, 200.0};
    StudyTable t = asymptotic_validation(cfg);
    const auto& quad = column(t, "lambda2_quad");
    const auto& asym = column(t, "lambda2_asym");
    for (size_t i = 0; i < cfg.radii.size(); ++i) {
        double diff = std::fabs(quad[i] - asym[i]);
        CHECK(diff * cfg.radii[i] * cfg.radii[i] < 50.0);
    }
}

TEST_CASE("equilibrium regularity study finds the smoothing gain") {
    RegularityConfig cfg;
    cfg.material = make_material(1, 1.0, 2.0, 1.0, 2.0);
    cfg.cutoff = 128;
    cfg.s_input = 1.0;
    StudyTable t = regularity_study(ProblemKind::equilibrium, cfg);
    const auto& gap = column(t, "gap");
    CHECK(std::fabs(gap[0]) < 0.15);  // input channel fit matches its own law
    CHECK(std::fabs(gap[1]) < 0.15);  // solution gains beta - n

    // no gain for bounded multipliers
    RegularityConfig flat = cfg;
    flat.material = make_material(1, 1.0, 0.0, 1.0, 2.0);
    StudyTable tf = regularity_study(ProblemKind::equilibrium, flat);
    const auto& fitted = column(tf, "fitted_exponent");
    CHECK(std::fabs(fitted[1] - fitted[0]) < 0.15);
}

TEST_CASE("evolution regularity studies see the predicted gains") {
    // forced problem gains beta - n in space
    RegularityConfig cfg;
    cfg.material = make_material(1, 1.0, 2.0, 1.0, 2.0);
    cfg.cutoff = 128;
    cfg.s_input = 1.0;
    StudyTable t = regularity_study(ProblemKind::forced, cfg);
    CHECK(std::fabs(column(t, "gap")[1]) < 0.15);

    // wave velocity channel gains (beta - n)/2
    RegularityConfig wave = cfg;
    wave.material = make_material(1, 1.0, 2.5, 1.0, 2.0);
    StudyTable tw = regularity_study(ProblemKind::homogeneous, wave);
    const auto& fitted = column(tw, "fitted_exponent");
    CHECK(fitted[0] - fitted[1] == doctest::Approx(0.75).epsilon(0.2));
}

TEST_CASE("temporal consistency: second-order residual decay") {
    TemporalConfig cfg;
    cfg.material = make_material(1, 1.0, 1.5, 1.0, 2.0);
    cfg.cutoff = 8;
    cfg.t = 1.0;
    cfg.h_values = {1e-2, 5e-3, 2.5e-3};
    StudyTable t = temporal_consistency_check(ProblemKind::homogeneous, cfg);
    const auto& res = column(t, "residual");
    CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.13));
    CHECK(res[1] / res[2] == doctest::Approx(4.0).epsilon(0.13));

    // forced at t = 0: the discrete second derivative reproduces b
    TemporalConfig f0 = cfg;
    f0.t = 0.0;
    f0.h_values = {1e-3, 5e-4};
    StudyTable tf = temporal_consistency_check(ProblemKind::forced, f0);
    CHECK(column(tf, "residual")[0] < 1e-6);

    // zero data: the residual is exactly zero
    TemporalConfig quiet = cfg;
    quiet.data_scale = 0.0;
    StudyTable tq = temporal_consistency_check(ProblemKind::homogeneous, quiet);
    for (double r : column(tq, "residual")) CHECK(r == 0.0);

    CHECK_THROWS_AS(temporal_consistency_check(ProblemKind::equilibrium, cfg),
                    WrongProblemKind);
}

TEST_CASE("study csv emission format") {
    StudyTable t;
    t.study_kind = "demo";
    t.parameter_name = "x";
    t.parameter = {1.0, 2.0};
    t.metrics.emplace_back("value", std::vector<double>{1.0 / 3.0, 0.5});
    t.add_meta("note", "minimal");
    std::string csv = to_csv(t);

    // exactly one metadata block, one header, two data lines
    CHECK(csv == "# study_kind=demo\n# note=minimal\nx,value\n1,0.33333333333333331\n2,0.5\n");

    // json round trip is byte-identical
    StudyTable back = table_from_json(nlohmann::ordered_json::parse(table_to_json(t).dump()));
    CHECK(to_csv(back) == csv);
    CHECK(table_to_json(back).dump(2) == table_to_json(t).dump(2));

    // 17-significant-digit rendering pins the shortest round trip
    CHECK(format_float(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_float(0.5) == "0.5");

    StudyTable short_table;
    short_table.study_kind = "bad";
    short_table.parameter_name = "x";
    short_table.parameter = {1.0};
    CHECK_THROWS_AS(to_csv(short_table), ValidationError);
}
