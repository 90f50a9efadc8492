#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "perispec/fields.hpp"

using namespace perispec;
using cd = std::complex<double>;

TEST_CASE("sobolev norm on hand-built fields") {
    SpectralField f(2, 4, false);
    f.set_mode({1, 0}, {cd(0.6, 0.0), cd(0.0, 0.8)});  // unit-norm coefficient
    CHECK(sobolev_norm(f, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

    SpectralField zero(2, 4, false);
    for (double q : {-2.0, 0.0, 3.0}) CHECK(sobolev_norm(zero, q) == 0.0);

    // two modes, q = -1: hand-summed total
    SpectralField two(1, 4, false);
    two.set_mode({1}, {cd(2.0, 0.0)});
    two.set_mode({3}, {cd(0.0, 1.0)});
    double want = std::sqrt(4.0 / 2.0 + 1.0 / 10.0);
    CHECK(sobolev_norm(two, -1.0) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("sobolev norm is monotone in the index") {
    SpectralField f = make_decay_field(1, 32, 1.0, 99);
    double prev = 0.0;
    for (double q : {-1.0, 0.0, 0.5, 1.0}) {
        double v = sobolev_norm(f, q);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("pointwise synthesis") {
    // constant field
    SpectralField c(2, 2, true);
    c.set_mode({0, 0}, {cd(2.0, 0.0), cd(-1.0, 0.0)});
    std::vector<double> x{1.1, 2.2};
    auto v = synthesize(c, x);
    CHECK(v[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(v[1] == doctest::Approx(-1.0).epsilon(1e-15));

    // Hermitian pair gives v cos(k.x)
    SpectralField h(1, 2, true);
    h.set_mode({1}, {cd(0.5, 0.0)});
    h.set_mode({-1}, {cd(0.5, 0.0)});
    for (double xx : {0.0, 0.7, 2.9}) {
        std::vector<double> p{xx};
        CHECK(synthesize(h, p)[0] == doctest::Approx(std::cos(xx)).epsilon(1e-14));
    }

    // value at x = 0 is the coefficient sum
    SpectralField r = make_random_field(1, 5, 7);
    std::vector<double> origin{0.0};
    cd sum = 0.0;
    for (const auto& [k, vv] : r.modes()) sum += vv[0];
    CHECK(synthesize(r, origin)[0] == doctest::Approx(sum.real()).epsilon(1e-13));
}

TEST_CASE("grid transform round trips") {
    SpectralField one(1, 3, true);
    one.set_mode({2}, {cd(0.3, 0.4)});
    one.set_mode({-2}, {cd(0.3, -0.4)});
    SpectralField back = inverse_grid_transform(grid_transform(one), one.cutoff());
    const auto* v = back.mode({2});
    REQUIRE(v != nullptr);
    CHECK((*v)[0].real() == doctest::Approx(0.3).epsilon(1e-13));
    CHECK((*v)[0].imag() == doctest::Approx(0.4).epsilon(1e-13));

    SpectralField f = make_random_field(2, 3, 11);
    SpectralField g = inverse_grid_transform(grid_transform(f), f.cutoff());
    for (const auto& [k, vv] : f.modes()) {
        const auto* w = g.mode(k);
        REQUIRE(w != nullptr);
        for (size_t i = 0; i < vv.size(); ++i) {
            CHECK(std::abs(vv[i] - (*w)[i]) < 1e-12);
        }
    }

    CHECK_THROWS_AS(grid_transform(f, 2 * f.cutoff() + 1), AliasError);
}

TEST_CASE("grid round trip for a complex (non-Hermitian) field") {
    SpectralField f(2, 3, false);
    f.set_mode({1, 2}, {cd(0.3, -0.7), cd(1.1, 0.2)});
    f.set_mode({-2, 0}, {cd(0.0, 0.9), cd(-0.4, 0.0)});
    SpectralField g = inverse_grid_transform(grid_transform(f, 12), 3, false);
    for (const auto& [k, v] : f.modes()) {
        const auto* w = g.mode(k);
        REQUIRE(w != nullptr);
        for (size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v[i] - (*w)[i]) < 1e-13);
    }
}

TEST_CASE("Parseval at q = 0 against the grid mean") {
    SpectralField f = make_random_field(2, 6, 5);
    GridSamples g = grid_transform(f);
    double mean = 0.0;
    size_t points = g.values.size() / static_cast<size_t>(g.n);
    for (size_t p = 0; p < points; ++p) {
        for (int c = 0; c < g.n; ++c)
            mean += std::norm(g.values[p * static_cast<size_t>(g.n) + static_cast<size_t>(c)]);
    }
    mean /= static_cast<double>(points);
    double norm0 = sobolev_norm(f, 0.0);
    CHECK(norm0 * norm0 == doctest::Approx(mean).epsilon(1e-10));
}

TEST_CASE("decay field construction") {
    SpectralField a = make_decay_field(1, 16, 1.0, 42);
    SpectralField b = make_decay_field(1, 16, 1.0, 42);
    for (const auto& [k, v] : a.modes()) {
        const auto* w = b.mode(k);
        REQUIRE(w != nullptr);
        for (size_t i = 0; i < v.size(); ++i) CHECK(v[i] == (*w)[i]);
    }
    a.check_invariants();

    // H^s norm stabilizes with K, H^{s+2} norm diverges
    double n1 = sobolev_norm(make_decay_field(1, 64, 1.0, 1), 1.0);
    double n2 = sobolev_norm(make_decay_field(1, 128, 1.0, 1), 1.0);
    CHECK(std::fabs(n2 / n1 - 1.0) < 0.05);
    double d1 = sobolev_norm(make_decay_field(1, 16, 1.0, 1), 3.0);
    double d2 = sobolev_norm(make_decay_field(1, 64, 1.0, 1), 3.0);
    CHECK(d2 / d1 > 1.5);

    // exact magnitude law
    const auto* v = a.mode({5});
    REQUIRE(v != nullptr);
    double mag = std::abs((*v)[0]);
    CHECK(mag == doctest::Approx(std::pow(5.0, -(1.0 + 0.5 + 0.51))).epsilon(1e-13));
}

TEST_CASE("decay exponent fit") {
    // imposed exact power law: slope recovered to machine precision
    SpectralField p(1, 64, false);
    for (int k = 1; k <= 64; ++k) {
        p.set_mode({k}, {cd(std::pow(k, -3.0), 0.0)});
        p.set_mode({-k}, {cd(std::pow(k, -3.0), 0.0)});
    }
    CHECK(decay_exponent_fit(p) == doctest::Approx(-3.0).epsilon(1e-6));

    SpectralField d = make_decay_field(1, 256, 2.0, 1234);
    CHECK(decay_exponent_fit(d) == doctest::Approx(-(2.0 + 0.5 + 0.51)).epsilon(0.034));

    SpectralField single(1, 64, false);
    single.set_mode({3}, {cd(1.0, 0.0)});
    CHECK_THROWS_AS(decay_exponent_fit(single), InsufficientData);
}

TEST_CASE("field json round trip and validation") {
    SpectralField f = make_random_field(2, 3, 17, 1.0);
    SpectralField g = field_from_json(nlohmann::json::parse(field_to_json(f).dump()));
    CHECK(g.dim() == f.dim());
    CHECK(g.cutoff() == f.cutoff());
    CHECK(g.is_real() == f.is_real());
    for (const auto& [k, v] : f.modes()) {
        const auto* w = g.mode(k);
        REQUIRE(w != nullptr);
        for (size_t i = 0; i < v.size(); ++i) CHECK(v[i] == (*w)[i]);
    }

    // loader rejects a cutoff violation
    nlohmann::json bad = nlohmann::json::parse(R"({
      "n": 1, "K": 2, "real_flag": false,
      "entries": [{"k": [5], "re": [1.0], "im": [0.0]}]
    })");
    CHECK_THROWS_AS(field_from_json(bad), ValidationError);

    // loader rejects a Hermitian violation on a real-flagged field
    nlohmann::json herm = nlohmann::json::parse(R"({
      "n": 1, "K": 2, "real_flag": true,
      "entries": [{"k": [1], "re": [1.0], "im": [0.5]},
                   {"k": [-1], "re": [1.0], "im": [0.5]}]
    })");
    CHECK_THROWS_AS(field_from_json(herm), ValidationError);

    // loader rejects unknown keys
    nlohmann::json unk = nlohmann::json::parse(R"({
      "n": 1, "K": 2, "real_flag": false, "extra": 1, "entries": []
    })");
    CHECK_THROWS_AS(field_from_json(unk), ValidationError);
}

TEST_CASE("mode bookkeeping") {
    SpectralField f(2, 3, false);
    CHECK_THROWS_AS(f.set_mode({4, 0}, {cd(1.0, 0.0), cd(0.0, 0.0)}), InvalidParameter);
    CHECK_THROWS_AS(f.set_mode({1, 0}, {cd(1.0, 0.0)}), InvalidParameter);
    CHECK_THROWS_AS(f.set_mode({1}, {cd(1.0, 0.0), cd(0.0, 0.0)}), InvalidParameter);
    CHECK(f.mode({1, 1}) == nullptr);
}
