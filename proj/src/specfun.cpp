#include "perispec/specfun.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>

namespace perispec {

namespace {

constexpr int kTermCap = 20000;
constexpr double kStopTol = 1e-16;
constexpr double kCancellationGuard = 1e12;
constexpr double kOverflowGuard = 1e250;

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

}  // namespace

SeriesResult pfq(std::span<const double> numer, std::span<const double> denom, double z) {
    if (numer.size() > denom.size())
        throw InvalidParameter("pfq: requires p <= q");
    for (double b : denom) {
        if (is_nonpositive_integer(b))
            throw InvalidParameter("pfq: denominator parameter is zero or a negative integer");
    }

    SeriesResult res;
    if (z == 0.0) {
        res.value = 1.0;
        res.terms_used = 1;
        res.converged = true;
        res.max_term_magnitude = 1.0;
        return res;
    }

    // Forward recurrence on the terms with compensated accumulation.
    double term = 1.0;
    double sum = 1.0, comp = 0.0;
    double max_term = 1.0;
    int quiet = 0;
    int m = 0;
    for (m = 0; m + 2 < kTermCap; ++m) {
        double ratio = z / (m + 1.0);
        for (double a : numer) ratio *= a + m;
        for (double b : denom) ratio /= b + m;
        term *= ratio;

        double at = std::fabs(term);
        if (at > kOverflowGuard || !std::isfinite(term))
            throw NonConvergence("pfq: series terms overflow double range");
        if (at > max_term) max_term = at;

        // Kahan update
        double y = term - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;

        if (at <= kStopTol * std::fabs(sum) + 1e-300) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    if (quiet < 3)
        throw NonConvergence("pfq: stopping rule not met within the term cap");

    res.value = sum;
    res.terms_used = m + 2;  // the m = 0 term plus the recurred ones
    res.max_term_magnitude = std::max(max_term, std::fabs(sum));
    if (max_term > kCancellationGuard * std::fabs(sum)) {
        res.converged = false;
        res.diagnostic = SeriesDiagnostic::loss_of_precision;
    } else {
        res.converged = true;
    }
    return res;
}

// Lanczos approximation, g = 7, 9 coefficients (Godfrey's set).
double gamma_fn(double x) {
    static const double g = 7.0;
    static const double coeff[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };

    if (is_nonpositive_integer(x))
        throw PoleError("gamma_fn: pole at nonpositive integer");

    if (x < 0.5) {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
    }
    double xx = x - 1.0;
    double a = coeff[0];
    for (int i = 1; i < 9; ++i) a += coeff[i] / (xx + i);
    double t = xx + g + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, xx + 0.5) * std::exp(-t) * a;
}

double digamma(double x) {
    if (x <= 0.0) {
        if (x == std::floor(x))
            throw PoleError("digamma: pole at nonpositive integer");
        throw DomainError("digamma: requires x > 0");
    }
    // psi(x) = psi(x + 1) - 1/x until x >= 10, then the asymptotic series.
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    // Bernoulli-number tail: B2..B14 terms suffice to ~1e-16 for x >= 10.
    double inv = 1.0 / x, inv2 = inv * inv;
    double series = inv2 * (1.0 / 12.0 + inv2 * (-1.0 / 120.0 + inv2 * (1.0 / 252.0
                  + inv2 * (-1.0 / 240.0 + inv2 * (1.0 / 132.0
                  + inv2 * (-691.0 / 32760.0 + inv2 * (1.0 / 12.0)))))));
    return acc + std::log(x) - 0.5 * inv - series;
}

double euler_gamma() {
    return std::numbers::egamma;
}

namespace detail {

double cos_minus_one(double x) {
    double s = std::sin(0.5 * x);
    return -2.0 * s * s;
}

double sin_minus_x(double x) {
    double ax = std::fabs(x);
    if (ax > 0.5) return std::sin(x) - x;
    // sin x - x = -x^3/6 (1 - x^2/20 (1 - x^2/42 (1 - x^2/72 (1 - x^2/110))))
    double x2 = x * x;
    return -x * x2 / 6.0 *
           (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0))));
}

}  // namespace detail

}  // namespace perispec
