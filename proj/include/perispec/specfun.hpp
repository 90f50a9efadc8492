#pragma once

#include <span>
#include <vector>

#include "perispec/errors.hpp"

namespace perispec {

enum class SeriesDiagnostic {
    ok,
    loss_of_precision,  // cancellation guard tripped; value unreliable
};

// Outcome of a pFq series evaluation, with enough diagnostics for callers
// to decide whether to trust the value or re-derive it by quadrature.
struct SeriesResult {
    double value = 0.0;
    int terms_used = 0;
    bool converged = false;
    // max over m of |term_m|, clamped from below by |value|; the ratio
    // max_term_magnitude/|value| measures how much cancellation occurred.
    double max_term_magnitude = 0.0;
    SeriesDiagnostic diagnostic = SeriesDiagnostic::ok;
};

// Generalized hypergeometric series
//   pFq(a; b; z) = sum_m  prod_i (a_i)_m / prod_j (b_j)_m * z^m / m!
// restricted to p <= q, so the series converges for every real z.
//
// Stopping rule: three consecutive terms below 1e-16 of the partial sum;
// hard cap 20000 terms (NonConvergence beyond it).  When the largest term
// exceeds 1e12 times the result the value is returned flagged
// (converged = false, loss_of_precision) instead of silently.
SeriesResult pfq(std::span<const double> numer, std::span<const double> denom, double z);

// Gamma function for real x, x not a nonpositive integer.  Lanczos
// approximation with reflection for x < 1/2; at least 12 significant
// digits on (0, 50].
double gamma_fn(double x);

// Digamma psi(x) for x > 0 (recurrence into the asymptotic regime).
// Nonpositive integers raise PoleError, other x <= 0 raise DomainError.
double digamma(double x);

// Euler's constant.
double euler_gamma();

namespace detail {
// cos(x) - 1 and sin(x) - x evaluated without cancellation near x = 0.
double cos_minus_one(double x);
double sin_minus_x(double x);
}  // namespace detail

}  // namespace perispec
