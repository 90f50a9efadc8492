#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "perispec/material.hpp"

namespace perispec {

// Real symmetric multiplier matrix stored through its eigenstructure:
// lambda1 on the line spanned by nu, lambda2 (multiplicity n-1) on the
// orthogonal complement.  Dense assembly is a view:
//   M = lambda1 * P + lambda2 * (I - P),  P = nu nu^T / |nu|^2.
// At nu = 0 the matrix is identically zero and the direction is undefined.
struct MultiplierMatrix {
    int dim = 1;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::vector<double> direction;  // unit vector; empty when undefined (nu = 0)

    bool has_direction() const { return !direction.empty(); }

    std::vector<double> dense() const;
    std::vector<std::complex<double>> apply(std::span<const std::complex<double>> v) const;
    double determinant() const;  // of the dense matrix
    double op_norm() const { return std::max(std::abs(lambda1), std::abs(lambda2)); }
};

struct MultiplierCoefficients {
    double alpha_b1 = 0.0;
    double alpha_b2 = 0.0;
    double alpha_s = 0.0;
};

struct EigenPair {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

// c^{delta,beta} = 2 (n+2-beta) Gamma(n/2+1) / (pi^{n/2} delta^{n+2-beta})
double scaling_constant(const Material& m);

// Hypergeometric coefficient triple (alpha_b1, alpha_b2, alpha_s).
// Throws PrecisionLoss when any series is flagged by the cancellation guard.
MultiplierCoefficients multiplier_coefficients(const Material& m, std::span<const double> nu);

// M(nu) = alpha_b1 I + (alpha_b2 + alpha_s) nu nu^T, i.e.
// lambda1 = alpha_b1 + (alpha_b2 + alpha_s)|nu|^2, lambda2 = alpha_b1.
MultiplierMatrix multiplier_matrix(const Material& m, std::span<const double> nu);

// Both eigenvalues through the hypergeometric forms.  lambda1 is evaluated
// twice (coefficient route and the 3F4 + 1F2^2 route) and the two values
// must agree to 1e-10 relative, else ConsistencyError.
EigenPair eigenvalues_exact(const Material& m, std::span<const double> nu);

// Navier multiplier M^N(nu) = -(lambda_star + mu) nu nu^T - mu |nu|^2 I,
// so lambda1 = -(lambda_star + 2 mu)|nu|^2 and lambda2 = -mu |nu|^2.
MultiplierMatrix navier_reference(const Material& m, std::span<const double> nu);
MultiplierMatrix navier_reference(double mu, double lambda_star, std::span<const double> nu);

// f(M) = f(lambda1) P + f(lambda2)(I - P).  A matrix without direction
// (nu = 0) is rejected unless allow_zero_mode, in which case f(0) I is
// returned.  f must be finite at both eigenvalues.
MultiplierMatrix matrix_function(const MultiplierMatrix& M,
                                 const std::function<double(double)>& f,
                                 bool allow_zero_mode = false);

struct NegativityReport {
    bool pass = true;
    int cutoff = 0;
    std::vector<std::vector<int>> offenders;  // lattice points with a nonnegative eigenvalue
};

// Checks lambda1(k) < 0 and lambda2(k) < 0 over 0 < |k|_inf <= K.
NegativityReport validate_negativity(const Material& m, int K);

// Evaluation with the documented fallback: the hypergeometric path is used
// when healthy, otherwise the quadrature oracle, recorded in the flag.
struct EigenEval {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    bool via_quadrature = false;
};
EigenEval eigenvalues(const Material& m, std::span<const double> nu);

struct MultiplierEval {
    MultiplierMatrix matrix;
    bool via_quadrature = false;
};
MultiplierEval multiplier(const Material& m, std::span<const double> nu);

namespace detail {
double vec_norm(std::span<const double> v);
}

}  // namespace perispec
