#pragma once

#include <span>

#include "perispec/multipliers.hpp"

namespace perispec {

// Absolute error target is target_scale * max(1, |value|); adaptive
// refinement beyond panel_budget Gauss-Kronrod evaluations fails.
struct QuadratureControl {
    double target_scale = 1e-10;
    int panel_budget = 60000;
};

struct EigenQuadParts {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double bond_parallel = 0.0;  // first term of the lambda1 integral
    double state_term = 0.0;     // -(lambda_star - mu) I_s^2
};

// Eigenvalues from the integral representations, reduced to (radius, polar
// angle) with the sin^{n-2} surface weight.  Oracle envelope: n <= 3 and
// |nu| delta <= 500.
EigenQuadParts eigenvalues_quadrature_parts(const Material& m, std::span<const double> nu,
                                            const QuadratureControl& ctrl = {});
EigenPair eigenvalues_quadrature(const Material& m, std::span<const double> nu,
                                 const QuadratureControl& ctrl = {});

// Full matrix from the M_b / M_s integral forms: the parallel and
// perpendicular bond profiles plus the outer product of sine integrals.
MultiplierMatrix multiplier_quadrature(const Material& m, std::span<const double> nu,
                                       const QuadratureControl& ctrl = {});

}  // namespace perispec
