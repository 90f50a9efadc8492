#pragma once

#include <string>
#include <utility>
#include <vector>

#include "perispec/material.hpp"

namespace perispec {

enum class AsymptoticBranch { beta_ne_n, beta_eq_n };

// A large-|nu| expansion value together with its labelled components
// (constant, power, log).  The components sum exactly to value.
struct AsymptoticValue {
    double value = 0.0;
    AsymptoticBranch branch = AsymptoticBranch::beta_ne_n;
    std::vector<std::pair<std::string, double>> terms;
    bool degenerate_coefficient = false;  // a Gamma pole zeroed a coefficient
};

// lambda2(r) for large r:
//   beta != n:  -mu 2(n+2-beta)(n+2)/(delta^2 (n-beta))
//               - mu G((n+4)/2) G((n+4-beta)/2) / (((beta-n)/2) G((beta+2)/2))
//                 (2/delta)^{n+2-beta} r^{beta-n}
//   beta == n:  -(2 mu/delta^2)(n+2) [2 log r + log(delta^2/4)
//                                      + euler_gamma - digamma((n+2)/2)]
AsymptoticValue lambda2_asymptotic(const Material& m, double r);

struct Lambda1Components {
    AsymptoticValue lambda11;
    AsymptoticValue lambda12;
};

// lambda11 carries the bond part (its beta != n power coefficient has the
// extra (n-beta-1)/(n-beta) factor, its log branch the "+2" shift);
// lambda12 is the pure power -(lambda*-mu)[...]^2 (2/delta)^{2(n+2-beta)}
// r^{2(beta-n-1)}, zero by the reciprocal-gamma convention when
// Gamma(beta/2) has a pole.
Lambda1Components lambda1_component_asymptotics(const Material& m, double r);

struct Lambda1Combined {
    AsymptoticValue as_stated;  // verbatim combined theorem (constant factor 1)
    AsymptoticValue as_sum;     // lambda11 + lambda12 (constant factor 2)
};

// The two printings of the combined lambda1 expansion differ by a factor
// of 2 on the constant term; both are returned so studies can report
// which one tracks the quadrature reference.
Lambda1Combined lambda1_asymptotic_combined(const Material& m, double r);

enum class GrowthClass { bounded, logarithmic, power };

struct GrowthInfo {
    GrowthClass cls = GrowthClass::bounded;
    double exponent = 0.0;  // beta - n for the power class, 0 otherwise
};

GrowthInfo growth_class(const Material& m);

}  // namespace perispec
