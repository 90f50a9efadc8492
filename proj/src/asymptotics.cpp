#include "perispec/asymptotics.hpp"

#include <cmath>

#include "perispec/specfun.hpp"

namespace perispec {

namespace {

double sum_terms(const std::vector<std::pair<std::string, double>>& terms) {
    double s = 0.0;
    for (const auto& [label, v] : terms) s += v;
    return s;
}

// 1/Gamma(x), zero at the poles.
double reciprocal_gamma(double x, bool* degenerate) {
    if (x <= 0.0 && x == std::floor(x)) {
        if (degenerate) *degenerate = true;
        return 0.0;
    }
    return 1.0 / gamma_fn(x);
}

// Shared log-branch body: -(2 mu/delta^2)(n+2)[2 log r + log(delta^2/4)
//                                              + gamma - psi((n+2)/2) + shift]
AsymptoticValue log_branch(const Material& m, double r, double shift) {
    AsymptoticValue out;
    out.branch = AsymptoticBranch::beta_eq_n;
    double pref = -2.0 * m.mu / (m.delta * m.delta) * (m.n + 2.0);
    out.terms.emplace_back("log", pref * 2.0 * std::log(r));
    out.terms.emplace_back("constant",
                           pref * (std::log(0.25 * m.delta * m.delta) + euler_gamma() -
                                   digamma(0.5 * (m.n + 2.0)) + shift));
    out.value = sum_terms(out.terms);
    return out;
}

// beta != n branch with a selectable power-coefficient factor.
AsymptoticValue power_branch(const Material& m, double r, double constant_factor,
                             double power_factor) {
    AsymptoticValue out;
    out.branch = AsymptoticBranch::beta_ne_n;
    double nmb = m.n - m.beta;
    out.terms.emplace_back("constant", -m.mu * constant_factor * (m.n + 2.0 - m.beta) *
                                           (m.n + 2.0) / (m.delta * m.delta * nmb));
    double coeff = -m.mu * power_factor * gamma_fn(0.5 * (m.n + 4.0)) *
                   gamma_fn(0.5 * (m.n + 4.0 - m.beta)) / gamma_fn(0.5 * (m.beta + 2.0)) *
                   std::pow(2.0 / m.delta, m.n + 2.0 - m.beta);
    out.terms.emplace_back("power", coeff * std::pow(r, m.beta - m.n));
    out.value = sum_terms(out.terms);
    return out;
}

AsymptoticValue lambda12_term(const Material& m, double r) {
    AsymptoticValue out;
    out.branch = m.beta == static_cast<double>(m.n) ? AsymptoticBranch::beta_eq_n
                                                    : AsymptoticBranch::beta_ne_n;
    bool degenerate = false;
    double rg = reciprocal_gamma(0.5 * m.beta, &degenerate);
    double bracket =
        gamma_fn(0.5 * (m.n + 2.0)) * gamma_fn(0.5 * (m.n + 4.0 - m.beta)) * rg;
    double coeff = -(m.lambda_star - m.mu) * bracket * bracket *
                   std::pow(2.0 / m.delta, 2.0 * (m.n + 2.0 - m.beta));
    out.terms.emplace_back("power", coeff * std::pow(r, 2.0 * (m.beta - m.n - 1.0)));
    out.degenerate_coefficient = degenerate;
    out.value = sum_terms(out.terms);
    return out;
}

}  // namespace

AsymptoticValue lambda2_asymptotic(const Material& m, double r) {
    m.validate();
    if (!(r > 0.0)) throw InvalidParameter("lambda2_asymptotic: r must be > 0");
    if (m.beta == static_cast<double>(m.n)) return log_branch(m, r, 0.0);
    // power coefficient carries 1/((beta-n)/2) = 2/(beta-n)
    return power_branch(m, r, 2.0, 2.0 / (m.beta - m.n));
}

Lambda1Components lambda1_component_asymptotics(const Material& m, double r) {
    m.validate();
    if (!(r > 0.0)) throw InvalidParameter("lambda1_component_asymptotics: r must be > 0");
    Lambda1Components out;
    if (m.beta == static_cast<double>(m.n)) {
        out.lambda11 = log_branch(m, r, 2.0);
    } else {
        out.lambda11 =
            power_branch(m, r, 2.0, 2.0 * (m.n - m.beta - 1.0) / (m.n - m.beta));
    }
    out.lambda12 = lambda12_term(m, r);
    return out;
}

Lambda1Combined lambda1_asymptotic_combined(const Material& m, double r) {
    Lambda1Components parts = lambda1_component_asymptotics(m, r);
    Lambda1Combined out;

    // as printed: lambda12 power term plus the bond branch with the
    // constant at factor 1 instead of lambda11's factor 2
    AsymptoticValue bond =
        m.beta == static_cast<double>(m.n)
            ? log_branch(m, r, 2.0)
            : power_branch(m, r, 1.0, 2.0 * (m.n - m.beta - 1.0) / (m.n - m.beta));
    out.as_stated.branch = bond.branch;
    out.as_stated.degenerate_coefficient = parts.lambda12.degenerate_coefficient;
    out.as_stated.terms = parts.lambda12.terms;
    for (const auto& t : bond.terms) out.as_stated.terms.push_back(t);
    out.as_stated.value = 0.0;
    for (const auto& [label, v] : out.as_stated.terms) out.as_stated.value += v;

    out.as_sum.branch = parts.lambda11.branch;
    out.as_sum.degenerate_coefficient = parts.lambda12.degenerate_coefficient;
    out.as_sum.terms = parts.lambda12.terms;
    for (const auto& t : parts.lambda11.terms) out.as_sum.terms.push_back(t);
    out.as_sum.value = 0.0;
    for (const auto& [label, v] : out.as_sum.terms) out.as_sum.value += v;
    return out;
}

GrowthInfo growth_class(const Material& m) {
    m.validate();
    if (m.beta < m.n) return {GrowthClass::bounded, 0.0};
    if (m.beta == static_cast<double>(m.n)) return {GrowthClass::logarithmic, 0.0};
    return {GrowthClass::power, m.beta - m.n};
}

}  // namespace perispec
