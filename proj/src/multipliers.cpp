#include "perispec/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "perispec/quadrature.hpp"
#include "perispec/specfun.hpp"

namespace perispec {

namespace detail {

double vec_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace detail

std::vector<double> MultiplierMatrix::dense() const {
    std::vector<double> out(static_cast<size_t>(dim) * dim, 0.0);
    if (!has_direction()) return out;  // nu = 0: identically zero
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            double p = direction[i] * direction[j];
            out[static_cast<size_t>(i) * dim + j] =
                lambda1 * p + lambda2 * ((i == j ? 1.0 : 0.0) - p);
        }
    }
    return out;
}

std::vector<std::complex<double>> MultiplierMatrix::apply(
    std::span<const std::complex<double>> v) const {
    std::vector<std::complex<double>> out(v.size(), 0.0);
    if (!has_direction()) return out;
    std::complex<double> along = 0.0;
    for (int i = 0; i < dim; ++i) along += direction[i] * v[i];
    for (int i = 0; i < dim; ++i)
        out[i] = lambda2 * v[i] + (lambda1 - lambda2) * along * direction[i];
    return out;
}

double MultiplierMatrix::determinant() const {
    if (!has_direction()) return 0.0;
    double d = lambda1;
    for (int i = 1; i < dim; ++i) d *= lambda2;
    return d;
}

double scaling_constant(const Material& m) {
    m.validate();
    return 2.0 * (m.n + 2.0 - m.beta) * gamma_fn(m.n / 2.0 + 1.0) /
           (std::pow(std::numbers::pi, m.n / 2.0) * std::pow(m.delta, m.n + 2.0 - m.beta));
}

namespace {

double pfq_checked(std::initializer_list<double> a, std::initializer_list<double> b, double z) {
    SeriesResult r = pfq(std::span<const double>(a.begin(), a.size()),
                         std::span<const double>(b.begin(), b.size()), z);
    if (!r.converged)
        throw PrecisionLoss("pfq cancellation guard tripped; use the quadrature path");
    return r.value;
}

MultiplierMatrix assemble(int dim, double lambda1, double lambda2,
                          std::span<const double> nu, double rho) {
    MultiplierMatrix M;
    M.dim = dim;
    M.lambda1 = lambda1;
    M.lambda2 = lambda2;
    if (rho > 0.0) {
        M.direction.assign(nu.begin(), nu.end());
        for (double& x : M.direction) x /= rho;
    }
    return M;
}

}  // namespace

MultiplierCoefficients multiplier_coefficients(const Material& m, std::span<const double> nu) {
    m.validate();
    double rho = detail::vec_norm(nu);
    double z = -0.25 * rho * rho * m.delta * m.delta;
    double a = 0.5 * (m.n + 2.0 - m.beta);
    double b_half = 0.5 * (m.n + 2.0);
    double b_full = 0.5 * (m.n + 4.0);
    double c = 0.5 * (m.n + 4.0 - m.beta);

    MultiplierCoefficients out;
    out.alpha_b1 = -m.mu * rho * rho * pfq_checked({1.0, a}, {2.0, b_full, c}, z);
    out.alpha_b2 = -2.0 * m.mu * pfq_checked({a}, {b_full, c}, z);
    double f12 = pfq_checked({a}, {b_half, c}, z);
    out.alpha_s = -(m.lambda_star - m.mu) * f12 * f12;
    return out;
}

MultiplierMatrix multiplier_matrix(const Material& m, std::span<const double> nu) {
    double rho = detail::vec_norm(nu);
    if (rho == 0.0) return assemble(m.n, 0.0, 0.0, nu, 0.0);
    MultiplierCoefficients co = multiplier_coefficients(m, nu);
    double lambda1 = co.alpha_b1 + (co.alpha_b2 + co.alpha_s) * rho * rho;
    return assemble(m.n, lambda1, co.alpha_b1, nu, rho);
}

EigenPair eigenvalues_exact(const Material& m, std::span<const double> nu) {
    m.validate();
    double rho = detail::vec_norm(nu);
    if (rho == 0.0) return {0.0, 0.0};

    MultiplierCoefficients co = multiplier_coefficients(m, nu);
    double lambda1 = co.alpha_b1 + (co.alpha_b2 + co.alpha_s) * rho * rho;

    // second route for lambda1: the printed 3F4 + 1F2^2 form
    double z = -0.25 * rho * rho * m.delta * m.delta;
    double a = 0.5 * (m.n + 2.0 - m.beta);
    double f34 = pfq_checked({1.0, 2.5, a},
                             {2.0, 1.5, 0.5 * (m.n + 4.0), 0.5 * (m.n + 4.0 - m.beta)}, z);
    double f12 = pfq_checked({a}, {0.5 * (m.n + 2.0), 0.5 * (m.n + 4.0 - m.beta)}, z);
    double lambda1_alt =
        -rho * rho * (3.0 * m.mu * f34 + (m.lambda_star - m.mu) * f12 * f12);

    double scale = std::max({std::fabs(lambda1), std::fabs(lambda1_alt),
                             1e-13 * m.mu * (1.0 + rho * rho)});
    if (std::fabs(lambda1 - lambda1_alt) > 1e-10 * scale)
        throw ConsistencyError("eigenvalues_exact: the two lambda1 forms disagree");

    return {lambda1, co.alpha_b1};
}

MultiplierMatrix navier_reference(double mu, double lambda_star, std::span<const double> nu) {
    double rho = detail::vec_norm(nu);
    int dim = static_cast<int>(nu.size());
    if (rho == 0.0) return assemble(dim, 0.0, 0.0, nu, 0.0);
    double r2 = rho * rho;
    return assemble(dim, -(lambda_star + 2.0 * mu) * r2, -mu * r2, nu, rho);
}

MultiplierMatrix navier_reference(const Material& m, std::span<const double> nu) {
    return navier_reference(m.mu, m.lambda_star, nu);
}

MultiplierMatrix matrix_function(const MultiplierMatrix& M,
                                 const std::function<double(double)>& f,
                                 bool allow_zero_mode) {
    if (!M.has_direction()) {
        if (!allow_zero_mode)
            throw DomainError("matrix_function: direction undefined at nu = 0");
        MultiplierMatrix out;
        out.dim = M.dim;
        double v = f(0.0);
        if (!std::isfinite(v)) throw DomainError("matrix_function: f undefined at 0");
        out.lambda1 = out.lambda2 = v;
        out.direction.assign(static_cast<size_t>(M.dim), 0.0);
        out.direction[0] = 1.0;  // f(0) I: any orthonormal frame works
        return out;
    }
    MultiplierMatrix out = M;
    out.lambda1 = f(M.lambda1);
    out.lambda2 = f(M.lambda2);
    if (!std::isfinite(out.lambda1) || !std::isfinite(out.lambda2))
        throw DomainError("matrix_function: f undefined at an eigenvalue");
    return out;
}

EigenEval eigenvalues(const Material& m, std::span<const double> nu) {
    try {
        EigenPair e = eigenvalues_exact(m, nu);
        return {e.lambda1, e.lambda2, false};
    } catch (const PrecisionLoss&) {
    } catch (const ConsistencyError&) {
    }
    try {
        EigenPair e = eigenvalues_quadrature(m, nu);
        return {e.lambda1, e.lambda2, true};
    } catch (const DomainError& e) {
        throw PrecisionLoss(std::string("hypergeometric path lost precision and no "
                                        "quadrature fallback applies: ") +
                            e.what());
    }
}

MultiplierEval multiplier(const Material& m, std::span<const double> nu) {
    try {
        return {multiplier_matrix(m, nu), false};
    } catch (const PrecisionLoss&) {
    } catch (const ConsistencyError&) {
    }
    try {
        return {multiplier_quadrature(m, nu), true};
    } catch (const DomainError& e) {
        throw PrecisionLoss(std::string("hypergeometric path lost precision and no "
                                        "quadrature fallback applies: ") +
                            e.what());
    }
}

NegativityReport validate_negativity(const Material& m, int K) {
    m.validate();
    if (K < 1) throw InvalidParameter("validate_negativity: K must be >= 1");

    NegativityReport report;
    report.cutoff = K;

    // lambda1, lambda2 depend on k only through |k|; evaluate per distinct norm.
    std::map<long long, EigenEval> by_norm2;
    std::vector<int> k(static_cast<size_t>(m.n), -K);
    while (true) {
        long long n2 = 0;
        for (int ki : k) n2 += static_cast<long long>(ki) * ki;
        if (n2 > 0) {
            auto it = by_norm2.find(n2);
            if (it == by_norm2.end()) {
                double rho = std::sqrt(static_cast<double>(n2));
                std::vector<double> rep(static_cast<size_t>(m.n), 0.0);
                rep[0] = rho;
                it = by_norm2.emplace(n2, eigenvalues(m, rep)).first;
            }
            if (!(it->second.lambda1 < 0.0) || !(it->second.lambda2 < 0.0)) {
                report.pass = false;
                report.offenders.push_back(k);
            }
        }
        int axis = m.n - 1;
        while (axis >= 0 && ++k[static_cast<size_t>(axis)] > K) {
            k[static_cast<size_t>(axis)] = -K;
            --axis;
        }
        if (axis < 0) break;
    }
    return report;
}

}  // namespace perispec
