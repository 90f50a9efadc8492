#include "perispec/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "perispec/specfun.hpp"

namespace perispec {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct PanelEstimate {
    double value = 0.0;
    double error = 0.0;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    double hl = 0.5 * (b - a);
    double c = 0.5 * (a + b);
    double fc = f(c);
    double res_g = fc * kWg[3];
    double res_k = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        double x = hl * kXgk[j];
        double fsum = f(c - x) + f(c + x);
        res_k += kWgk[j] * fsum;
        if (j % 2 == 1) res_g += kWg[j / 2] * fsum;
    }
    return {res_k * hl, std::fabs((res_k - res_g) * hl)};
}

// rule caches are shared across the worker threads of OperatorSelector
std::mutex& rule_cache_mutex() {
    static std::mutex mu;
    return mu;
}

// Legendre nodes/weights on [-1,1] by Newton iteration, cached by order.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int m) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(rule_cache_mutex());
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;

    std::vector<double> x(static_cast<size_t>(m)), w(static_cast<size_t>(m));
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < m; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = m * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15) break;
        }
        x[static_cast<size_t>(i)] = -z;
        x[static_cast<size_t>(m - 1 - i)] = z;
        w[static_cast<size_t>(i)] = w[static_cast<size_t>(m - 1 - i)] =
            2.0 / ((1.0 - z * z) * pp * pp);
    }
    return cache.emplace(m, std::make_pair(std::move(x), std::move(w))).first->second;
}

// Angular rule over the unit sphere direction u = cos(theta), with the
// surface measure A_{n-2} sin^{n-2}(theta) folded into the weights.
struct AngularRule {
    std::vector<double> u;
    std::vector<double> w;
};

const AngularRule& angular_rule(int n, double phase) {
    static std::map<std::pair<int, int>, AngularRule> cache;
    static std::mutex cache_mutex;
    int m = 8 * static_cast<int>((32.0 + 0.8 * phase) / 8.0 + 1.0);
    auto key = std::make_pair(n, m);
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    AngularRule rule;
    if (n == 1) {
        // two-point sphere {+1,-1}; all profile integrands are even in u
        rule.u = {1.0};
        rule.w = {2.0};
    } else if (n == 2) {
        const auto& [x, w] = gauss_legendre(m);
        rule.u.resize(static_cast<size_t>(m));
        rule.w.resize(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i) {
            double theta = 0.5 * std::numbers::pi * (x[static_cast<size_t>(i)] + 1.0);
            rule.u[static_cast<size_t>(i)] = std::cos(theta);
            rule.w[static_cast<size_t>(i)] = std::numbers::pi * w[static_cast<size_t>(i)];
        }
    } else {  // n == 3: substitute u = cos(theta); A_1 = 2 pi
        const auto& [x, w] = gauss_legendre(m);
        rule.u = x;
        rule.w.resize(static_cast<size_t>(m));
        for (int i = 0; i < m; ++i)
            rule.w[static_cast<size_t>(i)] = 2.0 * std::numbers::pi * w[static_cast<size_t>(i)];
    }
    std::lock_guard<std::mutex> lock(cache_mutex);
    return cache.emplace(key, std::move(rule)).first->second;
}

// Bounded shape factors: cosm1(x)/x^2 -> -1/2, sinmx(x)/x^3 -> -1/6,
// sin(x)/x -> 1 as x -> 0.
double shape_cos(double x) {
    if (x == 0.0) return -0.5;
    double s = std::sin(0.5 * x) / x;
    return -2.0 * s * s;
}
double shape_sin3(double x) {
    if (std::fabs(x) < 1e-4) return -1.0 / 6.0 * (1.0 - x * x / 20.0);
    return detail::sin_minus_x(x) / (x * x * x);
}
double sinc(double x) {
    if (x == 0.0) return 1.0;
    return std::sin(x) / x;
}

// Integrate r^{sing} * shape(r) over (0, delta] where shape is bounded and
// oscillates at scale osc (radians per unit r).  The singular head is
// mapped by r = r_cut t^p with p = 2/(1+sing); the oscillatory tail gets
// geometrically grown, oscillation-resolving seed panels.  Adaptive GK15
// bisection on the pooled panels down to tol_abs.
double integrate_radial(const std::function<double(double)>& shape, double delta, double sing,
                        double osc, double value_scale, const QuadratureControl& ctrl,
                        int* eval_budget) {
    double r_cut = (osc * delta > 2.0) ? 1.0 / osc : delta;
    double p = std::min(2.0 / (1.0 + sing), 1e4);
    if (p < 1.0) p = 1.0;
    double head_mass = std::pow(r_cut, 1.0 + sing);  // rc^{1+sing}

    std::function<double(double)> head = [&shape, p, head_mass, r_cut, sing](double t) {
        if (t <= 0.0) return 0.0;
        double r = r_cut * std::pow(t, p);
        return head_mass * p * std::pow(t, p * (1.0 + sing) - 1.0) * shape(r);
    };
    std::function<double(double)> tail = [&shape, sing](double r) {
        return std::pow(r, sing) * shape(r);
    };

    struct Panel {
        int which;  // 0 = head (t-space), 1 = tail (r-space)
        double a, b;
        PanelEstimate est;
    };
    std::vector<Panel> panels;
    auto push = [&](int which, double a, double b) {
        const auto& f = which == 0 ? head : tail;
        panels.push_back(Panel{which, a, b, gk15(f, a, b)});
        if (--*eval_budget < 0)
            throw QuadratureFailure("adaptive quadrature exceeded its panel budget");
    };

    for (int i = 0; i < 4; ++i) push(0, 0.25 * i, 0.25 * (i + 1));
    double a = r_cut;
    while (a < delta) {
        double b = std::min(2.0 * a, delta);
        int sub = std::max(1, static_cast<int>(std::ceil(osc * (b - a) / 4.0)));
        for (int i = 0; i < sub; ++i)
            push(1, a + (b - a) * i / sub, a + (b - a) * (i + 1) / sub);
        a = b;
    }

    while (true) {
        double total = 0.0, err = 0.0;
        size_t worst = 0;
        for (size_t i = 0; i < panels.size(); ++i) {
            total += panels[i].est.value;
            err += panels[i].est.error;
            if (panels[i].est.error > panels[worst].est.error) worst = i;
        }
        double tol_abs = ctrl.target_scale * std::max(1.0, std::fabs(total) * value_scale) /
                         std::max(value_scale, 1e-300);
        if (err <= 0.25 * tol_abs) return total;
        if (err <= 1e-15 * std::fabs(total) + 1e-305) return total;  // roundoff floor
        Panel split = panels[worst];
        double mid = 0.5 * (split.a + split.b);
        if (mid <= split.a || mid >= split.b) return total;  // width exhausted
        panels.erase(panels.begin() + static_cast<std::ptrdiff_t>(worst));
        push(split.which, split.a, mid);
        push(split.which, mid, split.b);
    }
}

struct Profiles {
    double bond_parallel = 0.0;
    double bond_perp = 0.0;   // n >= 2 only
    double lambda2_alt = 0.0;  // the printed lambda2 integrand
    double sine_state = 0.0;   // I_s
    bool want_perp = false;
};

Profiles compute_profiles(const Material& m, double rho, bool want_perp,
                          const QuadratureControl& ctrl) {
    if (m.n > 3)
        throw DomainError("quadrature oracle supports n <= 3");
    if (rho * m.delta > 500.0)
        throw DomainError("quadrature oracle envelope is |nu| delta <= 500");

    double c = scaling_constant(m);
    double sing = m.n + 1.0 - m.beta;
    double pref_bond = (m.n + 2.0) * m.mu * c * rho * rho;
    int budget = ctrl.panel_budget;

    auto angular = [&](double r, const std::function<double(double, double)>& g) {
        const AngularRule& rule = angular_rule(m.n, rho * r);
        double s = 0.0;
        for (size_t i = 0; i < rule.u.size(); ++i)
            s += rule.w[i] * g(rule.u[i], rho * r * rule.u[i]);
        return s;
    };

    Profiles out;
    out.want_perp = want_perp;
    out.bond_parallel =
        pref_bond * integrate_radial(
                        [&](double r) {
                            return angular(r, [](double u, double x) {
                                return u * u * u * u * shape_cos(x);
                            });
                        },
                        m.delta, sing, rho, std::fabs(pref_bond), ctrl, &budget);
    out.lambda2_alt =
        pref_bond * integrate_radial(
                        [&](double r) {
                            return angular(r, [](double u, double x) {
                                return u * u * u * u * shape_sin3(x);
                            });
                        },
                        m.delta, sing, rho, std::fabs(pref_bond), ctrl, &budget);
    double pref_sine = 0.5 * c * rho;
    out.sine_state =
        pref_sine * integrate_radial(
                        [&](double r) {
                            return angular(r, [](double u, double x) {
                                return u * u * sinc(x);
                            });
                        },
                        m.delta, sing, rho, std::fabs(pref_sine) + 1.0, ctrl, &budget);
    if (want_perp && m.n >= 2) {
        double pref_perp = pref_bond / (m.n - 1.0);
        out.bond_perp =
            pref_perp * integrate_radial(
                            [&](double r) {
                                return angular(r, [](double u, double x) {
                                    return u * u * (1.0 - u * u) * shape_cos(x);
                                });
                            },
                            m.delta, sing, rho, std::fabs(pref_perp), ctrl, &budget);
    }
    return out;
}

}  // namespace

EigenQuadParts eigenvalues_quadrature_parts(const Material& m, std::span<const double> nu,
                                            const QuadratureControl& ctrl) {
    m.validate();
    double rho = detail::vec_norm(nu);
    EigenQuadParts out;
    if (rho == 0.0) return out;
    Profiles p = compute_profiles(m, rho, false, ctrl);
    out.bond_parallel = p.bond_parallel;
    out.state_term = -(m.lambda_star - m.mu) * p.sine_state * p.sine_state;
    out.lambda1 = out.bond_parallel + out.state_term;
    out.lambda2 = p.lambda2_alt;
    return out;
}

EigenPair eigenvalues_quadrature(const Material& m, std::span<const double> nu,
                                 const QuadratureControl& ctrl) {
    EigenQuadParts p = eigenvalues_quadrature_parts(m, nu, ctrl);
    return {p.lambda1, p.lambda2};
}

MultiplierMatrix multiplier_quadrature(const Material& m, std::span<const double> nu,
                                       const QuadratureControl& ctrl) {
    m.validate();
    double rho = detail::vec_norm(nu);
    MultiplierMatrix M;
    M.dim = m.n;
    if (rho == 0.0) return M;

    Profiles p = compute_profiles(m, rho, true, ctrl);
    double state = -(m.lambda_star - m.mu) * p.sine_state * p.sine_state;
    M.lambda1 = p.bond_parallel + state;
    // In one dimension there is no perpendicular component; the lambda2
    // slot is filled from its own integral representation.
    M.lambda2 = m.n >= 2 ? p.bond_perp : p.lambda2_alt;
    M.direction.assign(nu.begin(), nu.end());
    for (double& x : M.direction) x /= rho;
    return M;
}

}  // namespace perispec
