#include "perispec/solvers.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <set>
#include <thread>

#include "perispec/quadrature.hpp"
#include "perispec/specfun.hpp"

namespace perispec {

namespace {

long long norm2_of(const std::vector<int>& k) {
    long long s = 0;
    for (int ki : k) s += static_cast<long long>(ki) * ki;
    return s;
}

int worker_count() {
    const char* env = std::getenv("PERISPEC_WORKERS");
    if (!env) return 1;
    int w = std::atoi(env);
    return w >= 1 ? w : 1;
}

// cos(x + p pi/2) and sin(x + p pi/2) without forming the shifted argument
double cos_shift(double x, int p) {
    switch (((p % 4) + 4) % 4) {
        case 0: return std::cos(x);
        case 1: return -std::sin(x);
        case 2: return -std::cos(x);
        default: return std::sin(x);
    }
}
double sin_shift(double x, int p) {
    switch (((p % 4) + 4) % 4) {
        case 0: return std::sin(x);
        case 1: return std::cos(x);
        case 2: return -std::sin(x);
        default: return -std::cos(x);
    }
}

struct Channels {
    std::vector<double> dir;  // unit k/|k|
    std::complex<double> par = 0.0;
    std::vector<std::complex<double>> perp;
};

Channels split(const std::vector<int>& k, const SpectralField::Coeff& v) {
    Channels ch;
    double n2 = 0.0;
    for (int ki : k) n2 += static_cast<double>(ki) * ki;
    double rho = std::sqrt(n2);
    ch.dir.resize(k.size());
    for (size_t i = 0; i < k.size(); ++i) ch.dir[i] = k[i] / rho;
    for (size_t i = 0; i < v.size(); ++i) ch.par += ch.dir[i] * v[i];
    ch.perp.resize(v.size());
    for (size_t i = 0; i < v.size(); ++i) ch.perp[i] = v[i] - ch.par * ch.dir[i];
    return ch;
}

SpectralField::Coeff recompose(const Channels& ch, std::complex<double> par_value,
                               const std::vector<std::complex<double>>& perp_value) {
    SpectralField::Coeff out(ch.dir.size());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = par_value * ch.dir[i] + perp_value[i];
    return out;
}

bool is_zero_key(const std::vector<int>& k) {
    for (int ki : k)
        if (ki != 0) return false;
    return true;
}

}  // namespace

OperatorSelector OperatorSelector::peridynamic(const Material& m, int cutoff) {
    m.validate();
    if (cutoff < 1) throw InvalidParameter("operator: cutoff must be >= 1");
    OperatorSelector op;
    op.navier_ = false;
    op.n_ = m.n;
    op.cutoff_ = cutoff;
    op.material_ = m;
    op.mu_ = m.mu;
    op.lambda_star_ = m.lambda_star;
    op.prepare();
    return op;
}

OperatorSelector OperatorSelector::navier(int n, double mu, double lambda_star, int cutoff) {
    if (n < 1) throw InvalidParameter("operator: n must be >= 1");
    if (cutoff < 1) throw InvalidParameter("operator: cutoff must be >= 1");
    if (!(mu > 0.0) || !(lambda_star + 2.0 * mu > 0.0))
        throw InvalidParameter("navier operator: needs mu > 0 and lambda_star + 2 mu > 0");
    OperatorSelector op;
    op.navier_ = true;
    op.n_ = n;
    op.cutoff_ = cutoff;
    op.mu_ = mu;
    op.lambda_star_ = lambda_star;
    op.prepare();
    return op;
}

void OperatorSelector::prepare() {
    std::set<long long> norms;
    std::vector<int> k(static_cast<size_t>(n_), 0);
    // distinct |k|^2 over the box [0, K]^n
    while (true) {
        long long n2 = norm2_of(k);
        if (n2 > 0) norms.insert(n2);
        int axis = n_ - 1;
        while (axis >= 0 && ++k[static_cast<size_t>(axis)] > cutoff_) {
            k[static_cast<size_t>(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
    }

    std::vector<long long> norm_list(norms.begin(), norms.end());
    std::vector<ModeEigen> results(norm_list.size());
    auto fill = [&](size_t i) {
        double rho = std::sqrt(static_cast<double>(norm_list[i]));
        ModeEigen me;
        if (navier_) {
            me.lambda1 = -(lambda_star_ + 2.0 * mu_) * rho * rho;
            me.lambda2 = -mu_ * rho * rho;
        } else {
            std::vector<double> rep(static_cast<size_t>(n_), 0.0);
            rep[0] = rho;
            EigenEval e = eigenvalues(*material_, rep);
            me.lambda1 = e.lambda1;
            me.lambda2 = e.lambda2;
            me.via_quadrature = e.via_quadrature;
        }
        me.omega1 = me.lambda1 < 0.0 ? std::sqrt(-me.lambda1) : 0.0;
        me.omega2 = me.lambda2 < 0.0 ? std::sqrt(-me.lambda2) : 0.0;
        results[i] = me;
    };

    int workers = std::min<int>(worker_count(), static_cast<int>(norm_list.size()));
    if (workers <= 1) {
        for (size_t i = 0; i < norm_list.size(); ++i) fill(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < norm_list.size(); i = next.fetch_add(1))
                    fill(i);
            });
        for (auto& th : pool) th.join();
    }

    for (size_t i = 0; i < norm_list.size(); ++i) {
        const ModeEigen& me = results[i];
        if (!(me.lambda1 < 0.0) || !(me.lambda2 < 0.0))
            throw InvalidParameter(
                "operator: eigenvalue negativity fails over the working cutoff "
                "(validate_negativity reports the offending modes)");
        eigen_.emplace(norm_list[i], me);
    }
}

const ModeEigen& OperatorSelector::eigen_for(const std::vector<int>& k) const {
    auto it = eigen_.find(norm2_of(k));
    if (it == eigen_.end())
        throw ValidationError("operator: mode outside the validated cutoff");
    return it->second;
}

bool OperatorSelector::any_quadrature_fallback() const {
    for (const auto& [n2, me] : eigen_)
        if (me.via_quadrature) return true;
    return false;
}

SpectralField apply_operator(const OperatorSelector& op, const SpectralField& f) {
    if (f.dim() != op.dim()) throw InvalidParameter("apply_operator: dimension mismatch");
    SpectralField out(f.dim(), f.cutoff(), f.is_real());
    for (const auto& [k, v] : f.modes()) {
        if (is_zero_key(k)) {
            out.set_mode(k, SpectralField::Coeff(v.size(), 0.0));
            continue;
        }
        const ModeEigen& e = op.eigen_for(k);
        Channels ch = split(k, v);
        std::vector<std::complex<double>> perp(ch.perp.size());
        for (size_t i = 0; i < perp.size(); ++i) perp[i] = e.lambda2 * ch.perp[i];
        out.set_mode(k, recompose(ch, e.lambda1 * ch.par, perp));
    }
    return out;
}

SpectralField solve_equilibrium(const OperatorSelector& op, const SpectralField& b) {
    if (b.dim() != op.dim()) throw InvalidParameter("solve_equilibrium: dimension mismatch");
    SpectralField out(b.dim(), b.cutoff(), b.is_real());
    for (const auto& [k, v] : b.modes()) {
        if (is_zero_key(k)) {
            for (const auto& c : v)
                if (std::fabs(c.real()) > 1e-14 || std::fabs(c.imag()) > 1e-14)
                    throw NonzeroMeanForcing("solve_equilibrium: forcing must have zero mean");
            out.set_mode(k, SpectralField::Coeff(v.size(), 0.0));
            continue;
        }
        const ModeEigen& e = op.eigen_for(k);
        if (e.lambda1 == 0.0 || (op.dim() >= 2 && e.lambda2 == 0.0))
            throw SingularMode("solve_equilibrium: zero eigenvalue at a stored mode");
        Channels ch = split(k, v);
        std::vector<std::complex<double>> perp(ch.perp.size());
        for (size_t i = 0; i < perp.size(); ++i) perp[i] = ch.perp[i] / e.lambda2;
        out.set_mode(k, recompose(ch, ch.par / e.lambda1, perp));
    }
    return out;
}

TimeSolution::TimeSolution(const OperatorSelector& op, ProblemKind kind)
    : kind_(kind), op_(&op) {}

TimeSolution TimeSolution::homogeneous(const OperatorSelector& op, const SpectralField& f,
                                       const SpectralField& g) {
    if (f.dim() != op.dim() || g.dim() != op.dim())
        throw InvalidParameter("homogeneous problem: dimension mismatch");
    TimeSolution sol(op, ProblemKind::homogeneous);
    sol.f_ = std::make_unique<SpectralField>(f);
    sol.g_ = std::make_unique<SpectralField>(g);
    return sol;
}

TimeSolution TimeSolution::forced(const OperatorSelector& op, const SpectralField& b) {
    if (b.dim() != op.dim()) throw InvalidParameter("forced problem: dimension mismatch");
    TimeSolution sol(op, ProblemKind::forced);
    sol.b_ = std::make_unique<SpectralField>(b);
    return sol;
}

namespace {

// union of stored keys of two fields
std::set<SpectralField::Key> key_union(const SpectralField& a, const SpectralField& b) {
    std::set<SpectralField::Key> keys;
    for (const auto& [k, v] : a.modes()) keys.insert(k);
    for (const auto& [k, v] : b.modes()) keys.insert(k);
    return keys;
}

SpectralField::Coeff coeff_or_zero(const SpectralField& f, const SpectralField::Key& k) {
    const auto* v = f.mode(k);
    return v ? *v : SpectralField::Coeff(static_cast<size_t>(f.dim()), 0.0);
}

}  // namespace

SpectralField TimeSolution::at(double t) const {
    if (kind_ == ProblemKind::homogeneous) {
        SpectralField out(f_->dim(), std::max(f_->cutoff(), g_->cutoff()),
                          f_->is_real() && g_->is_real());
        for (const auto& k : key_union(*f_, *g_)) {
            SpectralField::Coeff fv = coeff_or_zero(*f_, k);
            SpectralField::Coeff gv = coeff_or_zero(*g_, k);
            if (is_zero_key(k)) {
                for (size_t i = 0; i < fv.size(); ++i) fv[i] += gv[i] * t;
                out.set_mode(k, std::move(fv));
                continue;
            }
            const ModeEigen& e = op_->eigen_for(k);
            Channels cf = split(k, fv);
            Channels cg = split(k, gv);
            std::complex<double> par =
                std::cos(e.omega1 * t) * cf.par + std::sin(e.omega1 * t) / e.omega1 * cg.par;
            std::vector<std::complex<double>> perp(cf.perp.size());
            for (size_t i = 0; i < perp.size(); ++i)
                perp[i] = std::cos(e.omega2 * t) * cf.perp[i] +
                          std::sin(e.omega2 * t) / e.omega2 * cg.perp[i];
            out.set_mode(k, recompose(cf, par, perp));
        }
        return out;
    }

    SpectralField out(b_->dim(), b_->cutoff(), b_->is_real());
    for (const auto& [k, bv] : b_->modes()) {
        if (is_zero_key(k)) {
            SpectralField::Coeff v = bv;
            for (auto& c : v) c *= 0.5 * t * t;
            out.set_mode(k, std::move(v));
            continue;
        }
        const ModeEigen& e = op_->eigen_for(k);
        Channels cb = split(k, bv);
        // (cos(w t) - 1)/lambda evaluated stably through cos_minus_one
        std::complex<double> par = detail::cos_minus_one(e.omega1 * t) / e.lambda1 * cb.par;
        std::vector<std::complex<double>> perp(cb.perp.size());
        for (size_t i = 0; i < perp.size(); ++i)
            perp[i] = detail::cos_minus_one(e.omega2 * t) / e.lambda2 * cb.perp[i];
        out.set_mode(k, recompose(cb, par, perp));
    }
    return out;
}

SpectralField TimeSolution::derivative(double t, int p) const {
    if (p < 1) throw InvalidParameter("time_derivative: p must be >= 1");
    if (kind_ == ProblemKind::homogeneous) {
        SpectralField out(f_->dim(), std::max(f_->cutoff(), g_->cutoff()),
                          f_->is_real() && g_->is_real());
        for (const auto& k : key_union(*f_, *g_)) {
            SpectralField::Coeff fv = coeff_or_zero(*f_, k);
            SpectralField::Coeff gv = coeff_or_zero(*g_, k);
            if (is_zero_key(k)) {
                out.set_mode(k, p == 1 ? gv : SpectralField::Coeff(fv.size(), 0.0));
                continue;
            }
            const ModeEigen& e = op_->eigen_for(k);
            Channels cf = split(k, fv);
            Channels cg = split(k, gv);
            auto channel = [&](double w, std::complex<double> fc, std::complex<double> gc) {
                return std::pow(w, p) * cos_shift(w * t, p) * fc +
                       std::pow(w, p - 1) * sin_shift(w * t, p) * gc;
            };
            std::complex<double> par = channel(e.omega1, cf.par, cg.par);
            std::vector<std::complex<double>> perp(cf.perp.size());
            for (size_t i = 0; i < perp.size(); ++i)
                perp[i] = channel(e.omega2, cf.perp[i], cg.perp[i]);
            out.set_mode(k, recompose(cf, par, perp));
        }
        return out;
    }

    SpectralField out(b_->dim(), b_->cutoff(), b_->is_real());
    for (const auto& [k, bv] : b_->modes()) {
        if (is_zero_key(k)) {
            SpectralField::Coeff v(bv.size(), 0.0);
            if (p == 1)
                for (size_t i = 0; i < v.size(); ++i) v[i] = bv[i] * t;
            if (p == 2) v = bv;
            out.set_mode(k, std::move(v));
            continue;
        }
        const ModeEigen& e = op_->eigen_for(k);
        Channels cb = split(k, bv);
        // d^p/dt^p of (cos(w t) - 1)/lambda = -w^{p-2} cos(w t + p pi/2)
        auto channel = [&](double w, std::complex<double> bc) {
            return -std::pow(w, p - 2) * cos_shift(w * t, p) * bc;
        };
        std::complex<double> par = channel(e.omega1, cb.par);
        std::vector<std::complex<double>> perp(cb.perp.size());
        for (size_t i = 0; i < perp.size(); ++i) perp[i] = channel(e.omega2, cb.perp[i]);
        out.set_mode(k, recompose(cb, par, perp));
    }
    return out;
}

double TimeSolution::energy(double t) const {
    if (kind_ != ProblemKind::homogeneous)
        throw WrongProblemKind("mode_energy: defined for the homogeneous problem");
    double E = 0.0;
    for (const auto& k : key_union(*f_, *g_)) {
        if (is_zero_key(k)) continue;
        const ModeEigen& e = op_->eigen_for(k);
        Channels cf = split(k, coeff_or_zero(*f_, k));
        Channels cg = split(k, coeff_or_zero(*g_, k));
        auto channel = [&](double w, std::complex<double> fc, std::complex<double> gc) {
            std::complex<double> c = std::cos(w * t) * fc + std::sin(w * t) / w * gc;
            std::complex<double> cdot = -w * std::sin(w * t) * fc + std::cos(w * t) * gc;
            return std::norm(cdot) + w * w * std::norm(c);
        };
        E += channel(e.omega1, cf.par, cg.par);
        for (size_t i = 0; i < cf.perp.size(); ++i)
            E += channel(e.omega2, cf.perp[i], cg.perp[i]);
    }
    return E;
}

SpectralField evolve_homogeneous(const OperatorSelector& op, const SpectralField& f,
                                 const SpectralField& g, double t) {
    return TimeSolution::homogeneous(op, f, g).at(t);
}

SpectralField evolve_forced(const OperatorSelector& op, const SpectralField& b, double t) {
    return TimeSolution::forced(op, b).at(t);
}

SpectralField time_derivative(const TimeSolution& sol, double t, int p) {
    return sol.derivative(t, p);
}

double mode_energy(const TimeSolution& sol, double t) { return sol.energy(t); }

RegularityPrediction predicted_regularity(const OperatorSelector& op, ProblemKind kind,
                                          const RegularityIndices& idx) {
    double n = static_cast<double>(op.dim());
    // eigenvalue growth exponent: 2 for the local operator, beta - n
    // (clamped at 0) for the peridynamic one
    double gain = op.is_navier() ? 2.0 : std::max(0.0, op.material()->beta - n);
    bool log_growth = !op.is_navier() && op.material()->beta == n;
    double theta = 0.5 * gain;

    RegularityPrediction out;
    if (kind == ProblemKind::equilibrium) {
        out.spatial_index = idx.s + gain;
        return out;
    }

    if (kind == ProblemKind::homogeneous) {
        out.spatial_index = std::min(idx.s1, idx.s2 + theta);
        double q = idx.q.value_or(out.spatial_index);
        if (gain == 0.0) {
            out.gateaux_smooth = true;  // beta <= n (log growth included, q < s)
        } else {
            int p = static_cast<int>(
                std::floor(std::min((idx.s1 - q) / theta - 1.0, (idx.s2 - q) / theta)));
            if (p >= 1) out.gateaux_class = p + 1;
        }
        if (gain == 0.0 && !log_growth) {
            out.classical_smooth = true;  // under the Holder-continuity hypothesis
        } else if (log_growth) {
            out.classical_smooth = idx.s1 > n && idx.s2 > n;
        } else {
            double cap = std::min((idx.s1 - n) / theta, (idx.s2 - n) / theta + 1.0);
            int p = static_cast<int>(std::ceil(cap)) - 1;
            if (p >= 0) out.classical_class = p;
        }
        return out;
    }

    // forced
    out.spatial_index = idx.S + gain;
    double q = idx.q.value_or(idx.S);
    if (gain == 0.0) {
        out.gateaux_smooth = true;
    } else {
        int p = static_cast<int>(std::floor((idx.S - q) / theta + 1.0));
        if (p >= 1) out.gateaux_class = p + 1;
    }
    if (gain == 0.0 && !log_growth) {
        out.classical_smooth = true;
    } else if (log_growth) {
        out.classical_smooth = idx.S > n;
    } else {
        int p = static_cast<int>(std::ceil((idx.S - n) / theta + 2.0)) - 1;
        if (p >= 0) out.classical_class = p;
    }
    return out;
}

}  // namespace perispec
