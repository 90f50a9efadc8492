#include "perispec/studies.hpp"

#include <cmath>
#include <set>

#include "perispec/asymptotics.hpp"
#include "perispec/quadrature.hpp"

namespace perispec {

namespace {

const char* target_name(SweepTarget t) {
    switch (t) {
        case SweepTarget::multiplier: return "multiplier";
        case SweepTarget::equilibrium: return "equilibrium";
        case SweepTarget::homogeneous: return "homogeneous";
        default: return "forced";
    }
}

const char* kind_name(SweepKind k) {
    return k == SweepKind::delta_to_zero ? "delta_to_zero" : "beta_to_np2";
}

const char* problem_name(ProblemKind k) {
    switch (k) {
        case ProblemKind::equilibrium: return "equilibrium";
        case ProblemKind::homogeneous: return "homogeneous";
        default: return "forced";
    }
}

void add_material_meta(StudyTable& t, const Material& m) {
    t.add_meta("n", m.n);
    t.add_meta("delta", m.delta);
    t.add_meta("beta", m.beta);
    t.add_meta("mu", m.mu);
    t.add_meta("lambda_star", m.lambda_star);
}

Material material_from_metadata(const StudyTable& t) {
    auto need = [&](const char* key) -> const std::string& {
        const std::string* v = t.meta(key);
        if (!v) throw ValidationError(std::string("table metadata missing '") + key + "'");
        return *v;
    };
    return make_material(std::stoi(need("n")), std::stod(need("delta")), std::stod(need("beta")),
                         std::stod(need("mu")), std::stod(need("lambda_star")));
}

double meta_num(const StudyTable& t, const char* key) {
    const std::string* v = t.meta(key);
    if (!v) throw ValidationError(std::string("table metadata missing '") + key + "'");
    return std::stod(*v);
}

SpectralField field_scaled(const SpectralField& a, double scale) {
    SpectralField out(a.dim(), a.cutoff(), a.is_real());
    for (const auto& [k, v] : a.modes()) {
        SpectralField::Coeff w = v;
        for (auto& c : w) c *= scale;
        out.set_mode(k, std::move(w));
    }
    return out;
}

SpectralField field_sub(const SpectralField& a, const SpectralField& b) {
    SpectralField out(a.dim(), std::max(a.cutoff(), b.cutoff()), a.is_real() && b.is_real());
    std::set<SpectralField::Key> keys;
    for (const auto& [k, v] : a.modes()) keys.insert(k);
    for (const auto& [k, v] : b.modes()) keys.insert(k);
    for (const auto& k : keys) {
        const auto* va = a.mode(k);
        const auto* vb = b.mode(k);
        SpectralField::Coeff v(static_cast<size_t>(a.dim()), 0.0);
        for (size_t i = 0; i < v.size(); ++i) {
            if (va) v[i] += (*va)[i];
            if (vb) v[i] -= (*vb)[i];
        }
        out.set_mode(k, std::move(v));
    }
    return out;
}

double rel_err(double reference, double approx) {
    return std::fabs(reference - approx) / std::max(1.0, std::fabs(reference));
}

}  // namespace

StudyTable local_limit_sweep(SweepTarget target, SweepKind kind, const SweepConfig& config) {
    const Material& base = config.material;
    base.validate();
    if (config.j_max < config.j_min)
        throw InvalidParameter("sweep: j_max must be >= j_min");
    if (!(config.epsilon > 0.0 && config.epsilon < 2.0))
        throw InvalidParameter("sweep: epsilon must lie in (0, 2)");

    StudyTable table;
    table.study_kind = std::string("local_limit_sweep_") + target_name(target);
    table.parameter_name = kind == SweepKind::delta_to_zero ? "delta" : "beta";
    table.add_meta("target", target_name(target));
    table.add_meta("sweep", kind_name(kind));
    add_material_meta(table, base);
    table.add_meta("j_min", config.j_min);
    table.add_meta("j_max", config.j_max);
    table.add_meta("cutoff", config.cutoff);
    table.add_meta("t", config.t);
    table.add_meta("s", config.s);
    table.add_meta("s1", config.s1);
    table.add_meta("s2", config.s2);
    table.add_meta("epsilon", config.epsilon);
    table.add_meta("seed", std::to_string(config.seed));
    table.add_meta("data_decay", config.data_decay);

    std::vector<double> errors;

    // fixed data for the solution targets
    SpectralField b = make_random_field(base.n, config.cutoff, config.seed, config.data_decay);
    SpectralField f = make_random_field(base.n, config.cutoff, config.seed + 1, config.data_decay);
    SpectralField g = make_random_field(base.n, config.cutoff, config.seed + 2, config.data_decay);
    OperatorSelector navier =
        OperatorSelector::navier(base.n, base.mu, base.lambda_star, config.cutoff);

    for (int j = config.j_min; j <= config.j_max; ++j) {
        Material m = base;
        if (kind == SweepKind::delta_to_zero)
            m.delta = std::pow(2.0, -j);
        else
            m.beta = base.n + 2.0 - std::pow(2.0, -j);
        table.parameter.push_back(kind == SweepKind::delta_to_zero ? m.delta : m.beta);

        if (target == SweepTarget::multiplier) {
            // max over 0 < |k|_inf <= K; radial symmetry reduces it to norms
            std::set<long long> norms;
            std::vector<int> k(static_cast<size_t>(m.n), 0);
            while (true) {
                long long n2 = 0;
                for (int ki : k) n2 += static_cast<long long>(ki) * ki;
                if (n2 > 0) norms.insert(n2);
                int axis = m.n - 1;
                while (axis >= 0 && ++k[static_cast<size_t>(axis)] > config.cutoff) {
                    k[static_cast<size_t>(axis)] = 0;
                    --axis;
                }
                if (axis < 0) break;
            }
            double worst = 0.0;
            for (long long n2 : norms) {
                std::vector<double> nu(static_cast<size_t>(m.n), 0.0);
                nu[0] = std::sqrt(static_cast<double>(n2));
                EigenEval e = eigenvalues(m, nu);
                MultiplierMatrix N = navier_reference(m, nu);
                worst = std::max({worst, std::fabs(e.lambda1 - N.lambda1),
                                  std::fabs(e.lambda2 - N.lambda2)});
            }
            errors.push_back(worst);
            continue;
        }

        OperatorSelector peri = OperatorSelector::peridynamic(m, config.cutoff);
        double gain = std::max(0.0, m.beta - m.n);
        double q;
        SpectralField diff(base.n, config.cutoff, true);
        switch (target) {
            case SweepTarget::equilibrium:
                q = kind == SweepKind::delta_to_zero ? config.s + gain
                                                     : config.s + 2.0 - config.epsilon;
                diff = field_sub(solve_equilibrium(peri, b), solve_equilibrium(navier, b));
                break;
            case SweepTarget::homogeneous:
                q = kind == SweepKind::delta_to_zero
                        ? std::min(config.s1, config.s2 + 0.5 * gain)
                        : std::min(config.s1, config.s2 + 0.5 * (2.0 - config.epsilon));
                diff = field_sub(evolve_homogeneous(peri, f, g, config.t),
                                 evolve_homogeneous(navier, f, g, config.t));
                break;
            default:
                q = kind == SweepKind::delta_to_zero ? config.s + gain
                                                     : config.s + 2.0 - config.epsilon;
                diff = field_sub(evolve_forced(peri, b, config.t),
                                 evolve_forced(navier, b, config.t));
                break;
        }
        double err = sobolev_norm(diff, q);
        if (!std::isfinite(err))
            throw NumericalError("sweep: error norm is not finite");
        errors.push_back(err);
    }

    table.metrics.emplace_back("error", std::move(errors));
    table.validate();
    return table;
}

SweepConfig sweep_config_from_metadata(const StudyTable& t) {
    SweepConfig c;
    c.material = material_from_metadata(t);
    c.j_min = static_cast<int>(meta_num(t, "j_min"));
    c.j_max = static_cast<int>(meta_num(t, "j_max"));
    c.cutoff = static_cast<int>(meta_num(t, "cutoff"));
    c.t = meta_num(t, "t");
    c.s = meta_num(t, "s");
    c.s1 = meta_num(t, "s1");
    c.s2 = meta_num(t, "s2");
    c.epsilon = meta_num(t, "epsilon");
    c.seed = std::stoull(*t.meta("seed"));
    c.data_decay = meta_num(t, "data_decay");
    return c;
}

StudyTable asymptotic_validation(const AsymptoticConfig& config) {
    const Material& m = config.material;
    m.validate();
    if (config.radii.size() < 2)
        throw InvalidParameter("asymptotic_validation: needs at least 2 radii");

    StudyTable table;
    table.study_kind = "asymptotic_validation";
    table.parameter_name = "r";
    add_material_meta(table, m);
    table.add_meta("rel_err_denominator", "max(1,|quadrature|)");

    std::vector<double> l1q, l2q, l12q, l2a, l2e, l11a, l12a, l12e, l1s, l1se, l1m, l1me;
    for (double r : config.radii) {
        std::vector<double> nu(static_cast<size_t>(m.n), 0.0);
        nu[0] = r;
        EigenQuadParts q = eigenvalues_quadrature_parts(m, nu);
        AsymptoticValue a2 = lambda2_asymptotic(m, r);
        Lambda1Components parts = lambda1_component_asymptotics(m, r);
        Lambda1Combined comb = lambda1_asymptotic_combined(m, r);

        table.parameter.push_back(r);
        l1q.push_back(q.lambda1);
        l2q.push_back(q.lambda2);
        l12q.push_back(q.state_term);
        l2a.push_back(a2.value);
        l2e.push_back(rel_err(q.lambda2, a2.value));
        l11a.push_back(parts.lambda11.value);
        l12a.push_back(parts.lambda12.value);
        l12e.push_back(rel_err(q.state_term, parts.lambda12.value));
        l1s.push_back(comb.as_stated.value);
        l1se.push_back(rel_err(q.lambda1, comb.as_stated.value));
        l1m.push_back(comb.as_sum.value);
        l1me.push_back(rel_err(q.lambda1, comb.as_sum.value));
    }

    table.metrics.emplace_back("lambda1_quad", std::move(l1q));
    table.metrics.emplace_back("lambda2_quad", std::move(l2q));
    table.metrics.emplace_back("lambda12_quad", std::move(l12q));
    table.metrics.emplace_back("lambda2_asym", std::move(l2a));
    table.metrics.emplace_back("lambda2_rel_err", std::move(l2e));
    table.metrics.emplace_back("lambda11_asym", std::move(l11a));
    table.metrics.emplace_back("lambda12_asym", std::move(l12a));
    table.metrics.emplace_back("lambda12_rel_err", std::move(l12e));
    table.metrics.emplace_back("lambda1_as_stated", std::move(l1s));
    table.metrics.emplace_back("lambda1_as_stated_rel_err", std::move(l1se));
    table.metrics.emplace_back("lambda1_as_sum", std::move(l1m));
    table.metrics.emplace_back("lambda1_as_sum_rel_err", std::move(l1me));
    table.validate();
    return table;
}

AsymptoticConfig asymptotic_config_from_metadata(const StudyTable& t) {
    AsymptoticConfig c;
    c.material = material_from_metadata(t);
    c.radii = t.parameter;
    return c;
}

StudyTable regularity_study(ProblemKind kind, const RegularityConfig& config) {
    const Material& m = config.material;
    m.validate();

    SpectralField input = make_decay_field(m.n, config.cutoff, config.s_input, config.seed);
    OperatorSelector op = OperatorSelector::peridynamic(m, config.cutoff);

    RegularityIndices idx;
    idx.s = idx.s1 = idx.s2 = idx.S = config.s_input;
    double predicted;
    SpectralField solution(m.n, config.cutoff, false);

    auto rms_aggregate = [&](const TimeSolution& sol) {
        SpectralField agg(m.n, config.cutoff, false);
        std::map<SpectralField::Key, double> acc;
        for (int i = 0; i < config.t_samples; ++i) {
            double t = config.t_min +
                       (config.t_max - config.t_min) * i /
                           std::max(1, config.t_samples - 1);
            SpectralField u = sol.at(t);
            for (const auto& [k, v] : u.modes()) {
                double mag2 = 0.0;
                for (const auto& c : v) mag2 += std::norm(c);
                acc[k] += mag2;
            }
        }
        for (const auto& [k, s2] : acc) {
            SpectralField::Coeff v(static_cast<size_t>(m.n), 0.0);
            v[0] = std::sqrt(s2 / config.t_samples);
            agg.set_mode(k, std::move(v));
        }
        return agg;
    };

    switch (kind) {
        case ProblemKind::equilibrium: {
            predicted = predicted_regularity(op, kind, idx).spatial_index;
            solution = solve_equilibrium(op, input);
            break;
        }
        case ProblemKind::homogeneous: {
            // velocity channel: f = 0, g = input
            predicted = config.s_input + std::max(0.0, 0.5 * (m.beta - m.n));
            SpectralField zero(m.n, config.cutoff, true);
            solution = rms_aggregate(TimeSolution::homogeneous(op, zero, input));
            break;
        }
        default: {
            predicted = predicted_regularity(op, kind, idx).spatial_index;
            solution = rms_aggregate(TimeSolution::forced(op, input));
            break;
        }
    }

    double fit_in = decay_exponent_fit(input);
    double fit_out = decay_exponent_fit(solution);
    double implied_in = -(config.s_input + 0.5 * m.n + 0.51);
    double implied_out = -(predicted + 0.5 * m.n + 0.51);

    StudyTable table;
    table.study_kind = std::string("regularity_") + problem_name(kind);
    table.parameter_name = "sobolev_index";
    table.parameter = {config.s_input, predicted};
    table.metrics.emplace_back("fitted_exponent", std::vector<double>{fit_in, fit_out});
    table.metrics.emplace_back("implied_exponent",
                               std::vector<double>{implied_in, implied_out});
    table.metrics.emplace_back(
        "gap", std::vector<double>{fit_in - implied_in, fit_out - implied_out});
    table.add_meta("problem", problem_name(kind));
    add_material_meta(table, m);
    table.add_meta("cutoff", config.cutoff);
    table.add_meta("s_input", config.s_input);
    table.add_meta("seed", std::to_string(config.seed));
    table.add_meta("t_samples", config.t_samples);
    table.add_meta("t_min", config.t_min);
    table.add_meta("t_max", config.t_max);
    table.validate();
    return table;
}

RegularityConfig regularity_config_from_metadata(const StudyTable& t) {
    RegularityConfig c;
    c.material = material_from_metadata(t);
    c.cutoff = static_cast<int>(meta_num(t, "cutoff"));
    c.s_input = meta_num(t, "s_input");
    c.seed = std::stoull(*t.meta("seed"));
    c.t_samples = static_cast<int>(meta_num(t, "t_samples"));
    c.t_min = meta_num(t, "t_min");
    c.t_max = meta_num(t, "t_max");
    return c;
}

StudyTable temporal_consistency_check(ProblemKind kind, const TemporalConfig& config) {
    const Material& m = config.material;
    m.validate();
    if (kind == ProblemKind::equilibrium)
        throw WrongProblemKind("temporal_consistency_check: needs an evolution problem");
    if (config.h_values.size() < 2)
        throw InvalidParameter("temporal_consistency_check: needs at least 2 step sizes");

    OperatorSelector op = OperatorSelector::peridynamic(m, config.cutoff);
    SpectralField b = field_scaled(
        make_random_field(m.n, config.cutoff, config.seed, config.data_decay),
        config.data_scale);
    SpectralField f = field_scaled(
        make_random_field(m.n, config.cutoff, config.seed + 1, config.data_decay),
        config.data_scale);
    SpectralField g = field_scaled(
        make_random_field(m.n, config.cutoff, config.seed + 2, config.data_decay),
        config.data_scale);

    TimeSolution sol = kind == ProblemKind::homogeneous ? TimeSolution::homogeneous(op, f, g)
                                                        : TimeSolution::forced(op, b);

    StudyTable table;
    table.study_kind = std::string("temporal_consistency_") + problem_name(kind);
    table.parameter_name = "h";
    table.add_meta("problem", problem_name(kind));
    add_material_meta(table, m);
    table.add_meta("cutoff", config.cutoff);
    table.add_meta("t", config.t);
    table.add_meta("seed", std::to_string(config.seed));
    table.add_meta("data_decay", config.data_decay);
    table.add_meta("data_scale", config.data_scale);

    std::vector<double> residuals;
    for (double h : config.h_values) {
        SpectralField up = sol.at(config.t + h);
        SpectralField u0 = sol.at(config.t);
        SpectralField um = sol.at(config.t - h);
        SpectralField lu = apply_operator(op, u0);

        double worst = 0.0;
        for (const auto& [k, v0] : u0.modes()) {
            const auto* vp = up.mode(k);
            const auto* vm = um.mode(k);
            const auto* lv = lu.mode(k);
            const auto* bv = kind == ProblemKind::forced ? b.mode(k) : nullptr;
            const auto* fv = kind == ProblemKind::homogeneous ? f.mode(k) : nullptr;
            const auto* gv = kind == ProblemKind::homogeneous ? g.mode(k) : nullptr;
            bool zero_key = true;
            for (int ki : k) zero_key &= ki == 0;

            for (size_t c = 0; c < v0.size(); ++c) {
                std::complex<double> fd =
                    ((*vp)[c] - 2.0 * v0[c] + (*vm)[c]) / (h * h);
                std::complex<double> truth = (*lv)[c];
                if (bv) truth += (*bv)[c];
                // envelope scale of the second derivative, per component
                double om = 0.0, env = 0.0;
                if (!zero_key) {
                    const ModeEigen& e = op.eigen_for(k);
                    om = std::max(e.omega1, e.omega2);
                    if (kind == ProblemKind::homogeneous) {
                        double fmag = fv ? std::abs((*fv)[c]) : 0.0;
                        double gmag = gv ? std::abs((*gv)[c]) : 0.0;
                        env = om * om * (fmag + gmag / std::min(e.omega1, e.omega2));
                    } else {
                        env = 2.0 * om * om * std::abs((*bv)[c]) /
                              std::min(-e.lambda1, -e.lambda2);
                    }
                }
                double scale = env + (bv ? std::abs((*bv)[c]) : 0.0);
                if (scale == 0.0) continue;
                worst = std::max(worst, std::abs(fd - truth) / scale);
            }
        }
        residuals.push_back(worst);
    }

    table.parameter = config.h_values;
    table.metrics.emplace_back("residual", std::move(residuals));
    table.validate();
    return table;
}

TemporalConfig temporal_config_from_metadata(const StudyTable& t) {
    TemporalConfig c;
    c.material = material_from_metadata(t);
    c.cutoff = static_cast<int>(meta_num(t, "cutoff"));
    c.t = meta_num(t, "t");
    c.h_values = t.parameter;
    c.seed = std::stoull(*t.meta("seed"));
    c.data_decay = meta_num(t, "data_decay");
    c.data_scale = meta_num(t, "data_scale");
    return c;
}

}  // namespace perispec
