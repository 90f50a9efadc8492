#pragma once

#include <memory>
#include <optional>

#include "perispec/fields.hpp"
#include "perispec/material.hpp"
#include "perispec/multipliers.hpp"

namespace perispec {

// Per-mode eigendata; omega_i = sqrt(-lambda_i), defined because the
// operator is validated negative definite over the working cutoff.
struct ModeEigen {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;
    bool via_quadrature = false;
};

// The operator the solvers apply: either the peridynamic multiplier for a
// validated Material or the local Navier reference.  Construction runs
// validate_negativity over the working cutoff (peridynamic) and
// precomputes eigendata per distinct |k|; immutable afterwards.
class OperatorSelector {
  public:
    static OperatorSelector peridynamic(const Material& m, int cutoff);
    static OperatorSelector navier(int n, double mu, double lambda_star, int cutoff);

    bool is_navier() const { return navier_; }
    int dim() const { return n_; }
    int cutoff() const { return cutoff_; }
    const std::optional<Material>& material() const { return material_; }
    double mu() const { return mu_; }
    double lambda_star() const { return lambda_star_; }

    const ModeEigen& eigen_for(const std::vector<int>& k) const;
    bool any_quadrature_fallback() const;

  private:
    OperatorSelector() = default;
    void prepare();

    bool navier_ = false;
    int n_ = 1;
    int cutoff_ = 0;
    std::optional<Material> material_;
    double mu_ = 1.0, lambda_star_ = 1.0;
    std::map<long long, ModeEigen> eigen_;  // keyed by |k|^2
};

// (L u)_k = M_k u_k mode-wise; k = 0 maps to 0.
SpectralField apply_operator(const OperatorSelector& op, const SpectralField& f);

// u_k = M_k^{-1} b_k for k != 0, u_0 = 0; forcing must have zero mean
// (|component| <= 1e-14) or NonzeroMeanForcing is raised.
SpectralField solve_equilibrium(const OperatorSelector& op, const SpectralField& b);

enum class ProblemKind { equilibrium, homogeneous, forced };

// Exact coefficient-space solution of the evolution problems:
//   homogeneous: U_k(t) = cos(w_k t) f_k + sin(w_k t)/w_k g_k,
//                U_0(t) = f_0 + g_0 t
//   forced:      U_k(t) = (cos(w_k t) - 1)/lambda_k b_k,  U_0(t) = b_0 t^2/2
// evaluated per eigen-channel; derivatives are analytic in t.
class TimeSolution {
  public:
    static TimeSolution homogeneous(const OperatorSelector& op, const SpectralField& f,
                                    const SpectralField& g);
    static TimeSolution forced(const OperatorSelector& op, const SpectralField& b);

    ProblemKind kind() const { return kind_; }
    const OperatorSelector& op() const { return *op_; }

    SpectralField at(double t) const;
    SpectralField derivative(double t, int p) const;
    double energy(double t) const;  // homogeneous only

  private:
    TimeSolution(const OperatorSelector& op, ProblemKind kind);
    ProblemKind kind_;
    const OperatorSelector* op_;
    std::unique_ptr<SpectralField> f_, g_, b_;
};

SpectralField evolve_homogeneous(const OperatorSelector& op, const SpectralField& f,
                                 const SpectralField& g, double t);
SpectralField evolve_forced(const OperatorSelector& op, const SpectralField& b, double t);
SpectralField time_derivative(const TimeSolution& sol, double t, int p);
double mode_energy(const TimeSolution& sol, double t);

// Regularity indices implied by the data indices: the equilibrium /
// forced gain is max{0, beta-n}, the wave velocity-channel gain is half
// that; temporal classes in the Gateaux and classical senses.
struct RegularityIndices {
    double s = 0.0;           // equilibrium data index
    double s1 = 0.0, s2 = 0.0;  // homogeneous data indices
    double S = 0.0;           // forced data index
    std::optional<double> q;  // requested target space for temporal classes
};

struct RegularityPrediction {
    double spatial_index = 0.0;
    bool gateaux_smooth = false;            // C^infinity
    std::optional<int> gateaux_class;       // C^{p+1}: the largest admissible p+1
    bool classical_smooth = false;
    std::optional<int> classical_class;     // C^p under the pointwise hypotheses
};

RegularityPrediction predicted_regularity(const OperatorSelector& op, ProblemKind kind,
                                          const RegularityIndices& idx);

}  // namespace perispec
