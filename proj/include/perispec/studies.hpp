#pragma once

#include <cstdint>

#include "perispec/solvers.hpp"
#include "perispec/table.hpp"

namespace perispec {

enum class SweepTarget { multiplier, equilibrium, homogeneous, forced };
enum class SweepKind { delta_to_zero, beta_to_np2 };

// Dyadic local-limit sweep: delta = 2^-j (fixed beta) or beta = n+2-2^-j
// (fixed delta), j in [j_min, j_max].  Solution targets compare the
// peridynamic and Navier solutions for fixed seeded band-limited data in
// the Sobolev index the corresponding convergence theorem names.
struct SweepConfig {
    Material material;  // delta/beta hold the fixed parameter of the sweep
    int j_min = 0;
    int j_max = 6;
    int cutoff = 16;
    double t = 1.0;
    double s = 1.0;   // equilibrium / forced data index
    double s1 = 1.0;  // homogeneous displacement index
    double s2 = 1.0;  // homogeneous velocity index
    double epsilon = 0.5;  // beta-sweep norm margin, 0 < epsilon < 2
    std::uint64_t seed = 0x5eedULL;
    double data_decay = 1.0;
};

StudyTable local_limit_sweep(SweepTarget target, SweepKind kind, const SweepConfig& config);
SweepConfig sweep_config_from_metadata(const StudyTable& t);

// Quadrature reference against the closed-form expansions per radius; both
// combined lambda1 printings reported side by side.  Relative errors use
// the denominator max(1, |reference|) so degenerate (zero) expansions
// remain comparable.
struct AsymptoticConfig {
    Material material;
    std::vector<double> radii;
};

StudyTable asymptotic_validation(const AsymptoticConfig& config);
AsymptoticConfig asymptotic_config_from_metadata(const StudyTable& t);

// Synthetic-data decay-exponent fit against the regularity prediction.
// Rows: the input channel and the solution channel.  Evolution solutions
// are aggregated by the root mean square over a fixed time grid, which
// strips the oscillatory factors without touching the decay rate.
struct RegularityConfig {
    Material material;
    int cutoff = 256;
    double s_input = 1.0;
    std::uint64_t seed = 0x5eedULL;
    int t_samples = 64;
    double t_min = 0.25;
    double t_max = 16.0;
};

StudyTable regularity_study(ProblemKind kind, const RegularityConfig& config);
RegularityConfig regularity_config_from_metadata(const StudyTable& t);

// Central-difference second derivative against M_k U_k (+ b_k) per step
// size; the residual column is the max over modes of the channel-relative
// mismatch.  Ratios between consecutive rows sit near 4 for order 2.
struct TemporalConfig {
    Material material;
    int cutoff = 16;
    double t = 1.0;
    std::vector<double> h_values = {1e-2, 5e-3, 2.5e-3};
    std::uint64_t seed = 0x5eedULL;
    double data_decay = 1.0;
    double data_scale = 1.0;  // 0 gives the degenerate zero-data diagnostic
};

StudyTable temporal_consistency_check(ProblemKind kind, const TemporalConfig& config);
TemporalConfig temporal_config_from_metadata(const StudyTable& t);

}  // namespace perispec
