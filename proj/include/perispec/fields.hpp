#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "perispec/errors.hpp"

#include "json.hpp"

namespace perispec {

// Truncated Fourier representation of a periodic vector field on
// [0, 2pi]^n: a map from lattice frequencies k (|k|_inf <= K) to complex
// n-vectors, with the convention  g(x) = sum_k g_k e^{i k.x}.
// real_flag means Hermitian symmetry g_{-k} = conj(g_k).
class SpectralField {
  public:
    using Key = std::vector<int>;
    using Coeff = std::vector<std::complex<double>>;

    SpectralField(int n, int cutoff, bool real_flag);

    int dim() const { return n_; }
    int cutoff() const { return cutoff_; }
    bool is_real() const { return real_; }

    void set_mode(const Key& k, Coeff value);
    const Coeff* mode(const Key& k) const;  // nullptr when absent
    const std::map<Key, Coeff>& modes() const { return coeffs_; }

    // throws ValidationError when real_flag symmetry or the cutoff is violated
    void check_invariants() const;

  private:
    int n_;
    int cutoff_;
    bool real_;
    std::map<Key, Coeff> coeffs_;
};

// || g ||_{H^q} = sqrt( sum_k (1+|k|^2)^q |g_k|^2 )
double sobolev_norm(const SpectralField& f, double q);

// pointwise synthesis sum_k g_k e^{i k.x}
std::vector<std::complex<double>> synthesize_complex(const SpectralField& f,
                                                     std::span<const double> x);
// real-valued synthesis; requires real_flag and |imag| < 1e-12
std::vector<double> synthesize(const SpectralField& f, std::span<const double> x);

// Uniform-grid samples, row-major over (resolution)^n points x_j = 2 pi j / R.
struct GridSamples {
    int n = 1;
    int resolution = 0;
    std::vector<std::complex<double>> values;  // n components per grid point
};

// resolution 0 means the minimal alias-free 2K+2
GridSamples grid_transform(const SpectralField& f, int resolution = 0);
SpectralField inverse_grid_transform(const GridSamples& g, int cutoff, bool real_flag = true);

// Real field with |g_k| = |k|^{-s - n/2 - 0.51} on 0 < |k|_inf <= K and
// seeded pseudo-random unit directions; the 0.51 margin puts it in H^s but
// keeps H^{s+0.6} divergent.
SpectralField make_decay_field(int n, int K, double s, std::uint64_t seed);

// Random band-limited real field; magnitudes |k|^{-decay}, zero mean.
SpectralField make_random_field(int n, int K, std::uint64_t seed, double decay = 0.0);

// Log-log least squares of shell-averaged coefficient magnitude against
// |k| over shells |k| in [K/4, K]; needs >= 4 nonempty shells.
double decay_exponent_fit(const SpectralField& f);

nlohmann::ordered_json field_to_json(const SpectralField& f);
SpectralField field_from_json(const nlohmann::json& j);
void save_field(const SpectralField& f, const std::string& path);
SpectralField load_field(const std::string& path);

}  // namespace perispec
