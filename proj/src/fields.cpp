#include "perispec/fields.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>

namespace perispec {

SpectralField::SpectralField(int n, int cutoff, bool real_flag)
    : n_(n), cutoff_(cutoff), real_(real_flag) {
    if (n < 1) throw InvalidParameter("field: n must be >= 1");
    if (cutoff < 0) throw InvalidParameter("field: cutoff must be >= 0");
}

void SpectralField::set_mode(const Key& k, Coeff value) {
    if (static_cast<int>(k.size()) != n_)
        throw InvalidParameter("field: lattice point has wrong dimension");
    for (int ki : k)
        if (std::abs(ki) > cutoff_)
            throw InvalidParameter("field: lattice point outside the cutoff");
    if (static_cast<int>(value.size()) != n_)
        throw InvalidParameter("field: coefficient has wrong component count");
    coeffs_[k] = std::move(value);
}

const SpectralField::Coeff* SpectralField::mode(const Key& k) const {
    auto it = coeffs_.find(k);
    return it == coeffs_.end() ? nullptr : &it->second;
}

void SpectralField::check_invariants() const {
    for (const auto& [k, v] : coeffs_) {
        for (int ki : k)
            if (std::abs(ki) > cutoff_)
                throw ValidationError("field: stored mode outside the cutoff");
        if (!real_) continue;
        Key mk(k.size());
        for (size_t i = 0; i < k.size(); ++i) mk[i] = -k[i];
        auto it = coeffs_.find(mk);
        if (it == coeffs_.end())
            throw ValidationError("field: real flag requires the mirror mode -k");
        double scale = 0.0, diff = 0.0;
        for (size_t i = 0; i < v.size(); ++i) {
            scale += std::norm(v[i]);
            diff += std::norm(it->second[i] - std::conj(v[i]));
        }
        if (diff > 1e-24 * std::max(scale, 1e-300))
            throw ValidationError("field: Hermitian symmetry violated");
    }
}

double sobolev_norm(const SpectralField& f, double q) {
    double s = 0.0;
    for (const auto& [k, v] : f.modes()) {
        double k2 = 0.0;
        for (int ki : k) k2 += static_cast<double>(ki) * ki;
        double mag2 = 0.0;
        for (const auto& c : v) mag2 += std::norm(c);
        s += std::pow(1.0 + k2, q) * mag2;
    }
    return std::sqrt(s);
}

std::vector<std::complex<double>> synthesize_complex(const SpectralField& f,
                                                     std::span<const double> x) {
    if (static_cast<int>(x.size()) != f.dim())
        throw InvalidParameter("synthesize: point has wrong dimension");
    std::vector<std::complex<double>> out(static_cast<size_t>(f.dim()), 0.0);
    for (const auto& [k, v] : f.modes()) {
        double phase = 0.0;
        for (size_t i = 0; i < k.size(); ++i) phase += k[i] * x[i];
        std::complex<double> e(std::cos(phase), std::sin(phase));
        for (size_t i = 0; i < out.size(); ++i) out[i] += v[i] * e;
    }
    return out;
}

std::vector<double> synthesize(const SpectralField& f, std::span<const double> x) {
    auto c = synthesize_complex(f, x);
    std::vector<double> out(c.size());
    double scale = 0.0;
    for (const auto& z : c) scale = std::max(scale, std::abs(z));
    for (size_t i = 0; i < c.size(); ++i) {
        if (std::fabs(c[i].imag()) > 1e-12 * std::max(1.0, scale))
            throw ValidationError("synthesize: field is not real at this point");
        out[i] = c[i].real();
    }
    return out;
}

namespace {

// exact unit-root table e^{2 pi i m / R}, indexed modulo R
struct RootTable {
    int R;
    std::vector<std::complex<double>> roots;

    explicit RootTable(int resolution) : R(resolution), roots(static_cast<size_t>(R)) {
        for (int m = 0; m < R; ++m) {
            double a = 2.0 * std::numbers::pi * m / R;
            roots[static_cast<size_t>(m)] = {std::cos(a), std::sin(a)};
        }
    }
    std::complex<double> operator()(long long m) const {
        long long r = m % R;
        if (r < 0) r += R;
        return roots[static_cast<size_t>(r)];
    }
};

// Replace the slowest tensor axis (length `in_size`) by a transformed axis
// of length `out_size`, moving it behind the remaining axes:
//   out[(r * out_size + o) * ncomp + c]
//     = sum_j kernel(j, o) * in[(j * rest + r) * ncomp + c]
std::vector<std::complex<double>> transform_axis(
    const std::vector<std::complex<double>>& in, size_t ncomp, size_t in_size, size_t out_size,
    const std::function<std::complex<double>(size_t, size_t)>& kernel) {
    size_t rest = in.size() / ncomp / in_size;
    std::vector<std::complex<double>> out(rest * out_size * ncomp, 0.0);
    for (size_t j = 0; j < in_size; ++j) {
        for (size_t o = 0; o < out_size; ++o) {
            std::complex<double> w = kernel(j, o);
            if (w == 0.0) continue;
            const std::complex<double>* src = &in[j * rest * ncomp];
            for (size_t r = 0; r < rest; ++r) {
                std::complex<double>* dst = &out[(r * out_size + o) * ncomp];
                for (size_t c = 0; c < ncomp; ++c) dst[c] += w * src[r * ncomp + c];
            }
        }
    }
    return out;
}

}  // namespace

GridSamples grid_transform(const SpectralField& f, int resolution) {
    int K = f.cutoff();
    int n = f.dim();
    if (resolution == 0) resolution = 2 * K + 2;
    if (resolution < 2 * K + 2)
        throw AliasError("grid_transform: resolution must be >= 2K+2");

    size_t W = static_cast<size_t>(2 * K + 1);
    size_t ncomp = static_cast<size_t>(n);
    RootTable root(resolution);

    // dense coefficient cube, axis 0 slowest, component fastest
    size_t cells = 1;
    for (int a = 0; a < n; ++a) cells *= W;
    std::vector<std::complex<double>> data(cells * ncomp, 0.0);
    for (const auto& [k, v] : f.modes()) {
        size_t idx = 0;
        for (int a = 0; a < n; ++a)
            idx = idx * W + static_cast<size_t>(k[static_cast<size_t>(a)] + K);
        for (size_t c = 0; c < ncomp; ++c) data[idx * ncomp + c] = v[c];
    }

    for (int a = 0; a < n; ++a) {
        data = transform_axis(data, ncomp, W, static_cast<size_t>(resolution),
                              [&](size_t j, size_t x) {
                                  return root((static_cast<long long>(j) - K) *
                                              static_cast<long long>(x));
                              });
    }

    GridSamples g;
    g.n = n;
    g.resolution = resolution;
    g.values = std::move(data);
    return g;
}

SpectralField inverse_grid_transform(const GridSamples& g, int cutoff, bool real_flag) {
    int n = g.n;
    int R = g.resolution;
    if (R < 2 * cutoff + 2)
        throw AliasError("inverse_grid_transform: resolution must be >= 2K+2");
    size_t cells = 1;
    for (int a = 0; a < n; ++a) cells *= static_cast<size_t>(R);
    size_t ncomp = static_cast<size_t>(n);
    if (g.values.size() != cells * ncomp)
        throw InvalidParameter("inverse_grid_transform: sample buffer has the wrong size");

    size_t W = static_cast<size_t>(2 * cutoff + 1);
    RootTable root(R);
    std::vector<std::complex<double>> data = g.values;
    for (int a = 0; a < n; ++a) {
        data = transform_axis(data, ncomp, static_cast<size_t>(R), W,
                              [&](size_t x, size_t kk) {
                                  return root(-(static_cast<long long>(kk) - cutoff) *
                                              static_cast<long long>(x)) /
                                         static_cast<double>(R);
                              });
    }

    SpectralField f(n, cutoff, real_flag);
    std::vector<int> k(static_cast<size_t>(n));
    size_t total = 1;
    for (int a = 0; a < n; ++a) total *= W;
    for (size_t idx = 0; idx < total; ++idx) {
        size_t rem = idx;
        for (int a = n - 1; a >= 0; --a) {
            k[static_cast<size_t>(a)] = static_cast<int>(rem % W) - cutoff;
            rem /= W;
        }
        SpectralField::Coeff v(ncomp);
        bool nonzero = false;
        for (size_t c = 0; c < ncomp; ++c) {
            v[c] = data[idx * ncomp + c];
            if (std::abs(v[c]) > 1e-14) nonzero = true;
        }
        if (nonzero) f.set_mode(k, std::move(v));
    }
    return f;
}

namespace {

class DetRng {
  public:
    explicit DetRng(std::uint64_t seed) : eng_(seed) {}
    double uniform() {
        // 53-bit mantissa draw in (0, 1); mt19937_64 is fully specified by
        // the standard, so studies replay bit-identically from their seeds
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }
    double normal() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 eng_;
    bool have_ = false;
    double spare_ = 0.0;
};

// canonical half-lattice representative: first nonzero component positive
bool is_canonical(const std::vector<int>& k) {
    for (int ki : k) {
        if (ki > 0) return true;
        if (ki < 0) return false;
    }
    return false;  // k = 0
}

template <typename Fn>
void for_each_lattice(int n, int K, Fn&& fn) {
    std::vector<int> k(static_cast<size_t>(n), -K);
    while (true) {
        fn(k);
        int axis = n - 1;
        while (axis >= 0 && ++k[static_cast<size_t>(axis)] > K) {
            k[static_cast<size_t>(axis)] = -K;
            --axis;
        }
        if (axis < 0) return;
    }
}

void set_hermitian_pair(SpectralField& f, const std::vector<int>& k, SpectralField::Coeff v) {
    SpectralField::Coeff vc(v.size());
    std::vector<int> mk(k.size());
    for (size_t i = 0; i < k.size(); ++i) {
        mk[i] = -k[i];
        vc[i] = std::conj(v[i]);
    }
    f.set_mode(k, std::move(v));
    f.set_mode(mk, std::move(vc));
}

}  // namespace

SpectralField make_decay_field(int n, int K, double s, std::uint64_t seed) {
    if (K < 2) throw InvalidParameter("make_decay_field: K must be >= 2");
    SpectralField f(n, K, true);
    DetRng rng(seed);
    for_each_lattice(n, K, [&](const std::vector<int>& k) {
        if (!is_canonical(k)) return;
        double k2 = 0.0;
        for (int ki : k) k2 += static_cast<double>(ki) * ki;
        double mag = std::pow(k2, -0.5 * (s + 0.5 * n + 0.51));
        SpectralField::Coeff v(static_cast<size_t>(n));
        double nrm = 0.0;
        for (int c = 0; c < n; ++c) {
            v[static_cast<size_t>(c)] = {rng.normal(), rng.normal()};
            nrm += std::norm(v[static_cast<size_t>(c)]);
        }
        nrm = std::sqrt(nrm);
        for (auto& z : v) z *= mag / nrm;
        set_hermitian_pair(f, k, std::move(v));
    });
    return f;
}

SpectralField make_random_field(int n, int K, std::uint64_t seed, double decay) {
    if (K < 1) throw InvalidParameter("make_random_field: K must be >= 1");
    SpectralField f(n, K, true);
    DetRng rng(seed);
    for_each_lattice(n, K, [&](const std::vector<int>& k) {
        if (!is_canonical(k)) return;
        double k2 = 0.0;
        for (int ki : k) k2 += static_cast<double>(ki) * ki;
        double mag = std::pow(k2, -0.5 * decay);
        SpectralField::Coeff v(static_cast<size_t>(n));
        for (int c = 0; c < n; ++c)
            v[static_cast<size_t>(c)] =
                std::complex<double>(rng.normal(), rng.normal()) * (0.5 * mag);
        set_hermitian_pair(f, k, std::move(v));
    });
    return f;
}

double decay_exponent_fit(const SpectralField& f) {
    int K = f.cutoff();
    double lo = K / 4.0, hi = static_cast<double>(K);
    struct Shell {
        double sum_logk = 0.0;
        double sum_logmag = 0.0;
        int count = 0;
    };
    std::map<int, Shell> shells;
    for (const auto& [k, v] : f.modes()) {
        double k2 = 0.0;
        for (int ki : k) k2 += static_cast<double>(ki) * ki;
        double r = std::sqrt(k2);
        if (r < lo || r > hi) continue;
        double mag2 = 0.0;
        for (const auto& c : v) mag2 += std::norm(c);
        if (mag2 <= 0.0) continue;
        Shell& sh = shells[static_cast<int>(std::lround(r))];
        sh.sum_logk += std::log(r);
        sh.sum_logmag += 0.5 * std::log(mag2);
        sh.count += 1;
    }
    if (shells.size() < 4)
        throw InsufficientData("decay_exponent_fit: needs at least 4 nonempty shells");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, np = 0.0;
    for (const auto& [shell, sh] : shells) {
        double x = sh.sum_logk / sh.count;
        double y = sh.sum_logmag / sh.count;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        np += 1.0;
    }
    return (np * sxy - sx * sy) / (np * sxx - sx * sx);
}

nlohmann::ordered_json field_to_json(const SpectralField& f) {
    nlohmann::ordered_json j;
    j["n"] = f.dim();
    j["K"] = f.cutoff();
    j["real_flag"] = f.is_real();
    auto entries = nlohmann::ordered_json::array();
    for (const auto& [k, v] : f.modes()) {
        nlohmann::ordered_json e;
        e["k"] = k;
        std::vector<double> re(v.size()), im(v.size());
        for (size_t i = 0; i < v.size(); ++i) {
            re[i] = v[i].real();
            im[i] = v[i].imag();
        }
        e["re"] = re;
        e["im"] = im;
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

SpectralField field_from_json(const nlohmann::json& j) {
    for (const auto& [key, value] : j.items()) {
        if (key != "n" && key != "K" && key != "real_flag" && key != "entries")
            throw ValidationError("field: unknown key '" + key + "'");
    }
    if (!j.contains("n") || !j.contains("K") || !j.contains("real_flag") || !j.contains("entries"))
        throw ValidationError("field: missing required key");
    SpectralField f(j.at("n").get<int>(), j.at("K").get<int>(), j.at("real_flag").get<bool>());
    for (const auto& e : j.at("entries")) {
        for (const auto& [key, value] : e.items()) {
            if (key != "k" && key != "re" && key != "im")
                throw ValidationError("field entry: unknown key '" + key + "'");
        }
        auto k = e.at("k").get<std::vector<int>>();
        auto re = e.at("re").get<std::vector<double>>();
        auto im = e.at("im").get<std::vector<double>>();
        if (re.size() != im.size())
            throw ValidationError("field entry: re/im length mismatch");
        SpectralField::Coeff v(re.size());
        for (size_t i = 0; i < re.size(); ++i) v[i] = {re[i], im[i]};
        f.set_mode(k, std::move(v));
    }
    f.check_invariants();
    return f;
}

void save_field(const SpectralField& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out << field_to_json(f).dump(2) << "\n";
}

SpectralField load_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(in);
    return field_from_json(j);
}

}  // namespace perispec
