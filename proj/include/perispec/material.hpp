#pragma once

#include <string>

#include "perispec/errors.hpp"

namespace perispec {

// Parameters of the peridynamic operator: spatial dimension n, horizon
// delta, kernel exponent beta (beta < n + 2), and Lame constants mu,
// lambda_star.  Immutable after validation.
struct Material {
    int n = 1;
    double delta = 1.0;
    double beta = 0.0;
    double mu = 1.0;
    double lambda_star = 1.0;

    void validate() const {
        if (n < 1) throw InvalidParameter("material: n must be >= 1");
        if (!(delta > 0.0)) throw InvalidParameter("material: delta must be > 0");
        if (!(beta < n + 2.0))
            throw InvalidParameter("material: requires beta < n+2 (kernel integrability)");
        if (!(mu > 0.0)) throw InvalidParameter("material: mu must be > 0");
    }
};

inline Material make_material(int n, double delta, double beta, double mu, double lambda_star) {
    Material m{n, delta, beta, mu, lambda_star};
    m.validate();
    return m;
}

}  // namespace perispec
