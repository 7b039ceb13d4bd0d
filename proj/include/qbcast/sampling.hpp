#pragma once

// Random test states for property checks and the verification run.

#include <random>

#include "qbcast/states.hpp"

namespace qbcast::sampling {

/// Random valid X state: Dirichlet populations, coherences uniform in
/// magnitude up to the PSD bound with uniform phases.
inline XState random_x_state(std::mt19937_64& rng, bool zero_rho23 = false) {
    std::exponential_distribution<double> ex(1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double d[4];
    double sum = 0.0;
    for (double& x : d) sum += (x = ex(rng));
    for (double& x : d) x /= sum;
    const double two_pi = 2.0 * std::acos(-1.0);
    XState xs{d[0], d[1], d[2], d[3], 0.0, 0.0};
    xs.rho14 = std::polar(u(rng) * std::sqrt(d[0] * d[3]), two_pi * u(rng));
    if (!zero_rho23) xs.rho23 = std::polar(u(rng) * std::sqrt(d[1] * d[2]), two_pi * u(rng));
    return xs;
}

/// rho = G G^dagger / Tr with G a 4 x rank complex Ginibre matrix.
inline DensityMatrix random_density(std::mt19937_64& rng, std::size_t rank = 4) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix gm(4, rank);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < rank; ++j) gm(i, j) = cplx(g(rng), g(rng));
    ComplexMatrix m = gm * gm.adjoint();
    m /= m.trace();
    // exact hermiticity
    m = (m + m.adjoint()) * 0.5;
    return validate_density(m);
}

}  // namespace qbcast::sampling
