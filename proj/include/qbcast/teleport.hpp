#pragma once

// Teleportation through a two-qubit channel: the N(rho) usefulness measure,
// the maximal fidelity, the closed-form relation to concurrence for X states
// with rho23 = 0 and rho22 = rho33 < 1/4, and a protocol simulator used to
// certify the maximal fidelity operationally.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "qbcast/entanglement.hpp"
#include "qbcast/error.hpp"
#include "qbcast/nelder_mead.hpp"
#include "qbcast/qmath.hpp"
#include "qbcast/states.hpp"

namespace qbcast {

struct ChannelReport {
    double n_value = 0.0;
    double f_max = 0.0;
    bool useful = false;
    bool theorem_applicable = false;
    double concurrence = 0.0;
};

inline double f_max_from_n(double n_value) { return 0.5 * (1.0 + n_value / 3.0); }

/// Tr sqrt(T^T T): sum of the singular values of the correlation matrix.
inline double n_function(const DensityMatrix& rho) {
    const auto sv = singular_values_3x3(fano_decompose(rho).t);
    return sv[0] + sv[1] + sv[2];
}

/// 4|rho14| + |1 - 2 rho22 - 2 rho33|, valid only when rho23 = 0.
inline double n_function_x(const XState& x) {
    if (std::abs(x.rho23) > 1e-10) throw Error("theorem-hypotheses-violated", "rho23 != 0");
    return 4.0 * std::abs(x.rho14) + std::abs(1.0 - 2.0 * x.rho22 - 2.0 * x.rho33);
}

inline double f_max(const DensityMatrix& rho) { return f_max_from_n(n_function(rho)); }

/// Empty string when the X state satisfies rho23 = 0, rho22 = rho33 < 1/4,
/// otherwise the name of the first violated hypothesis.
inline std::string theorem_hypothesis_violation(const XState& x) {
    if (std::abs(x.rho23) > 1e-10) return "rho23-nonzero";
    if (std::abs(x.rho22 - x.rho33) > 1e-10) return "rho22-ne-rho33";
    if (!(x.rho22 < 0.25 - 1e-12)) return "rho22-not-below-quarter";
    return {};
}

/// F_max = 2/3 + C/3 for inseparable X states meeting the hypotheses.
inline ChannelReport theorem_report(const XState& x) {
    if (auto why = theorem_hypothesis_violation(x); !why.empty()) throw Error("theorem-hypotheses-violated", why);
    const auto c = concurrence_x(x);
    if (c.value <= 0.0) throw Error("separable-channel", "|rho14| <= rho22");
    ChannelReport r;
    r.concurrence = c.value;
    r.n_value = 1.0 + 2.0 * c.value;
    r.f_max = 2.0 / 3.0 + c.value / 3.0;
    r.useful = true;
    r.theorem_applicable = true;
    return r;
}

/// General route: N from the SVD of T, concurrence from Wootters. The
/// theorem flag is set when the state also meets the theorem hypotheses.
inline ChannelReport channel_report(const DensityMatrix& rho) {
    ChannelReport r;
    r.n_value = n_function(rho);
    r.f_max = f_max_from_n(r.n_value);
    r.useful = r.n_value > 1.0;
    r.concurrence = concurrence_general(rho).value;
    try {
        const auto x = as_x_state(rho);
        r.theorem_applicable = theorem_hypothesis_violation(x).empty() && concurrence_x(x).value > 0.0;
    } catch (const Error&) {
        r.theorem_applicable = false;
    }
    return r;
}

// ---------------------------------------------------------------------------
// protocol simulation

/// Bob's correction for each Bell outcome, outcome order Phi+, Phi-, Psi+, Psi-.
using Corrections = std::array<ComplexMatrix, 4>;

/// Bell states over (input qubit, Alice's channel qubit), amplitude [i][j].
inline const std::array<std::array<std::array<double, 2>, 2>, 4>& bell_basis() {
    static const double h = 1.0 / std::sqrt(2.0);
    static const std::array<std::array<std::array<double, 2>, 2>, 4> b{{
        {{{h, 0.0}, {0.0, h}}},   // Phi+
        {{{h, 0.0}, {0.0, -h}}},  // Phi-
        {{{0.0, h}, {h, 0.0}}},   // Psi+
        {{{0.0, h}, {-h, 0.0}}},  // Psi-
    }};
    return b;
}

/// (I, sigma_3, sigma_1, sigma_1 sigma_3): the textbook corrections.
inline Corrections standard_corrections() {
    return {pauli::identity(), pauli::z(), pauli::x(), pauli::x() * pauli::z()};
}

inline bool is_unitary(const ComplexMatrix& u, double tol = 1e-10) {
    return u.rows() == 2 && u.cols() == 2 && (u * u.adjoint()).approx_equal(ComplexMatrix::identity(2), tol);
}

inline void require_unitary(const Corrections& c) {
    for (std::size_t k = 0; k < 4; ++k)
        if (!is_unitary(c[k])) throw Error("not-unitary", "correction " + std::to_string(k));
}

namespace detail {

/// Unnormalized Bob states sigma_k for input `phi`; p_k = Tr sigma_k.
inline std::array<std::array<cplx, 4>, 4> bob_branches(const ComplexMatrix& rho, const QubitState& phi) {
    std::array<std::array<cplx, 4>, 4> out{};
    const auto& bell = bell_basis();
    for (std::size_t k = 0; k < 4; ++k) {
        cplx v[2];
        for (std::size_t j = 0; j < 2; ++j) v[j] = bell[k][0][j] * phi[0] + bell[k][1][j] * phi[1];
        for (std::size_t m = 0; m < 2; ++m)
            for (std::size_t n = 0; n < 2; ++n) {
                cplx acc = 0.0;
                for (std::size_t j = 0; j < 2; ++j)
                    for (std::size_t jp = 0; jp < 2; ++jp)
                        acc += v[j] * std::conj(v[jp]) * rho(2 * j + m, 2 * jp + n);
                out[k][2 * m + n] = acc;
            }
    }
    return out;
}

/// <phi| U sigma U^dagger |phi>
inline double corrected_overlap(const std::array<cplx, 4>& sigma, const ComplexMatrix& u, const QubitState& phi) {
    // w = U^dagger phi
    const cplx w0 = std::conj(u(0, 0)) * phi[0] + std::conj(u(1, 0)) * phi[1];
    const cplx w1 = std::conj(u(0, 1)) * phi[0] + std::conj(u(1, 1)) * phi[1];
    const cplx r = std::conj(w0) * (sigma[0] * w0 + sigma[1] * w1) + std::conj(w1) * (sigma[2] * w0 + sigma[3] * w1);
    return r.real();
}

inline const std::array<QubitState, 6>& axis_states() {
    static const double h = 1.0 / std::sqrt(2.0);
    static const std::array<QubitState, 6> s{{
        {1.0, 0.0},
        {0.0, 1.0},
        {h, h},
        {h, -h},
        {h, cplx(0, h)},
        {h, cplx(0, -h)},
    }};
    return s;
}

}  // namespace detail

/// Bloch-sphere average of the protocol fidelity, evaluated exactly.
///
/// The integrand is a quadratic polynomial in the Bloch vector of the input,
/// so the average over the six axis states (a spherical 3-design) is exact.
inline double exact_average_fidelity(const DensityMatrix& rho, const Corrections& corr) {
    double total = 0.0;
    for (const auto& phi : detail::axis_states()) {
        const auto branches = detail::bob_branches(rho.matrix(), phi);
        for (std::size_t k = 0; k < 4; ++k) total += detail::corrected_overlap(branches[k], corr[k], phi);
    }
    return total / 6.0;
}

struct TeleportOutcome {
    double average_fidelity = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
    Corrections strategy;
};

/// Monte Carlo run of the protocol: Haar input, sampled Bell outcome,
/// correction on Bob's qubit, fidelity with the input.
///
/// Samples are split into fixed-size shards, each with its own generator
/// seeded from (seed, shard index), so the estimate does not depend on the
/// number of worker threads.
inline TeleportOutcome simulate_teleportation(const DensityMatrix& rho, const Corrections& corr, std::size_t samples,
                                              std::uint64_t seed, unsigned jobs = 1) {
    require_unitary(corr);
    if (samples == 0) throw Error("invalid-args", "samples must be >= 1");

    constexpr std::size_t kShard = 4096;
    const std::size_t n_shards = (samples + kShard - 1) / kShard;
    struct Acc {
        double sum = 0.0, sum_sq = 0.0;
    };
    std::vector<Acc> acc(n_shards);

    auto run_shard = [&](std::size_t s) {
        std::seed_seq sseq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                           static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
        std::mt19937_64 rng(sseq);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const std::size_t begin = s * kShard;
        const std::size_t end = std::min(samples, begin + kShard);
        Acc a;
        for (std::size_t i = begin; i < end; ++i) {
            const QubitState phi = sample_haar_qubit(rng);
            const auto branches = detail::bob_branches(rho.matrix(), phi);
            double probs[4];
            for (std::size_t k = 0; k < 4; ++k) probs[k] = std::max(0.0, (branches[k][0] + branches[k][3]).real());
            double draw = u(rng) * (probs[0] + probs[1] + probs[2] + probs[3]);
            std::size_t k = 0;
            while (k < 3 && draw >= probs[k]) draw -= probs[k++];
            const double score =
                probs[k] > 0.0 ? detail::corrected_overlap(branches[k], corr[k], phi) / probs[k] : 0.0;
            a.sum += score;
            a.sum_sq += score * score;
        }
        acc[s] = a;
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n_shards)));
    if (jobs == 1) {
        for (std::size_t s = 0; s < n_shards; ++s) run_shard(s);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t s = w; s < n_shards; s += jobs) run_shard(s);
            });
        for (auto& t : pool) t.join();
    }

    double sum = 0.0, sum_sq = 0.0;
    for (const auto& a : acc) {
        sum += a.sum;
        sum_sq += a.sum_sq;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = samples > 1 ? std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0)) : 0.0;
    return {mean, std::sqrt(var / n), samples, corr};
}

/// Rz(phi) Ry(theta) Rz(lambda) up to a global phase.
inline ComplexMatrix unitary_from_angles(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    return ComplexMatrix::from_rows({{c, -std::polar(s, lambda)}, {std::polar(s, phi), std::polar(c, phi + lambda)}});
}

struct OptimizeOptions {
    std::size_t max_evaluations = 10000;
    double tolerance = 1e-6;
};

struct OptimizedCorrections {
    Corrections corrections;
    double exact_fidelity = 0.0;
    std::size_t evaluations = 0;
};

/// Searches Bob's four corrections for the best exact fidelity. Starts at the
/// best assignment of {I, X, Y, Z} to the four outcomes, then refines the 12
/// Euler angles with Nelder-Mead until f_max(rho) is reached.
inline OptimizedCorrections optimize_corrections(const DensityMatrix& rho, const OptimizeOptions& opt = {}) {
    const double pi = std::acos(-1.0);
    // Euler angles reproducing each Pauli up to phase
    const std::array<std::array<double, 3>, 4> pauli_angles{{{0, 0, 0}, {pi, 0, pi}, {pi, pi / 2, pi / 2}, {0, 0, pi}}};

    auto build = [](const std::vector<double>& a) {
        Corrections c;
        for (std::size_t k = 0; k < 4; ++k) c[k] = unitary_from_angles(a[3 * k], a[3 * k + 1], a[3 * k + 2]);
        return c;
    };

    std::size_t evaluations = 0;
    std::vector<double> best_angles(12);
    double best = -1.0;
    std::array<int, 4> perm{0, 1, 2, 3};
    do {
        std::vector<double> a(12);
        for (std::size_t k = 0; k < 4; ++k)
            for (std::size_t j = 0; j < 3; ++j) a[3 * k + j] = pauli_angles[perm[k]][j];
        const double f = exact_average_fidelity(rho, build(a));
        ++evaluations;
        if (f > best) {
            best = f;
            best_angles = a;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    const double target = f_max(rho);
    double step = 0.3;
    while (target - best > opt.tolerance && evaluations < opt.max_evaluations) {
        NelderMeadOptions nm;
        nm.max_evaluations = opt.max_evaluations - evaluations;
        nm.initial_step = step;
        const auto r = nelder_mead([&](const std::vector<double>& a) { return -exact_average_fidelity(rho, build(a)); },
                                   best_angles, nm);
        evaluations += r.evaluations;
        if (-r.value > best) {
            best = -r.value;
            best_angles = r.x;
        }
        step = std::max(step * 0.5, 1e-3);
    }
    if (target - best > opt.tolerance)
        throw Error("optimizer-stalled", "best fidelity " + std::to_string(best) + " vs f_max " + std::to_string(target));
    return {build(best_angles), best, evaluations};
}

}  // namespace qbcast
