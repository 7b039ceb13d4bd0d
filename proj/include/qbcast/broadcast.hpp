#pragma once

// Asymmetric broadcasting of alpha|00> + beta|11>.
//
// Local scenario: Alice and Bob each run the 1 -> 2 asymmetric cloner U(p) on
// their qubit. Six qubits are ordered (a1, a2, a3, b1, b2, b3), with a1 the
// most significant bit of the 64-dim index; a3 and b3 are the cloner
// ancillas. Nonlocal scenario: one d = 4 asymmetric cloner acting on the pair,
// whose two clones are white-noise mixtures of the input.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qbcast/entanglement.hpp"
#include "qbcast/error.hpp"
#include "qbcast/qmath.hpp"
#include "qbcast/states.hpp"

namespace qbcast {

enum class Scenario { local, nonlocal };
enum class Pair { a1b1, a2b2 };

inline const char* to_string(Scenario s) { return s == Scenario::local ? "local" : "nonlocal"; }
inline const char* to_string(Pair p) { return p == Pair::a1b1 ? "a1b1" : "a2b2"; }

/// Cloner asymmetry; q = 1 - p is always derived.
class CloneParams {
public:
    explicit CloneParams(double p) : p_(p) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error("p-out-of-range", "p must lie in [0, 1]");
    }
    double p() const noexcept { return p_; }
    double q() const noexcept { return 1.0 - p_; }

private:
    double p_;
};

namespace detail {

/// U(p)|x>|00> for x = 0, 1 over (clone 1, clone 2, ancilla).
inline std::array<std::array<double, 8>, 2> cloner_columns(const CloneParams& cp) {
    const double p = cp.p(), q = cp.q();
    const double nrm = 1.0 / std::sqrt(1.0 + p * p + q * q);
    std::array<std::array<double, 8>, 2> col{};
    col[0][0b000] = nrm;
    col[0][0b011] = p * nrm;
    col[0][0b101] = q * nrm;
    col[1][0b111] = nrm;
    col[1][0b100] = p * nrm;
    col[1][0b010] = q * nrm;
    return col;
}

inline double abs_alpha_beta(const PureTwoQubit& psi) { return psi.abs_alpha() * psi.abs_beta(); }

}  // namespace detail

/// Full 8x8 unitary. Columns |000> and |100> are the cloner action; the
/// remaining columns complete an orthonormal basis by Gram-Schmidt over the
/// computational basis in index order.
inline ComplexMatrix cloner_unitary(const CloneParams& cp) {
    const auto defining = detail::cloner_columns(cp);
    std::array<std::optional<std::array<cplx, 8>>, 8> cols;
    for (std::size_t x = 0; x < 2; ++x) {
        std::array<cplx, 8> c{};
        for (std::size_t i = 0; i < 8; ++i) c[i] = defining[x][i];
        cols[x == 0 ? 0b000 : 0b100] = c;
    }

    std::vector<std::array<cplx, 8>> basis{*cols[0b000], *cols[0b100]};
    std::size_t seed = 0;
    for (std::size_t slot = 0; slot < 8; ++slot) {
        if (cols[slot]) continue;
        for (;;) {
            std::array<cplx, 8> v{};
            v[seed++] = 1.0;
            for (const auto& b : basis) {
                cplx ov = 0.0;
                for (std::size_t i = 0; i < 8; ++i) ov += std::conj(b[i]) * v[i];
                for (std::size_t i = 0; i < 8; ++i) v[i] -= ov * b[i];
            }
            double n2 = 0.0;
            for (const auto& z : v) n2 += std::norm(z);
            if (n2 < 1e-8) continue;
            for (auto& z : v) z /= std::sqrt(n2);
            basis.push_back(v);
            cols[slot] = v;
            break;
        }
    }

    ComplexMatrix u(8, 8);
    for (std::size_t c = 0; c < 8; ++c)
        for (std::size_t r = 0; r < 8; ++r) u(r, c) = (*cols[c])[r];
    return u;
}

/// Fidelities <0|rho_k|0> of the two single-qubit clones of |0>.
inline std::pair<double, double> clone_fidelities(const CloneParams& cp) {
    const auto col = detail::cloner_columns(cp);
    const StateVector out(std::vector<cplx>(col[0].begin(), col[0].end()));
    const ComplexMatrix rho = out.projector();
    return {partial_trace(rho, {2, 2, 2}, {0})(0, 0).real(), partial_trace(rho, {2, 2, 2}, {1})(0, 0).real()};
}

/// U(p) x U(p) |psi>_{a1b1} |00>_{a2a3} |00>_{b2b3}, qubit order (a1, a2, a3, b1, b2, b3).
inline StateVector local_broadcast_full_state(const PureTwoQubit& psi, const CloneParams& cp) {
    std::vector<cplx> in(64, 0.0);
    in[0b000'000] = psi.alpha;
    in[0b100'100] = psi.beta;
    const ComplexMatrix u = cloner_unitary(cp);
    return StateVector(qbcast::apply(kron(u, u), in));
}

/// Closed-form or brute-force reduced states of one broadcasting run.
struct BroadcastOutputs {
    Scenario scenario;
    DensityMatrix rho_a1b1;
    DensityMatrix rho_a2b2;
    std::optional<DensityMatrix> rho_local_pair;  // rho^{a1a2} = rho^{b1b2}, local only

    const DensityMatrix& pair(Pair p) const { return p == Pair::a1b1 ? rho_a1b1 : rho_a2b2; }
};

inline BroadcastOutputs local_outputs(const PureTwoQubit& psi, const CloneParams& cp) {
    const double p = cp.p(), q = cp.q();
    const double a2 = std::norm(psi.alpha), b2 = std::norm(psi.beta);
    const double nn = 1.0 + p * p + q * q;
    const double n2 = nn * nn;
    const cplx ab_conj = psi.alpha * std::conj(psi.beta);

    // shared pair: first clones (w = p) or second clones (w = q)
    auto shared = [&](double w, double v) {
        XState x;
        x.rho11 = (a2 * (1 + w * w) * (1 + w * w) + b2 * std::pow(v, 4)) / n2;
        x.rho22 = x.rho33 = v * v * (1 + w * w) / n2;
        x.rho44 = (b2 * (1 + w * w) * (1 + w * w) + a2 * std::pow(v, 4)) / n2;
        x.rho14 = 4.0 * ab_conj * w * w / n2;
        return x.density();
    };

    XState lp;
    lp.rho11 = a2 / nn;
    lp.rho22 = (p * p * q * q + b2 * std::pow(q, 4) + b2 * q * q + a2 * std::pow(p, 4) + a2 * p * p) / n2;
    lp.rho33 = (p * p * q * q + b2 * std::pow(p, 4) + b2 * p * p + a2 * std::pow(q, 4) + a2 * q * q) / n2;
    lp.rho44 = b2 / nn;
    lp.rho23 = (p * q + p * p * p * q + p * q * q * q) / n2;

    return {Scenario::local, shared(p, q), shared(q, p), lp.density()};
}

inline BroadcastOutputs nonlocal_outputs(const PureTwoQubit& psi, const CloneParams& cp) {
    const double p = cp.p(), q = cp.q();
    const double d = 1.0 + 3.0 * (p * p + q * q);
    const ComplexMatrix proj = pure_projector(psi).matrix();
    const ComplexMatrix id = ComplexMatrix::identity(4);
    auto clone = [&](double w, double v) {
        // [(1 - v^2 + 3 w^2) |psi><psi| + v^2 I] / d
        return validate_density((proj * (1.0 - v * v + 3.0 * w * w) + id * (v * v)) / d);
    };
    return {Scenario::nonlocal, clone(p, q), clone(q, p), std::nullopt};
}

inline BroadcastOutputs broadcast_outputs(Scenario s, const PureTwoQubit& psi, const CloneParams& cp) {
    return s == Scenario::local ? local_outputs(psi, cp) : nonlocal_outputs(psi, cp);
}

/// Reduced states of local_broadcast_full_state by explicit partial traces.
inline BroadcastOutputs local_outputs_brute_force(const PureTwoQubit& psi, const CloneParams& cp) {
    const ComplexMatrix full = local_broadcast_full_state(psi, cp).projector();
    static constexpr std::array<std::size_t, 6> dims{2, 2, 2, 2, 2, 2};
    auto reduce = [&](std::array<std::size_t, 2> keep) {
        ComplexMatrix r = partial_trace(full, dims, keep);
        return validate_density((r + r.adjoint()) * 0.5);
    };
    return {Scenario::local, reduce({0, 3}), reduce({1, 4}), reduce({0, 1})};
}

/// rho^{b1b2}, which equals rho^{a1a2}.
inline DensityMatrix local_bob_pair_brute_force(const PureTwoQubit& psi, const CloneParams& cp) {
    const ComplexMatrix full = local_broadcast_full_state(psi, cp).projector();
    static constexpr std::array<std::size_t, 6> dims{2, 2, 2, 2, 2, 2};
    static constexpr std::array<std::size_t, 2> keep{3, 4};
    ComplexMatrix r = partial_trace(full, dims, keep);
    return validate_density((r + r.adjoint()) * 0.5);
}

// ---------------------------------------------------------------------------
// closed-form concurrences

/// Concurrence expression before clamping at zero: C = max(0, value).
inline double concurrence_unclamped(Scenario s, Pair pair, double ab, const CloneParams& cp) {
    const double w = pair == Pair::a1b1 ? cp.p() : cp.q();
    const double v = 1.0 - w;
    if (s == Scenario::local) {
        const double nn = 1.0 + w * w + v * v;
        return 2.0 * (4.0 * w * w * ab - v * v * (1.0 + w * w)) / (nn * nn);
    }
    return 2.0 * ((1.0 - v * v + 3.0 * w * w) * ab - v * v) / (1.0 + 3.0 * (w * w + v * v));
}

inline double concurrence_unclamped(Scenario s, Pair pair, const PureTwoQubit& psi, const CloneParams& cp) {
    return concurrence_unclamped(s, pair, detail::abs_alpha_beta(psi), cp);
}

struct LocalConcurrences {
    double a1b1 = 0.0;
    double a2b2 = 0.0;
    double local_pair = 0.0;  // rho^{a1a2} = rho^{b1b2}
};

struct NonlocalConcurrences {
    double a1b1 = 0.0;
    double a2b2 = 0.0;
};

inline LocalConcurrences local_concurrences(const PureTwoQubit& psi, const CloneParams& cp) {
    const double ab = detail::abs_alpha_beta(psi);
    const double p = cp.p(), q = cp.q();
    return {std::max(0.0, concurrence_unclamped(Scenario::local, Pair::a1b1, ab, cp)),
            std::max(0.0, concurrence_unclamped(Scenario::local, Pair::a2b2, ab, cp)),
            2.0 * std::max(0.0, (p * q - ab) / (1.0 + p * p + q * q))};
}

inline NonlocalConcurrences nonlocal_concurrences(const PureTwoQubit& psi, const CloneParams& cp) {
    const double ab = detail::abs_alpha_beta(psi);
    return {std::max(0.0, concurrence_unclamped(Scenario::nonlocal, Pair::a1b1, ab, cp)),
            std::max(0.0, concurrence_unclamped(Scenario::nonlocal, Pair::a2b2, ab, cp))};
}

inline double pair_concurrence(Scenario s, Pair pair, const PureTwoQubit& psi, const CloneParams& cp) {
    return std::max(0.0, concurrence_unclamped(s, pair, psi, cp));
}

// ---------------------------------------------------------------------------
// inseparability regions

struct AlphaInterval {
    double lower = 0.0;
    double upper = 0.0;
    bool contains(double a) const { return a > lower && a < upper; }  // open
};

/// p-range over which one pair can be inseparable for some |alpha|.
struct PWindow {
    double lower = 0.0;
    double upper = 1.0;
    bool lower_closed = false;
    bool upper_closed = false;
    bool contains(double p) const {
        return (lower_closed ? p >= lower : p > lower) && (upper_closed ? p <= upper : p < upper);
    }
};

namespace detail {

/// Bisection for a sign change of f on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    if ((flo > 0.0) == (f(hi) > 0.0)) throw Error("no-bracket");
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Term K in |alpha|^4 - |alpha|^2 + K/4 < 0, so the interval exists iff K < 1.
inline double region_k(Scenario s, Pair pair, double p) {
    const double w = pair == Pair::a1b1 ? p : 1.0 - p;
    const double v = 1.0 - w;
    if (s == Scenario::local) {
        const double num = std::pow(v, 4) * (1 + w * w) * (1 + w * w);
        const double den = 4.0 * std::pow(w, 4);
        return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
    }
    const double m = 1.0 - v * v + 3.0 * w * w;
    return 4.0 * std::pow(v, 4) / (m * m);
}

}  // namespace detail

struct RegionRoots {
    double p1_bisection, p1_closed;
    double p2_bisection, p2_closed;
};

/// Local-scenario window ends: roots of p^4 - 2p^3 - 2p + 1 and
/// p^4 - 2p^3 + 4p - 2 on [0, 1], with the closed radicals alongside.
inline RegionRoots local_region_roots() {
    const double c = std::pow(3.0, 0.25) / std::sqrt(2.0);
    RegionRoots r;
    r.p1_bisection = detail::bisect([](double p) { return p * p * p * p - 2 * p * p * p - 2 * p + 1; }, 0.0, 1.0);
    r.p2_bisection = detail::bisect([](double p) { return p * p * p * p - 2 * p * p * p + 4 * p - 2; }, 0.0, 1.0);
    r.p1_closed = 0.5 - c + std::sqrt(3.0) / 2.0;
    r.p2_closed = 0.5 + c - std::sqrt(3.0) / 2.0;
    return r;
}

/// Nonlocal window ends from the sign of the discriminants, located by
/// bisection. Algebraically both reduce to linear conditions: p > 1/3 and
/// p < 2/3.
inline std::pair<double, double> nonlocal_window_bisection() {
    auto disc = [](Pair pr) {
        return [pr](double p) { return 1.0 - detail::region_k(Scenario::nonlocal, pr, p); };
    };
    return {detail::bisect(disc(Pair::a1b1), 0.0, 1.0), detail::bisect(disc(Pair::a2b2), 0.0, 1.0)};
}

class RegionBoundaries {
public:
    explicit RegionBoundaries(Scenario s) : scenario_(s) {
        if (s == Scenario::local) {
            const auto r = local_region_roots();
            a1b1_ = {r.p1_bisection, 1.0, false, true};
            a2b2_ = {0.0, r.p2_bisection, true, false};
        } else {
            // 1 - 4q^4/(1 - q^2 + 3p^2)^2 > 0  <=>  2 - 6p < 0
            a1b1_ = {1.0 / 3.0, 1.0, false, true};
            a2b2_ = {0.0, 2.0 / 3.0, true, false};
        }
    }

    Scenario scenario() const noexcept { return scenario_; }
    const PWindow& pair_window(Pair p) const { return p == Pair::a1b1 ? a1b1_ : a2b2_; }
    /// Simultaneous window (open).
    double p_lower() const { return a1b1_.lower; }
    double p_upper() const { return a2b2_.upper; }

    /// f-/f+ and g-/g+ (local) or xi-/xi+ and eta-/eta+ (nonlocal).
    std::optional<AlphaInterval> pair_interval(Pair pair, double p) const {
        if (!pair_window(pair).contains(p)) return std::nullopt;
        const double k = detail::region_k(scenario_, pair, p);
        if (!(k < 1.0)) return std::nullopt;
        const double r = std::sqrt(1.0 - k);
        return AlphaInterval{std::sqrt(0.5 * (1.0 - r)), std::sqrt(0.5 * (1.0 + r))};
    }

    std::optional<AlphaInterval> joint_interval(double p) const {
        const auto a = pair_interval(Pair::a1b1, p);
        const auto b = pair_interval(Pair::a2b2, p);
        if (!a || !b) return std::nullopt;
        AlphaInterval j{std::max(a->lower, b->lower), std::min(a->upper, b->upper)};
        if (!(j.lower < j.upper)) return std::nullopt;
        return j;
    }

    /// Extremes of the joint interval over the simultaneous p-window.
    AlphaInterval global_alpha_span() const {
        auto lower_at = [&](double p) {
            const auto j = joint_interval(p);
            return j ? j->lower : std::numeric_limits<double>::infinity();
        };
        auto neg_upper_at = [&](double p) {
            const auto j = joint_interval(p);
            return j ? -j->upper : std::numeric_limits<double>::infinity();
        };
        return {minimize(lower_at), -minimize(neg_upper_at)};
    }

private:
    // coarse scan then golden-section refinement around the best sample
    double minimize(const std::function<double(double)>& f) const {
        constexpr int kScan = 2000;
        const double lo = p_lower(), hi = p_upper();
        const double h = (hi - lo) / kScan;
        int best = 1;
        for (int i = 1; i < kScan; ++i)
            if (f(lo + i * h) < f(lo + best * h)) best = i;
        double a = lo + (best - 1) * h, b = lo + (best + 1) * h;
        const double g = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = b - g * (b - a), d = a + g * (b - a);
        double fc = f(c), fd = f(d);
        while (b - a > 1e-12) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d);
            }
        }
        return std::min({f(0.5 * (a + b)), fc, fd, f(lo + best * h)});
    }

    Scenario scenario_;
    PWindow a1b1_;
    PWindow a2b2_;
};

inline RegionBoundaries region_boundaries(Scenario s) { return RegionBoundaries(s); }

/// Both shared pairs have strictly positive closed-form concurrence.
inline bool simultaneous_inseparable(Scenario s, const PureTwoQubit& psi, const CloneParams& cp) {
    return concurrence_unclamped(s, Pair::a1b1, psi, cp) > 0.0 && concurrence_unclamped(s, Pair::a2b2, psi, cp) > 0.0;
}

/// Membership of |alpha| in the joint boundary interval at p.
inline bool inside_region(const RegionBoundaries& rb, double abs_alpha, double p) {
    const auto j = rb.joint_interval(p);
    return j && j->contains(abs_alpha);
}

// ---------------------------------------------------------------------------
// comparisons

/// Nonlocal minus local concurrence expression (unclamped), closed form.
/// Carries the factor p(1-p)^2 (resp. q(1-q)^2) and (1 + 4|alpha||beta|).
inline double concurrence_gap(Pair pair, const PureTwoQubit& psi, const CloneParams& cp) {
    const double w = pair == Pair::a1b1 ? cp.p() : cp.q();
    const double ab = detail::abs_alpha_beta(psi);
    const double u = 1.0 - w + w * w;
    return w * (1 - w) * (1 - w) * (1 - w + w * w + w * w * w) / (2.0 * u * u * (2 - 3 * w + 3 * w * w)) *
           (1.0 + 4.0 * ab);
}

/// Same difference by subtracting the two concurrence expressions.
inline double concurrence_gap_direct(Pair pair, const PureTwoQubit& psi, const CloneParams& cp) {
    return concurrence_unclamped(Scenario::nonlocal, pair, psi, cp) -
           concurrence_unclamped(Scenario::local, pair, psi, cp);
}

/// C(psi) - [C(rho^{a1b1}) + C(rho^{a2b2})] on the simultaneous region.
inline double sum_deficit(Scenario s, const PureTwoQubit& psi, const CloneParams& cp) {
    if (!simultaneous_inseparable(s, psi, cp)) throw Error("outside-region", "outputs are not both inseparable");
    return concurrence_pure(psi) - pair_concurrence(s, Pair::a1b1, psi, cp) - pair_concurrence(s, Pair::a2b2, psi, cp);
}

/// Nonlocal deficit in closed form, [1 - 2(1 + |alpha||beta|) p q] / (2 - 3p + 3p^2).
inline double nonlocal_sum_deficit_closed(const PureTwoQubit& psi, const CloneParams& cp) {
    const double p = cp.p();
    return (1.0 - 2.0 * (1.0 + detail::abs_alpha_beta(psi)) * p * (1.0 - p)) / (2.0 - 3.0 * p + 3.0 * p * p);
}

/// Golden-section maximization of the pair concurrence over |alpha| in [0, 1].
inline double argmax_alpha_concurrence(Scenario s, Pair pair, const CloneParams& cp) {
    if (!region_boundaries(s).pair_window(pair).contains(cp.p()))
        throw Error("outside-region", std::string(to_string(pair)) + " is separable for every alpha at this p");
    auto f = [&](double a) { return -concurrence_unclamped(s, pair, a * std::sqrt(std::max(0.0, 1.0 - a * a)), cp); };
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 1.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-8) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace qbcast
