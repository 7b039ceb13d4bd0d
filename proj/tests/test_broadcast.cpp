#include <gtest/gtest.h>

#include <random>

#include "qbcast/broadcast.hpp"
#include "qbcast/entanglement.hpp"
#include "test_support.hpp"

using namespace qbcast;
using qbcast::testing::naive_partial_trace_qubits;
using qbcast::testing::outer;

namespace {

std::string error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "no-error";
}

/// Term-by-term expansion of U(p) x U(p) on |psi>|0000>, written in the
/// grouping |a3 b3>|a1 a2>|b1 b2> and placed in the (a1,a2,a3,b1,b2,b3) order.
std::vector<cplx> expanded_broadcast_state(cplx alpha, cplx beta, double p) {
    const double q = 1 - p;
    std::vector<cplx> v(64, 0.0);
    auto add = [&](int a3b3, int a1a2, int b1b2, cplx amp) {
        const int a3 = a3b3 >> 1, b3 = a3b3 & 1;
        const int a1 = a1a2 >> 1, a2 = a1a2 & 1;
        const int b1 = b1b2 >> 1, b2 = b1b2 & 1;
        v[a1 << 5 | a2 << 4 | a3 << 3 | b1 << 2 | b2 << 1 | b3] += amp;
    };
    add(0b00, 0b00, 0b00, alpha);
    add(0b00, 0b10, 0b10, beta * p * p);
    add(0b00, 0b10, 0b01, beta * p * q);
    add(0b00, 0b01, 0b10, beta * p * q);
    add(0b00, 0b01, 0b01, beta * q * q);
    add(0b01, 0b00, 0b01, alpha * p);
    add(0b01, 0b00, 0b10, alpha * q);
    add(0b01, 0b10, 0b11, beta * p);
    add(0b01, 0b01, 0b11, beta * q);
    add(0b10, 0b10, 0b00, alpha * q);
    add(0b10, 0b01, 0b00, alpha * p);
    add(0b10, 0b11, 0b10, beta * p);
    add(0b10, 0b11, 0b01, beta * q);
    add(0b11, 0b01, 0b01, alpha * p * p);
    add(0b11, 0b01, 0b10, alpha * p * q);
    add(0b11, 0b10, 0b01, alpha * p * q);
    add(0b11, 0b10, 0b10, alpha * q * q);
    add(0b11, 0b11, 0b11, beta);
    for (auto& z : v) z /= 1 + p * p + q * q;
    return v;
}

/// The shared-pair matrix with weights (w, v) = (p, q) for a1b1 and (q, p) for a2b2.
ComplexMatrix shared_pair_literal(cplx alpha, cplx beta, double w, double v) {
    const double n2 = std::pow(1 + w * w + v * v, 2);
    const double a2 = std::norm(alpha), b2 = std::norm(beta);
    ComplexMatrix m(4, 4);
    m(0, 0) = a2 * std::pow(1 + w * w, 2) + b2 * std::pow(v, 4);
    m(1, 1) = m(2, 2) = v * v * (1 + w * w);
    m(3, 3) = b2 * std::pow(1 + w * w, 2) + a2 * std::pow(v, 4);
    m(0, 3) = 4.0 * alpha * std::conj(beta) * w * w;
    m(3, 0) = std::conj(m(0, 3));
    return m / n2;
}

ComplexMatrix local_pair_literal(cplx alpha, cplx beta, double p) {
    const double q = 1 - p;
    const double n = 1 + p * p + q * q;
    const double a2 = std::norm(alpha), b2 = std::norm(beta);
    ComplexMatrix m(4, 4);
    m(0, 0) = a2 * n;
    m(1, 1) = p * p * q * q + b2 * std::pow(q, 4) + b2 * q * q + a2 * std::pow(p, 4) + a2 * p * p;
    m(1, 2) = m(2, 1) = p * q + p * p * p * q + p * q * q * q;
    m(2, 2) = p * p * q * q + b2 * std::pow(p, 4) + b2 * p * p + a2 * std::pow(q, 4) + a2 * q * q;
    m(3, 3) = b2 * n;
    return m / (n * n);
}

struct Case {
    cplx alpha;
    double p;
};

std::vector<Case> cases() {
    std::vector<Case> out;
    for (double a : {0.0, 0.2, 0.5, 0.70710678118654752, 0.9, 1.0})
        for (double p : {0.0, 0.1, 0.435, 0.5, 0.77, 1.0}) out.push_back({std::polar(a, 0.3 + a), p});
    return out;
}

}  // namespace

TEST(Cloner, ParameterRange) {
    EXPECT_EQ(error_code([] { CloneParams(-0.01); }), "p-out-of-range");
    EXPECT_EQ(error_code([] { CloneParams(1.01); }), "p-out-of-range");
    EXPECT_NEAR(CloneParams(0.3).q(), 0.7, 1e-15);
}

TEST(Cloner, UnitaryWithDefiningColumns) {
    for (double p : {0.0, 0.25, 0.5, 1.0}) {
        const double q = 1 - p, n = std::sqrt(1 + p * p + q * q);
        const auto u = cloner_unitary(CloneParams(p));
        EXPECT_LE((u.adjoint() * u).max_abs_diff(ComplexMatrix::identity(8)), 1e-12);
        EXPECT_NEAR(u(0b000, 0b000).real(), 1 / n, 1e-15);
        EXPECT_NEAR(u(0b011, 0b000).real(), p / n, 1e-15);
        EXPECT_NEAR(u(0b101, 0b000).real(), q / n, 1e-15);
        EXPECT_NEAR(u(0b111, 0b100).real(), 1 / n, 1e-15);
        EXPECT_NEAR(u(0b100, 0b100).real(), p / n, 1e-15);
        EXPECT_NEAR(u(0b010, 0b100).real(), q / n, 1e-15);
    }
}

TEST(Cloner, CloneFidelities) {
    for (double p : {0.0, 0.3, 0.5, 0.8, 1.0}) {
        const double q = 1 - p, n = 1 + p * p + q * q;
        const auto [f1, f2] = clone_fidelities(CloneParams(p));
        EXPECT_NEAR(f1, (1 + p * p) / n, 1e-14);
        EXPECT_NEAR(f2, (1 + q * q) / n, 1e-14);
    }
    const auto [s1, s2] = clone_fidelities(CloneParams(0.5));
    EXPECT_NEAR(s1, 5.0 / 6.0, 1e-14);
    EXPECT_NEAR(s2, 5.0 / 6.0, 1e-14);
}

TEST(LocalBroadcast, FullStateMatchesExpansion) {
    for (const auto& c : cases()) {
        const auto psi = PureTwoQubit::from_alpha(c.alpha);
        const auto got = local_broadcast_full_state(psi, CloneParams(c.p));
        const auto expected = expanded_broadcast_state(psi.alpha, psi.beta, c.p);
        for (std::size_t i = 0; i < 64; ++i) EXPECT_NEAR(std::abs(got[i] - expected[i]), 0.0, 1e-15) << i;
    }
}

TEST(LocalBroadcast, ReducedStatesMatchLiteralMatrices) {
    for (const auto& c : cases()) {
        const auto psi = PureTwoQubit::from_alpha(c.alpha);
        const double p = c.p, q = 1 - p;
        const auto full = outer(expanded_broadcast_state(psi.alpha, psi.beta, p));
        const auto a1b1 = naive_partial_trace_qubits(full, 6, {0, 3});
        const auto a2b2 = naive_partial_trace_qubits(full, 6, {1, 4});
        const auto a1a2 = naive_partial_trace_qubits(full, 6, {0, 1});
        const auto b1b2 = naive_partial_trace_qubits(full, 6, {3, 4});
        EXPECT_LE(a1b1.max_abs_diff(shared_pair_literal(psi.alpha, psi.beta, p, q)), 1e-14);
        EXPECT_LE(a2b2.max_abs_diff(shared_pair_literal(psi.alpha, psi.beta, q, p)), 1e-14);
        EXPECT_LE(a1a2.max_abs_diff(local_pair_literal(psi.alpha, psi.beta, p)), 1e-14);
        EXPECT_LE(b1b2.max_abs_diff(a1a2), 1e-14);

        const auto out = local_outputs(psi, CloneParams(p));
        EXPECT_LE(out.rho_a1b1.matrix().max_abs_diff(a1b1), 1e-14);
        EXPECT_LE(out.rho_a2b2.matrix().max_abs_diff(a2b2), 1e-14);
        EXPECT_LE(out.rho_local_pair->matrix().max_abs_diff(a1a2), 1e-14);

        const auto bf = local_outputs_brute_force(psi, CloneParams(p));
        EXPECT_LE(bf.rho_a1b1.matrix().max_abs_diff(a1b1), 1e-14);
        EXPECT_LE(bf.rho_local_pair->matrix().max_abs_diff(a1a2), 1e-14);
        EXPECT_LE(local_bob_pair_brute_force(psi, CloneParams(p)).matrix().max_abs_diff(b1b2), 1e-14);
    }
}

TEST(NonlocalBroadcast, MatchesMixtureFormula) {
    for (const auto& c : cases()) {
        const auto psi = PureTwoQubit::from_alpha(c.alpha);
        const double p = c.p, q = 1 - p, d = 1 + 3 * (p * p + q * q);
        const auto proj = outer({psi.alpha, 0, 0, psi.beta});
        const auto id = ComplexMatrix::identity(4);
        const auto out = nonlocal_outputs(psi, CloneParams(p));
        EXPECT_LE(out.rho_a1b1.matrix().max_abs_diff((proj * (1 - q * q + 3 * p * p) + id * (q * q)) / d), 1e-15);
        EXPECT_LE(out.rho_a2b2.matrix().max_abs_diff((proj * (1 - p * p + 3 * q * q) + id * (p * p)) / d), 1e-15);
        EXPECT_FALSE(out.rho_local_pair.has_value());
    }
}

TEST(Concurrence, ClosedFormsAgainstWootters) {
    for (const auto& c : cases()) {
        const auto psi = PureTwoQubit::from_alpha(c.alpha);
        const double p = c.p, q = 1 - p, ab = psi.abs_alpha() * psi.abs_beta();
        const CloneParams cp(p);
        const double n = 1 + p * p + q * q;

        const double loc1 = 2 * std::max(0.0, (4 * p * p * ab - q * q * (1 + p * p)) / (n * n));
        const double loc2 = 2 * std::max(0.0, (4 * q * q * ab - p * p * (1 + q * q)) / (n * n));
        const double locp = 2 * std::max(0.0, (p * q - ab) / n);
        const double d = 1 + 3 * (p * p + q * q);
        const double nl1 = 2 * std::max(0.0, ((1 - q * q + 3 * p * p) * ab - q * q) / d);
        const double nl2 = 2 * std::max(0.0, ((1 - p * p + 3 * q * q) * ab - p * p) / d);

        const auto lc = local_concurrences(psi, cp);
        const auto nc = nonlocal_concurrences(psi, cp);
        EXPECT_NEAR(lc.a1b1, loc1, 1e-15);
        EXPECT_NEAR(lc.a2b2, loc2, 1e-15);
        EXPECT_NEAR(lc.local_pair, locp, 1e-15);
        EXPECT_NEAR(nc.a1b1, nl1, 1e-15);
        EXPECT_NEAR(nc.a2b2, nl2, 1e-15);

        const auto lo = local_outputs(psi, cp);
        const auto no = nonlocal_outputs(psi, cp);
        EXPECT_NEAR(concurrence_general(lo.rho_a1b1).value, loc1, 1e-10);
        EXPECT_NEAR(concurrence_general(lo.rho_a2b2).value, loc2, 1e-10);
        EXPECT_NEAR(concurrence_general(*lo.rho_local_pair).value, locp, 1e-10);
        EXPECT_NEAR(concurrence_general(no.rho_a1b1).value, nl1, 1e-10);
        EXPECT_NEAR(concurrence_general(no.rho_a2b2).value, nl2, 1e-10);
    }
}

TEST(Concurrence, SymmetricPoint) {
    const auto psi = PureTwoQubit::from_alpha(1 / std::sqrt(2.0));
    const CloneParams half(0.5);
    EXPECT_NEAR(local_concurrences(psi, half).a1b1, 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(nonlocal_concurrences(psi, half).a1b1, 0.4, 1e-15);
}

TEST(Regions, LocalRootsAndRadicals) {
    const auto r = local_region_roots();
    EXPECT_NEAR(r.p1_bisection, 0.5 - std::pow(3.0, 0.25) / std::sqrt(2.0) + std::sqrt(3.0) / 2, 1e-12);
    EXPECT_NEAR(r.p2_bisection, 1 - r.p1_bisection, 1e-12);
    EXPECT_NEAR(r.p1_bisection, 0.435, 5e-4);
    EXPECT_NEAR(r.p2_bisection, 0.565, 5e-4);
    // the local a1b1 expression at |alpha||beta| = 1/2 vanishes at p1
    EXPECT_NEAR(concurrence_unclamped(Scenario::local, Pair::a1b1, 0.5, CloneParams(r.p1_bisection)), 0.0, 1e-14);
    EXPECT_NEAR(concurrence_unclamped(Scenario::local, Pair::a2b2, 0.5, CloneParams(r.p2_bisection)), 0.0, 1e-14);
}

TEST(Regions, NonlocalWindow) {
    const auto [lo, hi] = nonlocal_window_bisection();
    EXPECT_NEAR(lo, 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(hi, 2.0 / 3.0, 1e-12);
    const auto nl = region_boundaries(Scenario::nonlocal);
    const auto loc = region_boundaries(Scenario::local);
    EXPECT_LT(nl.p_lower(), loc.p_lower());
    EXPECT_GT(nl.p_upper(), loc.p_upper());
}

TEST(Regions, BoundariesSeparateSigns) {
    for (Scenario s : {Scenario::local, Scenario::nonlocal}) {
        const auto rb = region_boundaries(s);
        for (Pair pr : {Pair::a1b1, Pair::a2b2})
            for (double p = 0.05; p < 1.0; p += 0.05) {
                const auto iv = rb.pair_interval(pr, p);
                auto c = [&](double a) { return concurrence_unclamped(s, pr, a * std::sqrt(1 - a * a), CloneParams(p)); };
                if (!iv) {
                    EXPECT_LE(c(1 / std::sqrt(2.0)), 1e-15);
                    continue;
                }
                EXPECT_GT(c(0.5 * (iv->lower + iv->upper)), 0.0);
                if (iv->lower > 1e-6) EXPECT_LT(c(iv->lower - 1e-6), 0.0);
                if (iv->upper < 1 - 1e-6) EXPECT_LT(c(iv->upper + 1e-6), 0.0);
            }
    }
}

TEST(Regions, GlobalSpansTruncateToQuotedValues) {
    const auto loc = region_boundaries(Scenario::local).global_alpha_span();
    const auto nl = region_boundaries(Scenario::nonlocal).global_alpha_span();
    EXPECT_EQ(std::floor(loc.lower * 1000), 331);
    EXPECT_EQ(std::floor(loc.upper * 1000), 943);
    EXPECT_EQ(std::floor(nl.lower * 1000), 169);
    EXPECT_EQ(std::floor(nl.upper * 1000), 985);
    // the joint interval is widest at the symmetric cloner
    const auto j = region_boundaries(Scenario::nonlocal).joint_interval(0.5);
    ASSERT_TRUE(j.has_value());
    EXPECT_NEAR(j->lower, nl.lower, 1e-9);
    EXPECT_NEAR(j->upper, nl.upper, 1e-9);
}

TEST(Regions, MembershipMatchesConcurrenceSigns) {
    for (Scenario s : {Scenario::local, Scenario::nonlocal}) {
        const auto rb = region_boundaries(s);
        for (int i = 0; i <= 40; ++i)
            for (int k = 1; k < 40; ++k) {
                const double a = i / 40.0, p = k / 40.0;
                EXPECT_EQ(inside_region(rb, a, p), simultaneous_inseparable(s, PureTwoQubit::from_alpha(a), CloneParams(p)))
                    << a << ' ' << p;
            }
    }
}

TEST(Comparison, GapFormulaAndDominance) {
    for (int i = 0; i <= 20; ++i)
        for (int k = 1; k < 20; ++k) {
            const auto psi = PureTwoQubit::from_alpha(i / 20.0);
            const CloneParams cp(k / 20.0);
            for (Pair pr : {Pair::a1b1, Pair::a2b2}) {
                EXPECT_NEAR(concurrence_gap(pr, psi, cp), concurrence_gap_direct(pr, psi, cp), 1e-14);
                EXPECT_GT(concurrence_gap_direct(pr, psi, cp), 0.0);
            }
        }
}

TEST(Comparison, SumDeficit) {
    const auto psi = PureTwoQubit::from_alpha(1 / std::sqrt(2.0));
    EXPECT_NEAR(sum_deficit(Scenario::nonlocal, psi, CloneParams(0.5)), 0.2, 1e-15);
    EXPECT_NEAR(nonlocal_sum_deficit_closed(psi, CloneParams(0.5)), 0.2, 1e-15);
    EXPECT_NEAR(sum_deficit(Scenario::local, psi, CloneParams(0.5)), 1 - 2.0 / 6.0, 1e-15);
    EXPECT_EQ(error_code([] { sum_deficit(Scenario::local, PureTwoQubit::from_alpha(1.0), CloneParams(0.5)); }),
              "outside-region");
}

TEST(Comparison, ArgmaxAtMaximalEntanglement) {
    for (Scenario s : {Scenario::local, Scenario::nonlocal})
        for (Pair pr : {Pair::a1b1, Pair::a2b2})
            EXPECT_NEAR(argmax_alpha_concurrence(s, pr, CloneParams(0.5)), 1 / std::sqrt(2.0), 1e-6);
    EXPECT_EQ(error_code([] { argmax_alpha_concurrence(Scenario::nonlocal, Pair::a1b1, CloneParams(0.2)); }),
              "outside-region");
}

TEST(Symmetry, MirroredCloner) {
    for (const auto& c : cases()) {
        const auto psi = PureTwoQubit::from_alpha(c.alpha);
        const auto a = local_outputs(psi, CloneParams(c.p));
        const auto b = local_outputs(psi, CloneParams(1 - c.p));
        EXPECT_LE(a.rho_a1b1.matrix().max_abs_diff(b.rho_a2b2.matrix()), 1e-15);
        const auto na = nonlocal_outputs(psi, CloneParams(c.p));
        const auto nb = nonlocal_outputs(psi, CloneParams(1 - c.p));
        EXPECT_LE(na.rho_a1b1.matrix().max_abs_diff(nb.rho_a2b2.matrix()), 1e-15);
    }
}

TEST(Endpoints, TrashCloneIsMaximallyMixed) {
    // at p = 0 the a1b1 pair carries no information about the input
    const auto psi = PureTwoQubit::from_alpha(0.6);
    const auto nl = nonlocal_outputs(psi, CloneParams(0.0));
    EXPECT_LE(nl.rho_a1b1.matrix().max_abs_diff(ComplexMatrix::identity(4) * 0.25), 1e-15);
    const auto lo = local_outputs(psi, CloneParams(0.0));
    EXPECT_NEAR(lo.rho_a1b1(1, 1).real(), 0.25, 1e-15);
}
