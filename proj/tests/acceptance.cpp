// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qbcast/broadcast.hpp"
#include "qbcast/entanglement.hpp"
#include "qbcast/sampling.hpp"
#include "qbcast/teleport.hpp"

using namespace qbcast;

namespace {

struct Outcome {
    bool passed;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;  // 0 = no runtime bound
    std::function<Outcome()> check;
};

std::string fmt(const char* f, double a) {
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::vector<double> axis(int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(i == n - 1 ? 1.0 : static_cast<double>(i) / (n - 1));
    return v;
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Outcome region_roots() {
    const auto r = local_region_roots();
    const double c = std::pow(3.0, 0.25) / std::sqrt(2.0);
    const double p1 = 0.5 - c + std::sqrt(3.0) / 2, p2 = 0.5 + c - std::sqrt(3.0) / 2;
    const double res = std::max(std::abs(r.p1_bisection - p1), std::abs(r.p2_bisection - p2));
    const bool quoted = std::lround(r.p1_bisection * 1000) == 435 && std::lround(r.p2_bisection * 1000) == 565;
    return {quoted && res <= 1e-12,
            "p1=" + fmt("%.6f", r.p1_bisection) + " p2=" + fmt("%.6f", r.p2_bisection) + " residual " + fmt("%.2e", res)};
}

Outcome alpha_spans() {
    const auto loc = region_boundaries(Scenario::local).global_alpha_span();
    const auto nl = region_boundaries(Scenario::nonlocal).global_alpha_span();
    auto t3 = [](double x) { return std::floor(x * 1000.0); };
    const bool ok = t3(loc.lower) == 331 && t3(loc.upper) == 943 && t3(nl.lower) == 169 && t3(nl.upper) == 985;
    return {ok, "local (" + fmt("%.5f", loc.lower) + ", " + fmt("%.5f", loc.upper) + ") nonlocal (" +
                    fmt("%.5f", nl.lower) + ", " + fmt("%.5f", nl.upper) + "), compared to 3 truncated decimals"};
}

Outcome nonlocal_window() {
    const auto [lo, hi] = nonlocal_window_bisection();
    const auto rb = region_boundaries(Scenario::nonlocal);
    const double res = std::max({std::abs(lo - 1.0 / 3), std::abs(hi - 2.0 / 3), std::abs(rb.p_lower() - 1.0 / 3),
                                 std::abs(rb.p_upper() - 2.0 / 3)});
    return {res <= 1e-12, "(" + fmt("%.12f", lo) + ", " + fmt("%.12f", hi) + ")"};
}

Outcome oracle_equivalence() {
    double res = 0;
    for (double a : axis(21))
        for (double p : axis(21)) {
            const auto psi = PureTwoQubit::from_alpha(a);
            const auto cf = local_outputs(psi, CloneParams(p));
            const auto bf = local_outputs_brute_force(psi, CloneParams(p));
            res = std::max({res, cf.rho_a1b1.matrix().max_abs_diff(bf.rho_a1b1.matrix()),
                            cf.rho_a2b2.matrix().max_abs_diff(bf.rho_a2b2.matrix()),
                            cf.rho_local_pair->matrix().max_abs_diff(bf.rho_local_pair->matrix())});
        }
    return {res <= 1e-12, "max residual " + fmt("%.2e", res)};
}

Outcome concurrence_equivalence() {
    double res = 0;
    for (double a : axis(21))
        for (double p : axis(21)) {
            const auto psi = PureTwoQubit::from_alpha(a);
            for (Scenario s : {Scenario::local, Scenario::nonlocal}) {
                const auto out = broadcast_outputs(s, psi, CloneParams(p));
                std::vector<const DensityMatrix*> states{&out.rho_a1b1, &out.rho_a2b2};
                if (out.rho_local_pair) states.push_back(&*out.rho_local_pair);
                for (const auto* rho : states)
                    res = std::max(res, std::abs(concurrence_x(as_x_state(*rho)).value - concurrence_general(*rho).value));
            }
        }
    std::mt19937_64 rng(7);
    for (int k = 0; k < 1000; ++k) {
        const auto x = sampling::random_x_state(rng);
        res = std::max(res, std::abs(concurrence_x(x).value - concurrence_general(x.density()).value));
    }
    return {res <= 1e-10, "max residual " + fmt("%.2e", res)};
}

Outcome theorem_consistency() {
    double res = 0;
    int count = 0, not_useful = 0;
    for (double a : axis(21))
        for (double p : axis(21))
            for (Scenario s : {Scenario::local, Scenario::nonlocal})
                for (Pair pr : {Pair::a1b1, Pair::a2b2}) {
                    const auto rho = broadcast_outputs(s, PureTwoQubit::from_alpha(a), CloneParams(p)).pair(pr);
                    const double c = concurrence_general(rho).value;
                    if (c <= 0) continue;
                    ++count;
                    const double n = n_function(rho);
                    res = std::max(res, std::abs((2.0 / 3 + c / 3) - 0.5 * (1 + n / 3)));
                    if (!(n > 1)) ++not_useful;
                }
    return {res <= 1e-10 && not_useful == 0 && count > 0,
            std::to_string(count) + " inseparable outputs, max residual " + fmt("%.2e", res) + ", " +
                std::to_string(not_useful) + " with N <= 1"};
}

Outcome dominance() {
    int violations = 0, fidelity_checks = 0;
    for (double a : axis(21))
        for (double p : axis(21)) {
            if (p <= 0 || p >= 1) continue;
            const auto psi = PureTwoQubit::from_alpha(a);
            const CloneParams cp(p);
            for (Pair pr : {Pair::a1b1, Pair::a2b2}) {
                if (!(concurrence_unclamped(Scenario::nonlocal, pr, psi, cp) >
                      concurrence_unclamped(Scenario::local, pr, psi, cp)))
                    ++violations;
                const auto loc = as_x_state(local_outputs(psi, cp).pair(pr));
                if (concurrence_x(loc).value > 0 && theorem_hypothesis_violation(loc).empty()) {
                    ++fidelity_checks;
                    const auto nl = as_x_state(nonlocal_outputs(psi, cp).pair(pr));
                    if (!(theorem_report(nl).f_max > theorem_report(loc).f_max)) ++violations;
                }
            }
        }
    return {violations == 0, std::to_string(violations) + " violations, " + std::to_string(fidelity_checks) +
                                 " fidelity comparisons"};
}

Outcome symmetric_point() {
    const auto psi = PureTwoQubit::from_alpha(kInvSqrt2);
    const CloneParams half(0.5);
    const auto loc = local_outputs(psi, half).rho_a1b1;
    const auto nl = nonlocal_outputs(psi, half).rho_a1b1;
    const double res = std::max({
        std::abs(concurrence_general(loc).value - 1.0 / 6), std::abs(local_concurrences(psi, half).a1b1 - 1.0 / 6),
        std::abs(concurrence_general(nl).value - 0.4), std::abs(nonlocal_concurrences(psi, half).a1b1 - 0.4),
        std::abs(f_max(loc) - 13.0 / 18), std::abs(theorem_report(as_x_state(loc)).f_max - 13.0 / 18),
        std::abs(f_max(nl) - 0.8), std::abs(theorem_report(as_x_state(nl)).f_max - 0.8)});
    return {res <= 1e-10, "C = " + fmt("%.12f", concurrence_general(loc).value) + " / " +
                              fmt("%.12f", concurrence_general(nl).value) + ", F_max = " + fmt("%.12f", f_max(loc)) +
                              " / " + fmt("%.12f", f_max(nl))};
}

Outcome attainment() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0, 1);
    double worst_gap = 0, worst_sigma = 0;
    for (int k = 0; k < 50; ++k) {
        const Scenario s = k % 2 ? Scenario::nonlocal : Scenario::local;
        const Pair pr = (k / 2) % 2 ? Pair::a2b2 : Pair::a1b1;
        const auto psi = PureTwoQubit::from_alpha(std::polar(u(rng), 2 * std::acos(-1.0) * u(rng)));
        const auto rho = broadcast_outputs(s, psi, CloneParams(u(rng))).pair(pr);
        const auto best = optimize_corrections(rho);
        worst_gap = std::max(worst_gap, std::abs(best.exact_fidelity - f_max(rho)));
        const auto mc = simulate_teleportation(rho, best.corrections, 100000, rng());
        worst_sigma = std::max(worst_sigma, std::abs(mc.average_fidelity - best.exact_fidelity) / mc.standard_error);
    }
    return {worst_gap <= 1e-6 && worst_sigma <= 4,
            "worst |F - F_max| " + fmt("%.2e", worst_gap) + ", worst MC deviation " + fmt("%.2f", worst_sigma) + " sigma"};
}

Outcome argmax() {
    double res = 0;
    for (Scenario s : {Scenario::local, Scenario::nonlocal}) {
        const auto rb = region_boundaries(s);
        for (Pair pr : {Pair::a1b1, Pair::a2b2})
            for (int i = 1; i <= 5; ++i) {
                const double p = rb.p_lower() + (rb.p_upper() - rb.p_lower()) * i / 6.0;
                res = std::max(res, std::abs(argmax_alpha_concurrence(s, pr, CloneParams(p)) - kInvSqrt2));
            }
    }
    return {res <= 1e-6, "max |argmax - 1/sqrt2| " + fmt("%.2e", res)};
}

Outcome sum_deficits() {
    int points = 0, violations = 0;
    double smallest = 1;
    for (int i = 0; i <= 200; ++i)
        for (int k = 0; k <= 200; ++k) {
            const auto psi = PureTwoQubit::from_alpha(i / 200.0);
            const CloneParams cp(k / 200.0);
            for (Scenario s : {Scenario::local, Scenario::nonlocal}) {
                if (!simultaneous_inseparable(s, psi, cp)) continue;
                ++points;
                const double d = sum_deficit(s, psi, cp);
                smallest = std::min(smallest, d);
                if (!(d > 0)) ++violations;
            }
        }
    return {points > 0 && violations == 0,
            std::to_string(points) + " inseparable points, smallest deficit " + fmt("%.6f", smallest)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "region roots p1, p2", 1.0, region_roots},
        {2, "global alpha spans", 1.0, alpha_spans},
        {3, "nonlocal p-window (1/3, 2/3)", 0.0, nonlocal_window},
        {4, "closed-form local outputs vs 64-dim partial traces", 10.0, oracle_equivalence},
        {5, "X closed-form concurrence vs Wootters", 0.0, concurrence_equivalence},
        {6, "theorem consistency and usefulness", 0.0, theorem_consistency},
        {7, "nonlocal dominance", 0.0, dominance},
        {8, "symmetric-point values", 0.0, symmetric_point},
        {9, "operational attainment of F_max", 60.0, attainment},
        {10, "argmax at |alpha| = 1/sqrt2", 0.0, argmax},
        {11, "positive sum deficits", 0.0, sum_deficits},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::string timing = fmt("%.3f s", secs);
        if (c.budget_seconds > 0) {
            timing += fmt(" (limit %.0f s)", c.budget_seconds);
            if (secs >= c.budget_seconds) o.passed = false;
        }
        if (!o.passed) ++failed;
        std::printf("%s criterion %d: %s: %s [%s]\n", o.passed ? "PASS" : "FAIL", c.id, c.title, o.detail.c_str(),
                    timing.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
