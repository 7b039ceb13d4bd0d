#pragma once

// Full verification run: every structural claim about the broadcasting
// pipeline and the teleportation channels, each reported with its measured
// worst-case residual.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "qbcast/broadcast.hpp"
#include "qbcast/entanglement.hpp"
#include "qbcast/sampling.hpp"
#include "qbcast/sweep.hpp"
#include "qbcast/teleport.hpp"

namespace qbcast {

struct ClaimResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;   // worst residual, violation count, ...
    double tolerance = 0.0;  // what `measured` was compared against
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20240607;
    std::size_t samples = 100000;   // Monte Carlo samples per channel
    std::size_t channels = 50;      // random channels for attainment
    std::size_t grid_steps = 21;    // (alpha, p) grid per axis
    std::size_t random_x_states = 1000;
    unsigned jobs = 1;
    /// X-state concurrence under test. Replaceable for fault injection.
    std::function<ConcurrenceResult(const XState&)> x_concurrence = [](const XState& x) { return concurrence_x(x); };
};

struct VerifyReport {
    std::vector<ClaimResult> claims;
    bool all_passed() const {
        for (const auto& c : claims)
            if (!c.passed) return false;
        return true;
    }
};

/// Truncation to three decimals, the convention of the quoted region spans.
inline double truncate3(double x) { return std::floor(x * 1000.0 + 1e-9) / 1000.0; }

namespace detail {

struct GridPoint {
    double alpha;
    double p;
};

inline std::vector<GridPoint> unit_grid(std::size_t steps) {
    std::vector<GridPoint> g;
    for (std::size_t i = 0; i < steps; ++i)
        for (std::size_t j = 0; j < steps; ++j)
            g.push_back({grid_point({0, 1}, i, steps), grid_point({0, 1}, j, steps)});
    return g;
}

inline ClaimResult claim(std::string name, double measured, double tol, bool passed, std::string detail = {}) {
    return {std::move(name), passed, measured, tol, std::move(detail)};
}

inline ClaimResult max_residual_claim(std::string name, double measured, double tol, std::string detail = {}) {
    return claim(std::move(name), measured, tol, measured <= tol, std::move(detail));
}

}  // namespace detail

inline VerifyReport run_verification(const VerifyOptions& opt = {}) {
    using detail::claim;
    using detail::max_residual_claim;
    VerifyReport rep;
    std::mt19937_64 rng(opt.seed);
    const auto grid = detail::unit_grid(opt.grid_steps);

    // a throwing check fails the claims it would have reported
    auto guarded = [&rep](std::initializer_list<const char*> names, auto&& body) {
        try {
            body();
        } catch (const std::exception& e) {
            for (const char* n : names)
                rep.claims.push_back(claim(n, std::numeric_limits<double>::quiet_NaN(), 0, false,
                                           std::string("threw ") + e.what()));
        }
    };

    // window ends
    guarded({"region-roots"}, [&] {
        const auto r = local_region_roots();
        const double res = std::max(std::abs(r.p1_bisection - r.p1_closed), std::abs(r.p2_bisection - r.p2_closed));
        const bool quoted = std::round(r.p1_bisection * 1000) == 435 && std::round(r.p2_bisection * 1000) == 565;
        rep.claims.push_back(claim("region-roots", res, 1e-12, res <= 1e-12 && quoted,
                                   "p1=" + format_number(r.p1_bisection) + " p2=" + format_number(r.p2_bisection)));
    });
    guarded({"alpha-spans"}, [&] {
        const auto loc = region_boundaries(Scenario::local).global_alpha_span();
        const auto nl = region_boundaries(Scenario::nonlocal).global_alpha_span();
        const double dev = std::max({std::abs(truncate3(loc.lower) - 0.331), std::abs(truncate3(loc.upper) - 0.943),
                                     std::abs(truncate3(nl.lower) - 0.169), std::abs(truncate3(nl.upper) - 0.985)});
        rep.claims.push_back(max_residual_claim(
            "alpha-spans", dev, 1e-9,
            "local (" + format_number(loc.lower) + ", " + format_number(loc.upper) + ") nonlocal (" +
                format_number(nl.lower) + ", " + format_number(nl.upper) + ")"));
    });
    guarded({"nonlocal-window"}, [&] {
        const auto [lo, hi] = nonlocal_window_bisection();
        const auto rb = region_boundaries(Scenario::nonlocal);
        const double res = std::max({std::abs(lo - 1.0 / 3.0), std::abs(hi - 2.0 / 3.0),
                                     std::abs(rb.p_lower() - 1.0 / 3.0), std::abs(rb.p_upper() - 2.0 / 3.0)});
        rep.claims.push_back(max_residual_claim("nonlocal-window", res, 1e-12));
    });

    // closed forms against the 64-dim pipeline
    guarded({"local-oracle"}, [&] {
        double res = 0.0;
        for (const auto& g : grid) {
            const auto psi = PureTwoQubit::from_alpha(g.alpha);
            const CloneParams cp(g.p);
            const auto cf = local_outputs(psi, cp);
            const auto bf = local_outputs_brute_force(psi, cp);
            res = std::max({res, cf.rho_a1b1.matrix().max_abs_diff(bf.rho_a1b1.matrix()),
                            cf.rho_a2b2.matrix().max_abs_diff(bf.rho_a2b2.matrix()),
                            cf.rho_local_pair->matrix().max_abs_diff(bf.rho_local_pair->matrix()),
                            cf.rho_local_pair->matrix().max_abs_diff(local_bob_pair_brute_force(psi, cp).matrix())});
        }
        rep.claims.push_back(max_residual_claim("local-oracle", res, 1e-12));
    });

    // concurrence routes
    guarded({"x-vs-wootters", "closed-form-concurrence"}, [&] {
        double res = 0.0, closed_res = 0.0;
        for (const auto& g : grid) {
            const auto psi = PureTwoQubit::from_alpha(g.alpha);
            const CloneParams cp(g.p);
            for (Scenario s : {Scenario::local, Scenario::nonlocal}) {
                const auto out = broadcast_outputs(s, psi, cp);
                for (Pair pr : {Pair::a1b1, Pair::a2b2}) {
                    const double w = concurrence_general(out.pair(pr)).value;
                    res = std::max(res, std::abs(opt.x_concurrence(as_x_state(out.pair(pr))).value - w));
                    closed_res = std::max(closed_res, std::abs(pair_concurrence(s, pr, psi, cp) - w));
                }
                if (out.rho_local_pair) {
                    const double w = concurrence_general(*out.rho_local_pair).value;
                    res = std::max(res, std::abs(opt.x_concurrence(as_x_state(*out.rho_local_pair)).value - w));
                    closed_res = std::max(closed_res, std::abs(local_concurrences(psi, cp).local_pair - w));
                }
            }
        }
        for (std::size_t i = 0; i < opt.random_x_states; ++i) {
            const auto x = sampling::random_x_state(rng);
            res = std::max(res, std::abs(opt.x_concurrence(x).value - concurrence_general(x.density()).value));
        }
        rep.claims.push_back(max_residual_claim("x-vs-wootters", res, 1e-10));
        rep.claims.push_back(max_residual_claim("closed-form-concurrence", closed_res, 1e-10));
    });

    guarded({"ppt-vs-concurrence"}, [&] {
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < 200; ++i) {
            const auto rho = sampling::random_density(rng, 1 + i % 4);
            if (is_ppt(rho) != (concurrence_general(rho).value <= 1e-9)) ++mismatches;
        }
        rep.claims.push_back(claim("ppt-vs-concurrence", static_cast<double>(mismatches), 0, mismatches == 0));
    });

    // teleportation channels from every broadcast output
    guarded({"theorem-hypotheses", "theorem-consistency"}, [&] {
        double fid_res = 0.0;
        std::size_t not_useful = 0, inapplicable = 0, hypothesis_failures = 0, checked = 0;
        for (const auto& g : grid) {
            const auto psi = PureTwoQubit::from_alpha(g.alpha);
            const CloneParams cp(g.p);
            for (Scenario s : {Scenario::local, Scenario::nonlocal}) {
                const auto out = broadcast_outputs(s, psi, cp);
                for (Pair pr : {Pair::a1b1, Pair::a2b2}) {
                    const auto x = as_x_state(out.pair(pr));
                    // the trash clone at p = 0 (or 1) is I/4, where rho22 = 1/4 exactly
                    const bool interior = g.p > 0.0 && g.p < 1.0;
                    if (interior && !theorem_hypothesis_violation(x).empty()) ++hypothesis_failures;
                    const double c = opt.x_concurrence(x).value;
                    if (c <= 0.0) continue;
                    ++checked;
                    if (!theorem_hypothesis_violation(x).empty()) {
                        ++inapplicable;
                        continue;
                    }
                    const double n_svd = n_function(out.pair(pr));
                    fid_res = std::max(fid_res, std::abs(2.0 / 3.0 + c / 3.0 - f_max_from_n(n_svd)));
                    if (!(n_svd > 1.0)) ++not_useful;
                }
            }
        }
        rep.claims.push_back(claim("theorem-hypotheses", static_cast<double>(hypothesis_failures), 0,
                                   hypothesis_failures == 0));
        rep.claims.push_back(claim("theorem-consistency", fid_res, 1e-10, fid_res <= 1e-10 && not_useful == 0 && inapplicable == 0,
                                   std::to_string(checked) + " inseparable channels, " + std::to_string(not_useful) +
                                       " with N <= 1, " + std::to_string(inapplicable) + " outside the hypotheses"));
    });

    // local vs nonlocal
    guarded({"dominance", "gap-formula"}, [&] {
        std::size_t violations = 0;
        double formula_res = 0.0;
        for (const auto& g : grid) {
            const auto psi = PureTwoQubit::from_alpha(g.alpha);
            const CloneParams cp(g.p);
            for (Pair pr : {Pair::a1b1, Pair::a2b2}) {
                formula_res =
                    std::max(formula_res, std::abs(concurrence_gap(pr, psi, cp) - concurrence_gap_direct(pr, psi, cp)));
                if (g.p <= 0.0 || g.p >= 1.0) continue;
                if (!(concurrence_gap_direct(pr, psi, cp) > 0.0)) ++violations;
                const double c_loc = pair_concurrence(Scenario::local, pr, psi, cp);
                if (c_loc > 0.0) {
                    const double c_nl = pair_concurrence(Scenario::nonlocal, pr, psi, cp);
                    const double f_loc = f_max(local_outputs(psi, cp).pair(pr));
                    const double f_nl = f_max(nonlocal_outputs(psi, cp).pair(pr));
                    if (!(c_nl > c_loc) || !(f_nl > f_loc)) ++violations;
                }
            }
        }
        rep.claims.push_back(claim("dominance", static_cast<double>(violations), 0, violations == 0));
        rep.claims.push_back(max_residual_claim("gap-formula", formula_res, 1e-12));
    });

    guarded({"symmetric-point"}, [&] {
        const auto psi = PureTwoQubit::from_alpha(1.0 / std::sqrt(2.0));
        const CloneParams half(0.5);
        const auto loc = local_outputs(psi, half);
        const auto nl = nonlocal_outputs(psi, half);
        const double res = std::max({
            std::abs(concurrence_general(loc.rho_a1b1).value - 1.0 / 6.0),
            std::abs(opt.x_concurrence(as_x_state(loc.rho_a1b1)).value - 1.0 / 6.0),
            std::abs(local_concurrences(psi, half).a1b1 - 1.0 / 6.0),
            std::abs(concurrence_general(nl.rho_a1b1).value - 0.4),
            std::abs(opt.x_concurrence(as_x_state(nl.rho_a1b1)).value - 0.4),
            std::abs(nonlocal_concurrences(psi, half).a1b1 - 0.4),
            std::abs(f_max(loc.rho_a1b1) - 13.0 / 18.0),
            std::abs(theorem_report(as_x_state(loc.rho_a1b1)).f_max - 13.0 / 18.0),
            std::abs(f_max(nl.rho_a1b1) - 0.8),
            std::abs(theorem_report(as_x_state(nl.rho_a1b1)).f_max - 0.8),
        });
        rep.claims.push_back(max_residual_claim("symmetric-point", res, 1e-10));
    });

    guarded({"argmax"}, [&] {
        double res = 0.0;
        const auto sqrt_half = 1.0 / std::sqrt(2.0);
        for (Scenario s : {Scenario::local, Scenario::nonlocal})
            for (Pair pr : {Pair::a1b1, Pair::a2b2}) {
                const auto rb = region_boundaries(s);
                for (int i = 1; i <= 5; ++i) {
                    const double p = rb.p_lower() + (rb.p_upper() - rb.p_lower()) * i / 6.0;
                    res = std::max(res, std::abs(argmax_alpha_concurrence(s, pr, CloneParams(p)) - sqrt_half));
                }
            }
        rep.claims.push_back(max_residual_claim("argmax", res, 1e-6));
    });

    guarded({"sum-deficit", "nonlocal-deficit-formula"}, [&] {
        std::size_t violations = 0, inside = 0;
        double closed_res = 0.0;
        for (std::size_t i = 0; i <= 200; ++i)
            for (std::size_t j = 0; j <= 200; ++j) {
                const auto psi = PureTwoQubit::from_alpha(i / 200.0);
                const CloneParams cp(j / 200.0);
                for (Scenario s : {Scenario::local, Scenario::nonlocal}) {
                    if (!simultaneous_inseparable(s, psi, cp)) continue;
                    ++inside;
                    const double d = sum_deficit(s, psi, cp);
                    if (!(d > 0.0)) ++violations;
                    if (s == Scenario::nonlocal)
                        closed_res = std::max(closed_res, std::abs(d - nonlocal_sum_deficit_closed(psi, cp)));
                }
            }
        rep.claims.push_back(claim("sum-deficit", static_cast<double>(violations), 0, violations == 0 && inside > 0,
                                   std::to_string(inside) + " inseparable points, nonlocal closed-form residual " +
                                       format_number(closed_res)));
        rep.claims.push_back(max_residual_claim("nonlocal-deficit-formula", closed_res, 1e-12));
    });

    guarded({"mirror-symmetry"}, [&] {
        double res = 0.0;
        for (const auto& g : grid) {
            const auto psi = PureTwoQubit::from_alpha(g.alpha);
            const auto a = nonlocal_outputs(psi, CloneParams(g.p));
            const auto b = nonlocal_outputs(psi, CloneParams(1.0 - g.p));
            res = std::max({res, a.rho_a1b1.matrix().max_abs_diff(b.rho_a2b2.matrix()),
                            a.rho_a2b2.matrix().max_abs_diff(b.rho_a1b1.matrix())});
        }
        rep.claims.push_back(max_residual_claim("mirror-symmetry", res, 1e-15));
    });

    guarded({"boundary-consistency"}, [&] {
        double res = 0.0;
        for (Scenario s : {Scenario::local, Scenario::nonlocal}) {
            const auto rb = region_boundaries(s);
            for (Pair pr : {Pair::a1b1, Pair::a2b2})
                for (int i = 1; i < 200; ++i) {
                    const double p = i / 200.0;
                    const auto iv = rb.pair_interval(pr, p);
                    if (!iv) continue;
                    for (double a : {iv->lower, iv->upper}) {
                        const double ab = a * std::sqrt(std::max(0.0, 1.0 - a * a));
                        res = std::max(res, std::abs(concurrence_unclamped(s, pr, ab, CloneParams(p))));
                    }
                }
        }
        rep.claims.push_back(max_residual_claim("boundary-consistency", res, 1e-9));
    });

    // operational attainment of F_max
    guarded({"teleport-attainment", "monte-carlo"}, [&] {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double attain_res = 0.0, worst_sigma_ratio = 0.0;
        const double two_pi = 2.0 * std::acos(-1.0);
        for (std::size_t i = 0; i < opt.channels; ++i) {
            const Scenario s = i % 2 ? Scenario::nonlocal : Scenario::local;
            const Pair pr = (i / 2) % 2 ? Pair::a2b2 : Pair::a1b1;
            const auto psi = PureTwoQubit::from_alpha(std::polar(u(rng), two_pi * u(rng)));
            const CloneParams cp(u(rng));
            const auto rho = broadcast_outputs(s, psi, cp).pair(pr);
            const auto opt_c = optimize_corrections(rho);
            const double target = f_max(rho);
            attain_res = std::max(attain_res, std::abs(opt_c.exact_fidelity - target));
            const auto mc = simulate_teleportation(rho, opt_c.corrections, opt.samples, rng(), opt.jobs);
            const double dev = std::abs(mc.average_fidelity - opt_c.exact_fidelity);
            worst_sigma_ratio = std::max(worst_sigma_ratio, dev / (mc.standard_error + 1e-12));
        }
        rep.claims.push_back(max_residual_claim("teleport-attainment", attain_res, 1e-6));
        rep.claims.push_back(max_residual_claim("monte-carlo", worst_sigma_ratio, 4.0,
                                                "worst |MC - exact| in units of sigma at " +
                                                    std::to_string(opt.samples) + " samples"));
    });

    return rep;
}

inline void print_report(std::ostream& os, const VerifyReport& rep) {
    for (const auto& c : rep.claims) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured=" << format_number(c.measured)
           << " tol=" << format_number(c.tolerance);
        if (!c.detail.empty()) os << "  (" << c.detail << ")";
        os << '\n';
    }
    os << (rep.all_passed() ? "all claims passed" : "verification FAILED") << '\n';
}

}  // namespace qbcast
