#pragma once

// Grid sweeps over (|alpha|, p) and region summaries, with the CSV / JSON
// writers used by the command-line tool.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qbcast/broadcast.hpp"
#include "qbcast/teleport.hpp"

namespace qbcast {

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

enum class ScenarioSelect { local, nonlocal, both };
enum class PairSelect { a1b1, a2b2, both };
enum class OutputFormat { csv, json };

struct SweepConfig {
    ScenarioSelect scenario = ScenarioSelect::both;
    PairSelect pair = PairSelect::both;
    std::size_t alpha_steps = 201;
    std::size_t p_steps = 201;
    Range alpha_range{};
    Range p_range{};
    std::uint64_t seed = 0;
    std::size_t samples = 100000;
    unsigned jobs = 1;
    std::string output_path = "-";
    OutputFormat format = OutputFormat::csv;

    void validate() const {
        if (alpha_steps < 2 || p_steps < 2) throw Error("invalid-args", "steps must be >= 2");
        for (const Range& r : {alpha_range, p_range})
            if (!(r.lo >= 0.0 && r.hi <= 1.0 && r.lo <= r.hi)) throw Error("invalid-args", "ranges must lie in [0, 1]");
    }
};

struct SweepRecord {
    double alpha = 0.0;
    double p = 0.0;
    Scenario scenario = Scenario::local;
    Pair pair = Pair::a1b1;
    double concurrence = 0.0;
    double n_value = 0.0;
    double f_max = 0.0;
    bool inseparable = false;
    bool useful = false;
};

/// Inclusive endpoints, uniform spacing.
inline double grid_point(const Range& r, std::size_t i, std::size_t steps) {
    if (i + 1 == steps) return r.hi;
    return r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

inline std::vector<SweepRecord> point_records(Scenario s, double alpha, double p, PairSelect pairs) {
    const auto psi = PureTwoQubit::from_alpha(alpha);
    const CloneParams cp(p);
    const auto out = broadcast_outputs(s, psi, cp);
    std::vector<SweepRecord> recs;
    for (Pair pr : {Pair::a1b1, Pair::a2b2}) {
        if (pairs == PairSelect::a1b1 && pr != Pair::a1b1) continue;
        if (pairs == PairSelect::a2b2 && pr != Pair::a2b2) continue;
        SweepRecord r{alpha, p, s, pr};
        r.concurrence = pair_concurrence(s, pr, psi, cp);
        r.n_value = n_function(out.pair(pr));
        r.f_max = f_max_from_n(r.n_value);
        r.inseparable = r.concurrence > 0.0;
        r.useful = r.n_value > 1.0;
        recs.push_back(r);
    }
    return recs;
}

/// Records in grid order: scenario, then alpha, then p, then pair. Worker
/// count does not affect the output.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    std::vector<Scenario> scenarios;
    if (cfg.scenario != ScenarioSelect::nonlocal) scenarios.push_back(Scenario::local);
    if (cfg.scenario != ScenarioSelect::local) scenarios.push_back(Scenario::nonlocal);

    const std::size_t per_scenario = cfg.alpha_steps * cfg.p_steps;
    const std::size_t n_points = scenarios.size() * per_scenario;
    std::vector<std::vector<SweepRecord>> slots(n_points);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t idx; (idx = next.fetch_add(1)) < n_points;) {
            const Scenario s = scenarios[idx / per_scenario];
            const std::size_t rem = idx % per_scenario;
            const double alpha = grid_point(cfg.alpha_range, rem / cfg.p_steps, cfg.alpha_steps);
            const double p = grid_point(cfg.p_range, rem % cfg.p_steps, cfg.p_steps);
            slots[idx] = point_records(s, alpha, p, cfg.pair);
        }
    };
    const unsigned jobs = std::max(1u, cfg.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<SweepRecord> out;
    out.reserve(n_points * 2);
    for (auto& s : slots) out.insert(out.end(), s.begin(), s.end());
    return out;
}

/// %.12g with the C locale decimal point.
inline std::string format_number(double x) {
    if (x == 0.0) x = 0.0;  // drop the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    std::string s(buf);
    std::replace(s.begin(), s.end(), ',', '.');
    return s;
}

inline constexpr const char* kCsvHeader = "alpha,p,scenario,pair,concurrence,n_value,f_max,inseparable,useful";

inline void write_csv(std::ostream& os, const std::vector<SweepRecord>& recs) {
    os << kCsvHeader << '\n';
    for (const auto& r : recs) {
        os << format_number(r.alpha) << ',' << format_number(r.p) << ',' << to_string(r.scenario) << ','
           << to_string(r.pair) << ',' << format_number(r.concurrence) << ',' << format_number(r.n_value) << ','
           << format_number(r.f_max) << ',' << (r.inseparable ? "true" : "false") << ','
           << (r.useful ? "true" : "false") << '\n';
    }
}

inline nlohmann::json to_json(const SweepRecord& r) {
    return {{"alpha", r.alpha},
            {"p", r.p},
            {"scenario", to_string(r.scenario)},
            {"pair", to_string(r.pair)},
            {"concurrence", r.concurrence},
            {"n_value", r.n_value},
            {"f_max", r.f_max},
            {"inseparable", r.inseparable},
            {"useful", r.useful}};
}

inline void write_json(std::ostream& os, const std::vector<SweepRecord>& recs) {
    nlohmann::json j{{"schema", 1}, {"records", nlohmann::json::array()}};
    for (const auto& r : recs) j["records"].push_back(to_json(r));
    os << j.dump(1) << '\n';
}

// ---------------------------------------------------------------------------
// regions

struct BoundarySample {
    double p = 0.0;
    std::optional<AlphaInterval> a1b1;  // f or xi
    std::optional<AlphaInterval> a2b2;  // g or eta
};

struct RegionSummary {
    Scenario scenario = Scenario::local;
    double p_lower = 0.0;
    double p_upper = 0.0;
    AlphaInterval alpha_span{};
    std::vector<BoundarySample> samples;
};

inline RegionSummary summarize_region(Scenario s, std::size_t n_samples = 101) {
    const auto rb = region_boundaries(s);
    RegionSummary out{s, rb.p_lower(), rb.p_upper(), rb.global_alpha_span(), {}};
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double p = grid_point({0.0, 1.0}, i, n_samples);
        out.samples.push_back({p, rb.pair_interval(Pair::a1b1, p), rb.pair_interval(Pair::a2b2, p)});
    }
    return out;
}

inline nlohmann::json to_json(const RegionSummary& r) {
    const bool local = r.scenario == Scenario::local;
    auto bound = [](const std::optional<AlphaInterval>& iv, bool upper) -> nlohmann::json {
        if (!iv) return nullptr;
        return upper ? iv->upper : iv->lower;
    };
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& b : r.samples) {
        samples.push_back({{"p", b.p},
                           {local ? "f_minus" : "xi_minus", bound(b.a1b1, false)},
                           {local ? "f_plus" : "xi_plus", bound(b.a1b1, true)},
                           {local ? "g_minus" : "eta_minus", bound(b.a2b2, false)},
                           {local ? "g_plus" : "eta_plus", bound(b.a2b2, true)}});
    }
    return {{"schema", 1},
            {"scenario", to_string(r.scenario)},
            {"p_window", {r.p_lower, r.p_upper}},
            {"alpha_span", {r.alpha_span.lower, r.alpha_span.upper}},
            {"boundaries", samples}};
}

inline void write_region_text(std::ostream& os, const RegionSummary& r) {
    os << "scenario     " << to_string(r.scenario) << '\n'
       << "p-window     (" << format_number(r.p_lower) << ", " << format_number(r.p_upper) << ")\n"
       << "alpha-span   (" << format_number(r.alpha_span.lower) << ", " << format_number(r.alpha_span.upper) << ")\n";
    const bool local = r.scenario == Scenario::local;
    os << (local ? "p,f_minus,f_plus,g_minus,g_plus" : "p,xi_minus,xi_plus,eta_minus,eta_plus") << '\n';
    auto cell = [](const std::optional<AlphaInterval>& iv, bool upper) {
        return iv ? format_number(upper ? iv->upper : iv->lower) : std::string{};
    };
    for (const auto& b : r.samples)
        os << format_number(b.p) << ',' << cell(b.a1b1, false) << ',' << cell(b.a1b1, true) << ','
           << cell(b.a2b2, false) << ',' << cell(b.a2b2, true) << '\n';
}

}  // namespace qbcast
