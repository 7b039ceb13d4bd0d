// qbcast_cli: channel reports, grid sweeps, region summaries and the full
// verification run.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbcast/broadcast.hpp"
#include "qbcast/entanglement.hpp"
#include "qbcast/sweep.hpp"
#include "qbcast/teleport.hpp"
#include "qbcast/verify.hpp"

namespace {

using namespace qbcast;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitRouteMismatch = 2;
constexpr int kExitInvalidArgs = 3;
constexpr int kExitIo = 4;

constexpr double kRouteTol = 1e-10;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::map<std::string, Scenario> kScenarios{{"local", Scenario::local}, {"nonlocal", Scenario::nonlocal}};
const std::map<std::string, ScenarioSelect> kScenarioSelect{
    {"local", ScenarioSelect::local}, {"nonlocal", ScenarioSelect::nonlocal}, {"both", ScenarioSelect::both}};
const std::map<std::string, Pair> kPairs{{"a1b1", Pair::a1b1}, {"a2b2", Pair::a2b2}};
const std::map<std::string, PairSelect> kPairSelect{
    {"a1b1", PairSelect::a1b1}, {"a2b2", PairSelect::a2b2}, {"both", PairSelect::both}};
const std::map<std::string, OutputFormat> kFormats{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}};

/// Runs `body` against stdout for "-" or the named file.
template <class F>
void with_output(const std::string& path, F&& body) {
    if (path == "-") {
        body(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path + " for writing");
    body(f);
    f.flush();
    if (!f) throw IoError("write to " + path + " failed");
}

Range parse_range(const std::vector<double>& v, const char* flag) {
    if (v.size() != 2) throw Error("invalid-args", std::string(flag) + " expects a,b");
    return {v[0], v[1]};
}

// ---------------------------------------------------------------------------

struct ChannelArgs {
    double alpha = 1.0 / std::sqrt(2.0);
    double p = 0.5;
    std::string scenario = "nonlocal";
    std::string pair = "a1b1";
    std::string format = "text";
    std::string out = "-";
};

int cmd_channel(const ChannelArgs& a) {
    const Scenario s = kScenarios.at(a.scenario);
    const Pair pr = kPairs.at(a.pair);
    if (!(a.alpha >= 0.0 && a.alpha <= 1.0)) throw Error("invalid-args", "--alpha must lie in [0, 1]");
    const auto psi = PureTwoQubit::from_alpha(a.alpha);
    const CloneParams cp(a.p);
    const auto rho = broadcast_outputs(s, psi, cp).pair(pr);

    const double c_closed = pair_concurrence(s, pr, psi, cp);
    const double c_wootters = concurrence_general(rho).value;
    const auto general = channel_report(rho);

    std::optional<ChannelReport> theorem;
    std::string theorem_note;
    try {
        theorem = theorem_report(as_x_state(rho));
    } catch (const Error& e) {
        theorem_note = e.code() == "separable-channel"
                           ? "not applicable (separable channel)"
                           : "not applicable (" + std::string(e.what()) + ")";
    }

    std::vector<std::string> mismatches;
    if (std::abs(c_closed - c_wootters) > kRouteTol) mismatches.push_back("concurrence");
    if (theorem && std::abs(theorem->f_max - general.f_max) > kRouteTol) mismatches.push_back("f_max");
    if (theorem && std::abs(theorem->n_value - general.n_value) > kRouteTol) mismatches.push_back("n_value");

    with_output(a.out, [&](std::ostream& os) {
        if (a.format == "json") {
            nlohmann::json j{{"schema", 1},
                             {"alpha", a.alpha},
                             {"p", a.p},
                             {"scenario", to_string(s)},
                             {"pair", to_string(pr)},
                             {"concurrence_closed_form", c_closed},
                             {"concurrence_wootters", c_wootters},
                             {"n_value_svd", general.n_value},
                             {"f_max_svd", general.f_max},
                             {"useful", general.useful},
                             {"route_mismatch", mismatches}};
            if (theorem) {
                j["n_value_theorem"] = theorem->n_value;
                j["f_max_theorem"] = theorem->f_max;
            } else {
                j["n_value_theorem"] = nullptr;
                j["f_max_theorem"] = nullptr;
                j["theorem_note"] = theorem_note;
            }
            os << j.dump(1) << '\n';
            return;
        }
        os << "scenario             " << to_string(s) << '\n'
           << "pair                 " << to_string(pr) << '\n'
           << "alpha                " << format_number(a.alpha) << '\n'
           << "p                    " << format_number(a.p) << '\n'
           << "concurrence closed   " << format_number(c_closed) << '\n'
           << "concurrence wootters " << format_number(c_wootters) << '\n'
           << "N (svd)              " << format_number(general.n_value) << '\n'
           << "F_max (svd)          " << format_number(general.f_max) << '\n';
        if (theorem) {
            os << "N (theorem)          " << format_number(theorem->n_value) << '\n'
               << "F_max (theorem)      " << format_number(theorem->f_max) << '\n';
        } else {
            os << "theorem route        " << theorem_note << '\n';
        }
        os << "useful               " << (general.useful ? "yes" : "no") << '\n';
    });

    if (!mismatches.empty()) {
        std::cerr << "route-mismatch:";
        for (const auto& m : mismatches) std::cerr << ' ' << m;
        std::cerr << '\n';
        return kExitRouteMismatch;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
    std::string scenario = "both";
    std::string pair = "both";
    std::size_t alpha_steps = 201;
    std::size_t p_steps = 201;
    std::vector<double> alpha_range{0.0, 1.0};
    std::vector<double> p_range{0.0, 1.0};
    std::uint64_t seed = 0;
    std::size_t samples = 100000;
    unsigned jobs = 0;
    std::string out = "-";
    std::string format = "csv";
};

unsigned resolve_jobs(unsigned jobs) {
    if (jobs > 0) return jobs;
    return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_sweep(const SweepArgs& a) {
    SweepConfig cfg;
    cfg.scenario = kScenarioSelect.at(a.scenario);
    cfg.pair = kPairSelect.at(a.pair);
    cfg.alpha_steps = a.alpha_steps;
    cfg.p_steps = a.p_steps;
    cfg.alpha_range = parse_range(a.alpha_range, "--alpha-range");
    cfg.p_range = parse_range(a.p_range, "--p-range");
    cfg.seed = a.seed;
    cfg.samples = a.samples;
    cfg.jobs = resolve_jobs(a.jobs);
    cfg.output_path = a.out;
    cfg.format = kFormats.at(a.format);
    cfg.validate();

    const auto recs = run_sweep(cfg);
    with_output(cfg.output_path, [&](std::ostream& os) {
        if (cfg.format == OutputFormat::json)
            write_json(os, recs);
        else
            write_csv(os, recs);
    });
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct RegionsArgs {
    std::string scenario = "both";
    std::string format = "text";
    std::string out = "-";
};

int cmd_regions(const RegionsArgs& a) {
    std::vector<Scenario> which;
    const auto sel = kScenarioSelect.at(a.scenario);
    if (sel != ScenarioSelect::nonlocal) which.push_back(Scenario::local);
    if (sel != ScenarioSelect::local) which.push_back(Scenario::nonlocal);

    std::vector<RegionSummary> summaries;
    for (Scenario s : which) summaries.push_back(summarize_region(s));

    with_output(a.out, [&](std::ostream& os) {
        if (a.format == "json") {
            nlohmann::json regions = nlohmann::json::array();
            for (const auto& r : summaries) regions.push_back(to_json(r));
            os << nlohmann::json{{"schema", 1}, {"regions", regions}}.dump(1) << '\n';
            return;
        }
        for (std::size_t i = 0; i < summaries.size(); ++i) {
            if (i) os << '\n';
            write_region_text(os, summaries[i]);
        }
    });
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::uint64_t seed = VerifyOptions{}.seed;
    std::size_t samples = 100000;
    unsigned jobs = 0;
    std::string format = "text";
    std::string out = "-";
    std::string inject_fault;
};

int cmd_verify(const VerifyArgs& a) {
    VerifyOptions opt;
    opt.seed = a.seed;
    opt.samples = a.samples;
    opt.jobs = resolve_jobs(a.jobs);
    if (a.samples < 2) throw Error("invalid-args", "--samples must be >= 2");
    if (a.inject_fault == "x-sign") {
        // flips the sign of the subtracted square root in the X formula
        opt.x_concurrence = [](const XState& x) {
            const double d = 2.0 * (std::abs(x.rho14) + std::sqrt(x.rho22 * x.rho33));
            const double o = 2.0 * (std::abs(x.rho23) + std::sqrt(x.rho11 * x.rho44));
            return ConcurrenceResult{std::max({0.0, d, o}), ConcurrenceBranch::diagonal};
        };
    } else if (!a.inject_fault.empty()) {
        throw Error("invalid-args", "unknown fault " + a.inject_fault);
    }

    const auto rep = run_verification(opt);
    with_output(a.out, [&](std::ostream& os) {
        if (a.format == "json") {
            nlohmann::json claims = nlohmann::json::array();
            for (const auto& c : rep.claims)
                claims.push_back({{"name", c.name},
                                  {"passed", c.passed},
                                  {"measured", c.measured},
                                  {"tolerance", c.tolerance},
                                  {"detail", c.detail}});
            os << nlohmann::json{{"schema", 1}, {"passed", rep.all_passed()}, {"claims", claims}}.dump(1) << '\n';
        } else {
            print_report(os, rep);
        }
    });
    if (!rep.all_passed()) {
        for (const auto& c : rep.claims)
            if (!c.passed) std::cerr << "failed claim: " << c.name << '\n';
        return kExitVerifyFailed;
    }
    return kExitOk;
}

template <class Map>
auto choices(const Map& m) {
    std::vector<std::string> keys;
    for (const auto& [k, v] : m) keys.push_back(k);
    return CLI::IsMember(keys);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement broadcasting and teleportation fidelity toolkit"};
    app.require_subcommand(1);

    ChannelArgs ch;
    auto* channel = app.add_subcommand("channel", "Report one broadcast output as a teleportation channel");
    channel->add_option("--alpha", ch.alpha, "|alpha| of the input state alpha|00> + beta|11>")->capture_default_str();
    channel->add_option("--p", ch.p, "cloner asymmetry p in [0, 1]")->capture_default_str();
    channel->add_option("--scenario", ch.scenario)->check(choices(kScenarios))->capture_default_str();
    channel->add_option("--pair", ch.pair)->check(choices(kPairs))->capture_default_str();
    channel->add_option("--format", ch.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    channel->add_option("--out", ch.out, "output file, - for stdout")->capture_default_str();

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Grid sweep over (|alpha|, p)");
    sweep->add_option("--scenario", sw.scenario)->check(choices(kScenarioSelect))->capture_default_str();
    sweep->add_option("--pair", sw.pair)->check(choices(kPairSelect))->capture_default_str();
    sweep->add_option("--alpha-steps", sw.alpha_steps)->capture_default_str();
    sweep->add_option("--p-steps", sw.p_steps)->capture_default_str();
    sweep->add_option("--alpha-range", sw.alpha_range, "a,b")->delimiter(',')->expected(2);
    sweep->add_option("--p-range", sw.p_range, "a,b")->delimiter(',')->expected(2);
    sweep->add_option("--seed", sw.seed)->capture_default_str();
    sweep->add_option("--samples", sw.samples)->capture_default_str();
    sweep->add_option("--jobs", sw.jobs, "worker threads, 0 = all cores")->capture_default_str();
    sweep->add_option("--out", sw.out, "output file, - for stdout")->capture_default_str();
    sweep->add_option("--format", sw.format)->check(choices(kFormats))->capture_default_str();

    RegionsArgs rg;
    auto* regions = app.add_subcommand("regions", "Inseparability windows and boundary curves");
    regions->add_option("--scenario", rg.scenario)->check(choices(kScenarioSelect))->capture_default_str();
    regions->add_option("--format", rg.format)->check(CLI::IsMember({"text", "csv", "json"}))->capture_default_str();
    regions->add_option("--out", rg.out, "output file, - for stdout")->capture_default_str();

    VerifyArgs vf;
    auto* verify = app.add_subcommand("verify", "Run every verification claim");
    verify->add_option("--seed", vf.seed)->capture_default_str();
    verify->add_option("--samples", vf.samples, "Monte Carlo samples per channel")->capture_default_str();
    verify->add_option("--jobs", vf.jobs, "worker threads, 0 = all cores")->capture_default_str();
    verify->add_option("--format", vf.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    verify->add_option("--out", vf.out, "output file, - for stdout")->capture_default_str();
    verify->add_option("--inject-fault", vf.inject_fault)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInvalidArgs;
    }

    try {
        if (channel->parsed()) return cmd_channel(ch);
        if (sweep->parsed()) return cmd_sweep(sw);
        if (regions->parsed()) return cmd_regions(rg);
        if (verify->parsed()) return cmd_verify(vf);
    } catch (const IoError& e) {
        std::cerr << "io-error: " << e.what() << '\n';
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "invalid-args: " << e.what() << '\n';
        return kExitInvalidArgs;
    }
    return kExitInvalidArgs;
}
