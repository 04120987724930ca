#ifndef CGO_CLI_HPP
#define CGO_CLI_HPP

// Command-line front end: verification suites and config-driven experiments.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "checks.hpp"
#include "config.hpp"
#include "experiments.hpp"
#include "parallel.hpp"
#include "serialize.hpp"

#ifndef CGO_VERSION
#define CGO_VERSION "unknown"
#endif

namespace cgo::cli {

/// Process exit codes.
enum Exit : int {
    Ok = 0,
    CheckFailed = 1,
    ConfigInvalid = 2,
    Diverged = 3,
    Resonant = 4,
    TrendFailed = 5,
    StatisticsFailed = 6,
    InternalError = 7,
};

struct Options {
    std::string command;
    std::string config;
    std::string out;
    bool json = false;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    bool inject_fault = false;
};

namespace detail {

inline void print_table(std::ostream& os, const checks::SuiteReport& r)
{
    char line[256];
    std::snprintf(line, sizeof line, "%-34s %12s %12s  %s\n", r.suite.c_str(), "error", "tolerance", "result");
    os << line;
    for (const auto& c : r.checks) {
        std::snprintf(line, sizeof line, "  %-32s %12.3e %12.3e  %s\n", c.name.c_str(), c.error, c.tolerance,
                      c.passed ? "PASS" : "FAIL");
        os << line;
    }
    std::snprintf(line, sizeof line, "  %-32s %.2f s  %s\n", "total", r.seconds, r.passed() ? "PASS" : "FAIL");
    os << line;
}

inline int report(const Options& o, const std::vector<checks::SuiteReport>& reports, std::ostream& out)
{
    bool ok = true;
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : reports) {
        ok = ok && r.passed();
        j.push_back(r.to_json());
        if (!o.json) print_table(out, r);
    }
    if (o.json) out << j.dump(2) << '\n';
    if (!o.out.empty()) {
        std::filesystem::create_directories(o.out);
        experiments::write_text(std::filesystem::path(o.out) / "report.json", j.dump(2) + "\n");
    }
    return ok ? Ok : CheckFailed;
}

inline RunConfig config_for(const Options& o)
{
    if (o.config.empty()) throw ConfigError("--config", "is required for " + o.command);
    RunConfig c = load_config(o.config);
    if (o.seed) c.sampling.seed = *o.seed;
    if (!o.out.empty()) c.output.directory = o.out;
    return c;
}

inline int exit_for(const experiments::Result& r)
{
    switch (r.status) {
    case experiments::Status::Diverged: return Diverged;
    case experiments::Status::Resonant: return Resonant;
    case experiments::Status::Ok: break;
    }
    return r.trend_ok ? Ok : TrendFailed;
}

inline int run_experiment(const Options& o, std::ostream& out, std::ostream& err)
{
    const RunConfig c = config_for(o);
    const auto start = std::chrono::steady_clock::now();
    std::optional<experiments::Result> result;
    nlohmann::json error = nullptr;
    int code = Ok;
    try {
        if (o.command == "run-cgo")
            result.emplace(experiments::run_cgo(c));
        else if (o.command == "run-decay")
            result.emplace(experiments::run_decay(c));
        else if (o.command == "run-uniqueness")
            result.emplace(experiments::run_uniqueness(c));
        else
            result.emplace(experiments::run_qnorm(c));
        code = exit_for(*result);
    } catch (const ConfigError&) {
        throw;
    } catch (const DivergenceError& e) {
        code = Diverged;
        error = {{"kind", "divergence"}, {"message", e.what()}, {"contraction", e.contraction()}};
    } catch (const ResonantGridError& e) {
        code = Resonant;
        error = {{"kind", "resonant"}, {"message", e.what()}, {"clamped_fraction", e.clamp_fraction()}};
    } catch (const StatisticalError& e) {
        code = StatisticsFailed;
        error = {{"kind", "statistics"}, {"message", e.what()}};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::filesystem::path dir(c.output.directory);
    std::filesystem::create_directories(dir);
    if (result && c.output.csv) experiments::write_text(dir / "results.csv", result->table.to_csv());
    if (result && c.output.fields && result->snapshot) save_binary((dir / "fields.bin").string(), *result->snapshot);
    if (c.output.manifest) {
        const auto& m = c.media.front();
        nlohmann::json man;
        man["command"] = o.command;
        man["version"] = CGO_VERSION;
        man["config"] = to_json(c);
        man["seed"] = c.sampling.seed;
        man["threads"] = num_threads();
        man["k"] = m.omega * std::sqrt(m.eps0 * m.mu0);
        man["omega"] = m.omega;
        man["wall_clock_seconds"] = seconds;
        man["diagnostics"] = result ? result->diagnostics : nlohmann::json::object();
        man["flags"] = {{"trend_ok", result ? result->trend_ok : false},
                        {"status", result ? experiments::detail::status_name(result->status) : "failed"}};
        man["error"] = error;
        man["exit_code"] = code;
        experiments::write_text(dir / "manifest.json", man.dump(2) + "\n");
    }

    if (result) {
        out << o.command << ": " << result->table.rows().size() << " rows, status "
            << experiments::detail::status_name(result->status) << ", trend " << (result->trend_ok ? "ok" : "failed")
            << ", " << seconds << " s\n";
    } else {
        err << o.command << ": " << error["message"].get<std::string>() << '\n';
    }
    return code;
}

}  // namespace detail

inline int dispatch(const Options& o, std::ostream& out, std::ostream& err)
{
    try {
        if (o.threads > 0) set_num_threads(o.threads);
        if (o.command == "check-algebra") {
            const auto tables = o.inject_fault ? checks::corrupted_tables() : algebra::kTables;
            return detail::report(o, {checks::algebra_suite(tables, o.seed.value_or(1))}, out);
        }
        if (o.command == "check-calculus") {
            const RunConfig c = detail::config_for(o);
            const Grid g = c.make_grid();
            return detail::report(o, {checks::calculus_suite(g, c.sampling.seed), checks::resolvent_suite(g, c.sampling.seed)},
                                  out);
        }
        if (o.command == "check-factorization") {
            const RunConfig c = detail::config_for(o);
            const auto dm = derive(Medium::from_spec(c.make_grid(), c.media.front()));
            return detail::report(o, {checks::factorization_suite(dm, c.sampling.seed)}, out);
        }
        return detail::run_experiment(o, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return ConfigInvalid;
    } catch (const DivergenceError& e) {
        err << "divergence: " << e.what() << '\n';
        return Diverged;
    } catch (const ResonantGridError& e) {
        err << "resonant grid: " << e.what() << '\n';
        return Resonant;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return InternalError;
    }
}

inline int main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Exterior-calculus CGO toolkit: verification suites and experiments"};
    app.set_version_flag("--version", std::string(CGO_VERSION));
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    std::uint64_t seed = 0;
    app.add_option("--config", o.config, "JSON run configuration");
    app.add_option("--out", o.out, "output directory (overrides output.directory)");
    app.add_flag("--json", o.json, "machine-readable check report on stdout");
    auto* seed_opt = app.add_option("--seed", seed, "64-bit seed (overrides sampling.seed)");
    app.add_option("--threads", o.threads, "worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
    app.add_flag("--inject-fault", o.inject_fault, "corrupt one vee sign (self-test of check-algebra)")
        ->group("Testing");

    const std::vector<std::pair<std::string, std::string>> commands{
        {"check-algebra", "exterior algebra identities on basis blades and random forms"},
        {"check-calculus", "discrete calculus identities and resolvent norm on the config grid"},
        {"check-factorization", "Helmholtz factorization and weak potential identities for media[0]"},
        {"run-cgo", "CGO solves over geometry.s"},
        {"run-decay", "averaged remainder decay over geometry.lambda"},
        {"run-uniqueness", "pairing convergence and unique continuation certificate for two media"},
        {"estimate-qnorm", "potential norm estimates over geometry.s"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? Ok : ConfigInvalid;
    }
    o.command = app.get_subcommands().front()->get_name();
    if (*seed_opt) o.seed = seed;
    return dispatch(o, out, err);
}

}  // namespace cgo::cli

#endif  // CGO_CLI_HPP
