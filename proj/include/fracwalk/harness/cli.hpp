/*
   Copyright 2026 The fracwalk Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// fracwalk solve <config> | converge <config> | check <suite>
//
// Exit codes: 0 ok, 1 failed check, 2 configuration error, 3 numerical error.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracwalk/harness/checks.hpp"
#include "fracwalk/harness/config.hpp"
#include "fracwalk/harness/output.hpp"

namespace fracwalk::harness {

enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_config = 2, exit_numerical = 3 };

struct GlobalOptions {
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> out_dir;
};

inline void apply_overrides(RunConfig& cfg, const GlobalOptions& g)
{
    if (g.seed) cfg.estimator.seed = *g.seed;
    if (g.workers) {
        if (*g.workers < 1) throw ConfigError("--workers: must be >= 1");
        cfg.estimator.workers = *g.workers;
    }
    if (g.out_dir) cfg.output.directory = *g.out_dir;
}

inline bool wants(const RunConfig& cfg, const std::string& format)
{
    for (const auto& f : cfg.output.formats)
        if (f == format) return true;
    return false;
}

// Computes the field a `solve` run asks for.
inline SolutionField solve_field(const RunConfig& cfg)
{
    const InitialDatum datum = make_datum(cfg);
    const auto x = make_grid(cfg);
    const double t = cfg.t_d();
    switch (cfg.kind) {
    case RunKind::Spectral:
        return spectral_solution(datum, make_symbol(cfg), t, x);
    case RunKind::MittagLeffler:
        return time_fractional_solution(datum, cfg.N, cfg.beta_c(), cfg.alpha_d(), t, x);
    default: {
        const ProblemDescriptor p = make_problem(cfg);
        return represent(p, cfg.n, cfg.m, cfg.estimator);
    }
    }
}

inline int cmd_solve(const std::string& path, const GlobalOptions& g, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    RunConfig cfg = load_config(path);
    apply_overrides(cfg, g);
    const SolutionField field = solve_field(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::filesystem::path dir(cfg.output.directory);
    write_text(dir / (cfg.output.name + ".csv"), field_csv(field));
    nlohmann::json meta = run_metadata(cfg, "solve", wall);
    meta["field"] = field_metadata(field);
    write_text(dir / (cfg.output.name + ".json"), meta.dump(2) + "\n");
    out << "solve: wrote " << (dir / (cfg.output.name + ".csv")).string() << " (" << field.x_grid.size()
        << " points, " << field.meta.method << ")\n";
    return exit_ok;
}

inline int cmd_converge(const std::string& path, const GlobalOptions& g, std::ostream& out)
{
    const auto start = std::chrono::steady_clock::now();
    RunConfig cfg = load_config(path);
    apply_overrides(cfg, g);
    if (!cfg.sweep.present) throw ConfigError("config: [sweep]: section required by converge");
    check_reference(cfg);
    const ProblemDescriptor p = make_problem(cfg);
    std::vector<std::uint64_t> m_list = cfg.sweep.m_list;
    if (m_list.empty()) m_list = {cfg.m};
    const SweepResult sweep = convergence_sweep(p, cfg.sweep.n_list, m_list, cfg.estimator);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::filesystem::path dir(cfg.output.directory);
    const std::string stem = cfg.output.name + "_sweep";
    write_text(dir / (stem + ".csv"), sweep_csv(sweep));
    if (wants(cfg, "svg"))
        write_text(dir / (stem + ".svg"), sweep_svg(sweep, kind_name(cfg.kind) + ": max error against n"));
    nlohmann::json meta = run_metadata(cfg, "converge", wall);
    meta["rows"] = sweep.rows.size();
    if (sweep.slope) meta["slope"] = *sweep.slope;
    else meta["slope"] = "absent";
    write_text(dir / (stem + ".json"), meta.dump(2) + "\n");

    for (const auto& row : sweep.rows)
        out << "n=" << row.n << " m=" << row.m << " max_err=" << fmt17(row.max_err) << "\n";
    out << "slope: " << (sweep.slope ? fmt17(*sweep.slope) : std::string("absent")) << "\n";
    return exit_ok;
}

inline int cmd_check(const std::string& suite, const GlobalOptions& g, std::ostream& out)
{
    const CheckReport report = run_check_suite(suite);
    const std::filesystem::path dir(g.out_dir.value_or("."));
    write_text(dir / ("check_" + suite + ".json"), report.to_json().dump(2) + "\n");
    std::size_t failed = 0;
    for (const auto& c : report.checks) {
        if (!c.passed) {
            ++failed;
            out << "FAIL " << c.name << " residual=" << c.residual << " tol=" << c.tolerance << "\n";
        }
    }
    out << "check " << suite << ": " << report.checks.size() - failed << "/" << report.checks.size() << " passed\n";
    return report.passed() ? exit_ok : exit_check_failed;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Random-walk representations of fractional high-order heat-type equations"};
    app.require_subcommand(1);
    GlobalOptions g;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::string out_dir;
    auto* seed_opt = app.add_option("--seed", seed, "Override the estimator seed");
    auto* workers_opt = app.add_option("--workers", workers, "Monte Carlo worker threads");
    auto* out_opt = app.add_option("--out-dir", out_dir, "Directory for artifacts");
    app.fallthrough();

    std::string config_path;
    std::string suite;
    auto* solve = app.add_subcommand("solve", "Compute u(t, x) on a grid and write CSV + JSON");
    solve->add_option("config", config_path, "Run configuration file")->required();
    auto* converge = app.add_subcommand("converge", "Error table against the reference over n (and m)");
    converge->add_option("config", config_path, "Run configuration file")->required();
    auto* check = app.add_subcommand("check", "Run an identity battery");
    check->add_option("suite", suite, "symbols, moments, subordinators, equivalences or all")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }
    if (seed_opt->count()) g.seed = seed;
    if (workers_opt->count()) g.workers = workers;
    if (out_opt->count()) g.out_dir = out_dir;

    try {
        if (solve->parsed()) return cmd_solve(config_path, g, out);
        if (converge->parsed()) return cmd_converge(config_path, g, out);
        return cmd_check(suite, g, out);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_numerical;
    }
}

} // namespace fracwalk::harness
