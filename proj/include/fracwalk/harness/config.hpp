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

// Run configuration files.
//
//   # comment
//   [problem]
//   kind = subordinated
//   N = 4
//   beta = -(4!)/2^2
//   alpha = 1/2
//
// Sections: problem, datum, grid, estimator, sweep, output. Every error
// names the offending line and key.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fracwalk/errors.hpp"
#include "fracwalk/harness/expr.hpp"
#include "fracwalk/montecarlo.hpp"

namespace fracwalk::harness {

enum class RunKind { Spectral, MittagLeffler, Walk, Subordinated, TwoCopy, TimeFractional };

inline const std::map<std::string, RunKind>& run_kinds()
{
    static const std::map<std::string, RunKind> kinds{
        {"spectral", RunKind::Spectral},         {"mittag_leffler", RunKind::MittagLeffler},
        {"walk", RunKind::Walk},                 {"subordinated", RunKind::Subordinated},
        {"two_copy", RunKind::TwoCopy},          {"time_fractional", RunKind::TimeFractional}};
    return kinds;
}

inline std::string kind_name(RunKind k)
{
    for (const auto& [name, kind] : run_kinds())
        if (kind == k) return name;
    return "?";
}

struct DatumConfig {
    std::string type = "cosine";
    double frequency = 1.0;
    double location = 0.0;
    ExactComplex weight{1, 0};
    double radius = 4.0;
    double sigma = 1.0;

    bool operator==(const DatumConfig&) const = default;
};

struct GridConfig {
    double x_min = -10.0;
    double x_max = 10.0;
    std::uint64_t points = 201;

    bool operator==(const GridConfig&) const = default;
};

struct SweepConfig {
    bool present = false;
    std::vector<std::uint64_t> n_list;
    std::vector<std::uint64_t> m_list;
    std::string reference;

    bool operator==(const SweepConfig&) const = default;
};

struct OutputConfig {
    std::string directory = "out";
    std::string name = "run";
    std::vector<std::string> formats{"csv", "json", "svg"};

    bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
    RunKind kind = RunKind::Spectral;
    std::string symbol = "ANbeta";
    int N = 2;
    ExactComplex beta{1, 0};
    BigRational alpha{1, 2};
    BigRational t{1};
    std::uint64_t n = 1000;
    std::uint64_t m = 100;
    SumConvention convention = SumConvention::AsPrinted;
    DatumConfig datum;
    GridConfig grid;
    EstimatorConfig estimator;
    SweepConfig sweep;
    OutputConfig output;

    // "section.key" -> 1-based line of its definition.
    std::map<std::string, int> lines;

    double alpha_d() const { return alpha.convert_to<double>(); }
    double t_d() const { return t.convert_to<double>(); }
    cplx beta_c() const { return beta.to_cplx(); }

    int line_of(const std::string& key) const
    {
        const auto it = lines.find(key);
        return it == lines.end() ? 0 : it->second;
    }
};

// Semantic equality; line numbers are ignored.
inline bool same_config(const RunConfig& a, const RunConfig& b)
{
    const auto& ea = a.estimator;
    const auto& eb = b.estimator;
    return a.kind == b.kind && a.symbol == b.symbol && a.N == b.N && a.beta == b.beta && a.alpha == b.alpha
           && a.t == b.t && a.n == b.n && a.m == b.m && a.convention == b.convention && a.datum == b.datum
           && a.grid == b.grid && ea.samples == eb.samples && ea.seed == eb.seed && ea.chunk_size == eb.chunk_size
           && ea.variant == eb.variant && ea.workers == eb.workers && ea.spectral_panels == eb.spectral_panels
           && a.sweep == b.sweep && a.output == b.output;
}

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

[[noreturn]] inline void config_fail(int line, const std::string& key, const std::string& what)
{
    std::string msg = "config";
    if (line > 0) msg += ":" + std::to_string(line);
    msg += ": " + key + ": " + what;
    throw ConfigError(msg);
}

inline const std::map<std::string, std::set<std::string>>& allowed_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"problem", {"kind", "symbol", "N", "beta", "alpha", "t", "n", "m", "convention"}},
        {"datum", {"type", "frequency", "location", "weight", "radius", "sigma"}},
        {"grid", {"x_min", "x_max", "points"}},
        {"estimator", {"samples", "seed", "chunk_size", "variant", "workers", "spectral_panels"}},
        {"sweep", {"n_list", "m_list", "reference"}},
        {"output", {"directory", "name", "formats"}}};
    return keys;
}

inline std::uint64_t to_uint(const std::string& v, int line, const std::string& key)
{
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos)
        config_fail(line, key, "expected a nonnegative integer, got '" + v + "'");
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        config_fail(line, key, "integer out of range");
    }
}

inline BigRational to_rational(const std::string& v, int line, const std::string& key)
{
    try {
        const ExactComplex e = parse_expression(v);
        if (!e.is_real()) config_fail(line, key, "expected a real value");
        return e.re;
    } catch (const ConfigError& ex) {
        if (std::string(ex.what()).rfind("config", 0) == 0) throw;
        config_fail(line, key, ex.what());
    }
}

inline double to_double(const std::string& v, int line, const std::string& key)
{
    return to_rational(v, line, key).convert_to<double>();
}

inline std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_exact(const ExactComplex& z)
{
    if (z.im == 0) return z.re.str();
    return "(" + z.re.str() + ") + (" + z.im.str() + ")*i";
}

inline std::string join(const std::vector<std::uint64_t>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
    return s;
}

inline std::string join(const std::vector<std::string>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
}

} // namespace detail

inline bool kind_uses_alpha(const RunConfig& c)
{
    switch (c.kind) {
    case RunKind::Spectral: return c.symbol != "ANbeta" && c.symbol != "RieszPower";
    case RunKind::Walk: return false;
    default: return true;
    }
}

// Parameter checks that need the whole configuration.
inline void validate(const RunConfig& c)
{
    using detail::config_fail;
    auto L = [&](const char* k) { return c.line_of(k); };
    if (c.N < 2) config_fail(L("problem.N"), "problem.N", "must be >= 2");
    if (c.N > 12) config_fail(L("problem.N"), "problem.N", "must be <= 12");
    if (kind_uses_alpha(c) && !(c.alpha > 0 && c.alpha < 1))
        config_fail(L("problem.alpha"), "problem.alpha", "must lie in (0, 1)");
    if (c.t < 0) config_fail(L("problem.t"), "problem.t", "must be nonnegative");
    if (c.n < 1) config_fail(L("problem.n"), "problem.n", "must be >= 1");
    if (c.m < 2) config_fail(L("problem.m"), "problem.m", "must be >= 2");
    static const std::set<std::string> symbols{"ANbeta", "RieszPower", "FracANbeta", "RieszFrac", "TwoCopyRiesz"};
    if (!symbols.count(c.symbol))
        config_fail(L("problem.symbol"), "problem.symbol", "unknown symbol '" + c.symbol + "'");
    const bool needs_stability = c.kind == RunKind::Subordinated || c.kind == RunKind::TimeFractional
                                 || c.kind == RunKind::MittagLeffler
                                 || (c.kind == RunKind::Spectral && (c.symbol == "ANbeta" || c.symbol == "FracANbeta"));
    if (needs_stability && !walk_is_stable(c.N, c.beta_c()))
        config_fail(L("problem.beta"), "problem.beta", "violates the stability condition for N = " + std::to_string(c.N));
    const bool needs_odd = c.kind == RunKind::TwoCopy || (c.kind == RunKind::Spectral && c.symbol == "TwoCopyRiesz");
    if (needs_odd && c.N % 2 == 0) config_fail(L("problem.N"), "problem.N", "must be odd for the two-copy construction");

    static const std::set<std::string> datums{"cosine", "point_mass", "raised_cosine", "truncated_gaussian"};
    if (!datums.count(c.datum.type)) config_fail(L("datum.type"), "datum.type", "unknown datum '" + c.datum.type + "'");
    if (!(c.datum.radius > 0)) config_fail(L("datum.radius"), "datum.radius", "must be positive");
    if (!(c.datum.sigma > 0)) config_fail(L("datum.sigma"), "datum.sigma", "must be positive");

    if (c.grid.points < 1) config_fail(L("grid.points"), "grid.points", "must be >= 1");
    if (c.grid.points > 1 && !(c.grid.x_max > c.grid.x_min))
        config_fail(L("grid.x_max"), "grid.x_max", "must exceed grid.x_min");

    if (c.estimator.samples < 1) config_fail(L("estimator.samples"), "estimator.samples", "must be >= 1");
    if (c.estimator.chunk_size < 1) config_fail(L("estimator.chunk_size"), "estimator.chunk_size", "must be >= 1");
    if (c.estimator.workers < 1) config_fail(L("estimator.workers"), "estimator.workers", "must be >= 1");
    if (c.estimator.spectral_panels < 1)
        config_fail(L("estimator.spectral_panels"), "estimator.spectral_panels", "must be >= 1");

    if (c.sweep.present) {
        if (c.sweep.n_list.empty()) config_fail(L("sweep.n_list"), "sweep.n_list", "must list at least one n");
        for (auto n : c.sweep.n_list)
            if (n < 1) config_fail(L("sweep.n_list"), "sweep.n_list", "entries must be >= 1");
        for (auto m : c.sweep.m_list)
            if (m < 2) config_fail(L("sweep.m_list"), "sweep.m_list", "entries must be >= 2");
    }
    static const std::set<std::string> formats{"csv", "json", "svg"};
    for (const auto& f : c.output.formats)
        if (!formats.count(f)) config_fail(L("output.formats"), "output.formats", "unknown format '" + f + "'");
}

inline RunConfig parse_config(const std::string& text)
{
    using detail::config_fail;
    RunConfig c;
    std::map<std::string, std::pair<std::string, int>> values;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') config_fail(line_no, "section", "missing ']'");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (!detail::allowed_keys().count(section)) config_fail(line_no, "[" + section + "]", "unknown section");
            if (section == "sweep") c.sweep.present = true;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) config_fail(line_no, "line", "expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty()) config_fail(line_no, key, "key outside of any section");
        if (!detail::allowed_keys().at(section).count(key))
            config_fail(line_no, section + "." + key, "unknown key");
        const std::string full = section + "." + key;
        if (values.count(full)) config_fail(line_no, full, "duplicate key (first set on line "
                                                               + std::to_string(values[full].second) + ")");
        values[full] = {value, line_no};
        c.lines[full] = line_no;
    }

    auto get = [&](const std::string& key, auto&& apply) {
        const auto it = values.find(key);
        if (it != values.end()) apply(it->second.first, it->second.second, key);
    };

    get("problem.kind", [&](const std::string& v, int l, const std::string& k) {
        const auto it = run_kinds().find(v);
        if (it == run_kinds().end()) config_fail(l, k, "unknown kind '" + v + "'");
        c.kind = it->second;
    });
    get("problem.symbol", [&](const std::string& v, int, const std::string&) { c.symbol = v; });
    get("problem.N", [&](const std::string& v, int l, const std::string& k) {
        const auto n = detail::to_uint(v, l, k);
        if (n > 1000) config_fail(l, k, "too large");
        c.N = static_cast<int>(n);
    });
    get("problem.beta", [&](const std::string& v, int l, const std::string& k) {
        try {
            c.beta = parse_expression(v);
        } catch (const ConfigError& ex) {
            config_fail(l, k, ex.what());
        }
    });
    get("problem.alpha", [&](const std::string& v, int l, const std::string& k) { c.alpha = detail::to_rational(v, l, k); });
    get("problem.t", [&](const std::string& v, int l, const std::string& k) { c.t = detail::to_rational(v, l, k); });
    get("problem.n", [&](const std::string& v, int l, const std::string& k) { c.n = detail::to_uint(v, l, k); });
    get("problem.m", [&](const std::string& v, int l, const std::string& k) { c.m = detail::to_uint(v, l, k); });
    get("problem.convention", [&](const std::string& v, int l, const std::string& k) {
        if (v == "as_printed") c.convention = SumConvention::AsPrinted;
        else if (v == "from_one") c.convention = SumConvention::FromOne;
        else config_fail(l, k, "expected as_printed or from_one");
    });

    get("datum.type", [&](const std::string& v, int, const std::string&) { c.datum.type = v; });
    get("datum.frequency", [&](const std::string& v, int l, const std::string& k) { c.datum.frequency = detail::to_double(v, l, k); });
    get("datum.location", [&](const std::string& v, int l, const std::string& k) { c.datum.location = detail::to_double(v, l, k); });
    get("datum.weight", [&](const std::string& v, int l, const std::string& k) {
        try {
            c.datum.weight = parse_expression(v);
        } catch (const ConfigError& ex) {
            config_fail(l, k, ex.what());
        }
    });
    get("datum.radius", [&](const std::string& v, int l, const std::string& k) { c.datum.radius = detail::to_double(v, l, k); });
    get("datum.sigma", [&](const std::string& v, int l, const std::string& k) { c.datum.sigma = detail::to_double(v, l, k); });

    get("grid.x_min", [&](const std::string& v, int l, const std::string& k) { c.grid.x_min = detail::to_double(v, l, k); });
    get("grid.x_max", [&](const std::string& v, int l, const std::string& k) { c.grid.x_max = detail::to_double(v, l, k); });
    get("grid.points", [&](const std::string& v, int l, const std::string& k) { c.grid.points = detail::to_uint(v, l, k); });

    get("estimator.samples", [&](const std::string& v, int l, const std::string& k) { c.estimator.samples = detail::to_uint(v, l, k); });
    get("estimator.seed", [&](const std::string& v, int l, const std::string& k) { c.estimator.seed = detail::to_uint(v, l, k); });
    get("estimator.chunk_size", [&](const std::string& v, int l, const std::string& k) { c.estimator.chunk_size = detail::to_uint(v, l, k); });
    get("estimator.workers", [&](const std::string& v, int l, const std::string& k) {
        const auto w = detail::to_uint(v, l, k);
        if (w > 1024) config_fail(l, k, "too many workers");
        c.estimator.workers = static_cast<unsigned>(w);
    });
    get("estimator.spectral_panels", [&](const std::string& v, int l, const std::string& k) {
        const auto p = detail::to_uint(v, l, k);
        if (p > 4096) config_fail(l, k, "too many panels");
        c.estimator.spectral_panels = static_cast<int>(p);
    });
    get("estimator.variant", [&](const std::string& v, int l, const std::string& k) {
        if (v == "pure_mc") c.estimator.variant = EstimatorVariant::PureMC;
        else if (v == "semi_analytic") c.estimator.variant = EstimatorVariant::SemiAnalytic;
        else config_fail(l, k, "expected pure_mc or semi_analytic");
    });

    get("sweep.n_list", [&](const std::string& v, int l, const std::string& k) {
        for (const auto& item : detail::split_list(v)) c.sweep.n_list.push_back(detail::to_uint(item, l, k));
    });
    get("sweep.m_list", [&](const std::string& v, int l, const std::string& k) {
        for (const auto& item : detail::split_list(v)) c.sweep.m_list.push_back(detail::to_uint(item, l, k));
    });
    get("sweep.reference", [&](const std::string& v, int, const std::string&) { c.sweep.reference = v; });

    get("output.directory", [&](const std::string& v, int, const std::string&) { c.output.directory = v; });
    get("output.name", [&](const std::string& v, int l, const std::string& k) {
        if (v.empty() || v.find_first_of("/\\") != std::string::npos) config_fail(l, k, "must be a plain file stem");
        c.output.name = v;
    });
    get("output.formats", [&](const std::string& v, int, const std::string&) { c.output.formats = detail::split_list(v); });

    validate(c);
    return c;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// Canonical text form; parse_config(serialize(c)) is semantically equal to c.
inline std::string serialize(const RunConfig& c)
{
    using detail::format_double;
    std::ostringstream o;
    o << "[problem]\n"
      << "kind = " << kind_name(c.kind) << "\n"
      << "symbol = " << c.symbol << "\n"
      << "N = " << c.N << "\n"
      << "beta = " << detail::format_exact(c.beta) << "\n"
      << "alpha = " << c.alpha.str() << "\n"
      << "t = " << c.t.str() << "\n"
      << "n = " << c.n << "\n"
      << "m = " << c.m << "\n"
      << "convention = " << (c.convention == SumConvention::AsPrinted ? "as_printed" : "from_one") << "\n\n"
      << "[datum]\n"
      << "type = " << c.datum.type << "\n"
      << "frequency = " << format_double(c.datum.frequency) << "\n"
      << "location = " << format_double(c.datum.location) << "\n"
      << "weight = " << detail::format_exact(c.datum.weight) << "\n"
      << "radius = " << format_double(c.datum.radius) << "\n"
      << "sigma = " << format_double(c.datum.sigma) << "\n\n"
      << "[grid]\n"
      << "x_min = " << format_double(c.grid.x_min) << "\n"
      << "x_max = " << format_double(c.grid.x_max) << "\n"
      << "points = " << c.grid.points << "\n\n"
      << "[estimator]\n"
      << "samples = " << c.estimator.samples << "\n"
      << "seed = " << c.estimator.seed << "\n"
      << "chunk_size = " << c.estimator.chunk_size << "\n"
      << "variant = " << variant_name(c.estimator.variant) << "\n"
      << "workers = " << c.estimator.workers << "\n"
      << "spectral_panels = " << c.estimator.spectral_panels << "\n\n";
    if (c.sweep.present) {
        o << "[sweep]\n";
        if (!c.sweep.n_list.empty()) o << "n_list = " << detail::join(c.sweep.n_list) << "\n";
        if (!c.sweep.m_list.empty()) o << "m_list = " << detail::join(c.sweep.m_list) << "\n";
        if (!c.sweep.reference.empty()) o << "reference = " << c.sweep.reference << "\n";
        o << "\n";
    }
    o << "[output]\n"
      << "directory = " << c.output.directory << "\n"
      << "name = " << c.output.name << "\n"
      << "formats = " << detail::join(c.output.formats) << "\n";
    return o.str();
}

// 64-bit FNV-1a of the canonical form, as 16 hex digits.
inline std::string config_hash(const RunConfig& c)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : serialize(c)) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

//======================================================================
// Building library objects from a configuration.

inline InitialDatum make_datum(const RunConfig& c)
{
    const auto& d = c.datum;
    if (d.type == "cosine") return InitialDatum::cosine(d.frequency);
    if (d.type == "point_mass") return InitialDatum::point_mass(d.location, d.weight.to_cplx());
    if (d.type == "raised_cosine") return InitialDatum::raised_cosine(d.radius);
    if (d.type == "truncated_gaussian") return InitialDatum::truncated_gaussian(d.sigma, d.radius);
    throw ConfigError("config: datum.type: unknown datum '" + d.type + "'");
}

inline SymbolSpec make_symbol(const RunConfig& c)
{
    if (c.symbol == "ANbeta") return ANbeta{c.N, c.beta_c()};
    if (c.symbol == "RieszPower") return RieszPower{c.N};
    if (c.symbol == "FracANbeta") return FracANbeta{c.N, c.beta_c(), c.alpha_d()};
    if (c.symbol == "RieszFrac") return RieszFrac{c.N, c.alpha_d()};
    if (c.symbol == "TwoCopyRiesz") return TwoCopyRiesz{c.N, c.alpha_d()};
    throw ConfigError("config: problem.symbol: unknown symbol '" + c.symbol + "'");
}

inline std::vector<double> make_grid(const RunConfig& c)
{
    return linspace(c.grid.x_min, c.grid.x_max, c.grid.points);
}

inline ProblemDescriptor make_problem(const RunConfig& c)
{
    ProblemDescriptor p;
    switch (c.kind) {
    case RunKind::Walk: p.kind = ProblemKind::Walk; break;
    case RunKind::Subordinated: p.kind = ProblemKind::Subordinated; break;
    case RunKind::TwoCopy: p.kind = ProblemKind::TwoCopyRiesz; break;
    case RunKind::TimeFractional: p.kind = ProblemKind::TimeFractional; break;
    default:
        detail::config_fail(c.line_of("problem.kind"), "problem.kind",
                            "'" + kind_name(c.kind) + "' has no random-walk representation to sweep");
    }
    p.datum = make_datum(c);
    p.N = c.N;
    p.beta = c.beta_c();
    p.alpha = c.alpha_d();
    p.t = c.t_d();
    p.x_grid = make_grid(c);
    p.convention = c.convention;
    return p;
}

// The reference named in [sweep] must be the limit of the configured kind.
inline void check_reference(const RunConfig& c)
{
    const int line = c.line_of("sweep.reference");
    if (c.sweep.reference.empty()) detail::config_fail(line, "sweep.reference", "missing reference variant");
    const std::string expected = (c.kind == RunKind::TimeFractional) ? "mittag_leffler" : "spectral";
    if (c.sweep.reference != expected)
        detail::config_fail(line, "sweep.reference",
                            "'" + c.sweep.reference + "' is not the limit of kind '" + kind_name(c.kind)
                                + "' (expected '" + expected + "')");
}

} // namespace fracwalk::harness
