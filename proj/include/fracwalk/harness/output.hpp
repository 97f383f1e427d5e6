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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracwalk/harness/config.hpp"
#include "fracwalk/montecarlo.hpp"

namespace fracwalk::harness {

inline constexpr const char* version_string = "fracwalk 1.0.0";

inline std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline std::string field_csv(const SolutionField& f)
{
    std::string s = "x,re_u,im_u,stderr_re,stderr_im\n";
    for (std::size_t i = 0; i < f.x_grid.size(); ++i) {
        const double se_re = i < f.meta.stderr_re.size() ? f.meta.stderr_re[i] : 0.0;
        const double se_im = i < f.meta.stderr_im.size() ? f.meta.stderr_im[i] : 0.0;
        s += fmt17(f.x_grid[i]) + "," + fmt17(f.values[i].real()) + "," + fmt17(f.values[i].imag()) + ","
             + fmt17(se_re) + "," + fmt17(se_im) + "\n";
    }
    return s;
}

inline std::string sweep_csv(const SweepResult& r)
{
    const std::string slope = r.slope ? fmt17(*r.slope) : "absent";
    std::string s = "n,m,max_err,slope\n";
    for (const auto& row : r.rows)
        s += std::to_string(row.n) + "," + std::to_string(row.m) + "," + fmt17(row.max_err) + "," + slope + "\n";
    return s;
}

// Sidecar with everything needed to re-run: canonical config, hash, seed.
inline nlohmann::json run_metadata(const RunConfig& cfg, const std::string& command, double wall_seconds)
{
    nlohmann::json j;
    j["version"] = version_string;
    j["command"] = command;
    j["config_hash"] = config_hash(cfg);
    j["config"] = serialize(cfg);
    j["seed"] = cfg.estimator.seed;
    j["kind"] = kind_name(cfg.kind);
    j["parameters"] = {{"N", cfg.N},
                       {"beta", {cfg.beta_c().real(), cfg.beta_c().imag()}},
                       {"alpha", cfg.alpha_d()},
                       {"t", cfg.t_d()},
                       {"n", cfg.n},
                       {"m", cfg.m},
                       {"symbol", cfg.symbol},
                       {"datum", cfg.datum.type}};
    j["wall_time_s"] = wall_seconds;
    return j;
}

inline nlohmann::json field_metadata(const SolutionField& f)
{
    return {{"method", f.meta.method},  {"n", f.meta.n},
            {"m", f.meta.m},            {"samples", f.meta.samples},
            {"seed", f.meta.seed},      {"variant", f.meta.variant},
            {"truncated", f.meta.truncated}, {"t", f.t},
            {"points", f.x_grid.size()}};
}

// Log-log plot of max_err against n, one polyline per m.
inline std::string sweep_svg(const SweepResult& r, const std::string& title)
{
    const double W = 640, H = 440, left = 70, right = 20, top = 40, bottom = 60;
    std::map<std::uint64_t, std::vector<std::pair<double, double>>> series;
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& row : r.rows) {
        if (!(row.max_err > 0.0)) continue;
        const double lx = std::log10(static_cast<double>(row.n));
        const double ly = std::log10(row.max_err);
        series[row.m].push_back({lx, ly});
        xmin = std::min(xmin, lx);
        xmax = std::max(xmax, lx);
        ymin = std::min(ymin, ly);
        ymax = std::max(ymax, ly);
    }
    if (series.empty()) {
        xmin = 0;
        xmax = 1;
        ymin = -1;
        ymax = 0;
    }
    xmin = std::floor(xmin);
    xmax = std::max(std::ceil(xmax), xmin + 1);
    ymin = std::floor(ymin);
    ymax = std::max(std::ceil(ymax), ymin + 1);
    auto px = [&](double lx) { return left + (lx - xmin) / (xmax - xmin) * (W - left - right); };
    auto py = [&](double ly) { return H - bottom - (ly - ymin) / (ymax - ymin) * (H - top - bottom); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\">" << title << "</text>\n";
    o << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom << "\" stroke=\"black\"/>\n";
    for (double d = xmin; d <= xmax + 1e-9; d += 1.0) {
        o << "<line x1=\"" << px(d) << "\" y1=\"" << H - bottom << "\" x2=\"" << px(d) << "\" y2=\"" << H - bottom + 5 << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << px(d) << "\" y=\"" << H - bottom + 20 << "\" text-anchor=\"middle\">1e" << static_cast<int>(d) << "</text>\n";
    }
    for (double d = ymin; d <= ymax + 1e-9; d += 1.0) {
        o << "<line x1=\"" << left - 5 << "\" y1=\"" << py(d) << "\" x2=\"" << left << "\" y2=\"" << py(d) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << left - 8 << "\" y=\"" << py(d) + 4 << "\" text-anchor=\"end\">1e" << static_cast<int>(d) << "</text>\n";
    }
    o << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">n</text>\n";
    o << "<text x=\"18\" y=\"" << (top + H - bottom) / 2 << "\" transform=\"rotate(-90 18 " << (top + H - bottom) / 2
      << ")\" text-anchor=\"middle\">max error</text>\n";
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    int idx = 0;
    for (const auto& [m, pts] : series) {
        const char* color = colors[idx % 6];
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [lx, ly] : pts) o << px(lx) << "," << py(ly) << " ";
        o << "\"/>\n";
        for (const auto& [lx, ly] : pts)
            o << "<circle cx=\"" << px(lx) << "\" cy=\"" << py(ly) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        o << "<text x=\"" << W - right - 90 << "\" y=\"" << top + 16 * (idx + 1) << "\" fill=\"" << color << "\">"
          << (m ? "m = " + std::to_string(m) : std::string("no time change")) << "</text>\n";
        ++idx;
    }
    if (r.slope) o << "<text x=\"" << left + 10 << "\" y=\"" << top + 16 << "\">slope " << fmt17(*r.slope).substr(0, 7) << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

} // namespace fracwalk::harness
