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

// Monte Carlo estimators of E[f(x + W_n(T))] for the time changes T = t,
// S_m(t), two independent subordinated copies, and L(t).
//
// Work is split into chunks of fixed size. Chunk c draws from
// RandomStream(seed, c) and keeps its own running moments; chunks are merged
// in index order, so the result does not depend on the number of workers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "fracwalk/errors.hpp"
#include "fracwalk/initialdata.hpp"
#include "fracwalk/random.hpp"
#include "fracwalk/subordination.hpp"
#include "fracwalk/symbols.hpp"
#include "fracwalk/walks.hpp"

namespace fracwalk {

enum class EstimatorVariant { PureMC, SemiAnalytic };

inline const char* variant_name(EstimatorVariant v)
{
    return v == EstimatorVariant::PureMC ? "pure_mc" : "semi_analytic";
}

struct EstimatorConfig {
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    std::uint64_t chunk_size = 1000;
    EstimatorVariant variant = EstimatorVariant::SemiAnalytic;
    unsigned workers = 1;
    // Density parts of the datum are discretized with this many 16-point
    // Gauss-Legendre panels.
    int spectral_panels = 32;

    std::uint64_t chunks() const
    {
        if (samples == 0 || chunk_size == 0)
            throw DomainError("EstimatorConfig: samples and chunk_size must be positive");
        return (samples + chunk_size - 1) / chunk_size;
    }
    std::uint64_t samples_used() const { return chunks() * chunk_size; }
};

struct EstimateResult {
    cplx mean = 0.0;
    double std_error = 0.0; // max of the real and imaginary standard errors
    double stderr_re = 0.0;
    double stderr_im = 0.0;
    std::uint64_t samples_used = 0;
    std::uint64_t truncated = 0;
    EstimatorConfig config;
};

//======================================================================
// Chunked engine.

namespace detail {

// Running mean and sum of squared deviations of a real quantity.
struct Welford {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        count += 1.0;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }

    void merge(const Welford& o)
    {
        if (o.count == 0.0) return;
        if (count == 0.0) {
            *this = o;
            return;
        }
        const double total = count + o.count;
        const double d = o.mean - mean;
        mean += d * o.count / total;
        m2 += o.m2 + d * d * count * o.count / total;
        count = total;
    }

    double std_error() const { return count > 1.0 ? std::sqrt(m2 / (count - 1.0) / count) : 0.0; }
};

struct ChunkStats {
    std::vector<Welford> re;
    std::vector<Welford> im;
    std::uint64_t truncated = 0;
};

} // namespace detail

struct FieldEstimate {
    std::vector<cplx> mean;
    std::vector<double> stderr_re;
    std::vector<double> stderr_im;
    std::uint64_t samples_used = 0;
    std::uint64_t truncated = 0;
};

// Runs draw(rng, out) samples_used() times, where draw fills out (of length
// dim) with one sample and returns false if the sample was truncated.
template <class Draw>
FieldEstimate run_chunked(const EstimatorConfig& cfg, std::size_t dim, Draw&& draw)
{
    const std::uint64_t chunks = cfg.chunks();
    std::vector<detail::ChunkStats> stats(chunks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        std::vector<cplx> sample(dim);
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                RandomStream rng(cfg.seed, c);
                detail::ChunkStats st{std::vector<detail::Welford>(dim), std::vector<detail::Welford>(dim), 0};
                for (std::uint64_t j = 0; j < cfg.chunk_size; ++j) {
                    std::fill(sample.begin(), sample.end(), cplx(0.0, 0.0));
                    if (!draw(rng, sample)) ++st.truncated;
                    for (std::size_t i = 0; i < dim; ++i) {
                        st.re[i].add(sample[i].real());
                        st.im[i].add(sample[i].imag());
                    }
                }
                stats[c] = std::move(st);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = chunks;
                return;
            }
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(chunks)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    detail::ChunkStats total{std::vector<detail::Welford>(dim), std::vector<detail::Welford>(dim), 0};
    for (const auto& st : stats) {
        for (std::size_t i = 0; i < dim; ++i) {
            total.re[i].merge(st.re[i]);
            total.im[i].merge(st.im[i]);
        }
        total.truncated += st.truncated;
    }
    FieldEstimate out;
    out.samples_used = cfg.samples_used();
    out.truncated = total.truncated;
    for (std::size_t i = 0; i < dim; ++i) {
        out.mean.emplace_back(total.re[i].mean, total.im[i].mean);
        out.stderr_re.push_back(total.re[i].std_error());
        out.stderr_im.push_back(total.im[i].std_error());
    }
    return out;
}

// Scalar estimate of E[draw()].
template <class Draw>
EstimateResult estimate(const EstimatorConfig& cfg, Draw&& draw)
{
    const FieldEstimate f = run_chunked(cfg, 1, [&](RandomStream& rng, std::vector<cplx>& out) {
        out[0] = draw(rng);
        return true;
    });
    EstimateResult r;
    r.mean = f.mean[0];
    r.stderr_re = f.stderr_re[0];
    r.stderr_im = f.stderr_im[0];
    r.std_error = std::max(r.stderr_re, r.stderr_im);
    r.samples_used = f.samples_used;
    r.config = cfg;
    return r;
}

//======================================================================
// Shared pieces of the representations.

namespace detail {

// Discretized datum with e^{-iyx} tabulated for every atom and grid point.
struct SpectralTable {
    std::vector<SpectralAtom> atoms;
    std::vector<double> x_grid;
    std::vector<cplx> phase; // phase[j * nx + i] = w_j e^{-i y_j x_i}
    double radius = 0.0;

    SpectralTable(const InitialDatum& datum, const std::vector<double>& x, int panels)
        : atoms(datum.discretize(panels)), x_grid(x), radius(datum.support_radius())
    {
        check_grid(x_grid);
        phase.resize(atoms.size() * x_grid.size());
        for (std::size_t j = 0; j < atoms.size(); ++j)
            for (std::size_t i = 0; i < x_grid.size(); ++i)
                phase[j * x_grid.size() + i] = atoms[j].weight * std::exp(cplx(0.0, -atoms[j].y * x_grid[i]));
    }

    std::size_t nx() const { return x_grid.size(); }

    // out[i] += sum_j c_j phase[j, i].
    void accumulate(const std::vector<cplx>& c, std::vector<cplx>& out) const
    {
        const std::size_t n = nx();
        for (std::size_t j = 0; j < atoms.size(); ++j) {
            const cplx cj = c[j];
            if (cj == cplx(0.0, 0.0)) continue;
            const cplx* row = &phase[j * n];
            for (std::size_t i = 0; i < n; ++i) out[i] += cj * row[i];
        }
    }

    // f(x_i + w) for every grid point; false when the exponent cap is hit.
    bool evaluate_shifted(cplx w, std::vector<cplx>& out) const
    {
        if (radius * std::abs(w.imag()) > exponent_cap) return false;
        std::vector<cplx> c(atoms.size());
        for (std::size_t j = 0; j < atoms.size(); ++j) c[j] = std::exp(cplx(0.0, -atoms[j].y) * w);
        accumulate(c, out);
        return true;
    }
};

// log psi_xi(-y n^{-1/N}) per atom: the conditional characteristic function
// after k steps is exp(k L_j).
inline std::vector<cplx> log_step_cf(const WalkSpec& walk, std::uint64_t n, const std::vector<SpectralAtom>& atoms)
{
    const double scale = walk_scale(walk, n);
    std::vector<cplx> L(atoms.size());
    for (std::size_t j = 0; j < atoms.size(); ++j) L[j] = log_xi_char_fn(walk, cplx(-atoms[j].y * scale, 0.0));
    return L;
}

inline SolutionField to_field(const FieldEstimate& est, const std::vector<double>& x, double t,
                              const std::string& method, std::uint64_t n, std::uint64_t m,
                              const EstimatorConfig& cfg)
{
    SolutionField f;
    f.x_grid = x;
    f.values = est.mean;
    f.t = t;
    f.meta.method = method;
    f.meta.n = n;
    f.meta.m = m;
    f.meta.samples = est.samples_used;
    f.meta.seed = cfg.seed;
    f.meta.variant = variant_name(cfg.variant);
    f.meta.truncated = est.truncated;
    f.meta.stderr_re = est.stderr_re;
    f.meta.stderr_im = est.stderr_im;
    return f;
}

inline void check_datum(const InitialDatum& datum, const WalkSpec& walk)
{
    if (!check_growth_condition(datum, walk.N).holds)
        throw DomainError("datum does not satisfy the growth condition");
}

inline std::uint64_t steps_for_time(std::uint64_t n, double s)
{
    const double v = std::floor(static_cast<double>(n) * s);
    if (!(v < 9.0e18)) throw OverflowError("time change too large for the step counter");
    return static_cast<std::uint64_t>(v);
}

// Conditional field sum_j w_j e^{k L_j} e^{-i y_j x} added to out.
inline void add_conditional(const SpectralTable& table, const std::vector<cplx>& L, double k,
                            std::vector<cplx>& coeffs, std::vector<cplx>& out)
{
    for (std::size_t j = 0; j < L.size(); ++j) coeffs[j] = (k == 0.0) ? cplx(1.0) : std::exp(k * L[j]);
    table.accumulate(coeffs, out);
}

} // namespace detail

//======================================================================
// Representations.

// E[f(x + W_n(t))].
inline SolutionField represent_walk(const InitialDatum& datum, const WalkSpec& walk, std::uint64_t n, double t,
                                    const std::vector<double>& x_grid, const EstimatorConfig& cfg)
{
    detail::check_datum(datum, walk);
    if (n < 1) throw DomainError("represent_walk: n must be >= 1");
    const detail::SpectralTable table(datum, x_grid, cfg.spectral_panels);
    if (cfg.variant == EstimatorVariant::SemiAnalytic) {
        const auto L = detail::log_step_cf(walk, n, table.atoms);
        std::vector<cplx> coeffs(L.size());
        FieldEstimate est;
        est.mean.assign(x_grid.size(), 0.0);
        detail::add_conditional(table, L, static_cast<double>(walk_steps(n, t)), coeffs, est.mean);
        est.stderr_re.assign(x_grid.size(), 0.0);
        est.stderr_im.assign(x_grid.size(), 0.0);
        return detail::to_field(est, x_grid, t, "walk", n, 0, cfg);
    }
    const FieldEstimate est = run_chunked(cfg, x_grid.size(), [&](RandomStream& rng, std::vector<cplx>& out) {
        return table.evaluate_shifted(walk_sample(walk, n, t, rng), out);
    });
    return detail::to_field(est, x_grid, t, "walk", n, 0, cfg);
}

// E[f(x + W_n(S_m(t)))].
inline SolutionField represent_subordinated(const InitialDatum& datum, const WalkSpec& walk, std::uint64_t n,
                                            const SubordinatorSpec& sub, double t,
                                            const std::vector<double>& x_grid, const EstimatorConfig& cfg)
{
    walk.require_stable("represent_subordinated");
    detail::check_datum(datum, walk);
    if (n < 1) throw DomainError("represent_subordinated: n must be >= 1");
    const detail::SpectralTable table(datum, x_grid, cfg.spectral_panels);
    FieldEstimate est;
    if (cfg.variant == EstimatorVariant::SemiAnalytic) {
        const auto L = detail::log_step_cf(walk, n, table.atoms);
        est = run_chunked(cfg, x_grid.size(), [&](RandomStream& rng, std::vector<cplx>& out) {
            thread_local std::vector<cplx> coeffs;
            coeffs.resize(L.size());
            const double s = sample_Sm(sub, t, rng).value;
            detail::add_conditional(table, L, static_cast<double>(detail::steps_for_time(n, s)), coeffs, out);
            return true;
        });
    } else {
        est = run_chunked(cfg, x_grid.size(), [&](RandomStream& rng, std::vector<cplx>& out) {
            const double s = sample_Sm(sub, t, rng).value;
            return table.evaluate_shifted(walk_sample_steps(walk, n, detail::steps_for_time(n, s), rng), out);
        });
    }
    return detail::to_field(est, x_grid, t, "subordinated", n, sub.m, cfg);
}

// Rescaled time t / (2 cos(alpha pi / 2)) used by the two-copy construction.
inline double two_copy_time(double alpha, double t) { return t / (2.0 * std::cos(alpha * pi / 2.0)); }

// E[f(x + X + X')] with X, X' independent subordinated walks for beta = N!
// and beta = -N!, both run to the rescaled time.
inline SolutionField represent_riesz_two_copy(const InitialDatum& datum, int N, double alpha, double t,
                                              const std::vector<double>& x_grid, std::uint64_t n,
                                              std::uint64_t m, const EstimatorConfig& cfg,
                                              SumConvention conv = SumConvention::AsPrinted)
{
    if (N % 2 == 0) throw DomainError("represent_riesz_two_copy: N must be odd");
    const WalkSpec plus = WalkSpec::make(N, factorial_d(N));
    const WalkSpec minus = WalkSpec::make(N, -factorial_d(N));
    plus.require_stable("represent_riesz_two_copy");
    minus.require_stable("represent_riesz_two_copy");
    detail::check_datum(datum, plus);
    const SubordinatorSpec sub = SubordinatorSpec::make(alpha, m, conv);
    const double tt = two_copy_time(alpha, t);
    const detail::SpectralTable table(datum, x_grid, cfg.spectral_panels);
    FieldEstimate est;
    if (cfg.variant == EstimatorVariant::SemiAnalytic) {
        const auto Lp = detail::log_step_cf(plus, n, table.atoms);
        const auto Lm = detail::log_step_cf(minus, n, table.atoms);
        est = run_chunked(cfg, x_grid.size(), [&](RandomStream& rng, std::vector<cplx>& out) {
            thread_local std::vector<cplx> coeffs;
            coeffs.resize(Lp.size());
            const double kp = static_cast<double>(detail::steps_for_time(n, sample_Sm(sub, tt, rng).value));
            const double km = static_cast<double>(detail::steps_for_time(n, sample_Sm(sub, tt, rng).value));
            for (std::size_t j = 0; j < Lp.size(); ++j) coeffs[j] = std::exp(kp * Lp[j] + km * Lm[j]);
            table.accumulate(coeffs, out);
            return true;
        });
    } else {
        est = run_chunked(cfg, x_grid.size(), [&](RandomStream& rng, std::vector<cplx>& out) {
            const auto kp = detail::steps_for_time(n, sample_Sm(sub, tt, rng).value);
            const auto km = detail::steps_for_time(n, sample_Sm(sub, tt, rng).value);
            const cplx w = walk_sample_steps(plus, n, kp, rng) + walk_sample_steps(minus, n, km, rng);
            return table.evaluate_shifted(w, out);
        });
    }
    return detail::to_field(est, x_grid, t, "riesz_two_copy", n, m, cfg);
}

// E[f(x + W_n(L(t)))].
inline SolutionField represent_time_fractional(const InitialDatum& datum, const WalkSpec& walk, std::uint64_t n,
                                               double alpha, double t, const std::vector<double>& x_grid,
                                               const EstimatorConfig& cfg)
{
    walk.require_stable("represent_time_fractional");
    detail::check_datum(datum, walk);
    if (n < 1) throw DomainError("represent_time_fractional: n must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("represent_time_fractional: alpha must lie in (0, 1)");
    const detail::SpectralTable table(datum, x_grid, cfg.spectral_panels);
    auto draw_time = [&](RandomStream& rng) { return t > 0.0 ? sample_L(alpha, t, rng).value : 0.0; };
    FieldEstimate est;
    if (cfg.variant == EstimatorVariant::SemiAnalytic) {
        const auto L = detail::log_step_cf(walk, n, table.atoms);
        est = run_chunked(cfg, x_grid.size(), [&](RandomStream& rng, std::vector<cplx>& out) {
            thread_local std::vector<cplx> coeffs;
            coeffs.resize(L.size());
            const double k = static_cast<double>(detail::steps_for_time(n, draw_time(rng)));
            detail::add_conditional(table, L, k, coeffs, out);
            return true;
        });
    } else {
        est = run_chunked(cfg, x_grid.size(), [&](RandomStream& rng, std::vector<cplx>& out) {
            const auto k = detail::steps_for_time(n, draw_time(rng));
            return table.evaluate_shifted(walk_sample_steps(walk, n, k, rng), out);
        });
    }
    return detail::to_field(est, x_grid, t, "time_fractional", n, 0, cfg);
}

//======================================================================
// Convergence sweeps.

enum class ProblemKind { Walk, Subordinated, TwoCopyRiesz, TimeFractional };

struct ProblemDescriptor {
    ProblemKind kind = ProblemKind::Walk;
    InitialDatum datum = InitialDatum::cosine();
    int N = 2;
    cplx beta = 1.0;
    double alpha = 0.5;
    double t = 1.0;
    std::vector<double> x_grid = linspace(-10.0, 10.0, 201);
    SumConvention convention = SumConvention::AsPrinted;
};

// The n -> infinity (and m -> infinity) limit the representation targets.
inline SolutionField reference_solution(const ProblemDescriptor& p)
{
    switch (p.kind) {
    case ProblemKind::Walk:
        return spectral_solution(p.datum, ANbeta{p.N, p.beta}, p.t, p.x_grid);
    case ProblemKind::Subordinated:
        return spectral_solution(p.datum, FracANbeta{p.N, p.beta, p.alpha}, p.t, p.x_grid);
    case ProblemKind::TwoCopyRiesz:
        return spectral_solution(p.datum, RieszFrac{p.N, p.alpha}, p.t, p.x_grid);
    case ProblemKind::TimeFractional:
        return time_fractional_solution(p.datum, p.N, p.beta, p.alpha, p.t, p.x_grid);
    }
    throw DomainError("reference_solution: unknown problem kind");
}

inline SolutionField represent(const ProblemDescriptor& p, std::uint64_t n, std::uint64_t m,
                               const EstimatorConfig& cfg)
{
    const WalkSpec walk = WalkSpec::make(p.N, p.beta);
    switch (p.kind) {
    case ProblemKind::Walk:
        return represent_walk(p.datum, walk, n, p.t, p.x_grid, cfg);
    case ProblemKind::Subordinated:
        return represent_subordinated(p.datum, walk, n, SubordinatorSpec::make(p.alpha, m, p.convention), p.t,
                                      p.x_grid, cfg);
    case ProblemKind::TwoCopyRiesz:
        return represent_riesz_two_copy(p.datum, p.N, p.alpha, p.t, p.x_grid, n, m, cfg, p.convention);
    case ProblemKind::TimeFractional:
        return represent_time_fractional(p.datum, walk, n, p.alpha, p.t, p.x_grid, cfg);
    }
    throw DomainError("represent: unknown problem kind");
}

inline bool uses_subordinator(ProblemKind k)
{
    return k == ProblemKind::Subordinated || k == ProblemKind::TwoCopyRiesz;
}

struct SweepRow {
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    double max_err = 0.0;
    double max_stderr = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    // Least-squares slope of log(max_err) against log(n) at the largest m;
    // absent when fewer than two rows are available there.
    std::optional<double> slope;
};

inline std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 2) return std::nullopt;
    const double k = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double den = k * sxx - sx * sx;
    if (den == 0.0) return std::nullopt;
    return (k * sxy - sx * sy) / den;
}

inline SweepResult convergence_sweep(const ProblemDescriptor& p, const std::vector<std::uint64_t>& n_list,
                                     std::vector<std::uint64_t> m_list, const EstimatorConfig& cfg)
{
    if (n_list.empty()) throw DomainError("convergence_sweep: n_list is empty");
    if (!uses_subordinator(p.kind)) m_list = {0};
    if (m_list.empty()) throw DomainError("convergence_sweep: m_list is empty");
    const SolutionField ref = reference_solution(p);
    SweepResult result;
    for (std::uint64_t m : m_list) {
        for (std::uint64_t n : n_list) {
            const SolutionField u = represent(p, n, m, cfg);
            SweepRow row{n, m, max_abs_diff(u, ref), 0.0};
            for (std::size_t i = 0; i < u.meta.stderr_re.size(); ++i)
                row.max_stderr = std::max({row.max_stderr, u.meta.stderr_re[i], u.meta.stderr_im[i]});
            result.rows.push_back(row);
        }
    }
    const std::uint64_t m_max = *std::max_element(m_list.begin(), m_list.end());
    std::vector<double> xs, ys;
    for (const auto& r : result.rows) {
        if (r.m == m_max) {
            xs.push_back(static_cast<double>(r.n));
            ys.push_back(r.max_err);
        }
    }
    result.slope = loglog_slope(xs, ys);
    return result;
}

} // namespace fracwalk
