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

// Deterministic identity batteries behind `fracwalk check <suite>`.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracwalk/montecarlo.hpp"
#include "fracwalk/quadrature.hpp"
#include "fracwalk/subordination.hpp"
#include "fracwalk/symbols.hpp"
#include "fracwalk/walks.hpp"

namespace fracwalk::harness {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct CheckReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool passed() const
    {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }

    void add(std::string name, double residual, double tolerance)
    {
        checks.push_back({std::move(name), residual, tolerance, residual <= tolerance});
    }

    // Runs body, recording a failure instead of propagating numerical errors.
    void guard(const std::string& name, const std::function<void()>& body)
    {
        try {
            body();
        } catch (const std::exception& e) {
            checks.push_back({name + " [" + e.what() + "]", INFINITY, 0.0, false});
        }
    }

    nlohmann::json to_json() const
    {
        nlohmann::json j;
        j["suite"] = suite;
        j["passed"] = passed();
        j["checks"] = nlohmann::json::array();
        for (const auto& c : checks) {
            nlohmann::json e;
            e["name"] = c.name;
            // JSON has no infinity; report non-finite residuals as null.
            if (std::isfinite(c.residual)) e["residual"] = c.residual;
            else e["residual"] = nullptr;
            e["tolerance"] = c.tolerance;
            e["passed"] = c.passed;
            j["checks"].push_back(e);
        }
        return j;
    }
};

inline const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"symbols", "moments", "subordinators", "equivalences", "all"};
    return names;
}

namespace detail {

inline std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

inline void symbol_checks(CheckReport& r)
{
    const auto ys = linspace(-3.0, 3.0, 61);
    for (int N : {3, 5}) {
        for (double a : {0.3, 0.5, 0.7}) {
            r.guard("two_copy_identity", [&] {
                double res = 0.0;
                for (double y : ys) {
                    const cplx v = symbol_eval(TwoCopyRiesz{N, a}, y);
                    const double expect = 2.0 * std::cos(pi * a / 2.0) * std::pow(std::abs(y), N * a);
                    res = std::max(res, std::abs(v - expect) / std::max(1.0, expect));
                }
                r.add("two_copy_identity N=" + std::to_string(N) + " alpha=" + fmt(a), res, 1e-12);
            });
        }
    }
    for (int M : {2, 3}) {
        r.guard("heat_recovery", [&] {
            const double beta = sign_pow(M + 1) * factorial_d(2 * M) / std::pow(2.0, M);
            double res = 0.0;
            for (double y : ys) {
                const cplx v = symbol_eval(FracANbeta{2 * M, beta, 1.0 / M}, y);
                res = std::max(res, std::abs(v - 0.5 * y * y) / std::max(1.0, 0.5 * y * y));
            }
            r.add("heat_recovery_symbol M=" + std::to_string(M), res, 1e-12);
        });
    }
    // Fractional symbol equals the branch power of minus the generator symbol.
    struct Case {
        int N;
        cplx beta;
    };
    for (const Case c : {Case{2, 1.0}, Case{3, 2.0}, Case{3, -1.0}, Case{4, -1.0}, Case{5, 0.5}}) {
        for (double a : {0.3, 0.5, 0.8}) {
            r.guard("branch_consistency", [&] {
                double res = 0.0;
                for (double y : ys) {
                    const cplx lhs = symbol_eval(FracANbeta{c.N, c.beta, a}, y);
                    const cplx rhs = complex_pow_alpha(-symbol_eval(ANbeta{c.N, c.beta}, y), a);
                    res = std::max(res, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
                }
                r.add("branch_consistency N=" + std::to_string(c.N) + " alpha=" + fmt(a), res, 1e-14);
            });
        }
    }
    r.guard("dissipativity", [&] {
        double worst = 0.0;
        for (double y : ys) {
            worst = std::min(worst, decay_symbol(FracANbeta{4, -6.0, 0.5}, y).real());
            worst = std::min(worst, decay_symbol(RieszFrac{3, 0.5}, y).real());
            worst = std::min(worst, decay_symbol(TwoCopyRiesz{3, 0.7}, y).real());
            worst = std::min(worst, decay_symbol(RieszPower{4}, y).real());
        }
        r.add("dissipative_real_part_nonnegative", -worst, 0.0);
    });
}

inline void moment_checks(CheckReport& r)
{
    struct Case {
        int N;
        cplx beta;
    };
    for (const Case c : {Case{2, 1.0}, Case{3, 1.0}, Case{4, -1.0}, Case{5, 2.0}}) {
        const WalkSpec w = WalkSpec::make(c.N, c.beta);
        for (std::uint64_t n : {100u, 1000u}) {
            r.guard("walk_moments", [&] {
                const double t = 1.0;
                for (unsigned h = 0; h <= 1; ++h) {
                    const unsigned k = h * c.N;
                    const BigRational exact = walk_moment_coefficient(c.N, n, walk_steps(n, t), h);
                    const BigRational limit = limit_moment_coefficient(c.N, h);
                    r.add("moment_exact N=" + std::to_string(c.N) + " n=" + std::to_string(n) + " k=" + std::to_string(k),
                          exact == limit ? 0.0 : 1.0, 0.0);
                }
                for (unsigned h = 2; h <= 3; ++h) {
                    const unsigned k = h * c.N;
                    const double gap = std::abs(walk_moment_exact(w, n, t, k) - limit_moment(w, t, k));
                    r.add("remainder_bound N=" + std::to_string(c.N) + " n=" + std::to_string(n) + " h=" + std::to_string(h),
                          gap / remainder_bound(w, n, t, h), 1.0);
                }
                double vanish = 0.0;
                for (unsigned k = 1; k <= 12; ++k)
                    if (k % c.N) vanish = std::max(vanish, std::abs(walk_moment_exact(w, n, t, k)));
                r.add("moment_vanishing N=" + std::to_string(c.N) + " n=" + std::to_string(n), vanish, 0.0);
            });
        }
    }
    r.guard("stirling_recurrence", [&] {
        double bad = 0.0;
        auto prev = stirling2_row(0);
        for (unsigned k = 1; k <= 25; ++k) {
            const auto row = stirling2_row(k);
            for (unsigned l = 1; l <= k; ++l) {
                const BigInt rec = (l < prev.size() ? BigInt(prev[l] * l) : BigInt(0)) + prev[l - 1];
                if (rec != row[l]) bad += 1.0;
            }
            prev = row;
        }
        r.add("stirling_recurrence k<=25", bad, 0.0);
    });
    r.guard("bell_bound", [&] {
        double worst = 0.0;
        for (unsigned k = 1; k <= 25; ++k) worst = std::max(worst, bell(k).convert_to<double>() / bell_upper_bound(k));
        r.add("bell_bound k<=25 (ratio)", worst, 1.0);
    });
    r.guard("return_probability", [&] {
        r.add("return_probability(3,1) = 2/9", return_probability(3, 1) == BigRational(2, 9) ? 0.0 : 1.0, 0.0);
        r.add("return_probability(5,1) = 24/625", return_probability(5, 1) == BigRational(24, 625) ? 0.0 : 1.0, 0.0);
    });
}

inline void subordinator_checks(CheckReport& r)
{
    for (double a : {0.2, 0.5, 0.8}) {
        for (std::uint64_t m : {2u, 10u, 100u}) {
            r.guard("Y_normalization", [&] {
                const SubordinatorSpec s = SubordinatorSpec::make(a, m);
                // In u = log y the density becomes c_m e^{-alpha u}.
                const double mass = integrate_real([&](double u) { return s.c_m * std::exp(-a * u); },
                                                   std::log(s.lower()), std::log(s.upper()), 1e-14);
                r.add("Y_normalization alpha=" + fmt(a) + " m=" + std::to_string(m), std::abs(mass - 1.0), 1e-12);
                for (unsigned k = 1; k <= 3; ++k) {
                    const double q = integrate_real([&](double u) { return s.c_m * std::exp((k - a) * u); },
                                                    std::log(s.lower()), std::log(s.upper()), 1e-14);
                    const double v = Y_moment(s, k);
                    r.add("Y_moment alpha=" + fmt(a) + " m=" + std::to_string(m) + " k=" + std::to_string(k),
                          std::abs(v - q) / std::max(1.0, std::abs(q)), 1e-10);
                }
            });
        }
    }
    r.guard("L_moment", [&] {
        r.add("L_moment k=0", std::abs(L_moment(0.5, 1.0, 0) - 1.0), 1e-15);
        r.add("L_moment alpha=1/2 k=1", std::abs(L_moment(0.5, 1.0, 1) - 2.0 / std::sqrt(pi)), 1e-14);
    });
    r.guard("Sm_transform", [&] {
        const SubordinatorSpec s = SubordinatorSpec::make(0.5, 50, SumConvention::FromOne);
        r.add("Sm_transform(z=0) = 1", std::abs(Sm_transform(s, 1.0, 0.0) - 1.0), 1e-14);
        double prev = INFINITY;
        bool monotone = true;
        for (std::uint64_t m : {10u, 50u, 200u}) {
            const double e = std::abs(Sm_transform(SubordinatorSpec::make(0.5, m), 1.0, -1.0) - std::exp(-1.0));
            monotone = monotone && e < prev;
            prev = e;
        }
        r.add("Sm_transform approaches e^-1 monotonically in m", monotone ? 0.0 : 1.0, 0.0);
    });
}

inline void equivalence_checks(CheckReport& r)
{
    struct Case {
        int N;
        double beta;
    };
    const std::vector<cplx> s_grid{1.0, cplx(2.0, 1.0)};
    for (ForcingForm form : {ForcingForm::M1, ForcingForm::M12}) {
        for (int M : {2, 3}) {
            for (const Case c : {Case{2, 1.0}, Case{2, -1.0}, Case{3, 1.0}}) {
                r.guard("laplace_fourier", [&] {
                    double res = 0.0;
                    for (cplx s : s_grid) {
                        for (int j = -30; j <= 30; ++j) {
                            const auto [lhs, rhs] = laplace_fourier_lhs_rhs(s, 0.1 * j, c.N, c.beta, 1.0 / M, form);
                            res = std::max(res, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
                        }
                    }
                    r.add(std::string("laplace_fourier ") + (form == ForcingForm::M1 ? "M1" : "M12") + " M="
                              + std::to_string(M) + " N=" + std::to_string(c.N) + " beta=" + fmt(c.beta),
                          res, 1e-12);
                });
            }
        }
    }
    r.guard("nonlocal_forcing", [&] {
        const auto x = linspace(-10.0, 10.0, 201);
        const InitialDatum d = InitialDatum::cosine();
        TimeFractionalOptions opts;
        opts.enforce_stability = false;
        double res = 0.0;
        const auto fields = nonlocal_forcing_evolve(d, 2, -1.0, 2, linspace(0.1, 1.0, 10), x, ForcingForm::M1);
        for (const auto& f : fields)
            res = std::max(res, max_abs_diff(f, time_fractional_solution(d, 2, -1.0, 0.5, f.t, x, opts)));
        r.add("nonlocal_forcing M1 vs Mittag-Leffler N=2 beta=-1 M=2", res, 1e-3);
    });
}

} // namespace detail

// Throws ConfigError for an unknown suite name.
inline CheckReport run_check_suite(const std::string& suite)
{
    CheckReport r;
    r.suite = suite;
    if (suite == "symbols") detail::symbol_checks(r);
    else if (suite == "moments") detail::moment_checks(r);
    else if (suite == "subordinators") detail::subordinator_checks(r);
    else if (suite == "equivalences") detail::equivalence_checks(r);
    else if (suite == "all") {
        detail::symbol_checks(r);
        detail::moment_checks(r);
        detail::subordinator_checks(r);
        detail::equivalence_checks(r);
    } else {
        throw ConfigError("unknown check suite '" + suite + "' (expected symbols, moments, subordinators, equivalences or all)");
    }
    return r;
}

} // namespace fracwalk::harness
