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

// Fourier symbols of the high-order and fractional operators, spectral
// reference solutions, Mittag-Leffler solutions of the time-fractional
// problem and the nonlocal-forcing reformulations of it.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "fracwalk/errors.hpp"
#include "fracwalk/initialdata.hpp"
#include "fracwalk/quadrature.hpp"
#include "fracwalk/specialfn.hpp"
#include "fracwalk/walks.hpp"

namespace fracwalk {

//======================================================================
// Symbols.

// A_{N,beta}: symbol (-i)^N beta y^N / N!, generator of d/dt u = A u.
struct ANbeta {
    int N = 2;
    cplx beta = 1.0;
};

// B^N: symbol |y|^N.
struct RieszPower {
    int N = 2;
};

// -(-A_{N,beta})^alpha: decay symbol ((-1)^{N+1} i^N beta y^N / N!)^alpha.
struct FracANbeta {
    int N = 2;
    cplx beta = 1.0;
    double alpha = 0.5;
};

// B^{N alpha}: |y|^{N alpha}.
struct RieszFrac {
    int N = 3;
    double alpha = 0.5;
};

// (i y^N)^alpha + (-i y^N)^alpha, N odd.
struct TwoCopyRiesz {
    int N = 3;
    double alpha = 0.5;
};

using SymbolSpec = std::variant<ANbeta, RieszPower, FracANbeta, RieszFrac, TwoCopyRiesz>;

inline std::string symbol_name(const SymbolSpec& spec)
{
    static const char* names[] = {"ANbeta", "RieszPower", "FracANbeta", "RieszFrac", "TwoCopyRiesz"};
    return names[spec.index()];
}

namespace detail {

inline void check_order(int N, const char* who)
{
    if (N < 2) throw DomainError(std::string(who) + ": N must be >= 2");
}

inline void check_alpha(double alpha, const char* who)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError(std::string(who) + ": alpha must lie in (0, 1)");
}

inline void validate(const SymbolSpec& spec)
{
    std::visit(
        [](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            check_order(s.N, "SymbolSpec");
            if constexpr (std::is_same_v<T, FracANbeta>) {
                check_alpha(s.alpha, "FracANbeta");
                if (!walk_is_stable(s.N, s.beta))
                    throw StabilityError("FracANbeta: beta violates the stability condition");
            }
            if constexpr (std::is_same_v<T, RieszFrac>) check_alpha(s.alpha, "RieszFrac");
            if constexpr (std::is_same_v<T, TwoCopyRiesz>) {
                check_alpha(s.alpha, "TwoCopyRiesz");
                if (s.N % 2 == 0) throw DomainError("TwoCopyRiesz: N must be odd");
            }
        },
        spec);
}

} // namespace detail

// (-i)^N beta y^N / N!.
inline cplx anbeta_symbol(int N, cplx beta, double y)
{
    return i_pow(-N) * beta * std::pow(y, N) / factorial_d(N);
}

inline cplx symbol_eval(const SymbolSpec& spec, double y)
{
    detail::validate(spec);
    return std::visit(
        [y](const auto& s) -> cplx {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ANbeta>) {
                return anbeta_symbol(s.N, s.beta, y);
            } else if constexpr (std::is_same_v<T, RieszPower>) {
                return std::pow(std::abs(y), s.N);
            } else if constexpr (std::is_same_v<T, FracANbeta>) {
                const cplx z = static_cast<double>(sign_pow(s.N + 1)) * i_pow(s.N) * s.beta
                               * std::pow(y, s.N) / factorial_d(s.N);
                return complex_pow_alpha(z, s.alpha);
            } else if constexpr (std::is_same_v<T, RieszFrac>) {
                return std::pow(std::abs(y), s.N * s.alpha);
            } else {
                const double yN = std::pow(y, s.N);
                return complex_pow_alpha(cplx(0.0, yN), s.alpha)
                       + complex_pow_alpha(cplx(0.0, -yN), s.alpha);
            }
        },
        spec);
}

inline bool is_dissipative(const SymbolSpec& spec) { return !std::holds_alternative<ANbeta>(spec); }

// Psi_eff with propagator e^{-t Psi_eff}: -Psi for A_{N,beta}, Psi otherwise.
inline cplx decay_symbol(const SymbolSpec& spec, double y)
{
    const cplx psi = symbol_eval(spec, y);
    return is_dissipative(spec) ? psi : -psi;
}

//======================================================================
// Solution fields.

struct SolutionMeta {
    std::string method;
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::string variant;
    std::uint64_t truncated = 0;
    std::vector<double> stderr_re;
    std::vector<double> stderr_im;
};

struct SolutionField {
    std::vector<double> x_grid;
    std::vector<cplx> values;
    double t = 0.0;
    SolutionMeta meta;
};

inline std::vector<double> linspace(double lo, double hi, std::size_t points)
{
    if (points < 2) {
        if (points == 1) return {lo};
        throw DomainError("linspace: need at least one point");
    }
    std::vector<double> x(points);
    for (std::size_t i = 0; i < points; ++i)
        x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    x.back() = hi;
    return x;
}

inline void check_grid(const std::vector<double>& x)
{
    if (x.empty()) throw DomainError("x grid is empty");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1])) throw DomainError("x grid must be strictly increasing");
}

inline double max_abs_diff(const SolutionField& a, const SolutionField& b)
{
    if (a.values.size() != b.values.size()) throw DomainError("max_abs_diff: size mismatch");
    double e = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) e = std::max(e, std::abs(a.values[i] - b.values[i]));
    return e;
}

namespace detail {

// Complex vector with the arithmetic composite_gauss_legendre needs.
struct FieldVec {
    std::vector<cplx> v;

    FieldVec& operator+=(const FieldVec& o)
    {
        if (v.empty()) v.assign(o.v.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
        return *this;
    }
    FieldVec& operator-=(const FieldVec& o)
    {
        if (v.empty()) v.assign(o.v.size(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
        return *this;
    }
    FieldVec& operator*=(double s)
    {
        for (auto& z : v) z *= s;
        return *this;
    }
};

inline double field_norm(const FieldVec& f)
{
    double m = 0.0;
    for (const auto& z : f.v) m = std::max(m, std::abs(z));
    return m;
}

} // namespace detail

// u(x) = int e^{-iyx} G(y) dmu(y) on the grid, densities integrated by
// panel doubling until the field changes by less than tol.
inline std::vector<cplx> spectral_field(const InitialDatum& datum, const std::function<cplx(double)>& G,
                                        const std::vector<double>& x_grid, double tol = 1e-10)
{
    check_grid(x_grid);
    const std::size_t nx = x_grid.size();
    std::vector<cplx> u(nx, 0.0);
    auto kernel = [&](double y, cplx weight, std::vector<cplx>& out) {
        const cplx g = weight * G(y);
        for (std::size_t i = 0; i < nx; ++i) out[i] += g * std::exp(cplx(0.0, -y * x_grid[i]));
    };
    for (const auto& p : datum.point_masses()) kernel(p.y, p.weight, u);
    for (const auto& d : datum.densities()) {
        auto rho = d.density;
        auto f = [&](double y) {
            detail::FieldVec out{std::vector<cplx>(nx, 0.0)};
            kernel(y, rho(y), out.v);
            return out;
        };
        const detail::FieldVec part =
            composite_gauss_legendre<detail::FieldVec>(f, d.a, d.b, tol, detail::field_norm, 8, 16);
        for (std::size_t i = 0; i < nx; ++i) u[i] += part.v[i];
    }
    for (const auto& s : datum.sampled()) {
        const std::size_t n = s.nodes.size();
        for (std::size_t j = 0; j < n; ++j) {
            const double left = (j > 0) ? s.nodes[j] - s.nodes[j - 1] : 0.0;
            const double right = (j + 1 < n) ? s.nodes[j + 1] - s.nodes[j] : 0.0;
            kernel(s.nodes[j], 0.5 * (left + right) * s.values[j], u);
        }
    }
    return u;
}

// Reference solution u(t, x) = int e^{-iyx} e^{-t Psi_eff(y)} dmu(y).
inline SolutionField spectral_solution(const InitialDatum& datum, const SymbolSpec& spec, double t,
                                       const std::vector<double>& x_grid, double tol = 1e-10)
{
    detail::validate(spec);
    if (const auto* a = std::get_if<ANbeta>(&spec)) {
        if (!walk_is_stable(a->N, a->beta))
            throw StabilityError("spectral_solution: A_{N,beta} violates the stability condition");
        // Odd N with stable beta generates a unitary group: any t is allowed.
        if (t < 0.0 && a->N % 2 == 0)
            throw DomainError("spectral_solution: negative time requires a unitary group");
    } else if (t < 0.0) {
        throw DomainError("spectral_solution: t must be nonnegative");
    }
    SolutionField field;
    field.x_grid = x_grid;
    field.t = t;
    field.values = spectral_field(datum, [&](double y) { return std::exp(-t * decay_symbol(spec, y)); },
                                  x_grid, tol);
    field.meta.method = "spectral:" + symbol_name(spec);
    return field;
}

//======================================================================
// Time-fractional problem.

struct TimeFractionalOptions {
    // Refuse beta violating the stability condition.
    bool enforce_stability = true;
    // Use Psi^alpha (the operator -(-A)^alpha) instead of Psi.
    bool fractional_power = false;
};

inline cplx time_fractional_multiplier(int N, cplx beta, double alpha, double t, double lambda,
                                       bool fractional_power = false)
{
    cplx psi = anbeta_symbol(N, beta, lambda);
    if (fractional_power) psi = complex_pow_alpha(psi, alpha);
    return mittag_leffler(alpha, psi * std::pow(t, alpha));
}

// u(t, x) = int e^{-i lambda x} E_alpha(beta/N! (-i lambda)^N t^alpha) dmu(lambda).
inline SolutionField time_fractional_solution(const InitialDatum& datum, int N, cplx beta, double alpha,
                                              double t, const std::vector<double>& x_grid,
                                              const TimeFractionalOptions& opts = {})
{
    detail::check_order(N, "time_fractional_solution");
    detail::check_alpha(alpha, "time_fractional_solution");
    if (t < 0.0) throw DomainError("time_fractional_solution: t must be nonnegative");
    if (opts.enforce_stability && !walk_is_stable(N, beta))
        throw StabilityError("time_fractional_solution: beta violates the stability condition");
    SolutionField field;
    field.x_grid = x_grid;
    field.t = t;
    field.values = spectral_field(
        datum,
        [&](double lambda) { return time_fractional_multiplier(N, beta, alpha, t, lambda, opts.fractional_power); },
        x_grid);
    field.meta.method = "mittag_leffler";
    return field;
}

//======================================================================
// Nonlocal forcing reformulations for alpha = 1/M.
//
// M1:  u' = A^M u + sum_{k<M} t^{alpha k - 1}/Gamma(alpha k) A^k f
// M12: u' = A u + sum_{k<M} t^{alpha k - 1}/Gamma(alpha k) (A^alpha)^k f

enum class ForcingForm { M1, M12 };

inline int reciprocal_order(double alpha)
{
    const double M = 1.0 / alpha;
    const double r = std::round(M);
    if (r < 2.0 || std::abs(M - r) > 1e-12) throw DomainError("alpha must equal 1/M with M >= 2");
    return static_cast<int>(r);
}

// Laplace-Fourier transforms of the time-fractional solution (lhs) and of
// the nonlocal forcing solution (rhs) at (s, lambda), per unit datum.
inline std::pair<cplx, cplx> laplace_fourier_lhs_rhs(cplx s, double lambda, int N, cplx beta, double alpha,
                                                     ForcingForm which)
{
    if (!(s.real() > 0.0)) throw DomainError("laplace_fourier_lhs_rhs: requires Re s > 0");
    detail::check_order(N, "laplace_fourier_lhs_rhs");
    const int M = reciprocal_order(alpha);
    cplx psi = anbeta_symbol(N, beta, lambda);
    if (which == ForcingForm::M12) psi = complex_pow_alpha(psi, alpha);
    const cplx sa = std::pow(s, alpha);
    const cplx lhs = sa / s / (sa - psi);

    // Psi^M: exact for M1, and (Psi^alpha)^M = Psi for M12.
    const cplx psi_main = (which == ForcingForm::M1) ? ipow(psi, M) : anbeta_symbol(N, beta, lambda);
    const cplx denom = s - psi_main;
    if (std::abs(denom) < 1e-300) throw NumericalError("laplace_fourier_lhs_rhs: s - Psi^M vanishes");
    cplx num = 0.0;
    const cplx ratio = psi / sa;
    cplx term = 1.0;
    for (int k = 0; k < M; ++k) {
        num += term;
        term *= ratio;
    }
    return {lhs, num / denom};
}

// Multiplier G(t, lambda) with u(t, x) = int e^{-i lambda x} G dmu for the
// forced problem, by the variation-of-constants formula
//   G = e^{P t} + sum_k Q_k / Gamma(alpha k) int_0^t e^{P(t-s)} s^{alpha k - 1} ds,
// each integral by Gauss-Jacobi in s = t(1+x)/2.
inline cplx nonlocal_forcing_multiplier(int N, cplx beta, int M, double t, double lambda, ForcingForm which,
                                        int jacobi_nodes = 48)
{
    if (M < 2) throw DomainError("nonlocal_forcing: M must be >= 2");
    if (t < 0.0) throw DomainError("nonlocal_forcing: t must be nonnegative");
    const double alpha = 1.0 / M;
    const cplx psi = anbeta_symbol(N, beta, lambda);
    const cplx P = (which == ForcingForm::M1) ? ipow(psi, M) : psi;
    const cplx q = (which == ForcingForm::M1) ? psi : complex_pow_alpha(psi, alpha);
    cplx G = std::exp(P * t);
    if (t == 0.0) return G;
    cplx Qk = 1.0;
    for (int k = 1; k < M; ++k) {
        Qk *= q;
        const double a = alpha * k;
        const QuadratureRule rule = gauss_jacobi(jacobi_nodes, 0.0, a - 1.0);
        cplx integral = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            integral += rule.weights[i] * std::exp(P * (t * (1.0 - rule.nodes[i]) / 2.0));
        integral *= std::pow(t / 2.0, a);
        if (!std::isfinite(integral.real()) || !std::isfinite(integral.imag()))
            throw QuadratureError("nonlocal_forcing: forcing integral is not finite");
        G += Qk / gamma_fn(a) * integral;
    }
    return G;
}

inline std::vector<SolutionField> nonlocal_forcing_evolve(const InitialDatum& datum, int N, cplx beta, int M,
                                                          const std::vector<double>& t_grid,
                                                          const std::vector<double>& x_grid, ForcingForm which)
{
    detail::check_order(N, "nonlocal_forcing_evolve");
    std::vector<SolutionField> out;
    for (double t : t_grid) {
        SolutionField field;
        field.x_grid = x_grid;
        field.t = t;
        field.values = spectral_field(
            datum, [&](double lambda) { return nonlocal_forcing_multiplier(N, beta, M, t, lambda, which); },
            x_grid);
        field.meta.method = (which == ForcingForm::M1) ? "nonlocal_forcing:M1" : "nonlocal_forcing:M12";
        out.push_back(std::move(field));
    }
    return out;
}

} // namespace fracwalk
