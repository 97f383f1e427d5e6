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

// Time changes: the truncated power-law jump Y_[m], the compound Poisson
// approximant S_m of the alpha-stable subordinator, exact stable draws
// H(t) and the inverse subordinator L(t).

#include <cmath>
#include <complex>
#include <cstdint>

#include "fracwalk/errors.hpp"
#include "fracwalk/quadrature.hpp"
#include "fracwalk/random.hpp"
#include "fracwalk/specialfn.hpp"

namespace fracwalk {

// Whether S_m sums Y_0..Y_X (X+1 jumps) or Y_1..Y_X (X jumps).
enum class SumConvention { AsPrinted, FromOne };

struct SubordinatorSpec {
    double alpha = 0.5;
    std::uint64_t m = 10;
    double lambda_rate = 0.0; // 1 / Gamma(1 - alpha)
    double c_m = 0.0;         // density normalizer of Y_[m]
    SumConvention convention = SumConvention::AsPrinted;

    static SubordinatorSpec make(double alpha, std::uint64_t m,
                                 SumConvention conv = SumConvention::AsPrinted)
    {
        if (!(alpha > 0.0 && alpha < 1.0))
            throw DomainError("SubordinatorSpec: alpha must lie in (0, 1)");
        if (m < 2) throw DomainError("SubordinatorSpec: m must be >= 2");
        SubordinatorSpec s;
        s.alpha = alpha;
        s.m = m;
        s.convention = conv;
        s.lambda_rate = 1.0 / gamma_fn(1.0 - alpha);
        const double lm = std::log(static_cast<double>(m));
        s.c_m = alpha / (std::exp(alpha * lm) * -std::expm1(-3.0 * alpha * lm));
        return s;
    }

    double lower() const { return 1.0 / static_cast<double>(m); }
    double upper() const { return static_cast<double>(m) * static_cast<double>(m); }

    // Poisson intensity per unit time, m^{2 alpha} / Gamma(1 - alpha).
    double jump_rate() const
    {
        return std::pow(static_cast<double>(m), 2.0 * alpha) * lambda_rate;
    }

    double density(double y) const
    {
        if (y <= lower() || y >= upper()) return 0.0;
        return c_m * std::pow(y, -alpha - 1.0);
    }
};

enum class TimeChangeKind { CompoundPoisson, StableExact, InverseStable };

struct TimeChangeSample {
    double value = 0.0;
    TimeChangeKind kind = TimeChangeKind::CompoundPoisson;
    double t = 0.0;
};

//======================================================================
// Y_[m].

inline double sample_Y(const SubordinatorSpec& spec, RandomStream& rng)
{
    const double a = std::pow(spec.lower(), -spec.alpha);
    const double b = std::pow(static_cast<double>(spec.m), -2.0 * spec.alpha);
    const double u = rng.uniform();
    return std::pow(a - u * (a - b), -1.0 / spec.alpha);
}

inline double Y_moment(const SubordinatorSpec& spec, unsigned k)
{
    if (k < 1) throw DomainError("Y_moment: k must be >= 1");
    const double a = spec.alpha;
    const double lm = std::log(static_cast<double>(spec.m));
    return a / (k - a) * std::exp((2.0 * k - 3.0 * a) * lm) * std::expm1(-3.0 * (k - a) * lm)
           / std::expm1(-3.0 * a * lm);
}

//======================================================================
// S_m.

inline TimeChangeSample sample_Sm(const SubordinatorSpec& spec, double t, RandomStream& rng)
{
    if (t < 0.0) throw DomainError("sample_Sm: t must be nonnegative");
    const std::uint64_t X = rng.poisson(t * spec.jump_rate());
    const std::uint64_t first = (spec.convention == SumConvention::AsPrinted) ? 0 : 1;
    double sum = 0.0;
    for (std::uint64_t j = first; j <= X; ++j) sum += sample_Y(spec, rng);
    return {sum / static_cast<double>(spec.m), TimeChangeKind::CompoundPoisson, t};
}

namespace detail {

inline cplx expm1_complex(cplx w)
{
    const double s = std::sin(0.5 * w.imag());
    return {std::expm1(w.real()) * std::cos(w.imag()) - 2.0 * s * s,
            std::exp(w.real()) * std::sin(w.imag())};
}

// E[e^{wY}] - 1 = c_m int_{1/m}^{m^2} (e^{wy} - 1) y^{-alpha-1} dy, in the
// variable u = log y and split at y = 1.
inline cplx Y_transform_minus_one(const SubordinatorSpec& spec, cplx w, double tol)
{
    auto integrand = [&](double u) {
        const double y = std::exp(u);
        return expm1_complex(w * y) * std::exp(-spec.alpha * u);
    };
    const double lo = std::log(spec.lower());
    const double hi = std::log(spec.upper());
    auto norm = [](cplx v) { return std::abs(v); };
    const cplx left = composite_gauss_legendre<cplx>(integrand, lo, 0.0, tol, norm);
    const cplx right = composite_gauss_legendre<cplx>(integrand, 0.0, hi, tol, norm);
    return spec.c_m * (left + right);
}

} // namespace detail

// E[e^{z Y/m}].
inline cplx Y_transform(const SubordinatorSpec& spec, cplx z, double tol = 1e-13)
{
    return 1.0 + detail::Y_transform_minus_one(spec, z / static_cast<double>(spec.m), tol);
}

// E[e^{z S_m(t)}] = exp(-t m^{2 alpha}/Gamma(1-alpha) (1 - E[e^{zY/m}])),
// times one further E[e^{zY/m}] under the printed convention.
inline cplx Sm_transform(const SubordinatorSpec& spec, double t, cplx z, double tol = 1e-13)
{
    if (z.real() > 0.0) throw DomainError("Sm_transform: requires Re z <= 0");
    if (t < 0.0) throw DomainError("Sm_transform: t must be nonnegative");
    const cplx phi_m1 = detail::Y_transform_minus_one(spec, z / static_cast<double>(spec.m), tol);
    cplx result = std::exp(t * spec.jump_rate() * phi_m1);
    if (spec.convention == SumConvention::AsPrinted) result *= 1.0 + phi_m1;
    return result;
}

inline double Sm_moment_bound(const SubordinatorSpec& spec, double t, unsigned k)
{
    if (k < 1) throw DomainError("Sm_moment_bound: k must be >= 1");
    if (!(t > 0.0)) throw DomainError("Sm_moment_bound: t must be positive");
    const double a = spec.alpha;
    const double m_min = std::pow(gamma_fn(1.0 - a) / t, 1.0 / (2.0 * a));
    if (static_cast<double>(spec.m) < m_min)
        throw DomainError("Sm_moment_bound: m below (Gamma(1-alpha)/t)^(1/(2 alpha))");
    const double C = std::max(1.0, a / (1.0 - a)) * 0.792 / gamma_fn(1.0 - a);
    const double kd = k;
    const double md = static_cast<double>(spec.m);
    return std::pow(C * t, kd) * std::pow(md, kd + 2.0 * a * kd - 3.0 * a)
           * std::pow((kd + 1.0) / std::log(kd + 2.0), kd + 1.0);
}

//======================================================================
// Exact stable subordinator and its inverse.

inline void check_stable_args(double alpha, double t, const char* who)
{
    if (!(alpha > 0.0 && alpha < 1.0))
        throw DomainError(std::string(who) + ": alpha must lie in (0, 1)");
    if (!(t > 0.0)) throw DomainError(std::string(who) + ": t must be positive");
}

// H(1) with E[e^{-lambda H}] = e^{-lambda^alpha}, by Kanter's representation
//   H = sin(alpha U) / sin(U)^{1/alpha} * (sin((1-alpha) U) / E)^{(1-alpha)/alpha}
// with U uniform on (0, pi) and E standard exponential.
inline double sample_H_unit(double alpha, RandomStream& rng)
{
    const double U = pi * rng.uniform();
    const double E = rng.exponential();
    const double a = std::sin(alpha * U) / std::pow(std::sin(U), 1.0 / alpha);
    const double b = std::pow(std::sin((1.0 - alpha) * U) / E, (1.0 - alpha) / alpha);
    return a * b;
}

inline TimeChangeSample sample_H(double alpha, double t, RandomStream& rng)
{
    check_stable_args(alpha, t, "sample_H");
    return {std::pow(t, 1.0 / alpha) * sample_H_unit(alpha, rng), TimeChangeKind::StableExact, t};
}

// L(t) = inf{s : H(s) > t} has the law of (t / H(1))^alpha.
inline TimeChangeSample sample_L(double alpha, double t, RandomStream& rng)
{
    check_stable_args(alpha, t, "sample_L");
    return {std::pow(t / sample_H_unit(alpha, rng), alpha), TimeChangeKind::InverseStable, t};
}

inline double L_moment(double alpha, double t, unsigned k)
{
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("L_moment: alpha must lie in (0, 1)");
    if (t < 0.0) throw DomainError("L_moment: t must be nonnegative");
    if (k == 0) return 1.0;
    return std::exp(std::lgamma(k + 1.0) + alpha * k * std::log(t) - std::lgamma(alpha * k + 1.0));
}

} // namespace fracwalk
