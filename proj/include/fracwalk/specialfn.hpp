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

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fracwalk/errors.hpp"

namespace fracwalk {

using cplx = std::complex<double>;
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline constexpr double pi = std::numbers::pi;

//======================================================================
// Complex fractional powers.
//
// z^alpha := |z|^alpha e^{i alpha theta} with theta the principal argument
// in (-pi, pi]. std::arg returns -pi for a negative real with a negative
// zero imaginary part; that case is folded back onto +pi so that the
// branch is the half-open interval.

inline double principal_arg(cplx z)
{
    double theta = std::arg(z);
    if (theta <= -pi) theta = pi;
    return theta;
}

struct ComplexBranchPower {
    cplx z;
    double alpha;

    double theta() const { return principal_arg(z); }

    cplx value() const
    {
        if (z == cplx(0.0, 0.0)) {
            if (alpha > 0.0) return {0.0, 0.0};
            throw DomainError("complex_pow_alpha: 0^alpha undefined for alpha <= 0");
        }
        return std::polar(std::pow(std::abs(z), alpha), alpha * theta());
    }
};

inline cplx complex_pow_alpha(cplx z, double alpha)
{
    return ComplexBranchPower{z, alpha}.value();
}

//======================================================================
// Gamma.

inline double log_gamma(double x)
{
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
    return std::lgamma(x);
}

inline double gamma_fn(double x)
{
    if (!(x > 0.0)) throw DomainError("gamma_fn: argument must be positive");
    return std::tgamma(x);
}

//======================================================================
// Mittag-Leffler function E_alpha(z) = sum_k z^k / Gamma(alpha k + 1).

struct MLParams {
    double alpha = 0.5;
    cplx z = 0.0;
    double tol = 1e-14;
    int max_terms = 5000;
};

// Partial summation of the defining series. Stops once the next term is
// below tol in modulus and the terms have started to decrease, so the
// returned partial sum differs from the following one by less than tol.
inline cplx mittag_leffler_series(const MLParams& p)
{
    if (!(p.alpha > 0.0)) throw DomainError("mittag_leffler: alpha must be positive");
    if (!(p.tol > 0.0)) throw DomainError("mittag_leffler: tol must be positive");
    if (p.z == cplx(0.0, 0.0)) return 1.0;

    const double log_r = std::log(std::abs(p.z));
    const double theta = principal_arg(p.z);
    auto term = [&](int k) -> cplx {
        if (k == 0) return 1.0;
        const double log_mag = k * log_r - std::lgamma(p.alpha * k + 1.0);
        return std::polar(std::exp(log_mag), k * theta);
    };

    // |term_k| is log-concave in k, so once it decreases it keeps decreasing.
    cplx sum = 0.0;
    for (int k = 0; k < p.max_terms; ++k) {
        const cplx tk = term(k);
        sum += tk;
        const double next_mag = std::abs(term(k + 1));
        if (next_mag < p.tol && next_mag <= std::abs(tk)) return sum;
    }
    throw NonConvergenceError("mittag_leffler: series did not reach tol within max_terms="
                              + std::to_string(p.max_terms));
}

namespace detail {

// Integrand of the Hankel representation e^s s^{alpha-1} / (s^alpha - z).
inline cplx ml_hankel_integrand(double alpha, cplx z, cplx s)
{
    const cplx sa = std::pow(s, alpha);
    return std::exp(s) * sa / s / (sa - z);
}

// Poles s* of the Hankel integrand on the principal sheet (|arg s*| <= pi).
inline std::vector<cplx> ml_poles(double alpha, cplx z)
{
    std::vector<cplx> poles;
    const double r = std::pow(std::abs(z), 1.0 / alpha);
    const double theta = principal_arg(z);
    for (int k = -2; k <= 2; ++k) {
        const double phi = (theta + 2.0 * pi * k) / alpha;
        if (std::abs(phi) < pi) poles.push_back(std::polar(r, phi));
    }
    return poles;
}

// E_alpha(z) by the trapezoidal rule on the parabola s(u) = mu (1 + iu)^2.
// Points right of the parabola correspond to Re sqrt(s/mu) > 1; poles there
// were crossed when the Bromwich line was deformed and contribute e^{s*}/alpha.
inline cplx mittag_leffler_contour(double alpha, cplx z)
{
    const auto poles = ml_poles(alpha, z);

    auto pole_clearance = [&](double mu) {
        double d = std::numeric_limits<double>::infinity();
        for (const cplx& p : poles) d = std::min(d, std::abs(std::sqrt(p / mu).real() - 1.0));
        return d;
    };

    double mu = 6.0;
    double best = pole_clearance(mu);
    for (double cand : {4.0, 9.0, 3.0, 12.0, 2.0, 16.0, 1.5, 24.0}) {
        if (best >= 0.3) break;
        const double c = pole_clearance(cand);
        if (c > best) {
            best = c;
            mu = cand;
        }
    }

    constexpr double h = 0.04;
    const double u_max = std::sqrt(1.0 + 40.0 / mu);
    const int K = static_cast<int>(std::ceil(u_max / h));

    cplx sum = 0.0;
    for (int k = -K; k <= K; ++k) {
        const double u = k * h;
        const cplx w(1.0, u);
        const cplx s = mu * w * w;
        sum += ml_hankel_integrand(alpha, z, s) * w;
    }
    cplx result = sum * (h * mu / pi);

    for (const cplx& p : poles) {
        if (std::sqrt(p / mu).real() > 1.0) result += std::exp(p) / alpha;
    }
    return result;
}

} // namespace detail

// Radius below which the series is used. Inside it every term is bounded
// by e^{|z|^(1/alpha)} / small, so cancellation is harmless for alpha >= 0.5.
inline constexpr double ml_series_radius = 1.5;

inline cplx mittag_leffler(double alpha, cplx z, double tol = 1e-14)
{
    if (!(alpha > 0.0 && alpha <= 2.0))
        throw DomainError("mittag_leffler: alpha must lie in (0, 2]");
    if (!(tol > 0.0)) throw DomainError("mittag_leffler: tol must be positive");
    if (std::abs(z) <= ml_series_radius) return mittag_leffler_series({alpha, z, tol, 5000});
    return detail::mittag_leffler_contour(alpha, z);
}

//======================================================================
// Exact combinatorics.

inline constexpr unsigned combinatorics_cap = 400;

// Stirling numbers of the second kind by the recurrence
// S(k, l) = l S(k-1, l) + S(k-1, l-1).
inline std::vector<BigInt> stirling2_row(unsigned k)
{
    if (k > combinatorics_cap) throw OverflowError("stirling2: k exceeds combinatorics cap");
    std::vector<BigInt> row{1};
    for (unsigned r = 1; r <= k; ++r) {
        std::vector<BigInt> next(r + 1);
        next[0] = 0;
        for (unsigned l = 1; l <= r; ++l) {
            BigInt v = (l < row.size()) ? BigInt(row[l] * l) : BigInt(0);
            v += row[l - 1];
            next[l] = std::move(v);
        }
        row = std::move(next);
    }
    return row;
}

inline BigInt stirling2(unsigned k, unsigned l)
{
    if (l > k) throw DomainError("stirling2: requires l <= k");
    return stirling2_row(k)[l];
}

inline BigInt bell(unsigned k)
{
    BigInt sum = 0;
    for (const BigInt& s : stirling2_row(k)) sum += s;
    return sum;
}

// Upper bound (0.792 k / log(k+1))^k on the k-th Bell number, k >= 1.
inline double bell_upper_bound(unsigned k)
{
    if (k == 0) throw DomainError("bell_upper_bound: k must be >= 1");
    const double kd = k;
    return std::pow(0.792 * kd / std::log(kd + 1.0), kd);
}

inline double poisson_moment(double lambda, unsigned k)
{
    if (!(lambda > 0.0)) throw DomainError("poisson_moment: lambda must be positive");
    const auto row = stirling2_row(k);
    double sum = 0.0;
    for (unsigned l = 0; l < row.size(); ++l)
        sum += row[l].convert_to<double>() * std::pow(lambda, static_cast<double>(l));
    return sum;
}

inline BigInt factorial(unsigned k)
{
    if (k > 4 * combinatorics_cap) throw OverflowError("factorial: argument exceeds cap");
    BigInt r = 1;
    for (unsigned j = 2; j <= k; ++j) r *= j;
    return r;
}

inline double factorial_d(unsigned k)
{
    double r = 1.0;
    for (unsigned j = 2; j <= k; ++j) r *= j;
    return r;
}

// Exact (-1)^p for integer p.
inline constexpr int sign_pow(int p) { return (p % 2 == 0) ? 1 : -1; }

// i^p for integer p, exactly.
inline cplx i_pow(int p)
{
    switch (((p % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

} // namespace fracwalk
