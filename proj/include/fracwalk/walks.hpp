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

// Complex random walks W_n(t) = n^{-1/N} sum_{j <= floor(nt)} xi_j, where the
// steps xi_j are uniform on the N-th roots of beta. Exact characteristic
// functions and moments, the n -> infinity limits, remainder bounds and
// lattice return probabilities.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fracwalk/errors.hpp"
#include "fracwalk/random.hpp"
#include "fracwalk/specialfn.hpp"

namespace fracwalk {

// z^k for integer k >= 0 by repeated squaring.
inline cplx ipow(cplx z, unsigned k)
{
    cplx result = 1.0;
    while (k) {
        if (k & 1u) result *= z;
        z *= z;
        k >>= 1u;
    }
    return result;
}

// e^{2 pi i k / N}, exact at multiples of a quarter turn.
inline cplx unit_root(int k, int N)
{
    k = ((k % N) + N) % N;
    if ((4 * k) % N == 0) return i_pow(4 * k / N);
    return std::polar(1.0, 2.0 * pi * k / N);
}

// Re((-i)^N beta y^N) <= 0 for every real y.
inline bool walk_is_stable(int N, cplx beta)
{
    const double tol = 1e-12 * std::max(1.0, std::abs(beta));
    const cplx c = i_pow(-N) * beta; // (-i)^N = i^{-N}
    if (N % 2 == 0) return c.real() <= tol;
    return std::abs(c.real()) <= tol;
}

struct WalkSpec {
    int N = 2;
    cplx beta = 1.0;
    cplx beta_root = 1.0; // principal N-th root, argument in (-pi/N, pi/N]
    bool stable = true;

    static WalkSpec make(int N, cplx beta)
    {
        if (N < 2) throw DomainError("WalkSpec: N must be >= 2");
        WalkSpec s;
        s.N = N;
        s.beta = beta;
        s.beta_root = (beta == cplx(0.0, 0.0))
                          ? cplx(0.0, 0.0)
                          : std::polar(std::pow(std::abs(beta), 1.0 / N), principal_arg(beta) / N);
        s.stable = walk_is_stable(N, beta);
        return s;
    }

    cplx step(int k) const { return beta_root * unit_root(k, N); }

    void require_stable(const char* who) const
    {
        if (!stable)
            throw StabilityError(std::string(who)
                                 + ": parameters violate Re((-i)^N beta y^N) <= 0");
    }
};

// Number of steps floor(n t). A relative slack of a few ulps keeps products
// such as 100 * 0.29 on the intended integer.
inline std::uint64_t walk_steps(std::uint64_t n, double t)
{
    if (t < 0.0) throw DomainError("walk: t must be nonnegative");
    const double steps = std::floor(static_cast<double>(n) * t * (1.0 + 1e-12));
    if (!(steps < 9.0e18)) throw OverflowError("walk: n t exceeds the step counter");
    return static_cast<std::uint64_t>(steps);
}

inline double walk_scale(const WalkSpec& spec, std::uint64_t n)
{
    return std::pow(static_cast<double>(n), -1.0 / spec.N);
}

//======================================================================
// Sampling.

inline int sample_xi_index(const WalkSpec& spec, RandomStream& rng)
{
    return static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.N)));
}

inline cplx sample_xi(const WalkSpec& spec, RandomStream& rng)
{
    return spec.step(sample_xi_index(spec, rng));
}

// Position together with its lattice coordinates: position equals
// n^{-1/N} sum_k counts[k] beta_root e^{2 pi i k / N}.
struct WalkState {
    std::uint64_t n = 1;
    double t = 0.0;
    std::uint64_t steps = 0;
    cplx position = 0.0;
    std::vector<std::uint64_t> counts;
    std::uint64_t stream_id = 0;
};

inline WalkState walk_sample_state(const WalkSpec& spec, std::uint64_t n, double t,
                                   RandomStream& rng)
{
    if (n < 1) throw DomainError("walk_sample: n must be >= 1");
    WalkState st;
    st.n = n;
    st.t = t;
    st.steps = walk_steps(n, t);
    st.counts.assign(spec.N, 0);
    st.stream_id = rng.stream_id();
    for (std::uint64_t j = 0; j < st.steps; ++j) ++st.counts[sample_xi_index(spec, rng)];
    cplx sum = 0.0;
    for (int k = 0; k < spec.N; ++k) sum += static_cast<double>(st.counts[k]) * spec.step(k);
    st.position = sum * walk_scale(spec, n);
    return st;
}

// Position after an explicit number of steps, for time-changed walks.
inline cplx walk_sample_steps(const WalkSpec& spec, std::uint64_t n, std::uint64_t steps,
                              RandomStream& rng)
{
    std::vector<std::uint64_t> counts(spec.N, 0);
    for (std::uint64_t j = 0; j < steps; ++j) ++counts[sample_xi_index(spec, rng)];
    cplx sum = 0.0;
    for (int k = 0; k < spec.N; ++k) sum += static_cast<double>(counts[k]) * spec.step(k);
    return sum * walk_scale(spec, n);
}

inline cplx walk_sample(const WalkSpec& spec, std::uint64_t n, double t, RandomStream& rng)
{
    if (n < 1) throw DomainError("walk_sample: n must be >= 1");
    return walk_sample_steps(spec, n, walk_steps(n, t), rng);
}

//======================================================================
// Step distribution.

inline cplx xi_moment(const WalkSpec& spec, unsigned k)
{
    if (k % spec.N != 0) return 0.0;
    return ipow(spec.beta_root, k);
}

inline cplx xi_char_fn(const WalkSpec& spec, cplx lambda)
{
    cplx sum = 0.0;
    for (int k = 0; k < spec.N; ++k) sum += std::exp(cplx(0.0, 1.0) * spec.step(k) * lambda);
    return sum / static_cast<double>(spec.N);
}

namespace detail {

// log(1 + w) without cancellation for small |w|.
inline cplx log1p_complex(cplx w)
{
    const double re = 0.5 * std::log1p(2.0 * w.real() + std::norm(w));
    return {re, std::arg(1.0 + w)};
}

} // namespace detail

// psi(lambda) - 1 = sum_{j >= 1} (i beta_root lambda)^{jN} / (jN)!, accurate
// for small arguments where the direct root-of-unity sum cancels.
inline cplx xi_char_fn_minus_one(const WalkSpec& spec, cplx lambda)
{
    const cplx a = cplx(0.0, 1.0) * spec.beta_root * lambda;
    if (std::abs(a) > 1.0) return xi_char_fn(spec, lambda) - 1.0;
    const cplx aN = ipow(a, spec.N);
    cplx term = 1.0;
    cplx sum = 0.0;
    for (int j = 1; j < 200; ++j) {
        term *= aN;
        for (int q = (j - 1) * spec.N + 1; q <= j * spec.N; ++q) term /= static_cast<double>(q);
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

inline cplx log_xi_char_fn(const WalkSpec& spec, cplx lambda)
{
    return detail::log1p_complex(xi_char_fn_minus_one(spec, lambda));
}

//======================================================================
// Characteristic functions.

inline cplx walk_char_fn_from_steps(const WalkSpec& spec, std::uint64_t n, std::uint64_t steps,
                                    cplx y)
{
    if (steps == 0) return 1.0;
    const cplx arg = y * walk_scale(spec, n);
    const cplx psi_m1 = xi_char_fn_minus_one(spec, arg);
    if (psi_m1 == cplx(-1.0, 0.0)) return 0.0;
    return std::exp(static_cast<double>(steps) * detail::log1p_complex(psi_m1));
}

// E[exp(i y W_n(t))] = psi_xi(y n^{-1/N})^{floor(nt)}.
inline cplx walk_char_fn_exact(const WalkSpec& spec, std::uint64_t n, double t, cplx y)
{
    return walk_char_fn_from_steps(spec, n, walk_steps(n, t), y);
}

// exp(i^N beta t lambda^N / N!).
inline cplx limit_char_fn(const WalkSpec& spec, double t, double lambda)
{
    return std::exp(i_pow(spec.N) * spec.beta * t * std::pow(lambda, spec.N)
                    / factorial_d(spec.N));
}

//======================================================================
// Moments.

inline constexpr unsigned walk_moment_cap = 240;

namespace detail {

// Visits every multiplicity vector m[1..h] with sum_l l m[l] = h.
inline void for_each_partition(unsigned h, const std::function<void(const std::vector<unsigned>&)>& visit)
{
    std::vector<unsigned> mult(h + 1, 0);
    std::function<void(unsigned, unsigned)> rec = [&](unsigned remaining, unsigned max_part) {
        if (remaining == 0) {
            visit(mult);
            return;
        }
        for (unsigned part = std::min(remaining, max_part); part >= 1; --part) {
            ++mult[part];
            rec(remaining - part, part);
            --mult[part];
        }
    };
    rec(h, h);
}

inline BigInt falling_factorial(std::uint64_t x, unsigned j)
{
    BigInt r = 1;
    for (unsigned q = 0; q < j; ++q) r *= (x - q);
    return r;
}

} // namespace detail

// Exact rational c with E[W_n(t)^{hN}] = beta^h c, from the Faa di Bruno
// expansion over multiplicity vectors (m_N, m_2N, ..., m_hN):
//   c = sum (hN)! / prod_l (m_lN! ((lN)!)^{m_lN}) * steps!/(steps - sum m)! / n^h
// restricted to sum m <= steps.
inline BigRational walk_moment_coefficient(int N, std::uint64_t n, std::uint64_t steps, unsigned h)
{
    if (static_cast<unsigned long>(h) * N > walk_moment_cap)
        throw OverflowError("walk_moment_exact: k exceeds the moment cap");
    if (h == 0) return 1;
    const BigInt top = factorial(h * N);
    std::vector<BigInt> block_fact(h + 1);
    for (unsigned l = 1; l <= h; ++l) block_fact[l] = factorial(l * N);

    BigInt numerator = 0; // common denominator n^h
    detail::for_each_partition(h, [&](const std::vector<unsigned>& mult) {
        unsigned blocks = 0;
        BigInt denom = 1;
        for (unsigned l = 1; l <= h; ++l) {
            if (mult[l] == 0) continue;
            blocks += mult[l];
            denom *= factorial(mult[l]);
            for (unsigned r = 0; r < mult[l]; ++r) denom *= block_fact[l];
        }
        if (blocks > steps) return;
        numerator += (top / denom) * detail::falling_factorial(steps, blocks);
    });
    BigInt nh = 1;
    for (unsigned q = 0; q < h; ++q) nh *= n;
    return BigRational(numerator, nh);
}

inline cplx walk_moment_exact(const WalkSpec& spec, std::uint64_t n, double t, unsigned k)
{
    if (k % spec.N != 0) return 0.0;
    const unsigned h = k / spec.N;
    const BigRational c = walk_moment_coefficient(spec.N, n, walk_steps(n, t), h);
    return ipow(spec.beta, h) * c.convert_to<double>();
}

// (hN)! / (h! (N!)^h), exactly.
inline BigRational limit_moment_coefficient(int N, unsigned h)
{
    BigInt denom = factorial(h);
    const BigInt nf = factorial(N);
    for (unsigned q = 0; q < h; ++q) denom *= nf;
    return BigRational(factorial(h * N), denom);
}

// (beta t / N!)^{k/N} k! / (k/N)! for N | k, else 0.
inline cplx limit_moment(const WalkSpec& spec, double t, unsigned k)
{
    if (k % spec.N != 0) return 0.0;
    const unsigned h = k / spec.N;
    return ipow(spec.beta * t, h) * limit_moment_coefficient(spec.N, h).convert_to<double>();
}

inline double remainder_bound(const WalkSpec& spec, std::uint64_t n, double t, unsigned h)
{
    if (h < 2) throw DomainError("remainder_bound: requires h >= 2");
    const double bh = std::pow(std::abs(spec.beta), h);
    const double th = std::pow(t, static_cast<double>(h) - 1.0);
    const double hd = h;
    const double hN = hd * spec.N;
    const double lead = bh * th * (hd * hd + hd) / (2.0 * n)
                        * limit_moment_coefficient(spec.N, h).convert_to<double>();
    const double bell_part = bh * th / n * std::pow(0.792 * hN / std::log(hN + 1.0), hN);
    return lead + bell_part;
}

// sum_h a_{hN} (hN)!/h! (beta t / N!)^h over the supplied Taylor
// coefficients a_0, a_1, ... The last retained term must be below
// tol * max(1, |sum|), otherwise the series is declared non-convergent.
inline cplx limit_expectation_series(const WalkSpec& spec, double t, std::span<const cplx> coeffs,
                                     double tol = 1e-14, bool polynomial = false)
{
    const cplx x = spec.beta * t / factorial_d(spec.N);
    cplx sum = 0.0;
    cplx last = 0.0;
    for (std::size_t h = 0; h * spec.N < coeffs.size(); ++h) {
        const unsigned k = static_cast<unsigned>(h * spec.N);
        const double log_ratio = std::lgamma(k + 1.0) - std::lgamma(h + 1.0);
        last = coeffs[k] * std::exp(log_ratio) * ipow(x, static_cast<unsigned>(h));
        sum += last;
    }
    // A polynomial is summed exactly; a truncated series must have died out.
    if (!polynomial && !(std::abs(last) < tol * std::max(1.0, std::abs(sum))))
        throw NonConvergenceError("limit_expectation_series: terms did not decay within the cap");
    return sum;
}

//======================================================================
// Lattice returns.

// (Nm)! / ((m!)^N N^{Nm}): probability that S(N,1)_{Nm} took the same
// number of steps in every direction. For prime N this is exactly the
// probability of being back at the origin.
inline BigRational return_probability(int N, unsigned m)
{
    if (N < 3) throw DomainError("return_probability: N must be >= 3");
    if (m < 1) throw DomainError("return_probability: m must be >= 1");
    if (static_cast<unsigned long>(N) * m > 4 * combinatorics_cap)
        throw OverflowError("return_probability: N m exceeds the big-integer cap");
    BigInt denom = 1;
    const BigInt mf = factorial(m);
    for (int q = 0; q < N; ++q) denom *= mf;
    BigInt power = 1;
    for (unsigned long q = 0; q < static_cast<unsigned long>(N) * m; ++q) power *= N;
    return BigRational(factorial(N * m), denom * power);
}

} // namespace fracwalk
