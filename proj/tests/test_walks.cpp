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

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <gtest/gtest.h>

#include "fracwalk/walks.hpp"

using namespace fracwalk;

namespace {

// E[W^k] by summing over every multinomial count vector of the steps.
cplx moment_by_enumeration(const WalkSpec& w, std::uint64_t n, unsigned steps, unsigned k)
{
    const int N = w.N;
    std::vector<unsigned> c(N, 0);
    cplx total = 0.0;
    const double scale = std::pow(static_cast<double>(n), -1.0 / N);
    std::function<void(int, unsigned)> rec = [&](int j, unsigned left) {
        if (j == N - 1) {
            c[j] = left;
            double log_prob = std::lgamma(steps + 1.0) - steps * std::log(static_cast<double>(N));
            cplx pos = 0.0;
            for (int q = 0; q < N; ++q) {
                log_prob -= std::lgamma(c[q] + 1.0);
                pos += static_cast<double>(c[q]) * w.step(q);
            }
            total += std::exp(log_prob) * std::pow(pos * scale, static_cast<int>(k));
            return;
        }
        for (unsigned v = 0; v <= left; ++v) {
            c[j] = v;
            rec(j + 1, left - v);
        }
    };
    rec(0, steps);
    return total;
}

// Counts of length-L paths on the N roots of unity, split into those with
// equal step counts in every direction and those ending at the origin.
struct ReturnCounts {
    BigInt balanced = 0;
    BigInt returned = 0;
    BigInt total = 0;
};

ReturnCounts enumerate_returns(int N, unsigned L)
{
    ReturnCounts rc;
    std::vector<int> path(L, 0);
    std::function<void(unsigned)> rec = [&](unsigned pos) {
        if (pos == L) {
            std::vector<unsigned> c(N, 0);
            cplx z = 0.0;
            for (int s : path) {
                ++c[s];
                z += std::polar(1.0, 2 * pi * s / N);
            }
            bool bal = true;
            for (int q = 1; q < N; ++q) bal = bal && c[q] == c[0];
            rc.balanced += bal;
            rc.returned += (std::abs(z) < 1e-9);
            rc.total += 1;
            return;
        }
        for (int s = 0; s < N; ++s) {
            path[pos] = s;
            rec(pos + 1);
        }
    };
    rec(0);
    return rc;
}

} // namespace

TEST(WalkSpec, RootAndStability)
{
    for (int N = 2; N <= 6; ++N) {
        for (cplx b : {cplx(1, 0), cplx(-2, 0), cplx(0, 3), cplx(-1, -1e-300)}) {
            const WalkSpec w = WalkSpec::make(N, b);
            EXPECT_LE(std::abs(std::pow(w.beta_root, N) - b), 1e-12 * std::abs(b));
            const double arg = std::arg(w.beta_root);
            EXPECT_GT(arg, -pi / N - 1e-15);
            EXPECT_LE(arg, pi / N + 1e-15);
        }
    }
    EXPECT_TRUE(WalkSpec::make(2, 1.0).stable);
    EXPECT_FALSE(WalkSpec::make(2, -1.0).stable);
    EXPECT_TRUE(WalkSpec::make(4, -6.0).stable);
    EXPECT_FALSE(WalkSpec::make(4, 6.0).stable);
    EXPECT_TRUE(WalkSpec::make(3, 6.0).stable);
    EXPECT_TRUE(WalkSpec::make(3, -6.0).stable);
    EXPECT_FALSE(WalkSpec::make(3, cplx(0, 1)).stable);
    EXPECT_THROW(WalkSpec::make(1, 1.0), DomainError);
    EXPECT_THROW(WalkSpec::make(2, -1.0).require_stable("test"), StabilityError);
}

TEST(WalkSpec, StabilityMatchesGridSearch)
{
    RandomStream rng(4, 0);
    for (int N = 2; N <= 5; ++N) {
        for (int trial = 0; trial < 200; ++trial) {
            cplx b(std::round(4 * rng.uniform() - 2), std::round(4 * rng.uniform() - 2));
            if (b == cplx(0, 0)) continue;
            bool ok = true;
            for (double y = -3; y <= 3; y += 0.25)
                ok = ok && (i_pow(-N) * b * std::pow(y, N)).real() <= 1e-12;
            EXPECT_EQ(WalkSpec::make(N, b).stable, ok) << "N=" << N << " beta=" << b;
        }
    }
}

TEST(Xi, Moments)
{
    EXPECT_EQ(xi_moment(WalkSpec::make(3, 1.0), 3), cplx(1.0, 0.0));
    EXPECT_EQ(xi_moment(WalkSpec::make(3, 1.0), 2), cplx(0.0, 0.0));
    // Average of xi^4 over {i, -i}.
    const WalkSpec w = WalkSpec::make(2, -1.0);
    const cplx direct = 0.5 * (std::pow(w.step(0), 4) + std::pow(w.step(1), 4));
    EXPECT_NEAR(std::abs(xi_moment(w, 4) - direct), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(xi_moment(w, 4) - 1.0), 0.0, 1e-15);
}

TEST(Xi, SampleMoments)
{
    for (auto [N, b] : std::vector<std::pair<int, cplx>>{{2, 1.0}, {3, cplx(0, 2)}, {4, -6.0}}) {
        const WalkSpec w = WalkSpec::make(N, b);
        RandomStream rng(10, N);
        const int n = 1000000;
        cplx s = 0, sN = 0;
        double s2re = 0, s2im = 0;
        for (int i = 0; i < n; ++i) {
            const cplx x = sample_xi(w, rng);
            s += x;
            s2re += x.real() * x.real();
            s2im += x.imag() * x.imag();
            sN += std::pow(x, N);
            EXPECT_NEAR(std::abs(x), std::pow(std::abs(b), 1.0 / N), 1e-12);
        }
        const double se_re = std::sqrt(s2re / n / n), se_im = std::sqrt(s2im / n / n);
        EXPECT_LE(std::abs(s.real() / n), 4 * se_re + 1e-15);
        EXPECT_LE(std::abs(s.imag() / n), 4 * se_im + 1e-15);
        EXPECT_LE(std::abs(sN / static_cast<double>(n) - b), 1e-9 * std::abs(b));
    }
}

TEST(Xi, CharacteristicFunction)
{
    const WalkSpec w = WalkSpec::make(2, 1.0);
    EXPECT_EQ(xi_char_fn(w, 0.0), cplx(1.0, 0.0));
    for (double l : {-2.0, 0.3, 1.7}) EXPECT_NEAR(std::abs(xi_char_fn(w, l) - std::cos(l)), 0.0, 1e-15);
    // N-th derivative at zero equals i^N beta.
    for (auto [N, b] : std::vector<std::pair<int, cplx>>{{2, 1.5}, {3, cplx(0, 2)}}) {
        const WalkSpec v = WalkSpec::make(N, b);
        const double h = 1e-2;
        auto f = [&](double x) { return xi_char_fn(v, x); };
        cplx d;
        if (N == 2) d = (f(h) - 2.0 * f(0) + f(-h)) / (h * h);
        else d = (f(2 * h) - 2.0 * f(h) + 2.0 * f(-h) - f(-2 * h)) / (2 * h * h * h);
        EXPECT_NEAR(std::abs(d - i_pow(N) * b), 0.0, 1e-3);
    }
}

TEST(Xi, SmallArgumentSeriesMatchesDirectSum)
{
    for (int N = 2; N <= 6; ++N) {
        const WalkSpec w = WalkSpec::make(N, cplx(-1.3, 0.4));
        for (double l : {1e-4, 0.01, 0.3, 0.9, 1.5, 4.0}) {
            const cplx direct = xi_char_fn(w, l);
            const cplx via = 1.0 + xi_char_fn_minus_one(w, l);
            EXPECT_NEAR(std::abs(direct - via), 0.0, 1e-14 * std::max(1.0, std::abs(direct)));
            EXPECT_NEAR(std::abs(std::exp(log_xi_char_fn(w, l)) - direct), 0.0, 1e-13 * std::max(1.0, std::abs(direct)));
        }
    }
}

TEST(Xi, SignFlipDuality)
{
    for (int N = 2; N <= 5; ++N) {
        for (cplx b : {cplx(1, 0), cplx(-2, 1), cplx(0, 3)}) {
            for (double l : {-1.2, 0.4, 2.5}) {
                const cplx a = xi_char_fn(WalkSpec::make(N, b), -l);
                const cplx c = xi_char_fn(WalkSpec::make(N, (N % 2 ? -1.0 : 1.0) * b), l);
                EXPECT_NEAR(std::abs(a - c), 0.0, 1e-13 * std::max(1.0, std::abs(a)));
            }
        }
    }
}

TEST(WalkSample, Basics)
{
    RandomStream rng(1, 0);
    const WalkSpec w = WalkSpec::make(3, 2.0);
    EXPECT_EQ(walk_sample(w, 10, 0.0, rng), cplx(0.0, 0.0));
    EXPECT_NEAR(std::abs(walk_sample(w, 1, 1.0, rng)), std::pow(2.0, 1.0 / 3), 1e-14);
    const WalkState st = walk_sample_state(w, 7, 1.0, rng);
    EXPECT_EQ(st.steps, 7u);
    std::uint64_t sum = 0;
    cplx pos = 0.0;
    for (int k = 0; k < 3; ++k) {
        sum += st.counts[k];
        pos += static_cast<double>(st.counts[k]) * w.step(k);
    }
    EXPECT_EQ(sum, st.steps);
    EXPECT_NEAR(std::abs(pos * walk_scale(w, 7) - st.position), 0.0, 1e-14);
    EXPECT_EQ(walk_steps(100, 0.29), 29u);
    EXPECT_THROW(walk_sample(w, 0, 1.0, rng), DomainError);
}

TEST(WalkSample, NthMomentMatches)
{
    for (auto [N, b] : std::vector<std::pair<int, cplx>>{{2, 1.0}, {3, cplx(0, 1)}, {4, -2.0}}) {
        const WalkSpec w = WalkSpec::make(N, b);
        RandomStream rng(21, N);
        const std::uint64_t n = 10;
        const double t = 1.3;
        const int M = 200000;
        double sre = 0, sim = 0, qre = 0, qim = 0;
        for (int i = 0; i < M; ++i) {
            const cplx v = std::pow(walk_sample(w, n, t, rng), N);
            sre += v.real();
            sim += v.imag();
            qre += v.real() * v.real();
            qim += v.imag() * v.imag();
        }
        const cplx mean(sre / M, sim / M);
        const double se_re = std::sqrt((qre / M - mean.real() * mean.real()) / M);
        const double se_im = std::sqrt((qim / M - mean.imag() * mean.imag()) / M);
        const cplx expect = b * 13.0 / 10.0;
        EXPECT_LE(std::abs(mean.real() - expect.real()), 4 * se_re + 1e-12) << N;
        EXPECT_LE(std::abs(mean.imag() - expect.imag()), 4 * se_im + 1e-12) << N;
    }
}

TEST(WalkCharFn, ExactValues)
{
    const WalkSpec w = WalkSpec::make(2, 1.0);
    EXPECT_EQ(walk_char_fn_exact(w, 10, 1.0, 0.0), cplx(1.0, 0.0));
    EXPECT_NEAR(std::abs(walk_char_fn_exact(w, 10000, 1.0, 1.0) - std::exp(-0.5)), 0.0, 1e-3);
    EXPECT_NEAR(std::abs(walk_char_fn_exact(w, 9, 1.0, 2.0) - std::pow(std::cos(2.0 / 3.0), 9)), 0.0, 1e-14);
}

TEST(WalkCharFn, Factorization)
{
    for (auto [N, b] : std::vector<std::pair<int, cplx>>{{2, 1.0}, {3, 6.0}, {4, -6.0}, {5, cplx(0, 1)}}) {
        const WalkSpec w = WalkSpec::make(N, b);
        const std::uint64_t n = 50;
        for (double y : {-2.0, 0.7, 3.0}) {
            const cplx whole = walk_char_fn_exact(w, n, 1.0, y);
            const cplx parts = walk_char_fn_exact(w, n, 0.4, y) * walk_char_fn_exact(w, n, 0.6, y);
            EXPECT_NEAR(std::abs(whole - parts), 0.0, 1e-13 * std::max(1.0, std::abs(whole)));
        }
    }
}

TEST(WalkCharFn, MatchesMonteCarlo)
{
    for (auto [N, b] : std::vector<std::pair<int, cplx>>{{2, 1.0}, {3, 6.0}, {4, -6.0}}) {
        const WalkSpec w = WalkSpec::make(N, b);
        for (std::uint64_t n : {5u, 40u}) {
            for (double y : {-1.0, 0.5}) {
                RandomStream rng(77, n * 10 + N);
                const int M = 100000;
                double sre = 0, sim = 0, qre = 0, qim = 0;
                for (int i = 0; i < M; ++i) {
                    const cplx v = std::exp(cplx(0, y) * walk_sample(w, n, 1.0, rng));
                    sre += v.real();
                    sim += v.imag();
                    qre += v.real() * v.real();
                    qim += v.imag() * v.imag();
                }
                const cplx mean(sre / M, sim / M);
                const cplx exact = walk_char_fn_exact(w, n, 1.0, y);
                EXPECT_LE(std::abs(mean.real() - exact.real()), 4 * std::sqrt((qre / M - mean.real() * mean.real()) / M) + 1e-12);
                EXPECT_LE(std::abs(mean.imag() - exact.imag()), 4 * std::sqrt((qim / M - mean.imag() * mean.imag()) / M) + 1e-12);
            }
        }
    }
}

TEST(LimitCharFn, HeatCase)
{
    const WalkSpec w = WalkSpec::make(2, 1.0);
    EXPECT_EQ(limit_char_fn(w, 1.0, 0.0), cplx(1.0, 0.0));
    for (double t : {0.5, 2.0})
        for (double l : {-1.0, 2.0})
            EXPECT_NEAR(std::abs(limit_char_fn(w, t, l) - std::exp(-t * l * l / 2)), 0.0, 1e-15);
}

TEST(LimitCharFn, OneOverNRate)
{
    const WalkSpec w = WalkSpec::make(3, 6.0);
    std::vector<double> err;
    for (std::uint64_t n : {1000u, 10000u, 100000u}) {
        double e = 0.0;
        for (double l = -3; l <= 3; l += 0.1)
            e = std::max(e, std::abs(walk_char_fn_exact(w, n, 1.0, l) - limit_char_fn(w, 1.0, l)));
        err.push_back(e);
    }
    EXPECT_NEAR(std::log10(err[0] / err[2]) / 2.0, 1.0, 0.1);
}

TEST(WalkMoments, ExactExamples)
{
    EXPECT_NEAR(std::abs(walk_moment_exact(WalkSpec::make(2, 1.0), 4, 1.0, 2) - 1.0), 0.0, 1e-15);
    for (int N = 2; N <= 5; ++N) {
        const WalkSpec w = WalkSpec::make(N, cplx(1.5, -0.5));
        EXPECT_EQ(walk_moment_exact(w, 10, 0.7, 0), cplx(1.0, 0.0));
        EXPECT_NEAR(std::abs(walk_moment_exact(w, 10, 0.7, N) - w.beta * 0.7), 0.0, 1e-14);
        for (unsigned k = 1; k <= 12; ++k)
            if (k % N) {
                EXPECT_EQ(walk_moment_exact(w, 10, 0.7, k), cplx(0.0, 0.0));
            }
    }
}

TEST(WalkMoments, MatchEnumeration)
{
    for (int N = 2; N <= 4; ++N) {
        const WalkSpec w = WalkSpec::make(N, cplx(0.8, 0.6));
        for (unsigned steps : {1u, 3u, 6u}) {
            const std::uint64_t n = 5;
            const double t = steps / 5.0;
            for (unsigned h = 1; h <= 3; ++h) {
                const cplx exact = walk_moment_exact(w, n, t, h * N);
                const cplx brute = moment_by_enumeration(w, n, steps, h * N);
                EXPECT_NEAR(std::abs(exact - brute), 0.0, 1e-10 * std::max(1.0, std::abs(brute)))
                    << "N=" << N << " steps=" << steps << " h=" << h;
            }
        }
    }
}

TEST(WalkMoments, LeadingOrderIsExactForSmallH)
{
    for (int N = 2; N <= 5; ++N) {
        for (std::uint64_t n : {10u, 100u, 1000u}) {
            for (unsigned h = 0; h <= 1; ++h)
                EXPECT_EQ(walk_moment_coefficient(N, n, walk_steps(n, 2.0), h) / BigRational(h ? 2 : 1),
                          limit_moment_coefficient(N, h));
        }
    }
}

TEST(WalkMoments, GapWithinRemainderBound)
{
    for (int N = 2; N <= 4; ++N) {
        const WalkSpec w = WalkSpec::make(N, N == 2 ? cplx(1.0) : (N == 3 ? cplx(6.0) : cplx(-6.0)));
        for (std::uint64_t n : {100u, 1000u, 10000u}) {
            for (unsigned h = 2; h <= 3; ++h) {
                const double gap = std::abs(walk_moment_exact(w, n, 1.0, h * N) - limit_moment(w, 1.0, h * N));
                EXPECT_GT(gap, 0.0);
                EXPECT_LE(gap, remainder_bound(w, n, 1.0, h)) << "N=" << N << " n=" << n << " h=" << h;
            }
        }
    }
    EXPECT_THROW(walk_moment_exact(WalkSpec::make(2, 1.0), 10, 1.0, walk_moment_cap + 2), OverflowError);
}

TEST(LimitMoment, Examples)
{
    EXPECT_NEAR(std::abs(limit_moment(WalkSpec::make(2, 1.0), 1.0, 4) - 3.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(limit_moment(WalkSpec::make(3, 1.0), 2.0, 3) - 2.0), 0.0, 1e-14);
    EXPECT_EQ(limit_moment(WalkSpec::make(3, 1.0), 2.0, 0), cplx(1.0, 0.0));
    EXPECT_EQ(limit_moment(WalkSpec::make(3, 1.0), 2.0, 4), cplx(0.0, 0.0));
}

TEST(RemainderBound, ValueAndScaling)
{
    const WalkSpec w = WalkSpec::make(2, 1.0);
    const double expect = (6.0 / 200.0) * (24.0 / 8.0) + (1.0 / 100.0) * std::pow(3.168 / std::log(5.0), 4);
    EXPECT_NEAR(remainder_bound(w, 100, 1.0, 2), expect, 1e-14 * expect);
    for (unsigned h : {2u, 3u, 5u})
        EXPECT_NEAR(remainder_bound(w, 200, 1.3, h) * 2.0, remainder_bound(w, 100, 1.3, h), 1e-12 * remainder_bound(w, 100, 1.3, h));
    EXPECT_THROW(remainder_bound(w, 10, 1.0, 1), DomainError);
}

TEST(LimitExpectationSeries, Examples)
{
    const WalkSpec w = WalkSpec::make(2, 1.0);
    std::vector<cplx> one{1.0};
    EXPECT_EQ(limit_expectation_series(w, 1.0, one, 1e-14, true), cplx(1.0, 0.0));

    for (auto [N, b] : std::vector<std::pair<int, cplx>>{{2, 1.0}, {3, 6.0}, {4, -6.0}}) {
        const WalkSpec v = WalkSpec::make(N, b);
        const double lam = 0.8;
        std::vector<cplx> a(161);
        cplx term = 1.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            a[k] = term;
            term *= cplx(0, lam) / static_cast<double>(k + 1);
        }
        EXPECT_NEAR(std::abs(limit_expectation_series(v, 1.0, a) - limit_char_fn(v, 1.0, lam)), 0.0, 1e-13);

        std::vector<cplx> zN(N + 1, 0.0);
        zN[N] = 1.0;
        EXPECT_NEAR(std::abs(limit_expectation_series(v, 0.7, zN, 1e-14, true) - b * 0.7), 0.0, 1e-13 * std::abs(b));
    }
    // Coefficients that do not decay within the supplied length.
    std::vector<cplx> bad(9, 1.0);
    EXPECT_THROW(limit_expectation_series(w, 1.0, bad), NonConvergenceError);
}

TEST(ReturnProbability, Values)
{
    EXPECT_EQ(return_probability(3, 1), BigRational(2, 9));
    EXPECT_EQ(return_probability(5, 1), BigRational(24, 625));
    EXPECT_THROW(return_probability(2, 1), DomainError);
    EXPECT_THROW(return_probability(3, 0), DomainError);
}

TEST(ReturnProbability, MatchesEnumeration)
{
    for (auto [N, m] : std::vector<std::pair<int, unsigned>>{{3, 1}, {3, 2}, {4, 1}, {5, 1}}) {
        const ReturnCounts rc = enumerate_returns(N, N * m);
        EXPECT_EQ(return_probability(N, m), BigRational(rc.balanced, rc.total)) << N << "," << m;
        // For prime N only balanced paths close up.
        if (N != 4) {
            EXPECT_EQ(rc.balanced, rc.returned);
        }
    }
    // On the square lattice (N = 4) other closed paths exist, e.g. two steps
    // right and two left.
    const ReturnCounts sq = enumerate_returns(4, 4);
    EXPECT_EQ(sq.returned, 36);
    EXPECT_EQ(sq.balanced, 24);
}

TEST(ReturnProbability, StirlingAsymptotics)
{
    // For N = 3 the probability behaves like sqrt(3) / (2 pi m).
    const double m = 300;
    const double p = return_probability(3, 300).convert_to<double>();
    EXPECT_NEAR(p * 2 * pi * m / std::sqrt(3.0), 1.0, 2e-3);
}

TEST(ReturnProbability, EmpiricalFrequency)
{
    const WalkSpec w = WalkSpec::make(3, 1.0);
    RandomStream rng(2718, 0);
    const int M = 100000;
    int hits = 0;
    for (int i = 0; i < M; ++i) {
        const WalkState st = walk_sample_state(w, 1, 3.0, rng);
        hits += (st.counts[0] == st.counts[1] && st.counts[1] == st.counts[2]);
    }
    const double p = 2.0 / 9.0;
    EXPECT_LE(std::abs(hits / double(M) - p), 4 * std::sqrt(p * (1 - p) / M));
}
