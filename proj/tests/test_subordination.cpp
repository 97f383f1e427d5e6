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

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fracwalk/subordination.hpp"

using namespace fracwalk;

namespace {

struct MeanSe {
    cplx mean;
    double se_re, se_im;
};

template <class Draw>
MeanSe mc_mean(int n, Draw&& draw)
{
    double sr = 0, si = 0, qr = 0, qi = 0;
    for (int i = 0; i < n; ++i) {
        const cplx v = draw();
        sr += v.real();
        si += v.imag();
        qr += v.real() * v.real();
        qi += v.imag() * v.imag();
    }
    const double mr = sr / n, mi = si / n;
    return {{mr, mi}, std::sqrt(std::max(0.0, qr / n - mr * mr) / n), std::sqrt(std::max(0.0, qi / n - mi * mi) / n)};
}

void expect_within(const MeanSe& m, cplx exact, double k = 4.5)
{
    EXPECT_LE(std::abs(m.mean.real() - exact.real()), k * m.se_re + 1e-12) << m.mean << " vs " << exact;
    EXPECT_LE(std::abs(m.mean.imag() - exact.imag()), k * m.se_im + 1e-12) << m.mean << " vs " << exact;
}

// One-sample Kolmogorov-Smirnov statistic.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf&& cdf)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, f - i / n, (i + 1) / n - f});
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b)
{
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

// 99.9% critical value of the KS statistic.
double ks_critical(double n) { return 1.95 / std::sqrt(n); }

} // namespace

TEST(SubordinatorSpec, Construction)
{
    const auto s = SubordinatorSpec::make(0.5, 10);
    EXPECT_DOUBLE_EQ(s.lower(), 0.1);
    EXPECT_DOUBLE_EQ(s.upper(), 100.0);
    EXPECT_NEAR(s.lambda_rate, 1.0 / std::sqrt(pi), 1e-15);
    EXPECT_NEAR(s.jump_rate(), 10.0 / std::sqrt(pi), 1e-13);
    EXPECT_EQ(s.density(0.05), 0.0);
    EXPECT_EQ(s.density(200.0), 0.0);
    EXPECT_THROW(SubordinatorSpec::make(1.0, 10), DomainError);
    EXPECT_THROW(SubordinatorSpec::make(0.0, 10), DomainError);
    EXPECT_THROW(SubordinatorSpec::make(0.5, 1), DomainError);
}

TEST(YDensity, NormalizedAndMoments)
{
    for (double a : {0.2, 0.5, 0.9}) {
        for (std::uint64_t m : {2u, 10u, 300u}) {
            const auto s = SubordinatorSpec::make(a, m);
            auto in_log = [&](double k) {
                return integrate_real([&](double u) { return s.density(std::exp(u)) * std::exp((k + 1) * u); },
                                      std::log(s.lower()) + 1e-15, std::log(s.upper()) - 1e-15, 1e-14);
            };
            EXPECT_NEAR(in_log(0), 1.0, 1e-12) << a << " " << m;
            for (unsigned k : {1u, 2u, 3u}) {
                const double q = in_log(k);
                EXPECT_NEAR(Y_moment(s, k), q, 1e-11 * q) << a << " " << m << " k=" << k;
            }
        }
    }
    EXPECT_THROW(Y_moment(SubordinatorSpec::make(0.5, 10), 0), DomainError);
}

TEST(YSampler, MatchesCdf)
{
    for (double a : {0.3, 0.7}) {
        const auto s = SubordinatorSpec::make(a, 20);
        RandomStream rng(3, static_cast<std::uint64_t>(a * 10));
        std::vector<double> xs(50000);
        for (auto& x : xs) {
            x = sample_Y(s, rng);
            ASSERT_GT(x, s.lower());
            ASSERT_LT(x, s.upper());
        }
        const double lo = std::pow(s.lower(), -a), hi = std::pow(s.upper(), -a);
        const double d = ks_statistic(xs, [&](double y) { return (lo - std::pow(y, -a)) / (lo - hi); });
        EXPECT_LT(d, ks_critical(xs.size()));
    }
}

TEST(YTransform, MatchesMomentSeries)
{
    const auto s = SubordinatorSpec::make(0.6, 10);
    // |z| <= 1 keeps the largest series term near 1e3, so the sum itself is accurate.
    for (cplx z : {cplx(-1, 0), cplx(-0.3, 0.9), cplx(0, -1.0), cplx(0.4, 0)}) {
        cplx series = 1.0, zk = 1.0;
        double fact = 1.0;
        for (unsigned k = 1; k <= 150; ++k) {
            zk *= z / 10.0;
            fact *= k;
            series += zk / fact * Y_moment(s, k);
        }
        EXPECT_NEAR(std::abs(Y_transform(s, z) - series), 0.0, 1e-11 * std::abs(series)) << z;
    }
    EXPECT_EQ(Y_transform(s, 0.0), cplx(1.0, 0.0));
}

TEST(SmTransform, MatchesMonteCarlo)
{
    for (auto conv : {SumConvention::AsPrinted, SumConvention::FromOne}) {
        const auto s = SubordinatorSpec::make(0.5, 10, conv);
        for (cplx z : {cplx(-1, 0), cplx(-0.5, 1.0), cplx(0, 2.0)}) {
            RandomStream rng(11, static_cast<std::uint64_t>(conv == SumConvention::AsPrinted));
            const auto m = mc_mean(100000, [&] { return std::exp(z * sample_Sm(s, 0.8, rng).value); });
            expect_within(m, Sm_transform(s, 0.8, z));
        }
    }
}

TEST(SmTransform, Identities)
{
    const auto s = SubordinatorSpec::make(0.5, 10);
    EXPECT_NEAR(std::abs(Sm_transform(s, 1.0, 0.0) - 1.0), 0.0, 1e-15);
    // Without the extra jump the law is infinitely divisible in t.
    const auto f = SubordinatorSpec::make(0.5, 10, SumConvention::FromOne);
    EXPECT_EQ(Sm_transform(f, 0.0, cplx(-1, 0)), cplx(1.0, 0.0));
    const cplx z(-0.7, 0.4);
    EXPECT_NEAR(std::abs(Sm_transform(f, 1.0, z) - Sm_transform(f, 0.3, z) * Sm_transform(f, 0.7, z)), 0.0, 1e-13);
    // The printed convention differs by exactly one jump.
    EXPECT_NEAR(std::abs(Sm_transform(s, 1.0, z) - Sm_transform(f, 1.0, z) * Y_transform(s, z)), 0.0, 1e-13);
    EXPECT_THROW(Sm_transform(s, 1.0, cplx(0.1, 0)), DomainError);
    EXPECT_THROW(Sm_transform(s, -1.0, cplx(-0.1, 0)), DomainError);
}

TEST(SmTransform, ApproachesStableLaplaceTransform)
{
    // The gap to exp(-t lambda^alpha) shrinks as m grows.
    for (auto conv : {SumConvention::AsPrinted, SumConvention::FromOne}) {
        double prev = 1e300;
        for (std::uint64_t m : {10u, 30u, 100u, 300u}) {
            const auto s = SubordinatorSpec::make(0.5, m, conv);
            double e = 0.0;
            for (double lam = 0.25; lam <= 4.0; lam += 0.25)
                e = std::max(e, std::abs(Sm_transform(s, 1.0, -lam) - std::exp(-std::sqrt(lam))));
            EXPECT_LT(e, prev) << "m=" << m;
            prev = e;
        }
    }
}

TEST(SmSampler, MeanAndMomentBound)
{
    for (auto conv : {SumConvention::AsPrinted, SumConvention::FromOne}) {
        const auto s = SubordinatorSpec::make(0.4, 8, conv);
        const double t = 1.5;
        RandomStream rng(5, 0);
        const auto mean = mc_mean(200000, [&] { return cplx(sample_Sm(s, t, rng).value, 0.0); });
        const double jumps = t * s.jump_rate() + (conv == SumConvention::AsPrinted ? 1.0 : 0.0);
        expect_within(mean, jumps * Y_moment(s, 1) / 8.0);
        for (unsigned k : {1u, 2u, 3u}) {
            RandomStream r2(6, k);
            const auto mk = mc_mean(50000, [&] { return cplx(std::pow(sample_Sm(s, t, r2).value, k), 0.0); });
            EXPECT_LE(mk.mean.real(), Sm_moment_bound(s, t, k)) << k;
        }
    }
    const auto s = SubordinatorSpec::make(0.5, 2);
    EXPECT_THROW(Sm_moment_bound(s, 0.01, 1), DomainError);
    RandomStream rng(1, 1);
    EXPECT_THROW(sample_Sm(s, -1.0, rng), DomainError);
}

TEST(StableSubordinator, HalfOrderIsLevy)
{
    // With E exp(-lambda H) = exp(-sqrt(lambda)), H(1) has the law of 1 / (2 Z^2).
    RandomStream rng(17, 0);
    std::vector<double> xs(50000);
    for (auto& x : xs) x = sample_H_unit(0.5, rng);
    const double d = ks_statistic(xs, [](double x) { return std::erfc(1.0 / (2.0 * std::sqrt(x))); });
    EXPECT_LT(d, ks_critical(xs.size()));
}

TEST(StableSubordinator, LaplaceTransform)
{
    for (double a : {0.3, 0.5, 0.8}) {
        for (double t : {0.5, 2.0}) {
            for (double lam : {0.5, 1.0, 3.0}) {
                RandomStream rng(19, static_cast<std::uint64_t>(a * 100 + t * 10 + lam));
                const auto m = mc_mean(100000, [&] { return cplx(std::exp(-lam * sample_H(a, t, rng).value), 0.0); });
                expect_within(m, std::exp(-t * std::pow(lam, a)));
            }
        }
    }
}

TEST(StableSubordinator, SelfSimilarity)
{
    const double a = 0.6, t = 2.5;
    RandomStream r1(23, 0), r2(23, 1);
    std::vector<double> direct(40000), scaled(40000);
    for (auto& x : direct) x = sample_H(a, t, r1).value;
    for (auto& x : scaled) x = std::pow(t, 1.0 / a) * sample_H(a, 1.0, r2).value;
    const double n = direct.size();
    EXPECT_LT(ks_two_sample(direct, scaled), 1.95 * std::sqrt(2.0 / n));
    EXPECT_THROW(sample_H(a, 0.0, r1), DomainError);
    EXPECT_THROW(sample_H(1.0, 1.0, r1), DomainError);
}

TEST(InverseSubordinator, Moments)
{
    EXPECT_EQ(L_moment(0.5, 2.0, 0), 1.0);
    EXPECT_NEAR(L_moment(0.5, 1.0, 1), 2.0 / std::sqrt(pi), 1e-15);
    // At alpha = 1/2, L(t) = sqrt(2t) |Z|.
    EXPECT_NEAR(L_moment(0.5, 3.0, 2), 2 * 3.0, 1e-13);
    EXPECT_NEAR(L_moment(0.5, 3.0, 4), 3 * 4 * 9.0, 1e-11);
    for (double a : {0.3, 0.7}) {
        RandomStream rng(29, static_cast<std::uint64_t>(a * 10));
        for (unsigned k : {1u, 2u}) {
            const auto m = mc_mean(200000, [&] { return cplx(std::pow(sample_L(a, 1.7, rng).value, k), 0.0); });
            expect_within(m, L_moment(a, 1.7, k));
        }
    }
    EXPECT_THROW(L_moment(1.2, 1.0, 1), DomainError);
}

TEST(InverseSubordinator, MittagLefflerTransform)
{
    // E exp(-lambda L(t)) = E_alpha(-lambda t^alpha).
    for (double a : {0.4, 0.75}) {
        for (double lam : {0.5, 2.0}) {
            RandomStream rng(31, static_cast<std::uint64_t>(a * 100 + lam));
            const double t = 1.3;
            const auto m = mc_mean(100000, [&] { return cplx(std::exp(-lam * sample_L(a, t, rng).value), 0.0); });
            expect_within(m, mittag_leffler(a, -lam * std::pow(t, a)));
        }
    }
}
