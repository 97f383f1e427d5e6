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
#include <complex>
#include <functional>
#include <vector>

#include "fracwalk/errors.hpp"
#include "fracwalk/specialfn.hpp"

namespace fracwalk {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on [-1, 1] by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(int n)
{
    if (n < 1) throw DomainError("gauss_legendre: n must be positive");
    QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Re-evaluate the derivative at the converged root.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^a (1+x)^b,
// a, b > -1. Newton iteration on P_n^{(a,b)} from asymptotic initial
// guesses, with weights from the standard derivative formula.
inline QuadratureRule gauss_jacobi(int n, double a, double b)
{
    if (n < 1) throw DomainError("gauss_jacobi: n must be positive");
    if (!(a > -1.0 && b > -1.0)) throw DomainError("gauss_jacobi: exponents must exceed -1");

    // Evaluates P_n^{(a,b)}(x) and P_{n-1}^{(a,b)}(x) together with P_n'.
    auto jacobi = [&](double x, double& pn, double& dpn) {
        double p0 = 1.0;
        double p1 = 0.5 * (a - b + (a + b + 2.0) * x);
        if (n == 1) {
            pn = p1;
            dpn = 0.5 * (a + b + 2.0);
            return;
        }
        for (int k = 2; k <= n; ++k) {
            const double kk = k;
            const double c = 2.0 * kk + a + b;
            const double a1 = 2.0 * kk * (kk + a + b) * (c - 2.0);
            const double a2 = (c - 1.0) * (a * a - b * b);
            const double a3 = (c - 2.0) * (c - 1.0) * c;
            const double a4 = 2.0 * (kk + a - 1.0) * (kk + b - 1.0) * c;
            const double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
            p0 = p1;
            p1 = p2;
        }
        pn = p1;
        const double c = 2.0 * n + a + b;
        dpn = (n * (a - b - c * x) * pn + 2.0 * (n + a) * (n + b) * p0) / (c * (1.0 - x * x));
    };

    QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
    std::vector<double> roots(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev-like initial guess, then deflate against earlier roots.
        double x = std::cos(pi * (i + 0.75 + 0.5 * a) / (n + 0.5 * (a + b + 1.0)));
        for (int iter = 0; iter < 200; ++iter) {
            double pn, dpn;
            jacobi(x, pn, dpn);
            double deflate = 0.0;
            for (int j = 0; j < i; ++j) deflate += 1.0 / (x - roots[j]);
            const double dx = pn / (dpn - deflate * pn);
            x -= dx;
            x = std::clamp(x, -1.0 + 1e-15, 1.0 - 1e-15);
            if (std::abs(dx) < 1e-15) break;
        }
        roots[i] = x;
    }
    std::sort(roots.begin(), roots.end());

    const double log_const = (a + b + 1.0) * std::log(2.0) + std::lgamma(n + a + 1.0)
                             + std::lgamma(n + b + 1.0) - std::lgamma(n + 1.0)
                             - std::lgamma(n + a + b + 1.0);
    for (int i = 0; i < n; ++i) {
        double pn, dpn;
        jacobi(roots[i], pn, dpn);
        const double x = roots[i];
        rule.nodes[i] = x;
        rule.weights[i] = std::exp(log_const) / ((1.0 - x * x) * dpn * dpn);
    }
    return rule;
}

// Composite Gauss-Legendre on [lo, hi] with the panel count doubled until
// successive results differ by less than tol (relative to the larger of 1
// and the result magnitude). F maps a double to a value type V supporting
// +, scalar *, and a norm via the supplied callable.
template <class V, class F, class Norm>
V composite_gauss_legendre(F&& f, double lo, double hi, double tol, Norm&& norm,
                           int initial_panels = 16, int order = 16, int max_panels = 1 << 14)
{
    const QuadratureRule base = gauss_legendre(order);
    auto integrate = [&](int panels) {
        const double width = (hi - lo) / panels;
        V sum{};
        bool first = true;
        for (int p = 0; p < panels; ++p) {
            const double mid = lo + (p + 0.5) * width;
            for (int i = 0; i < order; ++i) {
                V term = f(mid + 0.5 * width * base.nodes[i]);
                term *= 0.5 * width * base.weights[i];
                if (first) {
                    sum = term;
                    first = false;
                } else {
                    sum += term;
                }
            }
        }
        return sum;
    };

    V prev = integrate(initial_panels);
    for (int panels = 2 * initial_panels; panels <= max_panels; panels *= 2) {
        V cur = integrate(panels);
        V diff = cur;
        diff -= prev;
        if (norm(diff) <= tol * std::max(1.0, norm(cur))) return cur;
        prev = std::move(cur);
    }
    throw QuadratureError("composite_gauss_legendre: tolerance not met at max panel count");
}

inline cplx integrate_complex(const std::function<cplx(double)>& f, double lo, double hi,
                              double tol = 1e-13)
{
    return composite_gauss_legendre<cplx>(f, lo, hi, tol, [](cplx v) { return std::abs(v); });
}

inline double integrate_real(const std::function<double(double)>& f, double lo, double hi,
                             double tol = 1e-13)
{
    return composite_gauss_legendre<double>(f, lo, hi, tol, [](double v) { return std::abs(v); });
}

} // namespace fracwalk
