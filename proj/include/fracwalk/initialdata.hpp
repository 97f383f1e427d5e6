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

// Initial data with compactly supported spectral measure,
//   f(z) = int e^{-iyz} dmu(y),
// where mu is a finite sum of point masses and densities on bounded
// intervals. Such f extend to entire functions of exponential type.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fracwalk/errors.hpp"
#include "fracwalk/quadrature.hpp"
#include "fracwalk/specialfn.hpp"

namespace fracwalk {

struct PointMass {
    double y = 0.0;
    cplx weight = 1.0;
};

// Density given as a function on [a, b].
struct AnalyticDensity {
    std::function<cplx(double)> density;
    double a = -1.0;
    double b = 1.0;
};

// Density given by samples on an increasing grid, integrated with the
// trapezoid rule.
struct SampledDensity {
    std::vector<double> nodes;
    std::vector<cplx> values;
};

// One node of a discretized spectral measure.
struct SpectralAtom {
    double y = 0.0;
    cplx weight = 0.0;
};

// exp(-i y z) refuses arguments with |y Im z| beyond this.
inline constexpr double exponent_cap = 700.0;

class InitialDatum {
public:
    InitialDatum() = default;

    static InitialDatum point_mass(double y0, cplx weight = 1.0)
    {
        InitialDatum d;
        d.masses_.push_back({y0, weight});
        d.name_ = "point_mass";
        return d;
    }

    // cos(omega x): masses 1/2 at -omega and omega.
    static InitialDatum cosine(double omega = 1.0)
    {
        InitialDatum d;
        d.masses_.push_back({-omega, 0.5});
        d.masses_.push_back({omega, 0.5});
        d.name_ = "cosine";
        return d;
    }

    // Density (1/2Y)(1 + cos(pi y / Y)) on [-Y, Y]; unit mass.
    static InitialDatum raised_cosine(double Y = 4.0)
    {
        if (!(Y > 0.0)) throw DomainError("raised_cosine: support radius must be positive");
        InitialDatum d;
        d.densities_.push_back(
            {[Y](double y) { return cplx((1.0 + std::cos(pi * y / Y)) / (2.0 * Y), 0.0); }, -Y, Y});
        d.name_ = "raised_cosine";
        return d;
    }

    // Normal density with standard deviation sigma, cut off at |y| = Y.
    static InitialDatum truncated_gaussian(double sigma = 1.0, double Y = 8.0)
    {
        if (!(sigma > 0.0 && Y > 0.0))
            throw DomainError("truncated_gaussian: sigma and Y must be positive");
        InitialDatum d;
        const double c = 1.0 / (std::sqrt(2.0 * pi) * sigma);
        d.densities_.push_back(
            {[c, sigma](double y) { return cplx(c * std::exp(-0.5 * y * y / (sigma * sigma)), 0.0); },
             -Y, Y});
        d.name_ = "truncated_gaussian";
        return d;
    }

    static InitialDatum from_density(std::function<cplx(double)> density, double a, double b,
                                     std::string name = "density")
    {
        if (!(a < b)) throw DomainError("from_density: requires a < b");
        InitialDatum d;
        d.densities_.push_back({std::move(density), a, b});
        d.name_ = std::move(name);
        return d;
    }

    static InitialDatum from_samples(std::vector<double> nodes, std::vector<cplx> values,
                                     std::string name = "samples")
    {
        if (nodes.size() != values.size() || nodes.size() < 2)
            throw DomainError("from_samples: need at least two nodes with matching values");
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (!(nodes[i] > nodes[i - 1]))
                throw DomainError("from_samples: nodes must be strictly increasing");
        InitialDatum d;
        d.sampled_.push_back({std::move(nodes), std::move(values)});
        d.name_ = std::move(name);
        return d;
    }

    const std::vector<PointMass>& point_masses() const { return masses_; }
    const std::vector<AnalyticDensity>& densities() const { return densities_; }
    const std::vector<SampledDensity>& sampled() const { return sampled_; }
    const std::string& name() const { return name_; }

    // Smallest Y with all spectral mass in [-Y, Y].
    double support_radius() const
    {
        double Y = 0.0;
        for (const auto& p : masses_) Y = std::max(Y, std::abs(p.y));
        for (const auto& d : densities_) Y = std::max({Y, std::abs(d.a), std::abs(d.b)});
        for (const auto& s : sampled_)
            Y = std::max({Y, std::abs(s.nodes.front()), std::abs(s.nodes.back())});
        return Y;
    }

    bool empty() const { return masses_.empty() && densities_.empty() && sampled_.empty(); }

    friend InitialDatum operator+(InitialDatum lhs, const InitialDatum& rhs)
    {
        lhs.masses_.insert(lhs.masses_.end(), rhs.masses_.begin(), rhs.masses_.end());
        lhs.densities_.insert(lhs.densities_.end(), rhs.densities_.begin(), rhs.densities_.end());
        lhs.sampled_.insert(lhs.sampled_.end(), rhs.sampled_.begin(), rhs.sampled_.end());
        lhs.name_ = lhs.name_ + "+" + rhs.name_;
        return lhs;
    }

    friend InitialDatum operator*(cplx c, const InitialDatum& d)
    {
        return d.propagate([c](double) { return c; });
    }

    // The datum with spectral measure G(y) dmu(y).
    InitialDatum propagate(const std::function<cplx(double)>& G) const
    {
        InitialDatum out;
        out.name_ = name_;
        for (const auto& p : masses_) out.masses_.push_back({p.y, p.weight * G(p.y)});
        for (const auto& d : densities_) {
            auto rho = d.density;
            out.densities_.push_back({[rho, G](double y) { return rho(y) * G(y); }, d.a, d.b});
        }
        for (const auto& s : sampled_) {
            SampledDensity ns = s;
            for (std::size_t i = 0; i < ns.nodes.size(); ++i) ns.values[i] *= G(ns.nodes[i]);
            out.sampled_.push_back(std::move(ns));
        }
        return out;
    }

    // Point masses exactly; analytic densities by composite Gauss-Legendre
    // with the given panel count and order; sampled densities by trapezoid.
    std::vector<SpectralAtom> discretize(int panels = 32, int order = 16) const
    {
        std::vector<SpectralAtom> atoms;
        for (const auto& p : masses_) atoms.push_back({p.y, p.weight});
        const QuadratureRule rule = gauss_legendre(order);
        for (const auto& d : densities_) {
            const double width = (d.b - d.a) / panels;
            for (int p = 0; p < panels; ++p) {
                const double mid = d.a + (p + 0.5) * width;
                for (int i = 0; i < order; ++i) {
                    const double y = mid + 0.5 * width * rule.nodes[i];
                    atoms.push_back({y, 0.5 * width * rule.weights[i] * d.density(y)});
                }
            }
        }
        for (const auto& s : sampled_) {
            const std::size_t n = s.nodes.size();
            for (std::size_t i = 0; i < n; ++i) {
                const double left = (i > 0) ? s.nodes[i] - s.nodes[i - 1] : 0.0;
                const double right = (i + 1 < n) ? s.nodes[i + 1] - s.nodes[i] : 0.0;
                atoms.push_back({s.nodes[i], 0.5 * (left + right) * s.values[i]});
            }
        }
        return atoms;
    }

    // int g(y) dmu(y) for the given integrand, density parts by adaptive
    // quadrature to tol.
    cplx integrate(const std::function<cplx(double)>& g, double tol = 1e-13) const
    {
        cplx sum = 0.0;
        for (const auto& p : masses_) sum += p.weight * g(p.y);
        for (const auto& d : densities_) {
            auto rho = d.density;
            sum += integrate_complex([&](double y) { return rho(y) * g(y); }, d.a, d.b, tol);
        }
        for (const auto& s : sampled_) {
            for (std::size_t i = 0; i + 1 < s.nodes.size(); ++i) {
                const double h = s.nodes[i + 1] - s.nodes[i];
                sum += 0.5 * h * (s.values[i] * g(s.nodes[i]) + s.values[i + 1] * g(s.nodes[i + 1]));
            }
        }
        return sum;
    }

private:
    std::vector<PointMass> masses_;
    std::vector<AnalyticDensity> densities_;
    std::vector<SampledDensity> sampled_;
    std::string name_ = "datum";
};

inline void check_exponent(const InitialDatum& datum, cplx z, const char* who)
{
    if (datum.support_radius() * std::abs(z.imag()) > exponent_cap)
        throw OverflowError(std::string(who) + ": |Im z| too large for the datum's spectral support");
}

inline cplx evaluate_f(const InitialDatum& datum, cplx z, double tol = 1e-13)
{
    check_exponent(datum, z, "evaluate_f");
    return datum.integrate([z](double y) { return std::exp(cplx(0.0, -y) * z); }, tol);
}

// a_k = (1/k!) int (-iy)^k dmu(y). The integrand is scaled by the support
// radius R so that cancellation (e.g. odd k on symmetric data) is judged
// against an O(1) quantity.
inline cplx taylor_coeff(const InitialDatum& datum, unsigned k, double tol = 1e-13)
{
    if (k > 170) throw OverflowError("taylor_coeff: k exceeds 170");
    const double R = datum.support_radius() > 0.0 ? datum.support_radius() : 1.0;
    const cplx scaled = datum.integrate(
        [k, R](double y) { return i_pow(-static_cast<int>(k)) * std::pow(y / R, k); }, tol);
    return scaled * std::exp(k * std::log(R) - std::lgamma(k + 1.0));
}

inline double total_variation(const InitialDatum& datum, double tol = 1e-13)
{
    double tv = 0.0;
    for (const auto& p : datum.point_masses()) tv += std::abs(p.weight);
    for (const auto& d : datum.densities()) {
        auto rho = d.density;
        tv += integrate_real([&](double y) { return std::abs(rho(y)); }, d.a, d.b, tol);
    }
    for (const auto& s : datum.sampled())
        for (std::size_t i = 0; i + 1 < s.nodes.size(); ++i)
            tv += 0.5 * (s.nodes[i + 1] - s.nodes[i]) * (std::abs(s.values[i]) + std::abs(s.values[i + 1]));
    return tv;
}

// Certificate |a_k| <= C1 C2^k / k!, which gives the coefficient growth
// condition for every N.
struct GrowthCertificate {
    bool holds = true;
    double C1 = 0.0;
    double C2 = 0.0;
};

inline GrowthCertificate check_growth_condition(const InitialDatum& datum, int N)
{
    if (N < 2) throw DomainError("check_growth_condition: N must be >= 2");
    if (datum.empty()) throw DomainError("check_growth_condition: empty datum");
    return {true, total_variation(datum), datum.support_radius()};
}

} // namespace fracwalk
