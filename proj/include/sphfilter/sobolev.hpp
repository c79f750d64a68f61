#pragma once

// Test functions of prescribed Sobolev smoothness and the norms used to
// measure approximation errors.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "filters.hpp"
#include "operators.hpp"
#include "sphere.hpp"
#include "zonal_expansion.hpp"
#include "zonal_kernel.hpp"

namespace sphfilter {

inline constexpr double infinity_norm = std::numeric_limits<double>::infinity();

/// Zonal coefficients a_l = (1 + l)^{-s - d/2 - epsilon}, l = 0..Lambda. For
/// epsilon > 0 the function lies in W_2^s.
struct SobolevProfile {
    int d = 2;
    double s = 1.0;
    double epsilon = 0.5;
    int Lambda = 64;

    [[nodiscard]] std::vector<double> coefficients() const
    {
        if (Lambda < 0)
            throw std::invalid_argument("SobolevProfile: Lambda must be >= 0");
        if (!(s > 0.0) || !(epsilon >= 0.0))
            throw std::invalid_argument("SobolevProfile: need s > 0 and epsilon >= 0");
        const double exponent = -s - 0.5 * d - epsilon;
        std::vector<double> a(static_cast<std::size_t>(Lambda) + 1);
        for (int ell = 0; ell <= Lambda; ++ell)
            a[static_cast<std::size_t>(ell)] = std::pow(1.0 + ell, exponent);
        return a;
    }
};

inline ZonalExpansion make_test_function(const SobolevProfile& profile, const Point& pole)
{
    if (static_cast<int>(pole.size()) != profile.d + 1)
        throw std::invalid_argument("make_test_function: pole dimension does not match d");
    return ZonalExpansion(pole, profile.coefficients());
}

/// f^{(s)}: multiplier (l (l + d - 1))^{s/2}, with the l = 0 term dropped.
inline ZonalExpansion sobolev_derivative(const ZonalExpansion& f, double s)
{
    if (!(s >= 0.0))
        throw std::invalid_argument("sobolev_derivative: s must be >= 0");
    std::vector<double> c(static_cast<std::size_t>(f.degree()) + 1, 0.0);
    for (int ell = 1; ell <= f.degree(); ++ell)
        c[static_cast<std::size_t>(ell)] = std::pow(static_cast<double>(ell) * (ell + f.d() - 1), 0.5 * s) * f.coeff(ell);
    return ZonalExpansion(f.pole(), std::move(c));
}

/// ||f||_2 + ||f^{(s)}||_2.
inline double sobolev_norm_2(const ZonalExpansion& f, double s)
{
    return l2_norm(f) + l2_norm(sobolev_derivative(f, s));
}

/// ||f||_p of a zonal expansion through the one-dimensional reduction in the
/// angle to the pole. p = 2 is exact (Parseval); p = inf samples the profile
/// on a dense angular grid that includes both poles.
inline double lp_norm(const ZonalExpansion& f, double p)
{
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_norm: p must be >= 1");
    if (p == 2.0)
        return l2_norm(f);
    const auto c = f.gegenbauer_coefficients();
    auto g = [&](double t) { return gegenbauer_series(f.order(), c, t); };
    const int degree = std::max(f.degree(), 1);
    if (p == infinity_norm) {
        const int samples = std::max(20000, 64 * degree);
        double m = 0.0;
        for (int i = 0; i <= samples; ++i) {
            const double theta = std::numbers::pi * i / samples;
            m = std::max(m, std::abs(g(std::clamp(std::cos(theta), -1.0, 1.0))));
        }
        return m;
    }
    const double integral = integrate_zonal_abs(f.d(), g, 8 * degree, 8, p);
    return std::pow(integral, 1.0 / p);
}

/// ||f - g||_p for two zonal expansions with a common pole.
inline double lp_error(const ZonalExpansion& f, const ZonalExpansion& g, double p)
{
    return lp_norm(f - g, p);
}

/// ||f - g||_p with g a black box, using `samples` as quadrature (p < inf) or
/// as the sampling grid (p = inf).
template <class G>
double lp_error(const ZonalExpansion& f, G&& g, double p, const WeightedPoints& samples)
{
    if (!(p >= 1.0))
        throw std::invalid_argument("lp_error: p must be >= 1");
    const auto fe = f.evaluator();
    if (p == infinity_norm) {
        double m = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            m = std::max(m, std::abs(fe(samples.point(i)) - g(samples.point(i))));
        return m;
    }
    CompensatedSum s;
    for (std::size_t i = 0; i < samples.size(); ++i)
        s += samples.weight(i) * std::pow(std::abs(fe(samples.point(i)) - g(samples.point(i))), p);
    return std::pow(s.value(), 1.0 / p);
}

/// ||f - V_L f||_p, an upper bound for the best-approximation error E_L(f)_p.
inline double best_approx_upper(const ZonalExpansion& f, const Filter& h, int L, double p)
{
    return lp_error(f, apply_semidiscrete(h, L, f), p);
}

} // namespace sphfilter
