#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "special_functions.hpp"
#include "sphere.hpp"
#include "zonal_kernel.hpp"

namespace sphfilter {

/// f(x) = sum_l a_l K_l(p, x) for a pole p. The term a_l K_l(p, .) is the
/// projection H_l f, so linear multiplier operators act coefficientwise.
class ZonalExpansion {
public:
    ZonalExpansion(Point pole, std::vector<double> coeffs)
        : pole_(std::move(pole)), coeffs_(std::move(coeffs)), order_(GegenbauerOrder::for_sphere(d_from_pole()))
    {
        if (!is_unit(pole_))
            throw std::invalid_argument("ZonalExpansion: pole must be a unit vector");
        if (coeffs_.empty())
            coeffs_.push_back(0.0);
    }

    [[nodiscard]] int d() const noexcept { return static_cast<int>(pole_.size()) - 1; }
    [[nodiscard]] const Point& pole() const noexcept { return pole_; }
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] double coeff(int ell) const
    {
        return ell >= 0 && ell < static_cast<int>(coeffs_.size()) ? coeffs_[static_cast<std::size_t>(ell)] : 0.0;
    }
    /// Highest stored degree (trailing zeros included).
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    [[nodiscard]] GegenbauerOrder order() const noexcept { return order_; }

    /// Coefficients of the profile in the Gegenbauer basis C_l^lambda.
    [[nodiscard]] std::vector<double> gegenbauer_coefficients() const
    {
        std::vector<double> c(coeffs_.size());
        for (std::size_t ell = 0; ell < c.size(); ++ell)
            c[ell] = coeffs_[ell] * addition_factor(order_, static_cast<int>(ell));
        return c;
    }

    /// Value as a function of t = p . x.
    [[nodiscard]] double profile(double t) const
    {
        const auto c = gegenbauer_coefficients();
        return gegenbauer_series(order_, c, t);
    }

    [[nodiscard]] double operator()(std::span<const double> x) const
    {
        if (x.size() != pole_.size())
            throw std::invalid_argument("ZonalExpansion: evaluation point dimension mismatch");
        return profile(clamped_cosine(pole_, x));
    }

    /// Evaluator that caches the Gegenbauer coefficients.
    [[nodiscard]] auto evaluator() const
    {
        return [pole = pole_, order = order_, c = gegenbauer_coefficients()](std::span<const double> x) {
            return gegenbauer_series(order, c, clamped_cosine(pole, x));
        };
    }

private:
    int d_from_pole() const
    {
        if (pole_.size() < 3)
            throw std::invalid_argument("ZonalExpansion: pole must live in R^{d+1}, d >= 2");
        return static_cast<int>(pole_.size()) - 1;
    }

    Point pole_;
    std::vector<double> coeffs_;
    GegenbauerOrder order_;
};

namespace detail {

inline void require_same_pole(const ZonalExpansion& f, const ZonalExpansion& g)
{
    if (f.pole() != g.pole())
        throw std::invalid_argument("zonal expansions have different poles");
}

} // namespace detail

inline ZonalExpansion operator+(const ZonalExpansion& f, const ZonalExpansion& g)
{
    detail::require_same_pole(f, g);
    std::vector<double> c(static_cast<std::size_t>(std::max(f.degree(), g.degree())) + 1);
    for (std::size_t ell = 0; ell < c.size(); ++ell)
        c[ell] = f.coeff(static_cast<int>(ell)) + g.coeff(static_cast<int>(ell));
    return ZonalExpansion(f.pole(), std::move(c));
}

inline ZonalExpansion operator-(const ZonalExpansion& f, const ZonalExpansion& g)
{
    detail::require_same_pole(f, g);
    std::vector<double> c(static_cast<std::size_t>(std::max(f.degree(), g.degree())) + 1);
    for (std::size_t ell = 0; ell < c.size(); ++ell)
        c[ell] = f.coeff(static_cast<int>(ell)) - g.coeff(static_cast<int>(ell));
    return ZonalExpansion(f.pole(), std::move(c));
}

/// ||f||_2 by Parseval: ||K_l(p, .)||_2^2 = Z(d, l).
inline double l2_norm(const ZonalExpansion& f)
{
    CompensatedSum s;
    for (int ell = 0; ell <= f.degree(); ++ell) {
        const double a = f.coeff(ell);
        s += a * a * static_cast<double>(dim_harmonic(f.d(), ell));
    }
    return std::sqrt(s.value());
}

} // namespace sphfilter
