#pragma once

// Filtered zonal kernel Phi_L(x, y) = sum_l h(l/L) K_l(x, y), with
// K_l(x, y) = (l + lambda)/lambda C_l^lambda(x . y), and its L1 norm over the
// sphere, which is the operator norm of the semi-discrete approximation.

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "filters.hpp"
#include "special_functions.hpp"
#include "sphere.hpp"

namespace sphfilter {

/// sum_l coeffs[l] C_l^lambda(t) in one recurrence pass.
inline double gegenbauer_series(GegenbauerOrder order, std::span<const double> coeffs, double t)
{
    detail::require_unit_interval(t);
    if (coeffs.empty())
        return 0.0;
    const double lambda = order.value();
    CompensatedSum sum;
    double prev = 1.0;
    sum += coeffs[0];
    if (coeffs.size() == 1)
        return sum.value();
    double cur = 2.0 * lambda * t;
    sum += coeffs[1] * cur;
    for (std::size_t n = 2; n < coeffs.size(); ++n) {
        const double nd = static_cast<double>(n);
        const double next = (2.0 * (nd - 1.0 + lambda) * t * cur - (nd + 2.0 * lambda - 2.0) * prev) / nd;
        prev = cur;
        cur = next;
        sum += coeffs[n] * cur;
    }
    return sum.value();
}

/// (l + lambda) / lambda, the factor turning C_l^lambda into K_l.
inline double addition_factor(GegenbauerOrder order, int ell)
{
    return (ell + order.value()) / order.value();
}

class ZonalKernel {
public:
    /// Kernel with explicit Gegenbauer coefficients c_l (the factor
    /// (l + lambda)/lambda already applied).
    ZonalKernel(int d, int L, std::vector<double> coeffs, std::string filter_name)
        : d_(d), L_(L), order_(GegenbauerOrder::for_sphere(d)), coeffs_(std::move(coeffs)), filter_name_(std::move(filter_name))
    {
        for (double c : coeffs_)
            if (!std::isfinite(c))
                throw std::invalid_argument("ZonalKernel: non-finite coefficient");
    }

    [[nodiscard]] int d() const noexcept { return d_; }
    [[nodiscard]] int L() const noexcept { return L_; }
    [[nodiscard]] GegenbauerOrder order() const noexcept { return order_; }
    [[nodiscard]] double lambda() const noexcept { return order_.value(); }
    [[nodiscard]] std::span<const double> coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] const std::string& filter_name() const noexcept { return filter_name_; }
    /// Highest degree carried.
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }

private:
    int d_;
    int L_;
    GegenbauerOrder order_;
    std::vector<double> coeffs_;
    std::string filter_name_;
};

/// c_l = h(l/L) (l + lambda)/lambda for l = 0 .. 2L - 1; h vanishes beyond.
inline ZonalKernel build_kernel(const Filter& h, int L, int d)
{
    if (L < 1)
        throw std::invalid_argument("build_kernel: L must be >= 1");
    const auto order = GegenbauerOrder::for_sphere(d);
    std::vector<double> coeffs(static_cast<std::size_t>(2 * L));
    for (int ell = 0; ell < 2 * L; ++ell)
        coeffs[static_cast<std::size_t>(ell)] = h(static_cast<double>(ell) / L) * addition_factor(order, ell);
    return ZonalKernel(d, L, std::move(coeffs), h.name());
}

inline double eval_kernel_cos(const ZonalKernel& K, double t)
{
    return gegenbauer_series(K.order(), K.coeffs(), t);
}

inline double eval_kernel_points(const ZonalKernel& K, std::span<const double> x, std::span<const double> y)
{
    const auto dim = static_cast<std::size_t>(K.d()) + 1;
    if (x.size() != dim || y.size() != dim)
        throw std::invalid_argument("eval_kernel_points: dimension mismatch");
    if (!is_unit(x) || !is_unit(y))
        throw std::invalid_argument("eval_kernel_points: inputs must be unit vectors");
    return eval_kernel_cos(K, clamped_cosine(x, y));
}

/// Normalized-measure integral over S^d of |g(x . p)|^power for a zonal
/// profile g on [-1, 1]:
///     int |g(cos theta)|^power sin^{d-1} theta dtheta / int sin^{d-1} theta dtheta.
/// Composite Gauss-Legendre in theta on `panels` equal panels; sign changes of
/// g detected on a sub-sampling of each panel are located by bisection and
/// become panel breakpoints, so the integrand is smooth on every piece.
template <class G>
double integrate_zonal_abs(int d, G&& g, int panels, int nodes_per_panel, double power = 1.0)
{
    if (d < 2)
        throw std::invalid_argument("integrate_zonal_abs: d must be >= 2");
    if (panels < 1 || nodes_per_panel < 2)
        throw std::invalid_argument("integrate_zonal_abs: need panels >= 1 and nodes_per_panel >= 2");
    const GaussRule1D gl = gauss_legendre(nodes_per_panel);
    auto profile = [&](double theta) { return g(std::clamp(std::cos(theta), -1.0, 1.0)); };
    auto weight = [d](double theta) { return std::pow(std::sin(theta), d - 1); };

    CompensatedSum integral;
    CompensatedSum measure;
    auto integrate_piece = [&](double a, double b) {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (a + b);
        for (std::size_t i = 0; i < gl.size(); ++i) {
            const double theta = mid + half * gl.nodes[i];
            const double w = half * gl.weights[i] * weight(theta);
            integral += w * std::pow(std::abs(profile(theta)), power);
        }
    };
    auto locate_root = [&](double a, double fa, double b) {
        for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
            const double m = 0.5 * (a + b);
            const double fm = profile(m);
            if (fm == 0.0)
                return m;
            if ((fm > 0.0) == (fa > 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    };

    constexpr int probes = 4;
    const double width = std::numbers::pi / panels;
    double left = 0.0;
    double f_left = profile(left);
    for (int p = 0; p < panels; ++p) {
        const double a = p * width;
        const double b = p + 1 == panels ? std::numbers::pi : (p + 1) * width;
        // measure uses the plain composite rule; the same rule applied to 1
        for (std::size_t i = 0; i < gl.size(); ++i) {
            const double theta = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[i];
            measure += 0.5 * (b - a) * gl.weights[i] * weight(theta);
        }
        double piece_start = a;
        for (int k = 1; k <= probes; ++k) {
            const double x = k == probes ? b : a + (b - a) * k / probes;
            const double fx = profile(x);
            if ((fx > 0.0 && f_left < 0.0) || (fx < 0.0 && f_left > 0.0)) {
                const double root = locate_root(left, f_left, x);
                integrate_piece(piece_start, root);
                piece_start = root;
            }
            left = x;
            f_left = fx;
        }
        integrate_piece(piece_start, b);
    }
    return integral.value() / measure.value();
}

/// int_{S^d} |Phi_L(x, y)| dsigma(y), independent of x.
inline double kernel_l1_norm(const ZonalKernel& K, int panels, int nodes_per_panel)
{
    return integrate_zonal_abs(
        K.d(), [&K](double t) { return eval_kernel_cos(K, t); }, panels, nodes_per_panel);
}

/// Default resolution: 8L panels with 8 nodes each.
inline double kernel_l1_norm(const ZonalKernel& K)
{
    return kernel_l1_norm(K, 8 * std::max(K.L(), 1), 8);
}

} // namespace sphfilter
