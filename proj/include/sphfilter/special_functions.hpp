#pragma once

// Gegenbauer polynomials, harmonic-space dimensions and 1-D Gauss-Legendre
// rules. Everything else in the library is built on these primitives.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphfilter {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) noexcept
    {
        add(x);
        return *this;
    }

    [[nodiscard]] double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Order lambda = (d-1)/2 of the Gegenbauer family attached to S^d.
class GegenbauerOrder {
public:
    explicit GegenbauerOrder(double lambda) : lambda_(lambda)
    {
        if (!(lambda >= 0.5))
            throw std::invalid_argument("Gegenbauer order must be >= 1/2, got " + std::to_string(lambda));
    }

    static GegenbauerOrder for_sphere(int d)
    {
        if (d < 2)
            throw std::invalid_argument("sphere dimension must be >= 2, got " + std::to_string(d));
        return GegenbauerOrder(0.5 * (d - 1));
    }

    [[nodiscard]] double value() const noexcept { return lambda_; }

private:
    double lambda_;
};

/// Dimension Z(d, ell) of the space of spherical harmonics of degree ell on S^d.
/// Exact integer arithmetic; throws std::overflow_error if the result does not
/// fit in 64 bits.
inline std::uint64_t dim_harmonic(int d, int ell)
{
    if (d < 2)
        throw std::invalid_argument("dim_harmonic: d must be >= 2");
    if (ell < 0)
        throw std::invalid_argument("dim_harmonic: ell must be >= 0");
    if (ell == 0)
        return 1;

    using wide = unsigned __int128;
    constexpr wide limit = std::numeric_limits<std::uint64_t>::max();

    // Z = (2 ell + d - 1) * binom(ell + d - 2, ell) / (d - 1)
    const auto m = static_cast<std::uint64_t>(d - 2);
    const auto k = std::min<std::uint64_t>(m, static_cast<std::uint64_t>(ell));
    const auto n = m + static_cast<std::uint64_t>(ell);
    wide binom = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        binom = binom * (n - k + i) / i;
        if (binom > limit)
            throw std::overflow_error("dim_harmonic: Z(d, ell) exceeds 64-bit range");
    }
    const wide z = binom * static_cast<wide>(2 * static_cast<std::uint64_t>(ell) + d - 1) /
                   static_cast<wide>(d - 1);
    if (z > limit)
        throw std::overflow_error("dim_harmonic: Z(d, ell) exceeds 64-bit range");
    return static_cast<std::uint64_t>(z);
}

namespace detail {

inline void require_unit_interval(double t)
{
    if (!(std::abs(t) <= 1.0))
        throw std::invalid_argument("Gegenbauer argument outside [-1, 1]");
}

} // namespace detail

/// Fills out[0..n) with C_0^lambda(t), ..., C_{n-1}^lambda(t).
inline void gegenbauer_all(GegenbauerOrder order, double t, std::span<double> out)
{
    detail::require_unit_interval(t);
    if (out.empty())
        return;
    const double lambda = order.value();
    out[0] = 1.0;
    if (out.size() == 1)
        return;
    out[1] = 2.0 * lambda * t;
    // n C_n = 2 (n - 1 + lambda) t C_{n-1} - (n + 2 lambda - 2) C_{n-2}
    for (std::size_t n = 2; n < out.size(); ++n) {
        const double nd = static_cast<double>(n);
        out[n] = (2.0 * (nd - 1.0 + lambda) * t * out[n - 1] - (nd + 2.0 * lambda - 2.0) * out[n - 2]) / nd;
    }
}

inline std::vector<double> gegenbauer_all(GegenbauerOrder order, int max_degree, double t)
{
    if (max_degree < 0)
        throw std::invalid_argument("gegenbauer_all: negative degree");
    std::vector<double> out(static_cast<std::size_t>(max_degree) + 1);
    gegenbauer_all(order, t, out);
    return out;
}

inline double gegenbauer_eval(GegenbauerOrder order, int ell, double t)
{
    if (ell < 0)
        throw std::invalid_argument("gegenbauer_eval: negative degree");
    detail::require_unit_interval(t);
    const double lambda = order.value();
    double prev = 1.0;
    if (ell == 0)
        return prev;
    double cur = 2.0 * lambda * t;
    for (int n = 2; n <= ell; ++n) {
        const double nd = n;
        const double next = (2.0 * (nd - 1.0 + lambda) * t * cur - (nd + 2.0 * lambda - 2.0) * prev) / nd;
        prev = cur;
        cur = next;
    }
    return cur;
}

/// C_ell^lambda(1) = Gamma(ell + 2 lambda) / (Gamma(2 lambda) Gamma(ell + 1)) as a
/// running product over integer shifts.
inline double gegenbauer_at_one(GegenbauerOrder order, int ell)
{
    if (ell < 0)
        throw std::invalid_argument("gegenbauer_at_one: negative degree");
    const double two_lambda = 2.0 * order.value();
    double value = 1.0;
    for (int k = 1; k <= ell; ++k) {
        value *= (k + two_lambda - 1.0) / k;
        if (!std::isfinite(value))
            throw std::overflow_error("gegenbauer_at_one: value overflows double");
    }
    return value;
}

struct GaussRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
    int degree = 0;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1], exact through degree 2n - 1.
inline GaussRule1D gauss_legendre(int n)
{
    if (n < 1)
        throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussRule1D rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    rule.degree = 2 * n - 1;

    constexpr double tol = 1e-14;
    constexpr int max_iter = 100;
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        bool converged = false;
        for (int iter = 0; iter < max_iter; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) <= tol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw std::runtime_error("gauss_legendre: Newton iteration did not converge");
        // Recompute the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule.nodes[lo] = -x;
        rule.nodes[hi] = x;
        rule.weights[lo] = w;
        rule.weights[hi] = w;
    }
    if (n % 2 == 1)
        rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

/// Applies `rule` on each of `panels` equal subintervals of [a, b].
template <class F>
double integrate_composite(const GaussRule1D& rule, double a, double b, int panels, F&& f)
{
    if (panels < 1)
        throw std::invalid_argument("integrate_composite: panels must be >= 1");
    const double width = (b - a) / panels;
    CompensatedSum sum;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double mid = lo + 0.5 * width;
        for (std::size_t i = 0; i < rule.size(); ++i)
            sum += 0.5 * width * rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
    }
    return sum.value();
}

} // namespace sphfilter
