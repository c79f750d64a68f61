#pragma once

// Point utilities on S^d embedded in R^{d+1}, and weighted point sets used as
// quadratures and sampling grids.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "special_functions.hpp"

namespace sphfilter {

using Point = std::vector<double>;

inline constexpr double unit_tolerance = 1e-12;

inline double dot(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        s += x[i] * y[i];
    return s;
}

inline double euclidean_norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

inline bool is_unit(std::span<const double> x, double tol = unit_tolerance)
{
    return std::abs(euclidean_norm(x) - 1.0) <= tol;
}

inline Point normalized(std::span<const double> x)
{
    const double n = euclidean_norm(x);
    if (!(n > 0.0))
        throw std::invalid_argument("normalized: zero vector");
    Point out(x.begin(), x.end());
    for (auto& v : out)
        v /= n;
    return out;
}

/// Dot product of two unit vectors clamped to [-1, 1].
inline double clamped_cosine(std::span<const double> x, std::span<const double> y)
{
    return std::clamp(dot(x, y), -1.0, 1.0);
}

/// (0, ..., 0, 1) in R^{d+1}.
inline Point north_pole(int d)
{
    Point p(static_cast<std::size_t>(d) + 1, 0.0);
    p.back() = 1.0;
    return p;
}

template <class Rng>
Point random_unit_vector(int d, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    Point p(static_cast<std::size_t>(d) + 1);
    double n = 0.0;
    do {
        for (auto& v : p)
            v = normal(rng);
        n = euclidean_norm(p);
    } while (n < 1e-8);
    for (auto& v : p)
        v /= n;
    return p;
}

/// Some unit vector orthogonal to `x`.
inline Point orthogonal_unit(std::span<const double> x)
{
    std::size_t k = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::abs(x[i]) < std::abs(x[k]))
            k = i;
    Point e(x.size(), 0.0);
    e[k] = 1.0;
    const double c = dot(e, x);
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] -= c * x[i];
    return normalized(e);
}

/// cos(angle) x + sin(angle) u for orthonormal x, u.
inline Point rotate_towards(std::span<const double> x, std::span<const double> u, double angle)
{
    Point out(x.size());
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = c * x[i] + s * u[i];
    return normalized(out);
}

/// Points on S^d with attached weights. Flat row-major storage.
class WeightedPoints {
public:
    WeightedPoints() = default;

    explicit WeightedPoints(int d) : d_(d)
    {
        if (d < 2)
            throw std::invalid_argument("sphere dimension must be >= 2");
    }

    void push_back(std::span<const double> point, double weight)
    {
        if (point.size() != ambient_dim())
            throw std::invalid_argument("WeightedPoints: point dimension mismatch");
        coords_.insert(coords_.end(), point.begin(), point.end());
        weights_.push_back(weight);
    }

    [[nodiscard]] int d() const noexcept { return d_; }
    [[nodiscard]] std::size_t ambient_dim() const noexcept { return static_cast<std::size_t>(d_) + 1; }
    [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
    [[nodiscard]] bool empty() const noexcept { return weights_.empty(); }

    [[nodiscard]] std::span<const double> point(std::size_t i) const
    {
        return std::span<const double>(coords_).subspan(i * ambient_dim(), ambient_dim());
    }
    [[nodiscard]] double weight(std::size_t i) const { return weights_[i]; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }

    void scale_weights(double factor)
    {
        for (auto& w : weights_)
            w *= factor;
    }

private:
    int d_ = 2;
    std::vector<double> coords_;
    std::vector<double> weights_;
};

/// Near-uniform grid of at least `count` points with equal weights, plus both
/// poles. On S^2 this is the Fibonacci lattice; on higher spheres a seeded
/// uniform random cloud.
inline WeightedPoints equal_area_grid(int d, std::size_t count, unsigned long long seed = 0x5eedULL)
{
    if (count < 1)
        throw std::invalid_argument("equal_area_grid: count must be >= 1");
    WeightedPoints grid(d);
    const Point north = north_pole(d);
    Point south = north;
    south.back() = -1.0;
    const double w = 1.0 / static_cast<double>(count + 2);
    grid.push_back(north, w);
    grid.push_back(south, w);
    if (d == 2) {
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        Point p(3);
        for (std::size_t i = 0; i < count; ++i) {
            const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double phi = golden * static_cast<double>(i);
            p[0] = r * std::cos(phi);
            p[1] = r * std::sin(phi);
            p[2] = z;
            grid.push_back(normalized(p), w);
        }
    } else {
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < count; ++i)
            grid.push_back(random_unit_vector(d, rng), w);
    }
    return grid;
}

/// Quadrature along one meridian through `pole`, exact (up to the 1-D rule)
/// for integrands that depend only on the angle to `pole`. Weights are
/// normalized so they sum to one. The pole and its antipode are included
/// with zero weight so that sup-norm sampling sees them.
inline WeightedPoints meridian_quadrature(std::span<const double> pole, int panels, int nodes_per_panel)
{
    if (!is_unit(pole))
        throw std::invalid_argument("meridian_quadrature: pole is not a unit vector");
    const int d = static_cast<int>(pole.size()) - 1;
    const Point u = orthogonal_unit(pole);
    const GaussRule1D gl = gauss_legendre(nodes_per_panel);
    WeightedPoints out(d);
    Point antipode(pole.begin(), pole.end());
    for (auto& v : antipode)
        v = -v;
    out.push_back(pole, 0.0);
    out.push_back(antipode, 0.0);
    const double width = std::numbers::pi / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * width;
        for (std::size_t i = 0; i < gl.size(); ++i) {
            const double theta = mid + 0.5 * width * gl.nodes[i];
            const double w = 0.5 * width * gl.weights[i] * std::pow(std::sin(theta), d - 1);
            out.push_back(rotate_towards(pole, u, theta), w);
            total += w;
        }
    }
    out.scale_weights(1.0 / total);
    return out;
}

} // namespace sphfilter
