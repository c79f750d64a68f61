#pragma once

// Filter catalogue, forward differences of sampled filters and a grid-based
// bounded-variation estimate.
//
// A filter h is equal to 1 on [0, 1] and vanishes on [2, inf). The Riesz family
// (1 - t/2)_+^delta is carried by the same type with is_proper_filter = false.

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sphfilter {

class Filter {
public:
    using Function = std::function<double(double)>;

    /// Stand-in for C^infinity in declared_smoothness.
    static constexpr int infinitely_smooth = 1000;
    /// declared_smoothness of filters that are merely BV.
    static constexpr int bounded_variation_only = -1;

    Filter(std::string name, Function evaluate, int declared_smoothness, double support_end, bool is_proper,
           Function right_derivative = {})
        : name_(std::move(name))
        , evaluate_(std::move(evaluate))
        , right_derivative_(std::move(right_derivative))
        , declared_smoothness_(declared_smoothness)
        , support_end_(support_end)
        , is_proper_(is_proper)
    {
    }

    double operator()(double t) const { return evaluate_(t); }

    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    /// r such that membership in W^r BV is claimed; -1 means BV only.
    [[nodiscard]] int declared_smoothness() const noexcept { return declared_smoothness_; }
    [[nodiscard]] double support_end() const noexcept { return support_end_; }
    [[nodiscard]] bool is_proper_filter() const noexcept { return is_proper_; }

    /// Closed-form one-sided first derivative h'_+, when available
    /// (piecewise-polynomial filters only).
    [[nodiscard]] bool has_right_derivative() const noexcept { return static_cast<bool>(right_derivative_); }
    [[nodiscard]] double right_derivative(double t) const
    {
        if (!right_derivative_)
            throw std::logic_error("filter '" + name_ + "' has no closed-form derivative");
        return right_derivative_(t);
    }

private:
    std::string name_;
    Function evaluate_;
    Function right_derivative_;
    int declared_smoothness_;
    double support_end_;
    bool is_proper_;
};

/// Characteristic function of [0, 1] (closed at 1).
inline Filter make_step()
{
    return Filter("step", [](double t) { return t <= 1.0 ? 1.0 : 0.0; }, Filter::bounded_variation_only, 1.0,
                  true);
}

namespace detail {

inline double binomial(int n, int k)
{
    double b = 1.0;
    for (int i = 1; i <= k; ++i)
        b = b * (n - k + i) / i;
    return b;
}

// Smoothstep of order r on [0, 1]: degree 2r + 1, S(0) = 0, S(1) = 1, and the
// first r derivatives vanish at both ends.
inline double smoothstep(int r, double u)
{
    double poly = 0.0;
    double one_minus_pow = 1.0;
    for (int k = 0; k <= r; ++k) {
        poly += binomial(r + k, k) * one_minus_pow;
        one_minus_pow *= 1.0 - u;
    }
    return std::pow(u, r + 1) * poly;
}

inline std::string shortest_repr(double x)
{
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

inline double smoothstep_derivative(int r, double u)
{
    return (2 * r + 1) * binomial(2 * r, r) * std::pow(u, r) * std::pow(1.0 - u, r);
}

} // namespace detail

/// Piecewise-polynomial filter with a degree 2r+1 Hermite transition on [1, 2].
/// r = 0 is the de la Vallee-Poussin filter.
inline Filter make_hermite(int r)
{
    if (r < 0)
        throw std::invalid_argument("make_hermite: r must be >= 0");
    auto h = [r](double t) {
        if (t <= 1.0)
            return 1.0;
        if (t >= 2.0)
            return 0.0;
        return 1.0 - detail::smoothstep(r, t - 1.0);
    };
    auto dh = [r](double t) {
        if (t < 1.0 || t >= 2.0)
            return 0.0;
        return -detail::smoothstep_derivative(r, t - 1.0);
    };
    return Filter("hermite:" + std::to_string(r), h, r + 1, 2.0, true, dh);
}

/// de la Vallee-Poussin filter: 1 on [0, 1], 2 - t on [1, 2], 0 after.
inline Filter make_vp()
{
    auto h = [](double t) {
        if (t <= 1.0)
            return 1.0;
        if (t >= 2.0)
            return 0.0;
        return 2.0 - t;
    };
    auto dh = [](double t) { return (t >= 1.0 && t < 2.0) ? -1.0 : 0.0; };
    return Filter("vp", h, 1, 2.0, true, dh);
}

/// C^infinity filter with transition psi(b - t) / (psi(b - t) + psi(t - 1)) on
/// (1, b), psi(u) = exp(-1/u) for u > 0.
inline Filter make_smooth(double support_end = 2.0)
{
    if (!(support_end > 1.0))
        throw std::invalid_argument("make_smooth: support end must exceed 1");
    const double b = support_end;
    auto h = [b](double t) {
        if (t <= 1.0)
            return 1.0;
        if (t >= b)
            return 0.0;
        const double upper = std::exp(-1.0 / (b - t));
        const double lower = std::exp(-1.0 / (t - 1.0));
        return upper / (upper + lower);
    };
    return Filter(support_end == 2.0 ? "smooth" : "smooth:" + detail::shortest_repr(support_end), h,
                  Filter::infinitely_smooth, b, true);
}

/// (1 - t/2)_+^delta. Not equal to 1 on [0, 1], so not a proper filter.
inline Filter make_riesz(double delta)
{
    if (!(delta > 0.0))
        throw std::invalid_argument("make_riesz: delta must be positive");
    auto h = [delta](double t) { return t >= 2.0 ? 0.0 : std::pow(1.0 - 0.5 * t, delta); };
    return Filter("riesz:" + detail::shortest_repr(delta), h, static_cast<int>(std::floor(delta)), 2.0, false);
}

/// h0 (1 - h1) + h1 with h0 = (1 - t/2)_+^{(d-1)/2} and h1 the C^infinity
/// filter supported on [0, 3/2]. Only W^{floor((d-1)/2)} BV, and its operator
/// norms grow without bound.
inline Filter make_counterexample(int d)
{
    if (d < 2)
        throw std::invalid_argument("make_counterexample: d must be >= 2");
    const Filter h1 = make_smooth(1.5);
    const double exponent = 0.5 * (d - 1);
    auto h = [h1, exponent](double t) {
        const double h0 = t >= 2.0 ? 0.0 : std::pow(1.0 - 0.5 * t, exponent);
        const double s = h1(t);
        return h0 * (1.0 - s) + s;
    };
    return Filter("counterexample", h, (d - 1) / 2, 2.0, true);
}

/// Resolves a CLI filter name: step, vp, hermite:r, smooth, counterexample,
/// riesz:delta. The counterexample depends on the sphere dimension d.
inline Filter filter_from_name(std::string_view name, int d)
{
    auto parameter = [&](std::string_view prefix) -> std::string_view {
        return name.substr(prefix.size());
    };
    if (name == "step")
        return make_step();
    if (name == "vp")
        return make_vp();
    if (name == "smooth")
        return make_smooth();
    if (name == "counterexample")
        return make_counterexample(d);
    if (name.starts_with("hermite:")) {
        const auto arg = parameter("hermite:");
        int r = -1;
        auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), r);
        if (ec != std::errc{} || ptr != arg.data() + arg.size() || r < 0)
            throw std::invalid_argument("bad hermite order in filter name '" + std::string(name) + "'");
        return make_hermite(r);
    }
    if (name.starts_with("riesz:")) {
        const std::string arg(parameter("riesz:"));
        std::size_t used = 0;
        double delta = 0.0;
        try {
            delta = std::stod(arg, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != arg.size() || arg.empty() || !(delta > 0.0))
            throw std::invalid_argument("bad riesz exponent in filter name '" + std::string(name) + "'");
        return make_riesz(delta);
    }
    throw std::invalid_argument("unknown filter '" + std::string(name) + "'");
}

struct DifferenceTable {
    int order = 0;
    int scale = 1;
    /// values[k] = Delta^order h(k / scale), k = 0 .. 2 scale + order.
    std::vector<double> values;
};

/// Delta^r h(k/L) = sum_j (-1)^j binom(r, j) h((k + j) / L).
inline DifferenceTable forward_difference(const Filter& h, int L, int r)
{
    if (L < 1)
        throw std::invalid_argument("forward_difference: L must be >= 1");
    if (r < 0)
        throw std::invalid_argument("forward_difference: r must be >= 0");
    DifferenceTable table{r, L, {}};
    const int count = 2 * L + r + 1;
    std::vector<double> samples(static_cast<std::size_t>(count + r));
    for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i] = h(static_cast<double>(i) / L);
    table.values.resize(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        double acc = 0.0;
        double sign = 1.0;
        for (int j = 0; j <= r; ++j) {
            acc += sign * detail::binomial(r, j) * samples[static_cast<std::size_t>(k + j)];
            sign = -sign;
        }
        table.values[static_cast<std::size_t>(k)] = acc;
    }
    return table;
}

/// Variation of g along a uniform partition of [a, b] into `grid` intervals.
/// A lower bound for the total variation.
template <class G>
double bv_estimate(G&& g, double a, double b, int grid)
{
    if (grid < 2)
        throw std::invalid_argument("bv_estimate: grid must be >= 2");
    double total = 0.0;
    double prev = g(a);
    for (int k = 1; k <= grid; ++k) {
        const double x = k == grid ? b : a + (b - a) * k / grid;
        const double cur = g(x);
        total += std::abs(cur - prev);
        prev = cur;
    }
    return total;
}

} // namespace sphfilter
