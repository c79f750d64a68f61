#pragma once

// Filtered approximation operators.
//
//   V_L f     = sum_l h(l/L) H_l f                    (acts on ZonalExpansion)
//   V_{L,N} f = sum_j W_j f(y_j) Phi_L(y_j, .)        (acts on black boxes)
//
// plus Cesaro means, the summation-by-parts representation of V_L, dyadic
// blocks tau_r, and the operator norms of both schemes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cubature.hpp"
#include "filters.hpp"
#include "sphere.hpp"
#include "zonal_expansion.hpp"
#include "zonal_kernel.hpp"

namespace sphfilter {

class UncertifiedRuleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_proper(const Filter& h)
{
    if (!h.is_proper_filter())
        throw std::invalid_argument("filter '" + h.name() + "' is not a proper filter");
}

inline void require_rule_for(const CubatureRule& rule, int L)
{
    const int needed = 3 * L - 1;
    if (!rule.certified_for(needed))
        throw UncertifiedRuleError("cubature rule is not certified to degree " + std::to_string(needed) +
                                   " (3L-1 for L=" + std::to_string(L) + ")");
}

} // namespace detail

/// b_l = h(l/L) a_l for l <= min(Lambda, 2L - 1).
inline ZonalExpansion apply_semidiscrete(const Filter& h, int L, const ZonalExpansion& f)
{
    detail::require_proper(h);
    if (L < 1)
        throw std::invalid_argument("apply_semidiscrete: L must be >= 1");
    const int top = std::min(f.degree(), 2 * L - 1);
    std::vector<double> b(static_cast<std::size_t>(top) + 1);
    for (int ell = 0; ell <= top; ++ell)
        b[static_cast<std::size_t>(ell)] = h(static_cast<double>(ell) / L) * f.coeff(ell);
    return ZonalExpansion(f.pole(), std::move(b));
}

/// x -> sum_j W_j f(y_j) Phi_L(y_j, x). Summation in node order.
class FullyDiscreteApproximation {
public:
    FullyDiscreteApproximation(ZonalKernel kernel, const CubatureRule& rule, std::vector<double> weighted_values)
        : kernel_(std::move(kernel)), nodes_(rule.points()), weighted_values_(std::move(weighted_values))
    {
    }

    [[nodiscard]] double operator()(std::span<const double> x) const
    {
        if (x.size() != nodes_.ambient_dim())
            throw std::invalid_argument("FullyDiscreteApproximation: dimension mismatch");
        CompensatedSum s;
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            if (weighted_values_[j] == 0.0)
                continue;
            s += weighted_values_[j] * eval_kernel_cos(kernel_, clamped_cosine(nodes_.point(j), x));
        }
        return s.value();
    }

    [[nodiscard]] const ZonalKernel& kernel() const noexcept { return kernel_; }
    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }

private:
    ZonalKernel kernel_;
    WeightedPoints nodes_;
    std::vector<double> weighted_values_;
};

/// Filtered hyperinterpolation of a black-box f. The rule must be certified to
/// degree 3L - 1.
template <class F>
FullyDiscreteApproximation apply_fully_discrete(const Filter& h, int L, const CubatureRule& rule, F&& f)
{
    detail::require_proper(h);
    detail::require_rule_for(rule, L);
    std::vector<double> values(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j)
        values[j] = rule.weight(j) * f(rule.node(j));
    return FullyDiscreteApproximation(build_kernel(h, L, rule.d()), rule, std::move(values));
}

/// ||V_L|| = int |Phi_L(x, y)| dsigma(y). `panels` = 0 selects the default 8L.
inline double operator_norm_semidiscrete(const Filter& h, int L, int d, int panels = 0, int nodes_per_panel = 8)
{
    const ZonalKernel K = build_kernel(h, L, d);
    return kernel_l1_norm(K, panels > 0 ? panels : 8 * L, nodes_per_panel);
}

struct DiscreteNormEstimate {
    double value = 0.0;       ///< lower bound for sup_x sum_j W_j |Phi_L(x, y_j)|
    Point argmax;
    std::size_t evaluations = 0;
};

namespace detail {

inline double discrete_lebesgue_function(const ZonalKernel& K, const CubatureRule& rule, std::span<const double> x)
{
    CompensatedSum s;
    for (std::size_t j = 0; j < rule.size(); ++j)
        s += rule.weight(j) * std::abs(eval_kernel_cos(K, clamped_cosine(rule.node(j), x)));
    return s.value();
}

// Orthonormal basis of the tangent space at x.
inline std::vector<Point> tangent_basis(std::span<const double> x)
{
    std::vector<Point> basis;
    for (std::size_t k = 0; k < x.size() && basis.size() + 1 < x.size(); ++k) {
        Point e(x.size(), 0.0);
        e[k] = 1.0;
        const double cx = dot(e, x);
        for (std::size_t i = 0; i < e.size(); ++i)
            e[i] -= cx * x[i];
        for (const auto& b : basis) {
            const double cb = dot(e, b);
            for (std::size_t i = 0; i < e.size(); ++i)
                e[i] -= cb * b[i];
        }
        const double n = euclidean_norm(e);
        if (n > 1e-6) {
            for (auto& v : e)
                v /= n;
            basis.push_back(std::move(e));
        }
    }
    return basis;
}

} // namespace detail

/// Number of best rule nodes used as refinement seeds.
inline constexpr std::size_t node_seed_count = 8;

/// Lower bound for ||V_{L,N}|| = sup_x sum_j W_j |Phi_L(x, y_j)|: the max over
/// all rule nodes and `probes` seeded random points, followed by line searches
/// (coarse scan, then golden section) along great circles through the best few
/// nodes and through every random probe that set a new running maximum, each
/// finished by a compass search. Extending the probe set (same seed) only adds
/// seeds, so it never lowers the estimate.
inline DiscreteNormEstimate operator_norm_fully_discrete(const ZonalKernel& K, const CubatureRule& rule, int probes,
                                                         unsigned long long seed = 7ULL)
{
    if (rule.d() != K.d())
        throw std::invalid_argument("operator_norm_fully_discrete: dimension mismatch");
    if (probes < 0)
        throw std::invalid_argument("operator_norm_fully_discrete: probes must be >= 0");
    DiscreteNormEstimate best;
    auto consider = [&](std::span<const double> x) {
        const double v = detail::discrete_lebesgue_function(K, rule, x);
        ++best.evaluations;
        if (v > best.value) {
            best.value = v;
            best.argmax.assign(x.begin(), x.end());
        }
        return v;
    };

    std::vector<Point> seeds;
    {
        std::vector<std::pair<double, std::size_t>> node_values;
        for (std::size_t j = 0; j < rule.size(); ++j)
            node_values.emplace_back(consider(rule.node(j)), j);
        const std::size_t top = std::min(node_values.size(), node_seed_count);
        std::partial_sort(node_values.begin(), node_values.begin() + static_cast<std::ptrdiff_t>(top),
                          node_values.end(), [](const auto& a, const auto& b) {
                              return a.first > b.first || (a.first == b.first && a.second < b.second);
                          });
        for (std::size_t i = 0; i < top; ++i) {
            const auto node = rule.node(node_values[i].second);
            seeds.emplace_back(node.begin(), node.end());
        }
    }
    std::mt19937_64 rng(seed);
    double record = -1.0;
    for (int i = 0; i < probes; ++i) {
        const Point x = random_unit_vector(rule.d(), rng);
        const double v = consider(x);
        if (v > record) {
            record = v;
            seeds.push_back(x);
        }
    }

    const double window = std::numbers::pi / std::max(K.L(), 1);
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    constexpr int scan_steps = 16;
    for (const Point& x : seeds) {
        Point local = x;
        double local_value = detail::discrete_lebesgue_function(K, rule, x);
        auto visit = [&](const Point& y) {
            const double v = consider(y);
            if (v > local_value) {
                local_value = v;
                local = y;
            }
            return v;
        };
        const auto basis = detail::tangent_basis(x);
        std::vector<Point> directions = basis;
        if (basis.size() == 2) {
            for (double sgn : {1.0, -1.0}) {
                Point u(x.size());
                for (std::size_t i = 0; i < u.size(); ++i)
                    u[i] = (basis[0][i] + sgn * basis[1][i]) / std::sqrt(2.0);
                directions.push_back(std::move(u));
            }
        }
        for (const Point& u : directions) {
            // Coarse scan of the window, then golden section on the best cell.
            const double step = window / scan_steps;
            double scan_best = -1.0;
            double centre = 0.0;
            for (int k = -scan_steps; k <= scan_steps; ++k) {
                const double v = visit(rotate_towards(x, u, k * step));
                if (v > scan_best) {
                    scan_best = v;
                    centre = k * step;
                }
            }
            double a = centre - step;
            double b = centre + step;
            double c = b - golden * (b - a);
            double e = a + golden * (b - a);
            double fc = visit(rotate_towards(x, u, c));
            double fe = visit(rotate_towards(x, u, e));
            for (int it = 0; it < 30; ++it) {
                if (fc > fe) {
                    b = e;
                    e = c;
                    fe = fc;
                    c = b - golden * (b - a);
                    fc = visit(rotate_towards(x, u, c));
                } else {
                    a = c;
                    c = e;
                    fc = fe;
                    e = a + golden * (b - a);
                    fe = visit(rotate_towards(x, u, e));
                }
            }
        }
        // Compass search in the tangent plane of the seed's best point.
        double radius = window / scan_steps;
        while (radius > 1e-9) {
            const Point y = local;
            const double current = local_value;
            for (const Point& u : detail::tangent_basis(y))
                for (double sgn : {1.0, -1.0})
                    visit(rotate_towards(y, u, sgn * radius));
            if (!(local_value > current))
                radius *= 0.5;
        }
    }
    return best;
}

inline DiscreteNormEstimate operator_norm_fully_discrete(const Filter& h, int L, const CubatureRule& rule, int probes,
                                                         unsigned long long seed = 7ULL)
{
    detail::require_rule_for(rule, L);
    return operator_norm_fully_discrete(build_kernel(h, L, rule.d()), rule, probes, seed);
}

/// Cesaro numbers A_k^delta = binom(k + delta, k) for k = 0..max_k, built by
/// A_k = A_{k-1} (k + delta) / k.
class CesaroSpec {
public:
    CesaroSpec(double delta, int max_k) : delta_(delta)
    {
        if (!(delta > -1.0))
            throw std::invalid_argument("CesaroSpec: delta must exceed -1");
        if (max_k < 0)
            throw std::invalid_argument("CesaroSpec: max_k must be >= 0");
        table_.resize(static_cast<std::size_t>(max_k) + 1);
        table_[0] = 1.0;
        for (int k = 1; k <= max_k; ++k)
            table_[static_cast<std::size_t>(k)] = table_[static_cast<std::size_t>(k - 1)] * (k + delta) / k;
    }

    [[nodiscard]] double delta() const noexcept { return delta_; }
    [[nodiscard]] int max_k() const noexcept { return static_cast<int>(table_.size()) - 1; }
    [[nodiscard]] double A(int k) const
    {
        if (k < 0 || k > max_k())
            throw std::out_of_range("CesaroSpec: index outside table");
        return table_[static_cast<std::size_t>(k)];
    }

private:
    double delta_;
    std::vector<double> table_;
};

/// sigma_k^delta f = (1 / A_k) sum_{l<=k} A_{k-l} H_l f.
inline ZonalExpansion cesaro_mean(const CesaroSpec& spec, int k, const ZonalExpansion& f)
{
    if (k < 0)
        throw std::invalid_argument("cesaro_mean: k must be >= 0");
    const int top = std::min(k, f.degree());
    std::vector<double> b(static_cast<std::size_t>(top) + 1);
    const double Ak = spec.A(k);
    for (int ell = 0; ell <= top; ++ell)
        b[static_cast<std::size_t>(ell)] = spec.A(k - ell) / Ak * f.coeff(ell);
    return ZonalExpansion(f.pole(), std::move(b));
}

/// V_L f rebuilt as sum_k Delta^{r+1} h(k/L) A_k^r sigma_k^r(f). Used to cross-check
/// apply_semidiscrete.
inline ZonalExpansion summation_by_parts_apply(const Filter& h, int L, int r, const ZonalExpansion& f)
{
    if (r < 0)
        throw std::invalid_argument("summation_by_parts_apply: r must be >= 0");
    const DifferenceTable diff = forward_difference(h, L, r + 1);
    const int kmax = static_cast<int>(diff.values.size()) - 1;
    const CesaroSpec cesaro(static_cast<double>(r), kmax);
    std::vector<double> acc(static_cast<std::size_t>(std::min(f.degree(), kmax)) + 1, 0.0);
    for (int k = 0; k <= kmax; ++k) {
        const double dk = diff.values[static_cast<std::size_t>(k)];
        if (dk == 0.0)
            continue;
        const ZonalExpansion sigma = cesaro_mean(cesaro, k, f);
        const double scale = dk * cesaro.A(k);
        for (int ell = 0; ell <= sigma.degree(); ++ell)
            acc[static_cast<std::size_t>(ell)] += scale * sigma.coeff(ell);
    }
    return ZonalExpansion(f.pole(), std::move(acc));
}

/// tau_0 = V_1 f, tau_r = V_{2^r} f - V_{2^{r-1}} f.
inline ZonalExpansion dyadic_block(const Filter& h, int r, const ZonalExpansion& f)
{
    if (r < 0 || r > 29)
        throw std::invalid_argument("dyadic_block: r must be in [0, 29]");
    if (r == 0)
        return apply_semidiscrete(h, 1, f);
    return apply_semidiscrete(h, 1 << r, f) - apply_semidiscrete(h, 1 << (r - 1), f);
}

} // namespace sphfilter
