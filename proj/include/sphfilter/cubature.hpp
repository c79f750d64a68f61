#pragma once

// Positive-weight cubature rules on S^d: product-rule generation on S^2,
// exactness certification through zonal kernel probes, a plain-text file
// format, and a Marcinkiewicz-Zygmund style sampling-inequality spot check.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "special_functions.hpp"
#include "sphere.hpp"
#include "zonal_kernel.hpp"

namespace sphfilter {

inline constexpr double weight_sum_tolerance = 1e-12;
inline constexpr double exactness_tolerance = 1e-10;

class CubatureRule {
public:
    CubatureRule(WeightedPoints points, int declared_degree)
        : points_(std::move(points)), declared_degree_(declared_degree)
    {
        check_invariants(weight_sum_tolerance);
    }

    [[nodiscard]] int d() const noexcept { return points_.d(); }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::span<const double> node(std::size_t i) const { return points_.point(i); }
    [[nodiscard]] double weight(std::size_t i) const { return points_.weight(i); }
    [[nodiscard]] const WeightedPoints& points() const noexcept { return points_; }
    [[nodiscard]] int declared_degree() const noexcept { return declared_degree_; }

    [[nodiscard]] bool certified() const noexcept { return certified_degree_.has_value(); }
    /// Degree at which exactness was last verified, if any.
    [[nodiscard]] std::optional<int> certified_degree() const noexcept { return certified_degree_; }
    [[nodiscard]] bool certified_for(int degree) const noexcept
    {
        return certified_degree_.has_value() && *certified_degree_ >= degree;
    }

    void mark_certified(int degree) { certified_degree_ = degree; }

private:
    void check_invariants(double sum_tol) const
    {
        if (points_.empty())
            throw std::invalid_argument("cubature rule has no nodes");
        CompensatedSum total;
        for (std::size_t i = 0; i < points_.size(); ++i) {
            if (!is_unit(points_.point(i)))
                throw std::invalid_argument("cubature node " + std::to_string(i) + " is not a unit vector");
            if (!(points_.weight(i) > 0.0))
                throw std::invalid_argument("cubature weight " + std::to_string(i) + " is not positive");
            total += points_.weight(i);
        }
        if (std::abs(total.value() - 1.0) > sum_tol)
            throw std::invalid_argument("cubature weights do not sum to 1");
    }

    WeightedPoints points_;
    int declared_degree_;
    std::optional<int> certified_degree_;
};

/// Gauss-Legendre in z = cos(theta) with ceil((t+1)/2) nodes times t+1
/// equispaced azimuths. Exact on spherical polynomials of degree <= t on S^2.
inline CubatureRule product_rule_s2(int degree)
{
    if (degree < 0)
        throw std::invalid_argument("product_rule_s2: degree must be >= 0");
    const int rings = (degree + 2) / 2;
    const int azimuths = degree + 1;
    const GaussRule1D gl = gauss_legendre(rings);
    WeightedPoints points(2);
    Point p(3);
    CompensatedSum total;
    for (int i = 0; i < rings; ++i) {
        const double z = gl.nodes[static_cast<std::size_t>(i)];
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double w = 0.5 * gl.weights[static_cast<std::size_t>(i)] / azimuths;
        for (int k = 0; k < azimuths; ++k) {
            const double phi = 2.0 * std::numbers::pi * k / azimuths;
            p[0] = r * std::cos(phi);
            p[1] = r * std::sin(phi);
            p[2] = z;
            points.push_back(normalized(p), w);
            total += w;
        }
    }
    points.scale_weights(1.0 / total.value());
    return CubatureRule(std::move(points), degree);
}

struct ExactnessReport {
    double max_defect = 0.0;
    int worst_degree = 0;
    bool pass = false;
};

/// Checks Q_N(K_l(x, .)) = delta_{l0} for l = 0..degree over `trials` random
/// unit vectors x. Zonal probes at varying x span every harmonic space, so a
/// zero defect is equivalent to exactness on polynomials of that degree.
inline ExactnessReport validate_exactness(const CubatureRule& rule, int degree, int trials,
                                          unsigned long long seed = 20150101ULL)
{
    if (trials < 1)
        throw std::invalid_argument("validate_exactness: trials must be >= 1");
    if (degree < 0)
        throw std::invalid_argument("validate_exactness: degree must be >= 0");
    const auto order = GegenbauerOrder::for_sphere(rule.d());
    std::mt19937_64 rng(seed);
    ExactnessReport report;
    std::vector<double> cgeg(static_cast<std::size_t>(degree) + 1);
    std::vector<CompensatedSum> sums(static_cast<std::size_t>(degree) + 1);
    for (int trial = 0; trial < trials; ++trial) {
        const Point x = random_unit_vector(rule.d(), rng);
        std::fill(sums.begin(), sums.end(), CompensatedSum{});
        for (std::size_t j = 0; j < rule.size(); ++j) {
            gegenbauer_all(order, clamped_cosine(x, rule.node(j)), cgeg);
            for (std::size_t ell = 0; ell < cgeg.size(); ++ell)
                sums[ell] += rule.weight(j) * cgeg[ell];
        }
        for (int ell = 0; ell <= degree; ++ell) {
            const double q = addition_factor(order, ell) * sums[static_cast<std::size_t>(ell)].value();
            const double defect = std::abs(q - (ell == 0 ? 1.0 : 0.0));
            if (defect > report.max_defect) {
                report.max_defect = defect;
                report.worst_degree = ell;
            }
        }
    }
    report.pass = report.max_defect <= exactness_tolerance;
    return report;
}

/// Runs validate_exactness and marks the rule certified at `degree` on success.
inline ExactnessReport certify(CubatureRule& rule, int degree, int trials = 20)
{
    ExactnessReport report = validate_exactness(rule, degree, trials);
    if (report.pass)
        rule.mark_certified(degree);
    return report;
}

enum class RuleParseErrorKind {
    io,
    malformed_header,
    malformed_row,
    non_unit_node,
    non_positive_weight,
    weight_normalization,
};

class RuleParseError : public std::runtime_error {
public:
    RuleParseError(RuleParseErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] RuleParseErrorKind kind() const noexcept { return kind_; }

private:
    RuleParseErrorKind kind_;
};

inline constexpr double file_weight_sum_tolerance = 1e-9;

/// Text format: "d N degree", then N rows of d+1 coordinates and the weight,
/// 17 significant digits. The degree written is the certified one when set.
inline void write_rule(std::ostream& out, const CubatureRule& rule)
{
    out << rule.d() << ' ' << rule.size() << ' ' << rule.certified_degree().value_or(rule.declared_degree()) << '\n';
    out << std::setprecision(17);
    for (std::size_t i = 0; i < rule.size(); ++i) {
        for (double c : rule.node(i))
            out << c << ' ';
        out << rule.weight(i) << '\n';
    }
}

inline CubatureRule read_rule(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw RuleParseError(RuleParseErrorKind::malformed_header, "malformed header: empty file");
    std::istringstream header(line);
    long long d = 0;
    long long n = 0;
    long long degree = 0;
    std::string extra;
    if (!(header >> d >> n >> degree) || (header >> extra) || d < 2 || n < 1 || degree < 0)
        throw RuleParseError(RuleParseErrorKind::malformed_header, "malformed header: expected 'd N degree'");

    WeightedPoints points(static_cast<int>(d));
    Point node(static_cast<std::size_t>(d) + 1);
    CompensatedSum total;
    for (long long i = 0; i < n; ++i) {
        if (!std::getline(in, line))
            throw RuleParseError(RuleParseErrorKind::malformed_row,
                                 "malformed row: expected " + std::to_string(n) + " rows, got " + std::to_string(i));
        std::istringstream row(line);
        double w = 0.0;
        for (auto& c : node)
            if (!(row >> c))
                throw RuleParseError(RuleParseErrorKind::malformed_row, "malformed row " + std::to_string(i + 1));
        if (!(row >> w) || (row >> extra))
            throw RuleParseError(RuleParseErrorKind::malformed_row, "malformed row " + std::to_string(i + 1));
        if (!is_unit(node))
            throw RuleParseError(RuleParseErrorKind::non_unit_node,
                                 "non-unit node in row " + std::to_string(i + 1));
        if (!(w > 0.0))
            throw RuleParseError(RuleParseErrorKind::non_positive_weight,
                                 "non-positive weight in row " + std::to_string(i + 1));
        points.push_back(node, w);
        total += w;
    }
    if (std::abs(total.value() - 1.0) > file_weight_sum_tolerance)
        throw RuleParseError(RuleParseErrorKind::weight_normalization,
                             "weight normalization: weights sum to " + std::to_string(total.value()));
    // Renormalize the last ulps so the in-memory invariant holds.
    points.scale_weights(1.0 / total.value());
    return CubatureRule(std::move(points), static_cast<int>(degree));
}

inline void save_rule(const CubatureRule& rule, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw RuleParseError(RuleParseErrorKind::io, "cannot open '" + path + "' for writing");
    write_rule(out, rule);
    if (!out)
        throw RuleParseError(RuleParseErrorKind::io, "write to '" + path + "' failed");
}

inline CubatureRule load_rule(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw RuleParseError(RuleParseErrorKind::io, "cannot open '" + path + "'");
    return read_rule(in);
}

struct MzReport {
    double ratio_max = 0.0;
    double ratio_min = std::numeric_limits<double>::infinity();
    int trials = 0;
};

struct MzOptions {
    int m = 0;                       ///< degree parameter of the sampling inequality
    double p1 = 2.0;
    int trials = 10;
    std::optional<int> poly_degree;  ///< degree of the random test polynomials; defaults to m
    int poles = 3;                   ///< number of kernel centres per test polynomial
    unsigned long long seed = 31ULL;
};

/// Random polynomial sum_i sum_{l<=degree} a_{il} K_l(q_i, .) with a few random
/// centres q_i.
struct RandomZonalSum {
    GegenbauerOrder order;
    std::vector<Point> centres;
    std::vector<std::vector<double>> coeffs; // Gegenbauer coefficients per centre

    [[nodiscard]] double operator()(std::span<const double> x) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < centres.size(); ++i)
            s += gegenbauer_series(order, coeffs[i], clamped_cosine(centres[i], x));
        return s;
    }
};

template <class Rng>
RandomZonalSum random_zonal_sum(int d, int degree, int centres, Rng& rng)
{
    RandomZonalSum P{GegenbauerOrder::for_sphere(d), {}, {}};
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (int i = 0; i < centres; ++i) {
        P.centres.push_back(random_unit_vector(d, rng));
        std::vector<double> c(static_cast<std::size_t>(degree) + 1);
        for (int ell = 0; ell <= degree; ++ell)
            c[static_cast<std::size_t>(ell)] = coef(rng) * addition_factor(P.order, ell) /
                                               static_cast<double>(dim_harmonic(d, ell));
        P.coeffs.push_back(std::move(c));
    }
    return P;
}

/// Ratio [sum_j W_j |P(y_j)|^p1] / [(m/n)^d int |P|^p1] maximized over random
/// P, where n is the certified degree of `rule`. `reference` integrates |P|^p1.
inline MzReport mz_spot_check(const CubatureRule& rule, const MzOptions& options, const WeightedPoints& reference)
{
    if (!rule.certified())
        throw std::invalid_argument("mz_spot_check: rule must be certified");
    const int n = *rule.certified_degree();
    if (options.m < n || n < 1)
        throw std::invalid_argument("mz_spot_check: need m >= n >= 1");
    if (!(options.p1 > 0.0))
        throw std::invalid_argument("mz_spot_check: p1 must be positive");
    const int degree = options.poly_degree.value_or(options.m);
    std::mt19937_64 rng(options.seed);
    MzReport report;
    const double scale = std::pow(static_cast<double>(options.m) / n, rule.d());
    for (int trial = 0; trial < options.trials; ++trial) {
        const RandomZonalSum P = random_zonal_sum(rule.d(), degree, options.poles, rng);
        CompensatedSum discrete;
        for (std::size_t j = 0; j < rule.size(); ++j)
            discrete += rule.weight(j) * std::pow(std::abs(P(rule.node(j))), options.p1);
        CompensatedSum integral;
        for (std::size_t j = 0; j < reference.size(); ++j)
            integral += reference.weight(j) * std::pow(std::abs(P(reference.point(j))), options.p1);
        const double ratio = discrete.value() / (scale * integral.value());
        report.ratio_max = std::max(report.ratio_max, ratio);
        report.ratio_min = std::min(report.ratio_min, ratio);
        ++report.trials;
    }
    return report;
}

/// S^2 convenience: the reference is a product rule of degree p1 * degree when
/// p1 is an even integer (exact), otherwise a dense product rule.
inline MzReport mz_spot_check(const CubatureRule& rule, const MzOptions& options)
{
    if (rule.d() != 2)
        throw std::invalid_argument("mz_spot_check: pass a reference rule for d != 2");
    const int degree = options.poly_degree.value_or(options.m);
    const bool even_power = options.p1 == std::floor(options.p1) && static_cast<long long>(options.p1) % 2 == 0;
    const int ref_degree = even_power ? static_cast<int>(options.p1) * degree
                                      : std::max(64, static_cast<int>(std::ceil(8.0 * options.p1 * degree)));
    const CubatureRule reference = product_rule_s2(ref_degree);
    return mz_spot_check(rule, options, reference.points());
}

} // namespace sphfilter
