#pragma once

// Experiment sweeps behind the command-line tool: records, CSV and gnuplot
// emission, log-log slope fitting, cubature rule sourcing and the four
// commands (norms, converge, cubature, identities).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cubature.hpp"
#include "filters.hpp"
#include "operators.hpp"
#include "sobolev.hpp"
#include "sphere.hpp"
#include "zonal_expansion.hpp"

namespace sphfilter {

enum class ValueKind { operator_norm, lp_error, defect, ratio, slope };

inline const char* to_string(ValueKind kind)
{
    switch (kind) {
    case ValueKind::operator_norm:
        return "operator_norm";
    case ValueKind::lp_error:
        return "lp_error";
    case ValueKind::defect:
        return "defect";
    case ValueKind::ratio:
        return "ratio";
    case ValueKind::slope:
        return "slope";
    }
    return "unknown";
}

struct ExperimentRecord {
    std::string experiment;
    std::string filter;
    int d = 2;
    int L = 0;
    std::size_t N = 0;  ///< cubature size; 0 for semi-discrete quantities
    std::optional<double> p;
    std::optional<double> s;
    ValueKind value_kind = ValueKind::operator_norm;
    double value = 0.0;
};

inline constexpr const char* csv_header = "experiment,filter,d,L,N,p,s,value_kind,value";

inline std::string format_real(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& records)
{
    out << csv_header << '\n';
    for (const auto& r : records) {
        out << r.experiment << ',' << r.filter << ',' << r.d << ',' << r.L << ',' << r.N << ','
            << (r.p ? format_real(*r.p) : "") << ',' << (r.s ? format_real(*r.s) : "") << ','
            << to_string(r.value_kind) << ',' << format_real(r.value) << '\n';
    }
}

/// Gnuplot script drawing value against L on log-log axes, one curve per
/// (experiment, filter, N > 0) group of the given CSV file.
inline void write_gnuplot_script(std::ostream& out, const std::string& csv_path,
                                 const std::vector<ExperimentRecord>& records)
{
    std::vector<std::string> groups;
    for (const auto& r : records) {
        if (r.value_kind == ValueKind::slope)
            continue;
        const std::string key = r.experiment + "," + r.filter;
        if (std::find(groups.begin(), groups.end(), key) == groups.end())
            groups.push_back(key);
    }
    out << "set datafile separator ','\n"
        << "set logscale xy\n"
        << "set xlabel 'L'\n"
        << "set ylabel 'value'\n"
        << "set key left top\n"
        << "plot \\\n";
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto comma = groups[i].find(',');
        const std::string experiment = groups[i].substr(0, comma);
        const std::string filter = groups[i].substr(comma + 1);
        out << "  '" << csv_path << "' using ((strcol(1) eq '" << experiment << "' && strcol(2) eq '" << filter
            << "' && strcol(8) ne 'slope') ? $4 : 1/0):9 with linespoints title '" << experiment << " " << filter
            << "'" << (i + 1 < groups.size() ? ", \\\n" : "\n");
    }
}

inline constexpr double slope_fit_floor = 1e-13;

/// Least-squares slope of log(value) against log(L), ignoring values below
/// the double-precision floor. Needs two usable points.
inline std::optional<double> fit_loglog_slope(std::span<const int> Ls, std::span<const double> values,
                                              double floor = slope_fit_floor)
{
    if (Ls.size() != values.size())
        throw std::invalid_argument("fit_loglog_slope: size mismatch");
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 0; i < Ls.size(); ++i) {
        if (Ls[i] > 0 && values[i] >= floor && std::isfinite(values[i])) {
            xs.push_back(std::log(static_cast<double>(Ls[i])));
            ys.push_back(std::log(values[i]));
        }
    }
    if (xs.size() < 2)
        return std::nullopt;
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx == 0.0)
        return std::nullopt;
    return sxy / sxx;
}

/// Supplies cubature rules certified to degree 3L - 1. With a rule directory,
/// every *.rule file is loaded and certified at its declared degree and the
/// smallest qualifying rule is used. Without one, product rules are generated
/// (S^2 only).
class RuleProvider {
public:
    RuleProvider(int d, std::optional<std::filesystem::path> rule_dir, int trials = 20) : d_(d), trials_(trials)
    {
        if (!rule_dir)
            return;
        if (!std::filesystem::is_directory(*rule_dir))
            throw RuleParseError(RuleParseErrorKind::io, "rule directory '" + rule_dir->string() + "' not found");
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(*rule_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".rule")
                files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& path : files) {
            CubatureRule rule = load_rule(path.string());
            if (rule.d() != d_)
                continue;
            certify(rule, rule.declared_degree(), trials_);
            loaded_.push_back(std::move(rule));
        }
        from_files_ = true;
    }

    /// Throws UncertifiedRuleError if no certified rule reaches degree 3L - 1.
    const CubatureRule& rule_for(int L)
    {
        const int needed = 3 * L - 1;
        if (from_files_) {
            const CubatureRule* best = nullptr;
            for (const auto& rule : loaded_)
                if (rule.certified_for(needed) && (!best || rule.size() < best->size()))
                    best = &rule;
            if (!best)
                throw UncertifiedRuleError("no certified rule of degree >= " + std::to_string(needed) +
                                           " in rule directory");
            return *best;
        }
        if (d_ != 2)
            throw std::invalid_argument("rules for d != 2 must be supplied with --rule-dir");
        auto it = generated_.find(needed);
        if (it == generated_.end()) {
            CubatureRule rule = product_rule_s2(needed);
            const ExactnessReport report = certify(rule, needed, trials_);
            if (!report.pass)
                throw UncertifiedRuleError("generated product rule failed certification at degree " +
                                           std::to_string(needed));
            it = generated_.emplace(needed, std::move(rule)).first;
        }
        return it->second;
    }

private:
    int d_;
    int trials_;
    bool from_files_ = false;
    std::vector<CubatureRule> loaded_;
    std::map<int, CubatureRule> generated_;
};

struct NormsConfig {
    std::string filter = "vp";
    int d = 2;
    std::vector<int> Ls{8, 16, 32, 64};
    bool fully_discrete = false;
    int probes = 200;
    int panels = 0;  ///< 0: 8L
    std::optional<std::filesystem::path> rule_dir;
    unsigned long long seed = 1;
};

inline std::vector<ExperimentRecord> run_norms(const NormsConfig& cfg)
{
    const Filter h = filter_from_name(cfg.filter, cfg.d);
    std::vector<int> Ls = cfg.Ls;
    std::sort(Ls.begin(), Ls.end());
    std::vector<ExperimentRecord> out;
    for (int L : Ls) {
        ExperimentRecord r{"norms", h.name(), cfg.d, L, 0, std::nullopt, std::nullopt, ValueKind::operator_norm,
                           operator_norm_semidiscrete(h, L, cfg.d, cfg.panels)};
        out.push_back(r);
    }
    if (cfg.fully_discrete) {
        RuleProvider rules(cfg.d, cfg.rule_dir);
        for (int L : Ls) {
            const CubatureRule& rule = rules.rule_for(L);
            const auto estimate = operator_norm_fully_discrete(h, L, rule, cfg.probes, cfg.seed);
            out.push_back({"norms_discrete", h.name(), cfg.d, L, rule.size(), std::nullopt, std::nullopt,
                           ValueKind::operator_norm, estimate.value});
        }
    }
    return out;
}

enum class ErrorGrid { equal_area, meridian };

struct ConvergeConfig {
    std::string filter = "vp";
    int d = 2;
    double s = 2.0;
    double p = 2.0;
    double epsilon = 0.5;
    int Lambda = 1024;
    std::vector<int> Ls{8, 16, 32};
    bool fully_discrete = true;
    std::optional<std::filesystem::path> rule_dir;
    std::size_t grid_points = 100000;
    /// meridian: sample along one meridian through the pole. Exact when the
    /// error is zonal, e.g. product rules with the default north pole.
    ErrorGrid grid = ErrorGrid::equal_area;
    unsigned long long seed = 1;
};

inline std::vector<ExperimentRecord> run_converge(const ConvergeConfig& cfg)
{
    const Filter h = filter_from_name(cfg.filter, cfg.d);
    std::vector<int> Ls = cfg.Ls;
    std::sort(Ls.begin(), Ls.end());
    const Point pole = north_pole(cfg.d);
    const ZonalExpansion f = make_test_function(SobolevProfile{cfg.d, cfg.s, cfg.epsilon, cfg.Lambda}, pole);

    std::vector<ExperimentRecord> out;
    std::vector<double> semi;
    std::vector<double> full;
    for (int L : Ls) {
        const double err = lp_error(f, apply_semidiscrete(h, L, f), cfg.p);
        semi.push_back(err);
        out.push_back({"converge_semidiscrete", h.name(), cfg.d, L, 0, cfg.p, cfg.s, ValueKind::lp_error, err});
    }
    if (cfg.fully_discrete) {
        RuleProvider rules(cfg.d, cfg.rule_dir);
        const WeightedPoints samples = cfg.grid == ErrorGrid::meridian
                                           ? meridian_quadrature(pole, 256, 8)
                                           : equal_area_grid(cfg.d, cfg.grid_points, cfg.seed);
        const auto fe = f.evaluator();
        for (int L : Ls) {
            const CubatureRule& rule = rules.rule_for(L);
            const auto approx = apply_fully_discrete(h, L, rule, fe);
            const double err = lp_error(f, approx, cfg.p, samples);
            full.push_back(err);
            out.push_back({"converge_fully_discrete", h.name(), cfg.d, L, rule.size(), cfg.p, cfg.s,
                           ValueKind::lp_error, err});
        }
    }
    if (auto slope = fit_loglog_slope(Ls, semi))
        out.push_back({"converge_semidiscrete_slope", h.name(), cfg.d, 0, 0, cfg.p, cfg.s, ValueKind::slope, *slope});
    if (cfg.fully_discrete)
        if (auto slope = fit_loglog_slope(Ls, full))
            out.push_back(
                {"converge_fully_discrete_slope", h.name(), cfg.d, 0, 0, cfg.p, cfg.s, ValueKind::slope, *slope});
    return out;
}

struct IdentityReport {
    double summation_by_parts = 0.0;  ///< max relative coefficient deviation
    double reproduction = 0.0;        ///< max |P - V_{L,N} P| / ||P||_inf on random points
    double telescoping = 0.0;         ///< max coefficient deviation of sum tau_r vs V_{2^R}
    [[nodiscard]] double worst() const { return std::max({summation_by_parts, reproduction, telescoping}); }
};

inline constexpr double identity_tolerance = 1e-9;

template <class Rng>
ZonalExpansion random_expansion(int d, int degree, Rng& rng, const Point* pole = nullptr)
{
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<double> a(static_cast<std::size_t>(degree) + 1);
    for (auto& v : a)
        v = coef(rng);
    return ZonalExpansion(pole ? *pole : random_unit_vector(d, rng), std::move(a));
}

inline double max_relative_coeff_deviation(const ZonalExpansion& f, const ZonalExpansion& g)
{
    double scale = 0.0;
    double dev = 0.0;
    const int top = std::max(f.degree(), g.degree());
    for (int ell = 0; ell <= top; ++ell) {
        scale = std::max(scale, std::abs(f.coeff(ell)));
        dev = std::max(dev, std::abs(f.coeff(ell) - g.coeff(ell)));
    }
    return scale > 0.0 ? dev / scale : dev;
}

/// Summation-by-parts, reproduction and telescoping checks on S^2 with seeded
/// random inputs.
inline IdentityReport run_identities(const Filter& h, int L, int r, unsigned long long seed, int points = 200)
{
    constexpr int d = 2;
    std::mt19937_64 rng(seed);
    IdentityReport report;

    const ZonalExpansion f = random_expansion(d, 3 * L, rng);
    report.summation_by_parts =
        max_relative_coeff_deviation(apply_semidiscrete(h, L, f), summation_by_parts_apply(h, L, r, f));

    CubatureRule rule = product_rule_s2(3 * L - 1);
    if (!certify(rule, 3 * L - 1).pass)
        throw UncertifiedRuleError("product rule failed certification");
    const ZonalExpansion P = random_expansion(d, L, rng);
    const auto Pe = P.evaluator();
    const auto approx = apply_fully_discrete(h, L, rule, Pe);
    double sup = 0.0;
    double dev = 0.0;
    for (int i = 0; i < points; ++i) {
        const Point x = random_unit_vector(d, rng);
        const double v = Pe(x);
        sup = std::max(sup, std::abs(v));
        dev = std::max(dev, std::abs(v - approx(x)));
    }
    report.reproduction = sup > 0.0 ? dev / sup : dev;

    int R = 0;
    while ((1 << R) < L)
        ++R;
    ZonalExpansion sum(f.pole(), {0.0});
    for (int k = 0; k <= R; ++k)
        sum = sum + dyadic_block(h, k, f);
    const ZonalExpansion target = apply_semidiscrete(h, 1 << R, f);
    double tel = 0.0;
    for (int ell = 0; ell <= std::max(sum.degree(), target.degree()); ++ell)
        tel = std::max(tel, std::abs(sum.coeff(ell) - target.coeff(ell)));
    report.telescoping = tel;
    return report;
}

} // namespace sphfilter
