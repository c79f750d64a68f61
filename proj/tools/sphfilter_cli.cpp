// Command-line front end: operator-norm sweeps, convergence sweeps, cubature
// generation/checking and identity checks, written as CSV.
//
// Exit codes: 0 success, 2 usage error, 3 certification or identity failure,
// 4 I/O or rule-file error.

#include <sphfilter/sphfilter.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace {

constexpr int exit_usage = 2;
constexpr int exit_certification = 3;
constexpr int exit_io = 4;

double parse_p(const std::string& text)
{
    if (text == "inf" || text == "infinity")
        return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double p = std::stod(text, &used);
    if (used != text.size() || !(p >= 1.0))
        throw std::invalid_argument("--p must be a real >= 1 or 'inf'");
    return p;
}

struct Globals {
    std::string filter = "vp";
    int d = 2;
    std::vector<int> Ls;
    double s = 2.0;
    std::string p = "2";
    unsigned long long seed = 1;
    std::string out;
    std::string rule_dir;
    std::string gnuplot;
    int probes = 200;
    int panels = 0;
};

int emit(const Globals& g, const std::vector<sphfilter::ExperimentRecord>& records)
{
    if (g.out.empty()) {
        sphfilter::write_csv(std::cout, records);
    } else {
        std::ofstream file(g.out);
        if (!file) {
            std::cerr << "error: cannot write '" << g.out << "'\n";
            return exit_io;
        }
        sphfilter::write_csv(file, records);
    }
    if (!g.gnuplot.empty()) {
        std::ofstream script(g.gnuplot);
        if (!script) {
            std::cerr << "error: cannot write '" << g.gnuplot << "'\n";
            return exit_io;
        }
        sphfilter::write_gnuplot_script(script, g.out.empty() ? "results.csv" : g.out, records);
    }
    return 0;
}

std::optional<std::filesystem::path> rule_dir_of(const Globals& g)
{
    if (g.rule_dir.empty())
        return std::nullopt;
    return std::filesystem::path(g.rule_dir);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Filtered polynomial approximation and filtered hyperinterpolation on the sphere"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key=value configuration file (command-line flags take precedence)");

    Globals g;
    app.add_option("--filter", g.filter, "step, vp, hermite:r, smooth, counterexample, riesz:delta");
    app.add_option("--d", g.d, "sphere dimension")->check(CLI::Range(2, 64));
    auto* l_opt = app.add_option("--L", g.Ls, "comma-separated degree parameters")->delimiter(',');
    app.add_option("--s", g.s, "Sobolev smoothness of the test function");
    app.add_option("--p", g.p, "error norm: real >= 1 or inf");
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--out", g.out, "output file (CSV, or the rule file for 'cubature gen')");
    app.add_option("--rule-dir", g.rule_dir, "directory of *.rule cubature files");
    app.add_option("--probes", g.probes, "random probes for fully discrete norms")->check(CLI::NonNegativeNumber);
    app.add_option("--panels", g.panels, "quadrature panels for kernel L1 norms (0: 8L)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--gnuplot", g.gnuplot, "also write a gnuplot script for the CSV");

    auto* norms = app.add_subcommand("norms", "operator norms ||V_L|| over a list of L");
    bool discrete_norms = false;
    norms->add_flag("--discrete", discrete_norms, "add fully discrete lower bounds");

    auto* converge = app.add_subcommand("converge", "approximation errors for a Sobolev test function");
    double epsilon = 0.5;
    int lambda = 1024;
    std::size_t grid_points = 100000;
    bool meridian = false;
    bool semidiscrete_only = false;
    converge->add_option("--epsilon", epsilon, "excess coefficient decay")->check(CLI::NonNegativeNumber);
    converge->add_option("--lambda", lambda, "truncation degree of the test function")->check(CLI::Range(1, 1 << 16));
    converge->add_option("--grid", grid_points, "sample count for fully discrete errors")->check(CLI::PositiveNumber);
    converge->add_flag("--meridian", meridian, "sample fully discrete errors along one meridian (zonal errors)");
    converge->add_flag("--semidiscrete-only", semidiscrete_only, "skip the fully discrete operator");

    auto* cubature = app.add_subcommand("cubature", "generate or check cubature rules");
    std::string action;
    int degree = -1;
    std::string rule_file;
    int trials = 20;
    cubature->add_option("action", action, "gen or check")->required()->check(CLI::IsMember({"gen", "check"}));
    cubature->add_option("--degree", degree, "polynomial degree")->required()->check(CLI::NonNegativeNumber);
    cubature->add_option("--file", rule_file, "rule file to check");
    cubature->add_option("--trials", trials, "random probe directions")->check(CLI::PositiveNumber);

    auto* identities = app.add_subcommand("identities", "summation-by-parts, reproduction and telescoping checks");
    int r = 1;
    identities->add_option("--r", r, "difference order")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    try {
        if (*norms) {
            sphfilter::NormsConfig cfg;
            cfg.filter = g.filter;
            cfg.d = g.d;
            cfg.Ls = l_opt->count() ? g.Ls : std::vector<int>{8, 16, 32, 64, 128, 256};
            cfg.fully_discrete = discrete_norms;
            cfg.probes = g.probes;
            cfg.panels = g.panels;
            cfg.rule_dir = rule_dir_of(g);
            cfg.seed = g.seed;
            return emit(g, sphfilter::run_norms(cfg));
        }
        if (*converge) {
            sphfilter::ConvergeConfig cfg;
            cfg.filter = g.filter;
            cfg.d = g.d;
            cfg.s = g.s;
            cfg.p = parse_p(g.p);
            cfg.epsilon = epsilon;
            cfg.Lambda = lambda;
            cfg.Ls = l_opt->count() ? g.Ls : std::vector<int>{8, 16, 32};
            cfg.fully_discrete = !semidiscrete_only;
            cfg.rule_dir = rule_dir_of(g);
            cfg.grid_points = grid_points;
            cfg.grid = meridian ? sphfilter::ErrorGrid::meridian : sphfilter::ErrorGrid::equal_area;
            cfg.seed = g.seed;
            return emit(g, sphfilter::run_converge(cfg));
        }
        if (*cubature) {
            if (action == "gen") {
                if (g.d != 2) {
                    std::cerr << "error: rule generation is available for d = 2 only\n";
                    return exit_usage;
                }
                sphfilter::CubatureRule rule = sphfilter::product_rule_s2(degree);
                const auto report = sphfilter::certify(rule, degree, trials);
                if (!report.pass) {
                    std::cerr << "error: generated rule failed certification, max_defect=" << report.max_defect
                              << '\n';
                    return exit_certification;
                }
                if (g.out.empty())
                    sphfilter::write_rule(std::cout, rule);
                else
                    sphfilter::save_rule(rule, g.out);
                std::cerr << "wrote rule: d=2 N=" << rule.size() << " degree=" << degree << '\n';
                return 0;
            }
            if (rule_file.empty()) {
                std::cerr << "error: 'cubature check' needs --file\n";
                return exit_usage;
            }
            const sphfilter::CubatureRule rule = sphfilter::load_rule(rule_file);
            const auto report = sphfilter::validate_exactness(rule, degree, trials, g.seed);
            std::cout << "file=" << rule_file << " d=" << rule.d() << " N=" << rule.size() << " degree=" << degree
                      << " max_defect=" << sphfilter::format_real(report.max_defect)
                      << " worst_degree=" << report.worst_degree << " pass=" << (report.pass ? "true" : "false")
                      << '\n';
            return report.pass ? 0 : exit_certification;
        }
        if (*identities) {
            if (g.d != 2) {
                std::cerr << "error: identity checks run on S^2 (d = 2)\n";
                return exit_usage;
            }
            const sphfilter::Filter h = sphfilter::filter_from_name(g.filter, g.d);
            const std::vector<int> Ls = l_opt->count() ? g.Ls : std::vector<int>{8};
            bool ok = true;
            for (int L : Ls) {
                const auto report = sphfilter::run_identities(h, L, r, g.seed);
                const bool pass = report.worst() <= sphfilter::identity_tolerance;
                ok = ok && pass;
                std::cout << "filter=" << h.name() << " L=" << L << " r=" << r
                          << " summation_by_parts=" << sphfilter::format_real(report.summation_by_parts)
                          << " reproduction=" << sphfilter::format_real(report.reproduction)
                          << " telescoping=" << sphfilter::format_real(report.telescoping)
                          << " pass=" << (pass ? "true" : "false") << '\n';
            }
            return ok ? 0 : exit_certification;
        }
    } catch (const sphfilter::RuleParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const sphfilter::UncertifiedRuleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_certification;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return exit_usage;
}
