#include <sphfilter/experiments.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sphfilter;

namespace {

std::filesystem::path fresh_dir(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("sphfilter_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST(Csv, Format)
{
    std::vector<ExperimentRecord> records{
        {"norms", "vp", 2, 8, 0, std::nullopt, std::nullopt, ValueKind::operator_norm, 2.5},
        {"converge_fully_discrete", "step", 3, 16, 408, 2.0, 1.5, ValueKind::lp_error, 0.1},
        {"x", "smooth", 2, 0, 0, infinity_norm, std::nullopt, ValueKind::slope, -1.25},
    };
    std::ostringstream out;
    write_csv(out, records);
    EXPECT_EQ(out.str(), "experiment,filter,d,L,N,p,s,value_kind,value\n"
                         "norms,vp,2,8,0,,,operator_norm,2.5\n"
                         "converge_fully_discrete,step,3,16,408,2,1.5,lp_error,0.10000000000000001\n"
                         "x,smooth,2,0,0,inf,,slope,-1.25\n");
}

TEST(Csv, RealsRoundTrip)
{
    for (double x : {1.0 / 3.0, 2.0 / 7.0, 1e-300, 123456.789})
        EXPECT_EQ(std::stod(format_real(x)), x);
}

TEST(Gnuplot, ScriptNamesEachCurve)
{
    std::vector<ExperimentRecord> records{
        {"norms", "vp", 2, 8, 0, std::nullopt, std::nullopt, ValueKind::operator_norm, 2.5},
        {"norms", "vp", 2, 16, 0, std::nullopt, std::nullopt, ValueKind::operator_norm, 2.6},
        {"norms_discrete", "vp", 2, 8, 300, std::nullopt, std::nullopt, ValueKind::operator_norm, 2.4},
    };
    std::ostringstream out;
    write_gnuplot_script(out, "data.csv", records);
    const std::string script = out.str();
    EXPECT_NE(script.find("set logscale xy"), std::string::npos);
    EXPECT_NE(script.find("title 'norms vp'"), std::string::npos);
    EXPECT_NE(script.find("title 'norms_discrete vp'"), std::string::npos);
    EXPECT_NE(script.find("'data.csv'"), std::string::npos);
}

TEST(SlopeFit, ExactPowerLaw)
{
    const std::vector<int> Ls{8, 16, 32, 64};
    std::vector<double> values;
    for (int L : Ls)
        values.push_back(7.0 * std::pow(L, -2.5));
    EXPECT_NEAR(*fit_loglog_slope(Ls, values), -2.5, 1e-12);
}

TEST(SlopeFit, IgnoresValuesBelowFloor)
{
    const std::vector<int> Ls{8, 16, 32, 64};
    const std::vector<double> values{1e-2, 1e-3, 1e-16, 0.0};
    EXPECT_NEAR(*fit_loglog_slope(Ls, values), -std::log2(10.0), 1e-12);
    EXPECT_FALSE(fit_loglog_slope(std::vector<int>{8, 16}, std::vector<double>{1e-20, 1e-20}).has_value());
    EXPECT_THROW(fit_loglog_slope(std::vector<int>{8}, std::vector<double>{}), std::invalid_argument);
}

TEST(RuleProvider, GeneratesCertifiedProductRules)
{
    RuleProvider rules(2, std::nullopt);
    const CubatureRule& rule = rules.rule_for(4);
    EXPECT_TRUE(rule.certified_for(11));
    EXPECT_EQ(rule.size(), 72u);
    EXPECT_EQ(&rules.rule_for(4), &rule);
    RuleProvider higher(3, std::nullopt);
    EXPECT_THROW(higher.rule_for(2), std::invalid_argument);
}

TEST(RuleProvider, LoadsDirectoryAndPicksSmallestQualifyingRule)
{
    const auto dir = fresh_dir("rules_ok");
    save_rule(product_rule_s2(11), (dir / "r11.rule").string());
    save_rule(product_rule_s2(17), (dir / "r17.rule").string());
    save_rule(product_rule_s2(23), (dir / "r23.rule").string());
    std::ofstream(dir / "notes.txt") << "ignored\n";
    RuleProvider rules(2, dir);
    EXPECT_EQ(rules.rule_for(4).size(), product_rule_s2(11).size());
    EXPECT_EQ(rules.rule_for(5).size(), product_rule_s2(17).size());
    EXPECT_EQ(rules.rule_for(8).size(), product_rule_s2(23).size());
    EXPECT_THROW(rules.rule_for(9), UncertifiedRuleError);
}

TEST(RuleProvider, MislabelledRuleIsNotCertified)
{
    const auto dir = fresh_dir("rules_mislabelled");
    {
        std::ofstream out(dir / "fake.rule");
        const CubatureRule rule = product_rule_s2(11);
        out << "2 " << rule.size() << " 23\n";
        out.precision(17);
        for (std::size_t i = 0; i < rule.size(); ++i)
            out << rule.node(i)[0] << ' ' << rule.node(i)[1] << ' ' << rule.node(i)[2] << ' ' << rule.weight(i)
                << '\n';
    }
    RuleProvider rules(2, dir);
    EXPECT_THROW(rules.rule_for(8), UncertifiedRuleError);
}

TEST(RuleProvider, Errors)
{
    EXPECT_THROW(RuleProvider(2, std::filesystem::path("/nonexistent/sphfilter")), RuleParseError);
    const auto dir = fresh_dir("rules_bad");
    std::ofstream(dir / "bad.rule") << "2 1 0\n0 0 1 -1\n";
    EXPECT_THROW(RuleProvider(2, dir), RuleParseError);
}

TEST(RunNorms, SortedAndComplete)
{
    NormsConfig cfg;
    cfg.filter = "vp";
    cfg.Ls = {16, 4, 8};
    cfg.fully_discrete = true;
    cfg.probes = 20;
    const auto records = run_norms(cfg);
    ASSERT_EQ(records.size(), 6u);
    EXPECT_EQ(records[0].L, 4);
    EXPECT_EQ(records[1].L, 8);
    EXPECT_EQ(records[2].L, 16);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(records[i].experiment, "norms");
        EXPECT_EQ(records[i].N, 0u);
        EXPECT_EQ(records[i + 3].experiment, "norms_discrete");
        EXPECT_EQ(records[i + 3].N, product_rule_s2(3 * records[i].L - 1).size());
        EXPECT_TRUE(std::isfinite(records[i].value));
    }
    cfg.filter = "bogus";
    EXPECT_THROW(run_norms(cfg), std::invalid_argument);
}

TEST(RunConverge, AppendsSlopeRows)
{
    ConvergeConfig cfg;
    cfg.filter = "vp";
    cfg.s = 2.0;
    cfg.p = 2.0;
    cfg.Lambda = 256;
    cfg.Ls = {4, 8};
    cfg.grid = ErrorGrid::meridian;
    const auto records = run_converge(cfg);
    ASSERT_EQ(records.size(), 6u);
    EXPECT_EQ(records[4].experiment, "converge_semidiscrete_slope");
    EXPECT_EQ(records[4].value_kind, ValueKind::slope);
    EXPECT_EQ(records[5].experiment, "converge_fully_discrete_slope");
    EXPECT_LT(records[4].value, -2.0);
    EXPECT_GT(records[2].value, 0.0);
}

TEST(Identities, DeterministicAndTight)
{
    const Filter h = make_hermite(1);
    const IdentityReport a = run_identities(h, 8, 2, 42);
    const IdentityReport b = run_identities(h, 8, 2, 42);
    EXPECT_EQ(a.summation_by_parts, b.summation_by_parts);
    EXPECT_EQ(a.reproduction, b.reproduction);
    EXPECT_EQ(a.telescoping, b.telescoping);
    EXPECT_LE(a.worst(), identity_tolerance);
}
