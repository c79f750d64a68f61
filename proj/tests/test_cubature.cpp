#include <sphfilter/cubature.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace sphfilter;

namespace {

std::filesystem::path scratch_file(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "sphfilter_test_cubature";
    std::filesystem::create_directories(dir);
    return dir / name;
}

RuleParseErrorKind parse_error_kind(const std::string& text)
{
    std::istringstream in(text);
    try {
        (void)read_rule(in);
    } catch (const RuleParseError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no RuleParseError for:\n" << text;
    return RuleParseErrorKind::io;
}

} // namespace

TEST(ProductRule, DegreeZero)
{
    const CubatureRule rule = product_rule_s2(0);
    double total = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
        total += rule.weight(i);
    EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(ProductRule, DegreeTwoIntegratesKernelsToZero)
{
    const CubatureRule rule = product_rule_s2(2);
    EXPECT_EQ(rule.size(), 6u);
    std::mt19937_64 rng(3);
    const auto order = GegenbauerOrder::for_sphere(2);
    for (int trial = 0; trial < 10; ++trial) {
        const Point x = random_unit_vector(2, rng);
        for (int ell = 1; ell <= 2; ++ell) {
            double q = 0.0;
            for (std::size_t j = 0; j < rule.size(); ++j)
                q += rule.weight(j) * addition_factor(order, ell) *
                     gegenbauer_eval(order, ell, clamped_cosine(x, rule.node(j)));
            EXPECT_NEAR(q, 0.0, 1e-13);
        }
    }
}

TEST(ProductRule, NodeCount)
{
    EXPECT_EQ(product_rule_s2(11).size(), 72u);
    for (int t = 0; t <= 60; ++t)
        EXPECT_EQ(product_rule_s2(t).size(), static_cast<std::size_t>(((t + 2) / 2) * (t + 1)));
}

TEST(ProductRule, PositiveUnitAndNormalized)
{
    for (int t : {0, 1, 5, 23, 47}) {
        const CubatureRule rule = product_rule_s2(t);
        double total = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            EXPECT_GT(rule.weight(i), 0.0);
            EXPECT_TRUE(is_unit(rule.node(i)));
            total += rule.weight(i);
        }
        EXPECT_NEAR(total, 1.0, 1e-14);
    }
}

TEST(Exactness, CertifiesProductRulesAtTheirDegree)
{
    for (int t = 0; t <= 100; ++t) {
        CubatureRule rule = product_rule_s2(t);
        const auto report = certify(rule, t);
        EXPECT_TRUE(report.pass) << "t=" << t << " defect=" << report.max_defect;
        EXPECT_LE(report.max_defect, 1e-12) << t;
        EXPECT_TRUE(rule.certified_for(t));
        EXPECT_FALSE(rule.certified_for(t + 1));
    }
}

TEST(Exactness, FailsBeyondDegree)
{
    for (int t : {3, 7, 11, 20, 47}) {
        const auto report = validate_exactness(product_rule_s2(t), t + 2, 20);
        EXPECT_FALSE(report.pass) << t;
        EXPECT_GT(report.max_defect, 1e-6) << t;
        EXPECT_GT(report.worst_degree, t);
    }
}

TEST(Exactness, ConstantRowIsNormalization)
{
    const auto report = validate_exactness(product_rule_s2(9), 0, 5);
    EXPECT_LE(report.max_defect, 1e-14);
}

TEST(Exactness, UncertifiedAfterFailedCheck)
{
    CubatureRule rule = product_rule_s2(5);
    EXPECT_FALSE(certify(rule, 9).pass);
    EXPECT_FALSE(rule.certified());
}

TEST(Exactness, MeridianRuleIsNotCertified)
{
    // A meridian quadrature is exact for zonal integrands about its pole but
    // not for general polynomials; the random kernel probes must notice.
    const Point pole = north_pole(3);
    const WeightedPoints meridian = meridian_quadrature(pole, 8, 8);
    WeightedPoints positive(3);
    for (std::size_t i = 0; i < meridian.size(); ++i)
        if (meridian.weight(i) > 0.0)
            positive.push_back(meridian.point(i), meridian.weight(i));
    const CubatureRule rule(positive, 20);
    EXPECT_FALSE(validate_exactness(rule, 2, 20).pass);
}

TEST(RuleFile, RoundTrip)
{
    CubatureRule rule = product_rule_s2(5);
    certify(rule, 5);
    const auto path = scratch_file("roundtrip.rule");
    save_rule(rule, path.string());
    const CubatureRule loaded = load_rule(path.string());
    ASSERT_EQ(loaded.size(), rule.size());
    EXPECT_EQ(loaded.d(), 2);
    EXPECT_EQ(loaded.declared_degree(), 5);
    EXPECT_FALSE(loaded.certified());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        for (std::size_t k = 0; k < 3; ++k)
            EXPECT_NEAR(loaded.node(i)[k], rule.node(i)[k], 1e-16);
        EXPECT_NEAR(loaded.weight(i), rule.weight(i), 1e-16);
    }
}

TEST(RuleFile, Rejections)
{
    EXPECT_EQ(parse_error_kind(""), RuleParseErrorKind::malformed_header);
    EXPECT_EQ(parse_error_kind("2 1\n0 0 1 1\n"), RuleParseErrorKind::malformed_header);
    EXPECT_EQ(parse_error_kind("2 2 0 extra\n0 0 1 0.5\n0 0 -1 0.5\n"), RuleParseErrorKind::malformed_header);
    EXPECT_EQ(parse_error_kind("2 2 0\n0 0 1 0.5\n"), RuleParseErrorKind::malformed_row);
    EXPECT_EQ(parse_error_kind("2 1 0\n0 0 1\n"), RuleParseErrorKind::malformed_row);
    EXPECT_EQ(parse_error_kind("2 1 0\n0 0 1 1 7\n"), RuleParseErrorKind::malformed_row);
    EXPECT_EQ(parse_error_kind("2 1 0\n0 0.5 1 1\n"), RuleParseErrorKind::non_unit_node);
    EXPECT_EQ(parse_error_kind("2 2 0\n0 0 1 1.1\n0 0 -1 -0.1\n"), RuleParseErrorKind::non_positive_weight);
    EXPECT_EQ(parse_error_kind("2 2 0\n0 0 1 0.45\n0 0 -1 0.45\n"), RuleParseErrorKind::weight_normalization);

    std::istringstream negative("2 2 0\n0 0 1 1.1\n0 0 -1 -0.1\n");
    try {
        (void)read_rule(negative);
        FAIL();
    } catch (const RuleParseError& e) {
        EXPECT_NE(std::string(e.what()).find("non-positive weight"), std::string::npos);
    }
    std::istringstream short_sum("2 2 0\n0 0 1 0.45\n0 0 -1 0.45\n");
    try {
        (void)read_rule(short_sum);
        FAIL();
    } catch (const RuleParseError& e) {
        EXPECT_NE(std::string(e.what()).find("weight normalization"), std::string::npos);
    }
    try {
        (void)load_rule((std::filesystem::temp_directory_path() / "sphfilter_no_such_file.rule").string());
        FAIL();
    } catch (const RuleParseError& e) {
        EXPECT_EQ(e.kind(), RuleParseErrorKind::io);
    }
}

TEST(RuleFile, ToleratesPrintedWeightRounding)
{
    std::istringstream in("2 2 1\n0 0 1 0.5000000001\n0 0 -1 0.5\n");
    const CubatureRule rule = read_rule(in);
    EXPECT_NEAR(rule.weight(0) + rule.weight(1), 1.0, 1e-15);
}

TEST(CubatureRule, ConstructorEnforcesInvariants)
{
    WeightedPoints bad_weight(2);
    bad_weight.push_back(Point{0, 0, 1}, 1.0);
    bad_weight.push_back(Point{0, 0, -1}, 0.0);
    EXPECT_THROW(CubatureRule(bad_weight, 0), std::invalid_argument);
    WeightedPoints bad_sum(2);
    bad_sum.push_back(Point{0, 0, 1}, 0.6);
    EXPECT_THROW(CubatureRule(bad_sum, 0), std::invalid_argument);
    EXPECT_THROW(CubatureRule(WeightedPoints(2), 0), std::invalid_argument);
}

TEST(Sampling, HypothesisCaseRatioIsOne)
{
    for (int n : {6, 11, 20}) {
        CubatureRule rule = product_rule_s2(n);
        ASSERT_TRUE(certify(rule, n).pass);
        MzOptions opts;
        opts.m = n;
        opts.p1 = 2.0;
        opts.poly_degree = n / 2;
        opts.trials = 10;
        const MzReport report = mz_spot_check(rule, opts);
        EXPECT_NEAR(report.ratio_max, 1.0, 1e-10) << n;
        EXPECT_NEAR(report.ratio_min, 1.0, 1e-10) << n;
        EXPECT_EQ(report.trials, 10);
    }
}

TEST(Sampling, LargerPolynomialDegreeStaysBounded)
{
    CubatureRule rule = product_rule_s2(12);
    ASSERT_TRUE(certify(rule, 12).pass);
    for (double p1 : {1.0, 2.0}) {
        MzOptions opts;
        opts.m = 24;
        opts.p1 = p1;
        opts.trials = 5;
        const MzReport report = mz_spot_check(rule, opts);
        EXPECT_TRUE(std::isfinite(report.ratio_max));
        EXPECT_GT(report.ratio_min, 0.0);
        EXPECT_LT(report.ratio_max, 1e3);
    }
}

TEST(Sampling, RequiresCertifiedRule)
{
    MzOptions opts;
    opts.m = 4;
    EXPECT_THROW(mz_spot_check(product_rule_s2(4), opts), std::invalid_argument);
}
