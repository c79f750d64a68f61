#include <sphfilter/zonal_kernel.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace sphfilter;

TEST(BuildKernel, Coefficients)
{
    const ZonalKernel step = build_kernel(make_step(), 1, 2);
    ASSERT_EQ(step.coeffs().size(), 2u);
    EXPECT_DOUBLE_EQ(step.coeffs()[0], 1.0);
    EXPECT_DOUBLE_EQ(step.coeffs()[1], 3.0);

    const ZonalKernel vp = build_kernel(make_vp(), 2, 2);
    const std::vector<double> expected{1.0, 3.0, 5.0, 3.5};
    ASSERT_EQ(vp.coeffs().size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
        EXPECT_DOUBLE_EQ(vp.coeffs()[i], expected[i]);

    EXPECT_DOUBLE_EQ(build_kernel(make_smooth(), 1, 3).coeffs()[0], 1.0);
    EXPECT_THROW(build_kernel(make_vp(), 0, 2), std::invalid_argument);
}

TEST(BuildKernel, RecoversFilterValues)
{
    const int L = 4;
    for (const Filter& h : {make_vp(), make_hermite(2), make_smooth(), make_counterexample(2)})
        for (int d : {2, 3, 5}) {
            const ZonalKernel K = build_kernel(h, L, d);
            const auto order = GegenbauerOrder::for_sphere(d);
            for (int ell = 0; ell <= 8; ++ell) {
                const double c = ell < static_cast<int>(K.coeffs().size()) ? K.coeffs()[static_cast<std::size_t>(ell)] : 0.0;
                EXPECT_NEAR(c / addition_factor(order, ell), h(static_cast<double>(ell) / L), 1e-15);
            }
        }
}

TEST(EvalKernel, Examples)
{
    const ZonalKernel K = build_kernel(make_step(), 1, 2);
    EXPECT_DOUBLE_EQ(eval_kernel_cos(K, 1.0), 4.0);
    const Point x{1.0, 0.0, 0.0};
    const Point y{0.0, 1.0, 0.0};
    EXPECT_DOUBLE_EQ(eval_kernel_points(K, x, y), 1.0);
    EXPECT_DOUBLE_EQ(eval_kernel_points(K, x, x), 4.0);
    EXPECT_THROW(eval_kernel_points(K, x, Point{0.0, 2.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(eval_kernel_points(K, x, Point{0.0, 1.0}), std::invalid_argument);
}

TEST(EvalKernel, DiagonalIsDimensionSum)
{
    for (const Filter& h : {make_step(), make_vp(), make_hermite(1), make_smooth()})
        for (int d : {2, 3, 4, 7})
            for (int L : {1, 2, 5, 16}) {
                double expected = 0.0;
                for (int ell = 0; ell < 2 * L; ++ell)
                    expected += h(static_cast<double>(ell) / L) * static_cast<double>(dim_harmonic(d, ell));
                const double value = eval_kernel_cos(build_kernel(h, L, d), 1.0);
                EXPECT_NEAR(value, expected, 1e-11 * expected) << h.name() << " d=" << d << " L=" << L;
            }
}

TEST(EvalKernel, AdditionFactorTimesValueAtOneIsDimension)
{
    for (int d = 2; d <= 9; ++d) {
        const auto order = GegenbauerOrder::for_sphere(d);
        for (int ell = 0; ell <= 60; ++ell) {
            const double z = static_cast<double>(dim_harmonic(d, ell));
            EXPECT_NEAR(addition_factor(order, ell) * gegenbauer_at_one(order, ell), z, 1e-12 * z);
        }
    }
}

TEST(EvalKernel, SymmetricInArguments)
{
    std::mt19937_64 rng(5);
    const ZonalKernel K = build_kernel(make_vp(), 6, 3);
    for (int i = 0; i < 50; ++i) {
        const Point x = random_unit_vector(3, rng);
        const Point y = random_unit_vector(3, rng);
        EXPECT_EQ(eval_kernel_points(K, x, y), eval_kernel_points(K, y, x));
    }
}

TEST(KernelL1Norm, ConstantKernel)
{
    for (int d : {2, 3, 6}) {
        const ZonalKernel one(d, 1, {1.0}, "constant");
        EXPECT_NEAR(kernel_l1_norm(one), 1.0, 1e-14);
    }
}

TEST(KernelL1Norm, StepFilterDegreeOneOnTwoSphere)
{
    // (1/2) int_{-1}^{1} |1 + 3t| dt = 5/3.
    EXPECT_NEAR(kernel_l1_norm(build_kernel(make_step(), 1, 2)), 5.0 / 3.0, 1e-14);
}

TEST(KernelL1Norm, HighPrecisionReferenceValues)
{
    // 20-digit reference values computed with mpmath by splitting the interval
    // at the real roots of the kernel profile.
    EXPECT_NEAR(kernel_l1_norm(build_kernel(make_step(), 1, 3)), 1.8559734676794569528, 1e-13);
    EXPECT_NEAR(kernel_l1_norm(build_kernel(make_vp(), 2, 2)), 1.9185812428377030177, 1e-13);
}

TEST(KernelL1Norm, PanelDoublingConverges)
{
    for (const Filter& h : {make_step(), make_vp(), make_hermite(1), make_smooth(), make_counterexample(2)})
        for (int d : {2, 3})
            for (int L : {4, 16, 64}) {
                const ZonalKernel K = build_kernel(h, L, d);
                const double base = kernel_l1_norm(K);
                const double fine = kernel_l1_norm(K, 16 * L, 8);
                EXPECT_LT(std::abs(base - fine), 1e-6 * fine) << h.name() << " d=" << d << " L=" << L;
            }
}

TEST(KernelL1Norm, ValleePoussinPlateau)
{
    const double a = kernel_l1_norm(build_kernel(make_vp(), 64, 2));
    const double b = kernel_l1_norm(build_kernel(make_vp(), 128, 2));
    EXPECT_LT(std::abs(a - b), 0.05 * a);
}

TEST(KernelL1Norm, BoundedBelowByIntegralOfKernel)
{
    // int Phi_L = c_0 = 1, so the L1 norm is at least 1.
    for (int L : {1, 3, 10})
        EXPECT_GE(kernel_l1_norm(build_kernel(make_smooth(), L, 4)), 1.0 - 1e-12);
}

TEST(IntegrateZonal, PowersOfCosineMatchMoments)
{
    // On S^2 the normalized measure in t is dt/2, so int |t|^k = 1/(k+1).
    for (int k = 0; k <= 6; ++k)
        EXPECT_NEAR(integrate_zonal_abs(2, [k](double t) { return std::pow(t, k); }, 16, 8), 1.0 / (k + 1), 1e-14);
    // int |t| on S^3: weight sin^2; int |cos| sin^2 / int sin^2 = (2/3) / (pi/2).
    EXPECT_NEAR(integrate_zonal_abs(3, [](double t) { return t; }, 16, 8), 4.0 / (3.0 * std::numbers::pi), 1e-14);
    EXPECT_THROW(integrate_zonal_abs(1, [](double) { return 1.0; }, 4, 4), std::invalid_argument);
}

TEST(ZonalKernel, RejectsNonFiniteCoefficients)
{
    EXPECT_THROW(ZonalKernel(2, 1, {1.0, std::nan("")}, "bad"), std::invalid_argument);
}
