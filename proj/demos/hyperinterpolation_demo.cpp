// Approximates a smooth zonal function on S^2 with filtered hyperinterpolation
// and prints sup-norm errors for a few L.

#include <sphfilter/sphfilter.hpp>

#include <cstdio>

int main()
{
    using namespace sphfilter;
    const Point pole = north_pole(2);
    const ZonalExpansion f = make_test_function(SobolevProfile{2, 2.0, 0.5, 256}, pole);
    const auto fe = f.evaluator();
    const Filter h = make_vp();
    const WeightedPoints samples = meridian_quadrature(pole, 128, 8);

    std::printf("%4s %8s %14s %14s\n", "L", "N", "||V_L||", "sup error");
    for (int L : {4, 8, 16}) {
        CubatureRule rule = product_rule_s2(3 * L - 1);
        certify(rule, 3 * L - 1);
        const auto approx = apply_fully_discrete(h, L, rule, fe);
        std::printf("%4d %8zu %14.6f %14.6e\n", L, rule.size(), operator_norm_semidiscrete(h, L, 2),
                    lp_error(f, approx, infinity_norm, samples));
    }
}
