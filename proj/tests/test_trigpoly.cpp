#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "trigrec/kernels.hpp"
#include "trigrec/random.hpp"
#include "trigrec/trigpoly.hpp"

using namespace trigrec;

namespace {

const Exponent inf = Exponent::infinity();

cplx direct_sum(const TrigPoly& f, double x) {
    cplx s{0.0};
    for (int k = -f.degree(); k <= f.degree(); ++k) s += f.coeff(k) * std::polar(1.0, k * x);
    return s;
}

}  // namespace

TEST(TrigPoly, ConstantEvaluatesToItself) {
    const TrigPoly one = TrigPoly::constant(1.0);
    for (double x : {0.0, 0.3, 2.0, 6.0}) EXPECT_NEAR(std::abs(one(x) - 1.0), 0.0, 1e-15);
}

TEST(TrigPoly, DirichletAtZeroAndAtNode) {
    const TrigPoly d2 = make_kernel(kernel::Dirichlet{2});
    EXPECT_NEAR(d2(0.0).real(), 5.0, 1e-14);
    EXPECT_NEAR(std::abs(d2(two_pi / 5.0)), 0.0, 1e-14);
}

TEST(TrigPoly, EvaluationMatchesDirectSummation) {
    Rng rng(3);
    const TrigPoly f = random_trigpoly(40, rng);
    for (double x : {0.0, 0.1, 1.7, 3.3, 6.2}) EXPECT_LT(std::abs(f(x) - direct_sum(f, x)), 1e-12);
}

TEST(TrigPoly, RealFlagFollowsConjugateSymmetry) {
    Rng rng(4);
    EXPECT_TRUE(random_real_trigpoly(10, rng).is_real());
    EXPECT_FALSE(TrigPoly::exponential(2).is_real());
    const TrigPoly c = TrigPoly::generate(1, [](int k) { return k == 0 ? cplx{1.0} : cplx{0.5}; });
    EXPECT_TRUE(c.is_real());
}

TEST(TrigPoly, ArithmeticAndProduct) {
    const TrigPoly a = TrigPoly::exponential(1), b = TrigPoly::exponential(-2, 3.0);
    const TrigPoly p = multiply(a, b);
    EXPECT_EQ(p.degree(), 3);
    EXPECT_NEAR(std::abs(p.coeff(-1) - 3.0), 0.0, 1e-15);
    const TrigPoly s = a + b - a;
    EXPECT_LT(max_coeff_diff(s, b), 1e-15);
    EXPECT_THROW(TrigPoly(-1), Error);
}

TEST(TrigPoly, TranslationShiftsArgument) {
    Rng rng(5);
    const TrigPoly f = random_trigpoly(12, rng);
    const TrigPoly g = f.translated(0.7);
    EXPECT_LT(std::abs(g(1.9) - f(1.9 - 0.7)), 1e-12);
}

TEST(GridFunction, ExponentialSamplesAndRoundTrip) {
    const TrigPoly e3 = TrigPoly::exponential(3);
    const GridFunction g = to_samples(e3, 8);
    for (int j = 0; j < 8; ++j) EXPECT_LT(std::abs(g.samples[j] - std::polar(1.0, 3 * two_pi * j / 8)), 1e-14);
    EXPECT_LT(max_coeff_diff(from_samples(g, 3), e3), 1e-14);
}

TEST(GridFunction, RandomRoundTripAtExactThreshold) {
    Rng rng(6);
    const TrigPoly f = random_trigpoly(16, rng);
    EXPECT_LE(max_coeff_diff(from_samples(to_samples(f, 33), 16), f), 1e-12);
}

TEST(GridFunction, AliasingIsRejected) {
    const GridFunction g = to_samples(TrigPoly::exponential(3), 4);
    try {
        from_samples(g, 1);
        FAIL() << "expected aliasing error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("aliasing risk"), std::string::npos);
    }
    EXPECT_THROW(from_samples(GridFunction{4, std::vector<cplx>(4), std::nullopt}, 2), Error);
}

TEST(GridFunction, BivariateRoundTrip) {
    Rng rng(7);
    const BivariateTrigPoly f = random_bivariate(5, 7, rng);
    const BivariateTrigPoly back = from_samples(to_samples(f, 11, 16), 5, 7);
    EXPECT_LT(max_coeff_diff(back, f), 1e-12);
    EXPECT_THROW(from_samples(to_samples(f, 11, 16), 6, 7), Error);
}

TEST(Bivariate, TensorAndShiftKernelCoefficients) {
    Rng rng(8);
    const TrigPoly u = random_trigpoly(3, rng), v = random_trigpoly(4, rng);
    const BivariateTrigPoly t = BivariateTrigPoly::tensor(u, v);
    for (int k = -3; k <= 3; ++k) {
        for (int l = -4; l <= 4; ++l) EXPECT_LT(std::abs(t.coeff(k, l) - u.coeff(k) * v.coeff(l)), 1e-15);
    }
    const BivariateTrigPoly s = shift_kernel(u);
    for (int k = -3; k <= 3; ++k) {
        for (int l = -3; l <= 3; ++l) {
            const cplx expect = l == -k ? u.coeff(k) : cplx{0.0};
            EXPECT_EQ(s.coeff(k, l), expect);
        }
    }
    EXPECT_LT(std::abs(s(1.0, 0.4) - u(0.6)), 1e-13);
}

TEST(Bivariate, SectionsAndMean) {
    Rng rng(9);
    const BivariateTrigPoly f = random_bivariate(4, 3, rng);
    EXPECT_LT(std::abs(f.section_x(0.8)(1.3) - f(1.3, 0.8)), 1e-13);
    EXPECT_LT(std::abs(f.section_y(1.3)(0.8) - f(1.3, 0.8)), 1e-13);
    const TrigPoly m = f.mean_over_x();
    for (int l = -3; l <= 3; ++l) EXPECT_EQ(m.coeff(l), f.coeff(0, l));
    EXPECT_LT(std::abs(f.transposed()(0.8, 1.3) - f(1.3, 0.8)), 1e-13);
}

TEST(Convolve, MeanProjection) {
    Rng rng(10);
    const TrigPoly f = random_trigpoly(6, rng);
    const TrigPoly c = convolve(f, TrigPoly::constant(1.0));
    EXPECT_EQ(c.degree(), 0);
    EXPECT_EQ(c.coeff(0), f.coeff(0));
}

TEST(Convolve, ValleePoussinReproducesT_n) {
    Rng rng(11);
    for (int n : {4, 16}) {
        const TrigPoly t = random_trigpoly(n, rng);
        EXPECT_LT(max_coeff_diff(convolve(make_kernel(kernel::ValleePoussin{n}), t).with_degree(n), t), 1e-14);
    }
}

TEST(Convolve, DirichletTruncates) {
    Rng rng(12);
    const TrigPoly f = random_trigpoly(20, rng);
    const TrigPoly s = convolve(make_kernel(kernel::Dirichlet{7}), f);
    for (int k = -20; k <= 20; ++k) {
        const cplx expect = std::abs(k) <= 7 ? f.coeff(k) : cplx{0.0};
        EXPECT_LT(std::abs(s.coeff(k) - expect), 1e-15);
    }
}

TEST(Convolve, BivariateMultipliesCoefficients) {
    Rng rng(13);
    const BivariateTrigPoly f = random_bivariate(3, 3, rng), g = random_bivariate(2, 4, rng);
    const BivariateTrigPoly c = convolve(f, g);
    EXPECT_LT(std::abs(c.coeff(1, -2) - f.coeff(1, -2) * g.coeff(1, -2)), 1e-15);
    EXPECT_EQ(c.coeff(3, 0), cplx{0.0});
}

TEST(Norm, UnimodularExponentials) {
    for (int k : {0, 1, 5}) {
        for (Exponent p : {Exponent(1.0), Exponent(2.0), Exponent(3.5), inf}) {
            EXPECT_NEAR(norm(TrigPoly::exponential(k), p), 1.0, 1e-12);
        }
    }
}

TEST(Norm, FejerNormsAndCosine) {
    for (int j : {2, 4, 8, 16, 64}) {
        const TrigPoly kj = make_kernel(kernel::Fejer{j});
        EXPECT_NEAR(norm(kj, Exponent(1.0)), 1.0, 1e-10);
        EXPECT_NEAR(norm(kj, inf), j, 1e-10);
    }
    const TrigPoly c = TrigPoly::generate(1, [](int k) { return k == 0 ? 0.0 : 0.5; });
    EXPECT_NEAR(norm(c, Exponent(2.0)), std::sqrt(0.5), 1e-12);
    EXPECT_THROW(norm(c, Exponent(2.0), 2), Error);
}

TEST(Norm, ParsevalRandom) {
    Rng rng(14);
    for (int n : {1, 17, 128, 512}) {
        const TrigPoly f = random_trigpoly(n, rng);
        const double lhs = std::pow(norm(f, Exponent(2.0)), 2);
        EXPECT_NEAR(lhs / f.l2_norm_squared(), 1.0, 1e-10);
    }
}

TEST(Norm, HolderMonotonicity) {
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        const TrigPoly f = random_trigpoly(1 + trial, rng);
        double prev = 0.0;
        for (Exponent p : {Exponent(1.0), Exponent(2.0), Exponent(4.0), inf}) {
            const double v = norm(f, p);
            EXPECT_LE(prev, v * (1 + 1e-12));
            prev = v;
        }
    }
}

TEST(Norm, TranslationInvarianceEvenExponents) {
    Rng rng(16);
    std::uniform_real_distribution<double> u(0.0, two_pi);
    for (int trial = 0; trial < 10; ++trial) {
        const TrigPoly f = random_trigpoly(9, rng);
        const double y = u(rng);
        for (Exponent p : {Exponent(2.0), Exponent(4.0)}) {
            EXPECT_NEAR(norm(f.translated(y), p) / norm(f, p), 1.0, 1e-12);
        }
    }
}

TEST(MixedNorm, SeparableFactorization) {
    Rng rng(17);
    const TrigPoly u = random_trigpoly(3, rng), v = random_trigpoly(5, rng);
    const BivariateTrigPoly t = BivariateTrigPoly::tensor(u, v);
    for (auto [p1, p2] : {std::pair{Exponent(2.0), Exponent(2.0)}, std::pair{Exponent(4.0), inf}}) {
        const double expect = norm(u, p1, 4) * norm(v, p2, 4);
        EXPECT_NEAR(mixed_norm(t, p1, p2, NormOrder::x_first), expect, 1e-10 * expect);
        EXPECT_NEAR(mixed_norm(t, p1, p2, NormOrder::y_first), expect, 1e-10 * expect);
    }
}

TEST(MixedNorm, ShiftKernelSupInY) {
    Rng rng(18);
    const TrigPoly f = random_trigpoly(8, rng);
    const double expect = norm(f, Exponent(1.0), 4);
    EXPECT_NEAR(mixed_norm(shift_kernel(f), Exponent(1.0), inf), expect, 1e-10 * expect);
}

TEST(MixedNorm, CosineDifferenceAndFullL2) {
    const TrigPoly c = TrigPoly::generate(1, [](int k) { return k == 0 ? 0.0 : 0.5; });
    EXPECT_NEAR(mixed_norm(shift_kernel(c), Exponent(2.0), Exponent(2.0)), std::sqrt(0.5), 1e-12);
    Rng rng(19);
    const BivariateTrigPoly f = random_bivariate(6, 4, rng);
    const double full = std::sqrt(f.l2_norm_squared());
    for (auto order : {NormOrder::x_first, NormOrder::y_first}) {
        EXPECT_NEAR(mixed_norm(f, Exponent(2.0), Exponent(2.0), order), full, 1e-10 * full);
    }
}

TEST(MixedNorm, OrderMatters) {
    // int sup_y |f| dx dominates sup_y int |f| dx.
    Rng rng(20);
    const BivariateTrigPoly f = random_bivariate(4, 4, rng);
    const double starred = mixed_norm(f, Exponent(1.0), inf, NormOrder::y_first);
    const double vector = mixed_norm(f, Exponent(1.0), inf, NormOrder::x_first);
    EXPECT_GE(starred * (1 + 1e-12), vector);
    EXPECT_GT(starred, vector * 1.01);
}
