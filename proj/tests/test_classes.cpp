#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "trigrec/classes.hpp"
#include "trigrec/random.hpp"
#include "trigrec/report.hpp"

using namespace trigrec;

namespace {

const Exponent inf = Exponent::infinity();

TrigPoly cosine() {
    return TrigPoly::generate(1, [](int k) { return k == 0 ? 0.0 : 0.5; });
}

TrigPoly unit_random(int n, Exponent q, Rng& rng) {
    const TrigPoly phi = random_real_trigpoly(n, rng);
    return (1.0 / norm(phi, q)) * phi;
}

}  // namespace

TEST(WMember, ConstantIsFixed) {
    const TrigPoly f = w_member(2.0, Exponent(2.0), TrigPoly::constant(1.0));
    EXPECT_NEAR(std::abs(f(0.4) - 1.0), 0.0, 1e-15);
}

TEST(WMember, CosineCoefficientsFollowMultiplier) {
    const TrigPoly phi = std::sqrt(2.0) * cosine();
    const TrigPoly f = w_member(2.0, Exponent(2.0), phi);
    // k = 1: 1^{-2} e^{-i pi}; k = -1: e^{i pi}. So f = sqrt(2) cos(x - pi).
    EXPECT_NEAR(std::abs(f.coeff(1) - std::sqrt(2.0) * 0.5 * std::polar(1.0, -pi)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f(0.3) - std::sqrt(2.0) * std::cos(0.3 - pi)), 0.0, 1e-14);
}

TEST(WMember, NormalizesWithWarningAndRejectsDivergent) {
    std::ostringstream warn;
    const TrigPoly phi = 3.0 * TrigPoly::constant(1.0);
    const TrigPoly f = w_member(2.0, Exponent(1.0), phi, &warn);
    EXPECT_NEAR(std::abs(f.coeff(0) - 1.0), 0.0, 1e-14);
    EXPECT_NE(warn.str().find("normalizing"), std::string::npos);
    EXPECT_THROW(w_member(1.0, Exponent(2.0), TrigPoly::constant(1.0)), Error);
    EXPECT_THROW(w_member(2.0, 0.5, Exponent(2.0), Exponent(2.0), BivariateTrigPoly()), Error);
}

TEST(WMember, DyadicBlocksDecay) {
    // ||A_s f||_2 <= C 2^{-a s} with C independent of the draw.
    Rng rng(1);
    const double a = 3.0;
    for (int draw = 0; draw < 10; ++draw) {
        const TrigPoly f = w_member(a, Exponent(2.0), unit_random(64, Exponent(2.0), rng), nullptr);
        for (int s = 0; s <= 8; ++s) {
            EXPECT_LE(norm(a_block(f, s), Exponent(2.0), 4) * std::pow(2.0, a * s), 64.0 * (1 + 1e-12));
        }
    }
}

TEST(HCheck, ConstantHasUnitMargin) {
    const BivariateTrigPoly one = BivariateTrigPoly::tensor(TrigPoly::constant(1.0), TrigPoly::constant(1.0));
    const SmoothnessParams sp{1.5, 1.5, Exponent(2.0), Exponent(2.0), 2};
    EXPECT_NEAR(h_check(one, sp, HCheckMode::differences), 1.0, 1e-12);
    EXPECT_NEAR(h_check(one, sp, HCheckMode::blocks), 1.0, 1e-12);
}

TEST(HCheck, DifferencesAndBlocksAgreeOnCosineProduct) {
    const BivariateTrigPoly f = BivariateTrigPoly::tensor(cosine(), cosine());
    const SmoothnessParams sp{1.0, 1.0, Exponent(2.0), Exponent(2.0), 2};
    const double d = h_check(f, sp, HCheckMode::differences);
    const double b = h_check(f, sp, HCheckMode::blocks);
    EXPECT_GT(d, 0.0);
    EXPECT_LE(std::max(d / b, b / d), 20.0);
}

TEST(HCheck, SingleBlockExponentialsHaveBoundedMargin) {
    const SmoothnessParams sp{1.0, 1.0, Exponent(2.0), Exponent(2.0), 2};
    for (int s1 = 2; s1 <= 6; ++s1) {
        for (int s2 = 2; s2 <= 6; s2 += 2) {
            const int k1 = 1 << (s1 - 1), k2 = (1 << s2) - 1;
            const double scale = std::pow(2.0, -(sp.a1 * s1 + sp.a2 * s2));
            const BivariateTrigPoly f(k1, k2, {{k1, k2, cplx{scale}}});
            const double m = h_check(f, sp, HCheckMode::blocks);
            EXPECT_GE(m, 0.25);
            EXPECT_LE(m, std::pow(2.0, sp.a1 + sp.a2) + 1e-12);
        }
    }
}

TEST(HCheck, BlocksMarginOfRepresentativesIsUniform) {
    Rng rng(2);
    for (double a : {1.5, 2.5}) {
        const SmoothnessParams sp{a, a, Exponent(2.0), Exponent(2.0), 3};
        for (int draw = 0; draw < 50; ++draw) {
            BivariateTrigPoly phi = random_real_bivariate(12, 12, rng);
            phi = (1.0 / mixed_norm(phi, Exponent(2.0), Exponent(2.0))) * phi;
            const BivariateTrigPoly f = w_member(a, a, Exponent(2.0), Exponent(2.0), phi, nullptr);
            EXPECT_LE(h_check(f, sp, HCheckMode::blocks), std::pow(2.0, 4 * a) * (1 + 1e-12));
        }
    }
}

TEST(HCheck, ValidatesDifferenceOrder) {
    const SmoothnessParams bad{2.0, 1.0, Exponent(2.0), Exponent(2.0), 2};
    EXPECT_THROW(h_check(BivariateTrigPoly(), bad, HCheckMode::blocks), Error);
}

TEST(WorstCase, EmptyPlanOnCosineKernel) {
    const KernelClass kc{shift_kernel(cosine()), Exponent(1.0)};
    EXPECT_NEAR(worst_case_error(kc, RecoveryPlan(), inf), 1.0, 1e-12);
}

TEST(WorstCase, ReproducedKernelHasZeroError) {
    for (int n : {4, 16}) {
        const KernelClass kc{shift_kernel(make_kernel(kernel::ValleePoussin{n / 2})), Exponent(1.0)};
        EXPECT_LE(worst_case_error(kc, make_Rn_plan(n), inf), 1e-10);
    }
}

TEST(WorstCase, PeriodicFastPathMatchesGenericPath) {
    Rng rng(3);
    const TrigPoly g = random_real_trigpoly(20, rng);
    const KernelClass kc{shift_kernel(g), Exponent(1.0)};
    for (int n : {2, 5}) {
        for (const RecoveryPlan& plan : {make_Rn_plan(n), make_In_plan(n)}) {
            std::vector<double> pts(plan.points().begin(), plan.points().end());
            std::vector<TrigPoly> fs(plan.functions().begin(), plan.functions().end());
            const RecoveryPlan generic(pts, fs);
            for (Exponent q : {Exponent(1.0), Exponent(2.0)}) {
                const KernelClass c{kc.kernel, q};
                // An oversample divisible by m keeps both paths on the same nodes.
                const int os = 2 * static_cast<int>(plan.size());
                for (Exponent p : {inf, Exponent(2.0)}) {
                    const double a = worst_case_error(c, plan, p, os);
                    const double b = worst_case_error(c, generic, p, os);
                    EXPECT_NEAR(a, b, 1e-10 * b);
                }
            }
        }
    }
}

TEST(WorstCase, MatchesResidualFormulaOnGenericKernel) {
    Rng rng(4);
    const BivariateTrigPoly K = random_real_bivariate(4, 5, rng);
    const RecoveryPlan plan({0.3, 2.0, 4.4}, {random_trigpoly(3, rng), random_trigpoly(4, rng), random_trigpoly(2, rng)});
    // Residual R(x, y) = K(x, y) - sum_j K(xi_j, y) psi_j(x), assembled coefficient-wise.
    BivariateTrigPoly R = K;
    for (std::size_t j = 0; j < plan.size(); ++j) {
        R = R - BivariateTrigPoly::tensor(plan.functions()[j], K.section_y(plan.points()[j]));
    }
    const double sup_case = worst_case_error(KernelClass{K, Exponent(1.0)}, plan, inf);
    EXPECT_NEAR(sup_case, mixed_norm(R, inf, inf, NormOrder::y_first), 1e-12);
    const double l2_case = worst_case_error(KernelClass{K, Exponent(2.0)}, plan, Exponent(2.0));
    EXPECT_NEAR(l2_case, std::sqrt(R.l2_norm_squared()), 1e-10);
}

TEST(WorstCase, ExtendingWithZeroFunctionsDoesNotIncrease) {
    Rng rng(5);
    const BivariateTrigPoly K = random_real_bivariate(6, 6, rng);
    RecoveryPlan plan({1.0}, {random_trigpoly(6, rng)});
    const double base = worst_case_error(KernelClass{K, Exponent(2.0)}, plan, inf);
    for (double x : {2.0, 3.0, 5.5}) {
        plan = plan.extended(x, TrigPoly(6));
        EXPECT_LE(worst_case_error(KernelClass{K, Exponent(2.0)}, plan, inf), base * (1 + 1e-12));
    }
}

TEST(WorstCase, BernoulliKernelL2Slope) {
    // K = F_4(x - y), q = p = 2: the L2 residual of R_m decays like m^{-3.5}.
    const KernelClass kc{shift_kernel(make_kernel(kernel::Bernoulli{4.0, 1024})), Exponent(2.0)};
    std::vector<RatePoint> series;
    for (int m : {8, 16, 32, 64}) series.push_back({double(m), worst_case_error(kc, make_Rn_plan(m), Exponent(2.0))});
    EXPECT_NEAR(rate_fit(series).slope, -3.5, 0.3);
}

TEST(Extremal, ZeroSmoothnessIsValleePoussin) {
    for (Exponent q1 : {Exponent(1.0), Exponent(2.0), inf}) {
        const ExtremalKernel ek = extremal_kernel(0.0, 0.0, q1, 8);
        const TrigPoly v = make_kernel(kernel::ValleePoussin{8});
        EXPECT_LT(max_coeff_diff(ek.phi, v), 1e-15);
        EXPECT_NEAR(ek.scale, 1.0 / norm(v, q1), 1e-14);
    }
    EXPECT_THROW(extremal_kernel(1.0, 1.0, Exponent(1.0), 1), Error);
}

TEST(Extremal, ScaleExponent) {
    std::vector<RatePoint> series;
    for (int n : {8, 16, 32, 64, 128}) series.push_back({double(n), extremal_kernel(2.0, 2.0, Exponent(1.0), n).scale});
    EXPECT_NEAR(rate_fit(series).slope, -(2.0 + 2.0 + 1.0 - 1.0), 0.1);
}

TEST(Extremal, MembershipAndReproduction) {
    const int n = 16;
    const ExtremalKernel ek = extremal_kernel(2.0, 1.0, Exponent(1.0), n);
    // The (q1, inf) norm of the scaled phi(x - y) is exactly 1.
    const double m = mixed_norm(shift_kernel(ek.scale * ek.phi), Exponent(1.0), inf, NormOrder::x_first, 16);
    EXPECT_NEAR(m, 1.0, 1e-10);
    // D_y D_x K equals phi(x - y).
    const BivariateTrigPoly dd = multiplier_y(MultiplierKind::D, {1.0, 1.0, n},
                                              multiplier_x(MultiplierKind::D, {2.0, 2.0, n}, ek.kernel));
    EXPECT_LT(max_coeff_diff(dd, shift_kernel(ek.phi)), 1e-9);
    // I_K phi = phi on T(n).
    Rng rng(6);
    const TrigPoly phi = random_trigpoly(n, rng);
    std::vector<cplx> c(2 * ek.kernel.degree_x() + 1, cplx{0.0});
    for (const auto& e : ek.kernel.entries()) c[e.k + ek.kernel.degree_x()] += e.c * phi.coeff(-e.l);
    EXPECT_LT(max_coeff_diff(TrigPoly(ek.kernel.degree_x(), c).with_degree(n), phi), 1e-14);
}

TEST(ClassSpecText, RoundTrip) {
    for (const char* s : {"W:a=(2,3),q=(1,inf)", "H:a=(1,1),q=(2,2),l=2", "HK:r=(2,2),q1=1,n=32"}) {
        EXPECT_EQ(to_string(parse_class_spec(s)), s);
    }
    EXPECT_THROW(parse_class_spec("H:a=(3,1),q=(2,2),l=2"), Error);
    EXPECT_THROW(parse_class_spec("W:a=(2,3)"), Error);
    EXPECT_THROW(parse_class_spec("Z:a=1"), Error);
    EXPECT_THROW(parse_class_spec("W:a=(2,3),q=(1,1),x=2"), Error);
}
