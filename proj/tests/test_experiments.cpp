#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "trigrec/experiments.hpp"
#include "trigrec/identities.hpp"
#include "trigrec/random.hpp"

using namespace trigrec;

namespace {

const Exponent inf = Exponent::infinity();

RateLaw law(std::string id, double r1, double r2) {
    RateLaw l;
    l.id = std::move(id);
    l.r1 = r1;
    l.r2 = r2;
    return l;
}

std::string violation(const RateLaw& l) {
    try {
        predicted_exponent(l);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

std::vector<RatePoint> power_series(double c, double s) {
    std::vector<RatePoint> out;
    for (int m = 8; m <= 256; m *= 2) out.push_back({double(m), c * std::pow(m, s)});
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Predicted exponents

TEST(PredictedExponent, XiVanishesAtQTwo) {
    for (Exponent p : {Exponent(1.0), Exponent(1.5), Exponent(2.0), Exponent(3.0), inf}) {
        EXPECT_EQ(xi(Exponent(2.0), p), Rational(0));
    }
    EXPECT_EQ(xi(Exponent(1.0), inf), Rational(1, 2));
    EXPECT_EQ(xi(Exponent(1.0), Exponent(4.0)), Rational(1, 2));
    EXPECT_EQ(xi(Exponent(1.0), Exponent(1.0)), Rational(0));
    EXPECT_EQ(xi(Exponent(4.0), inf), Rational(0));
}

TEST(PredictedExponent, HandComputedTable) {
    struct Case {
        RateLaw law;
        Rational expect;
    };
    std::vector<Case> cases;
    {
        RateLaw l = law("InT2", 2, 3);
        l.q = Exponent(1.0);
        l.p = Exponent(2.0);
        cases.push_back({l, Rational(-9, 2)});
    }
    {
        RateLaw l = law("InT4b", 2, 2);
        l.q1 = Exponent(1.0);
        cases.push_back({l, Rational(-3)});
    }
    {
        // xi(1, inf) = 1/2 branch
        RateLaw l = law("InT1", 2, 3);
        l.q = Exponent(1.0);
        cases.push_back({l, Rational(-9, 2)});
    }
    {
        // xi(4, inf) = 0 branch
        RateLaw l = law("InT1", 2, 2);
        l.q = Exponent(4.0);
        cases.push_back({l, Rational(-4)});
    }
    {
        // xi(1, 1) = 0 via max(1/2, 1/p) = 1/p
        RateLaw l = law("InT1", 2, 3);
        l.q = Exponent(1.0);
        l.p = Exponent(1.0);
        cases.push_back({l, Rational(-5)});
    }
    {
        // r(q) with q1 < 2
        RateLaw l = law("InT3", 2, 2);
        l.q1 = l.q2 = Exponent(1.0);
        cases.push_back({l, Rational(-3)});
    }
    {
        // r(q) with q1 >= 2
        RateLaw l = law("InT3", 1, 1);
        l.q1 = l.q2 = Exponent(4.0);
        l.p = Exponent(2.0);
        cases.push_back({l, Rational(-2)});
    }
    {
        // r(q) = (1, max(1/2, 1/4)) = (1, 1/2)
        RateLaw l = law("InT3", 2, 1);
        l.q1 = Exponent(1.0);
        l.q2 = Exponent(4.0);
        cases.push_back({l, Rational(-2)});
    }
    {
        // r(q, p) with p1 <= 2
        RateLaw l = law("BiT5a", 1, 2);
        l.q1 = l.q2 = Exponent(1.0);
        l.p = Exponent(1.0);
        cases.push_back({l, Rational(-3)});
    }
    {
        // r(q, p) with p1 > 2, q1 < 2
        RateLaw l = law("BiT5a", 2, 1);
        l.q1 = Exponent(1.0);
        l.q2 = Exponent(4.0);
        l.p = Exponent(4.0);
        cases.push_back({l, Rational(-5, 2)});
    }
    {
        // r(q, p) with p1 > 2, q1 >= 2
        RateLaw l = law("BiT5a", 1, 1);
        l.q1 = l.q2 = Exponent(2.0);
        cases.push_back({l, Rational(-2)});
    }
    {
        RateLaw l = law("univarR", 2, 0);
        l.q = Exponent(2.0);
        cases.push_back({l, Rational(-3, 2)});
    }
    {
        RateLaw l = law("univarR", 2, 0);
        l.q = Exponent(4.0);
        l.p = Exponent(2.0);
        cases.push_back({l, Rational(-2)});
    }
    {
        RateLaw l = law("LbT1", 2, 2);
        l.q1 = l.q2 = l.q = Exponent(1.0);
        cases.push_back({l, Rational(-3)});
    }
    {
        RateLaw l = law("qpL1", 0, 0);
        l.q = Exponent(1.0);
        cases.push_back({l, Rational(1)});
    }
    {
        RateLaw l = law("Lb8", 2, 2);
        l.q1 = Exponent(1.0);
        cases.push_back({l, Rational(-4)});
    }
    for (const auto& c : cases) EXPECT_EQ(predicted_exponent(c.law), c.expect) << c.law.id;
}

TEST(PredictedExponent, HypothesisViolationsNameTheCondition) {
    RateLaw l = law("InT2", 2, 3);
    l.q = Exponent(3.0);
    EXPECT_NE(violation(l).find("InT2 hypothesis violated: requires 1 <= q <= 2"), std::string::npos);
    l.q = Exponent(1.0);
    l.p = Exponent(1.5);
    EXPECT_NE(violation(l).find("2 <= p <= inf"), std::string::npos);
    l.p = inf;
    l.r2 = 2.0;
    EXPECT_NE(violation(l).find("r > (1, 1 + 1/q)"), std::string::npos);
    RateLaw u = law("univarR", 0.5, 0);
    u.q = Exponent(1.0);
    EXPECT_NE(violation(u).find("r > 1/q"), std::string::npos);
    EXPECT_NE(violation(law("Bogus", 1, 1)).find("unknown rate law"), std::string::npos);
}

// ---------------------------------------------------------------------------
// Slope fitting

TEST(RateFit, ExactPowerLaw) {
    const SlopeFit f = rate_fit(power_series(1.0, -2.0));
    EXPECT_NEAR(f.slope, -2.0, 1e-12);
    EXPECT_NEAR(f.stderr_, 0.0, 1e-12);
}

TEST(RateFit, NoisyPowerLaw) {
    Rng rng(42);
    std::normal_distribution<double> nd(0.0, 1.0);
    auto s = power_series(3.0, -1.5);
    for (auto& pt : s) pt.error *= 1.0 + 0.01 * nd(rng);
    EXPECT_NEAR(rate_fit(s).slope, -1.5, 0.05);
}

TEST(RateFit, ScaleInvariance) {
    Rng rng(7);
    std::uniform_real_distribution<double> ud(0.5, 2.0);
    auto s = power_series(1.0, -0.7);
    for (auto& pt : s) pt.error *= ud(rng);
    const double base = rate_fit(s).slope;
    for (double c : {1e-6, 3.0, 1e8}) {
        auto t = s;
        for (auto& pt : t) pt.error *= c;
        EXPECT_NEAR(rate_fit(t).slope, base, 1e-12);
    }
}

TEST(RateFit, Preconditions) {
    auto s = power_series(1.0, -1.0);
    s.resize(3);
    try {
        rate_fit(s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("insufficient points"), std::string::npos);
    }
    auto z = power_series(1.0, -1.0);
    z[1].error = 0.0;
    EXPECT_THROW(rate_fit(z), Error);
    z[1].error = -1.0;
    EXPECT_THROW(rate_fit(z), Error);
}

TEST(RateReport, VerdictAndCsv) {
    RateReport r;
    r.engine = "svd";
    r.law = "Schmidt";
    r.series = power_series(1.0, -1.5);
    r.fit = rate_fit(r.series);
    r.predicted = -1.5;
    r.tolerance = 0.2;
    r.decide();
    EXPECT_EQ(r.verdict, Verdict::pass);
    r.predicted = -2.0;
    r.decide();
    EXPECT_EQ(r.verdict, Verdict::fail);
    r.one_sided = true;
    r.predicted = -1.0;
    r.decide();
    EXPECT_EQ(r.verdict, Verdict::pass);
    std::ostringstream os;
    write_report(os, r);
    const std::string s = os.str();
    EXPECT_NE(s.find("m,error,log2_m,log2_error\n8,"), std::string::npos);
    EXPECT_NE(s.find("# summary,slope=-1."), std::string::npos);
    EXPECT_NE(s.find("verdict=pass"), std::string::npos);
    std::ostringstream xy;
    write_report(xy, r, CsvLayout::xy);
    EXPECT_NE(xy.str().find("# m error log2_m log2_error\n8 "), std::string::npos);
}

// ---------------------------------------------------------------------------
// Configs

TEST(ExperimentConfigParse, FullConfig) {
    const ExperimentConfig c = parse_experiment_config(
        "# univariate recovery\n"
        "engine = univariate\n"
        "kernel = bernoulli:a=2,T=1024   # W^2 representative\n"
        "r = (2, 0)\n"
        "q = 2\n"
        "p = inf\n"
        "m_min = 8\nm_max = 256\nm_steps = 6\n"
        "tolerance = 0.3\nlaw = univarR\n");
    EXPECT_EQ(c.engine, "univariate");
    EXPECT_EQ(*c.kernel, "bernoulli:a=2,T=1024");
    EXPECT_EQ(c.r.first, 2.0);
    EXPECT_EQ(c.q.first, Exponent(2.0));
    EXPECT_TRUE(c.p.first.is_infinite());
    EXPECT_EQ(c.law, "univarR");
    EXPECT_EQ(predicted_exponent(law_from_config(c)), Rational(-3, 2));
}

TEST(ExperimentConfigParse, Errors) {
    auto msg = [](const std::string& s) {
        try {
            parse_experiment_config(s);
        } catch (const Error& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(msg("engine = svd\nfoo = 1\n").find("config line 2: unknown key 'foo'"), std::string::npos);
    EXPECT_NE(msg("engine = svd\nengine = lk\n").find("duplicate key"), std::string::npos);
    EXPECT_NE(msg("m_min = 4\n").find("missing key 'engine'"), std::string::npos);
    EXPECT_NE(msg("engine = magic\n").find("unknown engine"), std::string::npos);
    EXPECT_NE(msg("engine = svd\nm_min = 10\nm_max = 5\n").find("m_min <= m_max"), std::string::npos);
    EXPECT_NE(msg("engine = svd\nlaw = Nope\n").find("unknown law"), std::string::npos);
    EXPECT_NE(msg("engine = svd\nkernel = gauss:s=1\n").find("config line 2"), std::string::npos);
    EXPECT_NE(msg("engine = svd\nnot a pair\n").find("expected key = value"), std::string::npos);
    EXPECT_NE(msg("engine = svd\noperator = Q\n").find("operator must be R or I"), std::string::npos);
}

TEST(ExperimentConfigParse, ShippedConfigsLoad) {
    for (const char* f : {"configs/univar_recovery.cfg", "configs/univar_interpolation.cfg", "configs/kernel_recovery.cfg",
                          "configs/svd_bernoulli.cfg", "configs/lk_bernoulli.cfg", "configs/kk_bernoulli.cfg",
                          "configs/cubature.cfg", "configs/smolyak.cfg", "configs/extremal.cfg",
                          "configs/fooling.cfg"}) {
        const ExperimentConfig c = load_experiment_config(f);
        EXPECT_NO_THROW(predicted_exponent(law_from_config(c))) << f;
    }
    EXPECT_THROW(load_experiment_config("configs/missing.cfg"), Error);
}

TEST(MSweep, GeometricAndStrictlyIncreasing) {
    EXPECT_EQ(m_sweep(8, 256, 6), (std::vector<int>{8, 16, 32, 64, 128, 256}));
    EXPECT_EQ(m_sweep(5, 5, 3), (std::vector<int>{5}));
    const auto s = m_sweep(1, 4, 10);
    EXPECT_EQ(s.front(), 1);
    EXPECT_EQ(s.back(), 4);
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GT(s[i], s[i - 1]);
}

TEST(BernoulliCubic, MatchesSeries) {
    for (double x : {0.1, 1.0, 2.5, 4.0, 6.2}) {
        double s = 0.0;
        for (int k = 1; k <= 200000; ++k) s += std::sin(k * x) / (double(k) * k * k);
        EXPECT_NEAR(bernoulli_cubic(x), s, 1e-9);
    }
}

// ---------------------------------------------------------------------------
// Experiments

TEST(RunExperiment, ExtremalScaling) {
    ExperimentConfig c = parse_experiment_config(
        "engine = extremal\nr = (2, 2)\nq = (1, 1)\nm_min = 8\nm_max = 64\nm_steps = 4\nlaw = Lb8\ntolerance = 0.1\n");
    const RateReport r = run_experiment(c);
    EXPECT_EQ(r.series.size(), 4u);
    EXPECT_EQ(*r.predicted, -4.0);
    EXPECT_EQ(r.verdict, Verdict::pass) << r.fit.slope;
}

TEST(RunExperiment, SvdSlopeAndJobsIndependence) {
    const ExperimentConfig c = parse_experiment_config(
        "engine = svd\nkernel = bernoulli:a=2,T=64\nr = (2, 0)\nm_min = 2\nm_max = 32\nm_steps = 5\n"
        "law = Schmidt\ntolerance = 0.3\n");
    const RateReport r = run_experiment(c);
    EXPECT_EQ(*r.predicted, -1.5);
    std::ostringstream a, b;
    write_report(a, r);
    write_report(b, run_experiment(c, 3));
    EXPECT_EQ(a.str(), b.str());
}

TEST(RunExperiment, UnivariateDeterministicAcrossJobs) {
    const ExperimentConfig c = parse_experiment_config(
        "engine = univariate\nr = (2, 0)\nq = 2\np = inf\nm_min = 8\nm_max = 64\nm_steps = 4\nlaw = univarR\n");
    const RateReport a = run_experiment(c, 1);
    const RateReport b = run_experiment(c, 4);
    ASSERT_EQ(a.series.size(), b.series.size());
    for (std::size_t i = 0; i < a.series.size(); ++i) EXPECT_EQ(a.series[i].error, b.series[i].error);
    EXPECT_EQ(a.verdict, Verdict::pass) << a.fit.slope;
}

TEST(RunExperiment, FoolingGrowth) {
    const ExperimentConfig c = parse_experiment_config(
        "engine = fooling\nq = 1\np = inf\nm_min = 4\nm_max = 16\nm_steps = 3\nlaw = qpL1\ntolerance = 0.25\n");
    EXPECT_THROW(run_experiment(c), Error);  // three points cannot be fitted
    ExperimentConfig d = c;
    d.m_steps = 4;
    d.m_max = 32;
    const RateReport r = run_experiment(d);
    EXPECT_EQ(r.verdict, Verdict::pass) << r.fit.slope;
}

// ---------------------------------------------------------------------------
// Fooling bound

TEST(FoolingBound, NoPointsGivesAtLeastOne) {
    for (int N : {0, 3, 8}) {
        for (auto [q, p] : {std::pair{Exponent(1.0), inf}, std::pair{Exponent(2.0), Exponent(2.0)},
                            std::pair{Exponent(1.0), Exponent(3.0)}}) {
            EXPECT_GE(fooling_bound(std::vector<double>{}, N, q, p).bound, 1.0 - 1e-12);
        }
    }
    EXPECT_GE(fooling_bound(std::vector<std::pair<double, double>>{}, 1, 2, Exponent(1.0), inf).bound, 1.0 - 1e-12);
}

TEST(FoolingBound, WitnessVanishesAtThePoints) {
    const std::vector<double> pts = {0.3, 1.7};
    const FoolingResult r = fooling_bound(pts, 2, Exponent(2.0), Exponent(2.0));
    EXPECT_EQ(r.null_dimension, 3);
    EXPECT_NEAR(r.bound, 1.0, 1e-12);
    EXPECT_LE(r.witness.degree(), 4);
    for (double x : pts) EXPECT_LT(std::abs(r.witness(x)), 1e-10 * norm(r.witness, inf));
}

TEST(FoolingBound, MatchesDenseNullSpaceSearchForQ1PInf) {
    // Random members of the polynomials in T(2N) vanishing at the points never certify
    // far more than the returned witness.
    Rng rng(3);
    const int N = 2;
    const std::vector<double> pts = {0.4, 2.9};
    const FoolingResult r = fooling_bound(pts, N, Exponent(1.0), inf);
    // Grid maxima underestimate the sup, so a finer grid can only raise the witness ratio.
    const double fine = norm(r.witness, inf, 256) / norm(r.witness, Exponent(1.0), 256);
    EXPECT_LE(r.bound, fine * (1 + 1e-12));
    EXPECT_NEAR(r.bound, fine, 1e-2 * fine);
    const int dim = 4 * N + 1;
    Eigen::MatrixXcd a(pts.size(), dim);
    for (std::size_t j = 0; j < pts.size(); ++j) {
        for (int k = -2 * N; k <= 2 * N; ++k) a(j, k + 2 * N) = std::polar(1.0, k * pts[j]);
    }
    const Eigen::MatrixXcd basis = detail::null_space(a, dim);
    EXPECT_EQ(basis.cols(), 7);
    std::normal_distribution<double> nd(0.0, 1.0);
    double best = 0.0;
    for (int t = 0; t < 2000; ++t) {
        Eigen::VectorXcd z(basis.cols());
        for (int i = 0; i < z.size(); ++i) z(i) = cplx(nd(rng), nd(rng));
        const Eigen::VectorXcd c = basis * z;
        const TrigPoly w(2 * N, std::vector<cplx>(c.data(), c.data() + c.size()));
        best = std::max(best, norm(w, inf) / norm(w, Exponent(1.0)));
    }
    EXPECT_GT(r.bound, 0.0);
    EXPECT_LE(r.bound, dim + 1e-9);
    EXPECT_GE(r.bound, 0.5 * best);
}

TEST(FoolingBound, NeverExceedsAConcretePlanError) {
    // Any plan on the same points returns the same output for t and 0, so it errs by ||t||_p.
    Rng rng(4);
    for (int n : {2, 4}) {
        const RecoveryPlan plan = make_In_plan(n);
        const int N = 2 * n + 1;
        const FoolingResult fb = fooling_bound(plan.points(), N, Exponent(1.0), inf);
        const TrigPoly t = fb.witness;
        const TrigPoly rec = apply_plan(sample_at(plan.points(), [&](double x) { return t(x); }), plan);
        const double plan_err = norm(t - rec, inf) / norm(t, Exponent(1.0));
        EXPECT_LE(fb.bound, plan_err + 1e-9);
    }
}

TEST(FoolingBound, RangeAndOrderChecks) {
    std::vector<double> pts(3, 0.0);
    for (int i = 0; i < 3; ++i) pts[i] = i;
    EXPECT_THROW(fooling_bound(pts, 2, Exponent(1.0), inf), Error);
    pts.resize(2);
    EXPECT_THROW(fooling_bound(pts, 2, inf, Exponent(1.0)), Error);
}

// ---------------------------------------------------------------------------
// Identities

TEST(VerifyIdentity, MultiplierIdentities) {
    IdentityInstance inst;
    inst.n = 16;
    inst.a = 2.5;
    inst.alpha = 1.0;
    EXPECT_TRUE(verify_identity("Lb5", inst).pass);
    EXPECT_TRUE(verify_identity("Lb6", inst).pass);
    inst.n = 32;
    for (Exponent q : {Exponent(1.0), Exponent(2.0), Exponent(3.0), inf}) {
        inst.q = q;
        const IdentityReport r = verify_identity("Lb7", inst);
        EXPECT_TRUE(r.pass) << q.str() << " " << r.value;
    }
}

TEST(VerifyIdentity, ReductionEqualitiesOnValleePoussinKernel) {
    IdentityInstance inst;
    inst.kernel = shift_kernel(make_kernel(kernel::ValleePoussin{8}));
    inst.q = Exponent(1.0);
    inst.m = 2;
    inst.grid = 32;
    inst.candidates = 32;
    const IdentityReport r2 = verify_identity("RNP2-equality", inst);
    EXPECT_TRUE(r2.pass) << r2.detail;
    EXPECT_LE(r2.value, 1e-8);
    const IdentityReport r3 = verify_identity("RNP3-equality", inst);
    EXPECT_TRUE(r3.pass) << r3.detail;
}

TEST(VerifyIdentity, RandomReductionInstances) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        IdentityInstance inst;
        inst.seed = seed;
        inst.q = seed % 2 ? Exponent(2.0) : Exponent(1.0);
        EXPECT_TRUE(verify_identity("RNP2-equality", inst).pass) << seed;
        EXPECT_TRUE(verify_identity("RNP3-equality", inst).pass) << seed;
        const IdentityReport b = verify_identity("RNP1-bound", inst);
        EXPECT_GE(b.value, -1e-9) << seed;
    }
}

TEST(VerifyIdentity, Preconditions) {
    IdentityInstance inst;
    EXPECT_THROW(verify_identity("Lb9", inst), Error);
    inst.grid = 128;
    EXPECT_THROW(verify_identity("RNP2-equality", inst), Error);
    inst.grid = 32;
    inst.m = 5;
    EXPECT_THROW(verify_identity("RNP3-equality", inst), Error);
}
