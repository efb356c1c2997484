#pragma once

// Numerical checks of the operator identities and of the reductions between
// recovery, cubature and adaptive sparse approximation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "trigrec/classes.hpp"
#include "trigrec/error.hpp"
#include "trigrec/kernels.hpp"
#include "trigrec/operators.hpp"
#include "trigrec/random.hpp"
#include "trigrec/text.hpp"
#include "trigrec/trigpoly.hpp"

namespace trigrec {

struct IdentityInstance {
    int n = 16;             ///< Lb5/Lb6: g in T(2n); Lb7: f in T(n)
    double a = 2.5;
    double alpha = 1.0;
    double b = 1.0;
    double beta = 0.0;
    Exponent q = Exponent(1.0);
    Exponent p = Exponent::infinity();
    int m = 2;              ///< knots per candidate plan
    int degree = 4;         ///< kernel degree for random reduction instances
    int grid = 32;          ///< nodes per axis for the reduction checks
    int candidates = 16;    ///< candidate knot grid size
    std::uint64_t seed = 0;
    std::optional<BivariateTrigPoly> kernel;
};

struct IdentityReport {
    std::string id;
    double value = 0.0;      ///< max error, |difference|, or slack
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

inline const std::vector<std::string>& known_identities() {
    static const std::vector<std::string> ids = {"Lb5", "Lb6", "Lb7", "RNP1-bound", "RNP2-equality",
                                                 "RNP3-equality"};
    return ids;
}

namespace detail {

inline double rel_coeff_error(const TrigPoly& a, const TrigPoly& b) {
    double scale = 0.0;
    for (const auto& c : b.coeffs()) scale = std::max(scale, std::abs(c));
    return max_coeff_diff(a, b) / std::max(scale, 1e-300);
}

inline double rel_coeff_error(const BivariateTrigPoly& a, const BivariateTrigPoly& b) {
    double scale = 0.0;
    for (const auto& e : b.entries()) scale = std::max(scale, std::abs(e.c));
    return max_coeff_diff(a, b) / std::max(scale, 1e-300);
}

inline void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    if (k > n) return;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

/// f = int K(., y) phi(y) dmu(y), exactly on coefficients.
inline TrigPoly apply_kernel(const BivariateTrigPoly& K, const TrigPoly& phi) {
    std::vector<cplx> c(2 * K.degree_x() + 1, cplx{0.0});
    for (const auto& e : K.entries()) c[e.k + K.degree_x()] += e.c * phi.coeff(-e.l);
    return TrigPoly(K.degree_x(), std::move(c));
}

/// The function phi with ||phi||_2 = 1 maximizing |int r(y) phi(y) dmu|: conj(r) / ||r||_2.
inline TrigPoly aligned_unit(const TrigPoly& r) {
    const double nr = std::sqrt(r.l2_norm_squared());
    if (nr == 0.0) return TrigPoly(r.degree());
    return TrigPoly::generate(r.degree(), [&](int l) { return std::conj(r.coeff(-l)) / nr; });
}

struct ReductionSetup {
    BivariateTrigPoly K;
    int grid;
    Eigen::MatrixXcd values;  // K on grid x grid
};

inline ReductionSetup reduction_setup(const IdentityInstance& inst) {
    ReductionSetup s;
    if (inst.kernel) {
        s.K = *inst.kernel;
    } else {
        Rng rng(inst.seed);
        s.K = random_real_bivariate(inst.degree, inst.degree, rng, 1.0);
    }
    s.grid = inst.grid;
    if (s.grid > 64) throw Error("reduction checks: grid must be at most 64 per axis");
    if (s.grid < 2 * std::max(s.K.degree_x(), s.K.degree_y()) + 1) {
        throw Error("aliasing risk: reduction grid too coarse for the kernel degree");
    }
    if (inst.m < 0 || inst.m > 4) throw Error("reduction checks: m must lie in [0, 4]");
    const GridFunction2 g = to_samples(s.K, s.grid, s.grid);
    s.values.resize(s.grid, s.grid);
    for (int i = 0; i < s.grid; ++i) {
        for (int j = 0; j < s.grid; ++j) s.values(i, j) = g.at(i, j);
    }
    return s;
}

inline Eigen::MatrixXcd section_rows(const ReductionSetup& s, const std::vector<double>& xs) {
    Eigen::MatrixXcd b(xs.size(), s.grid);
    for (std::size_t t = 0; t < xs.size(); ++t) {
        const GridFunction g = to_samples(s.K.section_y(xs[t]), s.grid);
        for (int j = 0; j < s.grid; ++j) b(t, j) = g.samples[j];
    }
    return b;
}

inline void require_q12(const Exponent& q, const std::string& id) {
    if (!(q == Exponent(1.0) || q == Exponent(2.0))) throw Error(id + ": supported for q = 1 or q = 2");
}

inline IdentityReport check_rnp2(const IdentityInstance& inst) {
    require_q12(inst.q, "RNP2-equality");
    const ReductionSetup s = reduction_setup(inst);
    const int G = s.grid;
    const int n1 = s.K.degree_x();
    const bool q1 = inst.q == Exponent(1.0);
    double dict_best = INFINITY, class_best = INFINITY;
    for_each_subset(inst.candidates, inst.m, [&](const std::vector<int>& sub) {
        std::vector<double> xs;
        for (int c : sub) xs.push_back(grid_node(c, inst.candidates));
        // Least-squares psi over the y grid, shared by both sides.
        Eigen::MatrixXcd C(G, xs.size());
        Eigen::MatrixXcd B = section_rows(s, xs);
        if (!xs.empty()) C = B.transpose().completeOrthogonalDecomposition().solve(s.values.transpose()).transpose();
        // Dictionary side: L*_{inf, q'} of the grid residual.
        const Eigen::MatrixXcd R = xs.empty() ? s.values : Eigen::MatrixXcd(s.values - C * B);
        double dict = 0.0;
        if (q1) {
            dict = R.cwiseAbs().maxCoeff();
        } else {
            for (int i = 0; i < G; ++i) dict = std::max(dict, R.row(i).norm() / std::sqrt(double(G)));
        }
        dict_best = std::min(dict_best, dict);
        // Class side: worst member of W^K_q recovered by the plan, measured in sup norm.
        std::vector<TrigPoly> psis;
        for (std::size_t t = 0; t < xs.size(); ++t) {
            GridFunction col{G, std::vector<cplx>(C.col(t).data(), C.col(t).data() + G), std::nullopt};
            psis.push_back(from_samples(col, n1));
        }
        const RecoveryPlan plan(xs, psis);
        auto member_error = [&](const TrigPoly& f) {
            const TrigPoly rec = apply_plan(sample_at(plan.points(), f), plan);
            const GridFunction g = to_samples(f - rec, G);
            return grid_norm(g.samples, Exponent::infinity());
        };
        double cls = 0.0;
        if (q1) {
            for (int l = 0; l < G; ++l) cls = std::max(cls, member_error(s.K.section_x(grid_node(l, G))));
        } else {
            for (int i = 0; i < G; ++i) {
                const double x = grid_node(i, G);
                TrigPoly r = s.K.section_y(x);
                for (std::size_t t = 0; t < xs.size(); ++t) r = r - plan.functions()[t](x) * s.K.section_y(xs[t]);
                cls = std::max(cls, member_error(apply_kernel(s.K, aligned_unit(r))));
            }
        }
        class_best = std::min(class_best, cls);
    });
    IdentityReport rep;
    rep.id = "RNP2-equality";
    rep.value = std::abs(dict_best - class_best);
    rep.tolerance = 1e-8 * std::max(1.0, dict_best);
    rep.pass = rep.value <= rep.tolerance;
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(15);
    os << "class recovery error " << class_best << ", LK dictionary error " << dict_best;
    rep.detail = os.str();
    return rep;
}

inline IdentityReport check_rnp3(const IdentityInstance& inst) {
    require_q12(inst.q, "RNP3-equality");
    const ReductionSetup s = reduction_setup(inst);
    const int G = s.grid;
    const bool q1 = inst.q == Exponent(1.0);
    const TrigPoly jk = s.K.mean_over_x();
    const GridFunction jg = to_samples(jk, G);
    const Eigen::VectorXcd J = Eigen::Map<const Eigen::VectorXcd>(jg.samples.data(), G);
    double dict_best = INFINITY, class_best = INFINITY;
    for_each_subset(inst.candidates, inst.m, [&](const std::vector<int>& sub) {
        std::vector<double> xs;
        for (int c : sub) xs.push_back(grid_node(c, inst.candidates));
        Eigen::VectorXcd lam(xs.size());
        Eigen::VectorXcd r = J;
        if (!xs.empty()) {
            const Eigen::MatrixXcd B = section_rows(s, xs);
            lam = B.transpose().completeOrthogonalDecomposition().solve(J);
            r = J - B.transpose() * lam;
        }
        const double dict = q1 ? r.cwiseAbs().maxCoeff() : r.norm() / std::sqrt(double(G));
        dict_best = std::min(dict_best, dict);
        auto cubature_gap = [&](const TrigPoly& f) {
            cplx quad{0.0};
            for (std::size_t t = 0; t < xs.size(); ++t) quad += lam(t) * f(xs[t]);
            return std::abs(f.coeff(0) - quad);
        };
        double cls = 0.0;
        if (q1) {
            for (int l = 0; l < G; ++l) cls = std::max(cls, cubature_gap(s.K.section_x(grid_node(l, G))));
        } else {
            TrigPoly res = jk;
            for (std::size_t t = 0; t < xs.size(); ++t) res = res - lam(t) * s.K.section_y(xs[t]);
            cls = cubature_gap(apply_kernel(s.K, aligned_unit(res)));
        }
        class_best = std::min(class_best, cls);
    });
    IdentityReport rep;
    rep.id = "RNP3-equality";
    rep.value = std::abs(dict_best - class_best);
    rep.tolerance = 1e-8 * std::max(1.0, dict_best);
    rep.pass = rep.value <= rep.tolerance;
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(15);
    os << "class cubature error " << class_best << ", dictionary error " << dict_best;
    rep.detail = os.str();
    return rep;
}

inline IdentityReport check_rnp1(const IdentityInstance& inst) {
    Rng rng(inst.seed);
    const BivariateTrigPoly K = inst.kernel ? *inst.kernel : random_real_bivariate(inst.degree, inst.degree, rng, 1.0);
    const int n1 = K.degree_x(), n2 = K.degree_y();
    // Plan: m random candidate knots with least-squares psi.
    std::vector<int> pool(inst.candidates);
    for (int i = 0; i < inst.candidates; ++i) pool[i] = i;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<double> xs;
    for (int t = 0; t < std::min(inst.m, inst.candidates); ++t) xs.push_back(grid_node(pool[t], inst.candidates));
    std::sort(xs.begin(), xs.end());
    const int gls = norm_grid_size(std::max(n1, n2), default_oversample_2d);
    std::vector<TrigPoly> psis;
    if (!xs.empty()) {
        const GridFunction2 g = to_samples(K, gls, gls);
        Eigen::MatrixXcd V(gls, gls), B(xs.size(), gls);
        for (int i = 0; i < gls; ++i) {
            for (int j = 0; j < gls; ++j) V(i, j) = g.at(i, j);
        }
        for (std::size_t t = 0; t < xs.size(); ++t) {
            const GridFunction row = to_samples(K.section_y(xs[t]), gls);
            for (int j = 0; j < gls; ++j) B(t, j) = row.samples[j];
        }
        const Eigen::MatrixXcd C = B.transpose().completeOrthogonalDecomposition().solve(V.transpose()).transpose();
        for (std::size_t t = 0; t < xs.size(); ++t) {
            GridFunction col{gls, std::vector<cplx>(C.col(t).data(), C.col(t).data() + gls), std::nullopt};
            psis.push_back(from_samples(col, n1));
        }
    }
    const RecoveryPlan plan(xs, psis);
    const double rhs = worst_case_error(KernelClass{K, inst.q}, plan, inst.p);

    const int gx = norm_grid_size(std::max(n1, plan.degree()), default_oversample_2d);
    const int gy = norm_grid_size(n2, default_oversample_2d);
    auto member_error = [&](const TrigPoly& f) {
        const TrigPoly rec = apply_plan(sample_at(plan.points(), f), plan);
        return grid_norm(to_samples(f - rec, gx).samples, inst.p);
    };
    double lhs = 0.0;
    if (inst.q == Exponent(1.0)) {
        for (int l = 0; l < gy; ++l) lhs = std::max(lhs, member_error(K.section_x(grid_node(l, gy))));
    } else {
        for (int draw = 0; draw < 8; ++draw) {
            const TrigPoly phi = random_real_trigpoly(n2, rng);
            const double nq = grid_norm(to_samples(phi, gy).samples, inst.q);
            lhs = std::max(lhs, member_error(apply_kernel(K, (1.0 / nq) * phi)));
        }
    }
    IdentityReport rep;
    rep.id = "RNP1-bound";
    rep.value = rhs - lhs;
    rep.tolerance = -1e-9;
    rep.pass = rep.value >= rep.tolerance;
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(15);
    os << "largest member error " << lhs << ", mixed-norm residual " << rhs;
    rep.detail = os.str();
    return rep;
}

}  // namespace detail

/// Runs one identity check on a (small, seeded) instance.
inline IdentityReport verify_identity(const std::string& id, const IdentityInstance& inst) {
    IdentityReport rep;
    rep.id = id;
    Rng rng(inst.seed);
    if (id == "Lb5") {
        const TrigPoly g = random_trigpoly(2 * inst.n, rng);
        const MultiplierParams mp{inst.a, inst.alpha, inst.n};
        const TrigPoly back = multiplier(MultiplierKind::I, mp, multiplier(MultiplierKind::D, mp, g));
        rep.value = detail::rel_coeff_error(back, g);
        rep.tolerance = 1e-10;
        rep.pass = rep.value <= rep.tolerance;
        rep.detail = "max relative coefficient error of I D g - g";
        return rep;
    }
    if (id == "Lb6") {
        const TrigPoly g = random_trigpoly(2 * inst.n, rng);
        const BivariateTrigPoly lhs =
            multiplier_y(MultiplierKind::D, {inst.b, inst.beta, inst.n},
                         multiplier_x(MultiplierKind::D, {inst.a, inst.alpha, inst.n}, shift_kernel(g)));
        const BivariateTrigPoly rhs =
            shift_kernel(multiplier(MultiplierKind::D, {inst.a + inst.b, inst.alpha - inst.beta, inst.n}, g));
        rep.value = detail::rel_coeff_error(lhs, rhs);
        rep.tolerance = 1e-10;
        rep.pass = rep.value <= rep.tolerance;
        rep.detail = "max relative coefficient error of D_y D_x g(x - y) - (D g)(x - y)";
        return rep;
    }
    if (id == "Lb7") {
        const TrigPoly f = random_trigpoly(inst.n, rng);
        const Exponent q = inst.q;
        // Quadrature of |f|^q is exact for even integer q; otherwise shift by a whole node.
        const bool even = !q.is_infinite() && q.value() == std::round(q.value()) &&
                          static_cast<long long>(q.value()) % 2 == 0;
        const int grid = norm_grid_size(inst.n, default_oversample);
        std::uniform_real_distribution<double> ud(0.0, two_pi);
        std::uniform_int_distribution<int> ui(0, grid - 1);
        const double y = even ? ud(rng) : grid_node(ui(rng), grid);
        const double base = norm(f, q);
        const double e1 = std::abs(norm(f.translated(y), q) - base) / base;
        const double base4 = norm(f, q, default_oversample_2d);
        const double mixed = mixed_norm(shift_kernel(f), q, Exponent::infinity());
        const double e2 = std::abs(mixed - base4) / base4;
        rep.value = std::max(e1, e2);
        rep.tolerance = 1e-10;
        rep.pass = rep.value <= rep.tolerance;
        rep.detail = "relative norm differences: translation " + text::format_double(e1) + ", mixed (q, inf) " +
                     text::format_double(e2);
        return rep;
    }
    if (id == "RNP1-bound") return detail::check_rnp1(inst);
    if (id == "RNP2-equality") return detail::check_rnp2(inst);
    if (id == "RNP3-equality") return detail::check_rnp3(inst);
    throw Error("unknown identity '" + id + "'");
}

}  // namespace trigrec
