#pragma once

// Linear recovery operators: trigonometric interpolation I_n, the de la Vallee
// Poussin sampling operator R_n, generic recovery plans
// Psi_m(f)(x) = sum_j f(xi_j) psi_j(x), the d = 2 Smolyak operator T_n, and the
// Bernoulli multipliers I^{(a,alpha)} and their inverses D^{(a,alpha)}.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "trigrec/error.hpp"
#include "trigrec/kernels.hpp"
#include "trigrec/trigpoly.hpp"

namespace trigrec {

/// Sample points xi_1..xi_m with coefficient functions psi_1..psi_m.
///
/// A plan may declare a translation step h: then the point set is invariant
/// under x -> x + h and psi_j = psi_1(. - (xi_j - xi_1)). Both properties are
/// verified on construction; error evaluators use them to reduce work.
class RecoveryPlan {
public:
    RecoveryPlan() = default;

    RecoveryPlan(std::vector<double> points, std::vector<TrigPoly> functions,
                 std::optional<double> translation_step = std::nullopt)
        : points_(std::move(points)), functions_(std::move(functions)), step_(translation_step) {
        if (points_.size() != functions_.size()) throw Error("RecoveryPlan: points/functions length mismatch");
        check_distinct();
        if (step_) check_translation_structure();
    }

    std::size_t size() const { return points_.size(); }
    std::span<const double> points() const { return points_; }
    std::span<const TrigPoly> functions() const { return functions_; }
    std::optional<double> translation_step() const { return step_; }

    int degree() const {
        int d = 0;
        for (const auto& f : functions_) d = std::max(d, f.degree());
        return d;
    }

    /// Adds a point with its coefficient function; drops any translation structure.
    RecoveryPlan extended(double point, TrigPoly psi) const {
        auto p = points_;
        auto f = functions_;
        p.push_back(point);
        f.push_back(std::move(psi));
        return RecoveryPlan(std::move(p), std::move(f));
    }

private:
    static double wrap_angle(double x) {
        double r = std::fmod(x, two_pi);
        return r < 0 ? r + two_pi : r;
    }

    void check_distinct() const {
        std::vector<double> w;
        w.reserve(points_.size());
        for (double x : points_) w.push_back(wrap_angle(x));
        std::sort(w.begin(), w.end());
        for (std::size_t i = 1; i < w.size(); ++i) {
            if (w[i] - w[i - 1] < 1e-12) throw Error("RecoveryPlan: sample points must be distinct");
        }
        if (w.size() > 1 && w.front() + two_pi - w.back() < 1e-12) {
            throw Error("RecoveryPlan: sample points must be distinct");
        }
    }

    void check_translation_structure() const {
        const double h = *step_;
        const std::size_t m = points_.size();
        if (m == 0 || !(h > 0.0) || std::abs(h * m - two_pi) > 1e-9) {
            throw Error("RecoveryPlan: translation step must divide the circle into m cells");
        }
        std::vector<double> w;
        for (double x : points_) w.push_back(wrap_angle(x - points_[0]));
        std::sort(w.begin(), w.end());
        for (std::size_t i = 0; i < m; ++i) {
            const double expect = h * static_cast<double>(i);
            if (std::abs(w[i] - expect) > 1e-9 && std::abs(w[i] - two_pi - expect) > 1e-9) {
                throw Error("RecoveryPlan: points are not a translation orbit");
            }
        }
        double scale = 0.0;
        for (const auto& c : functions_[0].coeffs()) scale = std::max(scale, std::abs(c));
        for (std::size_t j = 1; j < m; ++j) {
            const TrigPoly expect = functions_[0].translated(points_[j] - points_[0]);
            if (max_coeff_diff(expect, functions_[j]) > 1e-10 * std::max(scale, 1e-300)) {
                throw Error("RecoveryPlan: functions are not translates of the first one");
            }
        }
    }

    std::vector<double> points_;
    std::vector<TrigPoly> functions_;
    std::optional<double> step_;
};

template <typename F>
std::vector<cplx> sample_at(std::span<const double> points, F&& f) {
    std::vector<cplx> out;
    out.reserve(points.size());
    for (double x : points) out.push_back(cplx(f(x)));
    return out;
}

/// sum_j samples[j] psi_j. An empty plan yields the zero polynomial.
inline TrigPoly apply_plan(std::span<const cplx> samples, const RecoveryPlan& plan) {
    if (samples.size() != plan.size()) throw Error("apply_plan: sample count does not match plan size");
    const int n = plan.degree();
    std::vector<cplx> c(2 * n + 1, cplx{0.0});
    for (std::size_t j = 0; j < plan.size(); ++j) {
        const TrigPoly& psi = plan.functions()[j];
        const int d = psi.degree();
        auto pc = psi.coeffs();
        for (int k = -d; k <= d; ++k) c[k + n] += samples[j] * pc[k + d];
    }
    return TrigPoly(n, std::move(c));
}

/// x^j = 2 pi j / (2n + 1), j = 0..2n.
inline std::vector<double> interpolation_nodes(int n) {
    std::vector<double> x(2 * n + 1);
    for (int j = 0; j <= 2 * n; ++j) x[j] = two_pi * j / (2 * n + 1);
    return x;
}

/// x(j) = pi j / (2n), j = 1..4n.
inline std::vector<double> recovery_nodes(int n) {
    std::vector<double> x(4 * n);
    for (int j = 1; j <= 4 * n; ++j) x[j - 1] = pi * j / (2.0 * n);
    return x;
}

/// psi_j = (2n+1)^{-1} D_n(. - x^j)
inline RecoveryPlan make_In_plan(int n) {
    if (n < 0) throw Error("make_In_plan: n must be nonnegative");
    auto pts = interpolation_nodes(n);
    const TrigPoly base = (1.0 / (2 * n + 1)) * make_kernel(kernel::Dirichlet{n});
    std::vector<TrigPoly> fs;
    fs.reserve(pts.size());
    for (double x : pts) fs.push_back(base.translated(x));
    return RecoveryPlan(std::move(pts), std::move(fs), two_pi / (2 * n + 1));
}

/// psi_j = (4n)^{-1} V_n(. - x(j))
inline RecoveryPlan make_Rn_plan(int n) {
    if (n < 1) throw Error("make_Rn_plan: n must be positive");
    auto pts = recovery_nodes(n);
    const TrigPoly base = (1.0 / (4 * n)) * make_kernel(kernel::ValleePoussin{n});
    std::vector<TrigPoly> fs;
    fs.reserve(pts.size());
    for (double x : pts) fs.push_back(base.translated(x));
    return RecoveryPlan(std::move(pts), std::move(fs), pi / (2.0 * n));
}

/// I_n(f): the degree-n interpolant at the 2n + 1 equispaced nodes, via one DFT.
template <typename F>
TrigPoly interpolate_In(F&& f, int n) {
    if (n < 0) throw Error("interpolate_In: n must be nonnegative");
    const auto pts = interpolation_nodes(n);
    GridFunction g{2 * n + 1, sample_at(pts, f), std::nullopt};
    return from_samples(g, n);
}

/// R_n(f) = (4n)^{-1} sum_{j=1}^{4n} f(x(j)) V_n(x - x(j)); lies in T(2n - 1).
template <typename F>
TrigPoly recover_Rn(F&& f, int n) {
    const RecoveryPlan plan = make_Rn_plan(n);
    return apply_plan(sample_at(plan.points(), f), plan);
}

/// max_x sum_j |psi_j(x)| on a grid of oversample * (2 * degree + 1) nodes
/// (rounded up to a multiple of the plan's cell count when it is translation-generated).
inline double lebesgue_constant(const RecoveryPlan& plan, int oversample = 8) {
    if (plan.size() == 0) return 0.0;
    const int d = plan.degree();
    int grid = norm_grid_size(d, oversample);
    if (plan.translation_step()) {
        const int cells = static_cast<int>(plan.size());
        grid = ((grid + cells - 1) / cells) * cells;
        const GridFunction base = to_samples(plan.functions()[0], grid);
        const int per_cell = grid / cells;
        // psi_j(x) = psi_1(x - (xi_j - xi_1)); shifting by whole cells is an index shift.
        double best = 0.0;
        const double x0 = plan.points()[0];
        const int offset0 = static_cast<int>(std::lround(x0 / two_pi * grid));
        const bool aligned = std::abs(offset0 * two_pi / grid - x0) < 1e-12;
        if (aligned) {
            for (int i = 0; i < per_cell; ++i) {
                double s = 0.0;
                for (int j = 0; j < cells; ++j) s += std::abs(base.samples[wrap_index(i - j * per_cell, grid)]);
                best = std::max(best, s);
            }
            return best;
        }
    }
    std::vector<double> acc(grid, 0.0);
    for (const auto& psi : plan.functions()) {
        const GridFunction g = to_samples(psi, grid);
        for (int i = 0; i < grid; ++i) acc[i] += std::abs(g.samples[i]);
    }
    return *std::max_element(acc.begin(), acc.end());
}

// ---------------------------------------------------------------------------
// Smolyak operator, d = 2

struct SmolyakResult {
    BivariateTrigPoly poly;
    std::size_t sample_count = 0;                  ///< distinct points evaluated
    std::vector<std::pair<double, double>> points;  ///< in first-use order
};

/// T_n f = sum_{s1 + s2 <= n} Delta_{s1} (x) Delta_{s2} f with Delta_s = R_{2^s} - R_{2^{s-1}}
/// and R_{1/2} = 0. Every point is evaluated once; all R grids are nested in a
/// lattice of 4 * 2^n nodes per axis.
template <typename F>
SmolyakResult smolyak_Tn(F&& f, int n) {
    if (n < 0 || n > 14) throw Error("smolyak_Tn: level must be in [0, 14]");
    const int lattice = 4 << n;
    std::map<std::pair<int, int>, cplx> cache;
    SmolyakResult result;

    auto sample = [&](int i, int j) -> cplx {
        auto key = std::make_pair(i, j);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        const double x = two_pi * i / lattice;
        const double y = two_pi * j / lattice;
        const cplx v = cplx(f(x, y));
        cache.emplace(key, v);
        result.points.emplace_back(x, y);
        return v;
    };

    // Coefficients of R_{2^a} (x) R_{2^b} f, dense over |k| < 2^{a+1}, |l| < 2^{b+1}.
    struct Block {
        int nx, ny;
        std::vector<cplx> c;
    };
    std::map<std::pair<int, int>, Block> blocks;
    auto tensor_recovery = [&](int a, int b) -> const Block& {
        auto key = std::make_pair(a, b);
        auto it = blocks.find(key);
        if (it != blocks.end()) return it->second;
        const int pa = 4 << a, pb = 4 << b;
        const int sa = lattice / pa, sb = lattice / pb;
        std::vector<cplx> buf(static_cast<std::size_t>(pa) * pb);
        for (int i = 0; i < pa; ++i) {
            for (int j = 0; j < pb; ++j) buf[static_cast<std::size_t>(i) * pb + j] = sample(i * sa, j * sb);
        }
        fft::transform_2d(buf, pa, pb, fft::Direction::forward);
        const int ma = 1 << a, mb = 1 << b;
        Block blk{2 * ma - 1, 2 * mb - 1, {}};
        blk.c.assign(static_cast<std::size_t>(2 * blk.nx + 1) * (2 * blk.ny + 1), cplx{0.0});
        const double inv = 1.0 / (static_cast<double>(pa) * pb);
        for (int k = -blk.nx; k <= blk.nx; ++k) {
            const double vk = vallee_poussin_coeff(k, ma);
            for (int l = -blk.ny; l <= blk.ny; ++l) {
                const double vl = vallee_poussin_coeff(l, mb);
                blk.c[static_cast<std::size_t>(k + blk.nx) * (2 * blk.ny + 1) + (l + blk.ny)] =
                    vk * vl * inv * buf[static_cast<std::size_t>(wrap_index(k, pa)) * pb + wrap_index(l, pb)];
            }
        }
        return blocks.emplace(key, std::move(blk)).first->second;
    };

    const int top = 2 * (1 << n) - 1;
    const int width = 2 * top + 1;
    std::vector<cplx> acc(static_cast<std::size_t>(width) * width, cplx{0.0});
    std::vector<bool> touched(acc.size(), false);
    auto add_block = [&](const Block& blk, double sign) {
        for (int k = -blk.nx; k <= blk.nx; ++k) {
            for (int l = -blk.ny; l <= blk.ny; ++l) {
                const std::size_t idx = static_cast<std::size_t>(k + top) * width + (l + top);
                acc[idx] += sign * blk.c[static_cast<std::size_t>(k + blk.nx) * (2 * blk.ny + 1) + (l + blk.ny)];
                touched[idx] = true;
            }
        }
    };

    // Deterministic order: s sorted lexicographically by (s1, s2).
    for (int s1 = 0; s1 <= n; ++s1) {
        for (int s2 = 0; s1 + s2 <= n; ++s2) {
            for (int e1 = 0; e1 <= 1; ++e1) {
                for (int e2 = 0; e2 <= 1; ++e2) {
                    const int a = s1 - e1, b = s2 - e2;
                    if (a < 0 || b < 0) continue;  // R_{1/2} = 0
                    add_block(tensor_recovery(a, b), ((e1 + e2) % 2 == 0) ? 1.0 : -1.0);
                }
            }
        }
    }

    std::vector<BivariateTrigPoly::Entry> entries;
    for (int k = -top; k <= top; ++k) {
        for (int l = -top; l <= top; ++l) {
            const std::size_t idx = static_cast<std::size_t>(k + top) * width + (l + top);
            if (touched[idx]) entries.push_back({k, l, acc[idx]});
        }
    }
    result.poly = BivariateTrigPoly(top, top, std::move(entries));
    result.sample_count = cache.size();
    return result;
}

// ---------------------------------------------------------------------------
// Bernoulli multipliers

enum class MultiplierKind { I, D };

struct MultiplierParams {
    double a = 0.0;      ///< smoothness, >= 0
    double alpha = 0.0;  ///< phase
    int n = 0;           ///< D acts on T(2n)
};

inline cplx multiplier_symbol(MultiplierKind kind, const MultiplierParams& p, int k) {
    return kind == MultiplierKind::I ? bernoulli_coeff(k, p.a, p.alpha) : inverse_coeff(k, p.a, p.alpha);
}

namespace detail {
inline void check_multiplier(MultiplierKind kind, const MultiplierParams& p, int degree) {
    if (p.a < 0.0) throw Error("multiplier: a must be nonnegative");
    if (kind == MultiplierKind::D && degree > 2 * p.n) {
        throw Error("multiplier: D^{(a,alpha)} acts on T(2n); degree " + std::to_string(degree) +
                    " exceeds 2n = " + std::to_string(2 * p.n));
    }
}
}  // namespace detail

/// I^{(a,alpha)} g = F_{a,alpha} * g, or its inverse D^{(a,alpha)} on T(2n).
inline TrigPoly multiplier(MultiplierKind kind, const MultiplierParams& p, const TrigPoly& g) {
    detail::check_multiplier(kind, p, g.degree());
    return TrigPoly::generate(g.degree(), [&](int k) { return g.coeff(k) * multiplier_symbol(kind, p, k); });
}

/// The multiplier acting in the x variable of a bivariate polynomial.
inline BivariateTrigPoly multiplier_x(MultiplierKind kind, const MultiplierParams& p, const BivariateTrigPoly& g) {
    detail::check_multiplier(kind, p, g.degree_x());
    return g.multiplied([&](int k) { return multiplier_symbol(kind, p, k); }, [](int) { return 1.0; });
}

/// The multiplier acting in the y variable of a bivariate polynomial.
inline BivariateTrigPoly multiplier_y(MultiplierKind kind, const MultiplierParams& p, const BivariateTrigPoly& g) {
    detail::check_multiplier(kind, p, g.degree_y());
    return g.multiplied([](int) { return 1.0; }, [&](int l) { return multiplier_symbol(kind, p, l); });
}

}  // namespace trigrec
