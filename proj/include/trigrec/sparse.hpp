#pragma once

// m-term approximation of kernels K(x, y) sampled on a tensor grid: bilinear
// (SVD), row skeletons K(xi, y) psi(x), cross functions K(x, b) M K(a, y), and
// greedy cubature of J_K(y) = int K(x, y) dmu(x) by the dictionary {K(z, .)}.

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "trigrec/error.hpp"
#include "trigrec/exponent.hpp"
#include "trigrec/kernels.hpp"
#include "trigrec/operators.hpp"
#include "trigrec/text.hpp"
#include "trigrec/trigpoly.hpp"

namespace trigrec {

using MatrixC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;

/// Default sparse-engine grid: 4 (2N + 1) nodes.
inline int default_sparse_grid(int degree) { return 4 * (2 * degree + 1); }

/// K(x_i, y_j) on the Mx x My node grid, with its source.
struct DiscretizedKernel {
    int size_x = 0;
    int size_y = 0;
    MatrixC values;  ///< values(i, j) = K(2 pi i / Mx, 2 pi j / My)
    BivariateTrigPoly source;
    std::string provenance;
};

inline DiscretizedKernel discretize(const BivariateTrigPoly& K, std::optional<int> mx = std::nullopt,
                                    std::optional<int> my = std::nullopt, std::string provenance = "polynomial") {
    DiscretizedKernel d;
    d.size_x = mx.value_or(default_sparse_grid(K.degree_x()));
    d.size_y = my.value_or(default_sparse_grid(K.degree_y()));
    if (d.size_x < 1 || d.size_y < 1) throw Error("discretize: grid sizes must be positive");
    const GridFunction2 g = to_samples(K, d.size_x, d.size_y);
    d.values.resize(d.size_x, d.size_y);
    for (int i = 0; i < d.size_x; ++i) {
        for (int j = 0; j < d.size_y; ++j) d.values(i, j) = g.at(i, j);
    }
    d.source = K;
    d.provenance = std::move(provenance);
    return d;
}

/// Shift kernel g(x - y) built from a kernel spec.
inline DiscretizedKernel discretize(const KernelSpec& spec, std::optional<int> mx = std::nullopt,
                                    std::optional<int> my = std::nullopt) {
    return discretize(shift_kernel(make_kernel(spec)), mx, my, to_string(spec));
}

// ---------------------------------------------------------------------------
// Approximants

enum class Dictionary { Pi, LK, KL, KK, CubatureD };

inline std::string to_string(Dictionary d) {
    switch (d) {
        case Dictionary::Pi: return "Pi";
        case Dictionary::LK: return "LK";
        case Dictionary::KL: return "KL";
        case Dictionary::KK: return "KK";
        case Dictionary::CubatureD: return "CubatureD";
    }
    return "?";
}

/// One term weight * u(x) v(y). Anchors are the sample points a term is built from.
struct SparseTerm {
    std::optional<double> anchor_x;
    std::optional<double> anchor_y;
    TrigPoly u;
    TrigPoly v;
    cplx weight{1.0};
};

struct SparseApproximant {
    Dictionary dictionary = Dictionary::Pi;
    std::vector<SparseTerm> terms;
    std::vector<double> error_history;  ///< error after 0, 1, ..., m terms

    std::size_t size() const { return terms.size(); }

    BivariateTrigPoly to_bivariate() const {
        BivariateTrigPoly sum;
        for (const auto& t : terms) sum = sum + t.weight * BivariateTrigPoly::tensor(t.u, t.v);
        return sum;
    }
};

struct SparseResult {
    SparseApproximant approximant;
    double error = 0.0;
    bool rank_deficient = false;
    std::string note;
};

/// One line per term: index, anchors, coefficient norm ||w u v||_2, cumulative error.
inline void write_manifest(std::ostream& os, const SparseApproximant& a, const std::string& header = {}) {
    if (!header.empty()) os << "# " << header << "\n";
    os << "# dictionary " << to_string(a.dictionary) << ", terms " << a.terms.size() << "\n";
    os << "term,anchor_x,anchor_y,coefficient_norm,cumulative_error\n";
    auto anchor = [](const std::optional<double>& v) { return v ? text::format_double(*v) : std::string("-"); };
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        const auto& t = a.terms[i];
        const double cn = std::abs(t.weight) * std::sqrt(t.u.l2_norm_squared() * t.v.l2_norm_squared());
        const double err = i + 1 < a.error_history.size() ? a.error_history[i + 1] : std::nan("");
        os << (i + 1) << "," << anchor(t.anchor_x) << "," << anchor(t.anchor_y) << "," << text::format_double(cn)
           << "," << text::format_double(err) << "\n";
    }
}

// ---------------------------------------------------------------------------
// Norms on the grid

/// A mixed norm on the sample grid: p acts on x, q on y, `order` picks the inner variable.
struct GridNorm {
    Exponent p = Exponent(2.0);
    Exponent q = Exponent(2.0);
    NormOrder order = NormOrder::x_first;

    static GridNorm l2() { return {}; }
    static GridNorm sup() { return {Exponent::infinity(), Exponent::infinity(), NormOrder::y_first}; }
};

inline double grid_matrix_norm(const MatrixC& r, const GridNorm& nrm) {
    if (r.size() == 0) return 0.0;
    const bool p2 = !nrm.p.is_infinite() && nrm.p.value() == 2.0;
    const bool q2 = !nrm.q.is_infinite() && nrm.q.value() == 2.0;
    if (p2 && q2) return r.norm() / std::sqrt(static_cast<double>(r.rows()) * r.cols());
    if (nrm.p.is_infinite() && nrm.q.is_infinite()) return r.cwiseAbs().maxCoeff();
    GridFunction2 g{static_cast<int>(r.rows()), static_cast<int>(r.cols()), {}, std::nullopt, std::nullopt};
    g.samples.resize(r.size());
    for (int i = 0; i < r.rows(); ++i) {
        for (int j = 0; j < r.cols(); ++j) g.samples[static_cast<std::size_t>(i) * r.cols() + j] = r(i, j);
    }
    return grid_mixed_norm(g, nrm.p, nrm.q, nrm.order);
}

namespace detail {

inline GridFunction column_grid(const VectorC& v) {
    GridFunction g{static_cast<int>(v.size()), std::vector<cplx>(v.data(), v.data() + v.size()), std::nullopt};
    return g;
}

/// Degree used to turn grid columns back into polynomials.
inline int poly_degree(int source_degree, int grid) { return std::min(source_degree, (grid - 1) / 2); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Bilinear approximation

struct SvdResult {
    SparseResult result;
    std::vector<double> singular_values;  ///< of the normalized grid matrix
};

/// Best rank-m approximation in the normalized discrete L_2 norm; the error is the
/// root-sum-square of the singular values beyond m.
inline SvdResult svd_bilinear(const DiscretizedKernel& dk, int m) {
    const int rank_cap = std::min(dk.size_x, dk.size_y);
    if (m < 0 || m > rank_cap) throw Error("svd_bilinear: m must lie in [0, min(Mx, My)]");
    const double scale = std::sqrt(static_cast<double>(dk.size_x) * dk.size_y);
    const MatrixC a = dk.values / scale;
    Eigen::BDCSVD<MatrixC> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    SvdResult out;
    out.singular_values.assign(s.data(), s.data() + s.size());
    std::vector<double> tail(s.size() + 1, 0.0);
    for (int i = static_cast<int>(s.size()) - 1; i >= 0; --i) tail[i] = tail[i + 1] + s[i] * s[i];
    SparseApproximant& ap = out.result.approximant;
    ap.dictionary = Dictionary::Pi;
    ap.error_history.push_back(std::sqrt(tail[0]));
    const int nx = detail::poly_degree(dk.source.degree_x(), dk.size_x);
    const int ny = detail::poly_degree(dk.source.degree_y(), dk.size_y);
    for (int j = 0; j < m; ++j) {
        const VectorC u = svd.matrixU().col(j) * std::sqrt(static_cast<double>(dk.size_x));
        const VectorC v = svd.matrixV().col(j).conjugate() * std::sqrt(static_cast<double>(dk.size_y));
        ap.terms.push_back({std::nullopt, std::nullopt, from_samples(detail::column_grid(u), nx),
                            from_samples(detail::column_grid(v), ny), cplx(s[j])});
        ap.error_history.push_back(std::sqrt(std::max(tail[j + 1], 0.0)));
    }
    out.result.error = ap.error_history.back();
    return out;
}

// ---------------------------------------------------------------------------
// Row skeletons: sum_j psi_j(x) K(xi_j, y)

struct LkResult {
    SparseResult result;
    RecoveryPlan plan;          ///< points xi_j with psi_j, usable by worst_case_error
    std::vector<int> rows;      ///< selected grid rows
};

/// Greedy row-skeleton approximation. Each step picks the grid row whose residual
/// y-section is largest in the inner norm (smallest index on ties), refits all psi_j
/// by least squares over the y grid, and keeps the best prefix so the reported
/// error never increases (unused anchors carry psi = 0).
inline LkResult greedy_lk(const DiscretizedKernel& dk, int m, const GridNorm& nrm = GridNorm::l2()) {
    if (m < 0) throw Error("greedy_lk: m must be nonnegative");
    const int mx = dk.size_x, my = dk.size_y;
    const MatrixC& K = dk.values;
    const Exponent inner = nrm.q;
    const int nx = detail::poly_degree(dk.source.degree_x(), mx);

    MatrixC resid = K;
    MatrixC basis(0, my);  // orthonormal rows (Euclidean) spanning the selected rows
    std::vector<int> selected;
    MatrixC best_coeffs(mx, 0);
    int best_count = 0;
    double best = grid_matrix_norm(K, nrm);

    LkResult out;
    out.result.approximant.dictionary = Dictionary::LK;
    out.result.approximant.error_history.push_back(best);
    auto row_norm = [&](int i) {
        std::vector<cplx> row(my);
        for (int j = 0; j < my; ++j) row[j] = resid(i, j);
        return grid_norm(row, inner);
    };

    for (int step = 0; step < std::min(m, mx); ++step) {
        int pick = -1;
        double pv = -1.0;
        for (int i = 0; i < mx; ++i) {
            if (std::find(selected.begin(), selected.end(), i) != selected.end()) continue;
            const double v = row_norm(i);
            if (v > pv) {
                pv = v;
                pick = i;
            }
        }
        selected.push_back(pick);
        Eigen::RowVectorXcd r = resid.row(pick);
        const double rn = r.norm();
        const double scale = K.row(pick).norm();
        if (rn > 1e-13 * std::max(scale, 1e-300)) {
            Eigen::RowVectorXcd q = r / rn;
            // one reorthogonalization pass for stability
            if (basis.rows() > 0) {
                q -= (q * basis.adjoint()) * basis;
                q /= q.norm();
            }
            basis.conservativeResize(basis.rows() + 1, Eigen::NoChange);
            basis.row(basis.rows() - 1) = q;
            resid = K - (K * basis.adjoint()) * basis;
        }
        // psi coefficients: projection onto span of the selected rows, C B = K Q^H Q.
        MatrixC B(selected.size(), my);
        for (std::size_t t = 0; t < selected.size(); ++t) B.row(t) = K.row(selected[t]);
        const MatrixC proj = (K * basis.adjoint()) * basis;
        MatrixC C = B.transpose().completeOrthogonalDecomposition().solve(proj.transpose()).transpose();
        const MatrixC fitted = K - C * B;
        const double e = grid_matrix_norm(fitted, nrm);
        if (e < best) {
            best = e;
            best_coeffs = C;
            best_count = static_cast<int>(selected.size());
        }
        out.result.approximant.error_history.push_back(best);
    }

    // Assemble: anchors beyond the best prefix contribute psi = 0.
    std::vector<double> pts;
    std::vector<TrigPoly> psis;
    for (std::size_t t = 0; t < selected.size(); ++t) {
        const double xi = grid_node(selected[t], mx);
        TrigPoly psi(nx);
        if (static_cast<int>(t) < best_count) psi = from_samples(detail::column_grid(best_coeffs.col(t)), nx);
        TrigPoly sec = dk.source.section_y(xi);
        out.result.approximant.terms.push_back({xi, std::nullopt, psi, sec, cplx(1.0)});
        pts.push_back(xi);
        psis.push_back(psi);
    }
    out.plan = RecoveryPlan(std::move(pts), std::move(psis));
    out.rows = selected;
    out.result.error = best;
    return out;
}

/// KL: row skeletons in the other variable, sum_j K(x, eta_j) psi_j(y).
inline LkResult greedy_kl(const DiscretizedKernel& dk, int m, const GridNorm& nrm = GridNorm::l2()) {
    DiscretizedKernel t;
    t.size_x = dk.size_y;
    t.size_y = dk.size_x;
    t.values = dk.values.transpose();
    t.source = dk.source.transposed();
    t.provenance = dk.provenance + " (transposed)";
    GridNorm tn{nrm.q, nrm.p, nrm.order == NormOrder::x_first ? NormOrder::y_first : NormOrder::x_first};
    LkResult r = greedy_lk(t, m, tn);
    r.result.approximant.dictionary = Dictionary::KL;
    for (auto& term : r.result.approximant.terms) {
        std::swap(term.anchor_x, term.anchor_y);
        std::swap(term.u, term.v);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Cross functions: sum_{j,k} K(x, b_j) M_{jk} K(a_k, y)

struct CrossResult {
    SparseResult result;
    std::vector<int> rows;  ///< pivot rows a_k
    std::vector<int> cols;  ///< pivot columns b_j
    MatrixC coupling;       ///< M = K(I, J)^{-1} over the best prefix of pivots
};

/// Adaptive cross approximation with full pivoting on the residual (smallest
/// row-major index on ties). A pivot below 1e-13 stops the sweep.
inline CrossResult cross_kk(const DiscretizedKernel& dk, int m, const GridNorm& nrm = GridNorm::l2()) {
    if (m < 0) throw Error("cross_kk: m must be nonnegative");
    const int mx = dk.size_x, my = dk.size_y;
    MatrixC R = dk.values;
    CrossResult out;
    out.result.approximant.dictionary = Dictionary::KK;
    double best = grid_matrix_norm(R, nrm);
    int best_count = 0;
    out.result.approximant.error_history.push_back(best);
    for (int step = 0; step < m; ++step) {
        int pi_ = 0, pj = 0;
        double pv = -1.0;
        for (int i = 0; i < mx; ++i) {
            for (int j = 0; j < my; ++j) {
                const double v = std::abs(R(i, j));
                if (v > pv) {
                    pv = v;
                    pi_ = i;
                    pj = j;
                }
            }
        }
        if (pv < 1e-13) {
            out.result.rank_deficient = true;
            out.result.note = "numerically rank-deficient: pivot " + text::format_double(pv) + " at step " +
                              std::to_string(step + 1);
            break;
        }
        const cplx piv = R(pi_, pj);
        const VectorC col = R.col(pj);
        const Eigen::RowVectorXcd row = R.row(pi_);
        R -= col * row / piv;
        out.rows.push_back(pi_);
        out.cols.push_back(pj);
        const double e = grid_matrix_norm(R, nrm);
        if (e < best) {
            best = e;
            best_count = static_cast<int>(out.rows.size());
        }
        out.result.approximant.error_history.push_back(best);
    }
    // The best prefix carries the coupling; later anchor pairs contribute zero.
    const int r = static_cast<int>(out.rows.size());
    MatrixC core(best_count, best_count);
    for (int k = 0; k < best_count; ++k) {
        for (int j = 0; j < best_count; ++j) core(k, j) = dk.values(out.rows[k], out.cols[j]);
    }
    out.coupling = best_count > 0 ? MatrixC(core.fullPivLu().inverse()) : MatrixC(0, 0);
    for (int j = 0; j < r; ++j) {
        const double a = grid_node(out.rows[j], mx);
        const double b = grid_node(out.cols[j], my);
        const TrigPoly u = dk.source.section_x(b);
        TrigPoly v(dk.source.degree_y());
        for (int k = 0; j < best_count && k < best_count; ++k) {
            v = v + out.coupling(j, k) * dk.source.section_y(grid_node(out.rows[k], mx));
        }
        out.result.approximant.terms.push_back({a, b, u, v, cplx(1.0)});
    }
    out.result.error = out.result.approximant.error_history.back();
    return out;
}

// ---------------------------------------------------------------------------
// Cubature: J_K ~ sum_mu lambda_mu K(xi_mu, .)

struct CubatureResult {
    std::vector<double> knots;
    std::vector<cplx> weights;
    double error = 0.0;                 ///< ||J_K - sum lambda K(xi, .)||_{q'}
    std::vector<double> error_history;  ///< after 0..m knots
    SparseApproximant approximant;
};

/// ||J_K - sum_mu lambda_mu K(xi_mu, .)||_{q'}: the worst-case cubature error over W^K_q.
inline double cubature_error(const BivariateTrigPoly& K, std::span<const double> knots,
                             std::span<const cplx> weights, Exponent q, int oversample = default_oversample) {
    if (knots.size() != weights.size()) throw Error("cubature_error: knots/weights length mismatch");
    TrigPoly r = K.mean_over_x();
    for (std::size_t i = 0; i < knots.size(); ++i) r = r - weights[i] * K.section_y(knots[i]);
    return norm(r, q.dual(), oversample);
}

/// Greedy knot selection (orthogonal matching pursuit over a candidate grid of x nodes)
/// with least-squares weights; the reported error is the true q' norm, kept monotone
/// by retaining the best prefix (later knots then carry weight 0).
inline CubatureResult cubature_optimize(const BivariateTrigPoly& K, int m, Exponent q,
                                        std::optional<int> candidates = std::nullopt) {
    if (m < 0) throw Error("cubature_optimize: m must be nonnegative");
    const int mc = candidates.value_or(default_sparse_grid(K.degree_x()));
    const int my = default_sparse_grid(K.degree_y());
    const GridFunction2 g = to_samples(K, mc, my);
    MatrixC A(mc, my);
    for (int i = 0; i < mc; ++i) {
        for (int j = 0; j < my; ++j) A(i, j) = g.at(i, j);
    }
    const GridFunction jg = to_samples(K.mean_over_x(), my);
    const VectorC J = Eigen::Map<const VectorC>(jg.samples.data(), my);

    CubatureResult out;
    std::vector<int> sel;
    VectorC resid = J;
    double best = cubature_error(K, {}, {}, q);
    std::vector<cplx> best_w;
    int best_count = 0;
    out.error_history.push_back(best);
    for (int step = 0; step < std::min(m, mc); ++step) {
        int pick = -1;
        double pv = -1.0;
        for (int i = 0; i < mc; ++i) {
            if (std::find(sel.begin(), sel.end(), i) != sel.end()) continue;
            const double an = A.row(i).norm();
            const double v = an > 0.0 ? std::abs(A.row(i).conjugate().dot(resid)) / an : 0.0;
            if (v > pv) {
                pv = v;
                pick = i;
            }
        }
        sel.push_back(pick);
        MatrixC B(my, sel.size());
        for (std::size_t t = 0; t < sel.size(); ++t) B.col(t) = A.row(sel[t]).transpose();
        const VectorC lam = B.completeOrthogonalDecomposition().solve(J);
        resid = J - B * lam;
        std::vector<double> kn;
        std::vector<cplx> w;
        for (std::size_t t = 0; t < sel.size(); ++t) {
            kn.push_back(grid_node(sel[t], mc));
            w.push_back(lam(t));
        }
        const double e = cubature_error(K, kn, w, q);
        if (e < best) {
            best = e;
            best_w = w;
            best_count = static_cast<int>(sel.size());
        }
        out.error_history.push_back(best);
    }
    out.approximant.dictionary = Dictionary::CubatureD;
    for (std::size_t t = 0; t < sel.size(); ++t) {
        const double xi = grid_node(sel[t], mc);
        out.knots.push_back(xi);
        out.weights.push_back(static_cast<int>(t) < best_count ? best_w[t] : cplx{0.0});
        out.approximant.terms.push_back({xi, std::nullopt, TrigPoly::constant(1.0), K.section_y(xi), out.weights.back()});
    }
    out.approximant.error_history = out.error_history;
    out.error = best;
    return out;
}

}  // namespace trigrec
