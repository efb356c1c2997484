#pragma once

// Lower bounds for optimal recovery from fooling polynomials: a nonzero t in
// T(2N) vanishing at every sample point is invisible to any recovery map, so
// ||t||_p / ||t||_q bounds the optimal error from below.
//
// Witness: with V the polynomials in T(N) vanishing at the points and
// K_V(x, x) = sum |e_i(x)|^2 over an orthonormal basis of V, the function
// u = K_V(., x*) maximizes |u(x*)|^2 / ||u||_2^2 = K_V(x*, x*), and t = |u|^2
// lies in T(2N). Since the mean of K_V(x, x) is dim V >= theta(N) / 2, the
// ratio for q = 1, p = inf is at least theta(N) / 2.

#include <algorithm>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "trigrec/error.hpp"
#include "trigrec/exponent.hpp"
#include "trigrec/trigpoly.hpp"

namespace trigrec {

struct FoolingResult {
    double bound = 0.0;           ///< certified lower bound ||t||_p / ||t||_q
    int null_dimension = 0;       ///< dim of the polynomials in T(N) vanishing at the points
    double kernel_peak = 0.0;     ///< max over the grid of K_V(x, x)
    bool squared_witness = true;  ///< witness is |u|^2 (else u itself)
    TrigPoly witness;             ///< d = 1
    BivariateTrigPoly witness2;   ///< d = 2
};

namespace detail {

inline Exponent doubled(Exponent e) { return e.is_infinite() ? e : Exponent(2.0 * e.value()); }

/// Orthonormal basis (columns) of the null space of A; identity when A has no rows.
inline Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& a, int dim) {
    if (a.rows() == 0) return Eigen::MatrixXcd::Identity(dim, dim);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double tol = 1e-10 * std::max(1.0, s.size() ? s(0) : 0.0);
    int rank = 0;
    for (int i = 0; i < s.size(); ++i) rank += s(i) > tol ? 1 : 0;
    return svd.matrixV().rightCols(dim - rank);
}

inline void check_fooling_range(std::size_t m, long long theta, Exponent q, Exponent p) {
    if (2 * static_cast<long long>(m) > theta) {
        throw Error("fooling_bound: m = " + std::to_string(m) + " exceeds theta(N)/2 = " + std::to_string(theta) +
                    "/2, outside the lemma's range");
    }
    if (q.reciprocal() < p.reciprocal()) throw Error("fooling_bound: requires q <= p");
}

}  // namespace detail

/// d = 1: points on the circle, degree N.
inline FoolingResult fooling_bound(std::span<const double> points, int N, Exponent q, Exponent p) {
    if (N < 0) throw Error("fooling_bound: negative degree");
    const int dim = 2 * N + 1;
    detail::check_fooling_range(points.size(), dim, q, p);
    Eigen::MatrixXcd a(points.size(), dim);
    for (std::size_t j = 0; j < points.size(); ++j) {
        for (int k = -N; k <= N; ++k) a(j, k + N) = std::polar(1.0, k * points[j]);
    }
    const Eigen::MatrixXcd basis = detail::null_space(a, dim);
    const int grid = norm_grid_size(N, default_oversample);
    Eigen::MatrixXcd f(grid, dim);
    for (int i = 0; i < grid; ++i) {
        for (int k = -N; k <= N; ++k) f(i, k + N) = std::polar(1.0, k * grid_node(i, grid));
    }
    const Eigen::MatrixXcd e = f * basis;
    Eigen::Index best = 0;
    const double peak = e.rowwise().squaredNorm().maxCoeff(&best);
    const Eigen::VectorXcd uc = basis * e.row(best).adjoint();
    const TrigPoly u(N, std::vector<cplx>(uc.data(), uc.data() + uc.size()));

    FoolingResult out;
    out.null_dimension = static_cast<int>(basis.cols());
    out.kernel_peak = peak;
    const double ratio_sq = std::pow(norm(u, detail::doubled(p)) / norm(u, detail::doubled(q)), 2);
    const double ratio_u = norm(u, p) / norm(u, q);
    if (ratio_sq >= ratio_u) {
        out.bound = ratio_sq;
        const TrigPoly uconj = TrigPoly::generate(N, [&](int k) { return std::conj(u.coeff(-k)); });
        out.witness = multiply(u, uconj);
    } else {
        out.bound = ratio_u;
        out.squared_witness = false;
        out.witness = u;
    }
    return out;
}

/// d = 2: points on the torus, degrees (N1, N2).
inline FoolingResult fooling_bound(std::span<const std::pair<double, double>> points, int N1, int N2, Exponent q,
                                   Exponent p) {
    if (N1 < 0 || N2 < 0) throw Error("fooling_bound: negative degree");
    const int w2 = 2 * N2 + 1;
    const int dim = (2 * N1 + 1) * w2;
    detail::check_fooling_range(points.size(), dim, q, p);
    auto idx = [&](int k, int l) { return (k + N1) * w2 + (l + N2); };
    Eigen::MatrixXcd a(points.size(), dim);
    for (std::size_t j = 0; j < points.size(); ++j) {
        for (int k = -N1; k <= N1; ++k) {
            for (int l = -N2; l <= N2; ++l) a(j, idx(k, l)) = std::polar(1.0, k * points[j].first + l * points[j].second);
        }
    }
    const Eigen::MatrixXcd basis = detail::null_space(a, dim);
    const int g1 = norm_grid_size(N1, default_oversample_2d), g2 = norm_grid_size(N2, default_oversample_2d);
    Eigen::MatrixXcd f(static_cast<Eigen::Index>(g1) * g2, dim);
    for (int i = 0; i < g1; ++i) {
        for (int j = 0; j < g2; ++j) {
            for (int k = -N1; k <= N1; ++k) {
                for (int l = -N2; l <= N2; ++l) {
                    f(static_cast<Eigen::Index>(i) * g2 + j, idx(k, l)) =
                        std::polar(1.0, k * grid_node(i, g1) + l * grid_node(j, g2));
                }
            }
        }
    }
    const Eigen::MatrixXcd e = f * basis;
    Eigen::Index best = 0;
    const double peak = e.rowwise().squaredNorm().maxCoeff(&best);
    const Eigen::VectorXcd uc = basis * e.row(best).adjoint();
    std::vector<BivariateTrigPoly::Entry> entries;
    for (int k = -N1; k <= N1; ++k) {
        for (int l = -N2; l <= N2; ++l) entries.push_back({k, l, uc(idx(k, l))});
    }
    const BivariateTrigPoly u(N1, N2, std::move(entries));

    auto full_norm = [&](Exponent s) { return mixed_norm(u, s, s, NormOrder::x_first, 8); };
    FoolingResult out;
    out.null_dimension = static_cast<int>(basis.cols());
    out.kernel_peak = peak;
    const double ratio_sq = std::pow(full_norm(detail::doubled(p)) / full_norm(detail::doubled(q)), 2);
    const double ratio_u = full_norm(p) / full_norm(q);
    out.bound = std::max(ratio_sq, ratio_u);
    out.squared_witness = ratio_sq >= ratio_u;
    out.witness2 = u;
    return out;
}

}  // namespace trigrec
