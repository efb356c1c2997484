#pragma once

// Trigonometric polynomials of one and two variables on the torus with the
// normalized measure dx/2pi, their grid samples, and L_p / mixed L_p norms.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trigrec/error.hpp"
#include "trigrec/exponent.hpp"
#include "trigrec/fft.hpp"

namespace trigrec {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Nonnegative residue of k modulo m.
inline int wrap_index(long long k, int m) {
    long long r = k % m;
    return static_cast<int>(r < 0 ? r + m : r);
}

/// t(x) = sum_{|k|<=N} c_k e^{ikx}. Value type, immutable once built.
class TrigPoly {
public:
    TrigPoly() : degree_(0), coeffs_(1, cplx{0.0}) {}

    /// Zero polynomial of the given degree.
    explicit TrigPoly(int degree) : degree_(check_degree(degree)), coeffs_(2 * degree_ + 1, cplx{0.0}) {}

    /// Coefficients ordered k = -N..N.
    TrigPoly(int degree, std::vector<cplx> coeffs) : degree_(check_degree(degree)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != static_cast<std::size_t>(2 * degree_ + 1)) {
            throw Error("TrigPoly: expected " + std::to_string(2 * degree_ + 1) + " coefficients");
        }
    }

    /// Builds c_k = gen(k) for |k| <= degree.
    template <typename Gen>
    static TrigPoly generate(int degree, Gen&& gen) {
        std::vector<cplx> c(2 * check_degree(degree) + 1);
        for (int k = -degree; k <= degree; ++k) c[k + degree] = cplx(gen(k));
        return TrigPoly(degree, std::move(c));
    }

    static TrigPoly constant(cplx value) { return TrigPoly(0, {value}); }

    /// c * e^{ikx}
    static TrigPoly exponential(int k, cplx c = 1.0) {
        const int n = std::abs(k);
        std::vector<cplx> coeffs(2 * n + 1, cplx{0.0});
        coeffs[k + n] = c;
        return TrigPoly(n, std::move(coeffs));
    }

    int degree() const { return degree_; }
    std::span<const cplx> coeffs() const { return coeffs_; }

    cplx coeff(int k) const {
        if (k < -degree_ || k > degree_) return cplx{0.0};
        return coeffs_[k + degree_];
    }

    /// Horner evaluation in w = e^{ix}.
    cplx operator()(double x) const {
        const cplx w = std::polar(1.0, x);
        cplx acc{0.0};
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * w + *it;
        return acc * std::polar(1.0, -static_cast<double>(degree_) * x);
    }

    /// True iff c_{-k} = conj(c_k) for all k, i.e. the polynomial is real-valued.
    bool is_real(double tol = 1e-14) const {
        for (int k = 0; k <= degree_; ++k) {
            if (std::abs(coeff(-k) - std::conj(coeff(k))) > tol) return false;
        }
        return true;
    }

    /// Same polynomial carried at another degree (truncating or zero-padding).
    TrigPoly with_degree(int degree) const {
        return generate(degree, [&](int k) { return coeff(k); });
    }

    /// x -> f(x - y).
    TrigPoly translated(double y) const {
        return generate(degree_, [&](int k) { return coeff(k) * std::polar(1.0, -k * y); });
    }

    /// Largest |c_k| difference over the union of supports.
    friend double max_coeff_diff(const TrigPoly& a, const TrigPoly& b) {
        const int n = std::max(a.degree_, b.degree_);
        double m = 0.0;
        for (int k = -n; k <= n; ++k) m = std::max(m, std::abs(a.coeff(k) - b.coeff(k)));
        return m;
    }

    friend TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
        const int n = std::max(a.degree_, b.degree_);
        return generate(n, [&](int k) { return a.coeff(k) + b.coeff(k); });
    }
    friend TrigPoly operator-(const TrigPoly& a, const TrigPoly& b) {
        const int n = std::max(a.degree_, b.degree_);
        return generate(n, [&](int k) { return a.coeff(k) - b.coeff(k); });
    }
    friend TrigPoly operator*(cplx s, const TrigPoly& a) {
        return generate(a.degree_, [&](int k) { return s * a.coeff(k); });
    }

    /// Pointwise product (degrees add).
    friend TrigPoly multiply(const TrigPoly& a, const TrigPoly& b) {
        const int n = a.degree_ + b.degree_;
        std::vector<cplx> c(2 * n + 1, cplx{0.0});
        for (int i = -a.degree_; i <= a.degree_; ++i) {
            const cplx ai = a.coeff(i);
            if (ai == cplx{0.0}) continue;
            for (int j = -b.degree_; j <= b.degree_; ++j) c[i + j + n] += ai * b.coeff(j);
        }
        return TrigPoly(n, std::move(c));
    }

    /// Sum of |c_k|^2, the squared L_2 norm by Parseval.
    double l2_norm_squared() const {
        double s = 0.0;
        for (const auto& c : coeffs_) s += std::norm(c);
        return s;
    }

private:
    static int check_degree(int d) {
        if (d < 0) throw Error("TrigPoly: negative degree");
        return d;
    }

    int degree_;
    std::vector<cplx> coeffs_;
};

/// K(x, y) = sum c_{k,l} e^{i(kx + ly)}, stored as sorted nonzero entries so that
/// shift kernels g(x - y) of high degree cost O(N) rather than O(N^2).
class BivariateTrigPoly {
public:
    struct Entry {
        int k;
        int l;
        cplx c;
    };

    BivariateTrigPoly() = default;

    /// Entries are merged by (k, l); exact zeros are dropped. Degrees may exceed the support.
    BivariateTrigPoly(int degree_x, int degree_y, std::vector<Entry> entries)
        : nx_(degree_x), ny_(degree_y), entries_(std::move(entries)) {
        if (nx_ < 0 || ny_ < 0) throw Error("BivariateTrigPoly: negative degree");
        std::sort(entries_.begin(), entries_.end(),
                  [](const Entry& a, const Entry& b) { return a.k != b.k ? a.k < b.k : a.l < b.l; });
        std::vector<Entry> merged;
        merged.reserve(entries_.size());
        for (const auto& e : entries_) {
            if (std::abs(e.k) > nx_ || std::abs(e.l) > ny_) {
                throw Error("BivariateTrigPoly: entry outside declared degrees");
            }
            if (!merged.empty() && merged.back().k == e.k && merged.back().l == e.l) {
                merged.back().c += e.c;
            } else {
                merged.push_back(e);
            }
        }
        std::erase_if(merged, [](const Entry& e) { return e.c == cplx{0.0}; });
        entries_ = std::move(merged);
    }

    template <typename Gen>
    static BivariateTrigPoly generate(int degree_x, int degree_y, Gen&& gen) {
        std::vector<Entry> e;
        for (int k = -degree_x; k <= degree_x; ++k) {
            for (int l = -degree_y; l <= degree_y; ++l) e.push_back({k, l, cplx(gen(k, l))});
        }
        return BivariateTrigPoly(degree_x, degree_y, std::move(e));
    }

    /// u(x) v(y)
    static BivariateTrigPoly tensor(const TrigPoly& u, const TrigPoly& v) {
        return generate(u.degree(), v.degree(), [&](int k, int l) { return u.coeff(k) * v.coeff(l); });
    }

    int degree_x() const { return nx_; }
    int degree_y() const { return ny_; }
    std::span<const Entry> entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }

    cplx coeff(int k, int l) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(k, l),
                                   [](const Entry& e, const std::pair<int, int>& key) {
                                       return e.k != key.first ? e.k < key.first : e.l < key.second;
                                   });
        if (it != entries_.end() && it->k == k && it->l == l) return it->c;
        return cplx{0.0};
    }

    cplx operator()(double x, double y) const {
        cplx s{0.0};
        for (const auto& e : entries_) s += e.c * std::polar(1.0, e.k * x + e.l * y);
        return s;
    }

    /// x -> K(x, y) for fixed y.
    TrigPoly section_x(double y) const {
        std::vector<cplx> c(2 * nx_ + 1, cplx{0.0});
        for (const auto& e : entries_) c[e.k + nx_] += e.c * std::polar(1.0, e.l * y);
        return TrigPoly(nx_, std::move(c));
    }

    /// y -> K(x, y) for fixed x.
    TrigPoly section_y(double x) const {
        std::vector<cplx> c(2 * ny_ + 1, cplx{0.0});
        for (const auto& e : entries_) c[e.l + ny_] += e.c * std::polar(1.0, e.k * x);
        return TrigPoly(ny_, std::move(c));
    }

    /// y -> integral of K(x, y) over x, i.e. the k = 0 slice.
    TrigPoly mean_over_x() const {
        std::vector<cplx> c(2 * ny_ + 1, cplx{0.0});
        for (const auto& e : entries_) {
            if (e.k == 0) c[e.l + ny_] += e.c;
        }
        return TrigPoly(ny_, std::move(c));
    }

    /// Applies coefficient multipliers mx(k) * my(l).
    template <typename MulX, typename MulY>
    BivariateTrigPoly multiplied(MulX&& mx, MulY&& my) const {
        std::vector<Entry> e(entries_);
        for (auto& x : e) x.c *= cplx(mx(x.k)) * cplx(my(x.l));
        return BivariateTrigPoly(nx_, ny_, std::move(e));
    }

    /// (x, y) -> K(y, x)
    BivariateTrigPoly transposed() const {
        std::vector<Entry> e;
        e.reserve(entries_.size());
        for (const auto& x : entries_) e.push_back({x.l, x.k, x.c});
        return BivariateTrigPoly(ny_, nx_, std::move(e));
    }

    friend BivariateTrigPoly operator+(const BivariateTrigPoly& a, const BivariateTrigPoly& b) {
        std::vector<Entry> e(a.entries_.begin(), a.entries_.end());
        e.insert(e.end(), b.entries_.begin(), b.entries_.end());
        return BivariateTrigPoly(std::max(a.nx_, b.nx_), std::max(a.ny_, b.ny_), std::move(e));
    }
    friend BivariateTrigPoly operator-(const BivariateTrigPoly& a, const BivariateTrigPoly& b) {
        return a + cplx(-1.0) * b;
    }
    friend BivariateTrigPoly operator*(cplx s, const BivariateTrigPoly& a) {
        std::vector<Entry> e(a.entries_);
        for (auto& x : e) x.c *= s;
        return BivariateTrigPoly(a.nx_, a.ny_, std::move(e));
    }

    friend double max_coeff_diff(const BivariateTrigPoly& a, const BivariateTrigPoly& b) {
        const BivariateTrigPoly d = a - b;
        double m = 0.0;
        for (const auto& e : d.entries_) m = std::max(m, std::abs(e.c));
        return m;
    }

    double l2_norm_squared() const {
        double s = 0.0;
        for (const auto& e : entries_) s += std::norm(e.c);
        return s;
    }

    bool is_real(double tol = 1e-14) const {
        for (const auto& e : entries_) {
            if (std::abs(coeff(-e.k, -e.l) - std::conj(e.c)) > tol) return false;
        }
        return true;
    }

private:
    int nx_ = 0;
    int ny_ = 0;
    std::vector<Entry> entries_;
};

/// Samples at the nodes 2 pi j / M, j = 0..M-1. `band_limit` records the degree of
/// the polynomial the samples came from, when known.
struct GridFunction {
    int size = 0;
    std::vector<cplx> samples;
    std::optional<int> band_limit;
};

/// Samples on the M1 x M2 tensor grid, row-major with x along rows: index i * M2 + j.
struct GridFunction2 {
    int size_x = 0;
    int size_y = 0;
    std::vector<cplx> samples;
    std::optional<int> band_limit_x;
    std::optional<int> band_limit_y;

    cplx at(int i, int j) const { return samples[static_cast<std::size_t>(i) * size_y + j]; }
};

inline double grid_node(int j, int m) { return two_pi * j / m; }

inline GridFunction to_samples(const TrigPoly& f, int m) {
    if (m < 1) throw Error("to_samples: grid size must be positive");
    std::vector<cplx> buf(m, cplx{0.0});
    const int n = f.degree();
    for (int k = -n; k <= n; ++k) buf[wrap_index(k, m)] += f.coeff(k);
    fft::transform(buf, fft::Direction::backward);
    return GridFunction{m, std::move(buf), n};
}

inline TrigPoly from_samples(const GridFunction& g, int degree) {
    if (degree < 0) throw Error("from_samples: negative degree");
    if (g.size < 2 * degree + 1) {
        throw Error("aliasing risk: grid of " + std::to_string(g.size) + " points cannot resolve degree " +
                    std::to_string(degree));
    }
    if (g.band_limit && g.size < 2 * *g.band_limit + 1) {
        throw Error("aliasing risk: samples of a degree-" + std::to_string(*g.band_limit) +
                    " polynomial on " + std::to_string(g.size) + " points are aliased");
    }
    if (g.samples.size() != static_cast<std::size_t>(g.size)) throw Error("from_samples: sample count mismatch");
    std::vector<cplx> buf(g.samples);
    fft::transform(buf, fft::Direction::forward);
    const double inv = 1.0 / g.size;
    return TrigPoly::generate(degree, [&](int k) { return buf[wrap_index(k, g.size)] * inv; });
}

inline GridFunction2 to_samples(const BivariateTrigPoly& f, int m1, int m2) {
    if (m1 < 1 || m2 < 1) throw Error("to_samples: grid size must be positive");
    std::vector<cplx> buf(static_cast<std::size_t>(m1) * m2, cplx{0.0});
    for (const auto& e : f.entries()) {
        buf[static_cast<std::size_t>(wrap_index(e.k, m1)) * m2 + wrap_index(e.l, m2)] += e.c;
    }
    fft::transform_2d(buf, m1, m2, fft::Direction::backward);
    return GridFunction2{m1, m2, std::move(buf), f.degree_x(), f.degree_y()};
}

inline BivariateTrigPoly from_samples(const GridFunction2& g, int degree_x, int degree_y) {
    if (g.size_x < 2 * degree_x + 1 || g.size_y < 2 * degree_y + 1) {
        throw Error("aliasing risk: grid too coarse for the requested degrees");
    }
    if ((g.band_limit_x && g.size_x < 2 * *g.band_limit_x + 1) ||
        (g.band_limit_y && g.size_y < 2 * *g.band_limit_y + 1)) {
        throw Error("aliasing risk: samples are aliased");
    }
    std::vector<cplx> buf(g.samples);
    fft::transform_2d(buf, g.size_x, g.size_y, fft::Direction::forward);
    const double inv = 1.0 / (static_cast<double>(g.size_x) * g.size_y);
    return BivariateTrigPoly::generate(degree_x, degree_y, [&](int k, int l) {
        return buf[static_cast<std::size_t>(wrap_index(k, g.size_x)) * g.size_y + wrap_index(l, g.size_y)] * inv;
    });
}

/// Normalized-measure convolution: coefficients multiply.
inline TrigPoly convolve(const TrigPoly& f, const TrigPoly& g) {
    const int n = std::min(f.degree(), g.degree());
    return TrigPoly::generate(n, [&](int k) { return f.coeff(k) * g.coeff(k); });
}

inline BivariateTrigPoly convolve(const BivariateTrigPoly& f, const BivariateTrigPoly& g) {
    std::vector<BivariateTrigPoly::Entry> e;
    for (const auto& x : f.entries()) {
        const cplx c = g.coeff(x.k, x.l);
        if (c != cplx{0.0}) e.push_back({x.k, x.l, x.c * c});
    }
    return BivariateTrigPoly(std::min(f.degree_x(), g.degree_x()), std::min(f.degree_y(), g.degree_y()),
                             std::move(e));
}

/// Discrete L_p norm of grid values under the uniform (normalized) measure.
inline double grid_norm(std::span<const cplx> values, Exponent p) {
    if (values.empty()) return 0.0;
    if (p.is_infinite()) {
        double m = 0.0;
        for (const auto& v : values) m = std::max(m, std::abs(v));
        return m;
    }
    const double pv = p.value();
    double s = 0.0;
    if (pv == 2.0) {
        for (const auto& v : values) s += std::norm(v);
        return std::sqrt(s / values.size());
    }
    if (pv == 1.0) {
        for (const auto& v : values) s += std::abs(v);
        return s / values.size();
    }
    for (const auto& v : values) s += std::pow(std::abs(v), pv);
    return std::pow(s / values.size(), 1.0 / pv);
}

/// Same, for nonnegative reals (norms of sections).
inline double grid_norm_real(std::span<const double> values, Exponent p) {
    if (values.empty()) return 0.0;
    if (p.is_infinite()) return *std::max_element(values.begin(), values.end());
    const double pv = p.value();
    double s = 0.0;
    for (double v : values) s += std::pow(v, pv);
    return std::pow(s / values.size(), 1.0 / pv);
}

inline constexpr int default_oversample = 16;
inline constexpr int default_oversample_2d = 4;

/// Grid size used by the norms: oversample * (2N + 1).
inline int norm_grid_size(int degree, int oversample) { return oversample * (2 * degree + 1); }

/// L_p norm by uniform quadrature on oversample*(2N+1) nodes; for p = inf the grid maximum.
inline double norm(const TrigPoly& f, Exponent p, int oversample = default_oversample) {
    if (oversample < 4) throw Error("norm: oversample must be at least 4");
    const GridFunction g = to_samples(f, norm_grid_size(f.degree(), oversample));
    return grid_norm(g.samples, p);
}

enum class NormOrder {
    x_first,  ///< ||  ||F(., y)||_{p1}  ||_{p2}  (the vector L_p norm)
    y_first,  ///< ||  ||F(x, .)||_{p2}  ||_{p1}  (the starred norm L*_{p1,p2})
};

/// Mixed norm of grid values; p1 always acts on x, p2 on y, `order` picks the inner one.
inline double grid_mixed_norm(const GridFunction2& g, Exponent p1, Exponent p2, NormOrder order) {
    std::vector<double> inner;
    std::vector<cplx> line;
    if (order == NormOrder::x_first) {
        inner.resize(g.size_y);
        line.resize(g.size_x);
        for (int j = 0; j < g.size_y; ++j) {
            for (int i = 0; i < g.size_x; ++i) line[i] = g.at(i, j);
            inner[j] = grid_norm(line, p1);
        }
        return grid_norm_real(inner, p2);
    }
    inner.resize(g.size_x);
    for (int i = 0; i < g.size_x; ++i) {
        std::span<const cplx> row(g.samples.data() + static_cast<std::size_t>(i) * g.size_y, g.size_y);
        inner[i] = grid_norm(row, p2);
    }
    return grid_norm_real(inner, p1);
}

inline double mixed_norm(const BivariateTrigPoly& f, Exponent p1, Exponent p2, NormOrder order = NormOrder::x_first,
                         int oversample = default_oversample_2d) {
    if (oversample < 1) throw Error("mixed_norm: oversample must be positive");
    const GridFunction2 g =
        to_samples(f, norm_grid_size(f.degree_x(), oversample), norm_grid_size(f.degree_y(), oversample));
    return grid_mixed_norm(g, p1, p2, order);
}

}  // namespace trigrec
