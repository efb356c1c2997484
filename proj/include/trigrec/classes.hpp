#pragma once

// Smoothness classes W^a_q, H^a_q and kernel classes W^K_q: representatives,
// membership margins, worst-case recovery error of a plan, and the extremal
// kernels of the lower-bound construction.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include "trigrec/error.hpp"
#include "trigrec/exponent.hpp"
#include "trigrec/kernels.hpp"
#include "trigrec/operators.hpp"
#include "trigrec/text.hpp"
#include "trigrec/trigpoly.hpp"

namespace trigrec {

struct SmoothnessParams {
    double a1 = 1.0;
    double a2 = 1.0;
    Exponent q1 = Exponent(2.0);
    Exponent q2 = Exponent(2.0);
    int l = 2;  ///< difference order, > max(a1, a2)

    void validate() const {
        if (!(a1 > 0.0) || !(a2 > 0.0)) throw Error("smoothness must be positive");
        if (!(l > std::max(a1, a2))) throw Error("difference order l must exceed max(a1, a2)");
    }
};

/// W^K_q: functions f = int K(x, y) phi(y) dmu(y) with ||phi||_q <= 1.
struct KernelClass {
    BivariateTrigPoly kernel;
    Exponent q = Exponent(1.0);
};

// ---------------------------------------------------------------------------
// Representatives

namespace detail {
inline void check_convergent(double a) {
    if (!(a > 1.0)) throw Error("divergent kernel: Bernoulli smoothness must exceed 1, got " + text::format_double(a));
}
}  // namespace detail

/// f = phi * F_a. If ||phi||_q > 1, phi is rescaled to the unit sphere and a warning is written.
inline TrigPoly w_member(double a, Exponent q, const TrigPoly& phi, std::ostream* warn = &std::clog) {
    detail::check_convergent(a);
    TrigPoly g = phi;
    const double nq = norm(phi, q);
    if (nq > 1.0 + 1e-12) {
        if (warn) *warn << "warning: w_member: ||phi||_" << q.str() << " = " << nq << " > 1, normalizing\n";
        g = (1.0 / nq) * phi;
    }
    return multiplier(MultiplierKind::I, {a, a, 0}, g);
}

/// Bivariate f = phi * (F_{a1} (x) F_{a2}) with the mixed (q1, q2) norm of phi at most 1.
inline BivariateTrigPoly w_member(double a1, double a2, Exponent q1, Exponent q2, const BivariateTrigPoly& phi,
                                  std::ostream* warn = &std::clog) {
    detail::check_convergent(a1);
    detail::check_convergent(a2);
    BivariateTrigPoly g = phi;
    const double nq = mixed_norm(phi, q1, q2);
    if (nq > 1.0 + 1e-12) {
        if (warn) *warn << "warning: w_member: mixed norm of phi = " << nq << " > 1, normalizing\n";
        g = (1.0 / nq) * phi;
    }
    return g.multiplied([&](int k) { return bernoulli_coeff(k, a1, a1); },
                        [&](int l) { return bernoulli_coeff(l, a2, a2); });
}

// ---------------------------------------------------------------------------
// Membership margins

enum class HCheckMode { differences, blocks };

/// Step sizes used by the difference-mode check: pi * 2^{-u}, u = 0..8.
inline std::vector<double> difference_steps() {
    std::vector<double> t;
    for (int u = 0; u <= 8; ++u) t.push_back(pi * std::ldexp(1.0, -u));
    return t;
}

/// Smallest B such that the class inequality holds for f: over dyadic blocks
/// (max_s ||A_s f||_q 2^{(a,s)}) or over l-th mixed differences on the step grid.
inline double h_check(const BivariateTrigPoly& f, const SmoothnessParams& sp, HCheckMode mode) {
    sp.validate();
    auto qnorm = [&](const BivariateTrigPoly& g) {
        return g.nnz() == 0 ? 0.0 : mixed_norm(g, sp.q1, sp.q2, NormOrder::x_first);
    };
    double margin = 0.0;
    if (mode == HCheckMode::blocks) {
        // A_s is supported on 2^{s-2} < |k| < 2^s for s >= 2.
        auto last_block = [](int degree) {
            if (degree == 0) return 0;
            int s = 1;
            while ((1 << (s - 1)) < degree) ++s;
            return s;
        };
        const int s1max = last_block(f.degree_x());
        const int s2max = last_block(f.degree_y());
        for (int s1 = 0; s1 <= s1max; ++s1) {
            for (int s2 = 0; s2 <= s2max; ++s2) {
                const BivariateTrigPoly b =
                    f.multiplied([&](int k) { return ablock_coeff(k, s1); }, [&](int l) { return ablock_coeff(l, s2); });
                const double v = qnorm(b) * std::pow(2.0, sp.a1 * s1 + sp.a2 * s2);
                margin = std::max(margin, v);
            }
        }
        return margin;
    }
    const auto steps = difference_steps();
    auto diff_symbol = [&](int k, double t) { return std::pow(std::polar(1.0, k * t) - 1.0, sp.l); };
    margin = qnorm(f);
    for (double t1 : steps) {
        const BivariateTrigPoly d = f.multiplied([&](int k) { return diff_symbol(k, t1); }, [](int) { return 1.0; });
        margin = std::max(margin, qnorm(d) / std::pow(t1, sp.a1));
    }
    for (double t2 : steps) {
        const BivariateTrigPoly d = f.multiplied([](int) { return 1.0; }, [&](int l) { return diff_symbol(l, t2); });
        margin = std::max(margin, qnorm(d) / std::pow(t2, sp.a2));
    }
    for (double t1 : steps) {
        for (double t2 : steps) {
            const BivariateTrigPoly d = f.multiplied([&](int k) { return diff_symbol(k, t1); },
                                                     [&](int l) { return diff_symbol(l, t2); });
            margin = std::max(margin, qnorm(d) / (std::pow(t1, sp.a1) * std::pow(t2, sp.a2)));
        }
    }
    return margin;
}

// ---------------------------------------------------------------------------
// Worst-case recovery error

namespace detail {

inline double section_norm(std::span<const cplx> coeffs, int degree, Exponent p, int grid) {
    if (!p.is_infinite() && p.value() == 2.0) {
        double s = 0.0;
        for (const auto& c : coeffs) s += std::norm(c);
        return std::sqrt(s);
    }
    const GridFunction g = to_samples(TrigPoly(degree, std::vector<cplx>(coeffs.begin(), coeffs.end())), grid);
    return grid_norm(g.samples, p);
}

inline int round_up(int value, int multiple) { return ((value + multiple - 1) / multiple) * multiple; }

}  // namespace detail

/// Mixed norm of R(x, y) = K(x, y) - sum_j K(xi_j, y) psi_j(x): the (p, q') vector norm
/// for p < inf and the starred norm L*_{inf, q'} (y first) for p = inf. It bounds the
/// worst-case recovery error over W^K_q from above and equals it for p = inf.
inline double worst_case_error(const KernelClass& kc, const RecoveryPlan& plan, Exponent p,
                               int oversample = default_oversample_2d) {
    if (oversample < 1) throw Error("worst_case_error: oversample must be positive");
    const BivariateTrigPoly& K = kc.kernel;
    const Exponent qd = kc.q.dual();
    const int m = static_cast<int>(plan.size());
    const int n1 = K.degree_x();
    const int n2 = K.degree_y();
    const int dx = std::max(n1, plan.degree());
    int gx = norm_grid_size(dx, oversample);
    int gy = norm_grid_size(n2, oversample);
    const bool periodic = m > 0 && plan.translation_step().has_value() && is_shift_kernel(K);

    if (p.is_infinite()) {
        // R(x + h, y + h) = R(x, y) for translation plans and shift kernels, so one cell of x suffices.
        if (periodic) gx = detail::round_up(gx, m);
        const int xcount = periodic ? gx / m : gx;
        std::vector<cplx> sec(2 * n2 + 1);
        double worst = 0.0;

        if (periodic) {
            // Sections reduce to r_x(l) = g_{-l} (e^{-ilx} - H(x, l)) with
            // H(x, l) = m e^{-il xi_0} sum_{k = -l mod m} a_k e^{ikx}, a = coefficients of psi_0.
            const TrigPoly& psi0 = plan.functions()[0];
            const int d0 = psi0.degree();
            const double xi0 = plan.points()[0];
            for (int i = 0; i < xcount; ++i) {
                const double x = grid_node(i, gx);
                for (int l = -n2; l <= n2; ++l) {
                    const cplx g = K.coeff(-l, l);
                    if (g == cplx{0.0}) {
                        sec[l + n2] = 0.0;
                        continue;
                    }
                    cplx h{0.0};
                    for (int kk = -d0 + wrap_index(d0 - l, m); kk <= d0; kk += m) {
                        h += psi0.coeff(kk) * std::polar(1.0, kk * x);
                    }
                    h *= static_cast<double>(m) * std::polar(1.0, -l * xi0);
                    sec[l + n2] = g * (std::polar(1.0, -l * x) - h);
                }
                worst = std::max(worst, detail::section_norm(sec, n2, qd, gy));
            }
            return worst;
        }

        std::vector<std::vector<cplx>> rows(m);
        for (int j = 0; j < m; ++j) {
            const TrigPoly s = K.section_y(plan.points()[j]);
            rows[j].assign(s.coeffs().begin(), s.coeffs().end());
        }
        std::vector<cplx> weights(m);
        for (int i = 0; i < xcount; ++i) {
            const double x = grid_node(i, gx);
            const TrigPoly kx = K.section_y(x);
            std::copy(kx.coeffs().begin(), kx.coeffs().end(), sec.begin());
            for (int j = 0; j < m; ++j) {
                const cplx w = plan.functions()[j](x);
                for (int l = 0; l <= 2 * n2; ++l) sec[l] -= w * rows[j][l];
            }
            worst = std::max(worst, detail::section_norm(sec, n2, qd, gy));
        }
        return worst;
    }

    // p < inf: inner norm over x for each y, then the q' norm over y. The inner norms are
    // h-periodic in y for translation plans and shift kernels.
    if (periodic) gy = detail::round_up(gy, m);
    const int ycount = periodic ? gy / m : gy;
    std::vector<TrigPoly> sections(m);
    for (int j = 0; j < m; ++j) sections[j] = K.section_y(plan.points()[j]);
    std::vector<double> inner(ycount);
    std::vector<cplx> r(2 * dx + 1);
    for (int jy = 0; jy < ycount; ++jy) {
        const double y = grid_node(jy, gy);
        std::fill(r.begin(), r.end(), cplx{0.0});
        const TrigPoly ky = K.section_x(y);
        for (int k = -n1; k <= n1; ++k) r[k + dx] = ky.coeff(k);
        for (int j = 0; j < m; ++j) {
            const cplx s = sections[j](y);
            const TrigPoly& psi = plan.functions()[j];
            const int d = psi.degree();
            for (int k = -d; k <= d; ++k) r[k + dx] -= s * psi.coeff(k);
        }
        inner[jy] = detail::section_norm(r, dx, p, gx);
    }
    return grid_norm_real(inner, qd);
}

// ---------------------------------------------------------------------------
// Extremal kernels

struct ExtremalKernel {
    BivariateTrigPoly kernel;  ///< V_n(x - y)
    TrigPoly phi;              ///< D^{(r1 + r2, r1 - r2)} V_n
    double scale = 0.0;        ///< 1 / ||phi||_{q1}
};

/// K = V_n(x - y) with phi = D_y^{(r2,r2)} D_x^{(r1,r1)} K = (D^{(r1+r2, r1-r2)} V_n)(x - y);
/// scale * K lies in W^r_{(q1, inf)} because ||phi(x - y)||_{(q1, inf)} = ||phi||_{q1}.
inline ExtremalKernel extremal_kernel(double r1, double r2, Exponent q1, int n) {
    if (n < 2) throw Error("extremal_kernel: n must be at least 2");
    if (r1 < 0.0 || r2 < 0.0) throw Error("extremal_kernel: smoothness must be nonnegative");
    const TrigPoly v = make_kernel(kernel::ValleePoussin{n});
    ExtremalKernel out;
    out.kernel = shift_kernel(v);
    out.phi = multiplier(MultiplierKind::D, {r1 + r2, r1 - r2, n}, v);
    out.scale = 1.0 / norm(out.phi, q1);
    return out;
}

// ---------------------------------------------------------------------------
// Class specs: "W:a=(2,3),q=(1,inf)", "H:a=(1,1),q=(2,2),l=2", "HK:r=(2,2),q1=1,n=32"

namespace classspec {
struct W {
    double a1, a2;
    Exponent q1, q2;
};
struct H {
    SmoothnessParams params;
};
struct HK {
    double r1, r2;
    Exponent q1;
    int n;
};
}  // namespace classspec

using ClassSpec = std::variant<classspec::W, classspec::H, classspec::HK>;

namespace detail {
inline std::string pair_str(const std::string& a, const std::string& b) { return "(" + a + "," + b + ")"; }
}  // namespace detail

inline std::string to_string(const ClassSpec& spec) {
    using text::format_double;
    return std::visit(
        [](const auto& s) -> std::string {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, classspec::W>) {
                return "W:a=" + detail::pair_str(format_double(s.a1), format_double(s.a2)) +
                       ",q=" + detail::pair_str(s.q1.str(), s.q2.str());
            } else if constexpr (std::is_same_v<S, classspec::H>) {
                const auto& p = s.params;
                return "H:a=" + detail::pair_str(format_double(p.a1), format_double(p.a2)) +
                       ",q=" + detail::pair_str(p.q1.str(), p.q2.str()) + ",l=" + std::to_string(p.l);
            } else {
                return "HK:r=" + detail::pair_str(format_double(s.r1), format_double(s.r2)) + ",q1=" + s.q1.str() +
                       ",n=" + std::to_string(s.n);
            }
        },
        spec);
}

inline ClassSpec parse_class_spec(std::string_view spec_text) {
    const std::string t = text::trim(spec_text);
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw Error("class spec needs 'family:key=value,...': '" + t + "'");
    const std::string family = text::lower(text::trim(t.substr(0, colon)));
    detail::KeyValues kv(family, std::string_view(t).substr(colon + 1));
    ClassSpec out;
    if (family == "w" || family == "h") {
        const auto [a1, a2] = text::parse_pair(kv.str("a"));
        const auto [q1, q2] = text::parse_pair(kv.str("q"));
        if (family == "w") {
            out = classspec::W{text::parse_double(a1), text::parse_double(a2), Exponent::parse(q1), Exponent::parse(q2)};
        } else {
            SmoothnessParams sp{text::parse_double(a1), text::parse_double(a2), Exponent::parse(q1),
                                Exponent::parse(q2), kv.integer("l")};
            sp.validate();
            out = classspec::H{sp};
        }
    } else if (family == "hk") {
        const auto [r1, r2] = text::parse_pair(kv.str("r"));
        out = classspec::HK{text::parse_double(r1), text::parse_double(r2), Exponent::parse(kv.str("q1")),
                            kv.integer("n")};
    } else {
        throw Error("unknown class family '" + family + "'");
    }
    kv.finish();
    return out;
}

}  // namespace trigrec
