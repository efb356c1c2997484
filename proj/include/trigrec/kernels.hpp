#pragma once

// Classical kernels as exact-coefficient trigonometric polynomials: Dirichlet,
// Fejer, de la Vallee Poussin, the dyadic blocks A_s, (generalized) Bernoulli
// kernels truncated at |k| <= T, and the inverse kernels of the Bernoulli
// multipliers.

#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "trigrec/error.hpp"
#include "trigrec/text.hpp"
#include "trigrec/trigpoly.hpp"

namespace trigrec {

inline constexpr int default_bernoulli_truncation = 4096;

namespace kernel {

struct Dirichlet {
    int n = 0;
};
struct Fejer {
    int j = 1;
};
struct ValleePoussin {
    int n = 1;
};
struct ABlock {
    int s = 0;
};
struct Bernoulli {
    double a = 2.0;
    int truncation = default_bernoulli_truncation;
};
struct GenBernoulli {
    double a = 2.0;
    double alpha = 0.0;
    int truncation = default_bernoulli_truncation;
};
/// 1 + 2 sum_{k=1}^{2n} k^a cos(kx + alpha pi/2), built to degree 2n.
struct InverseD {
    double a = 0.0;
    double alpha = 0.0;
    int n = 0;
};

}  // namespace kernel

using KernelSpec = std::variant<kernel::Dirichlet, kernel::Fejer, kernel::ValleePoussin, kernel::ABlock,
                                kernel::Bernoulli, kernel::GenBernoulli, kernel::InverseD>;

// Fourier multipliers of the kernel families.

/// Coefficient of F_{a,alpha} at frequency k.
inline cplx bernoulli_coeff(int k, double a, double alpha) {
    if (k == 0) return 1.0;
    const double mag = std::pow(std::abs(static_cast<double>(k)), -a);
    return std::polar(mag, (k > 0 ? -1.0 : 1.0) * alpha * pi / 2.0);
}

/// Coefficient of the inverse kernel D^{(a,alpha)} at frequency k.
inline cplx inverse_coeff(int k, double a, double alpha) {
    if (k == 0) return 1.0;
    const double mag = std::pow(std::abs(static_cast<double>(k)), a);
    return std::polar(mag, (k > 0 ? 1.0 : -1.0) * alpha * pi / 2.0);
}

inline double fejer_coeff(int k, int j) {
    const double v = 1.0 - std::abs(static_cast<double>(k)) / j;
    return v > 0.0 ? v : 0.0;
}

/// V_n = 2 K_{2n} - K_n: equals 1 on |k| <= n, 2 - |k|/n on n < |k| < 2n, 0 beyond.
inline double vallee_poussin_coeff(int k, int n) { return 2.0 * fejer_coeff(k, 2 * n) - fejer_coeff(k, n); }

inline double ablock_coeff(int k, int s) {
    if (s == 0) return k == 0 ? 1.0 : 0.0;
    if (s == 1) return vallee_poussin_coeff(k, 1) - (k == 0 ? 1.0 : 0.0);
    return vallee_poussin_coeff(k, 1 << (s - 1)) - vallee_poussin_coeff(k, 1 << (s - 2));
}

inline int ablock_degree(int s) { return s == 0 ? 0 : (s == 1 ? 1 : (1 << s) - 1); }

/// Bound on the dropped coefficient mass sum_{|k|>T} |k|^{-a} <= 2 T^{1-a} / (a - 1).
inline double bernoulli_tail_l1(double a, int truncation) {
    return 2.0 * std::pow(static_cast<double>(truncation), 1.0 - a) / (a - 1.0);
}

/// Bound on sqrt(sum_{|k|>T} |k|^{-2a}) <= sqrt(2 T^{1-2a} / (2a - 1)).
inline double bernoulli_tail_l2(double a, int truncation) {
    return std::sqrt(2.0 * std::pow(static_cast<double>(truncation), 1.0 - 2.0 * a) / (2.0 * a - 1.0));
}

namespace detail {

inline void validate(const KernelSpec& spec) {
    std::visit(
        [](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, kernel::Dirichlet>) {
                if (s.n < 0) throw Error("dirichlet: n must be nonnegative");
            } else if constexpr (std::is_same_v<S, kernel::Fejer>) {
                if (s.j < 1) throw Error("fejer: j must be positive");
            } else if constexpr (std::is_same_v<S, kernel::ValleePoussin>) {
                if (s.n < 1) throw Error("vdlp: n must be positive");
            } else if constexpr (std::is_same_v<S, kernel::ABlock>) {
                if (s.s < 0 || s.s > 28) throw Error("ablock: s must be in [0, 28]");
            } else if constexpr (std::is_same_v<S, kernel::Bernoulli> || std::is_same_v<S, kernel::GenBernoulli>) {
                if (!(s.a > 1.0)) throw Error("divergent kernel: Bernoulli kernels need a > 1");
                if (s.truncation < 1) throw Error("bernoulli: truncation must be positive");
            } else {
                if (s.a < 0.0) throw Error("inversed: a must be nonnegative");
                if (s.n < 0) throw Error("inversed: n must be nonnegative");
            }
        },
        spec);
}

}  // namespace detail

/// A constructed kernel together with the analytic bound on what truncation dropped.
struct BuiltKernel {
    TrigPoly poly;
    double tail_l1 = 0.0;  ///< bound on sum of dropped |c_k|
    double tail_l2 = 0.0;  ///< bound on sqrt(sum of dropped |c_k|^2)
};

inline BuiltKernel build_kernel(const KernelSpec& spec) {
    detail::validate(spec);
    return std::visit(
        [](const auto& s) -> BuiltKernel {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, kernel::Dirichlet>) {
                return {TrigPoly::generate(s.n, [](int) { return 1.0; })};
            } else if constexpr (std::is_same_v<S, kernel::Fejer>) {
                return {TrigPoly::generate(s.j - 1, [&](int k) { return fejer_coeff(k, s.j); })};
            } else if constexpr (std::is_same_v<S, kernel::ValleePoussin>) {
                return {TrigPoly::generate(2 * s.n - 1, [&](int k) { return vallee_poussin_coeff(k, s.n); })};
            } else if constexpr (std::is_same_v<S, kernel::ABlock>) {
                return {TrigPoly::generate(ablock_degree(s.s), [&](int k) { return ablock_coeff(k, s.s); })};
            } else if constexpr (std::is_same_v<S, kernel::Bernoulli>) {
                return {TrigPoly::generate(s.truncation, [&](int k) { return bernoulli_coeff(k, s.a, s.a); }),
                        bernoulli_tail_l1(s.a, s.truncation), bernoulli_tail_l2(s.a, s.truncation)};
            } else if constexpr (std::is_same_v<S, kernel::GenBernoulli>) {
                return {TrigPoly::generate(s.truncation, [&](int k) { return bernoulli_coeff(k, s.a, s.alpha); }),
                        bernoulli_tail_l1(s.a, s.truncation), bernoulli_tail_l2(s.a, s.truncation)};
            } else {
                return {TrigPoly::generate(2 * s.n, [&](int k) { return inverse_coeff(k, s.a, s.alpha); })};
            }
        },
        spec);
}

inline TrigPoly make_kernel(const KernelSpec& spec) { return build_kernel(spec).poly; }

/// A_s(f) = A_s * f. Summing s = 0..S telescopes to V_{2^{S-1}} * f.
inline TrigPoly a_block(const TrigPoly& f, int s) {
    if (s < 0) throw Error("a_block: s must be nonnegative");
    const int n = std::min(f.degree(), ablock_degree(s));
    return TrigPoly::generate(n, [&](int k) { return f.coeff(k) * ablock_coeff(k, s); });
}

/// K(x, y) = g(x - y): coefficients on the anti-diagonal (k, -k).
inline BivariateTrigPoly shift_kernel(const TrigPoly& g) {
    std::vector<BivariateTrigPoly::Entry> e;
    e.reserve(2 * g.degree() + 1);
    for (int k = -g.degree(); k <= g.degree(); ++k) e.push_back({k, -k, g.coeff(k)});
    return BivariateTrigPoly(g.degree(), g.degree(), std::move(e));
}

/// True iff every nonzero coefficient sits on the anti-diagonal.
inline bool is_shift_kernel(const BivariateTrigPoly& k) {
    for (const auto& e : k.entries()) {
        if (e.l != -e.k) return false;
    }
    return true;
}

// Canonical text form: "family:key=value,...", case-insensitive, unknown keys rejected.

inline std::string to_string(const KernelSpec& spec) {
    using text::format_double;
    return std::visit(
        [](const auto& s) -> std::string {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, kernel::Dirichlet>) {
                return "dirichlet:n=" + std::to_string(s.n);
            } else if constexpr (std::is_same_v<S, kernel::Fejer>) {
                return "fejer:j=" + std::to_string(s.j);
            } else if constexpr (std::is_same_v<S, kernel::ValleePoussin>) {
                return "vdlp:n=" + std::to_string(s.n);
            } else if constexpr (std::is_same_v<S, kernel::ABlock>) {
                return "ablock:s=" + std::to_string(s.s);
            } else if constexpr (std::is_same_v<S, kernel::Bernoulli>) {
                return "bernoulli:a=" + format_double(s.a) + ",T=" + std::to_string(s.truncation);
            } else if constexpr (std::is_same_v<S, kernel::GenBernoulli>) {
                return "genbernoulli:a=" + format_double(s.a) + ",alpha=" + format_double(s.alpha) +
                       ",T=" + std::to_string(s.truncation);
            } else {
                return "inversed:a=" + format_double(s.a) + ",alpha=" + format_double(s.alpha) +
                       ",n=" + std::to_string(s.n);
            }
        },
        spec);
}

namespace detail {

class KeyValues {
public:
    KeyValues(std::string family, std::string_view body) : family_(std::move(family)) {
        if (text::trim(body).empty()) return;
        for (const auto& item : text::split_top_level(body, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw Error(family_ + ": expected key=value, got '" + item + "'");
            const std::string key = text::lower(text::trim(item.substr(0, eq)));
            if (!values_.emplace(key, text::trim(item.substr(eq + 1))).second) {
                throw Error(family_ + ": duplicate key '" + key + "'");
            }
        }
    }

    bool has(const std::string& key) const { return values_.count(key) != 0; }

    double real(const std::string& key) {
        return text::parse_double(take(key));
    }
    int integer(const std::string& key) {
        return static_cast<int>(text::parse_int(take(key)));
    }
    std::string str(const std::string& key) { return take(key); }

    void finish() const {
        for (const auto& [key, value] : values_) {
            if (!used_.count(key)) throw Error(family_ + ": unknown key '" + key + "'");
        }
    }

private:
    std::string take(const std::string& key) {
        auto it = values_.find(key);
        if (it == values_.end()) throw Error(family_ + ": missing key '" + key + "'");
        used_[key] = true;
        return it->second;
    }

    std::string family_;
    std::map<std::string, std::string> values_;
    std::map<std::string, bool> used_;
};

}  // namespace detail

inline KernelSpec parse_kernel_spec(std::string_view spec_text) {
    const std::string t = text::trim(spec_text);
    const auto colon = t.find(':');
    const std::string family = text::lower(text::trim(t.substr(0, colon)));
    detail::KeyValues kv(family, colon == std::string::npos ? std::string_view{} : std::string_view(t).substr(colon + 1));
    KernelSpec out;
    if (family == "dirichlet") {
        out = kernel::Dirichlet{kv.integer("n")};
    } else if (family == "fejer") {
        out = kernel::Fejer{kv.integer("j")};
    } else if (family == "vdlp" || family == "valleepoussin") {
        out = kernel::ValleePoussin{kv.integer("n")};
    } else if (family == "ablock") {
        out = kernel::ABlock{kv.integer("s")};
    } else if (family == "bernoulli") {
        const double a = kv.real("a");
        const int t_trunc = kv.has("t") ? kv.integer("t") : default_bernoulli_truncation;
        out = kernel::Bernoulli{a, t_trunc};
    } else if (family == "genbernoulli") {
        const double a = kv.real("a");
        const double alpha = kv.real("alpha");
        const int t_trunc = kv.has("t") ? kv.integer("t") : default_bernoulli_truncation;
        out = kernel::GenBernoulli{a, alpha, t_trunc};
    } else if (family == "inversed") {
        const double a = kv.real("a");
        const double alpha = kv.real("alpha");
        out = kernel::InverseD{a, alpha, kv.integer("n")};
    } else {
        throw Error("unknown kernel family '" + family + "'");
    }
    kv.finish();
    detail::validate(out);
    return out;
}

}  // namespace trigrec
