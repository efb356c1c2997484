#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "trigrec/error.hpp"
#include "trigrec/text.hpp"

namespace trigrec {

/// An L_p exponent in [1, inf]. Infinity is a distinguished state, never a large float.
class Exponent {
public:
    constexpr Exponent() = default;

    explicit Exponent(double p) : value_(p) {
        if (!(p >= 1.0) || std::isinf(p)) {
            throw Error("exponent must be a finite value >= 1 (use Exponent::infinity())");
        }
    }

    static constexpr Exponent infinity() {
        Exponent e;
        e.infinite_ = true;
        return e;
    }

    constexpr bool is_infinite() const { return infinite_; }

    double value() const {
        if (infinite_) throw Error("value() requested for infinite exponent");
        return value_;
    }

    /// 1/p, with 1/inf = 0.
    double reciprocal() const { return infinite_ ? 0.0 : 1.0 / value_; }

    /// The dual exponent p' = p/(p-1).
    Exponent dual() const {
        if (infinite_) return Exponent(1.0);
        if (value_ == 1.0) return infinity();
        return Exponent(value_ / (value_ - 1.0));
    }

    friend bool operator==(const Exponent& a, const Exponent& b) {
        if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
        return a.value_ == b.value_;
    }

    /// Accepts "inf", "infinity", or a decimal >= 1.
    static Exponent parse(std::string_view text) {
        const std::string t = text::lower(text::trim(text));
        if (t == "inf" || t == "infinity" || t == "\xe2\x88\x9e") return infinity();
        return Exponent(text::parse_double(t));
    }

    std::string str() const { return infinite_ ? std::string("inf") : text::format_double(value_); }

private:
    double value_ = 2.0;
    bool infinite_ = false;
};

}  // namespace trigrec
