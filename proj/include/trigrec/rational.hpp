#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "trigrec/error.hpp"
#include "trigrec/exponent.hpp"

namespace trigrec {

/// Exact fraction num/den with den > 0 in lowest terms.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
        if (den == 0) throw Error("Rational: zero denominator");
        normalize();
    }

    /// Nearest fraction with denominator at most max_den (continued fractions).
    static Rational from_double(double x, std::int64_t max_den = 1000000) {
        if (!std::isfinite(x)) throw Error("Rational: non-finite value");
        const bool neg = x < 0;
        double v = std::abs(x);
        std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
        for (int it = 0; it < 64; ++it) {
            const double a = std::floor(v);
            const auto ai = static_cast<std::int64_t>(a);
            const std::int64_t p2 = ai * p1 + p0, q2 = ai * q1 + q0;
            if (q2 > max_den) break;
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
            const double frac = v - a;
            if (frac < 1e-12 || std::abs(static_cast<double>(p1) / q1 - std::abs(x)) < 1e-13 * std::max(1.0, std::abs(x))) {
                break;
            }
            v = 1.0 / frac;
        }
        return Rational(neg ? -p1 : p1, q1);
    }

    /// 1/p with 1/inf = 0.
    static Rational reciprocal(const Exponent& p) {
        if (p.is_infinite()) return Rational(0);
        return Rational(1) / from_double(p.value());
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const { return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_); }

    friend Rational operator+(Rational a, Rational b) { return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_); }
    friend Rational operator-(Rational a, Rational b) { return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_); }
    friend Rational operator*(Rational a, Rational b) { return Rational(a.num_ * b.num_, a.den_ * b.den_); }
    friend Rational operator/(Rational a, Rational b) {
        if (b.num_ == 0) throw Error("Rational: division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    friend bool operator==(Rational a, Rational b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator<(Rational a, Rational b) { return a.num_ * b.den_ < b.num_ * a.den_; }
    friend bool operator>(Rational a, Rational b) { return b < a; }
    friend bool operator<=(Rational a, Rational b) { return !(b < a); }
    friend bool operator>=(Rational a, Rational b) { return !(a < b); }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Rational rmax(Rational a, Rational b) { return a < b ? b : a; }
inline Rational rmin(Rational a, Rational b) { return a < b ? a : b; }
inline Rational positive_part(Rational a) { return rmax(a, Rational(0)); }

}  // namespace trigrec
