#pragma once

// Predicted rate exponents as exact fractions, with hypothesis checks.

#include <string>
#include <utility>
#include <vector>

#include "trigrec/error.hpp"
#include "trigrec/exponent.hpp"
#include "trigrec/rational.hpp"
#include "trigrec/text.hpp"

namespace trigrec {

/// Parameters of a rate statement. Laws about one smoothness index use r1;
/// laws with a scalar integrability exponent use q, those with a vector use (q1, q2).
struct RateLaw {
    std::string id;
    double r1 = 0.0;
    double r2 = 0.0;
    Exponent q = Exponent(1.0);
    Exponent q1 = Exponent(1.0);
    Exponent q2 = Exponent(1.0);
    Exponent p = Exponent::infinity();
    Exponent p1 = Exponent::infinity();
    Exponent p2 = Exponent::infinity();
};

inline const std::vector<std::string>& known_laws() {
    static const std::vector<std::string> ids = {"InT1", "BiT5",  "InT2",    "InT3",   "InT4",    "InT4a",
                                                 "InT4b", "InT5", "BiT5a",   "N1a",    "N2a",     "LbT1",
                                                 "LbT2", "univarR", "Smolyak", "qpL1", "Lb8", "Schmidt", "Quadrature"};
    return ids;
}

/// (1/q - max(1/2, 1/p))_+
inline Rational xi(Exponent q, Exponent p) {
    return positive_part(Rational::reciprocal(q) - rmax(Rational(1, 2), Rational::reciprocal(p)));
}

/// r(q) = (1/q1, 1/q2) for q1 >= 2 and (1/q1, max(1/2, 1/q2)) for q1 < 2.
inline std::pair<Rational, Rational> r_of_q(Exponent q1, Exponent q2) {
    const Rational i1 = Rational::reciprocal(q1), i2 = Rational::reciprocal(q2);
    if (i1 <= Rational(1, 2)) return {i1, i2};
    return {i1, rmax(Rational(1, 2), i2)};
}

/// r(q, p) for p = (p1, p2), q1 <= p1.
inline std::pair<Rational, Rational> r_of_qp(Exponent q1, Exponent q2, Exponent p1, Exponent p2) {
    const Rational iq1 = Rational::reciprocal(q1), iq2 = Rational::reciprocal(q2);
    const Rational ip1 = Rational::reciprocal(p1), ip2 = Rational::reciprocal(p2);
    const Rational half(1, 2);
    if (ip1 >= half) return {iq1 - ip1, positive_part(iq2 - ip2)};
    if (iq1 <= half) return {iq1, iq2};
    return {iq1, rmax(half, iq2)};
}

namespace detail {

class LawCheck {
public:
    explicit LawCheck(const std::string& id) : id_(id) {}
    void require(bool ok, const std::string& condition) const {
        if (!ok) throw Error(id_ + " hypothesis violated: requires " + condition);
    }

private:
    std::string id_;
};

inline std::string rs(Rational r) { return r.str(); }

}  // namespace detail

/// Exponent of m in the cited rate statement (of 2^n for Smolyak, of theta(N) for qpL1,
/// of n for Lb8).
inline Rational predicted_exponent(const RateLaw& law) {
    const detail::LawCheck check(law.id);
    const Rational r1 = Rational::from_double(law.r1), r2 = Rational::from_double(law.r2);
    const Rational r = r1 + r2;
    const Rational iq = Rational::reciprocal(law.q), ip = Rational::reciprocal(law.p);
    const Rational iq1 = Rational::reciprocal(law.q1), iq2 = Rational::reciprocal(law.q2);
    const Rational ip1 = Rational::reciprocal(law.p1), ip2 = Rational::reciprocal(law.p2);
    const Rational half(1, 2), one(1);

    auto require_r_gt = [&](std::pair<Rational, Rational> bound, const std::string& what) {
        check.require(r1 > bound.first && r2 > bound.second,
                      "r > " + what + " = (" + detail::rs(bound.first) + ", " + detail::rs(bound.second) +
                          "), got r = (" + detail::rs(r1) + ", " + detail::rs(r2) + ")");
    };
    auto require_bit5_r = [&] { require_r_gt({one, one + rmax(half, iq)}, "(1, 1 + max(1/2, 1/q))"); };

    const std::string& id = law.id;
    if (id == "InT1" || id == "BiT5") {
        require_bit5_r();
        return -r + xi(law.q, law.p);
    }
    if (id == "InT2") {
        check.require(iq >= half, "1 <= q <= 2");
        check.require(ip <= half, "2 <= p <= inf");
        require_r_gt({one, one + iq}, "(1, 1 + 1/q)");
        return -r + iq - ip;
    }
    if (id == "InT3") {
        check.require(ip <= half, "2 <= p <= inf");
        require_r_gt(r_of_q(law.q1, law.q2), "r(q)");
        return -r + positive_part(iq1 - half) + half - ip;
    }
    if (id == "InT4") {
        require_r_gt(r_of_q(law.q1, law.q2), "r(q)");
        return -r + positive_part(iq1 - half) + half;
    }
    if (id == "InT4a") {
        require_r_gt(r_of_q(law.q1, law.q2), "r(q)");
        return -r + iq1 - ip1 - ip2;
    }
    if (id == "InT4b") {
        check.require(iq1 >= half, "1 <= q1 <= 2");
        require_r_gt(r_of_q(law.q1, law.q2), "r(q)");
        return -r + iq1;
    }
    if (id == "InT5") {
        require_r_gt({one, one}, "(1, 1)");
        check.require(iq1 >= ip1, "q1 <= p1");
        return -r + xi(law.q1, law.p1);
    }
    if (id == "BiT5a") {
        check.require(iq1 >= ip, "q1 <= p");
        require_r_gt(r_of_qp(law.q1, law.q2, law.p, Exponent::infinity()), "r(q, p)");
        return -r + xi(law.q1, law.p);
    }
    if (id == "N1a") {
        require_bit5_r();
        return -r + positive_part(iq - half);
    }
    if (id == "N2a") {
        require_bit5_r();
        check.require(ip < half, "2 < p <= inf");
        return -r + (half - ip) + positive_part(iq - half);
    }
    if (id == "LbT1") {
        check.require(iq >= ip, "1 <= q <= p <= inf");
        require_r_gt({iq1, iq2}, "(1/q1, 1/q2)");
        return -r - one + iq1 + iq - ip;
    }
    if (id == "LbT2") {
        check.require(iq1 >= half, "1 <= q1 <= 2");
        check.require(ip <= half, "2 <= p <= inf");
        require_r_gt(r_of_q(law.q1, law.q2), "r(q)");
        return -r + iq1 - ip;
    }
    if (id == "univarR") {
        check.require(r1 > iq, "r > 1/q");
        return -r1 + positive_part(iq - ip);
    }
    if (id == "Smolyak") {
        check.require(r1 > Rational(0), "r > 0");
        return -r1;
    }
    if (id == "qpL1") {
        check.require(iq >= ip, "1 <= q <= p <= inf");
        return iq - ip;
    }
    if (id == "Lb8") {
        check.require(r1 >= Rational(0) && r2 >= Rational(0), "r >= 0");
        return -(r + one - iq1);
    }
    if (id == "Schmidt") {
        check.require(r1 > half, "r > 1/2");
        return -r1 + half;
    }
    if (id == "Quadrature") {
        check.require(r1 > iq, "r > 1/q");
        return -r1;
    }
    throw Error("unknown rate law '" + id + "'");
}

}  // namespace trigrec
