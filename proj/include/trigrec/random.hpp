#pragma once

#include <cstdint>
#include <random>

#include "trigrec/trigpoly.hpp"

namespace trigrec {

using Rng = std::mt19937_64;

/// Coefficients with independent standard complex normal real and imaginary parts.
inline TrigPoly random_trigpoly(int degree, Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    return TrigPoly::generate(degree, [&](int) {
        const double re = nd(rng);
        const double im = nd(rng);
        return cplx(re, im);
    });
}

/// Real-valued random polynomial: c_{-k} = conj(c_k).
inline TrigPoly random_real_trigpoly(int degree, Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<cplx> c(2 * degree + 1);
    c[degree] = nd(rng);
    for (int k = 1; k <= degree; ++k) {
        const double re = nd(rng);
        const double im = nd(rng);
        c[degree + k] = cplx(re, im);
        c[degree - k] = cplx(re, -im);
    }
    return TrigPoly(degree, std::move(c));
}

/// Random bivariate polynomial with coefficients damped by (1 + |k|)^{-decay} (1 + |l|)^{-decay}.
inline BivariateTrigPoly random_bivariate(int nx, int ny, Rng& rng, double decay = 0.0) {
    std::normal_distribution<double> nd(0.0, 1.0);
    return BivariateTrigPoly::generate(nx, ny, [&](int k, int l) {
        const double re = nd(rng);
        const double im = nd(rng);
        const double w = std::pow(1.0 + std::abs(k), -decay) * std::pow(1.0 + std::abs(l), -decay);
        return w * cplx(re, im);
    });
}

/// Real-valued version: c_{-k,-l} = conj(c_{k,l}).
inline BivariateTrigPoly random_real_bivariate(int nx, int ny, Rng& rng, double decay = 0.0) {
    const BivariateTrigPoly b = random_bivariate(nx, ny, rng, decay);
    std::vector<BivariateTrigPoly::Entry> e;
    for (const auto& x : b.entries()) {
        e.push_back({x.k, x.l, 0.5 * x.c});
        e.push_back({-x.k, -x.l, 0.5 * std::conj(x.c)});
    }
    return BivariateTrigPoly(nx, ny, std::move(e));
}

}  // namespace trigrec
