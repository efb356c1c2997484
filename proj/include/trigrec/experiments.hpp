#pragma once

// Rate experiments: config parsing, per-m engines, slope fitting against a rate law.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "trigrec/classes.hpp"
#include "trigrec/error.hpp"
#include "trigrec/exponent.hpp"
#include "trigrec/fooling.hpp"
#include "trigrec/kernels.hpp"
#include "trigrec/laws.hpp"
#include "trigrec/operators.hpp"
#include "trigrec/random.hpp"
#include "trigrec/report.hpp"
#include "trigrec/sparse.hpp"
#include "trigrec/text.hpp"
#include "trigrec/trigpoly.hpp"

namespace trigrec {

struct ExperimentConfig {
    std::string engine;
    std::optional<std::string> kernel;
    std::pair<double, double> r{2.0, 2.0};
    std::pair<Exponent, Exponent> q{Exponent(2.0), Exponent(2.0)};
    std::pair<Exponent, Exponent> p{Exponent::infinity(), Exponent::infinity()};
    int m_min = 8;
    int m_max = 256;
    int m_steps = 6;
    double tolerance = 0.3;
    std::string law = "none";
    std::string op = "R";       ///< univariate / kernel_recovery: R or I plans
    std::optional<int> oversample;
    std::uint64_t seed = 0;
    std::optional<Exponent> q_class;  ///< class exponent when q holds a vector for the law
    int dim = 1;                      ///< fooling: 1 or 2
};

inline const std::vector<std::string>& known_engines() {
    static const std::vector<std::string> e = {"univariate", "kernel_recovery", "svd",     "lk",
                                               "kk",         "cubature",        "smolyak", "extremal",
                                               "fooling"};
    return e;
}

/// Lines of `key = value`; `#` starts a comment.
inline ExperimentConfig parse_experiment_config(std::string_view text_in) {
    ExperimentConfig c;
    std::set<std::string> seen;
    std::istringstream in{std::string(text_in)};
    std::string line;
    int lineno = 0;
    auto exp_pair = [](const std::string& v) {
        const auto [a, b] = text::parse_pair(v);
        return std::make_pair(Exponent::parse(a), Exponent::parse(b));
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = text::trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        const std::string where = "config line " + std::to_string(lineno);
        if (eq == std::string::npos) throw Error(where + ": expected key = value");
        const std::string key = text::lower(text::trim(t.substr(0, eq)));
        const std::string value = text::trim(t.substr(eq + 1));
        if (!seen.insert(key).second) throw Error(where + ": duplicate key '" + key + "'");
        try {
            if (key == "engine") {
                c.engine = text::lower(value);
            } else if (key == "kernel") {
                parse_kernel_spec(value);
                c.kernel = value;
            } else if (key == "r") {
                const auto [a, b] = text::parse_pair(value);
                c.r = {text::parse_double(a), text::parse_double(b)};
            } else if (key == "q") {
                c.q = exp_pair(value);
            } else if (key == "p") {
                c.p = exp_pair(value);
            } else if (key == "m_min") {
                c.m_min = static_cast<int>(text::parse_int(value));
            } else if (key == "m_max") {
                c.m_max = static_cast<int>(text::parse_int(value));
            } else if (key == "m_steps") {
                c.m_steps = static_cast<int>(text::parse_int(value));
            } else if (key == "tolerance") {
                c.tolerance = text::parse_double(value);
            } else if (key == "law") {
                c.law = value;
            } else if (key == "operator") {
                c.op = value;
            } else if (key == "oversample") {
                c.oversample = static_cast<int>(text::parse_int(value));
            } else if (key == "seed") {
                c.seed = static_cast<std::uint64_t>(text::parse_int(value));
            } else if (key == "q_class") {
                c.q_class = Exponent::parse(value);
            } else if (key == "dim") {
                c.dim = static_cast<int>(text::parse_int(value));
            } else {
                throw Error("unknown key '" + key + "'");
            }
        } catch (const Error& e) {
            throw Error(where + ": " + e.what());
        }
    }
    if (c.engine.empty()) throw Error("config: missing key 'engine'");
    if (std::find(known_engines().begin(), known_engines().end(), c.engine) == known_engines().end()) {
        throw Error("config: unknown engine '" + c.engine + "'");
    }
    if (c.m_min < 1 || c.m_max < c.m_min) throw Error("config: need 1 <= m_min <= m_max");
    if (c.m_steps < 1) throw Error("config: m_steps must be positive");
    if (!(c.tolerance > 0.0)) throw Error("config: tolerance must be positive");
    if (c.op != "R" && c.op != "I") throw Error("config: operator must be R or I");
    if (c.dim != 1 && c.dim != 2) throw Error("config: dim must be 1 or 2");
    if (c.law != "none" && std::find(known_laws().begin(), known_laws().end(), c.law) == known_laws().end()) {
        throw Error("config: unknown law '" + c.law + "'");
    }
    return c;
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_experiment_config(ss.str());
}

/// Geometric sweep from m_min to m_max, rounded, strictly increasing.
inline std::vector<int> m_sweep(int m_min, int m_max, int steps) {
    std::vector<int> out;
    if (steps == 1 || m_min == m_max) return {m_min};
    const double ratio = static_cast<double>(m_max) / m_min;
    for (int i = 0; i < steps; ++i) {
        const int m = static_cast<int>(std::lround(m_min * std::pow(ratio, static_cast<double>(i) / (steps - 1))));
        if (out.empty() || m > out.back()) out.push_back(m);
    }
    return out;
}

inline RateLaw law_from_config(const ExperimentConfig& c) {
    RateLaw law;
    law.id = c.law;
    law.r1 = c.r.first;
    law.r2 = c.r.second;
    law.q1 = c.q.first;
    law.q2 = c.q.second;
    law.q = c.q_class.value_or(c.q.first);
    law.p1 = c.p.first;
    law.p2 = c.p.second;
    law.p = c.p.first;
    return law;
}

/// Sum of dilated sawtooths sum_{k>=1} sin(kx)/k^3 in closed form on [0, 2 pi).
inline double bernoulli_cubic(double x) {
    x = std::fmod(x, two_pi);
    if (x < 0) x += two_pi;
    return pi * pi * x / 6.0 - pi * x * x / 4.0 + x * x * x / 12.0;
}

namespace detail {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads; results are indexed, so the
/// outcome does not depend on scheduling. The first exception by index is rethrown.
template <typename T>
std::vector<T> run_cells(int n, int jobs, const std::function<T(int)>& fn) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errs(n);
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    out[i] = fn(i);
                } catch (...) {
                    errs[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

inline BuiltKernel config_kernel(const ExperimentConfig& c, double default_a, int default_truncation) {
    if (c.kernel) return build_kernel(parse_kernel_spec(*c.kernel));
    return build_kernel(kernel::Bernoulli{default_a, default_truncation});
}

inline std::string kernel_label(const ExperimentConfig& c, double default_a, int default_truncation) {
    return c.kernel ? to_string(parse_kernel_spec(*c.kernel))
                    : to_string(KernelSpec{kernel::Bernoulli{default_a, default_truncation}});
}

/// Truncation must not decide the measured error: with B = (1 + lebesgue) * tail the
/// bound on what the dropped coefficients can contribute, require B to be negligible.
inline void check_truncation(double err, double tail, double lebesgue, bool orthogonal, int m) {
    if (tail == 0.0) return;
    const double b = (1.0 + lebesgue) * tail;
    const double rel = orthogonal ? std::sqrt(1.0 + (b / err) * (b / err)) - 1.0 : b / err;
    if (!(rel <= 1e-2)) {
        throw Error("kernel truncation too coarse at m = " + std::to_string(m) + ": tail bound " +
                    text::format_double(b) + " against error " + text::format_double(err) +
                    "; raise the truncation T");
    }
}

inline RecoveryPlan plan_for(const std::string& op, int m) { return op == "I" ? make_In_plan(m) : make_Rn_plan(m); }

}  // namespace detail

/// Runs the configured engine over the m sweep, fits the slope and decides the verdict.
inline RateReport run_experiment(const ExperimentConfig& c, int jobs = 1) {
    RateReport rep;
    rep.engine = c.engine;
    rep.law = c.law;
    rep.tolerance = c.tolerance;
    const std::vector<int> ms = m_sweep(c.m_min, c.m_max, c.m_steps);
    auto env = [&](const std::string& k, const std::string& v) { rep.environment.emplace_back(k, v); };
    env("seed", std::to_string(c.seed));
    std::string ms_str;
    for (int m : ms) ms_str += (ms_str.empty() ? "" : " ") + std::to_string(m);
    env("m", ms_str);

    std::optional<RateLaw> law;
    if (c.law != "none") {
        law = law_from_config(c);
        rep.predicted = predicted_exponent(*law).value();
    }
    const Exponent qc = c.q_class.value_or(c.q.first);
    const Exponent p = c.p.first;
    std::vector<RatePoint> series;

    if (c.engine == "univariate" || c.engine == "kernel_recovery") {
        const bool uni = c.engine == "univariate";
        const double a = uni ? c.r.first : c.r.first + c.r.second;
        const int trunc = default_bernoulli_truncation;
        const BuiltKernel bk = detail::config_kernel(c, a, trunc);
        const KernelClass kc{shift_kernel(bk.poly), qc};
        const int os = c.oversample.value_or(default_oversample_2d);
        env("kernel", detail::kernel_label(c, a, trunc));
        env("class_q", qc.str());
        env("p", p.str());
        env("operator", c.op);
        env("oversample", std::to_string(os));
        const bool orth = p.is_infinite() && qc == Exponent(2.0);
        env(orth ? "tail_l2" : "tail_l1", text::format_double(orth ? bk.tail_l2 : bk.tail_l1));
        series = detail::run_cells<RatePoint>(static_cast<int>(ms.size()), jobs, [&](int i) {
            const RecoveryPlan plan = detail::plan_for(c.op, ms[i]);
            const double err = worst_case_error(kc, plan, p, os);
            detail::check_truncation(err, orth ? bk.tail_l2 : bk.tail_l1, lebesgue_constant(plan), orth, ms[i]);
            return RatePoint{static_cast<double>(ms[i]), err};
        });
    } else if (c.engine == "svd" || c.engine == "lk" || c.engine == "kk") {
        const int trunc = 256;
        const BuiltKernel bk = detail::config_kernel(c, c.r.first, trunc);
        const BivariateTrigPoly K = shift_kernel(bk.poly);
        const int grid = norm_grid_size(K.degree_x(), c.oversample.value_or(1));
        const DiscretizedKernel dk = discretize(K, grid, grid, detail::kernel_label(c, c.r.first, trunc));
        env("kernel", dk.provenance);
        env("grid", std::to_string(grid) + "x" + std::to_string(grid));
        env("norm", "discrete L2");
        env("tail_l2", text::format_double(bk.tail_l2));
        if (ms.back() > grid) throw Error("m_max exceeds the grid size " + std::to_string(grid));
        if (c.engine == "svd") {
            const SvdResult full = svd_bilinear(dk, ms.back());
            for (int m : ms) series.push_back({static_cast<double>(m), full.result.approximant.error_history[m]});
        } else if (c.engine == "lk") {
            const LkResult full = greedy_lk(dk, ms.back());
            for (int m : ms) series.push_back({static_cast<double>(m), full.result.approximant.error_history[m]});
        } else {
            const CrossResult full = cross_kk(dk, ms.back());
            const auto& h = full.result.approximant.error_history;
            for (int m : ms) {
                series.push_back({static_cast<double>(m), h[std::min<std::size_t>(m, h.size() - 1)]});
            }
        }
        for (const auto& pt : series) {
            detail::check_truncation(pt.error, bk.tail_l2, 0.0, true, static_cast<int>(pt.m));
        }
    } else if (c.engine == "cubature") {
        const int trunc = 512;
        const BuiltKernel bk = detail::config_kernel(c, c.r.first, trunc);
        const BivariateTrigPoly K = shift_kernel(bk.poly);
        env("kernel", detail::kernel_label(c, c.r.first, trunc));
        env("class_q", qc.str());
        env("candidates", std::to_string(default_sparse_grid(K.degree_x())));
        // Dropped frequencies are orthogonal to the kept residual when q' = 2.
        const bool orth = qc == Exponent(2.0);
        env(orth ? "tail_l2" : "tail_l1", text::format_double(orth ? bk.tail_l2 : bk.tail_l1));
        const CubatureResult full = cubature_optimize(K, ms.back(), qc);
        double wsum = 0.0;
        for (const auto& w : full.weights) wsum += std::abs(w);
        for (int m : ms) {
            const double err = full.error_history[std::min<std::size_t>(m, full.error_history.size() - 1)];
            detail::check_truncation(err, orth ? bk.tail_l2 : bk.tail_l1, wsum, orth, m);
            series.push_back({static_cast<double>(m), err});
        }
    } else if (c.engine == "smolyak") {
        const int grid = 2048;
        env("test_function", "b3(x1) b3(x2)");
        env("error_grid", std::to_string(grid) + "x" + std::to_string(grid));
        env("norm", "max over grid");
        if (c.m_max > 9) throw Error("smolyak: levels above 9 exceed the error grid");
        std::vector<double> b(grid);
        for (int i = 0; i < grid; ++i) b[i] = bernoulli_cubic(grid_node(i, grid));
        std::vector<int> levels;
        for (int n = c.m_min; n <= c.m_max; ++n) levels.push_back(n);
        const auto errs = detail::run_cells<std::pair<double, double>>(
            static_cast<int>(levels.size()), jobs, [&](int i) {
                const SmolyakResult res =
                    smolyak_Tn([](double x, double y) { return bernoulli_cubic(x) * bernoulli_cubic(y); }, levels[i]);
                const GridFunction2 g = to_samples(res.poly, grid, grid);
                double e = 0.0;
                for (int a = 0; a < grid; ++a) {
                    for (int d = 0; d < grid; ++d) e = std::max(e, std::abs(g.at(a, d) - b[a] * b[d]));
                }
                return std::make_pair(static_cast<double>(res.sample_count), e);
            });
        // Error ~ 2^{-r n} n^{d-1}: fit log2(error) + r n against log2(n), one-sided.
        std::vector<double> x, y;
        for (std::size_t i = 0; i < levels.size(); ++i) {
            series.push_back({errs[i].first, errs[i].second});
            x.push_back(std::log2(static_cast<double>(levels[i])));
            y.push_back(std::log2(errs[i].second) + c.r.first * levels[i]);
        }
        rep.series = series;
        rep.fit = linear_fit(x, y);
        rep.fit_note = "log2(error) + r n against log2(n), n = " + std::to_string(c.m_min) + ".." +
                       std::to_string(c.m_max) + "; m column is the sample count";
        if (rep.predicted) {
            rep.predicted = 1.0;
            rep.one_sided = true;
        }
        rep.decide();
        return rep;
    } else if (c.engine == "extremal") {
        env("kernel", "V_n(x - y)");
        env("q1", c.q.first.str());
        series = detail::run_cells<RatePoint>(static_cast<int>(ms.size()), jobs, [&](int i) {
            const ExtremalKernel ek = extremal_kernel(c.r.first, c.r.second, c.q.first, ms[i]);
            return RatePoint{static_cast<double>(ms[i]), ek.scale};
        });
        rep.fit_note = "scale(n) = 1 / ||phi||_q1 against n";
    } else if (c.engine == "fooling") {
        env("dim", std::to_string(c.dim));
        env("points", "floor(theta(N) / 2), uniform random");
        series = detail::run_cells<RatePoint>(static_cast<int>(ms.size()), jobs, [&](int i) {
            const int N = ms[i];
            Rng rng(c.seed + static_cast<std::uint64_t>(N));
            std::uniform_real_distribution<double> u(0.0, two_pi);
            if (c.dim == 1) {
                const int theta = 2 * N + 1;
                std::vector<double> pts(theta / 2);
                for (auto& x : pts) x = u(rng);
                return RatePoint{static_cast<double>(theta), fooling_bound(pts, N, qc, p).bound};
            }
            const int theta = (2 * N + 1) * (2 * N + 1);
            std::vector<std::pair<double, double>> pts(theta / 2);
            for (auto& pt : pts) pt = {u(rng), u(rng)};
            return RatePoint{static_cast<double>(theta), fooling_bound(pts, N, N, qc, p).bound};
        });
        rep.fit_note = "bound against theta(N); m column is theta(N)";
    }

    rep.series = series;
    rep.fit = rate_fit(series);
    rep.decide();
    return rep;
}

}  // namespace trigrec
