#pragma once

// Log-log slope fitting and CSV rate reports.

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "trigrec/error.hpp"
#include "trigrec/text.hpp"
#include "trigrec/version.hpp"

namespace trigrec {

struct RatePoint {
    double m = 0.0;
    double error = 0.0;
};

struct SlopeFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    double intercept = 0.0;
};

/// Ordinary least squares of y on x.
inline SlopeFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error("linear_fit: length mismatch");
    const std::size_t n = x.size();
    if (n < 4) throw Error("insufficient points: slope fitting needs at least 4, got " + std::to_string(n));
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error("linear_fit: abscissae are all equal");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        sse += r * r;
    }
    f.stderr_ = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    return f;
}

/// Slope of log(error) against log(m).
inline SlopeFit rate_fit(const std::vector<RatePoint>& series) {
    if (series.size() < 4) {
        throw Error("insufficient points: slope fitting needs at least 4, got " + std::to_string(series.size()));
    }
    std::vector<double> x, y;
    for (const auto& pt : series) {
        if (!(pt.m > 0.0)) throw Error("rate_fit: m must be positive");
        if (!(pt.error > 0.0)) throw Error("rate_fit: errors must be positive, got " + text::format_double(pt.error));
        x.push_back(std::log2(pt.m));
        y.push_back(std::log2(pt.error));
    }
    return linear_fit(x, y);
}

enum class Verdict { pass, fail, none };

inline std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::none: return "none";
    }
    return "?";
}

struct RateReport {
    std::string engine;
    std::string law;
    std::vector<RatePoint> series;
    SlopeFit fit;
    std::optional<double> predicted;
    double tolerance = 0.3;
    bool one_sided = false;  ///< pass when slope <= predicted + tolerance
    std::string fit_note;    ///< what the slope was fitted to, when not log error vs log m
    Verdict verdict = Verdict::none;
    std::vector<std::pair<std::string, std::string>> environment;

    void decide() {
        if (!predicted) {
            verdict = Verdict::none;
            return;
        }
        const double d = fit.slope - *predicted;
        const bool ok = one_sided ? d <= tolerance : std::abs(d) <= tolerance;
        verdict = ok ? Verdict::pass : Verdict::fail;
    }
};

enum class CsvLayout { csv, xy };

/// Header comments, one row per point, and a closing summary comment.
inline void write_report(std::ostream& os, const RateReport& r, CsvLayout layout = CsvLayout::csv) {
    using text::format_double;
    os << "# trigrec rates report\n";
    os << "# version=" << version << "\n";
    os << "# engine=" << r.engine << "\n";
    os << "# law=" << (r.law.empty() ? "none" : r.law) << "\n";
    os << "# tolerance=" << format_double(r.tolerance) << (r.one_sided ? " (one-sided)" : "") << "\n";
    for (const auto& [k, v] : r.environment) os << "# " << k << "=" << v << "\n";
    if (!r.fit_note.empty()) os << "# fit=" << r.fit_note << "\n";
    if (layout == CsvLayout::csv) {
        os << "m,error,log2_m,log2_error\n";
    } else {
        os << "# m error log2_m log2_error\n";
    }
    const char sep = layout == CsvLayout::csv ? ',' : ' ';
    for (const auto& pt : r.series) {
        os << format_double(pt.m) << sep << format_double(pt.error) << sep << format_double(std::log2(pt.m)) << sep
           << format_double(pt.error > 0 ? std::log2(pt.error) : -INFINITY) << "\n";
    }
    os << "# summary,slope=" << format_double(r.fit.slope) << ",stderr=" << format_double(r.fit.stderr_)
       << ",predicted=" << (r.predicted ? format_double(*r.predicted) : std::string("none"))
       << ",verdict=" << to_string(r.verdict) << "\n";
}

}  // namespace trigrec
