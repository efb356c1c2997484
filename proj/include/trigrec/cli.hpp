#pragma once

// Command-line front end. Needs CLI11 on the include path.

#include <fstream>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trigrec/classes.hpp"
#include "trigrec/error.hpp"
#include "trigrec/experiments.hpp"
#include "trigrec/identities.hpp"
#include "trigrec/kernels.hpp"
#include "trigrec/operators.hpp"
#include "trigrec/sparse.hpp"
#include "trigrec/text.hpp"
#include "trigrec/version.hpp"

namespace trigrec {

namespace cli_detail {

inline std::string num(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(12) << v;
    return os.str();
}

inline std::string cnum(cplx v) { return num(v.real()) + (v.imag() < 0 ? "-" : "+") + num(std::abs(v.imag())) + "i"; }

inline Dictionary parse_dictionary(const std::string& s) {
    const std::string t = text::lower(s);
    if (t == "pi" || t == "svd") return Dictionary::Pi;
    if (t == "lk") return Dictionary::LK;
    if (t == "kl") return Dictionary::KL;
    if (t == "kk") return Dictionary::KK;
    throw Error("unknown dictionary '" + s + "' (expected Pi, LK, KL or KK)");
}

}  // namespace cli_detail

/// Returns 0 on success, 1 on a failed verdict, 2 on usage or input errors.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    using cli_detail::num;
    CLI::App app{"Sampling recovery and sparse approximation on the torus", "trigrec"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));

    // kernel
    auto* kcmd = app.add_subcommand("kernel", "Build a kernel and report norms or coefficients");
    std::string kspec;
    std::string knorms;
    bool kcoeffs = false;
    kcmd->add_option("--spec", kspec, "kernel spec, e.g. fejer:j=4 or bernoulli:a=2,T=64")->required();
    kcmd->add_option("--norms", knorms, "comma-separated exponents, e.g. 1,2,inf");
    kcmd->add_flag("--coeffs", kcoeffs, "print the coefficients");

    // recover
    auto* rcmd = app.add_subcommand("recover", "Worst-case recovery error of R_n or I_n on a kernel class");
    std::string rspec = "bernoulli:a=2,T=4096";
    std::string rop = "R";
    int rn = 16;
    std::string rq = "1", rp = "inf";
    rcmd->add_option("--kernel", rspec, "univariate kernel g; the class kernel is g(x - y)");
    rcmd->add_option("--operator", rop, "R or I")->check(CLI::IsMember({"R", "I"}));
    rcmd->add_option("--n", rn, "operator index")->check(CLI::PositiveNumber);
    rcmd->add_option("--q", rq, "class exponent");
    rcmd->add_option("--p", rp, "error norm exponent");

    // sparse
    auto* scmd = app.add_subcommand("sparse", "m-term approximation of a kernel on a grid");
    std::string sspec = "bernoulli:a=2,T=32";
    std::string sdict = "Pi";
    int sm = 8;
    int sgrid = 0;
    std::string sout;
    scmd->add_option("--kernel", sspec, "univariate kernel g; the approximated kernel is g(x - y)");
    scmd->add_option("--dict", sdict, "Pi, LK, KL or KK");
    scmd->add_option("--m", sm, "number of terms")->check(CLI::NonNegativeNumber);
    scmd->add_option("--grid", sgrid, "nodes per axis (default 4(2N+1))");
    scmd->add_option("--out", sout, "write the term manifest here");

    // cubature
    auto* ccmd = app.add_subcommand("cubature", "Greedy cubature knots and weights for J_K");
    std::string cspec = "bernoulli:a=2,T=32";
    int cm = 8;
    std::string cq = "1";
    ccmd->add_option("--kernel", cspec, "univariate kernel g; K(x, y) = g(x - y)");
    ccmd->add_option("--m", cm, "number of knots")->check(CLI::NonNegativeNumber);
    ccmd->add_option("--q", cq, "class exponent");

    // verify
    auto* vcmd = app.add_subcommand("verify", "Check an operator identity or a reduction");
    std::string vid;
    IdentityInstance inst;
    std::string vq = "1", vp = "inf";
    int instances = 1;
    unsigned long long vseed = 0;
    vcmd->add_option("--id", vid, "Lb5, Lb6, Lb7, RNP1-bound, RNP2-equality or RNP3-equality")
        ->required()
        ->check(CLI::IsMember(known_identities()));
    vcmd->add_option("--n", inst.n, "polynomial size parameter");
    vcmd->add_option("--a", inst.a, "smoothness a");
    vcmd->add_option("--alpha", inst.alpha, "phase alpha");
    vcmd->add_option("--b", inst.b, "second smoothness b");
    vcmd->add_option("--beta", inst.beta, "second phase beta");
    vcmd->add_option("--q", vq, "class exponent");
    vcmd->add_option("--p", vp, "error exponent");
    vcmd->add_option("--m", inst.m, "knots per plan");
    vcmd->add_option("--degree", inst.degree, "random kernel degree");
    vcmd->add_option("--grid", inst.grid, "nodes per axis");
    vcmd->add_option("--candidates", inst.candidates, "candidate knot grid size");
    vcmd->add_option("--instances", instances, "number of seeded instances")->check(CLI::PositiveNumber);
    vcmd->add_option("--seed", vseed, "base seed");

    // rates
    auto* tcmd = app.add_subcommand("rates", "Run a rate experiment from a config file");
    std::string tconfig, tout, tlayout = "csv";
    int jobs = 1;
    std::optional<unsigned long long> tseed;
    tcmd->add_option("--config", tconfig, "experiment config")->required();
    tcmd->add_option("--out", tout, "CSV report path (default stdout)");
    tcmd->add_option("--layout", tlayout, "csv or xy")->check(CLI::IsMember({"csv", "xy"}));
    tcmd->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    tcmd->add_option("--seed", tseed, "override the config seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        CLI::App* target = &app;
        for (auto* sub : app.get_subcommands()) target = sub;
        out << target->help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << version << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        CLI::App* target = &app;
        for (auto* sub : app.get_subcommands()) target = sub;
        err << target->help();
        return 2;
    }

    try {
        if (kcmd->parsed()) {
            const BuiltKernel bk = build_kernel(parse_kernel_spec(kspec));
            out << "# kernel " << to_string(parse_kernel_spec(kspec)) << " degree " << bk.poly.degree() << "\n";
            if (!knorms.empty()) {
                for (const auto& item : text::split_top_level(knorms, ',')) {
                    const Exponent e = Exponent::parse(item);
                    out << "L_" << e.str() << " " << num(norm(bk.poly, e)) << "\n";
                }
            }
            if (kcoeffs) {
                for (int k = -bk.poly.degree(); k <= bk.poly.degree(); ++k) {
                    out << k << " " << cli_detail::cnum(bk.poly.coeff(k)) << "\n";
                }
            }
            return 0;
        }
        if (rcmd->parsed()) {
            const BuiltKernel bk = build_kernel(parse_kernel_spec(rspec));
            const RecoveryPlan plan = rop == "I" ? make_In_plan(rn) : make_Rn_plan(rn);
            const double e = worst_case_error(KernelClass{shift_kernel(bk.poly), Exponent::parse(rq)}, plan,
                                              Exponent::parse(rp));
            out << "points " << plan.size() << "\n";
            out << "lebesgue_constant " << num(lebesgue_constant(plan)) << "\n";
            out << "worst_case_error " << num(e) << "\n";
            out << "truncation_tail_l1 " << num(bk.tail_l1) << "\n";
            return 0;
        }
        if (scmd->parsed()) {
            const KernelSpec spec = parse_kernel_spec(sspec);
            const BivariateTrigPoly K = shift_kernel(make_kernel(spec));
            std::optional<int> g;
            if (sgrid > 0) g = sgrid;
            const DiscretizedKernel dk = discretize(K, g, g, to_string(spec));
            SparseApproximant ap;
            double error = 0.0;
            std::string note;
            switch (cli_detail::parse_dictionary(sdict)) {
                case Dictionary::Pi: {
                    auto r = svd_bilinear(dk, sm);
                    ap = r.result.approximant;
                    error = r.result.error;
                    break;
                }
                case Dictionary::LK: {
                    auto r = greedy_lk(dk, sm);
                    ap = r.result.approximant;
                    error = r.result.error;
                    break;
                }
                case Dictionary::KL: {
                    auto r = greedy_kl(dk, sm);
                    ap = r.result.approximant;
                    error = r.result.error;
                    break;
                }
                default: {
                    auto r = cross_kk(dk, sm);
                    ap = r.result.approximant;
                    error = r.result.error;
                    note = r.result.note;
                    break;
                }
            }
            out << "dictionary " << to_string(ap.dictionary) << "\n";
            out << "grid " << dk.size_x << "x" << dk.size_y << "\n";
            out << "terms " << ap.size() << "\n";
            out << "error " << num(error) << "\n";
            if (!note.empty()) out << "note " << note << "\n";
            if (!sout.empty()) {
                std::ofstream f(sout);
                if (!f) throw Error("cannot write '" + sout + "'");
                write_manifest(f, ap, "kernel " + dk.provenance);
            }
            return 0;
        }
        if (ccmd->parsed()) {
            const BivariateTrigPoly K = shift_kernel(make_kernel(parse_kernel_spec(cspec)));
            const CubatureResult r = cubature_optimize(K, cm, Exponent::parse(cq));
            for (std::size_t i = 0; i < r.knots.size(); ++i) {
                out << "knot " << num(r.knots[i]) << " weight " << cli_detail::cnum(r.weights[i]) << "\n";
            }
            out << "error " << num(r.error) << "\n";
            return 0;
        }
        if (vcmd->parsed()) {
            inst.q = Exponent::parse(vq);
            inst.p = Exponent::parse(vp);
            bool all = true;
            for (int i = 0; i < instances; ++i) {
                inst.seed = vseed + static_cast<unsigned long long>(i);
                const IdentityReport rep = verify_identity(vid, inst);
                out << rep.id << " seed " << inst.seed << " value " << num(rep.value) << " tolerance "
                    << num(rep.tolerance) << " " << (rep.pass ? "pass" : "fail") << " (" << rep.detail << ")\n";
                all = all && rep.pass;
            }
            return all ? 0 : 1;
        }
        if (tcmd->parsed()) {
            ExperimentConfig cfg = load_experiment_config(tconfig);
            if (tseed) cfg.seed = *tseed;
            const RateReport rep = run_experiment(cfg, jobs);
            const CsvLayout layout = tlayout == "xy" ? CsvLayout::xy : CsvLayout::csv;
            if (tout.empty()) {
                write_report(out, rep, layout);
            } else {
                std::ofstream f(tout, std::ios::binary);
                if (!f) throw Error("cannot write '" + tout + "'");
                write_report(f, rep, layout);
                out << "slope " << num(rep.fit.slope) << " predicted "
                    << (rep.predicted ? num(*rep.predicted) : std::string("none")) << " verdict "
                    << to_string(rep.verdict) << "\n";
            }
            return rep.verdict == Verdict::fail ? 1 : 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace trigrec
