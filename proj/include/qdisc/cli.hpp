#pragma once

/**
 * @file cli.hpp
 * @brief Command-line front end: norm, fracderiv, carleson, operator, verify
 *        and families subcommands.
 *
 * Exit codes: 0 success (and verified brackets), 1 failed assertion or I/O
 * failure, 2 usage, parse or admissibility error.
 */

#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdisc/calculus.hpp"
#include "qdisc/families.hpp"
#include "qdisc/io.hpp"
#include "qdisc/params.hpp"
#include "qdisc/quadrature.hpp"
#include "qdisc/spaces.hpp"
#include "qdisc/verify.hpp"

namespace qdisc::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;

struct GlobalOptions {
    QuadConfig cfg{};
    bool refine = false;
    std::optional<std::uint64_t> seed;
    std::string out = "-";
    std::string format = "json";
};

struct ParamOverrides {
    std::optional<double> p, beta, b, nu;

    SpaceParams apply(SpaceParams base) const {
        if (p) base.p = *p;
        if (beta) base.beta = *beta;
        if (b) base.b = *b;
        if (nu) base.nu = *nu;
        return base;
    }
    bool any() const { return p || beta || b || nu; }
    void add_to(CLI::App* cmd) {
        cmd->add_option("--p", p, "Space parameter p");
        cmd->add_option("--beta", beta, "Space parameter beta");
        cmd->add_option("--b", b, "Fractional-derivative base b");
        cmd->add_option("--nu", nu, "Derivative order nu");
    }
};

/// Result of one subcommand: text to emit and the exit code.
struct Outcome {
    std::string text;
    int code = exit_ok;
};

inline const std::vector<std::string>& norm_ops() {
    static const std::vector<std::string> ops{"q-disc-box",   "q-disc-mobius", "q-disc-norm", "q-circle",   "q-circle-difference",
                                              "bmo-beta",     "morrey",        "morrey-carleson", "growth", "hardy2"};
    return ops;
}

inline std::string series_csv(const TaylorSeries& f) {
    std::string out = "k,re,im\n";
    for (std::size_t k = 0; k <= f.degree(); ++k)
        out += std::to_string(k) + "," + format_double(f[k].real()) + "," + format_double(f[k].imag()) + "\n";
    return out;
}

inline std::string fourier_csv(const FourierSeries& F) {
    std::string out = "n,re,im\n";
    for (int n = -F.bandwidth(); n <= F.bandwidth(); ++n)
        out += std::to_string(n) + "," + format_double(F[n].real()) + "," + format_double(F[n].imag()) + "\n";
    return out;
}

inline std::string member_text(const FamilyMember& m, const std::string& format) {
    if (format == "csv") {
        if (const auto* f = std::get_if<TaylorSeries>(&m)) return series_csv(*f);
        return fourier_csv(std::get<FourierSeries>(m));
    }
    return dump(to_json(m));
}

inline std::string norm_text(const NormResult& r, json header, const std::string& format) {
    if (format == "csv") return norm_table_csv(r);
    const json body = to_json(r);
    for (const auto& [k, v] : body.items()) header[k] = v;
    return dump(header);
}

inline void require_format(const std::string& f) {
    if (f != "json" && f != "csv") throw parse_error("--format must be json or csv");
}

inline Outcome cmd_norm(const GlobalOptions& g, const std::string& op, const std::string& fn, const ParamOverrides& po,
                        std::optional<double> lambda) {
    const FunctionSpecDocument doc = parse_function_spec(load_json_argument(fn));
    const SpaceParams params = po.apply(doc.params);
    const QuadConfig& cfg = g.cfg;
    json header{{"op", op}, {"params", to_json(params)}};
    NormResult r;
    if (op == "q-disc-box") {
        require_admissible(params, TheoremContext::base);
        r = q_disc_box_seminorm(doc.taylor(), params, cfg);
    } else if (op == "q-disc-mobius") {
        require_admissible(params, TheoremContext::base);
        r = q_disc_mobius_seminorm(doc.taylor(), params, cfg);
    } else if (op == "q-disc-norm") {
        require_admissible(params, TheoremContext::base);
        r = q_disc_mobius_norm(doc.taylor(), params, cfg);
    } else if (op == "q-circle") {
        require_admissible(params, TheoremContext::circleTheorems);
        r = q_circle_seminorm(doc.fourier(), params, cfg);
    } else if (op == "q-circle-difference") {
        require_admissible(params, TheoremContext::circleTheorems);
        r = q_circle_difference_form(doc.fourier(), params, cfg);
    } else if (op == "bmo-beta") {
        require_admissible(params, TheoremContext::base);
        r = bmo_beta_seminorm(doc.fourier(), params.beta, cfg);
    } else if (op == "morrey" || op == "morrey-carleson") {
        const double lam = lambda.value_or(params.morrey_lambda());
        header["lambda"] = lam;
        r = op == "morrey" ? morrey_norm(doc.taylor(), lam, cfg) : morrey_carleson_constant(doc.taylor(), lam, cfg);
    } else if (op == "growth") {
        r = growth_seminorm(doc.taylor(), params.beta, cfg);
    } else if (op == "hardy2") {
        header["value"] = hardy2_norm(doc.taylor());
        return {dump(header), exit_ok};
    } else {
        throw parse_error("unknown --op \"" + op + "\"");
    }
    if (g.refine) {
        // Whole-supremum recomputation at the refined configuration.
        QuadConfig fine = cfg.refined();
        GlobalOptions gf = g;
        gf.cfg = fine;
        gf.refine = false;
        gf.format = "json";
        const json jf = parse_json_text(cmd_norm(gf, op, fn, po, lambda).text);
        detail::set_refined(r, jf["value"].get<double>());
    }
    return {norm_text(r, header, g.format), exit_ok};
}

inline Outcome cmd_fracderiv(const GlobalOptions& g, double nu, double b, const std::string& fn, const std::optional<std::string>& at) {
    const FunctionSpecDocument doc = parse_function_spec(load_json_argument(fn));
    const FracDerivParams fp(nu, b);
    const TaylorSeries d = frac_derivative(doc.taylor(), fp);
    if (!at) return {member_text(d, g.format), exit_ok};
    const cd z = complex_from_json(parse_json_text(*at));
    if (!(std::abs(z) < 1.0)) throw parse_error("--at must lie in the open unit disc");
    const cd coeff = d(z);
    const cd integral = frac_derivative_integral(doc.taylor(), fp, z, g.cfg);
    json j{{"nu", nu},
           {"b", b},
           {"m", fp.m()},
           {"z", complex_to_json(z)},
           {"coefficientForm", complex_to_json(coeff)},
           {"integralForm", complex_to_json(integral)},
           {"relativeDifference", std::abs(coeff) > 0.0 ? std::abs(coeff - integral) / std::abs(coeff) : std::abs(integral)}};
    j["derivative"] = to_json(d);
    return {dump(j), exit_ok};
}

inline Outcome cmd_carleson(const GlobalOptions& g, double s, const std::string& form, const std::optional<std::string>& fn,
                            double weight_exp) {
    if (!(s > 0.0)) throw parse_error("--s must be > 0");
    Density w;
    json header{{"form", form}, {"s", s}, {"weightExp", weight_exp}};
    if (fn) {
        const FunctionSpecDocument doc = parse_function_spec(load_json_argument(*fn));
        if (const auto* f = std::get_if<TaylorSeries>(&doc.member)) {
            w = derivative_density(*f, weight_exp);
            header["density"] = "|f'|^2 (1-|z|^2)^weightExp";
        } else {
            w = poisson_density(std::get<FourierSeries>(doc.member), weight_exp);
            header["density"] = "|grad hat F|^2 (1-|z|^2)^weightExp";
        }
    } else {
        w = power_weight(weight_exp);
        header["density"] = "(1-|z|^2)^weightExp";
    }
    auto run = [&](const QuadConfig& c) {
        if (form == "box") return carleson_box_constant(w, s, c);
        if (form == "mobius") return carleson_mobius_constant(w, s, c);
        throw parse_error("--form must be box or mobius");
    };
    NormResult r = run(g.cfg);
    if (g.refine) detail::set_refined(r, run(g.cfg.refined()).value);
    return {norm_text(r, header, g.format), exit_ok};
}

inline Outcome cmd_operator(const GlobalOptions& g, const std::string& kind, const std::string& fn, const std::string& gfn,
                            std::optional<std::size_t> budget) {
    const TaylorSeries f = parse_function_spec(load_json_argument(fn)).taylor();
    const TaylorSeries gs = parse_function_spec(load_json_argument(gfn)).taylor();
    const std::size_t n = budget.value_or(f.degree() + gs.degree() + 1);
    TaylorSeries out;
    if (kind == "Tg") out = volterra_Tg(f, gs, n);
    else if (kind == "Ig") out = op_Ig(f, gs, n);
    else if (kind == "Mg") out = op_Mg(f, gs, n);
    else throw parse_error("--kind must be Tg, Ig or Mg");
    return {member_text(out, g.format), exit_ok};
}

inline Outcome cmd_verify(const GlobalOptions& g, const std::string& id, const std::optional<std::string>& params_arg,
                          const ParamOverrides& po, const std::optional<std::string>& csv_out) {
    ExperimentInput in;
    in.options.cfg = g.cfg;
    in.options.refine = g.refine;
    if (g.seed) in.options.seed = *g.seed;
    if (params_arg) {
        in.params = space_params_from_json(load_json_argument(*params_arg));
        in.params_given = true;
    }
    if (po.any()) {
        in.params = po.apply(in.params);
        in.params_given = true;
    }
    std::vector<std::string> ids;
    if (id == "all") ids = experiment_ids();
    else if (std::find(experiment_ids().begin(), experiment_ids().end(), id) != experiment_ids().end()) ids = {id};
    else throw parse_error("unknown experiment \"" + id + "\"");

    std::vector<ComparabilityReport> reports;
    for (const auto& e : ids) reports.push_back(run_experiment(e, in));
    bool ok = true;
    for (const auto& r : reports) ok = ok && r.passed();

    std::string csv;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        std::string part = report_csv(reports[i]);
        if (i > 0) part.erase(0, part.find('\n') + 1);   // one header row
        csv += part;
    }
    if (csv_out) write_output(csv, *csv_out);
    std::string text;
    if (g.format == "csv") {
        text = csv;
    } else if (reports.size() == 1) {
        text = dump(to_json(reports.front()));
    } else {
        json arr = json::array();
        for (const auto& r : reports) arr.push_back(to_json(r));
        text = dump(json{{"reports", arr}, {"passed", ok}});
    }
    return {text, ok ? exit_ok : exit_failure};
}

inline Outcome cmd_families(const GlobalOptions& g, const std::optional<std::string>& fn, bool list) {
    if (list || !fn) {
        json kinds = json::array();
        for (FamilyKind k : {FamilyKind::monomial, FamilyKind::polynomial, FamilyKind::lacunary, FamilyKind::fbTest,
                             FamilyKind::boundaryLacunary}) {
            FamilySpec s;
            s.kind = k;
            kinds.push_back(to_json(s));
        }
        json ex = json::array();
        for (const auto& e : experiment_ids()) ex.push_back(e);
        return {dump(json{{"familyKinds", kinds}, {"experiments", ex}, {"normOps", norm_ops()}}), exit_ok};
    }
    json doc = load_json_argument(*fn);
    if (g.seed && doc.is_object() && doc.value("kind", "") == "polynomial") {
        if (!doc.contains("params")) doc["params"] = json::object();
        doc["params"]["seed"] = *g.seed;
    }
    const FunctionSpecDocument parsed = parse_function_spec(doc);
    if (g.format == "csv") return {member_text(parsed.member, "csv"), exit_ok};
    json out = json::object();
    if (parsed.family) out["spec"] = to_json(*parsed.family);
    const json body = to_json(parsed.member);
    for (const auto& [k, v] : body.items()) out[k] = v;
    return {dump(out), exit_ok};
}

/// Parses argv, runs one subcommand and writes its output. Returns the exit code.
inline int run_command(int argc, const char* const* argv, std::ostream& err = std::cerr) {
    CLI::App app{"qdisc: Q-type function space norms, Carleson measures and operator experiments on the unit disc"};
    app.name("qdisc");
    app.require_subcommand(1, 1);
    app.fallthrough();

    GlobalOptions g;
    std::optional<std::uint64_t> seed;
    app.add_option("--levels", g.cfg.radial_levels, "Gauss-Legendre nodes per radial shell (>= 8)")->capture_default_str();
    app.add_option("--angles", g.cfg.angular_count, "Base angular cell count (>= 16)")->capture_default_str();
    app.add_option("--grade", g.cfg.grade_ratio, "Geometric radial grading ratio in (0,1)")->capture_default_str();
    app.add_option("--eps-min", g.cfg.eps_min, "Smallest resolved 1-|z|")->capture_default_str();
    app.add_flag("--refine", g.refine, "Recompute at one refinement step and report the change");
    app.add_option("--seed", seed, "Seed for random families");
    app.add_option("--out", g.out, "Output path, - for stdout")->capture_default_str();
    app.add_option("--format", g.format, "json or csv")->capture_default_str();

    std::function<Outcome()> action;

    // norm
    auto* norm = app.add_subcommand("norm", "Evaluate a norm or seminorm with its witness");
    std::string op, fn;
    ParamOverrides norm_po;
    std::optional<double> lambda;
    norm->add_option("--op", op, "Operation")->required();
    norm->add_option("--fn", fn, "Function document (inline JSON or path)")->required();
    norm->add_option("--lambda", lambda, "Morrey exponent (default p-2beta+2)");
    norm_po.add_to(norm);
    norm->callback([&] { action = [&] { return cmd_norm(g, op, fn, norm_po, lambda); }; });

    // fracderiv
    auto* frac = app.add_subcommand("fracderiv", "Fractional derivative of a polynomial");
    double fd_nu = 1.0, fd_b = 2.0;
    std::string fd_fn;
    std::optional<std::string> fd_at;
    frac->add_option("--nu", fd_nu, "Order nu > 0")->required();
    frac->add_option("--b", fd_b, "Base b > 1")->capture_default_str();
    frac->add_option("--fn", fd_fn, "Function document")->required();
    frac->add_option("--at", fd_at, "Point [re,im]: also evaluate the integral form there");
    frac->callback([&] { action = [&] { return cmd_fracderiv(g, fd_nu, fd_b, fd_fn, fd_at); }; });

    // carleson
    auto* carl = app.add_subcommand("carleson", "Carleson constant of a density");
    double c_s = 1.0, c_wexp = 0.0;
    std::string c_form = "box";
    std::optional<std::string> c_fn;
    carl->add_option("--s", c_s, "Scaling exponent s > 0")->capture_default_str();
    carl->add_option("--form", c_form, "box or mobius")->capture_default_str();
    carl->add_option("--fn", c_fn, "Function document; density |f'|^2 (1-|z|^2)^weight-exp");
    carl->add_option("--weight-exp", c_wexp, "Weight exponent; without --fn the density is (1-|z|^2)^weight-exp")
        ->capture_default_str();
    carl->callback([&] { action = [&] { return cmd_carleson(g, c_s, c_form, c_fn, c_wexp); }; });

    // operator
    auto* oper = app.add_subcommand("operator", "Apply T_g, I_g or M_g to truncated series");
    std::string o_kind, o_fn, o_g;
    std::optional<std::size_t> o_budget;
    oper->add_option("--kind", o_kind, "Tg, Ig or Mg")->required();
    oper->add_option("--fn", o_fn, "Function f")->required();
    oper->add_option("--g", o_g, "Symbol g")->required();
    oper->add_option("--budget", o_budget, "Truncation degree (default deg f + deg g + 1)");
    oper->callback([&] { action = [&] { return cmd_operator(g, o_kind, o_fn, o_g, o_budget); }; });

    // verify
    auto* ver = app.add_subcommand("verify", "Run an experiment (or all) and report its checks");
    std::string v_id;
    std::optional<std::string> v_params, v_csv;
    ParamOverrides v_po;
    ver->add_option("experiment", v_id, "Experiment id or all")->required();
    ver->add_option("--params", v_params, "Space parameters {p, beta, b, nu} (inline JSON or path)");
    ver->add_option("--csv-out", v_csv, "Also write the CSV rows to this path");
    v_po.add_to(ver);
    ver->callback([&] { action = [&] { return cmd_verify(g, v_id, v_params, v_po, v_csv); }; });

    // families
    auto* fam = app.add_subcommand("families", "Materialize a family spec or list the catalogue");
    std::optional<std::string> f_fn;
    bool f_list = false;
    fam->add_option("--fn", f_fn, "Family spec or coefficient document");
    fam->add_flag("--list", f_list, "List family kinds, experiments and norm ops");
    fam->callback([&] { action = [&] { return cmd_families(g, f_fn, f_list); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    try {
        require_format(g.format);
        if (seed) g.seed = *seed;
        g.cfg.check();
        const Outcome o = action();
        write_output(o.text, g.out);
        return o.code;
    } catch (const admissibility_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const io_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

} // namespace qdisc::cli
