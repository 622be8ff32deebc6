// itermean command line: constructions and checks with machine-readable
// reports. Exit codes: 0 verdict true, 1 verdict false, 2 bad input,
// 3 numeric failure.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "itermean/dynamics.hpp"
#include "itermean/iterprod.hpp"
#include "itermean/report_json.hpp"
#include "itermean/verify.hpp"

using namespace itermean;

namespace {

struct CommonOpts {
    std::string domain = "1,inf";
    std::string grid;              // "lo:hi:n", empty = default
    std::string format = "json";
    std::string out;
    double tol = kProductTol;
    int max_terms = kProductMaxTerms;
    int max_n = kIterationMaxSteps;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--domain", c.domain, "domain as lo,hi (hi may be inf)");
    cmd->add_option("--grid", c.grid, "evaluation grid as lo:hi:n");
    cmd->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_option("--out", c.out, "write the report to this path");
    cmd->add_option("--tol", c.tol);
    cmd->add_option("--max-terms", c.max_terms);
    cmd->add_option("--max-n", c.max_n);
}

Interval parse_domain(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw DomainError("domain must be lo,hi");
    const double lo = std::stod(text.substr(0, comma));
    const std::string hi_text = text.substr(comma + 1);
    const double hi = (hi_text == "inf") ? kInf : std::stod(hi_text);
    return Interval(lo, hi);
}

std::pair<double, double> parse_point(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw DomainError("--at expects x,y");
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

std::vector<double> geometric_points(double lo, double hi, int n) {
    if (n < 1 || !(lo > 0.0) || !(lo < hi))
        throw DomainError("grid requires 0 < lo < hi and n >= 1");
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n));
    if (n == 1) {
        pts.push_back(std::sqrt(lo * hi));
        return pts;
    }
    for (int i = 0; i < n; ++i)
        pts.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return pts;
}

std::vector<double> axis_grid(const Interval& dom, const std::string& spec) {
    if (!spec.empty()) {
        const auto c1 = spec.find(':');
        const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw DomainError("grid spec must be lo:hi:n");
        return geometric_points(std::stod(spec.substr(0, c1)),
                                std::stod(spec.substr(c1 + 1, c2 - c1 - 1)),
                                std::stoi(spec.substr(c2 + 1)));
    }
    if (dom.lo == 1.0 && !dom.bounded_above())
        return geometric_points(1.0 + 1e-9, 100.0, 33);
    return dom.sample_grid(33);
}

std::vector<std::pair<double, double>> pair_grid(const std::vector<double>& axis) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(axis.size() * axis.size());
    for (double x : axis)
        for (double y : axis) pairs.emplace_back(x, y);
    return pairs;
}

void emit(const CommonOpts& c, const std::string& payload) {
    if (c.out.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw DomainError("cannot open output path " + c.out);
    f << payload;
}

Json envelope(const std::string& command, Json inputs, bool verdict,
              double residual_max, Json residual_argmax) {
    Json j;
    j["command"] = command;
    j["inputs"] = std::move(inputs);
    j["verdict"] = verdict;
    j["residuals"] = {{"max", round12(residual_max)},
                      {"argmax", std::move(residual_argmax)}};
    j["grid"] = nullptr;
    j["values"] = Json::array();
    return j;
}

struct FnFlags {
    std::string f, g, h, r, phi, psi, fbar, gbar;
};

void add_fn_flags(CLI::App* cmd, FnFlags& fns) {
    cmd->set_help_flag("--help", "print help"); // frees -h for --h below
    cmd->add_option("--f", fns.f, "DSL expression for f");
    cmd->add_option("--g", fns.g, "DSL expression for g");
    cmd->add_option("--h", fns.h, "DSL expression for h");
    cmd->add_option("--r", fns.r, "DSL expression for r");
    cmd->add_option("--phi", fns.phi, "DSL expression for phi");
    cmd->add_option("--psi", fns.psi, "DSL expression for psi");
    cmd->add_option("--fbar", fns.fbar);
    cmd->add_option("--gbar", fns.gbar);
}

MonotoneFn need(const std::string& text, const char* flag, const Interval& dom) {
    if (text.empty())
        throw DomainError(std::string("missing required function flag --") + flag);
    return MonotoneFn::from_text(text, dom);
}

/// C_{f o g, g o h} built from the nested products of h.
BivarOp invariant_composition(const MonotoneFn& h, double tol) {
    auto [f, g] = nested_product_pair(h, tol);
    BivarOp op = make_C(compose(f, g), compose(g, h));
    op.label = "C(f o g, g o h)";
    return op;
}

BivarOp build_op(const std::string& name, const FnFlags& fns, const Interval& dom,
                 const CommonOpts& c) {
    if (name == "C") return make_C(need(fns.f, "f", dom), need(fns.g, "g", dom));
    if (name == "D") return make_D(need(fns.f, "f", dom), need(fns.g, "g", dom));
    if (name == "G") return make_G(need(fns.f, "f", dom), need(fns.g, "g", dom));
    if (name == "A") return make_A(need(fns.phi, "phi", dom), need(fns.psi, "psi", dom));
    if (name == "Cg") return iterative_mean(need(fns.g, "g", dom), c.tol);
    if (name == "Cr") return product_iterative_mean(need(fns.r, "r", dom), c.tol);
    if (name == "Gf") return quasi_geometric(need(fns.f, "f", dom));
    if (name == "Af") return quasi_arithmetic(need(fns.f, "f", dom));
    if (name == "invariantC") return invariant_composition(need(fns.h, "h", dom), c.tol);
    throw DomainError("unknown operation " + name);
}

Json fn_inputs(const FnFlags& fns) {
    Json j = Json::object();
    auto put = [&](const char* k, const std::string& v) {
        if (!v.empty()) j[k] = v;
    };
    put("f", fns.f);
    put("g", fns.g);
    put("h", fns.h);
    put("r", fns.r);
    put("phi", fns.phi);
    put("psi", fns.psi);
    put("fbar", fns.fbar);
    put("gbar", fns.gbar);
    return j;
}

MeanPair build_pair(const std::string& kind, const FnFlags& fns, const Interval& dom,
                    const CommonOpts& c) {
    if (kind == "ratio")
        return ratio_pair(need(fns.f, "f", dom), need(fns.g, "g", dom));
    if (kind == "difference")
        return difference_pair(need(fns.f, "f", dom), need(fns.g, "g", dom));
    if (kind == "iterative")
        return {iterative_mean(need(fns.g, "g", dom), c.tol),
                iterative_mean(need(fns.h, "h", dom), c.tol)};
    throw DomainError("unknown pair kind " + kind);
}

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// --- subcommands -----------------------------------------------------------

int cmd_eval(const CommonOpts& c, const FnFlags& fns, const std::string& op_name,
             const std::string& at) {
    const Interval dom = parse_domain(c.domain);
    const BivarOp op = build_op(op_name, fns, dom, c);

    std::vector<std::pair<double, double>> points;
    if (!at.empty()) {
        points.push_back(parse_point(at));
    } else {
        points = pair_grid(axis_grid(dom, c.grid));
    }

    Json inputs = fn_inputs(fns);
    inputs["op"] = op_name;
    if (!at.empty()) inputs["at"] = at;
    Json j = envelope("eval", std::move(inputs), true, 0.0, nullptr);
    std::string csv = "x,y,value\n";
    std::string text;
    for (const auto& [x, y] : points) {
        const double v = op(x, y);
        j["values"].push_back({{"x", round12(x)}, {"y", round12(y)}, {"value", round12(v)}});
        csv += fmt12(x) + "," + fmt12(y) + "," + fmt12(v) + "\n";
        text += fmt12(v) + "\n";
    }
    if (c.format == "json")
        emit(c, dump_report(j));
    else if (c.format == "csv")
        emit(c, csv);
    else
        emit(c, text);
    return 0;
}

int cmd_mean_check(const CommonOpts& c, const FnFlags& fns, const std::string& op_name) {
    const Interval dom = parse_domain(c.domain);
    const BivarOp op = build_op(op_name, fns, dom, c);
    const auto axis = axis_grid(dom, c.grid);
    const MeanReport report = check_mean(op, pair_grid(axis));

    Json inputs = fn_inputs(fns);
    inputs["op"] = op_name;
    Json argmax = nullptr;
    if (report.internality_witness)
        argmax = {round12(report.internality_witness->x),
                  round12(report.internality_witness->y)};
    Json j = envelope("mean-check", std::move(inputs), report.is_mean(),
                      report.max_reflexivity_residual, argmax);
    j["grid"] = {{"axis_points", static_cast<int>(axis.size())}};
    j["report"] = to_json(report);
    if (c.format == "text") {
        std::string text = std::string("mean=") + (report.is_mean() ? "true" : "false") +
                           " strict=" + (report.strict ? "true" : "false") +
                           " reflexive=" + (report.reflexive ? "true" : "false") + "\n";
        if (report.internality_witness)
            text += "witness: value " + fmt12(report.internality_witness->value) +
                    " at (" + fmt12(report.internality_witness->x) + "," +
                    fmt12(report.internality_witness->y) + ")\n";
        emit(c, text);
    } else {
        emit(c, dump_report(j));
    }
    return report.is_mean() ? 0 : 1;
}

int cmd_iterate(const CommonOpts& c, const FnFlags& fns, const std::string& pair_kind,
                const std::string& from) {
    const Interval dom = parse_domain(c.domain);
    const MeanPair pair = build_pair(pair_kind, fns, dom, c);
    const auto [x0, y0] = parse_point(from.empty() ? "2,8" : from);
    const IterationTrace tr = iterate_mapping(pair, x0, y0, kIterationTol, c.max_n);

    Json inputs = fn_inputs(fns);
    inputs["pair"] = pair_kind;
    inputs["from"] = {round12(x0), round12(y0)};
    Json j = envelope("iterate", std::move(inputs), tr.converged,
                      tr.gap_history.empty() ? 0.0 : tr.gap_history.back(), nullptr);
    for (std::size_t n = 0; n < tr.points.size(); ++n)
        j["values"].push_back({{"n", static_cast<int>(n)},
                               {"x", round12(tr.points[n].first)},
                               {"y", round12(tr.points[n].second)},
                               {"gap", round12(tr.gap_history[n])}});
    j["iterations"] = tr.iterations;
    if (tr.limit) j["limit"] = {round12(tr.limit->first), round12(tr.limit->second)};

    if (c.format == "json")
        emit(c, dump_report(j));
    else if (c.format == "csv")
        emit(c, trace_csv(tr));
    else
        emit(c, (tr.limit ? "limit " + fmt12(tr.limit->first) : std::string("no limit")) +
                    " after " + std::to_string(tr.iterations) + " iterations\n");
    return tr.converged ? 0 : 1;
}

int cmd_invariance(const CommonOpts& c, const FnFlags& fns, const std::string& pair_kind,
                   const std::string& invariant) {
    const Interval dom = parse_domain(c.domain);
    const MeanPair pair = build_pair(pair_kind, fns, dom, c);

    BivarOp K = geometric_mean(dom);
    if (invariant == "arithmetic")
        K = arithmetic_mean(dom);
    else if (invariant.rfind("qg:", 0) == 0)
        K = quasi_geometric(MonotoneFn::from_text(invariant.substr(3), dom));
    else if (invariant.rfind("qa:", 0) == 0)
        K = quasi_arithmetic(MonotoneFn::from_text(invariant.substr(3), dom));
    else if (invariant != "geometric")
        throw DomainError("invariant must be geometric|arithmetic|qg:EXPR|qa:EXPR");

    const auto axis = axis_grid(dom, c.grid);
    const InvarianceReport report = invariance_residual(K, pair, pair_grid(axis));

    Json inputs = fn_inputs(fns);
    inputs["pair"] = pair_kind;
    inputs["invariant"] = invariant;
    Json j = envelope("invariance", std::move(inputs), report.invariant,
                      report.max_residual, nullptr);
    j["grid"] = {{"axis_points", static_cast<int>(axis.size())}};
    if (c.format == "text")
        emit(c, std::string("invariant=") + (report.invariant ? "true" : "false") +
                    " max_residual=" + fmt12(report.max_residual) + "\n");
    else
        emit(c, dump_report(j));
    return report.invariant ? 0 : 1;
}

int cmd_eq11(const CommonOpts& c, const FnFlags& fns) {
    const Interval dom = parse_domain(c.domain);
    const MonotoneFn h = need(fns.h, "h", dom);
    const auto grid = axis_grid(dom, c.grid.empty() ? "1.5:10:9" : c.grid);
    const CompositeEqReport report = composite_equation_residual(h, grid);

    Json j = envelope("eq11", fn_inputs(fns), report.satisfied,
                      report.max_relative_gap, nullptr);
    j["report"] = to_json(report);
    if (c.format == "text")
        emit(c, std::string("satisfied=") + (report.satisfied ? "true" : "false") +
                    " max_gap=" + fmt12(report.max_relative_gap) + "\n");
    else
        emit(c, dump_report(j));
    return report.satisfied ? 0 : 1;
}

int cmd_equality(const CommonOpts& c, const FnFlags& fns, const std::string& kind) {
    const Interval dom = parse_domain(c.domain);
    const MonotoneFn f = need(fns.f, "f", dom);
    const MonotoneFn g = need(fns.g, "g", dom);
    const MonotoneFn fbar = need(fns.fbar, "fbar", dom);
    const MonotoneFn gbar = need(fns.gbar, "gbar", dom);
    const auto pairs = pair_grid(axis_grid(dom, c.grid));

    EqualityReport report;
    if (kind == "C")
        report = equality_C(f, g, fbar, gbar, pairs);
    else if (kind == "D")
        report = equality_D(f, g, fbar, gbar, pairs);
    else if (kind == "G")
        report = equality_G(f, g, fbar, gbar, pairs);
    else if (kind == "A")
        report = equality_A(f, g, fbar, gbar, pairs);
    else
        throw DomainError("equality kind must be C|D|G|A");

    Json inputs = fn_inputs(fns);
    inputs["kind"] = kind;
    Json j = envelope("equality", std::move(inputs), report.equal,
                      report.max_residual, nullptr);
    j["report"] = to_json(report);
    if (c.format == "text") {
        std::string text = std::string("equal=") + (report.equal ? "true" : "false");
        for (const auto& [k, v] : report.fitted_params)
            text += " " + k + "=" + fmt12(v);
        emit(c, text + "\n");
    } else {
        emit(c, dump_report(j));
    }
    return report.equal ? 0 : 1;
}

int cmd_product(const CommonOpts& c, const FnFlags& fns) {
    const Interval dom = parse_domain(c.domain);
    const MonotoneFn g = need(fns.g, "g", dom);
    const auto grid = axis_grid(dom, c.grid);
    const ConvergenceReport report = convergence_report(g, grid, c.tol);

    Json j = envelope("product", fn_inputs(fns), report.converged,
                      report.max_tail_bound,
                      report.divergence_witness ? Json(round12(*report.divergence_witness))
                                                : Json(nullptr));
    j["report"] = to_json(report);
    if (c.format == "text")
        emit(c, std::string("converged=") + (report.converged ? "true" : "false") +
                    " max_tail_bound=" + fmt12(report.max_tail_bound) + "\n");
    else
        emit(c, dump_report(j));
    return report.converged ? 0 : 1;
}

int cmd_deriv_system(const CommonOpts& c, double lo, double hi, int resolution,
                     double threshold) {
    const double min_norm = derivative_system_min_norm(lo, hi, resolution);
    const bool infeasible = min_norm > threshold;

    Json inputs = {{"lo", round12(lo)}, {"hi", round12(hi)},
                   {"resolution", resolution}, {"threshold", round12(threshold)}};
    Json j = envelope("deriv-system", std::move(inputs), infeasible, min_norm, nullptr);
    j["min_norm"] = round12(min_norm);
    if (c.format == "text")
        emit(c, "min_norm=" + fmt12(min_norm) + "\n");
    else
        emit(c, dump_report(j));
    return infeasible ? 0 : 1;
}

/// Merges a JSON config file into argv. Keys become --key flags; flags that
/// are already present on the command line win.
std::vector<std::string> merge_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
        if (args[i] == "--config") config_path = args[i + 1];
    if (config_path.empty()) return args;

    std::ifstream f(config_path);
    if (!f) throw DomainError("cannot read config file " + config_path);
    Json cfg = Json::parse(f);
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        args.push_back(flag);
        args.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    return args;
}

int run(std::vector<std::string> args) {
    CLI::App app{"constructions and checks for iterative-product means"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path)->expected(1);

    CommonOpts c;
    FnFlags fns;
    std::string op_name, at, pair_kind = "ratio", from, invariant = "geometric",
                eq_kind = "G";
    double lo = 1.0, hi = 10.0, threshold = 0.1;
    int resolution = 100;

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate an operation");
    eval_cmd->add_option("--op", op_name)->required();
    eval_cmd->add_option("--at", at, "single evaluation point x,y");
    eval_cmd->add_option("--config", config_path);
    add_fn_flags(eval_cmd, fns);
    add_common(eval_cmd, c);

    CLI::App* mean_cmd = app.add_subcommand("mean-check", "mean property report");
    mean_cmd->add_option("--op", op_name)->required();
    mean_cmd->add_option("--config", config_path);
    add_fn_flags(mean_cmd, fns);
    add_common(mean_cmd, c);

    CLI::App* iter_cmd = app.add_subcommand("iterate", "iterate a mean-type mapping");
    iter_cmd->add_option("--pair", pair_kind);
    iter_cmd->add_option("--from", from);
    iter_cmd->add_option("--config", config_path);
    add_fn_flags(iter_cmd, fns);
    add_common(iter_cmd, c);

    CLI::App* inv_cmd = app.add_subcommand("invariance", "invariance residual of a mean");
    inv_cmd->add_option("--pair", pair_kind);
    inv_cmd->add_option("--invariant", invariant,
                        "geometric|arithmetic|qg:EXPR|qa:EXPR");
    inv_cmd->add_option("--config", config_path);
    add_fn_flags(inv_cmd, fns);
    add_common(inv_cmd, c);

    CLI::App* eq11_cmd = app.add_subcommand("eq11", "composite equation residual");
    eq11_cmd->add_option("--config", config_path);
    add_fn_flags(eq11_cmd, fns);
    add_common(eq11_cmd, c);

    CLI::App* equality_cmd = app.add_subcommand("equality", "equality decider");
    equality_cmd->add_option("--kind", eq_kind)->required();
    equality_cmd->add_option("--config", config_path);
    add_fn_flags(equality_cmd, fns);
    add_common(equality_cmd, c);

    CLI::App* product_cmd = app.add_subcommand("product", "infinite product report");
    product_cmd->add_option("--config", config_path);
    add_fn_flags(product_cmd, fns);
    add_common(product_cmd, c);

    CLI::App* ds_cmd = app.add_subcommand("deriv-system", "derivative system search");
    ds_cmd->add_option("--lo", lo);
    ds_cmd->add_option("--hi", hi);
    ds_cmd->add_option("--resolution", resolution);
    ds_cmd->add_option("--threshold", threshold);
    ds_cmd->add_option("--config", config_path);
    add_common(ds_cmd, c);

    try {
        std::vector<const char*> argv;
        argv.push_back("itermean");
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (*eval_cmd) return cmd_eval(c, fns, op_name, at);
    if (*mean_cmd) return cmd_mean_check(c, fns, op_name);
    if (*iter_cmd) return cmd_iterate(c, fns, pair_kind, from);
    if (*inv_cmd) return cmd_invariance(c, fns, pair_kind, invariant);
    if (*eq11_cmd) return cmd_eq11(c, fns);
    if (*equality_cmd) return cmd_equality(c, fns, eq_kind);
    if (*product_cmd) return cmd_product(c, fns);
    if (*ds_cmd) return cmd_deriv_system(c, lo, hi, resolution, threshold);
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(merge_config(argc, argv));
    } catch (const DivergenceError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const NoConvergence& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const RangeError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
