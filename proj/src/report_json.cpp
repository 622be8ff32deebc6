#include "itermean/report_json.hpp"

#include <cstdio>
#include <cstdlib>

namespace itermean {

double round12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

namespace {

Json num(double v) { return Json(round12(v)); }

Json pair_json(double x, double y) { return Json::array({num(x), num(y)}); }

} // namespace

Json to_json(const MeanReport& r) {
    Json j;
    j["reflexive"] = r.reflexive;
    j["internal"] = r.internal;
    j["strict"] = r.strict;
    j["symmetric"] = r.symmetric;
    j["max_reflexivity_residual"] = num(r.max_reflexivity_residual);
    if (r.internality_witness) {
        const auto& w = *r.internality_witness;
        j["internality_witness"] = {
            {"x", num(w.x)}, {"y", num(w.y)}, {"value", num(w.value)}};
    } else {
        j["internality_witness"] = nullptr;
    }
    j["grid_size"] = r.grid_size;
    return j;
}

Json to_json(const ConvergenceReport& r) {
    Json j;
    j["converged"] = r.converged;
    j["grid"] = Json::array();
    for (double x : r.grid) j["grid"].push_back(num(x));
    j["terms_used"] = r.terms_used;
    j["max_tail_bound"] = num(r.max_tail_bound);
    j["divergence_witness"] =
        r.divergence_witness ? Json(num(*r.divergence_witness)) : Json(nullptr);
    return j;
}

Json to_json(const EqualityReport& r) {
    Json j;
    j["equal"] = r.equal;
    j["fitted_params"] = Json::object();
    for (const auto& [k, v] : r.fitted_params) j["fitted_params"][k] = num(v);
    j["max_residual"] = num(r.max_residual);
    j["structural_ok"] = r.structural_ok;
    j["certification"] = r.certification;
    return j;
}

Json to_json(const CompositeEqReport& r) {
    Json j;
    j["satisfied"] = r.satisfied;
    j["max_relative_gap"] = num(r.max_relative_gap);
    j["grid"] = Json::array();
    for (double x : r.grid) j["grid"].push_back(num(x));
    j["lhs_values"] = Json::array();
    for (double v : r.lhs_values) j["lhs_values"].push_back(num(v));
    j["rhs_values"] = Json::array();
    for (double v : r.rhs_values) j["rhs_values"].push_back(num(v));
    return j;
}

Json to_json(const InvarianceReport& r) {
    Json j;
    j["invariant"] = r.invariant;
    j["max_residual"] = num(r.max_residual);
    j["grid"] = Json::array();
    for (const auto& [x, y] : r.grid) j["grid"].push_back(pair_json(x, y));
    return j;
}

std::string trace_csv(const IterationTrace& t) {
    std::string out = "n,x,y,gap\n";
    char line[128];
    for (std::size_t n = 0; n < t.points.size(); ++n) {
        std::snprintf(line, sizeof line, "%zu,%.12g,%.12g,%.12g\n", n,
                      t.points[n].first, t.points[n].second, t.gap_history[n]);
        out += line;
    }
    return out;
}

std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

} // namespace itermean
