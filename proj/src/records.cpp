#include "aniso/records.hpp"

#include <cmath>
#include <cstdio>

namespace aniso {

namespace {

// JSON has no infinities; they are written as null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json log_value(const LogValue& v) { return {{"value", v.value}, {"log", number(v.log)}}; }

Json params_json(const Params& p) {
    Json j{{"p_h", p.p_h()}, {"p_v", p.p_v()}};
    if (p.p_h() > 0.0) {
        j["lambda_h"] = p.lambda_h();
        j["lambda_v"] = p.lambda_v();
        j["eta"] = p.eta();
    }
    return j;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json to_json(const Vertex& v) { return Json::array({v.x, v.y}); }

Json to_json(const LatticeRegion& r) {
    return {{"x_lo", r.x_lo()}, {"x_hi", r.x_hi()}, {"y_lo", r.y_lo()}, {"y_hi", r.y_hi()}};
}

Json to_json(const ExactResult& r) {
    Json j{{"engine", to_string(r.engine)},
           {"region", to_json(r.region)},
           {"p_h", r.params.p_h()},
           {"p_v", r.params.p_v()},
           {"x", to_json(r.x)},
           {"y", to_json(r.y)},
           {"value", r.value},
           {"log_value", number(r.log_value)},
           {"runtime_ms", r.runtime_ms}};
    if (!r.exact.empty()) j["exact"] = r.exact;
    return j;
}

Json to_json(const Estimate& e) {
    return {{"seed", e.seed},          {"n", e.n_samples},        {"successes", e.successes},
            {"p_hat", e.p_hat},        {"std_err", e.std_err},    {"ci_lo", e.ci_lo},
            {"ci_hi", e.ci_hi},        {"ci_method", to_string(e.ci_method)},
            {"runtime_ms", e.runtime_ms}};
}

Json to_json(const PairedEstimate& e) {
    return {{"seed", e.seed},
            {"n", e.n_samples},
            {"d_hat", e.d_hat},
            {"std_err", number(e.std_err)},
            {"ci_lo", e.ci_lo},
            {"ci_hi", e.ci_hi},
            {"only_x", e.only_x},
            {"only_x_prime", e.only_xprime},
            {"reflection_mismatches", e.reflection_mismatches},
            {"x_event", to_json(e.x_event)},
            {"x_prime_event", to_json(e.xprime_event)},
            {"runtime_ms", e.runtime_ms}};
}

Json to_json(const BoundReport& r) {
    Json j{{"params", params_json(r.params)},
           {"x", to_json(r.x)},
           {"x_prime", to_json(r.x_prime)},
           {"beta", r.beta.str()},
           {"lower_x", log_value(r.lower_x)},
           {"upper_x_prime_main", log_value(r.upper_xprime_main)},
           {"upper_x_prime_tail", log_value(r.upper_xprime_tail)},
           {"upper_x_prime", log_value(r.upper_xprime)},
           {"holds", r.holds}};
    if (r.eta_tilde) j["eta_tilde"] = *r.eta_tilde;
    return j;
}

Json to_json(const ThresholdReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"n", row.n},
                        {"x", to_json(row.x)},
                        {"beta", row.beta.str()},
                        {"eta_tilde", row.eta_tilde},
                        {"satisfied", row.satisfied}});
    return {{"eta", r.eta},
            {"rho", std::to_string(r.rho_num) + "/" + std::to_string(r.rho_den)},
            {"n_max", r.n_max},
            {"found", r.found},
            {"p_star", r.p_star},
            {"inf_eta_tilde", r.inf_eta_tilde},
            {"f_alpha_1", r.f.conservative},
            {"f_alpha_max", r.f.upper},
            {"f_satisfied", r.f_satisfied},
            {"rows", rows},
            {"note", r.note}};
}

Json to_json(const ContourCensus& c) {
    Json counts = Json::object();
    for (const auto& [n, v] : c.counts) counts[std::to_string(n)] = v.str();
    return {{"x", to_json(c.x)},
            {"n_max", c.n_max},
            {"beta", c.beta.str()},
            {"counts", counts},
            {"nodes", c.nodes},
            {"non_contour_circuits", c.non_contour_circuits}};
}

Json to_json(const LemmaReport& r) {
    return {{"x", to_json(r.x)},
            {"m", r.m},
            {"lhs", r.lhs.str()},
            {"rhs", r.rhs.str()},
            {"holds", r.holds},
            {"anchor_bound", r.anchor_bound.str()},
            {"anchors", r.anchors},
            {"per_anchor_holds", r.per_anchor_holds},
            {"aggregate_holds", r.aggregate_holds}};
}

Json to_json(const AlphaReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows) rows.push_back({{"n", row.n}, {"alpha", row.alpha.str()}, {"root", row.root}});
    Json sm = Json::array();
    for (const auto& [n, m] : r.supermultiplicativity_violations) sm.push_back({n, m});
    return {{"rho", r.rho}, {"rows", rows}, {"supermultiplicativity_violations", sm},
            {"bound_violations", r.bound_violations}};
}

std::string exact_csv_header() { return "engine,x_lo,x_hi,y_lo,y_hi,p_h,p_v,x1,x2,y1,y2,value,log_value,runtime_ms"; }

std::string exact_csv_row(const ExactResult& r) {
    return to_string(r.engine) + "," + std::to_string(r.region.x_lo()) + "," + std::to_string(r.region.x_hi()) + "," +
           std::to_string(r.region.y_lo()) + "," + std::to_string(r.region.y_hi()) + "," +
           format_double(r.params.p_h()) + "," + format_double(r.params.p_v()) + "," + std::to_string(r.x.x) + "," +
           std::to_string(r.x.y) + "," + std::to_string(r.y.x) + "," + std::to_string(r.y.y) + "," +
           format_double(r.value) + "," + format_double(r.log_value) + "," + format_double(r.runtime_ms);
}

std::string estimate_csv_header() { return "seed,n,successes,p_hat,std_err,ci_lo,ci_hi,ci_method,runtime_ms"; }

std::string estimate_csv_row(const Estimate& e) {
    return std::to_string(e.seed) + "," + std::to_string(e.n_samples) + "," + std::to_string(e.successes) + "," +
           format_double(e.p_hat) + "," + format_double(e.std_err) + "," + format_double(e.ci_lo) + "," +
           format_double(e.ci_hi) + "," + to_string(e.ci_method) + "," + format_double(e.runtime_ms);
}

std::string bounds_csv_header() { return "p_h,p_v,eta,x1,x2,lower,upper_main,upper_tail,holds"; }

std::string bounds_csv_row(const BoundReport& r) {
    return format_double(r.params.p_h()) + "," + format_double(r.params.p_v()) + "," + format_double(r.params.eta()) +
           "," + std::to_string(r.x.x) + "," + std::to_string(r.x.y) + "," + format_double(r.lower_x.value) + "," +
           format_double(r.upper_xprime_main.value) + "," + format_double(r.upper_xprime_tail.value) + "," +
           (r.holds ? "true" : "false");
}

std::string threshold_csv_header() { return "eta,rho,p_star,n,x1,x2,beta,eta_tilde,satisfied"; }

std::string threshold_csv_rows(const ThresholdReport& r) {
    std::string out;
    for (const auto& row : r.rows)
        out += format_double(r.eta) + "," + std::to_string(r.rho_num) + "/" + std::to_string(r.rho_den) + "," +
               format_double(r.p_star) + "," + std::to_string(row.n) + "," + std::to_string(row.x.x) + "," +
               std::to_string(row.x.y) + "," + row.beta.str() + "," + format_double(row.eta_tilde) + "," +
               (row.satisfied ? "true" : "false") + "\n";
    return out;
}

}  // namespace aniso
