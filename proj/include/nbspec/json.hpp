#pragma once

// JSON views of the library's report types. Optional: only this header
// depends on nlohmann/json.

#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "bounds.hpp"
#include "graph.hpp"
#include "oracle.hpp"
#include "perturb.hpp"
#include "spectra.hpp"

namespace nbspec {

inline nlohmann::json json_number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

inline nlohmann::json to_json(const ValidationReport& r) {
    return {{"connected", r.connected},
            {"min_degree", r.min_degree},
            {"is_cycle", r.is_cycle},
            {"perron_applicable", r.perron_applicable}};
}

inline nlohmann::json to_json(const BoundReport& r) {
    return {{"p", to_string(r.p)},
            {"lxr_norm", json_number(r.lxr_norm)},
            {"gamma", json_number(r.gamma)},
            {"theorem2_bound", json_number(r.theorem2_bound)},
            {"x_degree", r.x_degree},
            {"alpha11", json_number(r.alpha11)},
            {"eps_approx", json_number(r.eps_approx)},
            {"eps_actual", json_number(r.eps_actual)},
            {"prop1_holds", r.prop1_holds}};
}

inline nlohmann::json to_json(const std::complex<double>& z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline nlohmann::json to_json(const UnitEigenspaceCheck& c) {
    return {{"value", c.value},
            {"count", c.count},
            {"multiplicity_ok", c.multiplicity_ok},
            {"exceptional", c.exceptional},
            {"allowed_exceptional", c.allowed_exceptional},
            {"p_residual", json_number(c.p_residual)},
            {"edge_residual", json_number(c.edge_residual)},
            {"node_sum_residual", json_number(c.node_sum_residual)},
            {"eigen_residual", json_number(c.eigen_residual)},
            {"relations_ok", c.relations_ok}};
}

inline nlohmann::json to_json(const Pm1Report& r) {
    return {{"m_minus_n", r.m_minus_n}, {"plus", to_json(r.plus)}, {"minus", to_json(r.minus)}, {"pass", r.pass()}};
}

inline nlohmann::json to_json(const oracle::WalkReport& r) {
    return {{"pass", r.pass},
            {"r_max", r.r_max},
            {"entries_checked", r.entries_checked},
            {"mismatches", r.mismatches},
            {"max_abs_difference", r.max_abs_difference}};
}

inline nlohmann::json to_json(const AdditionAnalysis& a) {
    nlohmann::json j;
    j["direction"] = a.direction == Direction::addition ? "addition" : "removal";
    j["d"] = a.d;
    j["neighbors"] = a.neighbors;
    j["lambda1"] = a.lambda1;
    j["lambda_c"] = a.lambda_c;
    j["direct_lambda_c"] = a.direct_lambda_c;
    j["epsilon_c"] = a.epsilon_c;
    j["eps_actual"] = a.epsilon_c;
    j["x_degree"] = a.x_degree;
    j["alpha11"] = a.alpha11 ? nlohmann::json(*a.alpha11) : nlohmann::json(nullptr);
    j["eps_approx"] = a.eps_approx ? nlohmann::json(*a.eps_approx) : nlohmann::json(nullptr);
    j["used_eq5"] = a.used_eq5;
    j["cycle_base"] = a.cycle_base;
    j["root"] = {{"residual", a.root.residual}, {"evaluations", a.root.evaluations}};
    nlohmann::json bounds = nlohmann::json::array();
    for (const auto& b : a.bounds) bounds.push_back(to_json(b));
    j["bounds"] = bounds;
    if (const auto* two = a.bound(NormOrder::two)) j["theorem2_bound"] = two->theorem2_bound;
    j["y_samples"] = a.y_samples.size();
    j["notes"] = a.notes;
    return j;
}

}  // namespace nbspec
