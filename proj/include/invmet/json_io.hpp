#pragma once

#include <json.hpp>

#include "invmet/certificates.hpp"
#include "invmet/disks.hpp"
#include "invmet/ktilde.hpp"
#include "invmet/metrics.hpp"

// JSON surfaces for the library types. Infinite bounds serialize as null
// (strict JSON has no inf literal) and parse back to infinity.

namespace invmet {

using nlohmann::json;

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx cplx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw configuration_error("expected [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const ComplexVector& v) {
    json a = json::array();
    for (std::size_t i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
    return a;
}

inline ComplexVector cvec_from_json(const json& j) {
    std::vector<cplx> comps;
    for (const auto& e : j) comps.push_back(cplx_from_json(e));
    return ComplexVector(std::move(comps));
}

inline json bound_to_json(double v) {
    if (std::isinf(v)) return nullptr;
    return v;
}

inline double bound_from_json(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::infinity();
    return j.get<double>();
}

inline json to_json(const AnalyticDisk& d) {
    json coeffs = json::array();
    for (const auto& cs : d.coeffs) {
        json one = json::array();
        for (cplx a : cs) one.push_back(to_json(a));
        coeffs.push_back(one);
    }
    return {{"center", to_json(d.center)}, {"coeffs", coeffs}, {"radius", d.radius}};
}

inline AnalyticDisk disk_from_json(const json& j) {
    AnalyticDisk d;
    d.center = cvec_from_json(j.at("center"));
    for (const auto& cs : j.at("coeffs")) {
        std::vector<cplx> one;
        for (const auto& a : cs) one.push_back(cplx_from_json(a));
        d.coeffs.push_back(std::move(one));
    }
    d.radius = j.at("radius").get<double>();
    validate_disk(d);
    return d;
}

inline json to_json(const ContainmentCertificate& c) {
    return {{"valid", c.valid},
            {"margin", c.margin},
            {"grid", json::array({c.grid.first, c.grid.second})},
            {"slack", c.slack},
            {"cells_evaluated", c.cells_evaluated},
            {"diagnostic", c.diagnostic}};
}

inline json to_json(const KobConfig& c) {
    return {{"degree", c.degree},
            {"starts", c.starts},
            {"iterations", c.iterations},
            {"seed", c.seed},
            {"margin", c.margin.value},
            {"cert_grid", json::array({c.cert_radial, c.cert_angular})}};
}

inline json to_json(const MetricEstimate& e) {
    json witness = nullptr;
    if (e.upper_witness) {
        witness = {{"disk", to_json(*e.upper_witness)}};
        if (e.witness_certificate) witness["certificate"] = to_json(*e.witness_certificate);
    }
    return {{"kind", to_string(e.kind)},
            {"lower", e.lower},
            {"upper", bound_to_json(e.upper)},
            {"witness_ref", witness},
            {"lower_witness", e.lower_witness},
            {"diagnostic", e.diagnostic},
            {"wallclock_ms", e.wallclock_ms}};
}

inline json to_json(const IndicatrixSample& s) {
    json entries = json::array();
    for (const auto& e : s.entries)
        entries.push_back({{"direction", to_json(e.direction)}, {"value", e.value}});
    return {{"base", to_json(s.base)},
            {"domain", s.domain},
            {"phase_count", s.phase_count},
            {"config", to_json(s.config)},
            {"entries", entries}};
}

inline json to_json(const HartogsFigure& f) {
    return {{"m", f.m},
            {"k", f.k},
            {"delta", f.delta},
            {"c", f.c},
            {"c1", f.c1},
            {"radii", json::array({f.radii[0], f.radii[1], f.radii[2]})},
            {"grid_disks", f.grid_disks},
            {"worst_slack", f.worst_slack}};
}

inline json to_json(const LemkobResult& r, double delta, cplx alpha, cplx beta) {
    return {{"lemma", "lemkob"},
            {"inputs", {{"delta", delta}, {"alpha", to_json(alpha)}, {"beta", to_json(beta)}}},
            {"regime", to_string(r.regime)},
            {"lower", r.lower},
            {"upper", bound_to_json(r.upper)},
            {"asymptotic_only", r.asymptotic_only},
            {"constants", {{"c", bound_to_json(r.c)}}}};
}

} // namespace invmet
