#include "discern/json_io.hpp"

#include <cstdio>

#include "discern/errors.hpp"

namespace discern::io {
namespace {

const json& require(const json& j, const char* field) {
    if (!j.contains(field))
        throw InvalidInput(std::string("missing field: ") + field);
    return j.at(field);
}

std::vector<double> doubles(const json& j, const char* field) {
    const json& a = require(j, field);
    if (!a.is_array()) throw InvalidInput(std::string(field) + " must be an array");
    std::vector<double> v;
    for (const auto& x : a) {
        if (!x.is_number()) throw InvalidInput(std::string(field) + " must hold numbers");
        v.push_back(x.get<double>());
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json shape_to_json(const Shape& s) {
    json j;
    if (const auto* c = std::get_if<Cuboid>(&s)) {
        j["cuboid"] = {{"lo", c->lo}, {"hi", c->hi}};
    } else if (const auto* c = std::get_if<Cube>(&s)) {
        j["cube"] = {{"anchor", c->anchor}, {"edge", c->edge}};
    } else {
        const auto& o = std::get<OrbitShape>(s);
        j["orbit"] = {{"body", to_string(o.body.kind)},
                      {"scale", o.transform.scale},
                      {"shift", o.transform.shift}};
    }
    return j;
}

Shape shape_from_json(const json& j) {
    if (j.contains("cuboid")) {
        const json& c = j.at("cuboid");
        Cuboid box{doubles(c, "lo"), doubles(c, "hi")};
        validate(box);
        return box;
    }
    if (j.contains("cube")) {
        const json& c = j.at("cube");
        Cube cube{doubles(c, "anchor"), require(c, "edge").get<double>()};
        validate(cube);
        return cube;
    }
    if (j.contains("orbit")) {
        const json& c = j.at("orbit");
        OrbitShape o;
        o.transform.scale = doubles(c, "scale");
        o.transform.shift = doubles(c, "shift");
        validate(o.transform);
        o.body = {body_from_string(require(c, "body").get<std::string>()),
                  o.transform.dim()};
        return o;
    }
    throw InvalidInput("shape object must contain cuboid, cube, or orbit");
}

json density_to_json(const PolyDensity& f) {
    json terms = json::array();
    for (const auto& t : f.terms)
        terms.push_back({{"coeff", t.coeff}, {"exps", t.exps}});
    return {{"dim", f.dim}, {"terms", terms}};
}

PolyDensity density_from_json(const json& j) {
    PolyDensity f;
    f.dim = require(j, "dim").get<int>();
    for (const auto& t : require(j, "terms")) {
        MonomialTerm term;
        term.coeff = require(t, "coeff").get<double>();
        for (const auto& e : require(t, "exps")) term.exps.push_back(e.get<int>());
        f.terms.push_back(std::move(term));
    }
    validate(f);
    return f;
}

json family_to_json(const MeasureFamily& fam) {
    json dens = json::array();
    for (const auto& f : fam.densities) dens.push_back(density_to_json(f));
    json domain;
    switch (fam.domain.kind) {
        case DomainKind::FullSpace: domain = "full"; break;
        case DomainKind::UnitCube: domain = "unit-cube"; break;
        case DomainKind::PulledBack:
            domain = {{"pulled-back", {{"steepness", fam.domain.steepness}}}};
            break;
    }
    return {{"densities", dens}, {"domain", domain}};
}

MeasureFamily family_from_json(const json& j) {
    MeasureFamily fam;
    for (const auto& f : require(j, "densities")) fam.densities.push_back(density_from_json(f));
    const json& dom = require(j, "domain");
    if (dom.is_string()) {
        const std::string s = dom.get<std::string>();
        if (s == "full") fam.domain.kind = DomainKind::FullSpace;
        else if (s == "unit-cube") fam.domain.kind = DomainKind::UnitCube;
        else throw InvalidInput("unknown domain: " + s);
    } else if (dom.is_object() && dom.contains("pulled-back")) {
        fam.domain.kind = DomainKind::PulledBack;
        fam.domain.steepness = require(dom.at("pulled-back"), "steepness").get<double>();
    } else {
        throw InvalidInput("domain must be \"full\", \"unit-cube\", or {\"pulled-back\": ...}");
    }
    validate(fam);
    return fam;
}

SearchProblem problem_from_json(const json& j) {
    SearchProblem p;
    p.family = family_from_string(require(j, "family").get<std::string>());
    if (j.contains("body")) p.body = body_from_string(j.at("body").get<std::string>());
    p.measures = family_from_json(require(j, "measures"));
    p.n_shapes = require(j, "n_shapes").get<int>();
    if (j.contains("require_disjoint")) p.require_disjoint = j.at("require_disjoint").get<bool>();
    if (j.contains("equal_size")) p.equal_size = j.at("equal_size").get<bool>();
    return p;
}

json problem_to_json(const SearchProblem& p) {
    json j{{"family", to_string(p.family)},
           {"measures", family_to_json(p.measures)},
           {"n_shapes", p.n_shapes},
           {"require_disjoint", p.require_disjoint},
           {"equal_size", p.equal_size}};
    if (p.family == Family::Orbit) j["body"] = to_string(p.body);
    return j;
}

SearchConfig search_config_from_json(const json& j, SearchConfig base) {
    SearchConfig c = base;
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("max_restarts")) c.max_restarts = j.at("max_restarts").get<int>();
    if (j.contains("tol_residual")) c.tol_residual = j.at("tol_residual").get<double>();
    if (j.contains("min_separation")) c.min_separation = j.at("min_separation").get<double>();
    if (j.contains("max_iterations")) c.max_iterations = j.at("max_iterations").get<int>();
    if (j.contains("start_mid")) {
        const auto v = doubles(j, "start_mid");
        if (v.size() != 2) throw InvalidInput("start_mid must be [lo, hi]");
        c.start_mid_lo = v[0];
        c.start_mid_hi = v[1];
    }
    if (j.contains("start_logw")) {
        const auto v = doubles(j, "start_logw");
        if (v.size() != 2) throw InvalidInput("start_logw must be [lo, hi]");
        c.start_logw_lo = v[0];
        c.start_logw_hi = v[1];
    }
    return c;
}

json search_config_to_json(const SearchConfig& c) {
    return {{"seed", c.seed},
            {"max_restarts", c.max_restarts},
            {"tol_residual", c.tol_residual},
            {"min_separation", c.min_separation},
            {"start_mid", {c.start_mid_lo, c.start_mid_hi}},
            {"start_logw", {c.start_logw_lo, c.start_logw_hi}},
            {"max_iterations", c.max_iterations}};
}

json search_result_to_json(const SearchResult& r, std::uint64_t seed) {
    json shapes = json::array();
    for (const auto& p : r.shapes) shapes.push_back(shape_to_json(shape_from_params(p)));
    json j{{"schema", kSchemaVersion},
           {"status", r.status == SearchStatus::Found ? "found" : "not-found"},
           {"shapes", shapes},
           {"residual_inf", r.residual_inf},
           {"min_pairwise_separation", r.min_pairwise_separation},
           {"restarts_used", r.restarts_used},
           {"seed", seed}};
    if (r.min_disjoint_margin.has_value()) j["min_disjoint_margin"] = *r.min_disjoint_margin;
    return j;
}

json certify_report_to_json(const DiscernibilityReport& rep) {
    return {{"schema", kSchemaVersion},
            {"kind", to_string(rep.kind)},
            {"d", rep.d},
            {"pairs", rep.pairs_tested},
            {"min_gap", rep.min_gap},
            {"min_ratio", rep.min_gap_over_separation},
            {"worst_pair",
             {shape_to_json(shape_from_params(rep.worst_pair.first)),
              shape_to_json(shape_from_params(rep.worst_pair.second))}},
            {"seed", rep.seed}};
}

json reconstruction_to_json(const ReconstructionResult& r) {
    json j{{"schema", kSchemaVersion},
           {"status", to_string(r.status)},
           {"residual", r.residual}};
    if (r.shape.has_value()) {
        if (const auto* t = std::get_if<AxisTransform>(&*r.shape))
            j["shape"] = {{"transform", {{"scale", t->scale}, {"shift", t->shift}}}};
        else if (const auto* c = std::get_if<Cuboid>(&*r.shape))
            j["shape"] = shape_to_json(*c);
        else
            j["shape"] = shape_to_json(std::get<Cube>(*r.shape));
    }
    return j;
}

std::string certify_report_to_csv(const DiscernibilityReport& rep) {
    std::string out = "separation,gap\n";
    for (const auto& [sep, gap] : rep.samples)
        out += format_double(sep) + "," + format_double(gap) + "\n";
    return out;
}

std::string batch_to_csv(const std::vector<BatchRow>& rows) {
    std::string out = "k,d,status,restarts_used,residual\n";
    for (const auto& r : rows)
        out += std::to_string(r.k) + "," + std::to_string(r.d) + "," + r.status + "," +
               std::to_string(r.restarts_used) + "," + format_double(r.residual) + "\n";
    return out;
}

json batch_to_json(const std::vector<BatchRow>& rows, std::uint64_t seed) {
    json runs = json::array();
    for (const auto& r : rows)
        runs.push_back({{"k", r.k},
                        {"d", r.d},
                        {"status", r.status},
                        {"restarts_used", r.restarts_used},
                        {"residual", r.residual}});
    return {{"schema", kSchemaVersion}, {"seed", seed}, {"runs", runs}};
}

}  // namespace discern::io
