#include "dforge/serialize.hpp"

#include "dforge/error.hpp"

#include <fstream>
#include <set>

namespace dforge {
namespace {

const std::set<std::string> kConfigKeys = {
    "n", "q", "beta", "reservoir_p", "eps", "booster", "embed_C", "embed_b", "regularize", "regularize_tol",
    "nibble_D", "nibble", "reservoir_retries", "regularize_retries", "nibble_retries", "stage_retries",
    "absorber_max_edges", "reserve_edge_cap", "seed"};

const std::set<std::string> kNibbleKeys = {"gamma", "alpha", "bite", "max_rounds", "reserve_policy", "rate_floor",
                                           "upper_exponent", "lower_exponent", "resample_cap", "thresholds"};

const std::set<std::string> kThresholdKeys = {"codegree", "b_degree", "g1_degree", "a_degree_g1", "a_degree_g2"};

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& where) {
    if (!j.is_object()) throw InvalidParameter(where + ": expected an object");
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw InvalidParameter(where + ": unknown key '" + key + "'");
}

template <typename T>
void read(const Json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename T>
void read_optional(const Json& j, const char* key, std::optional<T>& out) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) out.reset();
    else out = j.at(key).get<T>();
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

Json checks_json(const std::vector<Check>& checks) {
    Json out = Json::array();
    for (const Check& c : checks) out.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return out;
}

Json density_json(const Density& d) {
    return d.infinite ? Json("inf") : Json(to_string(d.value));
}

}  // namespace

Json clique_json(const Clique& c) {
    return c.vertices();
}

Json packing_json(const Packing& p) {
    Json out = Json::array();
    for (const Clique& c : p) out.push_back(clique_json(c));
    return out;
}

Json edges_json(const std::vector<Edge>& edges) {
    Json out = Json::array();
    for (const Edge& e : edges) out.push_back({e.u, e.v});
    return out;
}

Clique clique_from_json(const Json& j) {
    return Clique(j.get<std::vector<Vertex>>());
}

Packing packing_from_json(const Json& j) {
    Packing out;
    for (const Json& c : j) out.push_back(clique_from_json(c));
    return canonical(std::move(out));
}

std::vector<Edge> edges_from_json(const Json& j) {
    std::vector<Edge> out;
    for (const Json& e : j) {
        if (!e.is_array() || e.size() != 2) throw InvalidParameter("edge entries must be pairs");
        out.emplace_back(e[0].get<Vertex>(), e[1].get<Vertex>());
    }
    return out;
}

Json booster_json(const RootedBooster& rb) {
    return {{"q", rb.q},
            {"vertices", rb.graph.num_vertices()},
            {"edges", edges_json(rb.graph.edges())},
            {"on_decomp", packing_json(rb.on_decomp)},
            {"off_decomp", packing_json(rb.off_decomp)},
            {"root", clique_json(rb.root)}};
}

RootedBooster booster_from_json(const Json& j) {
    RootedBooster rb;
    rb.q = j.at("q").get<int>();
    rb.graph = Graph(j.at("vertices").get<int>(), edges_from_json(j.at("edges")));
    rb.on_decomp = packing_from_json(j.at("on_decomp"));
    rb.off_decomp = packing_from_json(j.at("off_decomp"));
    rb.root = clique_from_json(j.at("root"));
    return rb;
}

Json absorber_json(const OmniAbsorber& oa) {
    Json qmap = Json::array();
    for (const auto& [key, cliques] : oa.qmap) qmap.push_back({{"L", edges_json(key)}, {"cliques", packing_json(cliques)}});
    return {{"q", oa.q},
            {"n", oa.n},
            {"X_edges", edges_json(oa.X.edges())},
            {"A_edges", edges_json(oa.A.edges())},
            {"family", packing_json(oa.family)},
            {"qmap", qmap},
            {"roots", packing_json(oa.roots)}};
}

OmniAbsorber absorber_from_json(const Json& j) {
    OmniAbsorber oa;
    oa.q = j.at("q").get<int>();
    oa.n = j.at("n").get<int>();
    oa.X = Graph(oa.n, edges_from_json(j.at("X_edges")));
    oa.A = Graph(oa.n, edges_from_json(j.at("A_edges")));
    oa.family = packing_from_json(j.at("family"));
    for (const Json& entry : j.at("qmap")) {
        EdgeKey key = edges_from_json(entry.at("L"));
        std::sort(key.begin(), key.end());
        oa.qmap[key] = packing_from_json(entry.at("cliques"));
    }
    if (j.contains("roots")) oa.roots = packing_from_json(j.at("roots"));
    return oa;
}

Json booster_report_json(const BoosterReport& r) {
    return {{"ok", r.ok()},
            {"checks", checks_json(r.checks)},
            {"on_density", density_json(r.on_density)},
            {"off_density", density_json(r.off_density)}};
}

Json absorber_report_json(const AbsorberReport& r) {
    return {{"ok", r.ok()},
            {"checks", checks_json(r.checks)},
            {"C_observed", r.c_observed},
            {"max_degree_A", r.max_degree_a},
            {"divisible_subgraphs", r.divisible_count}};
}

Json spread_report_json(const SpreadReport& r) {
    Json sizes = Json::array();
    for (const SizeWorst& w : r.per_size) {
        Json entry = {{"size", w.size},         {"probability", w.probability}, {"ratio", w.ratio},
                      {"upper", w.upper},       {"tested", w.tested},           {"witness", packing_json(w.witness)}};
        if (r.mode == SpreadMode::Exact) entry["exact_probability"] = to_string(w.exact_probability);
        sizes.push_back(entry);
    }
    Json out = {{"mode", to_string(r.mode)},
                {"per_size", sizes},
                {"sigma_singleton", r.sigma_singleton},
                {"sigma_singleton_upper", r.sigma_singleton_upper},
                {"trials", r.trials}};
    if (r.mode == SpreadMode::Exact) {
        out["sigma_singleton_exact"] = to_string(r.sigma_singleton_exact);
        out["linearity_holds"] = r.linearity_holds;
        out["monotone_holds"] = r.monotone_holds;
        out["expected_size"] = to_string(r.expected_size);
    } else {
        Json probes = Json::array();
        for (const ProbeEstimate& p : r.probes)
            probes.push_back({{"probe", packing_json(p.probe)},
                              {"hits", p.hits},
                              {"estimate", p.estimate},
                              {"ci", {p.ci.lo, p.ci.hi}}});
        out["probes"] = probes;
    }
    return out;
}

Json nibble_json(const NibbleResult& r) {
    Json edges = Json::array();
    for (const MatchedEdge& m : r.edges) edges.push_back({m.part, m.index});
    return {{"status", r.a_perfect ? "a-perfect" : "failed"},
            {"covered_A", r.a_perfect},
            {"uncovered_A", r.uncovered_a},
            {"rounds", r.rounds},
            {"leave_fraction", r.leave_fraction},
            {"reserve_used", r.reserve_used},
            {"edges", edges}};
}

Json embedding_json(const EmbeddingSpreadReport& r) {
    return {{"resamples", r.resamples},
            {"max_degree", r.max_degree},
            {"disjoint", r.all_disjoint},
            {"trials", r.trials},
            {"hits", r.hits},
            {"spread_estimate", r.estimate},
            {"ci", {r.ci.lo, r.ci.hi}},
            {"bound", r.bound}};
}

Json config_json(const PipelineConfig& c) {
    const NibbleParams& p = c.nibble;
    Json thresholds = {{"codegree", optional_json(p.thresholds.codegree)},
                       {"b_degree", optional_json(p.thresholds.b_degree)},
                       {"g1_degree", optional_json(p.thresholds.g1_degree)},
                       {"a_degree_g1", optional_json(p.thresholds.a_degree_g1)},
                       {"a_degree_g2", optional_json(p.thresholds.a_degree_g2)}};
    Json nibble = {{"gamma", p.gamma},
                   {"alpha", p.alpha},
                   {"bite", p.bite},
                   {"max_rounds", p.max_rounds},
                   {"reserve_policy", to_string(p.reserve_policy)},
                   {"rate_floor", p.rate_floor},
                   {"upper_exponent", p.upper_exponent},
                   {"lower_exponent", p.lower_exponent},
                   {"resample_cap", p.resample_cap},
                   {"thresholds", thresholds}};
    return {{"n", c.n},
            {"q", c.q},
            {"beta", c.beta},
            {"reservoir_p", optional_json(c.reservoir_p)},
            {"eps", c.eps},
            {"booster", to_string(c.booster)},
            {"embed_C", optional_json(c.embed_C)},
            {"embed_b", c.embed_b},
            {"regularize", c.regularize},
            {"regularize_tol", c.regularize_tol},
            {"nibble_D", optional_json(c.nibble_D)},
            {"nibble", nibble},
            {"reservoir_retries", c.reservoir_retries},
            {"regularize_retries", c.regularize_retries},
            {"nibble_retries", c.nibble_retries},
            {"stage_retries", c.stage_retries},
            {"absorber_max_edges", c.absorber_max_edges},
            {"reserve_edge_cap", c.reserve_edge_cap},
            {"seed", c.seed}};
}

PipelineConfig config_from_json(const Json& j, PipelineConfig c) {
    reject_unknown(j, kConfigKeys, "pipeline config");
    read(j, "n", c.n);
    read(j, "q", c.q);
    read(j, "beta", c.beta);
    read_optional(j, "reservoir_p", c.reservoir_p);
    read(j, "eps", c.eps);
    if (j.contains("booster")) c.booster = parse_booster_choice(j.at("booster").get<std::string>());
    read_optional(j, "embed_C", c.embed_C);
    read(j, "embed_b", c.embed_b);
    read(j, "regularize", c.regularize);
    read(j, "regularize_tol", c.regularize_tol);
    read_optional(j, "nibble_D", c.nibble_D);
    read(j, "reservoir_retries", c.reservoir_retries);
    read(j, "regularize_retries", c.regularize_retries);
    read(j, "nibble_retries", c.nibble_retries);
    read(j, "stage_retries", c.stage_retries);
    read(j, "absorber_max_edges", c.absorber_max_edges);
    read(j, "reserve_edge_cap", c.reserve_edge_cap);
    read(j, "seed", c.seed);
    if (j.contains("nibble")) {
        const Json& nj = j.at("nibble");
        reject_unknown(nj, kNibbleKeys, "nibble config");
        NibbleParams& p = c.nibble;
        read(nj, "gamma", p.gamma);
        read(nj, "alpha", p.alpha);
        read(nj, "bite", p.bite);
        read(nj, "max_rounds", p.max_rounds);
        if (nj.contains("reserve_policy")) p.reserve_policy = parse_reserve_policy(nj.at("reserve_policy").get<std::string>());
        read(nj, "rate_floor", p.rate_floor);
        read(nj, "upper_exponent", p.upper_exponent);
        read(nj, "lower_exponent", p.lower_exponent);
        read(nj, "resample_cap", p.resample_cap);
        if (nj.contains("thresholds")) {
            const Json& tj = nj.at("thresholds");
            reject_unknown(tj, kThresholdKeys, "nibble thresholds");
            read_optional(tj, "codegree", p.thresholds.codegree);
            read_optional(tj, "b_degree", p.thresholds.b_degree);
            read_optional(tj, "g1_degree", p.thresholds.g1_degree);
            read_optional(tj, "a_degree_g1", p.thresholds.a_degree_g1);
            read_optional(tj, "a_degree_g2", p.thresholds.a_degree_g2);
        }
    }
    return c;
}

Json pipeline_result_json(const PipelineResult& r) {
    Json log = Json::array();
    for (const StageLog& s : r.log) log.push_back({{"stage", s.stage}, {"attempt", s.attempt}, {"outcome", s.outcome}});
    const ResolvedConstants& k = r.constants;
    return {{"ok", r.ok},
            {"seed", r.seed},
            {"failed_stage", r.failed_stage},
            {"message", r.message},
            {"attempts", r.attempts},
            {"nibble_runs", r.nibble_runs},
            {"reserve_edges", r.reserve_edges},
            {"absorber_edges", r.absorber_edges},
            {"leave_edges", r.leave_edges},
            {"reserve_used", r.reserve_used},
            {"elapsed_ms", r.elapsed_ms},
            {"constants",
             {{"formula_C", k.formula_C},
              {"formula_p", k.formula_p},
              {"formula_D", k.formula_D},
              {"C", k.C},
              {"p", k.p},
              {"D", k.D}}},
            {"decomposition", packing_json(r.decomposition)},
            {"log", log}};
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NotFound("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InvalidParameter(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace dforge
