#include "dforge/absorber.hpp"

#include "dforge/error.hpp"
#include "dforge/exact_cover.hpp"
#include "dforge/nibble.hpp"
#include "dforge/parallel.hpp"
#include "dforge/rational.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <set>

namespace dforge {
namespace {

int x_edges_in(const Clique& c, const Graph& x) {
    int count = 0;
    for (const Edge& e : c.edges())
        if (e.v < x.num_vertices() && x.has_edge(e)) ++count;
    return count;
}

bool contains_clique(const Packing& sorted, const Clique& c) {
    return std::binary_search(sorted.begin(), sorted.end(), c);
}

std::string describe(const EdgeKey& key) {
    if (key.empty()) return "{}";
    std::string s = "{";
    for (std::size_t i = 0; i < key.size(); ++i) s += (i ? " " : "") + to_string(key[i]);
    return s + "}";
}

// Isolated vertices of X used by A must be the smallest isolated ones, which
// removes relabelings of the same candidate.
bool prefix_rule(const std::vector<Clique>& cliques, const std::vector<char>& isolated, int n) {
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    for (const Clique& c : cliques)
        for (Vertex v : c.vertices()) used[static_cast<std::size_t>(v)] = 1;
    bool gap = false;
    for (int v = 0; v < n; ++v) {
        if (!isolated[static_cast<std::size_t>(v)]) continue;
        if (!used[static_cast<std::size_t>(v)]) gap = true;
        else if (gap) return false;
    }
    return true;
}

}  // namespace

EdgeKey key_of(const Graph& g) {
    return g.edges();
}

Graph graph_of(int n, const EdgeKey& key) {
    return Graph(n, key);
}

std::vector<Graph> divisible_subgraphs(const Graph& x, int q, std::size_t cap) {
    if (q < 3) throw InvalidParameter("divisible_subgraphs: q must be at least 3");
    const std::size_t m = x.num_edges();
    if (m > cap)
        throw ResourceError("divisible_subgraphs: X has " + std::to_string(m) + " edges, over the cap of " +
                            std::to_string(cap));
    const auto& edges = x.edges();
    const std::int64_t clique_edges = binomial(q, 2);
    std::vector<Graph> out;
    std::vector<int> degree(static_cast<std::size_t>(x.num_vertices()));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        if (static_cast<std::int64_t>(std::popcount(mask)) % clique_edges != 0) continue;
        std::fill(degree.begin(), degree.end(), 0);
        std::vector<Edge> chosen;
        for (std::size_t i = 0; i < m; ++i) {
            if (!(mask >> i & 1)) continue;
            chosen.push_back(edges[i]);
            ++degree[static_cast<std::size_t>(edges[i].u)];
            ++degree[static_cast<std::size_t>(edges[i].v)];
        }
        if (std::all_of(degree.begin(), degree.end(), [q](int d) { return d % (q - 1) == 0; }))
            out.emplace_back(x.num_vertices(), std::move(chosen));
    }
    return out;
}

OmniAbsorber brute_force_absorber(const Graph& x_in, int q, int host_n, AbsorberSearchOptions options) {
    if (q < 3) throw InvalidParameter("brute_force_absorber: q must be at least 3");
    if (host_n < x_in.num_vertices())
        throw InvalidParameter("brute_force_absorber: host_n is smaller than X's vertex count");
    const Graph x = x_in.with_vertex_count(host_n);
    const std::vector<Graph> divisible = divisible_subgraphs(x, q, options.divisible_cap);

    OmniAbsorber out;
    out.q = q;
    out.n = host_n;
    out.X = x;
    out.A = Graph(host_n);
    out.qmap[EdgeKey{}] = {};
    if (divisible.size() <= 1) return out;

    const std::vector<Clique> pool = list_cliques(Graph::complete(host_n).minus(x), q);
    std::vector<char> isolated(static_cast<std::size_t>(host_n));
    for (int v = 0; v < host_n; ++v) isolated[static_cast<std::size_t>(v)] = x.degree(v) == 0;
    const std::size_t per_clique = static_cast<std::size_t>(binomial(q, 2));

    // Returns the qmap when candidate A works, empty otherwise.
    auto test = [&](const std::vector<Clique>& cliques) -> std::optional<std::map<EdgeKey, Packing>> {
        const Graph a = union_of_cliques(host_n, cliques);
        for (std::size_t i = 1; i < divisible.size(); ++i)
            for (const Edge& e : divisible[i].edges())
                if (cliques_through(a, e, q) == 0) return std::nullopt;
        std::map<EdgeKey, Packing> qmap;
        qmap[EdgeKey{}] = canonical(cliques);
        for (std::size_t i = 1; i < divisible.size(); ++i) {
            const Graph& l = divisible[i];
            CoverInstance inst;
            inst.universe = l.united(a);
            inst.q = q;
            for (Clique& c : list_cliques(inst.universe, q))
                if (x_edges_in(c, l) <= 1) inst.candidates.push_back(std::move(c));
            SolveResult r = find_decomposition(inst);
            if (r.status != SolveStatus::Solved) return std::nullopt;
            qmap[key_of(l)] = std::move(r.packing);
        }
        return qmap;
    };

    std::uint64_t examined = 0;
    for (std::size_t k = 1; k * per_clique <= options.max_edges; ++k) {
        std::map<EdgeKey, std::vector<Clique>> candidates;  // ordered lexicographically by edge list
        std::vector<Clique> chosen;
        std::set<Edge> used;
        std::function<void(std::size_t)> rec = [&](std::size_t start) {
            if (chosen.size() == k) {
                if (++examined > options.candidate_cap)
                    throw NotFound("brute_force_absorber: candidate cap " + std::to_string(options.candidate_cap) +
                                   " reached");
                if (!prefix_rule(chosen, isolated, host_n)) return;
                EdgeKey key(used.begin(), used.end());
                candidates.try_emplace(std::move(key), chosen);
                return;
            }
            for (std::size_t i = start; i < pool.size(); ++i) {
                const auto edges = pool[i].edges();
                if (std::any_of(edges.begin(), edges.end(), [&](const Edge& e) { return used.count(e) > 0; }))
                    continue;
                chosen.push_back(pool[i]);
                used.insert(edges.begin(), edges.end());
                rec(i + 1);
                for (const Edge& e : edges) used.erase(e);
                chosen.pop_back();
            }
        };
        rec(0);
        for (const auto& [key, cliques] : candidates) {
            if (auto qmap = test(cliques)) {
                out.A = Graph(host_n, key);
                out.qmap = std::move(*qmap);
                Packing family;
                for (const auto& [l, cl] : out.qmap) family.insert(family.end(), cl.begin(), cl.end());
                out.family = canonical(std::move(family));
                return out;
            }
        }
    }
    throw NotFound("brute_force_absorber: no absorber with at most " + std::to_string(options.max_edges) +
                   " edges inside K_" + std::to_string(host_n));
}

OmniAbsorber boost_absorber(const OmniAbsorber& base, const std::map<Clique, RootedBooster>& boosters) {
    if (base.family.empty() || boosters.empty()) return base;
    int n = base.n;
    for (const auto& [h, rb] : boosters) n = std::max(n, rb.graph.num_vertices());

    std::map<Edge, std::string> owner;
    for (const Edge& e : base.X.edges()) owner[e] = "X";
    for (const Edge& e : base.A.edges()) owner[e] = "A";
    std::vector<Edge> a_edges = base.A.edges();
    for (const auto& [h, rb] : boosters) {
        if (!contains_clique(base.family, h))
            throw PreconditionViolation("boost_absorber: booster key " + to_string(h) + " is not a family clique");
        if (rb.root != h)
            throw PreconditionViolation("boost_absorber: booster at " + to_string(h) + " is rooted at " +
                                        to_string(rb.root));
        if (rb.q != base.q) throw PreconditionViolation("boost_absorber: booster clique size differs from q");
        const std::string name = "booster at " + to_string(h);
        for (const Edge& e : rb.graph.edges()) {
            auto [it, fresh] = owner.emplace(e, name);
            if (!fresh)
                throw PreconditionViolation("boost_absorber: edge " + to_string(e) + " of the " + name +
                                            " is already used by " + it->second);
            a_edges.push_back(e);
        }
    }

    OmniAbsorber out;
    out.q = base.q;
    out.n = n;
    out.X = base.X.with_vertex_count(n);
    out.A = Graph(n, a_edges);
    out.roots = base.roots;
    Packing family;
    for (const Clique& h : base.family) {
        auto it = boosters.find(h);
        if (it == boosters.end()) {
            family.push_back(h);
            continue;
        }
        out.roots.push_back(h);
        family.insert(family.end(), it->second.on_decomp.begin(), it->second.on_decomp.end());
        family.insert(family.end(), it->second.off_decomp.begin(), it->second.off_decomp.end());
    }
    out.family = canonical(std::move(family));
    out.roots = canonical(std::move(out.roots));

    for (const auto& [key, q_of_l] : base.qmap) {
        Packing image;
        for (const Clique& h : base.family) {
            const bool selected = contains_clique(q_of_l, h);
            auto it = boosters.find(h);
            if (it == boosters.end()) {
                if (selected) image.push_back(h);
                continue;
            }
            const Packing& part = selected ? it->second.on_decomp : it->second.off_decomp;
            image.insert(image.end(), part.begin(), part.end());
        }
        image = canonical(std::move(image));
        for (const Clique& r : out.roots)
            if (contains_clique(image, r))
                throw Error("boost_absorber: root clique " + to_string(r) + " entered the map of L = " +
                            describe(key));
        out.qmap[key] = std::move(image);
    }
    return out;
}

EmbeddedBoosters embed_boosters(const OmniAbsorber& base, const RootedBooster& booster, int host_n, int C,
                                std::uint64_t seed, EmbeddingOptions options) {
    if (booster.q != base.q) throw InvalidParameter("embed_boosters: booster clique size differs from q");
    if (host_n < base.n) throw InvalidParameter("embed_boosters: host_n is smaller than the absorber");
    EmbeddedBoosters out;
    out.host_n = host_n;
    EmbeddingProblem problem;
    problem.host = Graph::complete(host_n).minus(base.X.united(base.A).with_vertex_count(host_n));
    problem.roots = base.family;
    problem.b = booster.extension_size();
    problem.C = C;
    if (problem.roots.empty()) return out;
    out.embedding = sample_embedding(problem, seed, options);

    const auto& broot = booster.root.vertices();
    std::vector<Vertex> others;
    for (Vertex v = 0; v < booster.graph.num_vertices(); ++v)
        if (!booster.root.contains(v)) others.push_back(v);
    for (std::size_t i = 0; i < problem.roots.size(); ++i) {
        const PartialClique& part = out.embedding.parts[i];
        std::vector<Vertex> map(static_cast<std::size_t>(booster.graph.num_vertices()), -1);
        for (std::size_t j = 0; j < broot.size(); ++j)
            map[static_cast<std::size_t>(broot[j])] = part.root.vertices()[j];
        for (std::size_t j = 0; j < others.size(); ++j) map[static_cast<std::size_t>(others[j])] = part.extension[j];
        out.boosters.emplace(part.root, relabel(booster, map, host_n));
    }
    return out;
}

bool AbsorberReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* AbsorberReport::find(const std::string& name) const {
    for (const Check& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

AbsorberReport verify_omni_absorber(const OmniAbsorber& oa, std::size_t divisible_cap) {
    AbsorberReport report;
    const int n = std::max({oa.n, oa.X.num_vertices(), oa.A.num_vertices()});
    const Graph x = oa.X.with_vertex_count(n);
    const Graph a = oa.A.with_vertex_count(n);
    auto add = [&](std::string name, bool passed, std::string detail = {}) {
        report.checks.push_back({std::move(name), passed, std::move(detail)});
    };

    std::string shared;
    for (const Edge& e : x.edges())
        if (a.has_edge(e)) {
            shared = "shared edge " + to_string(e);
            break;
        }
    add("X and A edge-disjoint", shared.empty(), shared);

    std::string bad_refine, bad_inside;
    std::map<Edge, int> load;
    for (const Clique& c : oa.family) {
        if (c.size() != oa.q && bad_inside.empty()) bad_inside = to_string(c) + " is not a q-clique";
        if (x_edges_in(c, x) > 1 && bad_refine.empty())
            bad_refine = to_string(c) + " uses " + std::to_string(x_edges_in(c, x)) + " X-edges";
        for (const Edge& e : c.edges()) {
            ++load[e];
            const bool inside = e.v < n && (x.has_edge(e) || a.has_edge(e));
            if (!inside && bad_inside.empty()) bad_inside = to_string(c) + " uses " + to_string(e) + " outside X + A";
        }
    }
    add("family uses at most one X-edge", bad_refine.empty(), bad_refine);
    add("family inside X + A", bad_inside.empty(), bad_inside);
    for (const auto& [e, c] : load) report.c_observed = std::max(report.c_observed, c);
    report.max_degree_a = a.max_degree();

    std::vector<Graph> divisible;
    std::string enum_failure;
    try {
        divisible = divisible_subgraphs(x, oa.q, divisible_cap);
    } catch (const ResourceError& e) {
        enum_failure = e.what();
    }
    report.divisible_count = divisible.size();

    std::vector<std::string> decomp_fail(divisible.size()), member_fail(divisible.size());
    parallel_for(divisible.size(), [&](std::size_t i) {
        const EdgeKey key = key_of(divisible[i]);
        auto it = oa.qmap.find(key);
        if (it == oa.qmap.end()) {
            decomp_fail[i] = "no entry for L = " + describe(key);
            return;
        }
        const Verdict v = verify_decomposition(divisible[i].united(a), it->second, oa.q);
        if (!v) decomp_fail[i] = "L = " + describe(key) + ": " + v.message;
        for (const Clique& c : it->second)
            if (!contains_clique(oa.family, c)) {
                member_fail[i] = "L = " + describe(key) + ": " + to_string(c) + " is not in the family";
                break;
            }
    });
    auto first = [](const std::vector<std::string>& v, const std::string& fallback) {
        for (const auto& s : v)
            if (!s.empty()) return s;
        return fallback;
    };
    const std::string df = first(decomp_fail, enum_failure);
    add("qmap decomposes L + A", df.empty(), df);
    const std::string mf = first(member_fail, "");
    add("qmap inside family", mf.empty(), mf);

    std::string root_hit;
    const Packing roots = canonical(oa.roots);
    for (const auto& [key, q_of_l] : oa.qmap)
        for (const Clique& c : q_of_l)
            if (root_hit.empty() && contains_clique(roots, c))
                root_hit = "root " + to_string(c) + " in the map of L = " + describe(key);
    add("no root clique in qmap", root_hit.empty(), root_hit);
    return report;
}

}  // namespace dforge
