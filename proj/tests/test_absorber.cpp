#include "dforge/absorber.hpp"
#include "dforge/error.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace dforge;

namespace {

Graph triangle_reserve(int n) {
    return Graph(n, {{0, 1}, {0, 2}, {1, 2}});
}

// Divisible edge subsets by direct mask scan, as sorted edge lists.
std::set<std::vector<std::pair<int, int>>> oracle_divisible(const Graph& x, int q) {
    const auto& edges = x.edges();
    std::set<std::vector<std::pair<int, int>>> out;
    for (std::uint32_t mask = 0; mask < (1u << edges.size()); ++mask) {
        oracle::EdgeSet s;
        for (std::size_t i = 0; i < edges.size(); ++i)
            if (mask >> i & 1) s.insert({edges[i].u, edges[i].v});
        if (oracle::divisible(x.num_vertices(), s, q)) out.insert({s.begin(), s.end()});
    }
    return out;
}

std::vector<std::pair<int, int>> pairs(const Graph& g) {
    std::vector<std::pair<int, int>> out;
    for (const Edge& e : g.edges()) out.emplace_back(e.u, e.v);
    return out;
}

const OmniAbsorber& triangle_absorber() {
    static const OmniAbsorber oa = brute_force_absorber(triangle_reserve(9), 3, 9);
    return oa;
}

const EmbeddedBoosters& triangle_boosters() {
    static const EmbeddedBoosters eb = embed_boosters(triangle_absorber(), layer_boosters(3), 300, 24, 5);
    return eb;
}

bool subset_of(const Packing& part, const Packing& whole) {
    return std::all_of(part.begin(), part.end(),
                       [&](const Clique& c) { return std::binary_search(whole.begin(), whole.end(), c); });
}

}  // namespace

TEST_CASE("divisible subgraphs match a mask scan") {
    const std::vector<Graph> reserves = {
        triangle_reserve(3),
        Graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}),
        Graph(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}}),
        Graph::complete(5),
        Graph::complete(6),
    };
    for (const Graph& x : reserves) {
        const auto found = divisible_subgraphs(x, 3);
        CHECK(found.front().num_edges() == 0);
        std::set<std::vector<std::pair<int, int>>> got;
        for (const Graph& g : found) got.insert(pairs(g));
        CHECK(got.size() == found.size());
        CHECK(got == oracle_divisible(x, 3));
    }
    CHECK(divisible_subgraphs(triangle_reserve(3), 3).size() == 2);
    CHECK(divisible_subgraphs(Graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}), 3).size() == 1);
    CHECK(divisible_subgraphs(Graph(5, {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {2, 4}, {3, 4}}), 3).size() == 4);
    CHECK_THROWS_AS(divisible_subgraphs(Graph::complete(7), 3), ResourceError);
}

TEST_CASE("trivial absorbers") {
    const OmniAbsorber empty = brute_force_absorber(Graph(6), 3, 6);
    CHECK(empty.A.num_edges() == 0);
    CHECK(empty.qmap.size() == 1);
    CHECK(empty.qmap.begin()->second.empty());
    CHECK(verify_omni_absorber(empty).ok());

    const OmniAbsorber edge = brute_force_absorber(Graph(6, {{0, 1}}), 3, 6);
    CHECK(edge.A.num_edges() == 0);
    CHECK(verify_omni_absorber(edge).ok());

    const OmniAbsorber same = boost_absorber(empty, {});
    CHECK(same.A == empty.A);
    CHECK(same.family == empty.family);
    CHECK(same.qmap == empty.qmap);
}

TEST_CASE("triangle absorber on nine vertices") {
    const OmniAbsorber& oa = triangle_absorber();
    // Each X-edge needs its own triangle with two A-edges; those six edges form
    // a 6-cycle, which has no triangle decomposition, so L = 0 forces at least
    // three more edges. Nine is therefore the minimum.
    CHECK(oa.A.num_edges() == 9);
    CHECK(oa.A.num_edges() <= 15);
    CHECK(oa.qmap.size() == 2);
    const AbsorberReport r = verify_omni_absorber(oa);
    for (const Check& c : r.checks) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
    CHECK(r.divisible_count == 2);
    CHECK(r.c_observed >= 1);

    // Independent recount: every divisible L has at least one decomposition of
    // L + A by cliques of K_9 with at most one X-edge.
    std::vector<std::vector<int>> allowed;
    for (const auto& c : oracle::cliques_by_mask(9, oracle::complete_edges(9), 3)) {
        int x_edges = 0;
        for (auto p : oracle::pairs_of(c)) x_edges += oa.X.has_edge(p.first, p.second);
        if (x_edges <= 1) allowed.push_back(c);
    }
    for (const auto& [key, cliques] : oa.qmap) {
        oracle::EdgeSet target;
        for (const Edge& e : key) target.insert({e.u, e.v});
        for (const Edge& e : oa.A.edges()) target.insert({e.u, e.v});
        CHECK(oracle::count_decompositions(target, allowed) > 0);
    }
}

TEST_CASE("verify_omni_absorber reports broken absorbers") {
    OmniAbsorber missing = triangle_absorber();
    missing.qmap.rbegin()->second.pop_back();
    const AbsorberReport r1 = verify_omni_absorber(missing);
    CHECK_FALSE(r1.find("qmap decomposes L + A")->passed);
    CHECK(r1.find("qmap decomposes L + A")->detail.find('{') != std::string::npos);

    OmniAbsorber greedy = triangle_absorber();
    greedy.family.push_back({0, 1, 2});
    greedy.family = canonical(greedy.family);
    CHECK_FALSE(verify_omni_absorber(greedy).find("family uses at most one X-edge")->passed);

    OmniAbsorber overlap = triangle_absorber();
    overlap.A = overlap.A.united(Graph(9, {{0, 1}}));
    CHECK_FALSE(verify_omni_absorber(overlap).find("X and A edge-disjoint")->passed);
}

TEST_CASE("boosted triangle absorber") {
    const OmniAbsorber& base = triangle_absorber();
    const EmbeddedBoosters& eb = triangle_boosters();
    REQUIRE(eb.boosters.size() == base.family.size());
    const OmniAbsorber boosted = boost_absorber(base, eb.boosters);
    const AbsorberReport r = verify_omni_absorber(boosted);
    for (const Check& c : r.checks) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
    CHECK(boosted.roots == base.family);
    for (const auto& [key, image] : boosted.qmap)
        for (const Clique& h : base.family) CHECK_FALSE(std::binary_search(image.begin(), image.end(), h));

    // Boosters at cliques in exactly one of Q(0), Q(triangle) switch decomposition.
    const Packing& q_empty = base.qmap.begin()->second;
    const Packing& q_full = base.qmap.rbegin()->second;
    const Packing& b_empty = boosted.qmap.begin()->second;
    const Packing& b_full = boosted.qmap.rbegin()->second;
    for (const Clique& h : base.family) {
        const bool in_empty = std::binary_search(q_empty.begin(), q_empty.end(), h);
        const bool in_full = std::binary_search(q_full.begin(), q_full.end(), h);
        const RootedBooster& rb = eb.boosters.at(h);
        CHECK(subset_of(in_empty ? rb.on_decomp : rb.off_decomp, b_empty));
        CHECK(subset_of(in_full ? rb.on_decomp : rb.off_decomp, b_full));
        if (in_empty != in_full) CHECK_FALSE(subset_of(rb.on_decomp, b_empty) == subset_of(rb.on_decomp, b_full));
    }
}

TEST_CASE("boost_absorber rejects overlapping boosters") {
    const OmniAbsorber& base = triangle_absorber();
    std::map<Clique, RootedBooster> boosters = triangle_boosters().boosters;
    auto first = boosters.begin();
    auto second = std::next(first);
    // Move the second booster's extension onto the first one's.
    const RootedBooster& a = first->second;
    const RootedBooster& b = second->second;
    std::vector<Vertex> ext_a, ext_b;
    for (Vertex v = 0; v < a.graph.num_vertices(); ++v) {
        if (a.graph.degree(v) > 0 && !a.root.contains(v)) ext_a.push_back(v);
        if (b.graph.degree(v) > 0 && !b.root.contains(v)) ext_b.push_back(v);
    }
    REQUIRE(ext_a.size() == ext_b.size());
    std::vector<Vertex> map(static_cast<std::size_t>(b.graph.num_vertices()));
    for (Vertex v = 0; v < b.graph.num_vertices(); ++v) map[static_cast<std::size_t>(v)] = v;
    std::set<Vertex> ext_b_set(ext_b.begin(), ext_b.end());
    std::vector<Vertex> free;
    for (Vertex v = b.graph.num_vertices() - 1; v >= 0 && free.size() < ext_a.size(); --v)
        if (!ext_b_set.count(v) && a.graph.degree(v) == 0 && b.graph.degree(v) == 0 && v > 8) free.push_back(v);
    // Swap ext_b <-> ext_a (and send whatever sat on ext_a to unused ids).
    for (std::size_t i = 0; i < ext_b.size(); ++i) {
        map[static_cast<std::size_t>(ext_b[i])] = ext_a[i];
        if (!ext_b_set.count(ext_a[i])) map[static_cast<std::size_t>(ext_a[i])] = free[i];
    }
    second->second = relabel(b, map, b.graph.num_vertices());
    try {
        boost_absorber(base, boosters);
        FAIL("expected a precondition violation");
    } catch (const PreconditionViolation& e) {
        CHECK(std::string(e.what()).find("edge {") != std::string::npos);
    }
}

TEST_CASE("absorber search limits") {
    AbsorberSearchOptions tight;
    tight.max_edges = 6;
    CHECK_THROWS_AS(brute_force_absorber(triangle_reserve(9), 3, 9, tight), NotFound);
    CHECK_THROWS_AS(brute_force_absorber(triangle_reserve(9), 3, 2), InvalidParameter);
}
