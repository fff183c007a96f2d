#pragma once

#include "dforge/booster.hpp"
#include "dforge/embed.hpp"
#include "dforge/graph.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dforge {

// Key of a subgraph L of X: its sorted edge list.
using EdgeKey = std::vector<Edge>;

struct OmniAbsorber {
    int q = 3;
    int n = 0;
    Graph X;
    Graph A;
    Packing family;                     // every clique uses at most one X-edge
    std::map<EdgeKey, Packing> qmap;    // L -> Q(L), decomposing L + A
    Packing roots;                      // cliques replaced by boosters; never in any Q(L)
};

inline constexpr std::size_t kDefaultDivisibleCap = 20;

// Every K_q-divisible edge subset of X (as graphs on X's vertex set), the
// empty graph first. Throws ResourceError when |E(X)| exceeds `cap`.
std::vector<Graph> divisible_subgraphs(const Graph& x, int q, std::size_t cap = kDefaultDivisibleCap);

struct AbsorberSearchOptions {
    std::size_t max_edges = 18;
    std::size_t divisible_cap = kDefaultDivisibleCap;
    std::uint64_t candidate_cap = 5'000'000;  // candidate sets examined before giving up
};

// Smallest A (by edge count, then lexicographically by edge list) inside
// K_host_n - X for which every divisible L admits a decomposition of L + A by
// cliques with at most one X-edge. Throws NotFound when no A with at most
// max_edges edges works.
OmniAbsorber brute_force_absorber(const Graph& x, int q, int host_n, AbsorberSearchOptions options = {});

// Replaces every family clique H that has a booster by that booster: H in
// Q(L) selects the on-decomposition, otherwise the off-decomposition.
// Boosters must be rooted at their key and edge-disjoint from X, A and each
// other; violations throw PreconditionViolation naming the edge.
OmniAbsorber boost_absorber(const OmniAbsorber& base, const std::map<Clique, RootedBooster>& boosters);

struct EmbeddedBoosters {
    std::map<Clique, RootedBooster> boosters;
    Embedding embedding;
    int host_n = 0;
};

// Embeds one copy of `booster` at every family clique of `base` inside
// K_host_n - (X + A), using sample_embedding with constant C.
EmbeddedBoosters embed_boosters(const OmniAbsorber& base, const RootedBooster& booster, int host_n, int C,
                                std::uint64_t seed, EmbeddingOptions options = {});

struct AbsorberReport {
    std::vector<Check> checks;
    int c_observed = 0;        // max number of family cliques through one edge of X + A
    int max_degree_a = 0;
    std::size_t divisible_count = 0;

    bool ok() const;
    const Check* find(const std::string& name) const;
};

// Check names: "X and A edge-disjoint", "family uses at most one X-edge",
// "family inside X + A", "qmap decomposes L + A", "qmap inside family",
// "no root clique in qmap".
AbsorberReport verify_omni_absorber(const OmniAbsorber& oa, std::size_t divisible_cap = kDefaultDivisibleCap);

EdgeKey key_of(const Graph& g);
Graph graph_of(int n, const EdgeKey& key);

}  // namespace dforge
