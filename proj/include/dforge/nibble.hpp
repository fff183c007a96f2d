#pragma once

#include "dforge/graph.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

namespace dforge {

// ---------------------------------------------------------------------------
// Reservoir and regularization

struct ReservoirResult {
    Graph reserve;
    int attempts = 0;
    int max_degree = 0;
    std::int64_t min_clique_count = 0;  // over edges outside the reserve
    double threshold = 0.0;
};

// Samples X by independent p-inclusion of G's edges until Δ(X) <= 2pn and
// every other edge e lies in >= eps p^{C(q,2)-1} n^{q-2} q-cliques of X + e.
// Throws RetryExhausted (with the failing statistic) after `retry_cap` draws.
ReservoirResult select_reservoir(const Graph& g, int q, double p, std::uint64_t seed, double eps,
                                 int retry_cap = 100);

// Number of q-cliques of X + e containing e.
std::int64_t cliques_through(const Graph& x, const Edge& e, int q);

struct RegularizeResult {
    std::vector<int> kept;  // indices into DesignHypergraph::cliques
    int attempts = 0;
    double worst_deviation = 0.0;  // max |deg/reference - 1/2| of the accepted draw
    double reference_degree = 0.0; // C(n-2, q-2)
};

// Keeps each hyperedge independently with probability 1/2 until every vertex
// degree lies in (1/2 ± tol) C(n-2, q-2). Throws RetryExhausted after
// `retry_cap` draws, quoting the best worst-deviation seen.
RegularizeResult regularize_design(const DesignHypergraph& design, double tol, std::uint64_t seed,
                                   int retry_cap = 20);

// ---------------------------------------------------------------------------
// Matching on hypergraphs with a bipartite reserve

// Every hyperedge contains exactly one vertex of A; all other vertices form B.
struct BipartiteHypergraph {
    Hypergraph graph;
    std::vector<char> in_a;  // indexed by vertex

    bool is_a(int v) const { return in_a[static_cast<std::size_t>(v)] != 0; }
    std::vector<int> a_vertices() const;
};

// Throws InvalidParameter unless every hyperedge meets A exactly once.
BipartiteHypergraph make_bipartite(Hypergraph h, const std::vector<int>& a_vertices);

enum class ReservePolicy { Greedy, Matching };

ReservePolicy parse_reserve_policy(const std::string& s);
std::string to_string(ReservePolicy p);

// Bad-event thresholds for sparsification. Unset fields take the
// proof-shaped defaults computed from mu = rate * D:
//   codegree > log^2 D, B-degree and G1-degree > mu + mu^upper_exponent,
//   A-degree in G1 < mu (1 - mu^-lower_exponent),
//   A-degree in G2 < max(1, mu D^-alpha - mu^upper_exponent).
struct SparsifyThresholds {
    std::optional<double> codegree;
    std::optional<double> b_degree;
    std::optional<double> g1_degree;
    std::optional<double> a_degree_g1;
    std::optional<double> a_degree_g2;
};

struct NibbleParams {
    double D = 1.0;
    double gamma = 0.5;
    double alpha = 0.0;
    double bite = 0.2;
    int max_rounds = 1000;
    ReservePolicy reserve_policy = ReservePolicy::Greedy;
    double rate_floor = 0.05;
    double upper_exponent = 2.0 / 3.0;
    double lower_exponent = 1.0 / 3.0;
    SparsifyThresholds thresholds;
    std::uint64_t resample_cap = 10'000;
};

// Throws InvalidParameter outside 0 < gamma < 1, 0 < bite < 1.
void validate(const NibbleParams& params);

struct MatchedEdge {
    int part = 1;   // 1 = main hypergraph, 2 = reserve
    int index = 0;  // edge index within that part

    friend auto operator<=>(const MatchedEdge&, const MatchedEdge&) = default;
};

struct NibbleResult {
    bool a_perfect = false;
    std::vector<MatchedEdge> edges;
    std::vector<int> uncovered_a;
    int rounds = 0;
    double leave_fraction = 0.0;  // share of A uncovered when the bite phase ended
    int reserve_used = 0;
};

// Semi-random bites on g1, then completion of uncovered A-vertices through g2.
// Failure is reported through a_perfect / uncovered_a.
NibbleResult nibble_with_reserves(const Hypergraph& g1, const BipartiteHypergraph& g2, const NibbleParams& params,
                                  std::uint64_t seed);

// Checks pairwise disjointness and the A-perfect flag against g2's A.
Verdict verify_matching(const Hypergraph& g1, const BipartiteHypergraph& g2, const NibbleResult& result);

struct SparsifyReport {
    double formula_rate = 0.0;  // D^{gamma/2 - 1}
    double rate = 0.0;          // after the floor, capped at 1
    std::uint64_t resamples = 0;
    std::vector<char> kept1;
    std::vector<char> kept2;
    std::string last_event;
};

struct SpreadNibbleResult {
    NibbleResult matching;
    SparsifyReport sparsify;
    bool sparsify_failed = false;
    std::string failure;
};

// Sparsifies both parts at max(D^{gamma/2-1}, floor), resamples the support of
// the first violated bad event until none holds, then runs the nibble on the
// kept edges. Indices in the result refer to the original hypergraphs.
SpreadNibbleResult spread_nibble(const Hypergraph& g1, const BipartiteHypergraph& g2, const NibbleParams& params,
                                 std::uint64_t seed);

// ---------------------------------------------------------------------------
// Steiner application: main part Design(J) with J = G - (X ∪ A); the reserve
// holds the cliques with exactly one J-edge and every other edge in X.

struct ReserveInstance {
    int q = 3;
    Graph host;
    Graph reserve;   // X
    Graph absorber;  // A
    Graph remainder; // J
    std::vector<Edge> vertex_edges;  // hypergraph vertex id -> host edge; J edges first, then X edges
    int j_count = 0;
    Hypergraph g1;
    std::vector<Clique> g1_cliques;
    BipartiteHypergraph g2;
    std::vector<Clique> g2_cliques;
};

// main_cliques defaults to every q-clique of J.
ReserveInstance build_reserve_instance(const Graph& host, const Graph& reserve, const Graph& absorber, int q,
                                       std::optional<std::vector<Clique>> main_cliques = std::nullopt);

Packing matching_to_packing(const ReserveInstance& inst, const NibbleResult& result);

}  // namespace dforge
