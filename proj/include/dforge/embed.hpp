#pragma once

#include "dforge/graph.hpp"
#include "dforge/stats.hpp"

#include <cstdint>
#include <map>
#include <optional>

namespace dforge {

// Partial K_{q+b} rooted at `root`: every pair of V(T) except pairs inside the root.
struct PartialClique {
    Clique root;
    std::vector<Vertex> extension;  // sorted, disjoint from root

    std::vector<Vertex> vertices() const;
    std::vector<Edge> edges() const;
};

struct EmbeddingProblem {
    Graph host;
    std::vector<Clique> roots;  // q-uniform hypergraph on V(host)
    int b = 1;
    int C = 1;

    int q() const;
    int max_root_degree() const;  // Δ1(roots)
    // Number of slots, floor(C Δ1 / (2(q + b))).
    int slot_count() const;
};

// Throws PreconditionViolation when Δ1 > n/C, C < 2(q+b), the slot count is
// zero, or a root has fewer than b common neighbours forming a clique.
void check_preconditions(const EmbeddingProblem& problem);

struct Embedding {
    std::vector<PartialClique> parts;  // parts[i] extends roots[i]
    std::vector<int> slots;            // slot i_e in [0, D)
    std::uint64_t resamples = 0;
    int max_degree = 0;                // Δ of the union of all parts
};

struct EmbeddingOptions {
    std::uint64_t resample_cap = 1'000'000;
    std::uint64_t draw_attempts = 100'000;  // rejection draws per uniform partial clique
};

// Draws every (T_e, i_e) uniformly, then repeatedly redraws both variables of
// the lowest-indexed violated event until none remains. Events: two parts
// sharing an extension vertex in the same slot, or sharing an edge.
// Postconditions (edge-disjoint parts, Δ <= C Δ1) are asserted before return.
Embedding sample_embedding(const EmbeddingProblem& problem, std::uint64_t seed, EmbeddingOptions options = {});

// Throws Error naming the first violated postcondition.
void check_embedding(const EmbeddingProblem& problem, const Embedding& embedding);

struct EmbeddingSpreadReport {
    std::uint64_t trials = 0;
    std::uint64_t hits = 0;
    bool exact_zero = false;  // targets meet their roots or exceed b
    double estimate = 0.0;
    Interval ci;
    double bound = 0.0;       // ((3b)^b / n)^{Σ|S_e|}
    std::uint64_t resamples = 0;
    int max_degree = 0;
    bool all_disjoint = true;
};

// Estimates P(S_e ⊆ V(T_e) \ V(e) for all e); targets maps root index -> S_e.
EmbeddingSpreadReport embedding_spread_report(const EmbeddingProblem& problem,
                                              const std::map<int, std::vector<Vertex>>& targets,
                                              std::uint64_t trials, std::uint64_t seed,
                                              EmbeddingOptions options = {});

// Vertices adjacent in `host` to every vertex of `root`, excluding the root.
std::vector<Vertex> common_neighbors(const Graph& host, const Clique& root);

}  // namespace dforge
