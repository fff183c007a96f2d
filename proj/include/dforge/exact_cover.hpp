#pragma once

#include "dforge/graph.hpp"

#include <cstdint>
#include <optional>

namespace dforge {

// Cover `universe`'s edges exactly with cliques drawn from `candidates`.
struct CoverInstance {
    Graph universe;
    std::vector<Clique> candidates;
    int q = 3;

    // Every q-clique of g is a candidate.
    static CoverInstance all_cliques(const Graph& g, int q);
};

// Throws InvalidParameter when a candidate is not a q-clique inside the universe.
void validate(const CoverInstance& inst);

enum class SolveStatus { Solved, Infeasible, BudgetExhausted };

std::string to_string(SolveStatus s);

struct SolveResult {
    SolveStatus status = SolveStatus::Infeasible;
    Packing packing;  // set when Solved
    std::uint64_t nodes = 0;
};

// budget == 0 means unlimited. A seed permutes the candidate order, which
// changes which decomposition is found but never whether one exists.
SolveResult find_decomposition(const CoverInstance& inst, std::uint64_t budget = 0,
                               std::optional<std::uint64_t> seed = std::nullopt);

struct Enumeration {
    std::vector<Packing> decompositions;
    bool truncated = false;
    std::uint64_t nodes = 0;
};

Enumeration enumerate_decompositions(const CoverInstance& inst, std::size_t limit);

// Number of decompositions that contain `partial`; 0 when partial is not a
// packing of candidates.
std::uint64_t count_extensions(const CoverInstance& inst, const Packing& partial);

}  // namespace dforge
