#pragma once

#include "dforge/graph.hpp"
#include "dforge/rational.hpp"

#include <span>
#include <string>
#include <vector>

namespace dforge {

// Exact rooted density; `infinite` when the family has no vertex outside the root.
struct Density {
    bool infinite = false;
    Rational value = 0;

    static Density inf() { return {true, 0}; }
    static Density of(Rational v) { return {false, std::move(v)}; }

    friend bool operator==(const Density& a, const Density& b) {
        return a.infinite == b.infinite && (a.infinite || a.value == b.value);
    }
    friend bool operator<(const Density& a, const Density& b) {
        if (a.infinite) return false;
        if (b.infinite) return true;
        return a.value < b.value;
    }
    friend bool operator<=(const Density& a, const Density& b) { return !(b < a); }
};

std::string to_string(const Density& d);

// |family| / |union of family vertices outside root|. Throws InvalidParameter on an empty family.
Density rooted_density(std::span<const Clique> family, std::span<const Vertex> root);

inline constexpr std::size_t kDefaultDensityScanCap = 24;

// Maximum rooted density over nonempty subfamilies by exhaustive scan in
// Gray-code order. Throws ResourceError when the family exceeds `cap`.
Density max_rooted_density(std::span<const Clique> family, std::span<const Vertex> root,
                           std::size_t cap = kDefaultDensityScanCap);

// Same quantity by Dinkelbach iteration over a max-closure min-cut; exact and
// polynomial, so it covers families far beyond the scan cap.
Density max_rooted_density_flow(std::span<const Clique> family, std::span<const Vertex> root);

// Scan when the family fits under `cap`, min-cut otherwise.
Density max_rooted_density_any(std::span<const Clique> family, std::span<const Vertex> root,
                               std::size_t cap = kDefaultDensityScanCap);

// Graph with two disjoint decompositions and special cliques s1 in decomp1,
// s2 in decomp2 sharing q-1 vertices.
struct TwoCliqueBooster {
    int q = 0;
    Graph graph;
    Packing decomp1;
    Packing decomp2;
    Clique s1;
    Clique s2;
};

// Rook graph K_{q-1} x K_{q-1} plus two dominating vertices. Vertex 0 and 1
// are the apexes; grid cell (i, j), 1-based, is 2 + (i-1)(q-1) + (j-1).
TwoCliqueBooster base_booster(int q);

struct RootedBooster {
    int q = 0;
    Graph graph;        // B; root edges excluded
    Packing on_decomp;  // decomposes B plus root, never contains root
    Packing off_decomp; // decomposes B
    Clique root;

    // Vertices of B outside the root.
    int extension_size() const;
};

// max over {on, off} of the maximum rooted density at V(root).
Density booster_rooted_density(const RootedBooster& rb);

struct LayerStep {
    int overlap = 0;       // |V(S1) ∩ V(S2)| after this step
    Density off_bound;     // m(decomp1 \ {S1}, V(S1))
    Density on_bound;      // m(decomp2 \ {S2}, V(S1) ∪ V(S2))
};

struct LayerTrace {
    std::vector<LayerStep> steps;  // steps[0] is the base booster
    Clique final_special;          // S2 at termination
    int glue_iterations = 0;
};

// Glue fresh base boosters onto S2 until S2 is vertex-disjoint from S1, then
// release S1 as the root. With a trace, both density bounds are recomputed
// after every glue and a violation throws.
RootedBooster layer_boosters(int q, LayerTrace* trace = nullptr);

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct BoosterReport {
    std::vector<Check> checks;
    Density on_density;
    Density off_density;

    bool ok() const;
    const Check* find(const std::string& name) const;
};

// Structural invariants plus 2/q <= rooted density <= 2/(q-2).
BoosterReport verify_rooted_booster(const RootedBooster& rb);

// Relabels a booster through `map` (old id -> new id) onto n_vertices vertices.
RootedBooster relabel(const RootedBooster& rb, const std::vector<Vertex>& map, int n_vertices);

}  // namespace dforge
