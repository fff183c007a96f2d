#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dforge {

using Vertex = int;

// Unordered vertex pair stored with u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    Edge() = default;
    Edge(Vertex a, Vertex b) : u(a < b ? a : b), v(a < b ? b : a) {}

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

std::string to_string(const Edge& e);

// Simple undirected graph on vertices 0..n-1. Immutable after construction.
class Graph {
public:
    Graph() = default;
    explicit Graph(int n);
    // Throws InvalidParameter on self-loops, duplicates, or out-of-range endpoints.
    Graph(int n, std::vector<Edge> edges);

    static Graph complete(int n);

    int num_vertices() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }
    // Sorted lexicographically.
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_edge(Vertex a, Vertex b) const;
    bool has_edge(const Edge& e) const { return has_edge(e.u, e.v); }
    // Position of e in edges(), or -1.
    int edge_index(const Edge& e) const;

    int degree(Vertex v) const { return degree_[static_cast<std::size_t>(v)]; }
    int max_degree() const;
    const std::vector<Vertex>& neighbors(Vertex v) const { return adjacency_[static_cast<std::size_t>(v)]; }

    // Same vertex set; edges of this graph not in other.
    Graph minus(const Graph& other) const;
    // Vertex count is the larger of the two.
    Graph united(const Graph& other) const;
    Graph with_vertex_count(int n) const;
    bool edge_disjoint(const Graph& other) const;
    bool is_subgraph_of(const Graph& other) const;

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> degree_;
    std::vector<std::vector<Vertex>> adjacency_;
    std::vector<std::int32_t> index_;  // n*n table into edges_, -1 when absent
};

// A q-vertex clique in canonical (strictly increasing) form.
class Clique {
public:
    Clique() = default;
    // Sorts the input; throws InvalidParameter on repeated vertices.
    explicit Clique(std::vector<Vertex> vertices);
    Clique(std::initializer_list<Vertex> vertices) : Clique(std::vector<Vertex>(vertices)) {}

    const std::vector<Vertex>& vertices() const { return vertices_; }
    int size() const { return static_cast<int>(vertices_.size()); }
    bool contains(Vertex v) const;
    std::vector<Edge> edges() const;

    friend auto operator<=>(const Clique&, const Clique&) = default;

private:
    std::vector<Vertex> vertices_;
};

std::string to_string(const Clique& c);

// A set of cliques kept sorted and duplicate-free.
using Packing = std::vector<Clique>;

Packing canonical(Packing cliques);

// Outcome of a structural check. `message` explains the first failure.
struct Verdict {
    bool ok = true;
    std::string message;

    explicit operator bool() const { return ok; }
    static Verdict pass() { return {}; }
    static Verdict fail(std::string why) { return {false, std::move(why)}; }
};

bool is_kq_divisible(const Graph& g, int q);

Verdict verify_packing(const Graph& g, std::span<const Clique> cliques, int q);
Verdict verify_decomposition(const Graph& g, std::span<const Clique> cliques, int q);

// Graph on n vertices whose edges are the union of the cliques' edges.
// Throws InvalidParameter when two cliques share an edge.
Graph union_of_cliques(int n, std::span<const Clique> cliques);

inline constexpr std::size_t kDefaultCliqueCap = 10'000'000;

// All q-cliques in lexicographic order. Throws ResourceError past `cap`.
std::vector<Clique> list_cliques(const Graph& g, int q, std::size_t cap = kDefaultCliqueCap);

// Simple hypergraph on vertices 0..num_vertices-1; each edge is sorted.
struct Hypergraph {
    int num_vertices = 0;
    std::vector<std::vector<int>> edges;

    std::vector<int> degrees() const;
    int max_degree() const;
    // Largest number of edges containing any fixed pair of distinct vertices.
    int max_codegree() const;
};

// Vertices are the edges of the host (indexed as in host.edges()); one
// hyperedge per q-clique, holding the indices of its C(q,2) edges.
struct DesignHypergraph {
    Graph host;
    int q = 0;
    std::vector<Clique> cliques;  // cliques[i] generates hypergraph.edges[i]
    Hypergraph hypergraph;
};

DesignHypergraph design_hypergraph(const Graph& g, int q, std::size_t cap = kDefaultCliqueCap);

// Edge-disjoint clique families of size <= max_size drawn from `candidates`,
// grouped by size (index s holds the families of size s).
std::vector<std::vector<Packing>> enumerate_packings(std::span<const Clique> candidates, int max_size,
                                                     std::size_t cap);

}  // namespace dforge
