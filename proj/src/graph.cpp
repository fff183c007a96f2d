#include "dforge/graph.hpp"

#include "dforge/error.hpp"
#include "dforge/rational.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace dforge {

std::string to_string(const Edge& e) {
    return "{" + std::to_string(e.u) + "," + std::to_string(e.v) + "}";
}

Graph::Graph(int n) : Graph(n, {}) {}

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 0) throw InvalidParameter("graph: negative vertex count");
    std::sort(edges_.begin(), edges_.end());
    const auto nn = static_cast<std::size_t>(n);
    degree_.assign(nn, 0);
    adjacency_.assign(nn, {});
    index_.assign(nn * nn, -1);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const Edge& e = edges_[i];
        if (e.u == e.v) throw InvalidParameter("graph: self-loop at " + std::to_string(e.u));
        if (e.u < 0 || e.v >= n) throw InvalidParameter("graph: endpoint out of range in " + to_string(e));
        if (i > 0 && edges_[i - 1] == e) throw InvalidParameter("graph: duplicate edge " + to_string(e));
        const auto u = static_cast<std::size_t>(e.u);
        const auto v = static_cast<std::size_t>(e.v);
        index_[u * nn + v] = index_[v * nn + u] = static_cast<std::int32_t>(i);
        ++degree_[u];
        ++degree_[v];
        adjacency_[u].push_back(e.v);
        adjacency_[v].push_back(e.u);
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

Graph Graph::complete(int n) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    return Graph(n, std::move(edges));
}

bool Graph::has_edge(Vertex a, Vertex b) const {
    if (a < 0 || b < 0 || a >= n_ || b >= n_) return false;
    return index_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b)] >= 0;
}

int Graph::edge_index(const Edge& e) const {
    if (e.u < 0 || e.v >= n_) return -1;
    return index_[static_cast<std::size_t>(e.u) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(e.v)];
}

int Graph::max_degree() const {
    return degree_.empty() ? 0 : *std::max_element(degree_.begin(), degree_.end());
}

Graph Graph::minus(const Graph& other) const {
    std::vector<Edge> kept;
    for (const Edge& e : edges_)
        if (!other.has_edge(e)) kept.push_back(e);
    return Graph(n_, std::move(kept));
}

Graph Graph::united(const Graph& other) const {
    std::vector<Edge> all;
    std::set_union(edges_.begin(), edges_.end(), other.edges_.begin(), other.edges_.end(), std::back_inserter(all));
    return Graph(std::max(n_, other.n_), std::move(all));
}

Graph Graph::with_vertex_count(int n) const {
    return Graph(n, edges_);
}

bool Graph::edge_disjoint(const Graph& other) const {
    const Graph& small = num_edges() <= other.num_edges() ? *this : other;
    const Graph& large = num_edges() <= other.num_edges() ? other : *this;
    return std::none_of(small.edges_.begin(), small.edges_.end(), [&](const Edge& e) { return large.has_edge(e); });
}

bool Graph::is_subgraph_of(const Graph& other) const {
    return std::all_of(edges_.begin(), edges_.end(), [&](const Edge& e) { return other.has_edge(e); });
}

Clique::Clique(std::vector<Vertex> vertices) : vertices_(std::move(vertices)) {
    std::sort(vertices_.begin(), vertices_.end());
    if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end())
        throw InvalidParameter("clique: repeated vertex in " + to_string(*this));
}

bool Clique::contains(Vertex v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

std::vector<Edge> Clique::edges() const {
    std::vector<Edge> out;
    out.reserve(vertices_.size() * (vertices_.size() - 1) / 2);
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        for (std::size_t j = i + 1; j < vertices_.size(); ++j) out.emplace_back(vertices_[i], vertices_[j]);
    return out;
}

std::string to_string(const Clique& c) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < c.vertices().size(); ++i) os << (i ? " " : "") << c.vertices()[i];
    os << ']';
    return os.str();
}

Packing canonical(Packing cliques) {
    std::sort(cliques.begin(), cliques.end());
    cliques.erase(std::unique(cliques.begin(), cliques.end()), cliques.end());
    return cliques;
}

bool is_kq_divisible(const Graph& g, int q) {
    if (q < 3) throw InvalidParameter("is_kq_divisible: q must be at least 3");
    const auto edges_per_clique = static_cast<std::size_t>(binomial(q, 2));
    if (g.num_edges() % edges_per_clique != 0) return false;
    for (int v = 0; v < g.num_vertices(); ++v)
        if (g.degree(v) % (q - 1) != 0) return false;
    return true;
}

Verdict verify_packing(const Graph& g, std::span<const Clique> cliques, int q) {
    std::set<Edge> seen;
    for (const Clique& c : cliques) {
        if (c.size() != q)
            return Verdict::fail("clique " + to_string(c) + " has " + std::to_string(c.size()) + " vertices, expected " +
                                 std::to_string(q));
        for (const Edge& e : c.edges()) {
            if (!g.has_edge(e)) return Verdict::fail("clique " + to_string(c) + " uses non-edge " + to_string(e));
            if (!seen.insert(e).second)
                return Verdict::fail("edge " + to_string(e) + " covered twice (second time by " + to_string(c) + ")");
        }
    }
    return Verdict::pass();
}

Verdict verify_decomposition(const Graph& g, std::span<const Clique> cliques, int q) {
    Verdict packing = verify_packing(g, cliques, q);
    if (!packing) return packing;
    const std::size_t covered = cliques.size() * static_cast<std::size_t>(binomial(q, 2));
    if (covered != g.num_edges()) {
        std::set<Edge> hit;
        for (const Clique& c : cliques)
            for (const Edge& e : c.edges()) hit.insert(e);
        std::ostringstream os;
        os << (g.num_edges() - covered) << " edge(s) uncovered:";
        int shown = 0;
        for (const Edge& e : g.edges()) {
            if (hit.count(e)) continue;
            if (shown++ == 8) {
                os << " ...";
                break;
            }
            os << ' ' << to_string(e);
        }
        return Verdict::fail(os.str());
    }
    return Verdict::pass();
}

Graph union_of_cliques(int n, std::span<const Clique> cliques) {
    std::vector<Edge> edges;
    for (const Clique& c : cliques)
        for (const Edge& e : c.edges()) edges.push_back(e);
    std::sort(edges.begin(), edges.end());
    auto dup = std::adjacent_find(edges.begin(), edges.end());
    if (dup != edges.end()) throw InvalidParameter("cliques share edge " + to_string(*dup));
    return Graph(n, std::move(edges));
}

std::vector<Clique> list_cliques(const Graph& g, int q, std::size_t cap) {
    if (q < 2) throw InvalidParameter("list_cliques: q must be at least 2");
    std::vector<Clique> out;
    std::vector<Vertex> current;
    current.reserve(static_cast<std::size_t>(q));
    // Extend in increasing vertex order; candidates are the common higher neighbours so far.
    std::function<void(const std::vector<Vertex>&)> extend = [&](const std::vector<Vertex>& candidates) {
        if (static_cast<int>(current.size()) == q) {
            if (out.size() >= cap) throw ResourceError("list_cliques: more than " + std::to_string(cap) + " cliques");
            out.emplace_back(current);
            return;
        }
        const std::size_t need = static_cast<std::size_t>(q) - current.size();
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (candidates.size() - i < need) break;
            const Vertex v = candidates[i];
            std::vector<Vertex> next;
            for (std::size_t j = i + 1; j < candidates.size(); ++j)
                if (g.has_edge(v, candidates[j])) next.push_back(candidates[j]);
            current.push_back(v);
            extend(next);
            current.pop_back();
        }
    };
    std::vector<Vertex> all(static_cast<std::size_t>(g.num_vertices()));
    for (int v = 0; v < g.num_vertices(); ++v) all[static_cast<std::size_t>(v)] = v;
    extend(all);
    return out;
}

std::vector<int> Hypergraph::degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(num_vertices), 0);
    for (const auto& e : edges)
        for (int v : e) ++deg[static_cast<std::size_t>(v)];
    return deg;
}

int Hypergraph::max_degree() const {
    const auto deg = degrees();
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

int Hypergraph::max_codegree() const {
    std::vector<std::vector<int>> incident(static_cast<std::size_t>(num_vertices));
    for (std::size_t i = 0; i < edges.size(); ++i)
        for (int v : edges[i]) incident[static_cast<std::size_t>(v)].push_back(static_cast<int>(i));
    int best = 0;
    std::vector<int> count(static_cast<std::size_t>(num_vertices), 0);
    for (int u = 0; u < num_vertices; ++u) {
        std::vector<int> touched;
        for (int ei : incident[static_cast<std::size_t>(u)]) {
            for (int v : edges[static_cast<std::size_t>(ei)]) {
                if (v <= u) continue;
                if (count[static_cast<std::size_t>(v)]++ == 0) touched.push_back(v);
                best = std::max(best, count[static_cast<std::size_t>(v)]);
            }
        }
        for (int v : touched) count[static_cast<std::size_t>(v)] = 0;
    }
    return best;
}

DesignHypergraph design_hypergraph(const Graph& g, int q, std::size_t cap) {
    if (q < 3) throw InvalidParameter("design_hypergraph: q must be at least 3");
    DesignHypergraph d;
    d.host = g;
    d.q = q;
    d.cliques = list_cliques(g, q, cap);
    d.hypergraph.num_vertices = static_cast<int>(g.num_edges());
    d.hypergraph.edges.reserve(d.cliques.size());
    for (const Clique& c : d.cliques) {
        std::vector<int> he;
        for (const Edge& e : c.edges()) he.push_back(g.edge_index(e));
        std::sort(he.begin(), he.end());
        d.hypergraph.edges.push_back(std::move(he));
    }
    return d;
}

std::vector<std::vector<Packing>> enumerate_packings(std::span<const Clique> candidates, int max_size,
                                                     std::size_t cap) {
    std::vector<std::vector<Packing>> by_size(static_cast<std::size_t>(max_size) + 1);
    std::size_t total = 0;
    Packing current;
    std::set<Edge> used;
    std::function<void(std::size_t)> grow = [&](std::size_t start) {
        if (++total > cap) throw ResourceError("enumerate_packings: more than " + std::to_string(cap) + " packings");
        by_size[current.size()].push_back(current);
        if (static_cast<int>(current.size()) == max_size) return;
        for (std::size_t i = start; i < candidates.size(); ++i) {
            const auto edges = candidates[i].edges();
            if (std::any_of(edges.begin(), edges.end(), [&](const Edge& e) { return used.count(e) > 0; })) continue;
            for (const Edge& e : edges) used.insert(e);
            current.push_back(candidates[i]);
            grow(i + 1);
            current.pop_back();
            for (const Edge& e : edges) used.erase(e);
        }
    };
    grow(0);
    return by_size;
}

}  // namespace dforge
