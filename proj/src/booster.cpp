#include "dforge/booster.hpp"

#include "dforge/error.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <set>

namespace dforge {
namespace {

// Family re-indexed onto compact non-root vertex ids. A clique with no
// vertex outside the root makes every subfamily containing it infinite.
struct CompactFamily {
    std::vector<std::vector<int>> members;  // per clique, compact non-root vertex ids
    int vertex_count = 0;
    bool has_rootless_clique = false;
};

CompactFamily compact(std::span<const Clique> family, std::span<const Vertex> root) {
    std::set<Vertex> root_set(root.begin(), root.end());
    std::map<Vertex, int> ids;
    CompactFamily out;
    for (const Clique& c : family) {
        std::vector<int> m;
        for (Vertex v : c.vertices()) {
            if (root_set.count(v)) continue;
            auto [it, inserted] = ids.emplace(v, static_cast<int>(ids.size()));
            m.push_back(it->second);
        }
        if (m.empty()) out.has_rootless_clique = true;
        out.members.push_back(std::move(m));
    }
    out.vertex_count = static_cast<int>(ids.size());
    return out;
}

// Dinic max-flow on int64 capacities.
class MaxFlow {
public:
    explicit MaxFlow(int n) : head_(static_cast<std::size_t>(n), -1), level_(static_cast<std::size_t>(n)),
                              it_(static_cast<std::size_t>(n)) {}

    void add_edge(int from, int to, std::int64_t cap) {
        arcs_.push_back({to, head_[idx(from)], cap});
        head_[idx(from)] = static_cast<int>(arcs_.size()) - 1;
        arcs_.push_back({from, head_[idx(to)], 0});
        head_[idx(to)] = static_cast<int>(arcs_.size()) - 1;
    }

    std::int64_t run(int s, int t) {
        std::int64_t flow = 0;
        while (bfs(s, t)) {
            it_ = head_;
            while (std::int64_t pushed = dfs(s, t, std::numeric_limits<std::int64_t>::max())) flow += pushed;
        }
        return flow;
    }

    // Vertices reachable from s in the residual graph after run().
    std::vector<bool> source_side(int s) const {
        std::vector<bool> seen(head_.size(), false);
        std::queue<int> todo;
        todo.push(s);
        seen[idx(s)] = true;
        while (!todo.empty()) {
            const int u = todo.front();
            todo.pop();
            for (int a = head_[idx(u)]; a >= 0; a = arcs_[idx(a)].next) {
                if (arcs_[idx(a)].cap > 0 && !seen[idx(arcs_[idx(a)].to)]) {
                    seen[idx(arcs_[idx(a)].to)] = true;
                    todo.push(arcs_[idx(a)].to);
                }
            }
        }
        return seen;
    }

private:
    struct Arc {
        int to;
        int next;
        std::int64_t cap;
    };

    static std::size_t idx(int i) { return static_cast<std::size_t>(i); }

    bool bfs(int s, int t) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<int> todo;
        level_[idx(s)] = 0;
        todo.push(s);
        while (!todo.empty()) {
            const int u = todo.front();
            todo.pop();
            for (int a = head_[idx(u)]; a >= 0; a = arcs_[idx(a)].next) {
                if (arcs_[idx(a)].cap > 0 && level_[idx(arcs_[idx(a)].to)] < 0) {
                    level_[idx(arcs_[idx(a)].to)] = level_[idx(u)] + 1;
                    todo.push(arcs_[idx(a)].to);
                }
            }
        }
        return level_[idx(t)] >= 0;
    }

    std::int64_t dfs(int u, int t, std::int64_t limit) {
        if (u == t) return limit;
        for (int& a = it_[idx(u)]; a >= 0; a = arcs_[idx(a)].next) {
            Arc& arc = arcs_[idx(a)];
            if (arc.cap > 0 && level_[idx(arc.to)] == level_[idx(u)] + 1) {
                const std::int64_t got = dfs(arc.to, t, std::min(limit, arc.cap));
                if (got > 0) {
                    arc.cap -= got;
                    arcs_[idx(a ^ 1)].cap += got;
                    return got;
                }
            }
        }
        return 0;
    }

    std::vector<Arc> arcs_;
    std::vector<int> head_;
    std::vector<int> level_;
    std::vector<int> it_;
};

Packing map_cliques(const Packing& cliques, const std::vector<Vertex>& map) {
    Packing out;
    out.reserve(cliques.size());
    for (const Clique& c : cliques) {
        std::vector<Vertex> vs;
        for (Vertex v : c.vertices()) vs.push_back(map[static_cast<std::size_t>(v)]);
        out.emplace_back(std::move(vs));
    }
    return canonical(std::move(out));
}

Clique map_clique(const Clique& c, const std::vector<Vertex>& map) {
    std::vector<Vertex> vs;
    for (Vertex v : c.vertices()) vs.push_back(map[static_cast<std::size_t>(v)]);
    return Clique(std::move(vs));
}

Packing without(const Packing& p, const Clique& c) {
    Packing out;
    for (const Clique& x : p)
        if (x != c) out.push_back(x);
    return out;
}

std::vector<Vertex> vertex_union(const Clique& a, const Clique& b) {
    std::vector<Vertex> out;
    std::set_union(a.vertices().begin(), a.vertices().end(), b.vertices().begin(), b.vertices().end(),
                   std::back_inserter(out));
    return out;
}

std::vector<Vertex> vertex_intersection(const Clique& a, const Clique& b) {
    std::vector<Vertex> out;
    std::set_intersection(a.vertices().begin(), a.vertices().end(), b.vertices().begin(), b.vertices().end(),
                          std::back_inserter(out));
    return out;
}

Rational upper_bound_for(int q) { return make_rational(2, q - 2); }
Rational lower_bound_for(int q) { return make_rational(2, q); }

}  // namespace

std::string to_string(const Density& d) {
    return d.infinite ? "inf" : d.value.str();
}

Density rooted_density(std::span<const Clique> family, std::span<const Vertex> root) {
    if (family.empty()) throw InvalidParameter("rooted_density: empty family");
    const CompactFamily cf = compact(family, root);
    if (cf.vertex_count == 0) return Density::inf();
    return Density::of(make_rational(static_cast<std::int64_t>(family.size()), cf.vertex_count));
}

Density max_rooted_density(std::span<const Clique> family, std::span<const Vertex> root, std::size_t cap) {
    if (family.empty()) throw InvalidParameter("max_rooted_density: empty family");
    if (family.size() > cap || family.size() >= 63)
        throw ResourceError("max_rooted_density: family of " + std::to_string(family.size()) +
                            " cliques exceeds scan cap " + std::to_string(cap));
    const CompactFamily cf = compact(family, root);
    if (cf.has_rootless_clique) return Density::inf();

    const std::size_t k = family.size();
    std::vector<int> multiplicity(static_cast<std::size_t>(cf.vertex_count), 0);
    std::int64_t selected = 0;
    std::int64_t distinct = 0;
    std::int64_t best_num = 0;
    std::int64_t best_den = 1;
    std::uint64_t gray = 0;
    const std::uint64_t total = std::uint64_t{1} << k;
    for (std::uint64_t step = 1; step < total; ++step) {
        const int bit = __builtin_ctzll(step);
        gray ^= std::uint64_t{1} << bit;
        const auto& members = cf.members[static_cast<std::size_t>(bit)];
        if (gray & (std::uint64_t{1} << bit)) {
            ++selected;
            for (int v : members)
                if (multiplicity[static_cast<std::size_t>(v)]++ == 0) ++distinct;
        } else {
            --selected;
            for (int v : members)
                if (--multiplicity[static_cast<std::size_t>(v)] == 0) --distinct;
        }
        if (selected * best_den > best_num * distinct) {
            best_num = selected;
            best_den = distinct;
        }
    }
    return Density::of(make_rational(best_num, best_den));
}

Density max_rooted_density_flow(std::span<const Clique> family, std::span<const Vertex> root) {
    if (family.empty()) throw InvalidParameter("max_rooted_density_flow: empty family");
    const CompactFamily cf = compact(family, root);
    if (cf.has_rootless_clique) return Density::inf();

    const int k = static_cast<int>(family.size());
    const int m = cf.vertex_count;
    const int source = k + m;
    const int sink = source + 1;
    // Start from the whole family and climb: each round finds a subfamily
    // maximising den*|H'| - num*|V(H')|; positive value means a denser one.
    std::int64_t num = k;
    std::int64_t den = m;
    for (;;) {
        MaxFlow flow(k + m + 2);
        for (int i = 0; i < k; ++i) {
            flow.add_edge(source, i, den);
            for (int v : cf.members[static_cast<std::size_t>(i)])
                flow.add_edge(i, k + v, std::numeric_limits<std::int64_t>::max() / 4);
        }
        for (int v = 0; v < m; ++v) flow.add_edge(k + v, sink, num);
        const std::int64_t cut = flow.run(source, sink);
        const std::int64_t gain = den * k - cut;
        if (gain <= 0) break;
        const auto side = flow.source_side(source);
        std::int64_t chosen = 0;
        std::int64_t covered = 0;
        for (int i = 0; i < k; ++i) chosen += side[static_cast<std::size_t>(i)] ? 1 : 0;
        for (int v = 0; v < m; ++v) covered += side[static_cast<std::size_t>(k + v)] ? 1 : 0;
        if (chosen == 0 || covered == 0 || chosen * den <= num * covered) break;
        num = chosen;
        den = covered;
    }
    return Density::of(make_rational(num, den));
}

Density max_rooted_density_any(std::span<const Clique> family, std::span<const Vertex> root, std::size_t cap) {
    if (family.size() <= cap) return max_rooted_density(family, root, cap);
    return max_rooted_density_flow(family, root);
}

TwoCliqueBooster base_booster(int q) {
    if (q < 3) throw InvalidParameter("base_booster: q must be at least 3");
    const int side = q - 1;
    auto cell = [side](int i, int j) { return 2 + (i - 1) * side + (j - 1); };
    const int n = 2 + side * side;

    std::vector<Edge> edges;
    for (int i = 1; i <= side; ++i) {
        for (int j = 1; j <= side; ++j) {
            edges.emplace_back(0, cell(i, j));
            edges.emplace_back(1, cell(i, j));
            for (int j2 = j + 1; j2 <= side; ++j2) edges.emplace_back(cell(i, j), cell(i, j2));
            for (int i2 = i + 1; i2 <= side; ++i2) edges.emplace_back(cell(i, j), cell(i2, j));
        }
    }

    auto row = [&](int apex, int i) {
        std::vector<Vertex> vs{apex};
        for (int j = 1; j <= side; ++j) vs.push_back(cell(i, j));
        return Clique(std::move(vs));
    };
    auto column = [&](int apex, int j) {
        std::vector<Vertex> vs{apex};
        for (int i = 1; i <= side; ++i) vs.push_back(cell(i, j));
        return Clique(std::move(vs));
    };

    TwoCliqueBooster b;
    b.q = q;
    b.graph = Graph(n, std::move(edges));
    for (int t = 1; t <= side; ++t) {
        b.decomp1.push_back(row(0, t));
        b.decomp1.push_back(column(1, t));
        b.decomp2.push_back(row(1, t));
        b.decomp2.push_back(column(0, t));
    }
    b.decomp1 = canonical(std::move(b.decomp1));
    b.decomp2 = canonical(std::move(b.decomp2));
    b.s1 = row(0, 1);
    b.s2 = row(1, 1);
    return b;
}

int RootedBooster::extension_size() const {
    return graph.num_vertices() - root.size();
}

Density booster_rooted_density(const RootedBooster& rb) {
    const auto& root = rb.root.vertices();
    Density on = rb.on_decomp.empty() ? Density::of(0) : max_rooted_density_any(rb.on_decomp, root);
    Density off = rb.off_decomp.empty() ? Density::of(0) : max_rooted_density_any(rb.off_decomp, root);
    return on < off ? off : on;
}

RootedBooster layer_boosters(int q, LayerTrace* trace) {
    TwoCliqueBooster current = base_booster(q);
    const Rational bound = upper_bound_for(q);

    auto record = [&](const TwoCliqueBooster& b) {
        if (!trace) return;
        LayerStep step;
        step.overlap = static_cast<int>(vertex_intersection(b.s1, b.s2).size());
        const Packing off = without(b.decomp1, b.s1);
        const Packing on = without(b.decomp2, b.s2);
        step.off_bound = max_rooted_density_any(off, b.s1.vertices());
        step.on_bound = max_rooted_density_any(on, vertex_union(b.s1, b.s2));
        if (Density::of(bound) < step.off_bound || Density::of(bound) < step.on_bound)
            throw Error("layer_boosters: density bound violated after glue " + std::to_string(trace->steps.size()) +
                        " (off " + to_string(step.off_bound) + ", on " + to_string(step.on_bound) + ")");
        if (!trace->steps.empty() && step.overlap >= trace->steps.back().overlap)
            throw Error("layer_boosters: overlap did not decrease at glue " + std::to_string(trace->steps.size()));
        trace->steps.push_back(step);
    };
    record(current);

    int glued = 0;
    for (auto shared = vertex_intersection(current.s1, current.s2); !shared.empty();
         shared = vertex_intersection(current.s1, current.s2)) {
        const TwoCliqueBooster fresh = base_booster(q);
        const int n_old = current.graph.num_vertices();
        // S1' = {apex 0} ∪ row 1 lands on S2, with the apex on the smallest shared vertex.
        const Vertex pivot = shared.front();
        std::vector<Vertex> rest;
        for (Vertex v : current.s2.vertices())
            if (v != pivot) rest.push_back(v);
        std::vector<Vertex> map(static_cast<std::size_t>(fresh.graph.num_vertices()), -1);
        map[0] = pivot;
        const auto& fresh_s1 = fresh.s1.vertices();
        for (std::size_t i = 1; i < fresh_s1.size(); ++i) map[static_cast<std::size_t>(fresh_s1[i])] = rest[i - 1];
        int next_id = n_old;
        for (auto& m : map)
            if (m < 0) m = next_id++;

        std::vector<Edge> edges = current.graph.edges();
        for (const Edge& e : fresh.graph.edges()) {
            const Edge mapped(map[static_cast<std::size_t>(e.u)], map[static_cast<std::size_t>(e.v)]);
            if (!current.graph.has_edge(mapped)) edges.push_back(mapped);
        }

        TwoCliqueBooster next;
        next.q = q;
        next.graph = Graph(next_id, std::move(edges));
        next.s1 = current.s1;
        next.s2 = map_clique(fresh.s2, map);
        Packing d1 = current.decomp1;
        for (const Clique& c : map_cliques(without(fresh.decomp1, fresh.s1), map)) d1.push_back(c);
        Packing d2 = without(current.decomp2, current.s2);
        for (const Clique& c : map_cliques(fresh.decomp2, map)) d2.push_back(c);
        next.decomp1 = canonical(std::move(d1));
        next.decomp2 = canonical(std::move(d2));
        current = std::move(next);
        ++glued;
        record(current);
    }

    RootedBooster rb;
    rb.q = q;
    rb.root = current.s1;
    rb.graph = current.graph.minus(Graph(current.graph.num_vertices(), current.s1.edges()));
    rb.on_decomp = current.decomp2;
    rb.off_decomp = without(current.decomp1, current.s1);
    if (trace) {
        trace->final_special = current.s2;
        trace->glue_iterations = glued;
    }
    return rb;
}

bool BoosterReport::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const Check* BoosterReport::find(const std::string& name) const {
    for (const Check& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

BoosterReport verify_rooted_booster(const RootedBooster& rb) {
    BoosterReport report;
    auto add = [&](std::string name, bool passed, std::string detail = {}) {
        report.checks.push_back({std::move(name), passed, std::move(detail)});
    };
    const int q = rb.q;
    const int n = rb.graph.num_vertices();

    const bool root_shape = rb.root.size() == q && !rb.root.vertices().empty() && rb.root.vertices().front() >= 0 &&
                            rb.root.vertices().back() < n;
    add("root is a q-clique inside V(B)", root_shape);

    const Graph root_graph(n, root_shape ? rb.root.edges() : std::vector<Edge>{});
    add("R edge-disjoint from B", rb.graph.edge_disjoint(root_graph));

    const Verdict off = verify_decomposition(rb.graph, rb.off_decomp, q);
    add("off_decomp decomposes B", off.ok, off.message);

    Verdict on = Verdict::fail("root malformed");
    if (root_shape && rb.graph.edge_disjoint(root_graph)) on = verify_decomposition(rb.graph.united(root_graph), rb.on_decomp, q);
    add("on_decomp decomposes B + R", on.ok, on.message);

    const bool root_absent = !std::binary_search(rb.on_decomp.begin(), rb.on_decomp.end(), rb.root);
    add("R not in on_decomp", root_absent);

    std::string shared;
    for (const Clique& c : rb.on_decomp)
        if (std::binary_search(rb.off_decomp.begin(), rb.off_decomp.end(), c)) shared = to_string(c);
    add("on_decomp disjoint from off_decomp + R", shared.empty() && root_absent,
        shared.empty() ? std::string{} : "shared clique " + shared);

    if (q >= 3 && root_shape && !rb.on_decomp.empty() && !rb.off_decomp.empty()) {
        report.on_density = max_rooted_density_any(rb.on_decomp, rb.root.vertices());
        report.off_density = max_rooted_density_any(rb.off_decomp, rb.root.vertices());
        const Density worst = report.on_density < report.off_density ? report.off_density : report.on_density;
        const std::string detail = "on " + to_string(report.on_density) + ", off " + to_string(report.off_density);
        add("rooted density <= 2/(q-2)", worst <= Density::of(upper_bound_for(q)), detail);
        add("rooted density >= 2/q", Density::of(lower_bound_for(q)) <= worst, detail);
    } else {
        add("rooted density <= 2/(q-2)", false, "density undefined");
        add("rooted density >= 2/q", false, "density undefined");
    }
    return report;
}

RootedBooster relabel(const RootedBooster& rb, const std::vector<Vertex>& map, int n_vertices) {
    RootedBooster out;
    out.q = rb.q;
    std::vector<Edge> edges;
    for (const Edge& e : rb.graph.edges())
        edges.emplace_back(map[static_cast<std::size_t>(e.u)], map[static_cast<std::size_t>(e.v)]);
    out.graph = Graph(n_vertices, std::move(edges));
    out.on_decomp = map_cliques(rb.on_decomp, map);
    out.off_decomp = map_cliques(rb.off_decomp, map);
    out.root = map_clique(rb.root, map);
    return out;
}

}  // namespace dforge
