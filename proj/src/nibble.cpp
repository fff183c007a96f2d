#include "dforge/nibble.hpp"

#include "dforge/error.hpp"
#include "dforge/random.hpp"
#include "dforge/rational.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace dforge {
namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

// Cliques of size k inside `pool` (sorted) in graph x, each passed to visit.
void for_each_clique_in(const Graph& x, const std::vector<Vertex>& pool, int k,
                        const std::function<void(const std::vector<Vertex>&)>& visit) {
    std::vector<Vertex> current;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (static_cast<int>(current.size()) == k) {
            visit(current);
            return;
        }
        for (std::size_t i = start; i < pool.size(); ++i) {
            const Vertex w = pool[i];
            bool ok = true;
            for (Vertex c : current) ok = ok && x.has_edge(c, w);
            if (!ok) continue;
            current.push_back(w);
            rec(i + 1);
            current.pop_back();
        }
    };
    rec(0);
}

std::vector<Vertex> common_x_neighbors(const Graph& x, const Edge& e) {
    if (e.u >= x.num_vertices() || e.v >= x.num_vertices()) return {};
    const auto& a = x.neighbors(e.u);
    const auto& b = x.neighbors(e.v);
    std::vector<Vertex> sa(a), sb(b), out;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(out));
    return out;
}

void check_simple(const Hypergraph& h, const std::string& name) {
    std::set<std::vector<int>> seen;
    for (const auto& e : h.edges) {
        if (e.empty()) throw InvalidParameter(name + ": empty hyperedge");
        if (!std::is_sorted(e.begin(), e.end()) || std::adjacent_find(e.begin(), e.end()) != e.end())
            throw InvalidParameter(name + ": hyperedges must be sorted sets");
        if (e.front() < 0 || e.back() >= h.num_vertices) throw InvalidParameter(name + ": vertex out of range");
        if (!seen.insert(e).second) throw InvalidParameter(name + ": duplicate hyperedge");
    }
}

// Incidence lists: vertex -> indices of hyperedges containing it.
std::vector<std::vector<int>> incidence(const Hypergraph& h, int n) {
    std::vector<std::vector<int>> inc(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < h.edges.size(); ++i)
        for (int v : h.edges[i]) inc[static_cast<std::size_t>(v)].push_back(static_cast<int>(i));
    return inc;
}

bool free_edge(const std::vector<int>& e, const std::vector<char>& covered) {
    for (int v : e)
        if (covered[static_cast<std::size_t>(v)]) return false;
    return true;
}

void cover(const std::vector<int>& e, std::vector<char>& covered) {
    for (int v : e) covered[static_cast<std::size_t>(v)] = 1;
}

// Kuhn augmenting paths on the graph reserve (every edge is {a, b}).
bool augment(int a, const std::vector<std::vector<int>>& adj, std::vector<int>& match_b, std::vector<char>& seen,
             const Hypergraph& g2, std::vector<int>& via_edge) {
    for (int idx : adj[static_cast<std::size_t>(a)]) {
        const auto& e = g2.edges[static_cast<std::size_t>(idx)];
        const int b = e[0] == a ? e[1] : e[0];
        if (seen[static_cast<std::size_t>(b)]) continue;
        seen[static_cast<std::size_t>(b)] = 1;
        const int prev = match_b[static_cast<std::size_t>(b)];
        if (prev < 0 || augment(prev, adj, match_b, seen, g2, via_edge)) {
            match_b[static_cast<std::size_t>(b)] = a;
            via_edge[static_cast<std::size_t>(a)] = idx;
            return true;
        }
    }
    return false;
}

}  // namespace

// ---------------------------------------------------------------------------

std::int64_t cliques_through(const Graph& x, const Edge& e, int q) {
    if (q < 2) throw InvalidParameter("cliques_through: q must be at least 2");
    if (q == 2) return 1;
    std::int64_t count = 0;
    for_each_clique_in(x, common_x_neighbors(x, e), q - 2, [&](const std::vector<Vertex>&) { ++count; });
    return count;
}

ReservoirResult select_reservoir(const Graph& g, int q, double p, std::uint64_t seed, double eps, int retry_cap) {
    if (q < 3) throw InvalidParameter("select_reservoir: q must be at least 3");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("select_reservoir: p must lie in [0, 1]");
    if (!(eps >= 0.0)) throw InvalidParameter("select_reservoir: eps must be non-negative");
    if (retry_cap < 1) throw InvalidParameter("select_reservoir: retry cap must be positive");
    const int n = g.num_vertices();
    const double degree_cap = 2.0 * p * n;
    const double threshold = eps * std::pow(p, q * (q - 1) / 2 - 1) * std::pow(static_cast<double>(n), q - 2);
    Rng rng(seed);
    std::string last_failure;
    for (int attempt = 1; attempt <= retry_cap; ++attempt) {
        std::vector<Edge> chosen;
        for (const Edge& e : g.edges())
            if (rng.bernoulli(p)) chosen.push_back(e);
        Graph x(n, chosen);
        ReservoirResult r{x, attempt, x.max_degree(), 0, threshold};
        if (r.max_degree > degree_cap) {
            last_failure = "max degree " + std::to_string(r.max_degree) + " > 2pn = " + fmt(degree_cap);
            continue;
        }
        bool first = true;
        Edge worst;
        for (const Edge& e : g.edges()) {
            if (x.has_edge(e)) continue;
            const std::int64_t c = cliques_through(x, e, q);
            if (first || c < r.min_clique_count) {
                r.min_clique_count = c;
                worst = e;
                first = false;
            }
        }
        if (!first && static_cast<double>(r.min_clique_count) < threshold) {
            last_failure = "edge " + to_string(worst) + " lies in " + std::to_string(r.min_clique_count) +
                           " cliques of X + e, below " + fmt(threshold);
            continue;
        }
        return r;
    }
    throw RetryExhausted("select_reservoir: " + std::to_string(retry_cap) + " draws failed; last: " + last_failure);
}

RegularizeResult regularize_design(const DesignHypergraph& design, double tol, std::uint64_t seed, int retry_cap) {
    if (!(tol >= 0.0)) throw InvalidParameter("regularize_design: tol must be non-negative");
    if (retry_cap < 1) throw InvalidParameter("regularize_design: retry cap must be positive");
    const int n = design.host.num_vertices();
    const double reference = static_cast<double>(binomial(n - 2, design.q - 2));
    const auto& edges = design.hypergraph.edges;
    Rng rng(seed);
    double best = std::numeric_limits<double>::infinity();
    for (int attempt = 1; attempt <= retry_cap; ++attempt) {
        RegularizeResult r;
        r.attempts = attempt;
        r.reference_degree = reference;
        std::vector<int> degree(static_cast<std::size_t>(design.hypergraph.num_vertices), 0);
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (!rng.bernoulli(0.5)) continue;
            r.kept.push_back(static_cast<int>(i));
            for (int v : edges[i]) ++degree[static_cast<std::size_t>(v)];
        }
        for (int d : degree) r.worst_deviation = std::max(r.worst_deviation, std::abs(d / reference - 0.5));
        if (r.worst_deviation <= tol) return r;
        best = std::min(best, r.worst_deviation);
    }
    throw RetryExhausted("regularize_design: no draw within tolerance " + fmt(tol) + " after " +
                         std::to_string(retry_cap) + " attempts; best worst deviation " + fmt(best));
}

// ---------------------------------------------------------------------------

std::vector<int> BipartiteHypergraph::a_vertices() const {
    std::vector<int> out;
    for (std::size_t v = 0; v < in_a.size(); ++v)
        if (in_a[v]) out.push_back(static_cast<int>(v));
    return out;
}

BipartiteHypergraph make_bipartite(Hypergraph h, const std::vector<int>& a_vertices) {
    check_simple(h, "make_bipartite");
    BipartiteHypergraph out;
    out.in_a.assign(static_cast<std::size_t>(h.num_vertices), 0);
    for (int a : a_vertices) {
        if (a < 0 || a >= h.num_vertices) throw InvalidParameter("make_bipartite: A vertex out of range");
        out.in_a[static_cast<std::size_t>(a)] = 1;
    }
    for (std::size_t i = 0; i < h.edges.size(); ++i) {
        int hits = 0;
        for (int v : h.edges[i]) hits += out.in_a[static_cast<std::size_t>(v)];
        if (hits != 1)
            throw InvalidParameter("make_bipartite: hyperedge " + std::to_string(i) + " meets A in " +
                                   std::to_string(hits) + " vertices");
    }
    out.graph = std::move(h);
    return out;
}

ReservePolicy parse_reserve_policy(const std::string& s) {
    if (s == "greedy") return ReservePolicy::Greedy;
    if (s == "matching") return ReservePolicy::Matching;
    throw InvalidParameter("unknown reserve policy '" + s + "' (expected greedy or matching)");
}

std::string to_string(ReservePolicy p) {
    return p == ReservePolicy::Greedy ? "greedy" : "matching";
}

void validate(const NibbleParams& p) {
    if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw InvalidParameter("nibble: gamma must lie in (0, 1)");
    if (!(p.bite > 0.0 && p.bite < 1.0)) throw InvalidParameter("nibble: bite must lie in (0, 1)");
    if (!(p.D > 0.0)) throw InvalidParameter("nibble: D must be positive");
    if (p.max_rounds < 0) throw InvalidParameter("nibble: max_rounds must be non-negative");
    if (!(p.rate_floor >= 0.0)) throw InvalidParameter("nibble: rate floor must be non-negative");
}

NibbleResult nibble_with_reserves(const Hypergraph& g1, const BipartiteHypergraph& g2, const NibbleParams& params,
                                  std::uint64_t seed) {
    validate(params);
    check_simple(g1, "nibble G1");
    check_simple(g2.graph, "nibble G2");
    const int n = std::max(g1.num_vertices, g2.graph.num_vertices);
    std::vector<char> in_a(static_cast<std::size_t>(n), 0);
    std::copy(g2.in_a.begin(), g2.in_a.end(), in_a.begin());
    std::vector<char> in_b(static_cast<std::size_t>(n), 0);
    for (const auto& e : g2.graph.edges)
        for (int v : e)
            if (!in_a[static_cast<std::size_t>(v)]) in_b[static_cast<std::size_t>(v)] = 1;
    for (std::size_t i = 0; i < g1.edges.size(); ++i)
        for (int v : g1.edges[i])
            if (in_b[static_cast<std::size_t>(v)])
                throw InvalidParameter("nibble: G1 hyperedge " + std::to_string(i) + " touches reserve vertex " +
                                       std::to_string(v));

    Rng rng(seed);
    NibbleResult out;
    std::vector<char> covered(static_cast<std::size_t>(n), 0);
    int stagnant = 0;
    while (out.rounds < params.max_rounds) {
        std::vector<int> bite;
        bool any_live = false;
        for (std::size_t i = 0; i < g1.edges.size(); ++i) {
            if (!free_edge(g1.edges[i], covered)) continue;
            any_live = true;
            if (rng.bernoulli(params.bite)) bite.push_back(static_cast<int>(i));
        }
        if (!any_live) break;
        ++out.rounds;
        rng.shuffle(bite);
        int added = 0;
        for (int i : bite) {
            const auto& e = g1.edges[static_cast<std::size_t>(i)];
            if (!free_edge(e, covered)) continue;
            cover(e, covered);
            out.edges.push_back({1, i});
            ++added;
        }
        stagnant = added ? 0 : stagnant + 1;
        if (stagnant >= 2) break;
    }

    const std::vector<int> a = g2.a_vertices();
    std::vector<int> open;
    for (int v : a)
        if (!covered[static_cast<std::size_t>(v)]) open.push_back(v);
    out.leave_fraction = a.empty() ? 0.0 : static_cast<double>(open.size()) / static_cast<double>(a.size());

    const auto inc2 = incidence(g2.graph, n);
    if (params.reserve_policy == ReservePolicy::Greedy) {
        for (int v : open) {
            std::vector<int> options = inc2[static_cast<std::size_t>(v)];
            rng.shuffle(options);
            for (int idx : options) {
                const auto& e = g2.graph.edges[static_cast<std::size_t>(idx)];
                if (!free_edge(e, covered)) continue;
                cover(e, covered);
                out.edges.push_back({2, idx});
                ++out.reserve_used;
                break;
            }
        }
    } else {
        for (const auto& e : g2.graph.edges)
            if (e.size() != 2)
                throw InvalidParameter("nibble: the matching reserve policy needs a graph reserve (edges of size 2)");
        // Only edges between open A-vertices and uncovered B-vertices are usable.
        std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
        for (int v : open)
            for (int idx : inc2[static_cast<std::size_t>(v)])
                if (free_edge(g2.graph.edges[static_cast<std::size_t>(idx)], covered))
                    adj[static_cast<std::size_t>(v)].push_back(idx);
        std::vector<int> match_b(static_cast<std::size_t>(n), -1);
        std::vector<int> via(static_cast<std::size_t>(n), -1);
        for (int v : open) {
            std::vector<char> seen(static_cast<std::size_t>(n), 0);
            augment(v, adj, match_b, seen, g2.graph, via);
        }
        for (std::size_t b = 0; b < match_b.size(); ++b) {
            const int v = match_b[b];
            if (v < 0) continue;
            const int idx = via[static_cast<std::size_t>(v)];
            cover(g2.graph.edges[static_cast<std::size_t>(idx)], covered);
            out.edges.push_back({2, idx});
            ++out.reserve_used;
        }
    }
    for (int v : a)
        if (!covered[static_cast<std::size_t>(v)]) out.uncovered_a.push_back(v);
    out.a_perfect = out.uncovered_a.empty();
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

Verdict verify_matching(const Hypergraph& g1, const BipartiteHypergraph& g2, const NibbleResult& result) {
    const int n = std::max(g1.num_vertices, g2.graph.num_vertices);
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    for (std::size_t k = 0; k < result.edges.size(); ++k) {
        const MatchedEdge& m = result.edges[k];
        const Hypergraph& h = m.part == 1 ? g1 : g2.graph;
        if (m.part != 1 && m.part != 2) return Verdict::fail("matched edge has part " + std::to_string(m.part));
        if (m.index < 0 || static_cast<std::size_t>(m.index) >= h.edges.size())
            return Verdict::fail("matched edge index out of range");
        for (int v : h.edges[static_cast<std::size_t>(m.index)]) {
            if (owner[static_cast<std::size_t>(v)] >= 0)
                return Verdict::fail("vertex " + std::to_string(v) + " covered twice");
            owner[static_cast<std::size_t>(v)] = static_cast<int>(k);
        }
    }
    bool perfect = true;
    for (int a : g2.a_vertices()) perfect = perfect && owner[static_cast<std::size_t>(a)] >= 0;
    if (perfect != result.a_perfect) return Verdict::fail("a_perfect flag disagrees with the matching");
    return Verdict::pass();
}

// ---------------------------------------------------------------------------

namespace {

struct Thresholds {
    double codegree, b_degree, g1_degree, a_g1, a_g2;
};

Thresholds resolve(const NibbleParams& p, double rate) {
    const double mu = rate * p.D;
    const double log_d = std::log(std::max(p.D, 1.0));
    const double upper = mu + std::pow(mu, p.upper_exponent);
    Thresholds t;
    // Codegree 1 is forced inside any single hyperedge, so the bound never drops below it.
    t.codegree = p.thresholds.codegree.value_or(std::max(1.0, log_d * log_d));
    t.b_degree = p.thresholds.b_degree.value_or(upper);
    t.g1_degree = p.thresholds.g1_degree.value_or(upper);
    t.a_g1 = p.thresholds.a_degree_g1.value_or(mu > 0 ? mu * (1.0 - std::pow(mu, -p.lower_exponent)) : 0.0);
    t.a_g2 = p.thresholds.a_degree_g2.value_or(
        std::max(1.0, mu * std::pow(p.D, -p.alpha) - std::pow(mu, p.upper_exponent)));
    return t;
}

// Support of a bad event: (part, edge index) pairs to redraw.
using Support = std::vector<std::pair<int, int>>;

class Sparsifier {
public:
    Sparsifier(const Hypergraph& g1, const BipartiteHypergraph& g2, const Thresholds& t)
        : g1_(g1), g2_(g2), t_(t), n_(std::max(g1.num_vertices, g2.graph.num_vertices)),
          inc1_(incidence(g1, n_)), inc2_(incidence(g2.graph, n_)) {
        in_b_.assign(static_cast<std::size_t>(n_), 0);
        for (const auto& e : g2.graph.edges)
            for (int v : e)
                if (!g2.is_a(v)) in_b_[static_cast<std::size_t>(v)] = 1;
    }

    // First violated event in the fixed family order, or nullopt.
    std::optional<std::pair<std::string, Support>> first_bad(const std::vector<char>& k1,
                                                             const std::vector<char>& k2) const {
        std::vector<int> d1(static_cast<std::size_t>(n_), 0), d2(static_cast<std::size_t>(n_), 0);
        std::map<std::pair<int, int>, int> codeg;
        auto tally = [&](const Hypergraph& h, const std::vector<char>& kept, std::vector<int>& deg) {
            for (std::size_t i = 0; i < h.edges.size(); ++i) {
                if (!kept[i]) continue;
                const auto& e = h.edges[i];
                for (std::size_t x = 0; x < e.size(); ++x) {
                    ++deg[static_cast<std::size_t>(e[x])];
                    for (std::size_t y = x + 1; y < e.size(); ++y) ++codeg[{e[x], e[y]}];
                }
            }
        };
        tally(g1_, k1, d1);
        tally(g2_.graph, k2, d2);

        for (const auto& [pair, c] : codeg) {
            if (c <= t_.codegree) continue;
            Support s;
            for (int i : inc1_[static_cast<std::size_t>(pair.first)])
                if (contains(g1_.edges[static_cast<std::size_t>(i)], pair.second)) s.push_back({1, i});
            for (int i : inc2_[static_cast<std::size_t>(pair.first)])
                if (contains(g2_.graph.edges[static_cast<std::size_t>(i)], pair.second)) s.push_back({2, i});
            return std::make_pair("codegree of {" + std::to_string(pair.first) + "," + std::to_string(pair.second) +
                                      "} is " + std::to_string(c),
                                  s);
        }
        for (int v = 0; v < n_; ++v)
            if (in_b_[static_cast<std::size_t>(v)] && d2[static_cast<std::size_t>(v)] > t_.b_degree)
                return std::make_pair("reserve degree of B-vertex " + std::to_string(v), part(2, v));
        for (int v = 0; v < n_; ++v)
            if (d1[static_cast<std::size_t>(v)] > t_.g1_degree)
                return std::make_pair("G1 degree of vertex " + std::to_string(v), part(1, v));
        for (int v = 0; v < n_; ++v) {
            if (!is_a(v) || inc1_[static_cast<std::size_t>(v)].empty()) continue;
            if (d1[static_cast<std::size_t>(v)] < std::min(t_.a_g1, full1(v)))
                return std::make_pair("G1 degree of A-vertex " + std::to_string(v) + " too low", part(1, v));
        }
        for (int v = 0; v < n_; ++v) {
            if (!is_a(v) || inc2_[static_cast<std::size_t>(v)].empty()) continue;
            if (d2[static_cast<std::size_t>(v)] < std::min(t_.a_g2, full2(v)))
                return std::make_pair("reserve degree of A-vertex " + std::to_string(v) + " too low", part(2, v));
        }
        return std::nullopt;
    }

private:
    // A lower bound above the unsparsified degree can never be met by resampling.
    double full1(int v) const { return static_cast<double>(inc1_[static_cast<std::size_t>(v)].size()); }
    double full2(int v) const { return static_cast<double>(inc2_[static_cast<std::size_t>(v)].size()); }
    static bool contains(const std::vector<int>& e, int v) { return std::binary_search(e.begin(), e.end(), v); }
    bool is_a(int v) const {
        return static_cast<std::size_t>(v) < g2_.in_a.size() && g2_.in_a[static_cast<std::size_t>(v)];
    }
    Support part(int which, int v) const {
        Support s;
        for (int i : (which == 1 ? inc1_ : inc2_)[static_cast<std::size_t>(v)]) s.push_back({which, i});
        return s;
    }

    const Hypergraph& g1_;
    const BipartiteHypergraph& g2_;
    Thresholds t_;
    int n_;
    std::vector<std::vector<int>> inc1_, inc2_;
    std::vector<char> in_b_;
};

}  // namespace

SpreadNibbleResult spread_nibble(const Hypergraph& g1, const BipartiteHypergraph& g2, const NibbleParams& params,
                                 std::uint64_t seed) {
    validate(params);
    SpreadNibbleResult out;
    SparsifyReport& sp = out.sparsify;
    sp.formula_rate = std::pow(params.D, params.gamma / 2.0 - 1.0);
    sp.rate = std::min(1.0, std::max(sp.formula_rate, params.rate_floor));
    sp.kept1.assign(g1.edges.size(), 1);
    sp.kept2.assign(g2.graph.edges.size(), 1);
    if (sp.rate >= 1.0) {
        out.matching = nibble_with_reserves(g1, g2, params, seed);
        return out;
    }

    Rng rng(derive_seed(seed, "sparsify"));
    for (auto& k : sp.kept1) k = rng.bernoulli(sp.rate);
    for (auto& k : sp.kept2) k = rng.bernoulli(sp.rate);
    const Sparsifier sparsifier(g1, g2, resolve(params, sp.rate));
    while (auto bad = sparsifier.first_bad(sp.kept1, sp.kept2)) {
        sp.last_event = bad->first;
        if (sp.resamples >= params.resample_cap) {
            out.sparsify_failed = true;
            out.failure = "sparsification-retry-exhausted: " + bad->first;
            out.matching.uncovered_a = g2.a_vertices();
            return out;
        }
        ++sp.resamples;
        for (const auto& [which, idx] : bad->second)
            (which == 1 ? sp.kept1 : sp.kept2)[static_cast<std::size_t>(idx)] = rng.bernoulli(sp.rate);
    }

    Hypergraph s1{g1.num_vertices, {}};
    std::vector<int> map1, map2;
    for (std::size_t i = 0; i < g1.edges.size(); ++i)
        if (sp.kept1[i]) {
            s1.edges.push_back(g1.edges[i]);
            map1.push_back(static_cast<int>(i));
        }
    BipartiteHypergraph s2{Hypergraph{g2.graph.num_vertices, {}}, g2.in_a};
    for (std::size_t i = 0; i < g2.graph.edges.size(); ++i)
        if (sp.kept2[i]) {
            s2.graph.edges.push_back(g2.graph.edges[i]);
            map2.push_back(static_cast<int>(i));
        }
    out.matching = nibble_with_reserves(s1, s2, params, derive_seed(seed, "nibble"));
    for (MatchedEdge& m : out.matching.edges) {
        m.index = (m.part == 1 ? map1 : map2)[static_cast<std::size_t>(m.index)];
        const auto& kept = m.part == 1 ? sp.kept1 : sp.kept2;
        if (!kept[static_cast<std::size_t>(m.index)])
            throw Error("spread_nibble: selected hyperedge outside the sparsified hypergraph");
    }
    std::sort(out.matching.edges.begin(), out.matching.edges.end());
    return out;
}

// ---------------------------------------------------------------------------

ReserveInstance build_reserve_instance(const Graph& host, const Graph& reserve, const Graph& absorber, int q,
                                       std::optional<std::vector<Clique>> main_cliques) {
    if (q < 3) throw InvalidParameter("build_reserve_instance: q must be at least 3");
    const int n = host.num_vertices();
    const Graph x = reserve.with_vertex_count(n);
    const Graph a = absorber.with_vertex_count(n);
    if (!x.is_subgraph_of(host) || !a.is_subgraph_of(host))
        throw InvalidParameter("build_reserve_instance: X and A must be subgraphs of the host");
    if (!x.edge_disjoint(a)) throw InvalidParameter("build_reserve_instance: X and A share an edge");

    ReserveInstance inst;
    inst.q = q;
    inst.host = host;
    inst.reserve = x;
    inst.absorber = a;
    inst.remainder = host.minus(x).minus(a);
    const Graph& j = inst.remainder;
    inst.j_count = static_cast<int>(j.num_edges());
    inst.vertex_edges = j.edges();
    inst.vertex_edges.insert(inst.vertex_edges.end(), x.edges().begin(), x.edges().end());
    const int total = inst.j_count + static_cast<int>(x.num_edges());

    auto vertex_of = [&](const Edge& e) {
        const int jj = j.edge_index(e);
        if (jj >= 0) return jj;
        const int xx = x.edge_index(e);
        if (xx >= 0) return inst.j_count + xx;
        throw InvalidParameter("build_reserve_instance: clique edge " + to_string(e) + " outside J and X");
    };
    auto hyperedge = [&](const Clique& c) {
        std::vector<int> h;
        for (const Edge& e : c.edges()) h.push_back(vertex_of(e));
        std::sort(h.begin(), h.end());
        return h;
    };

    inst.g1_cliques = main_cliques ? canonical(*main_cliques) : list_cliques(j, q);
    inst.g1.num_vertices = total;
    for (const Clique& c : inst.g1_cliques) {
        if (c.size() != q) throw InvalidParameter("build_reserve_instance: main clique of the wrong size");
        for (const Edge& e : c.edges())
            if (!j.has_edge(e)) throw InvalidParameter("build_reserve_instance: main clique leaves J at " + to_string(e));
        inst.g1.edges.push_back(hyperedge(c));
    }

    Hypergraph h2{total, {}};
    for (const Edge& e : j.edges()) {
        for_each_clique_in(x, common_x_neighbors(x, e), q - 2, [&](const std::vector<Vertex>& rest) {
            std::vector<Vertex> vs = rest;
            vs.push_back(e.u);
            vs.push_back(e.v);
            Clique c(vs);
            h2.edges.push_back(hyperedge(c));
            inst.g2_cliques.push_back(std::move(c));
        });
    }
    std::vector<int> a_ids(static_cast<std::size_t>(inst.j_count));
    for (int i = 0; i < inst.j_count; ++i) a_ids[static_cast<std::size_t>(i)] = i;
    inst.g2 = make_bipartite(std::move(h2), a_ids);
    return inst;
}

Packing matching_to_packing(const ReserveInstance& inst, const NibbleResult& result) {
    Packing out;
    for (const MatchedEdge& m : result.edges)
        out.push_back((m.part == 1 ? inst.g1_cliques : inst.g2_cliques)[static_cast<std::size_t>(m.index)]);
    return canonical(std::move(out));
}

}  // namespace dforge
