#include "dforge/embed.hpp"

#include "dforge/error.hpp"
#include "dforge/random.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace dforge {
namespace {

bool sorted_intersects(const std::vector<Vertex>& a, const std::vector<Vertex>& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return true;
        if (*i < *j) ++i;
        else ++j;
    }
    return false;
}

bool is_clique_in(const Graph& g, const std::vector<Vertex>& vs) {
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (!g.has_edge(vs[i], vs[j])) return false;
    return true;
}

// Two partial cliques share an edge iff they share two vertices that are not
// both inside either root.
bool share_edge(const PartialClique& a, const PartialClique& b) {
    const auto va = a.vertices();
    const auto vb = b.vertices();
    std::vector<Vertex> common;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
    for (std::size_t i = 0; i < common.size(); ++i) {
        for (std::size_t j = i + 1; j < common.size(); ++j) {
            const bool in_a = a.root.contains(common[i]) && a.root.contains(common[j]);
            const bool in_b = b.root.contains(common[i]) && b.root.contains(common[j]);
            if (!in_a && !in_b) return true;
        }
    }
    return false;
}

class PartSampler {
public:
    PartSampler(const Graph& host, const Clique& root, int b, std::uint64_t attempts)
        : host_(host), root_(root), b_(b), attempts_(attempts), pool_(common_neighbors(host, root)) {}

    PartialClique draw(Rng& rng) const {
        for (std::uint64_t t = 0; t < attempts_; ++t) {
            std::vector<Vertex> ext = rng.sample(pool_, static_cast<std::size_t>(b_));
            std::sort(ext.begin(), ext.end());
            if (is_clique_in(host_, ext)) return {root_, std::move(ext)};
        }
        throw Nontermination("sample_embedding: no partial clique found at root " + to_string(root_) + " after " +
                             std::to_string(attempts_) + " draws");
    }

private:
    const Graph& host_;
    Clique root_;
    int b_;
    std::uint64_t attempts_;
    std::vector<Vertex> pool_;
};

// Lowest-indexed violated event: all vertex-slot collisions first, then edge
// collisions, each ordered by root pair. Returns the offending pair.
std::optional<std::pair<std::size_t, std::size_t>> first_violation(const std::vector<PartialClique>& parts,
                                                                   const std::vector<int>& slots) {
    const std::size_t k = parts.size();
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (slots[i] == slots[j] && sorted_intersects(parts[i].extension, parts[j].extension))
                return std::make_pair(i, j);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (share_edge(parts[i], parts[j])) return std::make_pair(i, j);
    return std::nullopt;
}

int union_max_degree(const Graph& host, const std::vector<PartialClique>& parts) {
    std::vector<int> degree(static_cast<std::size_t>(host.num_vertices()), 0);
    for (const PartialClique& p : parts)
        for (const Edge& e : p.edges()) {
            ++degree[static_cast<std::size_t>(e.u)];
            ++degree[static_cast<std::size_t>(e.v)];
        }
    return degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
}

}  // namespace

std::vector<Vertex> PartialClique::vertices() const {
    std::vector<Vertex> out;
    std::set_union(root.vertices().begin(), root.vertices().end(), extension.begin(), extension.end(),
                   std::back_inserter(out));
    return out;
}

std::vector<Edge> PartialClique::edges() const {
    std::vector<Edge> out;
    const auto vs = vertices();
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (!(root.contains(vs[i]) && root.contains(vs[j]))) out.emplace_back(vs[i], vs[j]);
    return out;
}

int EmbeddingProblem::q() const {
    return roots.empty() ? 0 : roots.front().size();
}

int EmbeddingProblem::max_root_degree() const {
    std::vector<int> deg(static_cast<std::size_t>(host.num_vertices()), 0);
    for (const Clique& r : roots)
        for (Vertex v : r.vertices()) ++deg[static_cast<std::size_t>(v)];
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

int EmbeddingProblem::slot_count() const {
    return (C * max_root_degree()) / (2 * (q() + b));
}

std::vector<Vertex> common_neighbors(const Graph& host, const Clique& root) {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < host.num_vertices(); ++v) {
        if (root.contains(v)) continue;
        bool all = true;
        for (Vertex r : root.vertices()) all = all && host.has_edge(v, r);
        if (all) out.push_back(v);
    }
    return out;
}

void check_preconditions(const EmbeddingProblem& p) {
    if (p.b < 1) throw InvalidParameter("embedding: b must be at least 1");
    if (p.C < 1) throw InvalidParameter("embedding: C must be at least 1");
    if (p.roots.empty()) return;
    const int q = p.q();
    for (const Clique& r : p.roots) {
        if (r.size() != q) throw InvalidParameter("embedding: roots must all have " + std::to_string(q) + " vertices");
        if (r.vertices().front() < 0 || r.vertices().back() >= p.host.num_vertices())
            throw InvalidParameter("embedding: root " + to_string(r) + " outside the host");
    }
    const int n = p.host.num_vertices();
    const int delta = p.max_root_degree();
    if (static_cast<long long>(delta) * p.C > n)
        throw PreconditionViolation("embedding: max root degree " + std::to_string(delta) + " exceeds n/C = " +
                                    std::to_string(n) + "/" + std::to_string(p.C));
    if (p.C < 2 * (q + p.b))
        throw PreconditionViolation("embedding: C = " + std::to_string(p.C) + " is below 2(q+b) = " +
                                    std::to_string(2 * (q + p.b)) + ", so the degree bound cannot be enforced");
    if (p.slot_count() < 1) throw PreconditionViolation("embedding: slot count floor(C Δ1 / 2(q+b)) is zero");
    for (const Clique& r : p.roots) {
        const auto pool = common_neighbors(p.host, r);
        if (static_cast<int>(pool.size()) < p.b)
            throw PreconditionViolation("embedding: root " + to_string(r) + " has " + std::to_string(pool.size()) +
                                        " common neighbours, needs " + std::to_string(p.b));
    }
}

Embedding sample_embedding(const EmbeddingProblem& problem, std::uint64_t seed, EmbeddingOptions options) {
    check_preconditions(problem);
    Rng rng(seed);
    const int slots = std::max(1, problem.slot_count());
    std::vector<PartSampler> samplers;
    samplers.reserve(problem.roots.size());
    for (const Clique& r : problem.roots) samplers.emplace_back(problem.host, r, problem.b, options.draw_attempts);

    Embedding out;
    for (const PartSampler& s : samplers) {
        out.parts.push_back(s.draw(rng));
        out.slots.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(slots))));
    }
    while (auto bad = first_violation(out.parts, out.slots)) {
        if (++out.resamples > options.resample_cap)
            throw Nontermination("sample_embedding: more than " + std::to_string(options.resample_cap) +
                                 " resamples");
        for (std::size_t i : {bad->first, bad->second}) {
            out.parts[i] = samplers[i].draw(rng);
            out.slots[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(slots)));
        }
    }
    out.max_degree = union_max_degree(problem.host, out.parts);
    check_embedding(problem, out);
    return out;
}

void check_embedding(const EmbeddingProblem& problem, const Embedding& e) {
    if (e.parts.size() != problem.roots.size()) throw Error("embedding: wrong number of parts");
    std::set<Edge> used;
    for (std::size_t i = 0; i < e.parts.size(); ++i) {
        const PartialClique& p = e.parts[i];
        if (p.root != problem.roots[i]) throw Error("embedding: part " + std::to_string(i) + " has the wrong root");
        if (static_cast<int>(p.extension.size()) != problem.b)
            throw Error("embedding: part " + std::to_string(i) + " has the wrong size");
        for (Vertex v : p.extension)
            if (p.root.contains(v)) throw Error("embedding: extension meets root at " + std::to_string(v));
        for (const Edge& edge : p.edges()) {
            if (!problem.host.has_edge(edge))
                throw Error("embedding: part " + std::to_string(i) + " uses non-edge " + to_string(edge));
            if (!used.insert(edge).second) throw Error("embedding: edge " + to_string(edge) + " used twice");
        }
    }
    const int bound = problem.C * problem.max_root_degree();
    const int degree = union_max_degree(problem.host, e.parts);
    if (degree > bound)
        throw Error("embedding: max degree " + std::to_string(degree) + " exceeds C Δ1 = " + std::to_string(bound));
}

EmbeddingSpreadReport embedding_spread_report(const EmbeddingProblem& problem,
                                              const std::map<int, std::vector<Vertex>>& targets,
                                              std::uint64_t trials, std::uint64_t seed, EmbeddingOptions options) {
    EmbeddingSpreadReport report;
    std::size_t total = 0;
    for (const auto& [index, target] : targets) {
        if (index < 0 || static_cast<std::size_t>(index) >= problem.roots.size())
            throw InvalidParameter("embedding_spread_report: target index out of range");
        const Clique& root = problem.roots[static_cast<std::size_t>(index)];
        const std::set<Vertex> distinct(target.begin(), target.end());
        total += distinct.size();
        if (static_cast<int>(distinct.size()) > problem.b) report.exact_zero = true;
        for (Vertex v : distinct)
            if (root.contains(v)) report.exact_zero = true;
    }
    const double n = problem.host.num_vertices();
    report.bound = std::pow(std::pow(3.0 * problem.b, problem.b) / n, static_cast<double>(total));
    if (report.exact_zero) {
        report.ci = {0.0, 0.0};
        return report;
    }
    for (std::uint64_t t = 0; t < trials; ++t) {
        const Embedding e = sample_embedding(problem, derive_seed(seed, "embed-trial", t), options);
        report.resamples += e.resamples;
        report.max_degree = std::max(report.max_degree, e.max_degree);
        bool hit = true;
        for (const auto& [index, target] : targets) {
            const auto& ext = e.parts[static_cast<std::size_t>(index)].extension;
            for (Vertex v : target) hit = hit && std::binary_search(ext.begin(), ext.end(), v);
        }
        report.hits += hit ? 1 : 0;
    }
    report.trials = trials;
    report.estimate = trials ? static_cast<double>(report.hits) / static_cast<double>(trials) : 0.0;
    report.ci = wilson_interval(report.hits, trials);
    return report;
}

}  // namespace dforge
