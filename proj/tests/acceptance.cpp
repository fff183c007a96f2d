// Acceptance suite: one PASS/FAIL line per criterion with its runtime and limit.
// Exit status is the number of failing criteria.

#include "dforge/absorber.hpp"
#include "dforge/booster.hpp"
#include "dforge/embed.hpp"
#include "dforge/error.hpp"
#include "dforge/exact_cover.hpp"
#include "dforge/experiment.hpp"
#include "dforge/lll.hpp"
#include "dforge/nibble.hpp"
#include "dforge/pipeline.hpp"
#include "dforge/random.hpp"
#include "dforge/spread.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace dforge;

namespace {

// Collects failed conditions; the first few are reported on the criterion line.
struct Ledger {
    std::vector<std::string> failures;
    std::ostringstream note;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

struct Criterion {
    int id;
    std::string name;
    double limit_s;
    std::function<void(Ledger&)> body;
};

Packing without(Packing p, const Clique& c) {
    std::erase(p, c);
    return p;
}

std::vector<Vertex> vertex_union(const Clique& a, const Clique& b) {
    std::set<Vertex> s(a.vertices().begin(), a.vertices().end());
    s.insert(b.vertices().begin(), b.vertices().end());
    return {s.begin(), s.end()};
}

LllEvent all_zero(std::vector<int> support) {
    return {support, [support](const std::vector<int>& a) {
                for (int s : support)
                    if (a[static_cast<std::size_t>(s)] != 0) return false;
                return true;
            }};
}

void booster_certification(Ledger& l) {
    for (int q = 3; q <= 8; ++q) {
        const std::string tag = "q=" + std::to_string(q) + ": ";
        const RootedBooster rb = layer_boosters(q);
        const BoosterReport report = verify_rooted_booster(rb);
        for (const Check& c : report.checks) l.require(c.passed, tag + c.name + " " + c.detail);
        const Density m = booster_rooted_density(rb);
        l.require(Density::of(make_rational(2, q)) <= m, tag + "density " + to_string(m) + " below 2/q");
        l.require(m <= Density::of(make_rational(2, q - 2)), tag + "density " + to_string(m) + " above 2/(q-2)");
        l.note << to_string(m) << (q < 8 ? " " : "");
    }
}

void base_construction(Ledger& l) {
    for (int q = 3; q <= 8; ++q) {
        const std::string tag = "q=" + std::to_string(q) + ": ";
        const TwoCliqueBooster b = base_booster(q);
        l.require(verify_decomposition(b.graph, b.decomp1, q).ok, tag + "decomp1");
        l.require(verify_decomposition(b.graph, b.decomp2, q).ok, tag + "decomp2");
        const Density bound = Density::of(make_rational(2, q - 2));
        l.require(max_rooted_density(without(b.decomp1, b.s1), b.s1.vertices()) <= bound, tag + "off bound");
        l.require(max_rooted_density(without(b.decomp2, b.s2), vertex_union(b.s1, b.s2)) <= bound, tag + "on bound");
    }
    const TwoCliqueBooster b3 = base_booster(3);
    const Density m3 = max_rooted_density(without(b3.decomp1, b3.s1), b3.s1.vertices());
    l.require(m3 == Density::of(1), "q=3 density " + to_string(m3) + " != 1");
    l.note << "q=3 m=" << to_string(m3);
}

void design_regularity(Ledger& l) {
    int cases = 0;
    for (int n = 3; n <= 12; ++n)
        for (int q = 3; q <= 4; ++q) {
            if (q > n) continue;
            ++cases;
            const std::string tag = "n=" + std::to_string(n) + " q=" + std::to_string(q) + ": ";
            const DesignHypergraph d = design_hypergraph(Graph::complete(n), q);
            for (int deg : d.hypergraph.degrees())
                l.require(deg == binomial(n - 2, q - 2), tag + "degree " + std::to_string(deg));
            l.require(d.hypergraph.max_codegree() <= binomial(n - 3, q - 3), tag + "codegree");
        }
    l.note << cases << " (n,q) cases";
}

void exact_enumeration(Ledger& l) {
    const CoverInstance k7 = CoverInstance::all_cliques(Graph::complete(7), 3);
    const std::size_t n7 = enumerate_decompositions(k7, 100000).decompositions.size();
    l.require(n7 == 30, "K7 count " + std::to_string(n7));
    for (const Clique& t : k7.candidates) {
        const std::uint64_t ext = count_extensions(k7, {t});
        l.require(ext == 6, "extensions of " + to_string(t) + " = " + std::to_string(ext));
    }
    const CoverInstance k9 = CoverInstance::all_cliques(Graph::complete(9), 3);
    const std::size_t n9 = enumerate_decompositions(k9, 100000).decompositions.size();
    l.require(n9 == 840, "K9 count " + std::to_string(n9));
    l.note << "K7 " << n7 << ", K9 " << n9;
}

void exact_spread_sts7(Ledger& l) {
    const auto all = enumerate_decompositions(CoverInstance::all_cliques(Graph::complete(7), 3), 1000).decompositions;
    const SpreadReport r = exact_spread(ExplicitDistribution::uniform(all), 1);
    l.require(r.mode == SpreadMode::Exact, "mode not exact");
    l.require(r.sigma_singleton_exact == make_rational(1, 5), "sigma " + to_string(r.sigma_singleton_exact));
    l.require(check_sigma_spread(r, make_rational(1, 5)), "check fails at 1/5");
    l.require(!check_sigma_spread(r, make_rational(1, 6)), "check passes at 1/6");
    l.note << "sigma=" << to_string(r.sigma_singleton_exact);
}

void absorber_round_trip(Ledger& l) {
    const OmniAbsorber base = brute_force_absorber(Graph(9, {{0, 1}, {0, 2}, {1, 2}}), 3, 9);
    const AbsorberReport r0 = verify_omni_absorber(base);
    l.require(r0.ok(), "base absorber fails verification");
    l.require(r0.divisible_count == 2, "divisible L count " + std::to_string(r0.divisible_count));
    const EmbeddedBoosters eb = embed_boosters(base, layer_boosters(3), 300, 24, 5);
    const OmniAbsorber boosted = boost_absorber(base, eb.boosters);
    const AbsorberReport r = verify_omni_absorber(boosted);
    for (const Check& c : r.checks) l.require(c.passed, c.name + " " + c.detail);
    l.require(boosted.qmap.size() == 2, "boosted qmap size " + std::to_string(boosted.qmap.size()));
    for (const auto& [key, image] : boosted.qmap)
        for (const Clique& h : base.family)
            l.require(!std::binary_search(image.begin(), image.end(), h), "root " + to_string(h) + " in qmap image");
    l.note << "|A|=" << base.A.num_edges() << " -> " << boosted.A.num_edges() << ", roots=" << base.family.size()
           << ", resamples=" << eb.embedding.resamples;
}

void conditional_lll(Ledger& l) {
    const std::vector<FiniteVariable> coins(4, FiniteVariable{{1, 1}});
    const LllReport r = conditional_lll_check(coins, {all_zero({0, 1}), all_zero({2, 3})}, all_zero({0}));
    l.require(r.conditional == make_rational(1, 3), "conditional " + to_string(r.conditional));
    l.require(std::abs(r.bound - 0.5 * std::exp(1.5)) < 1e-12, "bound " + std::to_string(r.bound));
    l.require(r.bound_holds, "coin bound fails");

    Rng rng(2024);
    int checked = 0;
    for (int attempt = 0; checked < 10 && attempt < 1000; ++attempt) {
        const int nv = 4 + static_cast<int>(rng.below(4));
        std::vector<FiniteVariable> vars;
        for (int i = 0; i < nv; ++i) {
            FiniteVariable v;
            const int k = 2 + static_cast<int>(rng.below(3));
            for (int j = 0; j < k; ++j) v.weights.push_back(1 + rng.below(j == 0 ? 2 : 8));
            vars.push_back(v);
        }
        std::vector<int> all(static_cast<std::size_t>(nv));
        for (int i = 0; i < nv; ++i) all[static_cast<std::size_t>(i)] = i;
        std::vector<LllEvent> events;
        const int ne = 1 + static_cast<int>(rng.below(4));
        for (int e = 0; e < ne; ++e) events.push_back(all_zero(rng.sample(all, 2)));
        const LllReport f = conditional_lll_check(vars, events, all_zero(rng.sample(all, 1 + rng.below(2))));
        if (!f.hypothesis_holds) continue;
        ++checked;
        l.require(f.bound_holds, "random fixture " + std::to_string(attempt) + " violates the bound");
    }
    l.require(checked == 10, "only " + std::to_string(checked) + " fixtures satisfy the hypothesis");
    l.note << "conditional=" << to_string(r.conditional) << ", " << checked << " random fixtures";
}

void embedding_postconditions(Ledger& l) {
    EmbeddingProblem p;
    p.host = Graph::complete(30);
    p.roots = {{0, 1, 2}, {3, 4, 5}};
    p.b = 2;
    p.C = 10;
    const int cap = p.C * p.max_root_degree();
    int good = 0;
    std::uint64_t resamples = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const Embedding e = sample_embedding(p, seed);
        resamples += e.resamples;
        std::set<Edge> used;
        std::vector<int> degree(30, 0);
        bool ok = e.parts.size() == p.roots.size();
        for (const PartialClique& part : e.parts) {
            ok = ok && part.extension.size() == static_cast<std::size_t>(p.b);
            for (const Edge& edge : part.edges()) {
                ok = ok && used.insert(edge).second && p.host.has_edge(edge.u, edge.v);
                ++degree[static_cast<std::size_t>(edge.u)];
                ++degree[static_cast<std::size_t>(edge.v)];
            }
        }
        ok = ok && *std::max_element(degree.begin(), degree.end()) <= cap;
        good += ok;
        if (!ok) l.require(false, "seed " + std::to_string(seed));
    }
    l.note << good << "/1000 runs, mean resamples " << static_cast<double>(resamples) / 1000.0;
}

// Fano plane on K_7: three lines split between J and the reserve.
ReserveInstance fano_instance() {
    const Packing fano = {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}};
    std::vector<Edge> x;
    for (std::size_t i = 4; i < 7; ++i) {
        const auto edges = fano[i].edges();
        x.push_back(edges[1]);
        x.push_back(edges[2]);
    }
    return build_reserve_instance(Graph::complete(7), Graph(7, x), Graph(7), 3);
}

// Disjointness and coverage of J, recomputed from the matched hyperedges.
bool matching_sound(const ReserveInstance& inst, const NibbleResult& r) {
    std::set<int> used;
    for (const MatchedEdge& m : r.edges) {
        const auto& e = (m.part == 1 ? inst.g1 : inst.g2.graph).edges[static_cast<std::size_t>(m.index)];
        for (int v : e)
            if (!used.insert(v).second) return false;
    }
    int uncovered = 0;
    for (int a : inst.g2.a_vertices()) uncovered += !used.count(a);
    if (r.a_perfect != (uncovered == 0)) return false;
    if (!verify_matching(inst.g1, inst.g2, r).ok) return false;
    const Packing packing = matching_to_packing(inst, r);
    if (!verify_packing(inst.host.minus(inst.absorber), packing, 3).ok) return false;
    if (!r.a_perfect) return true;
    std::set<Edge> covered;
    for (const Clique& c : packing)
        for (const Edge& e : c.edges()) covered.insert(e);
    for (const Edge& e : inst.remainder.edges())
        if (!covered.count(e)) return false;
    return true;
}

void nibble_validity(Ledger& l) {
    const ReserveInstance fano = fano_instance();
    const Graph k15 = Graph::complete(15);
    NibbleParams sparse;
    sparse.gamma = 0.6;
    sparse.D = 13.0;
    sparse.rate_floor = 0.6;
    int runs = 0, perfect = 0, spread_runs = 0, spread_done = 0;
    for (std::uint64_t s = 0; s < 100; ++s) {
        const NibbleResult r = nibble_with_reserves(fano.g1, fano.g2, NibbleParams{}, s);
        ++runs;
        perfect += r.a_perfect;
        l.require(matching_sound(fano, r), "nibble seed " + std::to_string(s));

        const Graph x = select_reservoir(k15, 3, 0.3, derive_seed(s, "reservoir"), 0.0).reserve;
        const ReserveInstance big = build_reserve_instance(k15, x, Graph(15), 3);
        const SpreadNibbleResult sn = spread_nibble(big.g1, big.g2, sparse, s);
        ++runs;
        ++spread_runs;
        if (sn.sparsify_failed) {
            l.require(sn.failure.rfind("sparsification-retry-exhausted", 0) == 0, "unexpected failure " + sn.failure);
            continue;
        }
        ++spread_done;
        perfect += sn.matching.a_perfect;
        l.require(matching_sound(big, sn.matching), "spread nibble seed " + std::to_string(s));
        for (const MatchedEdge& m : sn.matching.edges)
            l.require((m.part == 1 ? sn.sparsify.kept1 : sn.sparsify.kept2)[static_cast<std::size_t>(m.index)],
                      "spread nibble seed " + std::to_string(s) + " used a thinned edge");
    }
    l.require(spread_done > 0, "no spread nibble run passed sparsification");
    l.note << runs << " runs, " << spread_done << "/" << spread_runs << " sparsified, " << perfect << " A-perfect";
}

void end_to_end(Ledger& l) {
    constexpr double recorded = 49.0 / 50.0;
    int ok = 0;
    for (std::uint64_t s = 0; s < 50; ++s) {
        PipelineConfig c = desk_profile();
        c.seed = s;
        const PipelineResult r = end_to_end_pipeline(c);
        if (!r.ok) continue;
        ++ok;
        l.require(verify_decomposition(Graph::complete(9), r.decomposition, 3).ok,
                  "seed " + std::to_string(s) + " returned an invalid decomposition");
    }
    const double rate = ok / 50.0;
    l.require(rate >= 0.5, "rate below one half");
    l.require(std::abs(rate - recorded) <= 0.15, "rate outside recorded 0.98 +- 0.15");
    l.note << ok << "/50 (recorded 49/50)";
}

void threshold_monotonicity(Ledger& l) {
    const std::vector<double> grid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    const ExperimentResult r = run_threshold_experiment(3, {7, 9}, grid, 100, 0, 1);
    l.require(r.rows.size() == 12, "row count " + std::to_string(r.rows.size()));
    l.require(rates_monotone_within_ci(r), "rates not monotone within CI");
    for (const RateRow& row : r.rows) {
        if (row.p == 0.0) l.require(row.rate == 0.0, "n=" + std::to_string(row.n) + " rate at p=0");
        if (row.p == 1.0) l.require(row.rate == 1.0, "n=" + std::to_string(row.n) + " rate at p=1");
        l.note << "n" << row.n << "@" << row.p << "=" << row.rate << " ";
    }
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "booster certification", 60, booster_certification},
        {2, "base construction", 10, base_construction},
        {3, "design hypergraph regularity", 10, design_regularity},
        {4, "exact enumeration oracle", 300, exact_enumeration},
        {5, "exact spread", 60, exact_spread_sts7},
        {6, "omni-absorber round trip", 300, absorber_round_trip},
        {7, "conditional LLL", 60, conditional_lll},
        {8, "embedding postconditions", 120, embedding_postconditions},
        {9, "nibble validity", 300, nibble_validity},
        {10, "end-to-end pipeline", 600, end_to_end},
        {11, "threshold monotonicity", 600, threshold_monotonicity},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        Ledger l;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            c.body(l);
        } catch (const std::exception& e) {
            l.failures.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.limit_s) l.failures.push_back("runtime over limit");
        const bool pass = l.failures.empty();
        failed += !pass;
        std::printf("[%s] %2d %-30s %8.2fs (limit %4.0fs)  %s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    c.limit_s, l.note.str().c_str());
        for (std::size_t i = 0; i < std::min<std::size_t>(l.failures.size(), 5); ++i)
            std::printf("       - %s\n", l.failures[i].c_str());
        if (l.failures.size() > 5) std::printf("       - ... %zu more\n", l.failures.size() - 5);
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
