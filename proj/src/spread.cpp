#include "dforge/spread.hpp"

#include "dforge/error.hpp"
#include "dforge/parallel.hpp"
#include "dforge/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace dforge {
namespace {

std::set<Edge> edges_of(const Packing& p) {
    std::set<Edge> out;
    for (const Clique& c : p)
        for (const Edge& e : c.edges()) out.insert(e);
    return out;
}

void check_probe(const Packing& probe) {
    if (probe.empty()) throw InvalidParameter("spread: empty probe");
    std::set<Edge> seen;
    const int q = probe.front().size();
    for (const Clique& c : probe) {
        if (c.size() != q) throw InvalidParameter("spread: probe " + to_string(c) + " has the wrong size");
        for (const Edge& e : c.edges())
            if (!seen.insert(e).second)
                throw InvalidParameter("spread: probe is not a packing, edge " + to_string(e) + " repeats");
    }
}

bool contains_all(const Packing& sorted_sample, const Packing& probe) {
    for (const Clique& c : probe)
        if (!std::binary_search(sorted_sample.begin(), sorted_sample.end(), c)) return false;
    return true;
}

double root_of(double p, int s) {
    return p <= 0.0 ? 0.0 : std::pow(p, 1.0 / s);
}

}  // namespace

ExplicitDistribution ExplicitDistribution::uniform(std::vector<Packing> support) {
    if (support.empty()) throw InvalidParameter("uniform distribution needs a nonempty support");
    ExplicitDistribution d;
    const auto size = static_cast<std::int64_t>(support.size());
    d.weights.assign(support.size(), make_rational(1, size));
    for (Packing& p : support) d.support.push_back(canonical(std::move(p)));
    return d;
}

ExplicitDistribution ExplicitDistribution::point_mass(Packing decomposition) {
    return {{canonical(std::move(decomposition))}, {Rational(1)}};
}

void validate(const ExplicitDistribution& d) {
    if (d.support.empty()) throw InvalidParameter("distribution: empty support");
    if (d.support.size() != d.weights.size()) throw InvalidParameter("distribution: support and weights differ in size");
    Rational total = 0;
    for (const Rational& w : d.weights) {
        if (w < 0) throw InvalidParameter("distribution: negative weight");
        total += w;
    }
    if (total != 1) throw InvalidParameter("distribution: weights sum to " + to_string(total) + ", not 1");
    const auto reference = edges_of(d.support.front());
    for (std::size_t i = 0; i < d.support.size(); ++i) {
        check_probe(d.support[i]);
        if (edges_of(d.support[i]) != reference)
            throw InvalidParameter("distribution: support member " + std::to_string(i) +
                                   " covers a different edge set");
    }
}

std::string to_string(SpreadMode mode) {
    return mode == SpreadMode::Exact ? "exact" : "empirical";
}

SpreadReport exact_spread(const ExplicitDistribution& dist, int s_max, std::uint64_t work_cap) {
    validate(dist);
    if (s_max < 1) throw InvalidParameter("exact_spread: s_max must be at least 1");
    std::uint64_t work = 0;
    for (const Packing& h : dist.support) {
        std::uint64_t subsets = 0;
        for (int s = 1; s <= s_max; ++s) subsets += static_cast<std::uint64_t>(binomial(static_cast<int>(h.size()), s));
        work += subsets;
        if (work > work_cap)
            throw ResourceError("exact_spread: more than " + std::to_string(work_cap) + " packings to tabulate");
    }

    std::map<Packing, Rational> prob;
    SpreadReport report;
    report.mode = SpreadMode::Exact;
    for (std::size_t i = 0; i < dist.support.size(); ++i) {
        const Packing& h = dist.support[i];
        const Rational& w = dist.weights[i];
        if (w == 0) continue;
        report.expected_size += w * static_cast<long long>(h.size());
        // Every subset of h of size 1..s_max, built in lexicographic index order.
        Packing current;
        auto rec = [&](auto&& self, std::size_t start) -> void {
            if (!current.empty()) prob[current] += w;
            if (static_cast<int>(current.size()) == s_max) return;
            for (std::size_t j = start; j < h.size(); ++j) {
                current.push_back(h[j]);
                self(self, j + 1);
                current.pop_back();
            }
        };
        rec(rec, 0);
    }

    report.per_size.resize(static_cast<std::size_t>(s_max));
    for (int s = 1; s <= s_max; ++s) report.per_size[static_cast<std::size_t>(s - 1)].size = s;
    Rational singleton_sum = 0;
    for (const auto& [packing, p] : prob) {
        const int s = static_cast<int>(packing.size());
        SizeWorst& w = report.per_size[static_cast<std::size_t>(s - 1)];
        ++w.tested;
        if (w.witness.empty() || p > w.exact_probability) {
            w.exact_probability = p;
            w.witness = packing;
        }
        if (s == 1) singleton_sum += p;
        if (s >= 2) {
            for (std::size_t drop = 0; drop < packing.size(); ++drop) {
                Packing smaller = packing;
                smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(drop));
                auto it = prob.find(smaller);
                if (it == prob.end() || p > it->second) report.monotone_holds = false;
            }
        }
    }
    for (SizeWorst& w : report.per_size) {
        w.probability = to_double(w.exact_probability);
        w.upper = w.probability;
        w.ratio = root_of(w.probability, w.size);
    }
    report.sigma_singleton_exact = report.per_size.front().exact_probability;
    report.sigma_singleton = report.per_size.front().probability;
    report.sigma_singleton_upper = report.sigma_singleton;
    report.linearity_holds = singleton_sum == report.expected_size;
    return report;
}

SpreadReport empirical_spread_from_samples(const std::vector<Packing>& samples_in, const std::vector<Packing>& probes) {
    for (const Packing& p : probes) check_probe(p);
    std::vector<Packing> samples;
    samples.reserve(samples_in.size());
    for (const Packing& s : samples_in) samples.push_back(canonical(s));
    const std::uint64_t trials = samples.size();

    SpreadReport report;
    report.mode = SpreadMode::Empirical;
    report.trials = trials;
    report.probes.resize(probes.size());
    parallel_for(probes.size(), [&](std::size_t i) {
        ProbeEstimate& pe = report.probes[i];
        pe.probe = canonical(probes[i]);
        for (const Packing& s : samples) pe.hits += contains_all(s, pe.probe) ? 1 : 0;
        pe.estimate = trials ? static_cast<double>(pe.hits) / static_cast<double>(trials) : 0.0;
        pe.ci = wilson_interval(pe.hits, trials);
    });

    std::size_t s_max = 0;
    for (const ProbeEstimate& pe : report.probes) s_max = std::max(s_max, pe.probe.size());
    report.per_size.resize(s_max);
    for (std::size_t s = 1; s <= s_max; ++s) report.per_size[s - 1].size = static_cast<int>(s);
    for (const ProbeEstimate& pe : report.probes) {
        SizeWorst& w = report.per_size[pe.probe.size() - 1];
        ++w.tested;
        if (w.witness.empty() || pe.estimate > w.probability) {
            w.probability = pe.estimate;
            w.witness = pe.probe;
        }
        w.upper = std::max(w.upper, pe.ci.hi);
    }
    for (SizeWorst& w : report.per_size) w.ratio = root_of(w.probability, w.size);
    if (!report.per_size.empty()) {
        report.sigma_singleton = report.per_size.front().probability;
        report.sigma_singleton_upper = report.per_size.front().upper;
    }
    return report;
}

SpreadReport empirical_spread(const DecompositionSampler& sampler, std::uint64_t trials,
                              const std::vector<Packing>& probes, std::uint64_t seed) {
    for (const Packing& p : probes) check_probe(p);
    std::vector<Packing> samples(trials);
    parallel_for(trials, [&](std::size_t t) { samples[t] = sampler(derive_seed(seed, "spread-trial", t)); });
    return empirical_spread_from_samples(samples, probes);
}

bool check_sigma_spread(const SpreadReport& report, const Rational& sigma) {
    if (report.mode == SpreadMode::Empirical) return check_sigma_spread(report, to_double(sigma));
    for (const SizeWorst& w : report.per_size)
        if (w.exact_probability > pow(sigma, static_cast<unsigned>(w.size))) return false;
    return true;
}

bool check_sigma_spread(const SpreadReport& report, double sigma) {
    for (const SizeWorst& w : report.per_size) {
        const double bound = std::pow(sigma, w.size);
        const double tested = report.mode == SpreadMode::Exact ? w.probability : w.upper;
        if (tested > bound) return false;
    }
    return true;
}

std::vector<Packing> default_probes(const Graph& host, int q, int s_max, std::size_t per_size, std::uint64_t seed) {
    const std::vector<Clique> cliques = list_cliques(host, q);
    std::vector<Packing> out;
    for (const Clique& c : cliques) out.push_back({c});
    Rng rng(seed);
    for (int s = 2; s <= s_max; ++s) {
        std::set<Packing> seen;
        for (std::size_t attempt = 0; attempt < 20 * per_size && seen.size() < per_size; ++attempt) {
            std::vector<Clique> order = cliques;
            rng.shuffle(order);
            Packing p;
            std::set<Edge> used;
            for (const Clique& c : order) {
                const auto es = c.edges();
                if (std::any_of(es.begin(), es.end(), [&](const Edge& e) { return used.count(e) > 0; })) continue;
                p.push_back(c);
                used.insert(es.begin(), es.end());
                if (static_cast<int>(p.size()) == s) break;
            }
            if (static_cast<int>(p.size()) == s) seen.insert(canonical(std::move(p)));
        }
        out.insert(out.end(), seen.begin(), seen.end());
    }
    return out;
}

DecompositionSampler uniform_sampler(std::vector<Packing> support) {
    if (support.empty()) throw InvalidParameter("uniform_sampler: empty support");
    return [support = std::move(support)](std::uint64_t seed) {
        Rng rng(seed);
        return support[rng.below(support.size())];
    };
}

}  // namespace dforge
