#include "dforge/pipeline.hpp"

#include "dforge/absorber.hpp"
#include "dforge/booster.hpp"
#include "dforge/error.hpp"
#include "dforge/exact_cover.hpp"
#include "dforge/parallel.hpp"
#include "dforge/random.hpp"
#include "dforge/rational.hpp"

#include <chrono>
#include <cmath>
#include <set>

namespace dforge {

BoosterChoice parse_booster_choice(const std::string& s) {
    if (s == "none") return BoosterChoice::None;
    if (s == "layered") return BoosterChoice::Layered;
    throw InvalidParameter("unknown booster choice '" + s + "' (expected none or layered)");
}

std::string to_string(BoosterChoice b) {
    return b == BoosterChoice::None ? "none" : "layered";
}

ResolvedConstants resolve_constants(const PipelineConfig& c) {
    ResolvedConstants r;
    const double n = c.n;
    r.formula_C = std::pow(n, 8.0 * c.beta);
    r.formula_p = std::pow(r.formula_C, -2.0) / 2.0;
    r.formula_D = (0.5 + std::pow(n, -(c.q - 2) / 3.0)) * static_cast<double>(binomial(c.n - 2, c.q - 2));
    r.C = c.embed_C.value_or(std::max(1, static_cast<int>(std::ceil(r.formula_C))));
    r.p = c.reservoir_p.value_or(r.formula_p);
    r.D = c.nibble_D.value_or(r.formula_D);
    return r;
}

PipelineConfig desk_profile() {
    PipelineConfig c;
    c.n = 9;
    c.q = 3;
    c.reservoir_p = 0.1;
    c.eps = 0.0;
    c.booster = BoosterChoice::None;
    c.regularize = false;
    c.nibble.rate_floor = 1.0;
    c.nibble.bite = 0.2;
    c.nibble_retries = 200;
    c.stage_retries = 50;
    return c;
}

PipelineResult end_to_end_pipeline(const PipelineConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    if (config.q < 3) throw InvalidParameter("pipeline: q must be at least 3");
    if (config.n < config.q) throw InvalidParameter("pipeline: n must be at least q");
    const Graph g = Graph::complete(config.n);
    if (!is_kq_divisible(g, config.q))
        throw PreconditionViolation("pipeline: K_" + std::to_string(config.n) + " is not K_" +
                                    std::to_string(config.q) + "-divisible");
    if (config.stage_retries < 1 || config.nibble_retries < 1)
        throw InvalidParameter("pipeline: retry caps must be positive");

    PipelineResult result;
    result.seed = config.seed;
    result.constants = resolve_constants(config);
    const int q = config.q;
    const std::uint64_t seed = config.seed;
    NibbleParams params = config.nibble;
    params.D = result.constants.D;
    validate(params);

    std::optional<RootedBooster> booster;
    if (config.booster == BoosterChoice::Layered) {
        booster = layer_boosters(q);
        if (config.embed_b != 0 && config.embed_b != booster->extension_size())
            throw InvalidParameter("pipeline: embed_b = " + std::to_string(config.embed_b) +
                                   " differs from the layered booster's extension size " +
                                   std::to_string(booster->extension_size()));
    }

    std::string last_stage, last_message;
    auto note = [&](const std::string& stage, int attempt, const std::string& outcome) {
        result.log.push_back({stage, attempt, outcome});
        last_stage = stage;
        last_message = outcome;
    };
    auto finish = [&] {
        result.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return result;
    };

    for (int attempt = 0; attempt < config.stage_retries; ++attempt) {
        result.attempts = attempt + 1;
        const auto a = static_cast<std::uint64_t>(attempt);

        ReservoirResult reservoir;
        try {
            reservoir = select_reservoir(g, q, result.constants.p, derive_seed(seed, "reservoir", a), config.eps,
                                         config.reservoir_retries);
        } catch (const RetryExhausted& e) {
            note("reservoir", attempt, e.what());
            continue;
        }
        const Graph& x = reservoir.reserve;
        if (x.num_edges() > config.reserve_edge_cap) {
            note("reservoir", attempt,
                 "reserve has " + std::to_string(x.num_edges()) + " edges, over the cap of " +
                     std::to_string(config.reserve_edge_cap));
            continue;
        }

        OmniAbsorber absorber;
        try {
            AbsorberSearchOptions opts;
            opts.max_edges = config.absorber_max_edges;
            absorber = brute_force_absorber(x, q, config.n, opts);
        } catch (const NotFound& e) {
            note("absorber", attempt, e.what());
            continue;
        } catch (const ResourceError& e) {
            note("absorber", attempt, e.what());
            continue;
        }

        if (booster) {
            try {
                const EmbeddedBoosters eb = embed_boosters(absorber, *booster, config.n, result.constants.C,
                                                           derive_seed(seed, "embed", a));
                absorber = boost_absorber(absorber, eb.boosters);
            } catch (const PreconditionViolation& e) {
                note("booster", attempt, e.what());
                continue;
            } catch (const Nontermination& e) {
                note("booster", attempt, e.what());
                continue;
            }
        }

        const Graph j = g.minus(x).minus(absorber.A);
        std::vector<Clique> main;
        if (config.regularize) {
            const DesignHypergraph design = design_hypergraph(j, q);
            try {
                const RegularizeResult reg = regularize_design(design, config.regularize_tol,
                                                               derive_seed(seed, "regularize", a),
                                                               config.regularize_retries);
                for (int i : reg.kept) main.push_back(design.cliques[static_cast<std::size_t>(i)]);
            } catch (const RetryExhausted& e) {
                note("regularize", attempt, e.what());
                continue;
            }
        } else {
            main = list_cliques(j, q);
        }
        const ReserveInstance inst = build_reserve_instance(g, x, absorber.A, q, main);
        result.reserve_edges = x.num_edges();
        result.absorber_edges = absorber.A.num_edges();

        for (int k = 0; k < config.nibble_retries; ++k) {
            ++result.nibble_runs;
            const std::uint64_t run = a * static_cast<std::uint64_t>(config.nibble_retries) + static_cast<std::uint64_t>(k);
            const SpreadNibbleResult sn = spread_nibble(inst.g1, inst.g2, params, derive_seed(seed, "nibble", run));
            if (sn.sparsify_failed) {
                note("sparsify", attempt, sn.failure);
                continue;
            }
            const Verdict mv = verify_matching(inst.g1, inst.g2, sn.matching);
            if (!mv) throw Error("pipeline: nibble returned an invalid matching: " + mv.message);
            if (!sn.matching.a_perfect) {
                note("nibble", attempt,
                     std::to_string(sn.matching.uncovered_a.size()) + " remainder edges left uncovered");
                continue;
            }

            const Packing m = matching_to_packing(inst, sn.matching);
            std::set<Edge> covered;
            for (const Clique& c : m)
                for (const Edge& e : c.edges()) covered.insert(e);
            std::vector<Edge> leave_edges;
            for (const Edge& e : x.edges())
                if (!covered.count(e)) leave_edges.push_back(e);
            const Graph leave(config.n, leave_edges);
            if (!is_kq_divisible(leave, q))
                throw Error("pipeline: leave " + std::to_string(leave_edges.size()) +
                            " edges is not K_q-divisible (seed " + std::to_string(seed) + ")");
            auto it = absorber.qmap.find(key_of(leave));
            if (it == absorber.qmap.end()) throw Error("pipeline: absorber has no decomposition for the leave");

            Packing out = m;
            out.insert(out.end(), it->second.begin(), it->second.end());
            out = canonical(std::move(out));
            const Verdict v = verify_decomposition(g, out, q);
            if (!v) throw Error("pipeline: output failed verification (seed " + std::to_string(seed) + "): " + v.message);

            result.ok = true;
            result.decomposition = std::move(out);
            result.leave_edges = leave_edges.size();
            result.reserve_used = sn.matching.reserve_used;
            result.log.push_back({"output", attempt, "verified decomposition"});
            return finish();
        }
    }
    result.failed_stage = last_stage;
    result.message = last_message + " (seed " + std::to_string(seed) + ", " + std::to_string(result.attempts) +
                     " attempts, " + std::to_string(result.nibble_runs) + " nibble runs)";
    return finish();
}

PipelineSpreadReport pipeline_spread_report(const PipelineConfig& config, std::uint64_t trials,
                                            const std::vector<Packing>& probes, std::uint64_t seed,
                                            std::uint64_t min_successes, bool replay_single_seed) {
    std::vector<std::optional<Packing>> outputs(trials);
    parallel_for(trials, [&](std::size_t t) {
        PipelineConfig c = config;
        c.seed = replay_single_seed ? seed : derive_seed(seed, "pipeline-trial", t);
        PipelineResult r = end_to_end_pipeline(c);
        if (r.ok) outputs[t] = std::move(r.decomposition);
    });
    std::vector<Packing> samples;
    for (auto& o : outputs)
        if (o) samples.push_back(std::move(*o));

    PipelineSpreadReport report;
    report.trials = trials;
    report.successes = samples.size();
    if (report.successes < min_successes)
        throw Error("pipeline_spread_report: insufficient sample, " + std::to_string(report.successes) +
                    " successes of " + std::to_string(trials) + " (need " + std::to_string(min_successes) + ")");
    report.pipeline = empirical_spread_from_samples(samples, probes);

    // Beyond K_9 the full list of decompositions is out of reach.
    if (config.n <= 9) {
        const Enumeration all =
            enumerate_decompositions(CoverInstance::all_cliques(Graph::complete(config.n), config.q), 100'000);
        if (!all.truncated && !all.decompositions.empty())
            report.baseline = exact_spread(ExplicitDistribution::uniform(all.decompositions), 1);
    }
    return report;
}

}  // namespace dforge
