// Command-line front end for the dforge library.
#include "dforge/absorber.hpp"
#include "dforge/booster.hpp"
#include "dforge/embed.hpp"
#include "dforge/error.hpp"
#include "dforge/exact_cover.hpp"
#include "dforge/experiment.hpp"
#include "dforge/io.hpp"
#include "dforge/nibble.hpp"
#include "dforge/pipeline.hpp"
#include "dforge/serialize.hpp"
#include "dforge/spread.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace dforge;

namespace {

struct Globals {
    std::uint64_t seed = 1;
    std::string out_dir;
    std::string format = "json";
};

// Writes to stdout, or to <out_dir>/<name> when --out is given.
void emit(const Globals& g, const std::string& name, const std::string& text) {
    if (g.out_dir.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    fs::create_directories(g.out_dir);
    const fs::path path = fs::path(g.out_dir) / name;
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    std::cerr << "wrote " << path.string() << '\n';
}

std::string dump(const Json& j) {
    return j.dump(2);
}

std::string packing_text(const Packing& p) {
    std::ostringstream os;
    write_packing(os, p);
    return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

// Runs a shell command with {seed} replaced and parses its stdout as a packing.
Packing run_sampler(const std::string& command, std::uint64_t seed) {
    std::string cmd = command;
    const std::string token = "{seed}";
    for (auto pos = cmd.find(token); pos != std::string::npos; pos = cmd.find(token))
        cmd.replace(pos, token.size(), std::to_string(seed));
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) throw Error("cannot run sampler: " + cmd);
    std::string output;
    char buffer[4096];
    while (std::size_t got = std::fread(buffer, 1, sizeof buffer, pipe)) output.append(buffer, got);
    const int status = pclose(pipe);
    if (status != 0) throw Error("sampler exited with status " + std::to_string(status) + ": " + cmd);
    std::istringstream in(output);
    return read_packing(in);
}

NibbleParams nibble_params_from_json(const Json& j) {
    NibbleParams p;
    if (j.contains("D")) p.D = j.at("D").get<double>();
    Json rest = j;
    for (const char* key : {"D", "spread", "a_vertices"}) rest.erase(key);
    PipelineConfig c;
    c.nibble = p;
    c = config_from_json(Json{{"nibble", rest}}, c);
    c.nibble.D = p.D;
    return c.nibble;
}

int booster_build(const Globals& g, int q, const std::string& emit_as) {
    const RootedBooster rb = layer_boosters(q);
    if (emit_as == "edgelist") {
        std::ostringstream os;
        write_edge_list(os, rb.graph);
        emit(g, "booster_q" + std::to_string(q) + ".txt", os.str());
    } else {
        emit(g, "booster_q" + std::to_string(q) + ".json", dump(booster_json(rb)));
    }
    return 0;
}

int booster_verify(const Globals& g, const std::string& file) {
    const RootedBooster rb = booster_from_json(read_json_file(file));
    const BoosterReport r = verify_rooted_booster(rb);
    emit(g, "booster_report.json", dump(booster_report_json(r)));
    return r.ok() ? 0 : 1;
}

int solve(const Globals& g, const std::string& host_file, int q, const std::string& candidates_file, bool enumerate,
          std::size_t limit, std::uint64_t budget, std::optional<std::uint64_t> seed) {
    const Graph host = load_edge_list(host_file);
    CoverInstance inst = CoverInstance::all_cliques(host, q);
    if (!candidates_file.empty()) inst.candidates = load_packing(candidates_file);
    validate(inst);
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    };
    if (enumerate) {
        const Enumeration e = enumerate_decompositions(inst, limit);
        Json j = {{"status", e.truncated ? "truncated" : "complete"},
                  {"count", e.decompositions.size()},
                  {"nodes", e.nodes},
                  {"elapsed_ms", elapsed()}};
        if (g.format == "json") {
            Json all = Json::array();
            for (const Packing& p : e.decompositions) all.push_back(packing_json(p));
            j["decompositions"] = all;
        }
        emit(g, "solve.json", dump(j));
        return 0;
    }
    const SolveResult r = find_decomposition(inst, budget, seed);
    if (g.format == "json" || r.status != SolveStatus::Solved) {
        Json j = {{"status", to_string(r.status)},
                  {"count", r.status == SolveStatus::Solved ? 1 : 0},
                  {"nodes", r.nodes},
                  {"elapsed_ms", elapsed()}};
        if (r.status == SolveStatus::Solved) j["packing"] = packing_json(r.packing);
        emit(g, "solve.json", dump(j));
    } else {
        emit(g, "solve.txt", packing_text(r.packing));
    }
    return 0;
}

int absorber_build(const Globals& g, const std::string& reserve_file, int q, int host_n) {
    const Graph x = load_edge_list(reserve_file);
    const OmniAbsorber oa = brute_force_absorber(x, q, host_n);
    emit(g, "absorber.json", dump(absorber_json(oa)));
    return 0;
}

int absorber_boost(const Globals& g, const std::string& base_file, const std::string& dir, int host_n, int C) {
    const OmniAbsorber base = absorber_from_json(read_json_file(base_file));
    std::map<Clique, RootedBooster> boosters;
    if (!dir.empty()) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir))
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const fs::path& f : files) {
            RootedBooster rb = booster_from_json(read_json_file(f.string()));
            const Clique root = rb.root;
            if (!boosters.emplace(root, std::move(rb)).second)
                throw InvalidParameter("two boosters rooted at " + to_string(root));
        }
    } else {
        const EmbeddedBoosters eb = embed_boosters(base, layer_boosters(base.q), host_n, C, g.seed);
        boosters = eb.boosters;
    }
    const OmniAbsorber boosted = boost_absorber(base, boosters);
    emit(g, "absorber_boosted.json", dump(absorber_json(boosted)));
    return 0;
}

int absorber_verify(const Globals& g, const std::string& file) {
    const AbsorberReport r = verify_omni_absorber(absorber_from_json(read_json_file(file)));
    emit(g, "absorber_report.json", dump(absorber_report_json(r)));
    return r.ok() ? 0 : 1;
}

int embed(const Globals& g, const std::string& host_file, const std::string& roots_file, int b, int C,
          std::uint64_t trials, const std::string& targets_file) {
    EmbeddingProblem problem;
    problem.host = load_edge_list(host_file);
    problem.roots = load_packing(roots_file);
    problem.b = b;
    problem.C = C;
    std::map<int, std::vector<Vertex>> targets;
    if (!targets_file.empty()) {
        // One line per target: root index followed by the target vertices.
        std::ifstream in(targets_file);
        if (!in) throw NotFound("cannot open " + targets_file);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            int index;
            ls >> index;
            Vertex v;
            while (ls >> v) targets[index].push_back(v);
        }
    }
    if (trials == 0) {
        const Embedding e = sample_embedding(problem, g.seed);
        Json parts = Json::array();
        for (const PartialClique& p : e.parts) parts.push_back({{"root", clique_json(p.root)}, {"extension", p.extension}});
        emit(g, "embed.json",
             dump({{"resamples", e.resamples},
                   {"max_degree", e.max_degree},
                   {"disjoint", true},
                   {"spread_estimate", nullptr},
                   {"bound", nullptr},
                   {"slots", e.slots},
                   {"parts", parts}}));
        return 0;
    }
    const EmbeddingSpreadReport r = embedding_spread_report(problem, targets, trials, g.seed);
    emit(g, "embed.json", dump(embedding_json(r)));
    return 0;
}

int nibble_run(const Globals& g, const std::string& g1_file, const std::string& g2_file, const std::string& params_file,
               const std::string& a_file) {
    const Hypergraph g1 = load_hypergraph(g1_file);
    Hypergraph h2 = load_hypergraph(g2_file);
    const Json pj = params_file.empty() ? Json::object() : read_json_file(params_file);
    const NibbleParams params = nibble_params_from_json(pj);
    std::vector<int> a;
    if (!a_file.empty()) {
        std::ifstream in(a_file);
        if (!in) throw NotFound("cannot open " + a_file);
        int v;
        while (in >> v) a.push_back(v);
    } else if (pj.contains("a_vertices")) {
        a = pj.at("a_vertices").get<std::vector<int>>();
    } else {
        std::set<int> seen;
        for (const auto& e : g1.edges) seen.insert(e.begin(), e.end());
        a.assign(seen.begin(), seen.end());
    }
    h2.num_vertices = std::max(h2.num_vertices, g1.num_vertices);
    const BipartiteHypergraph g2 = make_bipartite(std::move(h2), a);
    Json out;
    if (pj.value("spread", false)) {
        const SpreadNibbleResult r = spread_nibble(g1, g2, params, g.seed);
        out = nibble_json(r.matching);
        out["sparsify"] = {{"rate", r.sparsify.rate},
                           {"formula_rate", r.sparsify.formula_rate},
                           {"resamples", r.sparsify.resamples},
                           {"failed", r.sparsify_failed},
                           {"failure", r.failure}};
        if (r.sparsify_failed) out["status"] = "sparsification-retry-exhausted";
    } else {
        out = nibble_json(nibble_with_reserves(g1, g2, params, g.seed));
    }
    emit(g, "nibble.json", dump(out));
    return 0;
}

int spread_exact(const Globals& g, const std::string& host_file, int q, int smax, std::size_t limit) {
    const Graph host = load_edge_list(host_file);
    const Enumeration e = enumerate_decompositions(CoverInstance::all_cliques(host, q), limit);
    if (e.truncated)
        throw ResourceError("spread exact: more than " + std::to_string(limit) + " decompositions; raise --limit");
    if (e.decompositions.empty()) throw NotFound("spread exact: the host has no K_q-decomposition");
    const SpreadReport r = exact_spread(ExplicitDistribution::uniform(e.decompositions), smax);
    Json j = spread_report_json(r);
    j["support_size"] = e.decompositions.size();
    emit(g, "spread.json", dump(j));
    return 0;
}

int spread_empirical(const Globals& g, const std::string& sampler, std::uint64_t trials, const std::string& probes_file,
                     const std::string& host_file, int q, int smax, std::size_t per_size) {
    std::vector<Packing> probes;
    if (!probes_file.empty()) {
        for (const Json& p : read_json_file(probes_file)) probes.push_back(packing_from_json(p));
    } else {
        if (host_file.empty()) throw InvalidParameter("spread empirical: give --probes or --host");
        probes = default_probes(load_edge_list(host_file), q, smax, per_size, g.seed);
    }
    const SpreadReport r = empirical_spread([&](std::uint64_t s) { return run_sampler(sampler, s); }, trials, probes,
                                            g.seed);
    emit(g, "spread.json", dump(spread_report_json(r)));
    return 0;
}

int threshold(const Globals& g, int q, const std::string& ns, const std::string& ps, std::uint64_t trials,
              std::uint64_t budget) {
    std::vector<int> n_list;
    for (const auto& s : split(ns, ',')) n_list.push_back(std::stoi(s));
    std::vector<double> p_grid;
    for (const auto& s : split(ps, ',')) p_grid.push_back(std::stod(s));
    const ExperimentResult r = run_threshold_experiment(q, n_list, p_grid, trials, budget, g.seed);
    if (g.format == "csv") {
        std::ostringstream os;
        write_threshold_csv(os, r);
        emit(g, "threshold.csv", os.str());
    } else {
        Json rows = Json::array();
        for (const RateRow& row : r.rows)
            rows.push_back({{"n", row.n},
                            {"q", row.q},
                            {"p", row.p},
                            {"trials", row.trials},
                            {"successes", row.successes},
                            {"rate", row.rate},
                            {"ci_lo", row.ci.lo},
                            {"ci_hi", row.ci.hi}});
        emit(g, "threshold.json", dump({{"rows", rows}, {"warnings", r.warnings}}));
    }
    return 0;
}

int pipeline(const Globals& g, const std::string& config_file, const std::string& profile, std::uint64_t runs,
             bool seed_given) {
    PipelineConfig config = profile == "desk" ? desk_profile() : PipelineConfig{};
    if (!profile.empty() && profile != "desk") throw InvalidParameter("unknown profile '" + profile + "'");
    if (!config_file.empty()) config = config_from_json(read_json_file(config_file), config);
    if (seed_given) config.seed = g.seed;
    if (runs <= 1) {
        const PipelineResult r = end_to_end_pipeline(config);
        Json j = pipeline_result_json(r);
        j["config"] = config_json(config);
        emit(g, "pipeline.json", dump(j));
        return r.ok ? 0 : 1;
    }
    Json records = Json::array();
    std::uint64_t ok = 0;
    for (std::uint64_t i = 0; i < runs; ++i) {
        PipelineConfig c = config;
        c.seed = config.seed + i;
        const PipelineResult r = end_to_end_pipeline(c);
        ok += r.ok ? 1 : 0;
        records.push_back({{"seed", c.seed},
                           {"ok", r.ok},
                           {"failed_stage", r.failed_stage},
                           {"attempts", r.attempts},
                           {"nibble_runs", r.nibble_runs},
                           {"elapsed_ms", r.elapsed_ms}});
    }
    const Interval ci = wilson_interval(ok, runs);
    emit(g, "pipeline.json",
         dump({{"runs", runs},
               {"successes", ok},
               {"rate", static_cast<double>(ok) / static_cast<double>(runs)},
               {"ci", {ci.lo, ci.hi}},
               {"config", config_json(config)},
               {"records", records}}));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dforge: desk-scale constructions for spread Steiner systems"};
    app.fallthrough();
    app.require_subcommand(1);
    Globals g;
    auto* seed_opt = app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--out", g.out_dir, "write results into this directory instead of stdout");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

    std::function<int()> action;

    // booster
    auto* booster = app.add_subcommand("booster", "layered rooted boosters");
    booster->require_subcommand(1);
    int bq = 3;
    std::string emit_as = "json", bfile;
    auto* bbuild = booster->add_subcommand("build", "build the layered booster for K_q");
    bbuild->add_option("--q", bq)->required();
    bbuild->add_option("--emit", emit_as)->check(CLI::IsMember({"json", "edgelist"}));
    bbuild->callback([&] { action = [&] { return booster_build(g, bq, emit_as); }; });
    auto* bverify = booster->add_subcommand("verify", "verify a booster JSON file");
    bverify->add_option("--file", bfile)->required();
    bverify->callback([&] { action = [&] { return booster_verify(g, bfile); }; });

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "exact K_q-decomposition search");
    std::string host, candidates;
    int sq = 3;
    bool enumerate = false;
    std::size_t limit = 1000;
    std::uint64_t budget = 0, solve_seed = 0;
    solve_cmd->add_option("--host", host)->required();
    solve_cmd->add_option("--q", sq)->required();
    solve_cmd->add_option("--candidates", candidates);
    solve_cmd->add_flag("--enumerate", enumerate);
    solve_cmd->add_option("--limit", limit);
    solve_cmd->add_option("--budget", budget, "node budget, 0 for none");
    auto* shuffle_opt = solve_cmd->add_option("--shuffle-seed", solve_seed, "permute candidate order");
    solve_cmd->callback([&] {
        action = [&] {
            std::optional<std::uint64_t> s;
            if (*shuffle_opt) s = solve_seed;
            else if (*seed_opt) s = g.seed;
            return solve(g, host, sq, candidates, enumerate, limit, budget, s);
        };
    });

    // absorber
    auto* absorber = app.add_subcommand("absorber", "omni-absorbers");
    absorber->require_subcommand(1);
    std::string reserve, base, boosters_dir, afile;
    int aq = 3, host_n = 0, big_n = 0, embed_c = 0;
    auto* abuild = absorber->add_subcommand("build", "brute-force absorber for a reserve graph");
    abuild->add_option("--reserve", reserve)->required();
    abuild->add_option("--q", aq)->required();
    abuild->add_option("--host-n", host_n)->required();
    abuild->callback([&] { action = [&] { return absorber_build(g, reserve, aq, host_n); }; });
    auto* aboost = absorber->add_subcommand("boost", "replace family cliques by rooted boosters");
    aboost->add_option("--base", base)->required();
    auto* dir_opt = aboost->add_option("--boosters", boosters_dir, "directory of embedded booster JSON files");
    auto* hn_opt = aboost->add_option("--host-n", big_n, "embed layered boosters into K_N instead");
    aboost->add_option("--C", embed_c, "embedding constant")->needs(hn_opt);
    dir_opt->excludes(hn_opt);
    aboost->callback([&] {
        action = [&] {
            if (!*dir_opt && !*hn_opt) throw InvalidParameter("absorber boost: give --boosters or --host-n");
            return absorber_boost(g, base, boosters_dir, big_n, embed_c);
        };
    });
    auto* averify = absorber->add_subcommand("verify", "verify an absorber JSON file");
    averify->add_option("--file", afile)->required();
    averify->callback([&] { action = [&] { return absorber_verify(g, afile); }; });

    // embed
    auto* embed_cmd = app.add_subcommand("embed", "resampling embedding of partial cliques");
    std::string roots, targets;
    int eb = 1, ec = 1;
    std::uint64_t etrials = 0;
    embed_cmd->add_option("--host", host)->required();
    embed_cmd->add_option("--roots", roots)->required();
    embed_cmd->add_option("--b", eb)->required();
    embed_cmd->add_option("--C", ec)->required();
    embed_cmd->add_option("--trials", etrials);
    embed_cmd->add_option("--targets", targets);
    embed_cmd->callback([&] { action = [&] { return embed(g, host, roots, eb, ec, etrials, targets); }; });

    // nibble
    auto* nibble = app.add_subcommand("nibble", "nibble with reserves");
    nibble->require_subcommand(1);
    std::string g1f, g2f, paramsf, af;
    auto* nrun = nibble->add_subcommand("run", "run the nibble on hypergraph files");
    nrun->add_option("--g1", g1f)->required();
    nrun->add_option("--g2", g2f)->required();
    nrun->add_option("--params", paramsf);
    nrun->add_option("--a", af, "file listing the A-vertices");
    nrun->callback([&] { action = [&] { return nibble_run(g, g1f, g2f, paramsf, af); }; });

    // spread
    auto* spread = app.add_subcommand("spread", "spread measurement");
    spread->require_subcommand(1);
    int pq = 3, smax = 1;
    std::size_t slimit = 100'000, per_size = 200;
    std::string sampler, probes;
    std::uint64_t strials = 1000;
    auto* sexact = spread->add_subcommand("exact", "exact spread of the uniform distribution on decompositions");
    sexact->add_option("--host", host)->required();
    sexact->add_option("--q", pq)->required();
    sexact->add_option("--smax", smax);
    sexact->add_option("--limit", slimit);
    sexact->callback([&] { action = [&] { return spread_exact(g, host, pq, smax, slimit); }; });
    auto* semp = spread->add_subcommand("empirical", "estimate spread from an external sampler");
    semp->add_option("--sampler", sampler, "command printing a packing; {seed} is substituted")->required();
    semp->add_option("--trials", strials);
    semp->add_option("--probes", probes, "JSON list of packings");
    semp->add_option("--host", host);
    semp->add_option("--q", pq);
    semp->add_option("--smax", smax);
    semp->add_option("--per-size", per_size);
    semp->callback([&] {
        action = [&] { return spread_empirical(g, sampler, strials, probes, host, pq, smax, per_size); };
    });

    // threshold
    auto* thr = app.add_subcommand("threshold", "Steiner systems in random hypergraphs");
    int tq = 3;
    std::string tn = "7,9", tp = "0,0.2,0.4,0.6,0.8,1";
    std::uint64_t ttrials = 100, tbudget = 1'000'000;
    thr->add_option("--q", tq);
    thr->add_option("--n", tn, "comma-separated list");
    thr->add_option("--p", tp, "comma-separated list");
    thr->add_option("--trials", ttrials);
    thr->add_option("--budget", tbudget);
    thr->callback([&] { action = [&] { return threshold(g, tq, tn, tp, ttrials, tbudget); }; });

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "end-to-end randomized decomposition of K_n");
    std::string config_file, profile;
    std::uint64_t runs = 1;
    pipe->add_option("--config", config_file, "JSON file with PipelineConfig fields");
    pipe->add_option("--profile", profile, "start from a shipped profile (desk)");
    pipe->add_option("--runs", runs, "run consecutive seeds and report the success rate");
    pipe->callback([&] { action = [&] { return pipeline(g, config_file, profile, runs, bool(*seed_opt)); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        return action ? action() : 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
