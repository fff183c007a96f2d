#include "dforge/experiment.hpp"

#include "dforge/error.hpp"
#include "dforge/parallel.hpp"
#include "dforge/random.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>

namespace dforge {

std::vector<Clique> sample_random_hypergraph(const RandomModel& m) {
    if (!(m.p >= 0.0 && m.p <= 1.0)) throw InvalidParameter("random model: p must lie in [0, 1]");
    if (m.q < 1 || m.n < 0) throw InvalidParameter("random model: need n >= 0 and q >= 1");
    std::vector<Clique> out;
    if (m.q > m.n) return out;
    Rng rng(m.seed);
    std::vector<Vertex> set(static_cast<std::size_t>(m.q));
    for (int i = 0; i < m.q; ++i) set[static_cast<std::size_t>(i)] = i;
    while (true) {
        if (rng.uniform01() < m.p) out.emplace_back(set);
        int i = m.q - 1;
        while (i >= 0 && set[static_cast<std::size_t>(i)] == m.n - m.q + i) --i;
        if (i < 0) break;
        ++set[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m.q; ++j) set[static_cast<std::size_t>(j)] = set[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

ExperimentResult run_threshold_experiment(int q, const std::vector<int>& n_list, const std::vector<double>& p_grid,
                                          std::uint64_t trials, std::uint64_t budget, std::uint64_t seed) {
    if (q < 3) throw InvalidParameter("threshold experiment: q must be at least 3");
    for (double p : p_grid)
        if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("threshold experiment: p must lie in [0, 1]");
    ExperimentResult result;
    std::vector<int> ns;
    for (int n : n_list) {
        if (n < q || !is_kq_divisible(Graph::complete(n), q)) {
            result.warnings.push_back("n=" + std::to_string(n) + " skipped: K_" + std::to_string(n) + " is not K_" +
                                      std::to_string(q) + "-divisible");
            continue;
        }
        ns.push_back(n);
    }
    std::vector<double> ps = p_grid;
    std::sort(ps.begin(), ps.end());

    for (int n : ns)
        for (double p : ps)
            for (std::uint64_t t = 0; t < trials; ++t) {
                TrialRecord r;
                r.n = n;
                r.p = p;
                r.trial = t;
                r.seed = derive_seed(seed, "threshold-n" + std::to_string(n), t);
                result.records.push_back(r);
            }

    parallel_for(result.records.size(), [&](std::size_t i) {
        TrialRecord& r = result.records[i];
        const auto start = std::chrono::steady_clock::now();
        CoverInstance inst;
        inst.universe = Graph::complete(r.n);
        inst.q = q;
        inst.candidates = sample_random_hypergraph({r.n, q, r.p, r.seed});
        r.hyperedges = inst.candidates.size();
        const SolveResult s = find_decomposition(inst, budget);
        r.status = s.status;
        r.nodes = s.nodes;
        r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    });

    for (int n : ns)
        for (double p : ps) {
            RateRow row;
            row.n = n;
            row.q = q;
            row.p = p;
            for (const TrialRecord& r : result.records) {
                if (r.n != n || r.p != p) continue;
                ++row.trials;
                row.successes += r.status == SolveStatus::Solved ? 1 : 0;
            }
            row.rate = row.trials ? static_cast<double>(row.successes) / static_cast<double>(row.trials) : 0.0;
            row.ci = wilson_interval(row.successes, row.trials);
            result.rows.push_back(row);
        }
    return result;
}

void write_threshold_csv(std::ostream& out, const ExperimentResult& result) {
    for (const std::string& w : result.warnings) out << "# warning: " << w << '\n';
    out << "n,q,p,trials,successes,rate,ci_lo,ci_hi\n";
    for (const RateRow& r : result.rows)
        out << r.n << ',' << r.q << ',' << r.p << ',' << r.trials << ',' << r.successes << ',' << r.rate << ','
            << r.ci.lo << ',' << r.ci.hi << '\n';
}

bool rates_monotone_within_ci(const ExperimentResult& result) {
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        const RateRow& a = result.rows[i - 1];
        const RateRow& b = result.rows[i];
        if (a.n != b.n) continue;
        if (b.rate < a.rate && b.ci.hi < a.ci.lo) return false;
    }
    return true;
}

}  // namespace dforge
