#pragma once

#include "dforge/exact_cover.hpp"
#include "dforge/graph.hpp"
#include "dforge/stats.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dforge {

struct RandomModel {
    int n = 0;
    int q = 3;
    double p = 0.0;
    std::uint64_t seed = 0;
};

// Each q-subset of [n] in lexicographic order consumes one uniform draw and
// is kept when the draw is below p. Two models differing only in p are
// therefore coupled: the smaller p yields a subset of the larger one.
std::vector<Clique> sample_random_hypergraph(const RandomModel& model);

struct TrialRecord {
    int n = 0;
    double p = 0.0;
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    SolveStatus status = SolveStatus::Infeasible;
    std::size_t hyperedges = 0;
    std::uint64_t nodes = 0;
    double elapsed_ms = 0.0;
};

struct RateRow {
    int n = 0;
    int q = 3;
    double p = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double rate = 0.0;
    Interval ci;
};

struct ExperimentResult {
    std::vector<TrialRecord> records;  // sorted by (n, p, trial)
    std::vector<RateRow> rows;         // sorted by (n, p)
    std::vector<std::string> warnings;
};

// For each divisible n, each p and each trial: sample the model (the trial
// seed does not depend on p), then search for a Steiner system using only the
// sampled q-sets. Budget 0 means unlimited; budget exhaustion counts as failure.
// Non-divisible n are skipped with a warning.
ExperimentResult run_threshold_experiment(int q, const std::vector<int>& n_list, const std::vector<double>& p_grid,
                                          std::uint64_t trials, std::uint64_t budget, std::uint64_t seed);

// Columns n,q,p,trials,successes,rate,ci_lo,ci_hi; warnings become '#' lines.
void write_threshold_csv(std::ostream& out, const ExperimentResult& result);

// True when each row's rate is at least the previous row's (same n) once
// confidence intervals are allowed to overlap.
bool rates_monotone_within_ci(const ExperimentResult& result);

}  // namespace dforge
