#pragma once

#include "dforge/graph.hpp"
#include "dforge/nibble.hpp"
#include "dforge/spread.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dforge {

enum class BoosterChoice { None, Layered };

BoosterChoice parse_booster_choice(const std::string& s);
std::string to_string(BoosterChoice b);

// Unset optionals fall back to the asymptotic formulas
//   C = n^{8 beta},  p = C^{-2} / 2,  D = (1/2 + n^{-(q-2)/3}) C(n-2, q-2).
struct PipelineConfig {
    int n = 9;
    int q = 3;
    double beta = 0.05;
    std::optional<double> reservoir_p;
    double eps = 0.0;
    BoosterChoice booster = BoosterChoice::None;
    std::optional<int> embed_C;
    int embed_b = 0;  // 0: the booster's own extension size
    bool regularize = true;
    double regularize_tol = 0.35;
    std::optional<double> nibble_D;
    NibbleParams nibble;  // nibble.D is replaced by the resolved D
    int reservoir_retries = 100;
    int regularize_retries = 20;
    int nibble_retries = 1;
    int stage_retries = 1;
    std::size_t absorber_max_edges = 18;
    std::size_t reserve_edge_cap = 12;  // reservoirs above this are redrawn
    std::uint64_t seed = 1;
};

struct ResolvedConstants {
    double formula_C = 0.0;
    double formula_p = 0.0;
    double formula_D = 0.0;
    int C = 0;
    double p = 0.0;
    double D = 0.0;
};

ResolvedConstants resolve_constants(const PipelineConfig& config);

struct StageLog {
    std::string stage;
    int attempt = 0;
    std::string outcome;
};

struct PipelineResult {
    bool ok = false;
    Packing decomposition;
    std::string failed_stage;
    std::string message;
    std::uint64_t seed = 0;
    int attempts = 0;
    int nibble_runs = 0;
    std::size_t reserve_edges = 0;
    std::size_t absorber_edges = 0;
    std::size_t leave_edges = 0;
    int reserve_used = 0;
    double elapsed_ms = 0.0;
    ResolvedConstants constants;
    std::vector<StageLog> log;
};

// Reservoir, absorber (optionally boosted), regularized design of the
// remainder, spread nibble with the reserve, then the absorber's map on the
// leave. Throws PreconditionViolation when K_n is not K_q-divisible; stage
// failures come back in the result with the stage name and seed. A returned
// decomposition has always passed verify_decomposition.
PipelineResult end_to_end_pipeline(const PipelineConfig& config);

// Profile shipped for q = 3, n = 9.
PipelineConfig desk_profile();

struct PipelineSpreadReport {
    SpreadReport pipeline;
    std::optional<SpreadReport> baseline;  // uniform over all decompositions, when enumerable
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
};

// Runs the pipeline on `trials` derived seeds (or one replayed seed when
// replay_single_seed) and estimates the spread of the successful outputs.
// Throws Error when fewer than min_successes runs succeed.
PipelineSpreadReport pipeline_spread_report(const PipelineConfig& config, std::uint64_t trials,
                                            const std::vector<Packing>& probes, std::uint64_t seed,
                                            std::uint64_t min_successes = 1, bool replay_single_seed = false);

}  // namespace dforge
