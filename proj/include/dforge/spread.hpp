#pragma once

#include "dforge/graph.hpp"
#include "dforge/rational.hpp"
#include "dforge/stats.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dforge {

// Finite distribution over decompositions of one host.
struct ExplicitDistribution {
    std::vector<Packing> support;
    std::vector<Rational> weights;

    static ExplicitDistribution uniform(std::vector<Packing> support);
    static ExplicitDistribution point_mass(Packing decomposition);
};

// Throws InvalidParameter unless the weights are nonnegative, sum to exactly
// 1, and every support member covers the same edge set.
void validate(const ExplicitDistribution& dist);

enum class SpreadMode { Exact, Empirical };

std::string to_string(SpreadMode mode);

struct SizeWorst {
    int size = 0;
    double probability = 0.0;  // worst P(S ⊆ H) among tested S of this size
    double ratio = 0.0;        // probability^(1/size)
    double upper = 0.0;        // upper confidence bound (empirical) or probability (exact)
    Rational exact_probability = 0;
    Packing witness;
    std::size_t tested = 0;
};

struct ProbeEstimate {
    Packing probe;
    std::uint64_t hits = 0;
    double estimate = 0.0;
    Interval ci;
};

struct SpreadReport {
    SpreadMode mode = SpreadMode::Exact;
    std::vector<SizeWorst> per_size;  // per_size[s-1] covers packings of size s
    Rational sigma_singleton_exact = 0;
    double sigma_singleton = 0.0;
    double sigma_singleton_upper = 0.0;
    std::uint64_t trials = 0;
    std::vector<ProbeEstimate> probes;  // empirical mode only
    // Exact mode: sum over cliques of P(clique in H) equals E|H|.
    bool linearity_holds = true;
    Rational expected_size = 0;
    // Exact mode: P(S') <= P(S) whenever S is S' minus one clique.
    bool monotone_holds = true;
};

inline constexpr std::uint64_t kDefaultSpreadWorkCap = 20'000'000;

// Exact P(S ⊆ H) for every packing S with |S| <= s_max that has positive
// probability; every other packing has probability 0. Throws ResourceError
// when the number of (support member, subset) pairs exceeds work_cap.
SpreadReport exact_spread(const ExplicitDistribution& dist, int s_max,
                          std::uint64_t work_cap = kDefaultSpreadWorkCap);

// Draws one decomposition per call; the argument is the per-trial seed.
using DecompositionSampler = std::function<Packing(std::uint64_t)>;

// Frequency estimates with 95% Wilson intervals for each probe. Samples are
// drawn in parallel, so the sampler must be safe to call concurrently.
// Throws InvalidParameter when a probe is not a packing.
SpreadReport empirical_spread(const DecompositionSampler& sampler, std::uint64_t trials,
                              const std::vector<Packing>& probes, std::uint64_t seed);

// Same estimates from decompositions already drawn.
SpreadReport empirical_spread_from_samples(const std::vector<Packing>& samples, const std::vector<Packing>& probes);

// True iff every tested probability (exact) or upper bound (empirical) is at
// most sigma^|S|.
bool check_sigma_spread(const SpreadReport& report, const Rational& sigma);
bool check_sigma_spread(const SpreadReport& report, double sigma);

// All q-cliques of host as singletons, plus up to per_size random packings of
// each size 2..s_max.
std::vector<Packing> default_probes(const Graph& host, int q, int s_max, std::size_t per_size, std::uint64_t seed);

// Uniform pick from a fixed list of decompositions.
DecompositionSampler uniform_sampler(std::vector<Packing> support);

}  // namespace dforge
