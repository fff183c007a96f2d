#pragma once

#include "dforge/rational.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace dforge {

// Independent variable over outcomes 0..k-1; outcome i has probability
// weights[i] / sum(weights).
struct FiniteVariable {
    std::vector<std::uint64_t> weights;
};

// Event determined by the variables in `support`; `holds` sees the full assignment.
struct LllEvent {
    std::vector<int> support;
    std::function<bool(const std::vector<int>&)> holds;
};

struct LllReport {
    Rational prior;            // P(E)
    Rational conditional;      // P(E | no bad event)
    Rational avoid_all;        // P(no bad event)
    Rational max_bad;          // p = max_j P(E_j)
    int intersecting = 0;      // N: bad events whose support meets supp(E)
    int dependency_degree = 0; // Δ(Γ), Γ joining events with overlapping supports
    bool hypothesis_holds = false;  // 4 p Δ(Γ) <= 1
    double bound = 0.0;        // P(E) exp(6 p N)
    bool bound_holds = false;  // only meaningful when hypothesis_holds
    std::uint64_t outcomes = 0;
};

// Exhaustive evaluation over the product space. Throws ResourceError past
// max_outcomes and InvalidParameter on malformed variables or supports.
LllReport conditional_lll_check(const std::vector<FiniteVariable>& variables, const std::vector<LllEvent>& events,
                                const LllEvent& target, std::uint64_t max_outcomes = 10'000'000);

}  // namespace dforge
