#include "dforge/lll.hpp"

#include "dforge/error.hpp"

#include <algorithm>
#include <cmath>

namespace dforge {
namespace {

using Wide = unsigned __int128;

BigInt to_big(Wide x) {
    BigInt out = 0;
    BigInt place = 1;
    while (x > 0) {
        out += place * static_cast<std::uint64_t>(x % 1'000'000'000'000ULL);
        place *= 1'000'000'000'000ULL;
        x /= 1'000'000'000'000ULL;
    }
    return out;
}

Rational ratio(Wide num, Wide den) {
    return Rational(to_big(num), to_big(den));
}

bool overlaps(const std::vector<int>& a, const std::vector<int>& b) {
    return std::any_of(a.begin(), a.end(), [&](int x) { return std::find(b.begin(), b.end(), x) != b.end(); });
}

}  // namespace

LllReport conditional_lll_check(const std::vector<FiniteVariable>& variables, const std::vector<LllEvent>& events,
                                const LllEvent& target, std::uint64_t max_outcomes) {
    const int nv = static_cast<int>(variables.size());
    auto check_support = [&](const LllEvent& e) {
        for (int s : e.support)
            if (s < 0 || s >= nv) throw InvalidParameter("conditional_lll_check: support index out of range");
    };
    for (const LllEvent& e : events) check_support(e);
    check_support(target);

    std::uint64_t outcomes = 1;
    double log_weight = 0.0;
    for (const FiniteVariable& v : variables) {
        if (v.weights.empty()) throw InvalidParameter("conditional_lll_check: variable with no outcomes");
        std::uint64_t total = 0;
        for (auto w : v.weights) total += w;
        if (total == 0) throw InvalidParameter("conditional_lll_check: variable with zero total weight");
        log_weight += std::log2(static_cast<double>(total));
        if (outcomes > max_outcomes / v.weights.size() + 1)
            throw ResourceError("conditional_lll_check: outcome space exceeds " + std::to_string(max_outcomes));
        outcomes *= v.weights.size();
    }
    if (outcomes > max_outcomes)
        throw ResourceError("conditional_lll_check: outcome space exceeds " + std::to_string(max_outcomes));
    if (log_weight > 120.0) throw ResourceError("conditional_lll_check: weight product too large for exact sums");

    std::vector<Wide> bad_weight(events.size(), 0);
    Wide total = 0, target_weight = 0, good = 0, good_and_target = 0;
    std::vector<int> assignment(static_cast<std::size_t>(nv), 0);
    for (std::uint64_t o = 0; o < outcomes; ++o) {
        Wide w = 1;
        for (int i = 0; i < nv; ++i)
            w *= variables[static_cast<std::size_t>(i)].weights[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])];
        total += w;
        bool any_bad = false;
        for (std::size_t j = 0; j < events.size(); ++j) {
            if (events[j].holds(assignment)) {
                bad_weight[j] += w;
                any_bad = true;
            }
        }
        const bool hit = target.holds(assignment);
        if (hit) target_weight += w;
        if (!any_bad) {
            good += w;
            if (hit) good_and_target += w;
        }
        for (int i = 0; i < nv; ++i) {
            auto& a = assignment[static_cast<std::size_t>(i)];
            if (++a < static_cast<int>(variables[static_cast<std::size_t>(i)].weights.size())) break;
            a = 0;
        }
    }

    LllReport r;
    r.outcomes = outcomes;
    r.prior = ratio(target_weight, total);
    r.avoid_all = ratio(good, total);
    r.conditional = good > 0 ? ratio(good_and_target, good) : Rational(0);
    r.max_bad = 0;
    for (Wide w : bad_weight) r.max_bad = std::max(r.max_bad, ratio(w, total));
    for (std::size_t j = 0; j < events.size(); ++j) {
        if (overlaps(events[j].support, target.support)) ++r.intersecting;
        int degree = 0;
        for (std::size_t k = 0; k < events.size(); ++k)
            if (k != j && overlaps(events[j].support, events[k].support)) ++degree;
        r.dependency_degree = std::max(r.dependency_degree, degree);
    }
    r.hypothesis_holds = 4 * r.max_bad * r.dependency_degree <= 1 && good > 0;
    const double p = to_double(r.max_bad);
    r.bound = to_double(r.prior) * std::exp(6.0 * p * r.intersecting);
    r.bound_holds = to_double(r.conditional) <= r.bound * (1.0 + 1e-12);
    return r;
}

}  // namespace dforge
