#include "dforge/error.hpp"
#include "dforge/exact_cover.hpp"
#include "dforge/spread.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace dforge;

namespace {

const std::vector<Packing>& sts7() {
    static const std::vector<Packing> all =
        enumerate_decompositions(CoverInstance::all_cliques(Graph::complete(7), 3), 1000).decompositions;
    return all;
}

// Worst probability per size by counting sub-packings of each support member.
std::map<int, Rational> oracle_worst(const std::vector<Packing>& support, int s_max) {
    std::map<Packing, int> count;
    for (const Packing& d : support) {
        const std::size_t k = d.size();
        for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
            if (__builtin_popcount(mask) > s_max) continue;
            Packing s;
            for (std::size_t i = 0; i < k; ++i)
                if (mask >> i & 1) s.push_back(d[i]);
            ++count[s];
        }
    }
    std::map<int, Rational> worst;
    for (const auto& [s, c] : count) {
        const Rational p = Rational(c) / Rational(static_cast<long long>(support.size()));
        auto& w = worst[static_cast<int>(s.size())];
        w = std::max(w, p);
    }
    return worst;
}

}  // namespace

TEST_CASE("exact spread of the uniform Steiner triple systems on 7 points") {
    REQUIRE(sts7().size() == 30);
    const ExplicitDistribution dist = ExplicitDistribution::uniform(sts7());
    CHECK_NOTHROW(validate(dist));
    const SpreadReport r = exact_spread(dist, 7);
    CHECK(r.mode == SpreadMode::Exact);
    CHECK(r.sigma_singleton_exact == make_rational(1, 5));
    CHECK(r.sigma_singleton == doctest::Approx(0.2));
    CHECK(r.linearity_holds);
    CHECK(r.expected_size == 7);
    CHECK(r.monotone_holds);

    const auto worst = oracle_worst(sts7(), 7);
    REQUIRE(r.per_size.size() == 7);
    for (int s = 1; s <= 7; ++s) {
        CAPTURE(s);
        const SizeWorst& w = r.per_size[static_cast<std::size_t>(s - 1)];
        CHECK(w.size == s);
        CHECK(w.exact_probability == worst.at(s));
        CHECK(w.ratio == doctest::Approx(std::pow(to_double(worst.at(s)), 1.0 / s)));
        CHECK(w.witness.size() == static_cast<std::size_t>(s));
    }
    CHECK(r.per_size[6].exact_probability == make_rational(1, 30));
    CHECK(r.per_size[6].ratio == doctest::Approx(std::pow(1.0 / 30.0, 1.0 / 7.0)));

    const SpreadReport singles = exact_spread(dist, 1);
    CHECK(check_sigma_spread(singles, make_rational(1, 5)));
    CHECK_FALSE(check_sigma_spread(singles, make_rational(1, 6)));
    CHECK(check_sigma_spread(singles, Rational(1)));
    CHECK(check_sigma_spread(r, Rational(1)));
}

TEST_CASE("point mass and malformed distributions") {
    const ExplicitDistribution point = ExplicitDistribution::point_mass(sts7().front());
    const SpreadReport r = exact_spread(point, 2);
    CHECK(r.sigma_singleton_exact == 1);
    CHECK(r.per_size[1].exact_probability == 1);
    CHECK_FALSE(check_sigma_spread(r, make_rational(99, 100)));

    ExplicitDistribution skew = ExplicitDistribution::uniform({sts7()[0], sts7()[1]});
    skew.weights = {make_rational(1, 3), make_rational(1, 3)};
    CHECK_THROWS_AS(validate(skew), InvalidParameter);
    skew.weights = {make_rational(4, 3), make_rational(-1, 3)};
    CHECK_THROWS_AS(validate(skew), InvalidParameter);
    ExplicitDistribution mixed = ExplicitDistribution::uniform({sts7()[0], Packing{{0, 1, 2}}});
    CHECK_THROWS_AS(validate(mixed), InvalidParameter);
    CHECK_THROWS_AS(exact_spread(ExplicitDistribution::uniform(sts7()), 7, 100), ResourceError);
}

TEST_CASE("empirical spread") {
    const Packing own = sts7().front();
    const DecompositionSampler fixed = [own](std::uint64_t) { return own; };
    const SpreadReport point = empirical_spread(fixed, 50, {{own.front()}}, 1);
    CHECK(point.mode == SpreadMode::Empirical);
    CHECK(point.probes.front().estimate == 1.0);
    CHECK(point.sigma_singleton == 1.0);

    const Packing probe = {{0, 1, 2}};
    const SpreadReport uni = empirical_spread(uniform_sampler(sts7()), 10000, {probe}, 7);
    CHECK(uni.trials == 10000);
    CHECK(uni.probes.front().estimate >= 0.18);
    CHECK(uni.probes.front().estimate <= 0.22);
    CHECK(uni.probes.front().ci.lo <= 0.2);
    CHECK(0.2 <= uni.probes.front().ci.hi);
    // Replay gives the same counts.
    CHECK(empirical_spread(uniform_sampler(sts7()), 10000, {probe}, 7).probes.front().hits ==
          uni.probes.front().hits);
    // The upper bound, not the estimate, is what the check compares.
    CHECK(check_sigma_spread(uni, uni.probes.front().ci.hi + 1e-9));
    CHECK_FALSE(check_sigma_spread(uni, 0.1));

    CHECK_THROWS_AS(empirical_spread(fixed, 10, {{{0, 1, 2}, {0, 1, 3}}}, 1), InvalidParameter);
}

TEST_CASE("default probes") {
    const auto probes = default_probes(Graph::complete(7), 3, 3, 20, 5);
    std::size_t singles = 0;
    for (const Packing& p : probes) {
        CHECK(verify_packing(Graph::complete(7), p, 3).ok);
        singles += p.size() == 1;
    }
    CHECK(singles == 35);
    CHECK(probes.size() <= 35 + 40);
    CHECK(probes == default_probes(Graph::complete(7), 3, 3, 20, 5));
}
