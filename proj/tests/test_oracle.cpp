#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "expapprox/oracle.hpp"

using namespace expapprox;

namespace {

DistributionSpec geo_half_offspring() {
    // geometric-from-0(1/2) truncated far into the tail; critical mean 1
    std::vector<std::pair<double, double>> atoms;
    double rest = 1.0;
    for (int k = 0; k < 60; ++k) {
        const double p = std::pow(0.5, k + 1);
        atoms.push_back({static_cast<double>(k), p});
        rest -= p;
    }
    atoms.back().second += rest;
    return make_finite_pmf(std::move(atoms));
}

ChainSpec random_four_state() {
    return make_chain({{0.3, 0.3, 0.2, 0.2},
                       {0.1, 0.6, 0.2, 0.1},
                       {0.4, 0.1, 0.4, 0.1},
                       {0.2, 0.2, 0.2, 0.4}});
}

}  // namespace

TEST_CASE("pmf invariants: normalization, mean, conditioning") {
    const auto pmf = exact_gw_pmf(geo_half_offspring(), 4);
    const double total =
        std::accumulate(pmf.probs.begin(), pmf.probs.end(), 0.0) + pmf.truncation_mass;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pmf.truncation_mass < 1e-9);
    // criticality: E Z_n = 1 for every n
    CHECK(pmf.mean() == doctest::Approx(1.0).epsilon(1e-8));
    const auto cond = pmf_conditioned_positive(pmf);
    CHECK(cond.prob_at(0) == doctest::Approx(0.0));
    const double ctotal = std::accumulate(cond.probs.begin(), cond.probs.end(), 0.0) +
                          cond.truncation_mass;
    CHECK(ctotal == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("geometric(1/2) offspring: extinction probability n/(n+1)") {
    // generating function f(s) = 1/(2-s) iterates to f_n(0) = n/(n+1)
    const auto pmf2 = exact_gw_pmf(geo_half_offspring(), 2);
    CHECK(pmf2.prob_at(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    // three generations: extinction probability n/(n+1) = 3/4, and
    // Z_3 | Z_3 > 0 is geometric-from-1(1/(n+1)) = Ge(1/4) started at 1
    const auto pmf3 = exact_gw_pmf(geo_half_offspring(), 3);
    CHECK(pmf3.prob_at(0) == doctest::Approx(0.75).epsilon(1e-10));
    const auto cond3 = pmf_conditioned_positive(pmf3);
    for (long long k = 1; k <= 30; ++k)
        CHECK(cond3.prob_at(k) ==
              doctest::Approx(std::pow(0.75, k - 1) * 0.25).epsilon(1e-9));
}

TEST_CASE("small offspring laws: exact extinction mass after two generations") {
    // {0:1/4, 1:1/2, 2:1/4}: f(s) = (1+s)^2/4, f(f(0)) = f(1/4) = 25/64;
    // {0:1/2, 2:1/2}: f(s) = (1+s^2)/2, f(f(0)) = f(1/2) = 5/8
    const auto off = make_finite_pmf({{0.0, 0.25}, {1.0, 0.5}, {2.0, 0.25}});
    const auto pmf = exact_gw_pmf(off, 2);
    CHECK(pmf.prob_at(0) == doctest::Approx(25.0 / 64.0).epsilon(1e-13));
    const auto split = make_finite_pmf({{0.0, 0.5}, {2.0, 0.5}});
    CHECK(exact_gw_pmf(split, 2).prob_at(0) == doctest::Approx(0.625).epsilon(1e-13));
}

TEST_CASE("gw_extend satisfies the semigroup property") {
    const auto off = make_finite_pmf({{0.0, 0.25}, {1.0, 0.5}, {2.0, 0.25}});
    const auto direct = exact_gw_pmf(off, 5);
    const auto stepped = gw_extend(exact_gw_pmf(off, 2), off, 3);
    CHECK(pmf_tv(direct, stepped) < 1e-10);
    const auto geo = geo_half_offspring();
    CHECK(pmf_tv(exact_gw_pmf(geo, 6), gw_extend(exact_gw_pmf(geo, 4), geo, 2)) <
          1e-10);
}

TEST_CASE("truncation overflow reported for supercritical growth") {
    const auto doubling = make_finite_pmf({{2.0, 1.0}});
    CHECK_THROWS_WITH_AS(exact_gw_pmf(doubling, 25),
                         doctest::Contains("truncation-overflow"), std::runtime_error);
}

TEST_CASE("hitting-time pmf: two-state closed form") {
    // target state 1 with pi_1 = 0.05; from state 0 the chain enters 1 with
    // probability a = 0.05 each step, so T | T > 0 is geometric
    const auto chain = two_state_chain(0.05, 0.95);
    const auto pmf = exact_hitting_pmf(chain, 1, HittingStart::stationary);
    CHECK(pmf.prob_at(0) == doctest::Approx(0.05).epsilon(1e-12));
    for (long long k = 1; k <= 40; ++k)
        CHECK(pmf.prob_at(k) ==
              doctest::Approx(0.95 * std::pow(0.95, k - 1) * 0.05).epsilon(1e-10));
    const double total =
        std::accumulate(pmf.probs.begin(), pmf.probs.end(), 0.0) + pmf.truncation_mass;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hitting-time pmf: deterministic cycle returns in exactly n steps") {
    const auto cycle = make_chain({{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}});
    const auto pmf = exact_hitting_pmf(cycle, 0, HittingStart::fixed, 0);
    CHECK(pmf.prob_at(3) == doctest::Approx(1.0));
    CHECK(pmf.mean() == doctest::Approx(3.0));
    // from state 1 the first visit takes 2 steps
    const auto pmf2 = exact_hitting_pmf(cycle, 0, HittingStart::fixed, 1);
    CHECK(pmf2.prob_at(2) == doctest::Approx(1.0));
}

TEST_CASE("renewal identity: pi_i E T_{pi,i} = sum_k k pi_i P[T = k]") {
    // Kac's formula: from a fixed start at i, E T_{i,i} = 1 / pi_i
    for (const auto& chain : {two_state_chain(0.2, 0.3), random_four_state()}) {
        const auto pi = stationary_distribution(chain);
        for (std::size_t i = 0; i < chain.size(); ++i) {
            const auto ret = exact_hitting_pmf(chain, i, HittingStart::fixed, i);
            CHECK(ret.mean() == doctest::Approx(1.0 / pi[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("conditioned geometric distance halves when n doubles") {
    const double d40 = exact_conditioned_geometric_distance(40, Metric::dK);
    const double d80 = exact_conditioned_geometric_distance(80, Metric::dK);
    CHECK(d40 / d80 > 1.8);
    CHECK(d40 / d80 < 2.2);
    const double w40 = exact_conditioned_geometric_distance(40, Metric::dW);
    CHECK(w40 > 0.0);
    CHECK(w40 < 1.0 / 20.0);
}

TEST_CASE("to_distribution renormalizes and pmf_tv is a metric on examples") {
    const auto off = make_finite_pmf({{0.0, 0.25}, {1.0, 0.5}, {2.0, 0.25}});
    const auto pmf = exact_gw_pmf(off, 3);
    const auto dist = to_distribution(pmf);
    CHECK(dist.cdf(1e9) == doctest::Approx(1.0));
    CHECK(pmf_tv(pmf, pmf) == doctest::Approx(0.0));
    const auto other = exact_gw_pmf(off, 4);
    const double tv = pmf_tv(pmf, other);
    CHECK(tv > 0.0);
    CHECK(tv <= 1.0);
}
