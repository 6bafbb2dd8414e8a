#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "expapprox/chain.hpp"

using namespace expapprox;

namespace {

// a fixed irreducible 4-state chain used across the suite
ChainSpec four_state() {
    return make_chain({{0.1, 0.4, 0.3, 0.2},
                       {0.25, 0.25, 0.25, 0.25},
                       {0.5, 0.1, 0.2, 0.2},
                       {0.05, 0.05, 0.3, 0.6}});
}

}  // namespace

TEST_CASE("validation rejects malformed matrices") {
    CHECK_THROWS_WITH_AS(make_chain({{0.5, 0.4}, {0.5, 0.5}}),
                         doctest::Contains("invalid-params"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_chain({{1.2, -0.2}, {0.5, 0.5}}),
                         doctest::Contains("invalid-params"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_chain({{1.0, 0.0}}), doctest::Contains("invalid-params"),
                         std::invalid_argument);
    CHECK_NOTHROW(make_chain({{0.5, 0.5}, {0.25, 0.75}}));
}

TEST_CASE("irreducibility detection") {
    CHECK(is_irreducible(two_state_chain(0.05, 0.95)));
    CHECK(is_irreducible(four_state()));
    // absorbing state 1
    CHECK_FALSE(is_irreducible(make_chain({{0.5, 0.5}, {0.0, 1.0}})));
    CHECK_THROWS_WITH_AS(stationary_distribution(make_chain({{0.5, 0.5}, {0.0, 1.0}})),
                         doctest::Contains("reducible-chain"), std::runtime_error);
}

TEST_CASE("stationary distribution of the two-state chain is (b, a)/(a+b)") {
    const auto pi = stationary_distribution(two_state_chain(0.05, 0.95));
    CHECK(pi[0] == doctest::Approx(0.95).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("stationary distribution fixed point checked by power iteration") {
    const auto chain = four_state();
    auto pi = stationary_distribution(chain);
    CHECK(std::accumulate(pi.begin(), pi.end(), 0.0) == doctest::Approx(1.0));
    std::vector<double> v = pi;
    for (int step = 0; step < 200; ++step) {
        std::vector<double> w(4, 0.0);
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) w[j] += v[k] * chain.P[k][j];
        v = w;
    }
    for (int j = 0; j < 4; ++j) CHECK(v[j] == doctest::Approx(pi[j]).epsilon(1e-12));
}

TEST_CASE("hitting times: stationary start matches E T = pi-weighted renewal mean") {
    // E T_{i,i} = 1/pi_i, and from stationarity E T_{pi,i} relates through the
    // renewal identity; check the simulated mean of pi_i * T_{pi,i} against
    // the exact value sum_k k pi_i P[T_ii > k]
    const auto chain = two_state_chain(0.05, 0.95);
    const std::size_t target = 1;
    const auto s = simulate_hitting_times(chain, target, StartKind::stationary, 0,
                                          200000, 99, /*normalize_by_pi=*/true);
    const double mean =
        std::accumulate(s.values.begin(), s.values.end(), 0.0) / s.values.size();
    // for this chain T | T>0 is geometric with success 0.05 started from 1,
    // so E[pi T] = 0.05 * (0.95 * 20) = 0.95
    CHECK(mean == doctest::Approx(0.95).epsilon(0.02));
    // stationary start puts an atom at zero with mass pi_i
    const double zeros =
        std::count(s.values.begin(), s.values.end(), 0.0) /
        static_cast<double>(s.values.size());
    CHECK(zeros == doctest::Approx(0.05).epsilon(0.1));
}

TEST_CASE("hitting times from a fixed start are strictly positive") {
    const auto s = simulate_hitting_times(four_state(), 2, StartKind::fixed, 2, 5000, 7);
    for (double v : s.values) CHECK(v >= 1.0);
}

TEST_CASE("hitting-time simulation is reproducible") {
    const auto a = simulate_hitting_times(four_state(), 1, StartKind::stationary, 0,
                                          2000, 1234);
    const auto b = simulate_hitting_times(four_state(), 1, StartKind::stationary, 0,
                                          2000, 1234);
    CHECK(a.values == b.values);
}

TEST_CASE("diagonal deviation sum: closed form for the two-state chain") {
    // P^n_ii - pi_i = (1-pi_i) lambda^n with lambda = 1 - a - b
    const double a = 0.2, b = 0.3;
    const auto chain = two_state_chain(a, b);
    const double lambda = 1.0 - a - b;
    const double pi0 = b / (a + b);
    const double expected = (1.0 - pi0) * lambda / (1.0 - lambda);
    CHECK(diagonal_deviation_sum(chain, 0) == doctest::Approx(expected).epsilon(1e-6));
    // a + b = 1 mixes in one step: the sum is exactly zero
    CHECK(diagonal_deviation_sum(two_state_chain(0.05, 0.95), 1) ==
          doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("diagonal deviation sum is finite and small for the 4-state chain") {
    const double s = diagonal_deviation_sum(four_state(), 0);
    CHECK(s >= 0.0);
    CHECK(s < 5.0);
}
