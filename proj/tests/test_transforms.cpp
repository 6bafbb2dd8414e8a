#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "expapprox/metrics.hpp"
#include "expapprox/transforms.hpp"

using namespace expapprox;

TEST_CASE("equilibrium of uniform(0,2) has CDF x - x^2/4") {
    const auto eq = equilibrium(make_builtin("uniform", {0.0, 2.0}));
    for (double x : {0.1, 0.5, 1.0, 1.5, 1.9})
        CHECK(eq.cdf(x) == doctest::Approx(x - x * x / 4.0).epsilon(1e-8));
    CHECK(eq.cdf(2.5) == doctest::Approx(1.0));
    CHECK(eq.mean == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
    for (double u : {0.1, 0.5, 0.9})
        CHECK(eq.cdf(eq.quantile(u)) == doctest::Approx(u).epsilon(1e-8));
}

TEST_CASE("exponential is the equilibrium fixed point") {
    const auto e = make_builtin("exponential", {2.0});
    const auto eq = equilibrium(e);
    CHECK(distance_exact(eq, e, Metric::dK).value == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(distance_exact(eq, e, Metric::dW).value == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("equilibrium of a point mass is uniform") {
    const auto eq = equilibrium(make_builtin("point-mass", {3.0}));
    CHECK(eq.cdf(1.5) == doctest::Approx(0.5));
    CHECK(eq.cdf(3.0) == doctest::Approx(1.0));
    CHECK(eq.mean == doctest::Approx(1.5));
}

TEST_CASE("equilibrium of an atomic law is piecewise linear") {
    // X in {1, 3} with equal mass: survival 1 on [0,1), 1/2 on [1,3); EX = 2
    const auto eq = equilibrium(make_finite_pmf({{1.0, 0.5}, {3.0, 0.5}}));
    CHECK(eq.cdf(0.5) == doctest::Approx(0.25));
    CHECK(eq.cdf(1.0) == doctest::Approx(0.5));
    CHECK(eq.cdf(2.0) == doctest::Approx(0.75));
    CHECK(eq.cdf(3.0) == doctest::Approx(1.0));
    CHECK(eq.quantile(0.75) == doctest::Approx(2.0).epsilon(1e-10));
    // EX^e = EX^2/(2 EX) = 5/4
    CHECK(eq.mean == doctest::Approx(1.25));
}

TEST_CASE("equilibrium of geometric-from-1 interpolates the scaled tail") {
    const double p = 0.3, q = 1.0 - p;
    const auto eq = equilibrium(make_builtin("geometric-from-1", {p}));
    // F_e(k) = p sum_{j=0}^{k-1} q^j = 1 - q^k at integer k (mean 1/p)
    for (int k = 1; k <= 6; ++k)
        CHECK(eq.cdf(k) == doctest::Approx(1.0 - std::pow(q, k)).epsilon(1e-9));
}

TEST_CASE("size bias reweights atoms by their value") {
    const auto sb = size_bias(make_finite_pmf({{1.0, 0.5}, {2.0, 0.5}}));
    CHECK(sb.point_mass(1.0) == doctest::Approx(1.0 / 3.0));
    CHECK(sb.point_mass(2.0) == doctest::Approx(2.0 / 3.0));
    CHECK(sb.mean == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("size bias of exponential is Gamma(2)") {
    const auto sb = size_bias(make_builtin("exponential", {1.0}));
    CHECK(sb.mean == doctest::Approx(2.0));
    CHECK(sb.cdf(1.0) == doctest::Approx(1.0 - 2.0 * std::exp(-1.0)).epsilon(1e-10));
    CHECK(sb.cdf(sb.quantile(0.3)) == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("size bias of geometric matches k q^{k-1} p / EX") {
    const double p = 0.4;
    const auto sb = size_bias(make_builtin("geometric-from-1", {p}));
    for (int k = 1; k <= 6; ++k)
        CHECK(sb.point_mass(k) ==
              doctest::Approx(k * std::pow(1 - p, k - 1) * p * p).epsilon(1e-9));
}

TEST_CASE("size bias of uniform(0,b) has CDF x^2/b^2") {
    const auto sb = size_bias(make_builtin("uniform", {0.0, 2.0}));
    CHECK(sb.cdf(1.0) == doctest::Approx(0.25));
    CHECK(sb.quantile(0.25) == doctest::Approx(1.0));
    CHECK(sb.mean == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("U * W^s sampling realizes the equilibrium law") {
    const auto u02 = make_builtin("uniform", {0.0, 2.0});
    const std::size_t n = 100000;
    std::vector<double> values(n);
    RngState rng = derive_stream(31, 0);
    for (auto& v : values) v = sample_equilibrium(u02, rng);
    std::sort(values.begin(), values.end());
    // KS against the exact equilibrium CDF x - x^2/4; 99% band 1.63/sqrt(n)
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fx = values[i] - values[i] * values[i] / 4.0;
        ks = std::max(ks, std::abs(fx - static_cast<double>(i + 1) / n));
    }
    CHECK(ks < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("aging classification") {
    CHECK(classify_aging(make_builtin("uniform", {0.0, 2.0})).tag == AgingTag::NBUE);
    CHECK(classify_aging(make_builtin("exponential", {1.0})).tag ==
          AgingTag::exponential);
    // memoryless at integer grid points: the discrete boundary case
    CHECK(classify_aging(make_builtin("geometric-from-1", {0.1})).tag ==
          AgingTag::exponential);
    // far-apart atoms: mrl at s just below the far atom exceeds the mean,
    // mrl near 0 is below it -> neither, with a witness
    const auto cls = classify_aging(make_finite_pmf({{0.1, 0.9}, {10.0, 0.1}}));
    CHECK(cls.tag == AgingTag::neither);
    CHECK(cls.witness.has_value());
}

TEST_CASE("NBUE implies the equilibrium law is stochastically smaller") {
    const auto u02 = make_builtin("uniform", {0.0, 2.0});
    const auto eq = equilibrium(u02);
    for (int i = 1; i < 40; ++i) {
        const double x = 2.0 * i / 40.0;
        CHECK(eq.cdf(x) >= u02.cdf(x) - 1e-9);
    }
}

TEST_CASE("coupling gap |EX^2/(2EX) - EX|") {
    CHECK(nbue_coupling_gap(make_builtin("uniform", {0.0, 2.0})) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(nbue_coupling_gap(make_builtin("exponential", {1.0})) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_WITH_AS(nbue_coupling_gap(make_finite_pmf({{0.1, 0.9}, {10.0, 0.1}})),
                         doctest::Contains("not-monotone-orderable"),
                         std::runtime_error);
}

TEST_CASE("degenerate laws are rejected") {
    CHECK_THROWS_WITH_AS(equilibrium(make_builtin("point-mass", {0.0})),
                         doctest::Contains("zero-mean"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(size_bias(make_builtin("point-mass", {0.0})),
                         doctest::Contains("zero-mean"), std::invalid_argument);
}
