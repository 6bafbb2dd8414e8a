#pragma once

#include <cstdint>
#include <vector>

#include "expapprox/chain.hpp"
#include "expapprox/distribution.hpp"
#include "expapprox/metrics.hpp"

namespace expapprox {

// Exact probability mass function over nonnegative integers; probs sum plus
// truncation_mass equals 1 within 1e-12, and accepted results always carry
// truncation_mass < 1e-9.
struct PMF {
    std::vector<long long> support;  // sorted ascending
    std::vector<double> probs;
    double truncation_mass = 0.0;

    double mean() const;
    double prob_at(long long k) const;
};

// Law of Z_n | Z_n > 0.
PMF pmf_conditioned_positive(const PMF& pmf);

DistributionSpec to_distribution(const PMF& pmf);

// total-variation distance between two PMFs (truncation mass counts fully)
double pmf_tv(const PMF& a, const PMF& b);

// Generation-n PMF of a Galton-Watson process from a single root. Offspring
// must be a finite pmf on integers, or a lattice law (materialized to atoms).
// trunc is the initial support cap; it doubles until truncation_mass < 1e-9,
// up to 2^20 (then truncation-overflow).
PMF exact_gw_pmf(const DistributionSpec& offspring, int n, long long trunc = 256);

// n further generations started from an arbitrary population-size PMF;
// exact_gw_pmf(off, a+b) == gw_extend(exact_gw_pmf(off, a), off, b).
PMF gw_extend(const PMF& start, const DistributionSpec& offspring, int n,
              long long trunc = 256);

enum class HittingStart { stationary, fixed };

// PMF of the first-visit time to state i: inf{t >= 0} from a stationary start,
// inf{t > 0} from a fixed start. Iterates the taboo (column-i-zeroed)
// transition matrix; horizon auto-extends until truncation_mass < 1e-9, up to
// 1e6 steps (then truncation-overflow).
PMF exact_hitting_pmf(const ChainSpec& chain, std::size_t i, HittingStart start,
                      std::size_t start_state = 0, std::size_t horizon = 1024);

// distance_exact between Ge(1/(n+1)) started from 1, scaled by 1/n, and Exp(1)
// -- the exact conditioned-generation law for geometric offspring.
double exact_conditioned_geometric_distance(int n, Metric metric);

}  // namespace expapprox
