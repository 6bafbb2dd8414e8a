#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "expapprox/distribution.hpp"

namespace expapprox {

// Finite row-stochastic transition matrix with state labels.
struct ChainSpec {
    std::vector<std::string> states;
    std::vector<std::vector<double>> P;  // row-stochastic within 1e-12

    std::size_t size() const { return P.size(); }
    void validate() const;  // shape, row sums, entry range
};

ChainSpec make_chain(std::vector<std::vector<double>> P,
                     std::vector<std::string> states = {});

ChainSpec two_state_chain(double a, double b);  // P[0->1]=a, P[1->0]=b

bool is_irreducible(const ChainSpec& chain);

// Solves pi P = pi, sum pi = 1 by dense linear solve; residual below 1e-12.
std::vector<double> stationary_distribution(const ChainSpec& chain);

enum class StartKind { stationary, fixed };

// First-visit times to `target`. A stationary start already at the target
// yields 0 (T = inf{t >= 0}); a fixed start counts t > 0.
// normalize_by_pi scales the output by pi_target.
EmpiricalSample simulate_hitting_times(const ChainSpec& chain, std::size_t target,
                                       StartKind start, std::size_t start_state,
                                       std::size_t reps, std::uint64_t seed,
                                       bool normalize_by_pi = false);

// sum_{n>=1} |P^n_ii - pi_i| accumulated until geometric decay is established,
// plus a geometric tail estimate; accurate to tol.
double diagonal_deviation_sum(const ChainSpec& chain, std::size_t i, double tol = 1e-10);

}  // namespace expapprox
