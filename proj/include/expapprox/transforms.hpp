#pragma once

#include <optional>
#include <string>

#include "expapprox/distribution.hpp"

namespace expapprox {

enum class AgingTag { NBUE, NWUE, exponential, neither };

std::string aging_tag_name(AgingTag tag);

struct AgingClass {
    AgingTag tag;
    // for tag == neither: first grid point where the NBUE inequality fails
    std::optional<double> witness;
};

// Equilibrium transform: the law with CDF F_e(x) = (1/EX) int_0^x P[X>y] dy.
// Exponential laws are fixed points; point-mass(c) maps to uniform(0,c).
DistributionSpec equilibrium(const DistributionSpec& dist);

// Size-bias transform: pmf'(k) = k pmf(k)/EX for atomic laws; analytic for
// exponential (Gamma(2,rate)), uniform and point-mass; geometric laws are
// materialized as a truncated pmf (tail mass < 1e-13) and reweighted.
DistributionSpec size_bias(const DistributionSpec& dist);

// Draw from the equilibrium law as U * W^s with U ~ uniform(0,1) independent.
double sample_equilibrium(const DistributionSpec& dist, RngState& rng);

// NBUE/NWUE classification by testing the mean residual life E[X-s | X>s]
// against EX on a 512-point grid (lattice laws: integer multiples of the step).
AgingClass classify_aging(const DistributionSpec& dist);

// E|X^e - X| under the monotone coupling = |EX^2/(2 EX) - EX|; requires the
// law to be NBUE, NWUE or exponential.
double nbue_coupling_gap(const DistributionSpec& dist);

}  // namespace expapprox
