#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "expapprox/bounds.hpp"
#include "expapprox/distribution.hpp"
#include "expapprox/parallel.hpp"

namespace expapprox {

enum class SummandMode { iid, independent_sequence, m_dependent };

// Summand generator for random sums: i.i.d. draws from one law, cycling
// through a list of laws, or an m-dependent moving average of i.i.d. draws.
struct SummandGen {
    SummandMode mode = SummandMode::iid;
    std::vector<DistributionSpec> dists;
    int m = 0;  // window for m_dependent
};

// W = mu^{-1} sum_{i=1}^N X_i. Pass mu > 0 when it is known analytically;
// mu <= 0 requests a pilot estimate from 1e5 draws.
EmpiricalSample simulate_random_sum(const DistributionSpec& n_dist,
                                    const SummandGen& x_gen, double mu,
                                    std::size_t reps, std::uint64_t seed,
                                    ParallelMode mode = ParallelMode::openmp);

enum class PatternMode { start_of_run, declumped_head_run };

// Coin-flip waiting times; heads with probability p. start_of_run waits for
// the given H/T pattern and returns the number of flips before its first
// occurrence starts; declumped_head_run does the same for a run of k heads.
// Values are multiplied by scale_factor (e.g. pi_i or q p^k).
EmpiricalSample simulate_pattern_time(double p, const std::string& pattern,
                                      PatternMode pattern_mode, int k,
                                      std::size_t reps, std::uint64_t seed,
                                      double scale_factor = 1.0,
                                      ParallelMode mode = ParallelMode::openmp);

// Z_n of a Galton-Watson process with the given finite-pmf offspring law.
// With condition_on_survival, rejection-samples on Z_n > 0 and reps counts
// accepted draws.
EmpiricalSample gw_generation_sample(const DistributionSpec& offspring, int n,
                                     std::size_t reps, std::uint64_t seed,
                                     bool condition_on_survival,
                                     ParallelMode mode = ParallelMode::openmp);

// Generation-n counts of one size-biased spine tree realization, split by the
// generation at which particles branched off the spine.
struct GenSplit {
    long long s = 0;       // S_{n,j}
    long long l = 0;       // L_{n,j}
    long long r = 0;       // R_{n,j}
    long long r_star = 0;  // R*_{n,j}
};

struct GenStats {
    int n = 0;
    long long S_n = 0;
    long long L_n = 0;
    long long R_n = 0;
    long long R_n_star = 0;
    std::vector<GenSplit> per_split;  // j = 1..n
};

GenStats spine_sample(const DistributionSpec& offspring, int n, RngState& rng);

std::vector<GenStats> spine_sample_many(const DistributionSpec& offspring, int n,
                                        std::size_t reps, std::uint64_t seed,
                                        ParallelMode mode = ParallelMode::openmp);

struct YaglomPoint {
    int n = 0;
    double dw = 0.0;
    double mc_halfwidth = 0.0;
};

struct YaglomReport {
    std::vector<YaglomPoint> points;
    double slope = 0.0;  // log-log regression of dw on n
    double slope_stderr = 0.0;
};

// Empirical dW of 2 Z_n/(sigma^2 n) | Z_n > 0 against Exp(1) over a list of
// generations (conditioned draws realized through the spine R_n^*), with the
// fitted decay exponent.
YaglomReport yaglom_rate_experiment(const DistributionSpec& offspring,
                                    const std::vector<int>& n_list, std::size_t reps,
                                    std::uint64_t seed);

// Constant Stein coupling tuples for the 0-started geometric sum with unit
// summands: W = N/mu, W' = (N+1)/mu, W'' = W, G = (1-p)/p; g*D = 1 exactly.
std::vector<CouplingTuple> geometric_sum_coupling_tuples(double p, std::size_t reps,
                                                         std::uint64_t seed);

}  // namespace expapprox
