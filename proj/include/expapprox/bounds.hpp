#pragma once

#include <optional>
#include <string>
#include <vector>

#include "expapprox/metrics.hpp"

namespace expapprox {

// One realization (w, w', w'', g) of a Stein coupling; D = w'-w, D' = w''-w.
struct CouplingTuple {
    double w = 0.0;
    double w_prime = 0.0;
    double w_double_prime = 0.0;
    double g = 0.0;
};

// Error-term bundle feeding the abstract coupling bound. r1 is analytic
// (supremum over a function class; no sampling estimator), default 0 for
// exact constant Stein couplings.
struct RTerms {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    double r3p = 0.0;
    double r4 = 0.0;
    double r4p = 0.0;
    double r5 = 0.0;
    double r5p = 0.0;
    // thresholds recorded with r5/r5p
    double alpha = 0.0;
    double beta = 0.0;
    double beta_p = 0.0;
};

struct BoundReport {
    std::string theorem_id;
    Metric metric = Metric::dW;
    double value = 0.0;  // min(1, sum of terms) for dK, plain sum for dW
    std::vector<std::pair<std::string, double>> terms;
};

// value from the terms map, bit-for-bit the same formula used at build time
double recompute(const BoundReport& report);

// dK(W) <= 12 b + 2 P[|We-W| > b],  dK(We) <= b + P,
// dW(W) <= 2 E|We-W|,               dK(We) = dW(We) <= E|We-W|.
std::vector<BoundReport> thm1_bounds(std::optional<double> e_abs_diff,
                                     std::optional<double> beta,
                                     std::optional<double> p_exceed);

// dW <= r1 + r2 + 2r3 + 2r3' + 2r4 + 2r4'
// dK <= 2r1 + 2r2 + 2r5 + 2r5' + 22(ab+1)b' + 12ab^2
std::vector<BoundReport> thm2_bounds(const RTerms& r);

// Monte Carlo averages of the defining r-term expressions over supplied
// coupling tuples. The conditional expectation in r2 is approximated by
// equal-count binning on w'' (64 bins).
RTerms estimate_r_terms(const std::vector<CouplingTuple>& tuples, double alpha,
                        double beta, double beta_p, double r1 = 0.0);

// Random-sum bounds: dW <= 2/mu (e_x_gap + sup_mu_i * e_nm_gap),
// dK <= 12/mu (quantile_gap + C K).
std::vector<BoundReport> thm3_bounds(double mu, double sup_mu_i, double e_x_gap,
                                     double e_nm_gap, double quantile_gap, double C,
                                     double K);

// NBUE/NWUE random-sum corollary:
// dW <= 2/mu * sup|EXi^2/2 - 1| + 2 |EN^2/(2 mu^2) + 1/(2 mu) - 1|.
BoundReport random_sum_nbue_bound(double mu, double sup_half_m2_gap, double e_n2);

struct Thm4DwTerms {
    double e_cross = 0.0;  // E{S(N,N')(1 + S(N'',N))}, simulation-supplied
    double e_snn = 0.0;    // E S(N'',N)
};

// dK <= qs/(p mu) + 22 C K2/mu + 2 C^2 K1 (11 K2 + 6 K1)/(p mu^2);
// dW (when the expectation terms are supplied)
//    <= qs/(p mu) + 4q e_cross/(p mu^2) + 4 e_snn/mu.
std::vector<BoundReport> thm4_bounds(double p, double mu, double s, double C,
                                     double K1, double K2,
                                     std::optional<Thm4DwTerms> dw_terms = {});

enum class HittingVariant { renewal_gap, mismatch_prob, stationary_time, mixing_sum };

struct HittingInputs {
    std::optional<double> pi_i;
    std::optional<double> e_gap;          // E|T_{pi,i} - T_{i,i}|
    std::optional<double> p_neq;          // P[T_{pi,i} != T_{i,i}]
    std::optional<double> e_t_i_pi;       // E T_{i,pi}
    std::optional<double> rho;            // P[T_{i,i} < T_{i,pi}]
    std::optional<double> sup_e_t;        // sup_j E T_{j,i}
    std::optional<double> deviation_sum;  // sum_n |P^n_ii - pi_i|
};

BoundReport hitting_time_bounds(HittingVariant variant, const HittingInputs& inputs);

enum class PatternKind { non_overlapping, head_run };

// head-run: dK(q p^k T, Exp(1)) <= (k+2) p^k;
// non-overlapping pattern with occurrence probability pi_i: dK <= pi_i (k+1).
BoundReport pattern_bounds(double p, int k, PatternKind kind,
                           std::optional<double> pi_i = {});

// For a mean-1 law with the given second moment, rho = |m2/2 - 1|:
// dW(W) <= 2 rho, dK(W) <= 2.47 sqrt(rho), dW(We) <= rho, dK(We) <= rho.
std::vector<BoundReport> nbue_bounds(double second_moment);

}  // namespace expapprox
