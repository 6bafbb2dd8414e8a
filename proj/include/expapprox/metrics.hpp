#pragma once

#include <optional>
#include <string>

#include "expapprox/distribution.hpp"

namespace expapprox {

enum class Metric { dK, dW };

inline std::string metric_name(Metric m) { return m == Metric::dK ? "dK" : "dW"; }

struct DistanceResult {
    Metric metric;
    double value = 0.0;
    std::string method;  // exact-quadrature | empirical | closed-form
    std::optional<double> mc_halfwidth;  // present iff empirical
};

// Exact distance between two specified laws.
// dK: supremum of |F-G| over both laws' jump points (both one-sided limits)
// plus a 1e4-point grid. dW: piecewise adaptive quadrature of |F-G| with
// breakpoints at every atom, truncated at max quantile(1-1e-12).
DistanceResult distance_exact(const DistributionSpec& f, const DistributionSpec& g,
                              Metric metric);

// Distance between an empirical sample and a target law. dK is the classical
// one-sample KS statistic; dW integrates |F_n - F| exactly piecewise between
// order statistics. mc_halfwidth: 200 bootstrap resamples, 95% coverage.
DistanceResult distance_empirical(const EmpiricalSample& sample,
                                  const DistributionSpec& target, Metric metric,
                                  int bootstrap_resamples = 200);

// Kolmogorov bound from a Wasserstein distance to Exp(1): min(1, 1.74*sqrt(dw)).
double dk_from_dw(double dw);

}  // namespace expapprox
