#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "expapprox/rng.hpp"

namespace expapprox {

enum class SupportKind { continuous, lattice, finite_pmf };

// A nonnegative one-dimensional law exposed through CDF, quantile, sampler and
// the first two moments. Immutable after construction; safe to share across
// threads. Samplers are inverse-CDF on a uniform draw, so two laws driven by
// the same uniforms are monotone (quantile) coupled.
struct DistributionSpec {
    std::string family;
    std::function<double(double)> cdf;       // right-continuous, 0 below 0
    std::function<double(double)> quantile;  // u in (0,1) -> inf{x : F(x) >= u}
    double mean = 0.0;
    std::optional<double> second_moment;
    SupportKind support_kind = SupportKind::continuous;
    double lattice_step = 0.0;  // > 0 iff lattice
    // present iff finite_pmf (or a lattice law materialized as atoms);
    // sorted by value
    std::optional<std::vector<std::pair<double, double>>> pmf;

    double sample(RngState& rng) const { return quantile(rng.uniform()); }

    // upper truncation point q(1 - tail) used by all quadratures
    double upper(double tail = 1e-12) const { return quantile(1.0 - tail); }

    // atoms of the law inside [0, upper(tail)]; empty for continuous laws
    std::vector<double> jump_points(double tail = 1e-12) const;

    // P at an atom (0 for continuous laws)
    double point_mass(double x) const;

    // left limit F(x-)
    double cdf_left(double x) const;
};

// Monte Carlo output carrier: sorted values plus seed provenance.
struct EmpiricalSample {
    std::vector<double> values;  // sorted ascending
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
    std::size_t n() const { return values.size(); }
};

EmpiricalSample make_sample(std::vector<double> values, std::uint64_t master_seed,
                            std::uint64_t stream_id);

// Built-in families:
//   exponential(rate), geometric-from-1(p), geometric-from-0(p),
//   uniform(a,b), point-mass(c)
DistributionSpec make_builtin(const std::string& family, const std::vector<double>& params);

DistributionSpec make_finite_pmf(std::vector<std::pair<double, double>> pairs);

// Law of c*X. Plumbing for "scaled" laws (e.g. p*N for geometric N).
DistributionSpec scale(const DistributionSpec& dist, double c);

// Stored moments when analytic, else quadrature against the tail with
// truncation at quantile(1-1e-12) and a doubling convergence check.
std::pair<double, double> moments(const DistributionSpec& dist);

// Integral of P[X > y] over [0, x]; equals mean * F_e(x).
double tail_integral(const DistributionSpec& dist, double x);

}  // namespace expapprox
