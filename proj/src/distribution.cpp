#include "expapprox/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "expapprox/quadrature.hpp"

namespace expapprox {

namespace {

void check(bool ok, const std::string& tag, const std::string& msg) {
    if (!ok) throw std::invalid_argument(tag + ": " + msg);
}

// cumulative probabilities for a sorted atom list
std::vector<double> cumulative(const std::vector<std::pair<double, double>>& atoms) {
    std::vector<double> cum(atoms.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) cum[i] = (acc += atoms[i].second);
    return cum;
}

}  // namespace

std::vector<double> DistributionSpec::jump_points(double tail) const {
    std::vector<double> pts;
    if (pmf) {
        for (const auto& [x, p] : *pmf)
            if (p > 0.0) pts.push_back(x);
        return pts;
    }
    if (support_kind == SupportKind::lattice) {
        const double hi = upper(tail);
        for (double x = 0.0; x <= hi + 0.5 * lattice_step; x += lattice_step)
            if (cdf(x) > cdf_left(x)) pts.push_back(x);
    }
    return pts;
}

double DistributionSpec::point_mass(double x) const { return cdf(x) - cdf_left(x); }

double DistributionSpec::cdf_left(double x) const {
    if (pmf) {
        double acc = 0.0;
        for (const auto& [v, p] : *pmf) {
            if (v >= x - 1e-12 * (1.0 + std::abs(x))) break;
            acc += p;
        }
        return acc;
    }
    if (support_kind == SupportKind::lattice) return cdf(x - 0.5 * lattice_step);
    return cdf(x);
}

EmpiricalSample make_sample(std::vector<double> values, std::uint64_t master_seed,
                            std::uint64_t stream_id) {
    check(!values.empty(), "empty-sample", "sample must be nonempty");
    std::sort(values.begin(), values.end());
    return EmpiricalSample{std::move(values), master_seed, stream_id};
}

DistributionSpec make_finite_pmf(std::vector<std::pair<double, double>> pairs) {
    check(!pairs.empty(), "invalid-params", "empty pmf");
    std::sort(pairs.begin(), pairs.end());
    double total = 0.0, m = 0.0, m2 = 0.0;
    for (const auto& [x, p] : pairs) {
        check(x >= 0.0, "invalid-params", "negative support point");
        check(p >= 0.0 && p <= 1.0, "invalid-params", "probability out of [0,1]");
        total += p;
        m += x * p;
        m2 += x * x * p;
    }
    check(std::abs(total - 1.0) <= 1e-12, "invalid-params", "pmf does not sum to 1");

    auto atoms = std::make_shared<std::vector<std::pair<double, double>>>(std::move(pairs));
    auto cum = std::make_shared<std::vector<double>>(cumulative(*atoms));
    cum->back() = 1.0;

    DistributionSpec d;
    d.family = "finite-pmf";
    d.support_kind = SupportKind::finite_pmf;
    d.mean = m;
    d.second_moment = m2;
    d.pmf = *atoms;
    d.cdf = [atoms, cum](double x) {
        double acc = 0.0;
        for (std::size_t i = 0; i < atoms->size(); ++i) {
            if ((*atoms)[i].first > x) break;
            acc = (*cum)[i];
        }
        return acc;
    };
    d.quantile = [atoms, cum](double u) {
        for (std::size_t i = 0; i < atoms->size(); ++i)
            if ((*cum)[i] >= u) return (*atoms)[i].first;
        return atoms->back().first;
    };
    return d;
}

DistributionSpec make_builtin(const std::string& family, const std::vector<double>& params) {
    DistributionSpec d;
    d.family = family;
    if (family == "exponential") {
        check(params.size() == 1, "invalid-params", "exponential(rate)");
        const double lambda = params[0];
        check(lambda > 0.0, "invalid-params", "rate must be > 0");
        d.cdf = [lambda](double x) { return x < 0.0 ? 0.0 : -std::expm1(-lambda * x); };
        d.quantile = [lambda](double u) { return -std::log1p(-u) / lambda; };
        d.mean = 1.0 / lambda;
        d.second_moment = 2.0 / (lambda * lambda);
        d.support_kind = SupportKind::continuous;
        return d;
    }
    if (family == "geometric-from-1" || family == "geometric-from-0") {
        check(params.size() == 1, "invalid-params", "geometric(p)");
        const double p = params[0];
        check(p > 0.0 && p <= 1.0, "invalid-params", "p must be in (0,1]");
        const double q = 1.0 - p;
        const int base = family == "geometric-from-1" ? 1 : 0;
        // P[N <= n] = 1 - q^(n - base + 1) for n >= base
        d.cdf = [q, base](double x) {
            const double n = std::floor(x + 1e-12);
            if (n < base) return 0.0;
            return -std::expm1((n - base + 1.0) * std::log(q));
        };
        d.quantile = [p, q, base](double u) {
            if (q == 0.0) return static_cast<double>(base);
            double k = std::ceil(std::log1p(-u) / std::log(q));
            k = std::max(k, 1.0);
            // guard against floating error at the boundary
            while (-std::expm1(k * std::log(q)) < u) k += 1.0;
            while (k > 1.0 && -std::expm1((k - 1.0) * std::log(q)) >= u) k -= 1.0;
            return k - 1.0 + base;
        };
        d.mean = base == 1 ? 1.0 / p : q / p;
        d.second_moment = base == 1 ? (2.0 - p) / (p * p) : q * (2.0 - p) / (p * p);
        d.support_kind = SupportKind::lattice;
        d.lattice_step = 1.0;
        return d;
    }
    if (family == "uniform") {
        check(params.size() == 2, "invalid-params", "uniform(a,b)");
        const double a = params[0], b = params[1];
        check(a < b, "invalid-params", "need a < b");
        check(a >= 0.0, "invalid-params", "nonnegative support required");
        d.cdf = [a, b](double x) {
            if (x <= a) return 0.0;
            if (x >= b) return 1.0;
            return (x - a) / (b - a);
        };
        d.quantile = [a, b](double u) { return a + u * (b - a); };
        d.mean = 0.5 * (a + b);
        d.second_moment = (a * a + a * b + b * b) / 3.0;
        d.support_kind = SupportKind::continuous;
        return d;
    }
    if (family == "point-mass") {
        check(params.size() == 1, "invalid-params", "point-mass(c)");
        check(params[0] >= 0.0, "invalid-params", "nonnegative support required");
        auto pm = make_finite_pmf({{params[0], 1.0}});
        pm.family = "point-mass";
        return pm;
    }
    if (family == "finite-pmf") {
        // params as flattened (value, prob) pairs
        check(params.size() >= 2 && params.size() % 2 == 0, "invalid-params",
              "finite-pmf takes (value, prob) pairs");
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i = 0; i < params.size(); i += 2)
            pairs.emplace_back(params[i], params[i + 1]);
        return make_finite_pmf(std::move(pairs));
    }
    throw std::invalid_argument("unknown-family: " + family);
}

DistributionSpec scale(const DistributionSpec& dist, double c) {
    check(c > 0.0, "invalid-params", "scale factor must be > 0");
    DistributionSpec d;
    d.family = "scaled(" + dist.family + ")";
    const auto base_cdf = dist.cdf;
    const auto base_q = dist.quantile;
    d.cdf = [base_cdf, c](double x) { return base_cdf(x / c); };
    d.quantile = [base_q, c](double u) { return c * base_q(u); };
    d.mean = c * dist.mean;
    if (dist.second_moment) d.second_moment = c * c * *dist.second_moment;
    d.support_kind = dist.support_kind;
    d.lattice_step = c * dist.lattice_step;
    if (dist.pmf) {
        auto atoms = *dist.pmf;
        for (auto& [x, p] : atoms) x *= c;
        d.pmf = std::move(atoms);
    }
    return d;
}

double tail_integral(const DistributionSpec& dist, double x) {
    if (x <= 0.0) return 0.0;
    const auto jumps = dist.jump_points();
    if (!jumps.empty() &&
        (dist.pmf || dist.support_kind == SupportKind::lattice)) {
        // survival is piecewise constant: integrate exactly between atoms
        double acc = 0.0, prev = 0.0;
        for (double j : jumps) {
            if (j >= x) break;
            acc += (j - prev) * (1.0 - dist.cdf_left(j));
            prev = j;
        }
        acc += (x - prev) * (1.0 - dist.cdf(prev));
        return acc;
    }
    return integrate([&](double y) { return 1.0 - dist.cdf(y); }, 0.0, x, 1e-11);
}

std::pair<double, double> moments(const DistributionSpec& dist) {
    double m2;
    if (dist.second_moment) {
        m2 = *dist.second_moment;
    } else {
        auto m2_at = [&](double tail) {
            const double hi = dist.upper(tail);
            return integrate([&](double x) { return 2.0 * x * (1.0 - dist.cdf(x)); }, 0.0,
                             hi, 1e-11);
        };
        const double a = m2_at(1e-12), b = m2_at(1e-14);
        if (std::abs(a - b) > 1e-6 * (1.0 + std::abs(b)))
            throw std::runtime_error("divergent-moment: second moment quadrature");
        m2 = b;
    }
    return {dist.mean, m2};
}

}  // namespace expapprox
