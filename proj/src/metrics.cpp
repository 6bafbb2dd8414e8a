#include "expapprox/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "expapprox/quadrature.hpp"
#include "expapprox/rng.hpp"

namespace expapprox {

namespace {

constexpr int kGridPoints = 10000;

// 5-point Gauss-Legendre on [a,b]
template <typename F>
double gl5(const F& f, double a, double b) {
    static const double xs[5] = {0.0, 0.5384693101056831, -0.5384693101056831,
                                 0.9061798459386640, -0.9061798459386640};
    static const double ws[5] = {0.5688888888888889, 0.4786286704993665,
                                 0.4786286704993665, 0.2369268850561891,
                                 0.2369268850561891};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) acc += ws[i] * f(c + h * xs[i]);
    return acc * h;
}

std::vector<double> merged_breakpoints(const DistributionSpec& f,
                                       const DistributionSpec& g, double hi) {
    std::vector<double> brk{0.0, hi};
    for (const auto& d : {&f, &g})
        for (double x : d->jump_points())
            if (x > 0.0 && x < hi) brk.push_back(x);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-13; }),
              brk.end());
    return brk;
}

double dk_exact(const DistributionSpec& f, const DistributionSpec& g) {
    const double hi = std::max(f.upper(), g.upper());
    double sup = 0.0;
    for (int i = 0; i <= kGridPoints; ++i) {
        const double x = hi * static_cast<double>(i) / kGridPoints;
        sup = std::max(sup, std::abs(f.cdf(x) - g.cdf(x)));
    }
    for (const auto& d : {&f, &g}) {
        for (double x : d->jump_points()) {
            sup = std::max(sup, std::abs(f.cdf(x) - g.cdf(x)));
            sup = std::max(sup, std::abs(f.cdf_left(x) - g.cdf_left(x)));
        }
    }
    return sup;
}

double dw_exact(const DistributionSpec& f, const DistributionSpec& g) {
    if (!std::isfinite(f.mean) || !std::isfinite(g.mean))
        throw std::runtime_error("divergent-integral: dW needs finite means");
    const double hi = std::max(f.upper(), g.upper());
    const auto brk = merged_breakpoints(f, g, hi);
    const double tol = 1e-8 * (1.0 + f.mean + g.mean);
    auto integrand = [&](double x) { return std::abs(f.cdf(x) - g.cdf(x)); };
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        const double a = brk[i], b = brk[i + 1];
        acc += integrate(integrand, a, b, tol * (b - a) / hi);
    }
    return acc;
}

// exact integral of |F_n - F| for a sorted sample against a target law
double dw_empirical(const std::vector<double>& sorted, const DistributionSpec& target) {
    const std::size_t n = sorted.size();
    const double hi = std::max(target.upper(), sorted.back());
    std::vector<double> brk{0.0, hi};
    for (double x : sorted)
        if (x > 0.0 && x < hi) brk.push_back(x);
    for (double x : target.jump_points())
        if (x > 0.0 && x < hi) brk.push_back(x);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

    double acc = 0.0;
    std::size_t idx = 0;  // values <= current segment start
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        const double a = brk[i], b = brk[i + 1];
        while (idx < n && sorted[idx] <= a) ++idx;
        const double c = static_cast<double>(idx) / n;  // F_n on (a,b)
        auto piece = [&](double lo, double hic) {
            if (hic <= lo) return 0.0;
            // chunked 5-point rule: segments between order statistics are
            // short, but the final tail segment can span the whole support
            const int chunks =
                std::max(1, static_cast<int>(std::ceil((hic - lo) / 0.25)));
            const double h = (hic - lo) / chunks;
            double s = 0.0;
            for (int k = 0; k < chunks; ++k)
                s += gl5([&](double x) { return std::abs(c - target.cdf(x)); },
                         lo + k * h, lo + (k + 1) * h);
            return s;
        };
        // F is monotone, so |c - F| has at most one sign change in (a,b)
        if (c > 0.0 && c < 1.0) {
            const double xc = std::clamp(target.quantile(c), a, b);
            acc += piece(a, xc) + piece(xc, b);
        } else {
            acc += piece(a, b);
        }
    }
    return acc;
}

double dk_empirical(const std::vector<double>& sorted, const DistributionSpec& target) {
    const std::size_t n = sorted.size();
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fx = target.cdf(sorted[i]);
        sup = std::max(sup, static_cast<double>(i + 1) / n - fx);
        sup = std::max(sup, fx - static_cast<double>(i) / n);
    }
    return sup;
}

}  // namespace

DistanceResult distance_exact(const DistributionSpec& f, const DistributionSpec& g,
                              Metric metric) {
    DistanceResult r;
    r.metric = metric;
    r.method = "exact-quadrature";
    r.value = metric == Metric::dK ? dk_exact(f, g) : dw_exact(f, g);
    return r;
}

DistanceResult distance_empirical(const EmpiricalSample& sample,
                                  const DistributionSpec& target, Metric metric,
                                  int bootstrap_resamples) {
    if (sample.values.size() < 2)
        throw std::invalid_argument("empty-sample: need n >= 2");
    auto stat = [&](const std::vector<double>& sorted) {
        return metric == Metric::dK ? dk_empirical(sorted, target)
                                    : dw_empirical(sorted, target);
    };

    DistanceResult r;
    r.metric = metric;
    r.method = "empirical";
    r.value = stat(sample.values);

    if (bootstrap_resamples > 0) {
        const std::size_t n = sample.values.size();
        std::vector<double> stats(bootstrap_resamples);
#pragma omp parallel for schedule(dynamic)
        for (int b = 0; b < bootstrap_resamples; ++b) {
            RngState rng = derive_stream(sample.master_seed ^ 0xb007b007b007b007ULL,
                                         (sample.stream_id << 20) + b);
            std::vector<double> res(n);
            for (std::size_t i = 0; i < n; ++i)
                res[i] = sample.values[static_cast<std::size_t>(rng.uniform() * n)];
            std::sort(res.begin(), res.end());
            stats[b] = stat(res);
        }
        std::sort(stats.begin(), stats.end());
        const auto pct = [&](double q) {
            const double pos = q * (stats.size() - 1);
            const std::size_t lo = static_cast<std::size_t>(pos);
            const double w = pos - lo;
            return lo + 1 < stats.size() ? (1 - w) * stats[lo] + w * stats[lo + 1]
                                         : stats[lo];
        };
        r.mc_halfwidth = 0.5 * (pct(0.975) - pct(0.025));
    }
    return r;
}

double dk_from_dw(double dw) {
    if (dw < 0.0) throw std::invalid_argument("invalid-params: negative distance");
    return std::min(1.0, 1.74 * std::sqrt(dw));
}

}  // namespace expapprox
