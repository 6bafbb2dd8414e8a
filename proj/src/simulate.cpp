#include "expapprox/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "expapprox/metrics.hpp"

namespace expapprox {

namespace {

constexpr long long kPopulationCap = 100000000;  // 1e8 individuals

// offspring pmf as a dense vector over counts 0..K with cumulative sums
struct OffspringPmf {
    std::vector<double> cum;       // plain offspring
    std::vector<double> sb_cum;    // size-biased offspring (support >= 1)
    double mean = 0.0;
    double var = 0.0;
};

OffspringPmf extract_offspring(const DistributionSpec& offspring) {
    if (!offspring.pmf)
        throw std::invalid_argument("invalid-params: offspring must be a finite pmf");
    OffspringPmf o;
    long long maxk = 0;
    for (const auto& [x, p] : *offspring.pmf) {
        const long long k = std::llround(x);
        if (std::abs(x - k) > 1e-9 || k < 0)
            throw std::invalid_argument("invalid-params: offspring support must be integers");
        maxk = std::max(maxk, k);
    }
    std::vector<double> pmf(maxk + 1, 0.0);
    for (const auto& [x, p] : *offspring.pmf) pmf[std::llround(x)] += p;
    double m = 0.0, m2 = 0.0;
    for (long long k = 0; k <= maxk; ++k) {
        m += k * pmf[k];
        m2 += static_cast<double>(k) * k * pmf[k];
    }
    o.mean = m;
    o.var = m2 - m * m;
    double acc = 0.0;
    for (double p : pmf) o.cum.push_back(acc += p);
    o.cum.back() = 1.0;
    acc = 0.0;
    for (long long k = 0; k <= maxk; ++k) o.sb_cum.push_back(acc += k * pmf[k] / m);
    o.sb_cum.back() = 1.0;
    return o;
}

long long draw_count(const std::vector<double>& cum, RngState& rng) {
    return std::lower_bound(cum.begin(), cum.end(), rng.uniform()) - cum.begin();
}

// one Galton-Watson step: offspring of z individuals
long long gw_step(long long z, const OffspringPmf& o, RngState& rng) {
    long long next = 0;
    for (long long i = 0; i < z; ++i) next += draw_count(o.cum, rng);
    if (next > kPopulationCap)
        throw std::runtime_error("population-overflow: generation exceeds 1e8");
    return next;
}

// Z_depth started from a single root
long long gw_depth(int depth, const OffspringPmf& o, RngState& rng) {
    long long z = 1;
    for (int d = 0; d < depth && z > 0; ++d) z = gw_step(z, o, rng);
    return z;
}

void require_critical(const OffspringPmf& o) {
    if (std::abs(o.mean - 1.0) > 1e-12)
        throw std::invalid_argument("invalid-params: offspring mean must be 1");
}

}  // namespace

EmpiricalSample simulate_random_sum(const DistributionSpec& n_dist,
                                    const SummandGen& x_gen, double mu,
                                    std::size_t reps, std::uint64_t seed,
                                    ParallelMode mode) {
    if (x_gen.dists.empty())
        throw std::invalid_argument("invalid-params: summand generator needs a law");
    auto one_sum = [&](RngState& rng) {
        const long long n = std::llround(n_dist.sample(rng));
        double sum = 0.0;
        if (x_gen.mode == SummandMode::m_dependent) {
            const int m = x_gen.m;
            std::vector<double> base(n + m);
            for (auto& b : base) b = x_gen.dists[0].sample(rng);
            for (long long i = 0; i < n; ++i) {
                double x = 0.0;
                for (int j = 0; j <= m; ++j) x += base[i + j];
                sum += x / (m + 1.0);
            }
        } else {
            for (long long i = 0; i < n; ++i) {
                const auto& d = x_gen.mode == SummandMode::iid
                                    ? x_gen.dists[0]
                                    : x_gen.dists[i % x_gen.dists.size()];
                sum += d.sample(rng);
            }
        }
        return sum;
    };

    if (mu <= 0.0) {
        constexpr std::size_t kPilot = 100000;
        std::vector<double> pilot(kPilot);
        replicate_map(kPilot, [&](std::size_t r) {
            RngState rng = derive_stream(seed ^ 0x9114075c0ffee000ULL, r);
            pilot[r] = one_sum(rng);
        });
        double acc = 0.0;
        for (double x : pilot) acc += x;
        mu = acc / kPilot;
    }

    std::vector<double> values(reps);
    const double inv_mu = 1.0 / mu;
    replicate_map(reps, [&](std::size_t r) {
        RngState rng = derive_stream(seed, r);
        values[r] = inv_mu * one_sum(rng);
    }, mode);
    return make_sample(std::move(values), seed, 1);
}

EmpiricalSample simulate_pattern_time(double p, const std::string& pattern,
                                      PatternMode pattern_mode, int k,
                                      std::size_t reps, std::uint64_t seed,
                                      double scale_factor, ParallelMode mode) {
    if (!(p > 0.0 && p <= 1.0))
        throw std::invalid_argument("invalid-params: p in (0,1]");
    if (pattern_mode == PatternMode::start_of_run && pattern.empty())
        throw std::invalid_argument("invalid-params: empty pattern");

    std::vector<double> values(reps);
    replicate_map(reps, [&](std::size_t r) {
        RngState rng = derive_stream(seed, r);
        long long t;
        if (pattern_mode == PatternMode::declumped_head_run) {
            int streak = 0;
            long long flips = 0;
            for (;;) {
                ++flips;
                streak = rng.bernoulli(p) ? streak + 1 : 0;
                if (streak == k) break;
            }
            t = flips - k;  // flips before the run starts
        } else {
            const std::size_t len = pattern.size();
            std::uint64_t want = 0, window = 0;
            for (char c : pattern) want = (want << 1) | (c == 'H' ? 1u : 0u);
            const std::uint64_t mask = (len == 64) ? ~0ULL : ((1ULL << len) - 1);
            long long flips = 0;
            for (;;) {
                ++flips;
                window = ((window << 1) | (rng.bernoulli(p) ? 1u : 0u)) & mask;
                if (flips >= static_cast<long long>(len) && window == want) break;
            }
            t = flips - static_cast<long long>(len);  // flips before the match starts
        }
        values[r] = scale_factor * static_cast<double>(t);
    }, mode);
    return make_sample(std::move(values), seed, 2);
}

EmpiricalSample gw_generation_sample(const DistributionSpec& offspring, int n,
                                     std::size_t reps, std::uint64_t seed,
                                     bool condition_on_survival, ParallelMode mode) {
    if (n < 1) throw std::invalid_argument("invalid-params: n >= 1");
    const auto o = extract_offspring(offspring);
    if (condition_on_survival && o.cum[0] >= 1.0)
        throw std::invalid_argument("extinction-only: offspring is point mass at 0");

    std::vector<double> values(reps);
    replicate_map(reps, [&](std::size_t r) {
        RngState rng = derive_stream(seed, r);
        for (;;) {
            const long long z = gw_depth(n, o, rng);
            if (!condition_on_survival || z > 0) {
                values[r] = static_cast<double>(z);
                break;
            }
        }
    }, mode);
    return make_sample(std::move(values), seed, 3);
}

GenStats spine_sample(const DistributionSpec& offspring, int n, RngState& rng) {
    if (n < 1) throw std::invalid_argument("invalid-params: n >= 1");
    const auto o = extract_offspring(offspring);
    require_critical(o);

    GenStats g;
    g.n = n;
    g.per_split.resize(n);
    auto split_at = [&](int depth, RngState& r) {
        // offspring of the spine vertex: size-biased count, uniform spine child
        const long long k = draw_count(o.sb_cum, r);
        const long long c = 1 + static_cast<long long>(r.uniform() * k);
        long long left = 0, right = 0;
        for (long long i = 0; i < c - 1; ++i) left += gw_depth(depth, o, r);
        for (long long i = c; i < k; ++i) right += gw_depth(depth, o, r);
        return std::pair<long long, long long>{left, right};
    };
    for (int j = 1; j <= n; ++j) {
        const int depth = n - j;
        auto [left, right] = split_at(depth, rng);
        GenSplit& sp = g.per_split[j - 1];
        sp.l = left;
        sp.r = right;
        sp.s = left + right;
        if (left == 0) {
            sp.r_star = right;
        } else {
            // resample the split conditioned on a zero left count (Eq. 39's R')
            long long tries = 0;
            for (;;) {
                if (++tries > 1000000)
                    throw std::runtime_error("rejection-cap: L=0 conditioning failed");
                auto [l2, r2] = split_at(depth, rng);
                if (l2 == 0) {
                    sp.r_star = r2;
                    break;
                }
            }
        }
        g.L_n += sp.l;
        g.R_n += sp.r;
        g.R_n_star += sp.r_star;
        g.S_n += sp.s;
    }
    g.S_n += 1;       // the spine vertex itself
    g.R_n += 1;
    g.R_n_star += 1;
    return g;
}

std::vector<GenStats> spine_sample_many(const DistributionSpec& offspring, int n,
                                        std::size_t reps, std::uint64_t seed,
                                        ParallelMode mode) {
    std::vector<GenStats> out(reps);
    replicate_map(reps, [&](std::size_t r) {
        RngState rng = derive_stream(seed, r);
        out[r] = spine_sample(offspring, n, rng);
    }, mode);
    return out;
}

YaglomReport yaglom_rate_experiment(const DistributionSpec& offspring,
                                    const std::vector<int>& n_list, std::size_t reps,
                                    std::uint64_t seed) {
    const auto o = extract_offspring(offspring);
    require_critical(o);
    if (o.var <= 0.0)
        throw std::invalid_argument("invalid-params: offspring variance must be > 0");
    const auto target = make_builtin("exponential", {1.0});

    YaglomReport rep;
    for (std::size_t k = 0; k < n_list.size(); ++k) {
        const int n = n_list[k];
        const auto stats = spine_sample_many(offspring, n, reps, seed + k);
        std::vector<double> scaled(stats.size());
        const double factor = 2.0 / (o.var * n);
        for (std::size_t i = 0; i < stats.size(); ++i)
            scaled[i] = factor * static_cast<double>(stats[i].R_n_star);
        const auto d = distance_empirical(make_sample(std::move(scaled), seed + k, 4),
                                          target, Metric::dW);
        rep.points.push_back({n, d.value, d.mc_halfwidth.value_or(0.0)});
    }

    // log-log least squares for the decay exponent
    const std::size_t m = rep.points.size();
    if (m >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& pt : rep.points) {
            const double x = std::log(pt.n), y = std::log(std::max(pt.dw, 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double denom = m * sxx - sx * sx;
        rep.slope = (m * sxy - sx * sy) / denom;
        double sse = 0.0;
        const double intercept = (sy - rep.slope * sx) / m;
        for (const auto& pt : rep.points) {
            const double e =
                std::log(std::max(pt.dw, 1e-300)) - intercept - rep.slope * std::log(pt.n);
            sse += e * e;
        }
        if (m > 2)
            rep.slope_stderr = std::sqrt(sse / (m - 2) / (sxx - sx * sx / m));
    }
    return rep;
}

std::vector<CouplingTuple> geometric_sum_coupling_tuples(double p, std::size_t reps,
                                                         std::uint64_t seed) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("invalid-params: p in (0,1)");
    const auto n_dist = make_builtin("geometric-from-0", {p});
    const double mu = (1.0 - p) / p;
    const double g = (1.0 - p) / p;
    std::vector<CouplingTuple> out(reps);
    replicate_map(reps, [&](std::size_t r) {
        RngState rng = derive_stream(seed, r);
        const double n = n_dist.sample(rng);
        out[r] = CouplingTuple{n / mu, (n + 1.0) / mu, n / mu, g};
    });
    return out;
}

}  // namespace expapprox
