#include "expapprox/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace expapprox {

double PMF::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) m += support[i] * probs[i];
    return m;
}

double PMF::prob_at(long long k) const {
    const auto it = std::lower_bound(support.begin(), support.end(), k);
    if (it == support.end() || *it != k) return 0.0;
    return probs[it - support.begin()];
}

PMF pmf_conditioned_positive(const PMF& pmf) {
    PMF out;
    out.truncation_mass = pmf.truncation_mass;
    double mass = 0.0;
    for (std::size_t i = 0; i < pmf.support.size(); ++i)
        if (pmf.support[i] > 0) mass += pmf.probs[i];
    mass += pmf.truncation_mass;
    if (mass <= 0.0) throw std::runtime_error("extinction-only: no positive mass");
    for (std::size_t i = 0; i < pmf.support.size(); ++i)
        if (pmf.support[i] > 0) {
            out.support.push_back(pmf.support[i]);
            out.probs.push_back(pmf.probs[i] / mass);
        }
    out.truncation_mass /= mass;
    return out;
}

DistributionSpec to_distribution(const PMF& pmf) {
    std::vector<std::pair<double, double>> pairs;
    double total = 0.0;
    for (std::size_t i = 0; i < pmf.support.size(); ++i) total += pmf.probs[i];
    for (std::size_t i = 0; i < pmf.support.size(); ++i)
        pairs.emplace_back(static_cast<double>(pmf.support[i]), pmf.probs[i] / total);
    return make_finite_pmf(std::move(pairs));
}

double pmf_tv(const PMF& a, const PMF& b) {
    double tv = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.support.size() || j < b.support.size()) {
        if (j == b.support.size() ||
            (i < a.support.size() && a.support[i] < b.support[j])) {
            tv += a.probs[i++];
        } else if (i == a.support.size() || b.support[j] < a.support[i]) {
            tv += b.probs[j++];
        } else {
            tv += std::abs(a.probs[i++] - b.probs[j++]);
        }
    }
    return 0.5 * (tv + a.truncation_mass + b.truncation_mass);
}

namespace {

constexpr long long kMaxTrunc = 1 << 20;

// dense offspring pmf over 0..K
std::vector<double> dense_offspring(const DistributionSpec& offspring) {
    std::vector<std::pair<double, double>> atoms;
    if (offspring.pmf) {
        atoms = *offspring.pmf;
    } else if (offspring.support_kind == SupportKind::lattice) {
        for (double x : offspring.jump_points(1e-14))
            atoms.emplace_back(x, offspring.point_mass(x));
    } else {
        throw std::invalid_argument("invalid-params: offspring must be discrete");
    }
    long long maxk = 0;
    for (const auto& [x, p] : atoms) {
        const long long k = std::llround(x);
        if (std::abs(x - k) > 1e-9 || k < 0)
            throw std::invalid_argument("invalid-params: offspring support must be integers");
        maxk = std::max(maxk, k);
    }
    std::vector<double> pmf(maxk + 1, 0.0);
    double total = 0.0;
    for (const auto& [x, p] : atoms) {
        pmf[std::llround(x)] += p;
        total += p;
    }
    for (double& p : pmf) p /= total;  // absorbs any 1e-14 materialization tail
    return pmf;
}

struct Dense {
    std::vector<double> q;  // index = population size
    double lost = 0.0;      // mass pushed beyond the cap
};

// a (*) b truncated at cap; mass beyond cap is dropped (recovered by the
// caller from total-mass conservation)
std::vector<double> conv_trunc(const std::vector<double>& a,
                               const std::vector<double>& b, long long cap) {
    std::vector<double> c(
        std::min<std::size_t>(a.size() + b.size() - 1, cap + 1), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0.0) continue;
            const std::size_t k = i + j;
            if (k <= static_cast<std::size_t>(cap)) c[k] += a[i] * b[j];
        }
    }
    return c;
}

// off^{*j} truncated at cap by binary exponentiation
std::vector<double> conv_power(const std::vector<double>& off, long long j,
                               long long cap) {
    std::vector<double> result(1, 1.0);
    std::vector<double> base = off;
    while (j > 0) {
        if (j & 1) result = conv_trunc(result, base, cap);
        j >>= 1;
        if (j) base = conv_trunc(base, base, cap);
    }
    return result;
}

double mass_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

// one GW step: law of the sum of `size` offspring draws, mixed over sizes.
// Sweeps an incremental convolution power of the offspring pmf over the
// occupied population range so each size j reuses the (j-1)-fold convolution.
Dense gw_step_dense(const Dense& cur, const std::vector<double>& off, long long cap) {
    Dense next;
    next.q.assign(cap + 1, 0.0);
    next.lost = cur.lost;
    long long lo = -1, hi = -1;
    for (long long j = 0; j < static_cast<long long>(cur.q.size()); ++j)
        if (cur.q[j] > 0.0) {
            if (lo < 0) lo = j;
            hi = j;
        }
    if (lo < 0) return next;  // all mass already lost
    // power = off^{*j}; fast-forward past the empty prefix (off sums to 1
    // exactly, so the truncated mass is 1 - sum(power))
    std::vector<double> power = conv_power(off, lo, cap);
    double power_lost = 1.0 - mass_of(power);
    for (long long j = lo; j <= hi; ++j) {
        const double w = cur.q[j];
        if (w > 0.0) {
            for (std::size_t k = 0; k < power.size(); ++k) next.q[k] += w * power[k];
            next.lost += w * power_lost;
        }
        if (j == hi) break;
        // advance to off^{*(j+1)}
        std::vector<double> np(std::min<std::size_t>(power.size() + off.size() - 1,
                                                     cap + 1),
                               0.0);
        for (std::size_t a = 0; a < power.size(); ++a) {
            if (power[a] == 0.0) continue;
            for (std::size_t b = 0; b < off.size(); ++b) {
                const std::size_t idx = a + b;
                if (idx <= static_cast<std::size_t>(cap))
                    np[idx] += power[a] * off[b];
                else
                    power_lost += power[a] * off[b];
            }
        }
        power.swap(np);
    }
    return next;
}

PMF finish(const Dense& d) {
    PMF out;
    for (std::size_t k = 0; k < d.q.size(); ++k)
        if (d.q[k] > 0.0) {
            out.support.push_back(static_cast<long long>(k));
            out.probs.push_back(d.q[k]);
        }
    out.truncation_mass = d.lost;
    return out;
}

}  // namespace

PMF gw_extend(const PMF& start, const DistributionSpec& offspring, int n,
              long long trunc) {
    if (n < 0) throw std::invalid_argument("invalid-params: n >= 0");
    const auto off = dense_offspring(offspring);
    for (long long cap = std::max<long long>(trunc, 16); cap <= kMaxTrunc; cap *= 2) {
        Dense d;
        long long maxs = 0;
        for (long long s : start.support) maxs = std::max(maxs, s);
        d.q.assign(std::min(maxs, cap) + 1, 0.0);
        d.lost = start.truncation_mass;
        for (std::size_t i = 0; i < start.support.size(); ++i) {
            if (start.support[i] <= cap)
                d.q[start.support[i]] += start.probs[i];
            else
                d.lost += start.probs[i];
        }
        for (int step = 0; step < n; ++step) {
            d = gw_step_dense(d, off, cap);
            if (d.lost >= 1e-9) break;  // lost mass is monotone; cap too small
        }
        if (d.lost < 1e-9) return finish(d);
    }
    throw std::runtime_error("truncation-overflow: support cap 2^20 exceeded");
}

PMF exact_gw_pmf(const DistributionSpec& offspring, int n, long long trunc) {
    PMF root;
    root.support = {1};
    root.probs = {1.0};
    return gw_extend(root, offspring, n, trunc);
}

PMF exact_hitting_pmf(const ChainSpec& chain, std::size_t i, HittingStart start,
                      std::size_t start_state, std::size_t horizon) {
    if (!is_irreducible(chain)) throw std::runtime_error("reducible-chain");
    const std::size_t n = chain.size();
    if (i >= n || start_state >= n)
        throw std::invalid_argument("invalid-params: state index out of range");

    PMF out;
    std::vector<double> v(n, 0.0);
    if (start == HittingStart::stationary) {
        const auto pi = stationary_distribution(chain);
        out.support.push_back(0);
        out.probs.push_back(pi[i]);  // T = 0 when already at the target
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) v[j] = pi[j];
    } else {
        v[start_state] = 1.0;
    }

    constexpr std::size_t kMaxSteps = 1000000;
    std::vector<double> w(n);
    double remaining = 0.0;
    for (double x : v) remaining += x;
    for (std::size_t k = 1; k <= kMaxSteps; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t s = 0; s < n; ++s) acc += v[s] * chain.P[s][j];
            w[j] = acc;
        }
        if (w[i] > 0.0) {
            out.support.push_back(static_cast<long long>(k));
            out.probs.push_back(w[i]);
        }
        remaining -= w[i];
        w[i] = 0.0;  // taboo: hitting at k removes the mass
        v.swap(w);
        if (k >= horizon && remaining < 1e-9) {
            out.truncation_mass = std::max(remaining, 0.0);
            return out;
        }
    }
    throw std::runtime_error("truncation-overflow: chain mixes too slowly");
}

double exact_conditioned_geometric_distance(int n, Metric metric) {
    if (n < 1) throw std::invalid_argument("invalid-params: n >= 1");
    const auto cond = scale(make_builtin("geometric-from-1", {1.0 / (n + 1.0)}),
                            1.0 / static_cast<double>(n));
    return distance_exact(cond, make_builtin("exponential", {1.0}), metric).value;
}

}  // namespace expapprox
