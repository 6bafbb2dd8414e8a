#include "expapprox/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "expapprox/quadrature.hpp"

namespace expapprox {

namespace {

// materialize a lattice law as an explicit atom list with tail mass < `tail`
std::vector<std::pair<double, double>> materialize_atoms(const DistributionSpec& dist,
                                                         double tail) {
    std::vector<std::pair<double, double>> atoms;
    const double hi = dist.upper(tail);
    for (double x : dist.jump_points(tail)) {
        const double p = dist.point_mass(x);
        if (p > 0.0) atoms.push_back({x, p});
        if (x > hi) break;
    }
    return atoms;
}

// equilibrium law of a purely atomic dist: F_e is piecewise linear with
// slope (1-F(x_i))/EX between consecutive atoms
DistributionSpec equilibrium_atomic(const DistributionSpec& dist) {
    auto atoms = dist.pmf ? *dist.pmf : materialize_atoms(dist, 1e-15);
    const double m = dist.mean;
    auto xs = std::make_shared<std::vector<double>>();
    auto fe = std::make_shared<std::vector<double>>();  // F_e at xs
    auto slope = std::make_shared<std::vector<double>>();
    xs->push_back(0.0);
    fe->push_back(0.0);
    double acc = 0.0, cum = 0.0, prev = 0.0, m2 = 0.0;
    for (const auto& [x, p] : atoms) m2 += x * x * p;
    for (const auto& [x, p] : atoms) {
        if (x > prev) {
            acc += (x - prev) * (1.0 - cum);
            slope->push_back((1.0 - cum) / m);
            xs->push_back(x);
            fe->push_back(std::min(acc / m, 1.0));
            prev = x;
        }
        cum += p;
    }
    // beyond the last atom the survival is the (possibly tiny) leftover mass
    slope->push_back((1.0 - cum) / m);

    DistributionSpec d;
    d.family = "equilibrium(" + dist.family + ")";
    d.support_kind = SupportKind::continuous;
    d.mean = (dist.second_moment ? *dist.second_moment : m2) / (2.0 * m);
    d.cdf = [xs, fe, slope](double x) {
        if (x <= 0.0) return 0.0;
        auto it = std::upper_bound(xs->begin(), xs->end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs->begin()) - 1;
        return std::min(1.0, (*fe)[i] + (*slope)[i] * (x - (*xs)[i]));
    };
    const auto cdf = d.cdf;
    const double hi = xs->back() + (slope->back() > 0 ? m : 0.0);
    d.quantile = [cdf, xs, fe, slope, hi](double u) {
        auto it = std::lower_bound(fe->begin(), fe->end(), u);
        if (it == fe->end()) return xs->back();
        const std::size_t i = static_cast<std::size_t>(it - fe->begin());
        if (i == 0) return 0.0;
        const double s = (*slope)[i - 1];
        if (s <= 0.0) return (*xs)[i];
        return (*xs)[i - 1] + (u - (*fe)[i - 1]) / s;
    };
    return d;
}

// equilibrium law of a continuous dist via a cached cumulative Simpson grid
DistributionSpec equilibrium_continuous(const DistributionSpec& dist) {
    const double m = dist.mean;
    const double hi = dist.upper(1e-12);
    constexpr int kCells = 8192;
    const double h = hi / kCells;
    auto surv = [cdf = dist.cdf](double x) { return 1.0 - cdf(x); };
    auto prefix = std::make_shared<std::vector<double>>(kCells + 1, 0.0);
    for (int k = 0; k < kCells; ++k) {
        const double a = k * h;
        (*prefix)[k + 1] =
            (*prefix)[k] +
            h / 6.0 * (surv(a) + 4.0 * surv(a + 0.5 * h) + surv(a + h));
    }
    DistributionSpec d;
    d.family = "equilibrium(" + dist.family + ")";
    d.support_kind = SupportKind::continuous;
    d.mean = moments(dist).second / (2.0 * m);
    d.cdf = [prefix, surv, m, h, hi](double x) {
        if (x <= 0.0) return 0.0;
        if (x >= hi) return 1.0;
        const int k = static_cast<int>(x / h);
        const double a = k * h, t = x - a;
        const double part =
            t / 6.0 * (surv(a) + 4.0 * surv(a + 0.5 * t) + surv(x));
        return std::min(1.0, ((*prefix)[k] + part) / m);
    };
    const auto cdf = d.cdf;
    d.quantile = [cdf, hi](double u) {
        return invert_monotone(cdf, u, 0.0, hi, 1e-14);
    };
    return d;
}

DistributionSpec gamma2(double rate) {
    DistributionSpec d;
    d.family = "gamma(2)";
    d.support_kind = SupportKind::continuous;
    d.mean = 2.0 / rate;
    d.second_moment = 6.0 / (rate * rate);
    d.cdf = [rate](double x) {
        if (x <= 0.0) return 0.0;
        const double lx = rate * x;
        return 1.0 - std::exp(-lx) * (1.0 + lx);
    };
    const auto cdf = d.cdf;
    d.quantile = [cdf, rate](double u) {
        // bracket: quantile of Gamma(2) is below that of 2*Exp(1)/rate tail
        double hi = 2.0;
        while (cdf(hi / rate) < u && hi < 1e4) hi *= 2.0;
        return invert_monotone(cdf, u, 0.0, hi / rate, 1e-14);
    };
    return d;
}

}  // namespace

DistributionSpec equilibrium(const DistributionSpec& dist) {
    if (dist.mean <= 0.0)
        throw std::invalid_argument("zero-mean: equilibrium undefined");
    if (dist.family == "exponential") return dist;  // fixed point
    if (dist.family == "point-mass")
        return make_builtin("uniform", {0.0, dist.pmf->front().first});
    if (dist.pmf || dist.support_kind == SupportKind::lattice)
        return equilibrium_atomic(dist);
    return equilibrium_continuous(dist);
}

DistributionSpec size_bias(const DistributionSpec& dist) {
    if (dist.mean <= 0.0)
        throw std::invalid_argument("zero-mean: size bias undefined");
    if (dist.family == "exponential") {
        // x e^{-rate x} density normalizes to Gamma(2, rate)
        return gamma2(1.0 / dist.mean);
    }
    if (dist.family == "uniform") {
        const double a = dist.quantile(1e-16), b = dist.upper(0.5) * 2 - a;
        const double a2 = a * a, b2 = b * b;
        DistributionSpec d;
        d.family = "size-bias(uniform)";
        d.support_kind = SupportKind::continuous;
        d.mean = (a2 + a * b + b2) / 3.0 / dist.mean;
        d.second_moment = (b2 * b2 - a2 * a2) / (4.0 * (b - a)) / dist.mean;
        d.cdf = [a, b, a2, b2](double x) {
            if (x <= a) return 0.0;
            if (x >= b) return 1.0;
            return (x * x - a2) / (b2 - a2);
        };
        d.quantile = [a2, b2](double u) { return std::sqrt(a2 + u * (b2 - a2)); };
        return d;
    }
    std::optional<std::vector<std::pair<double, double>>> atoms = dist.pmf;
    if (!atoms && dist.support_kind == SupportKind::lattice)
        atoms = materialize_atoms(dist, 1e-16);
    if (!atoms)
        throw std::invalid_argument("unsupported-family: size bias of " + dist.family);
    std::vector<std::pair<double, double>> sb;
    double total = 0.0;
    for (const auto& [x, p] : *atoms)
        if (x > 0.0 && p > 0.0) total += x * p;
    for (const auto& [x, p] : *atoms)
        if (x > 0.0 && p > 0.0) sb.push_back({x, x * p / total});
    auto out = make_finite_pmf(std::move(sb));
    out.family = "size-bias(" + dist.family + ")";
    return out;
}

double sample_equilibrium(const DistributionSpec& dist, RngState& rng) {
    const double ws = size_bias(dist).sample(rng);
    return rng.uniform() * ws;
}

AgingClass classify_aging(const DistributionSpec& dist) {
    if (dist.mean <= 0.0)
        throw std::invalid_argument("zero-mean: aging class undefined");
    constexpr double kTol = 1e-9;
    std::vector<double> grid;
    const double hi = dist.upper(1e-9);
    if (dist.support_kind == SupportKind::lattice) {
        for (double s = dist.lattice_step; s < hi; s += dist.lattice_step)
            grid.push_back(s);
    } else if (dist.pmf) {
        // atoms plus midpoints: the mean residual life is piecewise linear
        // between atoms, so extremes sit at atoms and just after them
        double prev = 0.0;
        for (const auto& [x, p] : *dist.pmf) {
            if (x > 0.0 && x < hi) {
                grid.push_back(0.5 * (prev + x));
                grid.push_back(x);
            }
            prev = x;
        }
    } else {
        for (int i = 0; i < 512; ++i) grid.push_back(hi * i / 512.0);
    }
    bool nbue = true, nwue = true;
    std::optional<double> witness;
    for (double s : grid) {
        const double tailp = 1.0 - dist.cdf(s);
        if (tailp <= 1e-12) continue;  // zero-tail: clip
        // compare tailp * mrl against tailp * mean so the deep tail does not
        // amplify quadrature error; 1e-11 absorbs the integral tolerance
        const double lhs = dist.mean - tail_integral(dist, s);  // tailp * mrl
        const double slack = kTol * tailp + 1e-11;
        if (lhs > dist.mean * tailp + slack) {
            nbue = false;
            if (!nwue && !witness) witness = s;
        }
        if (lhs < dist.mean * tailp - slack) {
            nwue = false;
            if (!nbue && !witness) witness = s;
        }
    }
    if (nbue && nwue) return {AgingTag::exponential, std::nullopt};
    if (nbue) return {AgingTag::NBUE, std::nullopt};
    if (nwue) return {AgingTag::NWUE, std::nullopt};
    return {AgingTag::neither, witness};
}

double nbue_coupling_gap(const DistributionSpec& dist) {
    const auto cls = classify_aging(dist);
    if (cls.tag == AgingTag::neither)
        throw std::runtime_error("not-monotone-orderable: law is neither NBUE nor NWUE");
    const auto [m, m2] = moments(dist);
    return std::abs(m2 / (2.0 * m) - m);
}

std::string aging_tag_name(AgingTag tag) {
    switch (tag) {
        case AgingTag::NBUE: return "NBUE";
        case AgingTag::NWUE: return "NWUE";
        case AgingTag::exponential: return "exponential";
        default: return "neither";
    }
}

}  // namespace expapprox
