#include "expapprox/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace expapprox {

namespace {

BoundReport make_report(std::string id, Metric metric,
                        std::vector<std::pair<std::string, double>> terms) {
    BoundReport r;
    r.theorem_id = std::move(id);
    r.metric = metric;
    r.terms = std::move(terms);
    r.value = recompute(r);
    return r;
}

// pairwise summation: deterministic regardless of how chunks were produced
double pairwise_sum(const std::vector<double>& xs, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) return std::accumulate(xs.begin() + lo, xs.begin() + hi, 0.0);
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(xs, lo, mid) + pairwise_sum(xs, mid, hi);
}

double mean_of(const std::vector<double>& xs) {
    return pairwise_sum(xs, 0, xs.size()) / static_cast<double>(xs.size());
}

}  // namespace

double recompute(const BoundReport& report) {
    double sum = 0.0;
    for (const auto& [name, v] : report.terms) sum += v;
    return report.metric == Metric::dK ? std::min(1.0, sum) : sum;
}

std::vector<BoundReport> thm1_bounds(std::optional<double> e_abs_diff,
                                     std::optional<double> beta,
                                     std::optional<double> p_exceed) {
    std::vector<BoundReport> out;
    if (beta && p_exceed) {
        out.push_back(make_report("thm1-eq5-dK-W", Metric::dK,
                                  {{"12*beta", 12.0 * *beta}, {"2*p_exceed", 2.0 * *p_exceed}}));
        out.push_back(make_report("thm1-eq6-dK-We", Metric::dK,
                                  {{"beta", *beta}, {"p_exceed", *p_exceed}}));
    }
    if (e_abs_diff) {
        out.push_back(make_report("thm1-eq7-dW-W", Metric::dW,
                                  {{"2*e_abs_diff", 2.0 * *e_abs_diff}}));
        out.push_back(make_report("thm1-eq8-dK-We", Metric::dK,
                                  {{"e_abs_diff", *e_abs_diff}}));
        out.push_back(make_report("thm1-eq8-dW-We", Metric::dW,
                                  {{"e_abs_diff", *e_abs_diff}}));
    }
    if (out.empty())
        throw std::invalid_argument(
            "insufficient-inputs: need e_abs_diff or (beta, p_exceed)");
    return out;
}

std::vector<BoundReport> thm2_bounds(const RTerms& r) {
    std::vector<BoundReport> out;
    out.push_back(make_report("thm2-eq10-dW", Metric::dW,
                              {{"r1", r.r1},
                               {"r2", r.r2},
                               {"2*r3", 2.0 * r.r3},
                               {"2*r3p", 2.0 * r.r3p},
                               {"2*r4", 2.0 * r.r4},
                               {"2*r4p", 2.0 * r.r4p}}));
    const double ab1 = r.alpha * r.beta + 1.0;
    out.push_back(make_report("thm2-eq11-dK", Metric::dK,
                              {{"2*r1", 2.0 * r.r1},
                               {"2*r2", 2.0 * r.r2},
                               {"2*r5", 2.0 * r.r5},
                               {"2*r5p", 2.0 * r.r5p},
                               {"22*(ab+1)*bp", 22.0 * ab1 * r.beta_p},
                               {"12*a*b^2", 12.0 * r.alpha * r.beta * r.beta}}));
    return out;
}

RTerms estimate_r_terms(const std::vector<CouplingTuple>& tuples, double alpha,
                        double beta, double beta_p, double r1) {
    if (tuples.empty()) throw std::invalid_argument("empty-input: no coupling tuples");
    const std::size_t n = tuples.size();
    std::vector<double> v3(n), v3p(n), v4(n), v4p(n), v5(n), v5p(n);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        const auto& t = tuples[i];
        const double d = t.w_prime - t.w;
        const double dp = t.w_double_prime - t.w;
        const double gd = t.g * d;
        v3[i] = std::abs(d) > 1.0 ? std::abs(gd) : 0.0;
        v3p[i] = std::abs(dp) > 1.0 ? std::abs(gd - 1.0) : 0.0;
        v4[i] = std::abs(t.g * std::min(d * d, 1.0));
        v4p[i] = std::abs((gd - 1.0) * std::min(std::abs(dp), 1.0));
        const bool big5 = std::abs(t.g) > alpha || std::abs(d) > beta;
        v5[i] = big5 ? std::abs(gd) : 0.0;
        v5p[i] = (big5 || std::abs(dp) > beta_p) ? std::abs(1.0 - gd) : 0.0;
    }

    // r2 = E|E(GD | W'') - 1| via equal-count binning on w''
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return tuples[a].w_double_prime < tuples[b].w_double_prime;
    });
    const std::size_t bins = std::min<std::size_t>(64, n);
    double r2 = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        const std::size_t lo = b * n / bins, hi = (b + 1) * n / bins;
        if (hi == lo) continue;
        std::vector<double> gd(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) {
            const auto& t = tuples[order[i]];
            gd[i - lo] = t.g * (t.w_prime - t.w);
        }
        r2 += static_cast<double>(hi - lo) / n * std::abs(mean_of(gd) - 1.0);
    }

    RTerms r;
    r.r1 = r1;
    r.r2 = r2;
    r.r3 = mean_of(v3);
    r.r3p = mean_of(v3p);
    r.r4 = mean_of(v4);
    r.r4p = mean_of(v4p);
    r.r5 = mean_of(v5);
    r.r5p = mean_of(v5p);
    r.alpha = alpha;
    r.beta = beta;
    r.beta_p = beta_p;
    return r;
}

std::vector<BoundReport> thm3_bounds(double mu, double sup_mu_i, double e_x_gap,
                                     double e_nm_gap, double quantile_gap, double C,
                                     double K) {
    if (mu <= 0.0) throw std::invalid_argument("invalid-params: need mu > 0");
    std::vector<BoundReport> out;
    out.push_back(make_report("thm3-eq14-dW", Metric::dW,
                              {{"2/mu*e_x_gap", 2.0 / mu * e_x_gap},
                               {"2/mu*sup_mu_i*e_nm_gap", 2.0 / mu * sup_mu_i * e_nm_gap}}));
    out.push_back(make_report("thm3-eq15-dK", Metric::dK,
                              {{"12/mu*quantile_gap", 12.0 / mu * quantile_gap},
                               {"12/mu*C*K", 12.0 / mu * C * K}}));
    return out;
}

BoundReport random_sum_nbue_bound(double mu, double sup_half_m2_gap, double e_n2) {
    if (mu <= 0.0) throw std::invalid_argument("invalid-params: need mu > 0");
    return make_report(
        "random-sum-nbue-eq23-dW", Metric::dW,
        {{"2/mu*sup_gap", 2.0 / mu * sup_half_m2_gap},
         {"2*|EN2/(2mu^2)+1/(2mu)-1|",
          2.0 * std::abs(e_n2 / (2.0 * mu * mu) + 1.0 / (2.0 * mu) - 1.0)}});
}

std::vector<BoundReport> thm4_bounds(double p, double mu, double s, double C,
                                     double K1, double K2,
                                     std::optional<Thm4DwTerms> dw_terms) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("invalid-params: p in (0,1)");
    if (mu <= 0.0) throw std::invalid_argument("invalid-params: need mu > 0");
    const double q = 1.0 - p;
    std::vector<BoundReport> out;
    out.push_back(make_report(
        "thm4-eq30-dK", Metric::dK,
        {{"q*s/(p*mu)", q * s / (p * mu)},
         {"22*C*K2/mu", 22.0 * C * K2 / mu},
         {"2*C^2*K1*(11K2+6K1)/(p*mu^2)",
          2.0 * C * C * K1 * (11.0 * K2 + 6.0 * K1) / (p * mu * mu)}}));
    if (dw_terms) {
        out.push_back(make_report(
            "thm4-dW", Metric::dW,
            {{"q*s/(p*mu)", q * s / (p * mu)},
             {"4q*E{S(N,N')(1+S(N'',N))}/(p*mu^2)",
              4.0 * q * dw_terms->e_cross / (p * mu * mu)},
             {"4*E{S(N'',N)}/mu", 4.0 * dw_terms->e_snn / mu}}));
    }
    return out;
}

BoundReport hitting_time_bounds(HittingVariant variant, const HittingInputs& in) {
    auto need = [](const std::optional<double>& v, const char* name) {
        if (!v) throw std::invalid_argument(std::string("missing-inputs: ") + name);
        return *v;
    };
    const double pi = need(in.pi_i, "pi_i");
    switch (variant) {
        case HittingVariant::renewal_gap:
            return make_report("hitting-eq32-dK", Metric::dK,
                               {{"1.5*pi_i", 1.5 * pi},
                                {"pi_i*E|gap|", pi * need(in.e_gap, "e_gap")}});
        case HittingVariant::mismatch_prob:
            return make_report("hitting-eq33-dK", Metric::dK,
                               {{"2*pi_i", 2.0 * pi},
                                {"P[neq]", need(in.p_neq, "p_neq")}});
        case HittingVariant::stationary_time:
            return make_report(
                "hitting-eq35-dK", Metric::dK,
                {{"1.5*pi_i", 1.5 * pi},
                 {"pi_i*E(T_i_pi)", pi * need(in.e_t_i_pi, "e_t_i_pi")},
                 {"pi_i*rho*sup_E_T",
                  pi * need(in.rho, "rho") * need(in.sup_e_t, "sup_e_t")}});
        case HittingVariant::mixing_sum:
            return make_report("hitting-eq36-dK", Metric::dK,
                               {{"2*pi_i", 2.0 * pi},
                                {"deviation_sum",
                                 need(in.deviation_sum, "deviation_sum")}});
    }
    throw std::invalid_argument("missing-inputs: unknown variant");
}

BoundReport pattern_bounds(double p, int k, PatternKind kind,
                           std::optional<double> pi_i) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("invalid-params: p in (0,1)");
    if (k < 1) throw std::invalid_argument("invalid-params: need k >= 1");
    if (kind == PatternKind::head_run) {
        return make_report("pattern-head-run-dK", Metric::dK,
                           {{"(k+2)*p^k", (k + 2.0) * std::pow(p, k)}});
    }
    if (!pi_i) throw std::invalid_argument("missing-inputs: pi_i for non-overlapping pattern");
    return make_report("pattern-non-overlapping-dK", Metric::dK,
                       {{"pi_i*(k+1)", *pi_i * (k + 1.0)}});
}

std::vector<BoundReport> nbue_bounds(double second_moment) {
    const double rho = std::abs(0.5 * second_moment - 1.0);
    std::vector<BoundReport> out;
    out.push_back(make_report("nbue-eq37-dW-W", Metric::dW, {{"2*rho", 2.0 * rho}}));
    out.push_back(make_report("nbue-eq37-dK-W", Metric::dK,
                              {{"2.47*sqrt(rho)", 2.47 * std::sqrt(rho)}}));
    out.push_back(make_report("nbue-eq38-dW-We", Metric::dW, {{"rho", rho}}));
    out.push_back(make_report("nbue-eq38-dK-We", Metric::dK, {{"rho", rho}}));
    return out;
}

}  // namespace expapprox
