#include "expapprox/stein.hpp"

#include <algorithm>
#include <cmath>

#include "expapprox/quadrature.hpp"

namespace expapprox {

double h_smoothed(double a, double eps, double x) {
    if (a <= 0.0) throw std::invalid_argument("invalid-params: need a > 0");
    if (eps < 0.0) throw std::invalid_argument("invalid-params: need eps >= 0");
    if (eps == 0.0) return x <= a ? 1.0 : 0.0;
    return std::clamp((a - x) / eps, 0.0, 1.0);
}

double h_smoothed_mean(double a, double eps) {
    if (eps == 0.0) return -std::expm1(-a);
    const double m = std::min(eps, a);
    return (m - std::exp(-a) * std::expm1(m)) / eps;
}

std::pair<double, double> f_exact_indicator(double a, double x) {
    if (a <= 0.0) throw std::invalid_argument("invalid-params: need a > 0");
    const double f = std::min(std::exp(x - a), 1.0) - std::exp(-a);
    const double fp = x <= a ? std::exp(x - a) : 0.0;
    return {f, fp};
}

SteinSolution solve_stein(std::function<double(double)> h, double h_mean) {
    SteinSolution s;
    s.h = h;
    s.h_mean_under_exp = h_mean;
    s.kind = "generic-quadrature";
    s.eval_f = [h, h_mean](double w) {
        return -integrate_exp_weighted(
            [&](double t) { return h(w + t) - h_mean; }, 1e-12);
    };
    const auto f = s.eval_f;
    s.eval_f_prime = [f, h, h_mean](double w) { return f(w) + h(w) - h_mean; };
    return s;
}

SteinSolution stein_smoothed_solution(double a, double eps) {
    if (a <= 0.0) throw std::invalid_argument("invalid-params: need a > 0");
    SteinSolution s;
    s.h = [a, eps](double x) { return h_smoothed(a, eps, x); };
    s.h_mean_under_exp = h_smoothed_mean(a, eps);
    if (eps == 0.0) {
        s.kind = "indicator-closed-form";
        s.eval_f = [a](double x) { return f_exact_indicator(a, x).first; };
        s.eval_f_prime = [a](double x) { return f_exact_indicator(a, x).second; };
        return s;
    }
    s.kind = "smoothed";
    // eps-average of the indicator solutions f_{a-s,0} over s in [0, eps]
    // (empty for s >= a, where the test function vanishes on the support):
    // with e0 = min(eps, a) and t0 = clamp(a-x, 0, e0),
    //   f(x)  = eps^{-1} [ e^{x-a}(e^{t0}-1) + (e0-t0) - e^{-a}(e^{e0}-1) ]
    //   f'(x) = eps^{-1} e^{x-a}(e^{t0}-1)
    const double e0 = std::min(eps, a);
    s.eval_f = [a, eps, e0](double x) {
        const double t0 = std::clamp(a - x, 0.0, e0);
        return (std::exp(x - a) * std::expm1(t0) + (e0 - t0) -
                std::exp(-a) * std::expm1(e0)) /
               eps;
    };
    s.eval_f_prime = [a, eps, e0](double x) {
        const double t0 = std::clamp(a - x, 0.0, e0);
        return std::exp(x - a) * std::expm1(t0) / eps;
    };
    return s;
}

namespace {

struct Worst {
    double violation = -1e300;
    void update(double lhs, double rhs) { violation = std::max(violation, lhs - rhs); }
};

}  // namespace

std::vector<SteinBoundCheck> verify_solution_bounds(const std::vector<double>& a_grid,
                                                    const std::vector<double>& eps_grid,
                                                    double tol) {
    if (a_grid.empty() || eps_grid.empty())
        throw std::invalid_argument("invalid-params: empty grid");
    constexpr int kW = 1000;
    constexpr int kT = 81;
    std::vector<SteinBoundCheck> out;
    for (double a : a_grid) {
        for (double eps : eps_grid) {
            const auto sol = stein_smoothed_solution(a, eps);
            Worst eq42, eq45f, eq45fp, eq45bf, eq45bfp, eq46;
            const double w_hi = a + 10.0;
            for (int i = 0; i <= kW; ++i) {
                const double w = w_hi * i / kW;
                const double f = sol.eval_f(w), fp = sol.eval_f_prime(w);
                eq45f.update(std::abs(f), 1.0);
                eq45fp.update(std::abs(fp), 1.0);
                eq42.update(std::abs(f), 1.0);       // ||f|| <= ||h|| = 1
                eq42.update(std::abs(fp), 2.0);      // ||f'|| <= 2||h||
                for (int j = 0; j <= kT; ++j) {
                    const double t = -2.0 + 4.0 * j / kT;
                    const double df = sol.eval_f(w + t) - f;
                    const double dfp = sol.eval_f_prime(w + t) - fp;
                    eq45bf.update(std::abs(df), 1.0);
                    eq45bfp.update(std::abs(dfp), 1.0);
                    if (eps > 0.0) {
                        const double lo = w + std::min(t, 0.0);
                        const double up = w + std::max(t, 0.0);
                        const double overlap =
                            std::max(0.0, std::min(up, a) - std::max(lo, a - eps));
                        eq46.update(std::abs(dfp),
                                    std::min(std::abs(t), 1.0) + overlap / eps);
                    }
                }
            }
            auto emit = [&](const char* id, const Worst& w) {
                out.push_back({id, a, eps, w.violation, w.violation <= tol});
            };
            emit("eq42", eq42);
            emit("eq45-f", eq45f);
            emit("eq45-fp", eq45fp);
            emit("eq45b-f", eq45bf);
            emit("eq45b-fp", eq45bfp);
            if (eps > 0.0) emit("eq46", eq46);
        }
    }
    return out;
}

}  // namespace expapprox
