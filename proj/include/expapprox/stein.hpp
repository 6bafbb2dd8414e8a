#pragma once

#include <functional>
#include <string>
#include <vector>

namespace expapprox {

// Solution of the exponential Stein equation f'(w) - f(w) = h(w) - E h(Z),
// Z ~ Exp(1), together with the test function it solves for.
struct SteinSolution {
    std::function<double(double)> h;
    double h_mean_under_exp = 0.0;
    std::function<double(double)> eval_f;
    std::function<double(double)> eval_f_prime;
    std::string kind;  // generic-quadrature | indicator-closed-form | smoothed
};

// Smoothed indicator h_{a,eps}(x) = eps^{-1} int_0^eps I[x+s <= a] ds
//                                 = clamp((a-x)/eps, 0, 1);
// eps = 0 degenerates to the plain indicator I[x <= a].
double h_smoothed(double a, double eps, double x);

// E h_{a,eps}(Z) for Z ~ Exp(1), in closed form.
double h_smoothed_mean(double a, double eps);

// Generic solution via adaptive quadrature with the substitution t = x - w,
// f(w) = -int_0^inf (h(w+t) - E h(Z)) e^{-t} dt, which avoids e^w overflow.
SteinSolution solve_stein(std::function<double(double)> h, double h_mean);

// Closed-form solution for the plain indicator h_{a,0} (and its derivative):
// f = (e^{x-a} ^ 1) - e^{-a},  f' = e^{x-a} I[x <= a].
std::pair<double, double> f_exact_indicator(double a, double x);

// Closed-form solution for the smoothed indicator family (any eps >= 0).
SteinSolution stein_smoothed_solution(double a, double eps);

struct SteinBoundCheck {
    std::string bound_id;  // eq42 | eq45-f | eq45-fp | eq45b-f | eq45b-fp | eq46
    double a = 0.0;
    double eps = 0.0;
    double max_violation = 0.0;  // worst (lhs - rhs) observed; <= tol passes
    bool pass = false;
};

// Sweep the solution-property bounds for the smoothed indicator family over
// grids of a and eps on a 1e3-point w-grid over [0, a+10], with shift
// t in [-2,2]. Violations beyond `tol` fail the check.
std::vector<SteinBoundCheck> verify_solution_bounds(const std::vector<double>& a_grid,
                                                    const std::vector<double>& eps_grid,
                                                    double tol = 1e-7);

}  // namespace expapprox
