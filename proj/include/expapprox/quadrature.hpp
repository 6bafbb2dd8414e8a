#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

namespace expapprox {

namespace detail {

template <typename F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a,b] with absolute tolerance.
template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-10, int max_depth = 48) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Integral of f(t)*exp(-t) over [0, inf); integrand decays geometrically so a
// fixed truncation at t=60 leaves mass below 1e-26 for bounded f.
template <typename F>
double integrate_exp_weighted(const F& f, double tol = 1e-11) {
    auto g = [&](double t) { return f(t) * std::exp(-t); };
    // split keeps the adaptive pass cheap where the weight has already decayed
    return integrate(g, 0.0, 8.0, tol) + integrate(g, 8.0, 60.0, tol);
}

// Bisection inverse of a nondecreasing function on [lo, hi].
template <typename F>
double invert_monotone(const F& f, double target, double lo, double hi, double tol = 1e-12) {
    for (int i = 0; i < 200 && hi - lo > tol * (1.0 + std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) >= target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace expapprox
