#include "expapprox/chain.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "expapprox/rng.hpp"

namespace expapprox {

void ChainSpec::validate() const {
    const std::size_t n = P.size();
    if (n == 0 || n > 10000) throw std::invalid_argument("invalid-params: chain size");
    for (const auto& row : P) {
        if (row.size() != n) throw std::invalid_argument("invalid-params: non-square P");
        double sum = 0.0;
        for (double x : row) {
            if (x < 0.0 || x > 1.0)
                throw std::invalid_argument("invalid-params: entry outside [0,1]");
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("invalid-params: row does not sum to 1");
    }
}

ChainSpec make_chain(std::vector<std::vector<double>> P, std::vector<std::string> states) {
    ChainSpec c;
    c.P = std::move(P);
    if (states.empty())
        for (std::size_t i = 0; i < c.P.size(); ++i)
            states.push_back("s" + std::to_string(i));
    c.states = std::move(states);
    c.validate();
    return c;
}

ChainSpec two_state_chain(double a, double b) {
    return make_chain({{1.0 - a, a}, {b, 1.0 - b}});
}

namespace {

std::vector<bool> reachable(const ChainSpec& c, std::size_t from, bool reverse) {
    const std::size_t n = c.size();
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v = 0; v < n; ++v) {
            const double p = reverse ? c.P[v][u] : c.P[u][v];
            if (p > 0.0 && !seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    return seen;
}

void require_irreducible(const ChainSpec& c) {
    if (!is_irreducible(c)) throw std::runtime_error("reducible-chain");
}

// cumulative row sums for inverse-CDF stepping
std::vector<std::vector<double>> row_cumsums(const ChainSpec& c) {
    std::vector<std::vector<double>> cum(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        double acc = 0.0;
        cum[i].reserve(c.size());
        for (double p : c.P[i]) cum[i].push_back(acc += p);
        cum[i].back() = 1.0;
    }
    return cum;
}

std::size_t draw_from_cum(const std::vector<double>& cum, double u) {
    return static_cast<std::size_t>(
        std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
}

}  // namespace

bool is_irreducible(const ChainSpec& chain) {
    chain.validate();
    const auto fwd = reachable(chain, 0, false);
    const auto bwd = reachable(chain, 0, true);
    for (std::size_t i = 0; i < chain.size(); ++i)
        if (!fwd[i] || !bwd[i]) return false;
    return true;
}

std::vector<double> stationary_distribution(const ChainSpec& chain) {
    require_irreducible(chain);
    const Eigen::Index n = static_cast<Eigen::Index>(chain.size());
    // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1
    Eigen::MatrixXd A(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            A(i, j) = chain.P[j][i] - (i == j ? 1.0 : 0.0);
    A.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::VectorXd pi = A.fullPivLu().solve(b);

    std::vector<double> out(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i)
        out[i] = pi(static_cast<Eigen::Index>(i));
    double resid = 0.0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < chain.size(); ++j) row += out[j] * chain.P[j][i];
        resid = std::max(resid, std::abs(row - out[i]));
    }
    if (resid > 1e-12) throw std::runtime_error("stationary solve residual too large");
    return out;
}

EmpiricalSample simulate_hitting_times(const ChainSpec& chain, std::size_t target,
                                       StartKind start, std::size_t start_state,
                                       std::size_t reps, std::uint64_t seed,
                                       bool normalize_by_pi) {
    require_irreducible(chain);
    if (reps < 1) throw std::invalid_argument("invalid-params: reps >= 1");
    const auto cum = row_cumsums(chain);
    const auto pi = stationary_distribution(chain);
    std::vector<double> pi_cum(pi.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) pi_cum[i] = acc += pi[i];
    pi_cum.back() = 1.0;

    const double factor = normalize_by_pi ? pi[target] : 1.0;
    std::vector<double> values(reps);
#pragma omp parallel for schedule(static)
    for (std::size_t r = 0; r < reps; ++r) {
        RngState rng = derive_stream(seed, r);
        std::size_t x;
        std::uint64_t t = 0;
        if (start == StartKind::stationary) {
            x = draw_from_cum(pi_cum, rng.uniform());
        } else {
            x = start_state;
        }
        // stationary start: t >= 0 (a start at the target yields 0);
        // fixed start: t > 0
        while (!(x == target && (t > 0 || start == StartKind::stationary))) {
            x = draw_from_cum(cum[x], rng.uniform());
            ++t;
        }
        values[r] = factor * static_cast<double>(t);
    }
    return make_sample(std::move(values), seed, 0);
}

double diagonal_deviation_sum(const ChainSpec& chain, std::size_t i, double tol) {
    require_irreducible(chain);
    const auto pi = stationary_distribution(chain);
    const std::size_t n = chain.size();
    std::vector<double> v(n, 0.0), w(n);
    v[i] = 1.0;
    double sum = 0.0, prev_term = -1.0, lambda_hat = 0.0;
    int small_streak = 0;
    for (std::size_t step = 1; step <= 100000; ++step) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += v[k] * chain.P[k][j];
            w[j] = acc;
        }
        v.swap(w);
        const double term = std::abs(v[i] - pi[i]);
        sum += term;
        if (prev_term > 1e-300) {
            const double ratio = term / prev_term;
            lambda_hat = std::clamp(std::max(lambda_hat * 0.5, ratio), 0.0, 0.999999);
        }
        prev_term = term;
        if (term < std::max(tol * (1.0 - lambda_hat), 1e-300)) {
            if (++small_streak >= 10) {
                // geometric tail estimate
                if (lambda_hat < 1.0) sum += term * lambda_hat / (1.0 - lambda_hat);
                return sum;
            }
        } else {
            small_streak = 0;
        }
    }
    throw std::runtime_error("no-convergence: diagonal deviations fail to decay");
}

}  // namespace expapprox
