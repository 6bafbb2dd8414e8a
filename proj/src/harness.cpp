#include "expapprox/harness.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "expapprox/oracle.hpp"
#include "expapprox/parallel.hpp"
#include "expapprox/simulate.hpp"
#include "expapprox/transforms.hpp"

namespace expapprox {

namespace tm = tomlmini;
using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) {
    throw std::runtime_error("config-parse-error: " + msg);
}

std::string fmt(double x) {
    std::ostringstream ss;
    ss << std::setprecision(17) << x;
    return ss.str();
}

Metric metric_from(const std::string& name) {
    if (name == "dK") return Metric::dK;
    if (name == "dW") return Metric::dW;
    bad("unknown metric '" + name + "'");
}

std::vector<double> numbers(const tm::Value& v) {
    std::vector<double> out;
    for (const auto& x : v.as_array()) out.push_back(x.as_number());
    return out;
}

double opt_num(const tm::Table& t, const std::string& key, double fallback) {
    return tm::get_number(t, key, fallback);
}

}  // namespace

DistributionSpec dist_from_literal(const tm::Table& literal) {
    const std::string family = tm::require(literal, "family").as_string();
    DistributionSpec d;
    if (family == "finite-pmf") {
        const auto support = numbers(tm::require(literal, "support"));
        const auto probs = numbers(tm::require(literal, "probs"));
        if (support.size() != probs.size()) bad("support/probs length mismatch");
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i = 0; i < support.size(); ++i)
            pairs.emplace_back(support[i], probs[i]);
        d = make_finite_pmf(std::move(pairs));
    } else {
        std::vector<double> params;
        if (const tm::Value* p = tm::find(literal, "params")) params = numbers(*p);
        d = make_builtin(family, params);
    }
    if (const tm::Value* s = tm::find(literal, "scale")) d = scale(d, s->as_number());
    return d;
}

ChainSpec chain_from_config(const tm::Table& model) {
    if (const tm::Value* ts = tm::find(model, "two_state")) {
        const auto ab = numbers(*ts);
        if (ab.size() != 2) bad("two_state needs [a, b]");
        return two_state_chain(ab[0], ab[1]);
    }
    const tm::Value* P = tm::find(model, "P");
    if (!P) bad("hitting model needs two_state or P");
    std::vector<std::vector<double>> rows;
    for (const auto& row : P->as_array()) rows.push_back(numbers(row));
    return make_chain(std::move(rows));
}

ExperimentConfig config_from_table(const tm::Table& root) {
    ExperimentConfig c;
    c.experiment_id = tm::get_string(root, "experiment_id", "experiment");
    if (const tm::Value* m = tm::find(root, "model")) c.model = m->as_table();
    if (const tm::Value* b = tm::find(root, "bounds")) c.bounds = b->as_table();
    if (const tm::Value* r = tm::find(root, "run")) c.run = r->as_table();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_table(tm::parse_file(path));
}

void apply_overrides(ExperimentConfig& config, std::uint64_t seed, std::size_t reps,
                     const std::string& out) {
    if (seed != 0) config.run["seed"] = tm::Value{static_cast<double>(seed)};
    if (reps != 0) config.run["reps"] = tm::Value{static_cast<double>(reps)};
    if (!out.empty()) config.run["out"] = tm::Value{out};
}

namespace {

struct RunParams {
    std::size_t reps;
    std::uint64_t seed;
    std::string distance;  // empirical | oracle
};

RunParams run_params(const ExperimentConfig& c) {
    RunParams p;
    p.reps = static_cast<std::size_t>(opt_num(c.run, "reps", 100000));
    p.seed = static_cast<std::uint64_t>(opt_num(c.run, "seed", 42));
    p.distance = tm::get_string(c.run, "distance", "empirical");
    if (p.reps < 1) bad("reps >= 1");
    return p;
}

std::string model_kind(const ExperimentConfig& c) {
    return tm::get_string(c.model, "kind", "distribution");
}

// occurrence probability of an H/T pattern under heads-prob p
double pattern_pi(const std::string& pattern, double p) {
    double pi = 1.0;
    for (char ch : pattern) pi *= ch == 'H' ? p : 1.0 - p;
    return pi;
}

double offspring_variance(const DistributionSpec& offspring) {
    const auto [m, m2] = moments(offspring);
    return m2 - m * m;
}

EmpiricalSample simulate_model(const ExperimentConfig& c, const RunParams& rp) {
    const std::string kind = model_kind(c);
    if (kind == "distribution") {
        const auto dist = dist_from_literal(tm::require(c.model, "dist").as_table());
        std::vector<double> values(rp.reps);
        replicate_map(rp.reps, [&](std::size_t r) {
            RngState rng = derive_stream(rp.seed, r);
            values[r] = dist.sample(rng);
        });
        return make_sample(std::move(values), rp.seed, 0);
    }
    if (kind == "random-sum") {
        const auto n_dist = dist_from_literal(tm::require(c.model, "n_dist").as_table());
        const auto x_dist = dist_from_literal(tm::require(c.model, "x_dist").as_table());
        double mu = opt_num(c.model, "mu", 0.0);
        if (mu <= 0.0) mu = n_dist.mean * x_dist.mean;
        SummandGen gen;
        gen.dists = {x_dist};
        return simulate_random_sum(n_dist, gen, mu, rp.reps, rp.seed);
    }
    if (kind == "pattern") {
        const double p = opt_num(c.model, "p", 0.5);
        const std::string pattern = tm::get_string(c.model, "pattern", "");
        if (pattern.empty()) {
            const int k = static_cast<int>(opt_num(c.model, "k", 1));
            const double scalef = (1.0 - p) * std::pow(p, k);
            return simulate_pattern_time(p, "", PatternMode::declumped_head_run, k,
                                         rp.reps, rp.seed, scalef);
        }
        return simulate_pattern_time(p, pattern, PatternMode::start_of_run, 0, rp.reps,
                                     rp.seed, pattern_pi(pattern, p));
    }
    if (kind == "hitting") {
        const auto chain = chain_from_config(c.model);
        const auto target = static_cast<std::size_t>(opt_num(c.model, "target", 0));
        const std::string start = tm::get_string(c.model, "start", "stationary");
        const auto start_state =
            static_cast<std::size_t>(opt_num(c.model, "start_state", 0));
        return simulate_hitting_times(
            chain, target,
            start == "stationary" ? StartKind::stationary : StartKind::fixed,
            start_state, rp.reps, rp.seed, /*normalize_by_pi=*/true);
    }
    if (kind == "yaglom") {
        const auto offspring =
            dist_from_literal(tm::require(c.model, "offspring").as_table());
        const int n = static_cast<int>(opt_num(c.model, "n", 10));
        const double var = offspring_variance(offspring);
        const auto stats = spine_sample_many(offspring, n, rp.reps, rp.seed);
        std::vector<double> values(stats.size());
        const double factor = 2.0 / (var * n);
        for (std::size_t i = 0; i < stats.size(); ++i)
            values[i] = factor * static_cast<double>(stats[i].R_n_star);
        return make_sample(std::move(values), rp.seed, 5);
    }
    bad("unknown model kind '" + kind + "'");
}

DistanceResult oracle_distance(const ExperimentConfig& c, Metric metric) {
    const std::string kind = model_kind(c);
    const auto target = make_builtin("exponential", {1.0});
    if (kind == "distribution") {
        const auto dist = dist_from_literal(tm::require(c.model, "dist").as_table());
        return distance_exact(dist, target, metric);
    }
    if (kind == "random-sum") {
        const auto n_dist = dist_from_literal(tm::require(c.model, "n_dist").as_table());
        const auto x_dist = dist_from_literal(tm::require(c.model, "x_dist").as_table());
        if (x_dist.family != "point-mass")
            throw std::runtime_error(
                "insufficient-inputs: oracle random-sum distance needs X = point-mass");
        const double cx = x_dist.mean;
        double mu = opt_num(c.model, "mu", 0.0);
        if (mu <= 0.0) mu = n_dist.mean * cx;
        return distance_exact(scale(n_dist, cx / mu), target, metric);
    }
    if (kind == "hitting") {
        const auto chain = chain_from_config(c.model);
        const auto i = static_cast<std::size_t>(opt_num(c.model, "target", 0));
        const auto pi = stationary_distribution(chain);
        const auto pmf = exact_hitting_pmf(chain, i, HittingStart::stationary);
        return distance_exact(scale(to_distribution(pmf), pi[i]), target, metric);
    }
    if (kind == "yaglom") {
        const auto offspring =
            dist_from_literal(tm::require(c.model, "offspring").as_table());
        if (offspring.family.rfind("geometric", 0) != 0)
            throw std::runtime_error(
                "insufficient-inputs: exact conditioned law needs geometric offspring");
        const int n = static_cast<int>(opt_num(c.model, "n", 10));
        DistanceResult r;
        r.metric = metric;
        r.value = exact_conditioned_geometric_distance(n, metric);
        r.method = "exact-quadrature";
        return r;
    }
    throw std::runtime_error("insufficient-inputs: no oracle distance for model kind '" +
                             kind + "'");
}

// resolve one [bounds].requests entry into a BoundReport
BoundReport resolve_bound(const ExperimentConfig& c, const tm::Table& req,
                          Metric metric) {
    const std::string theorem = tm::require(req, "theorem").as_string();
    const std::string of = tm::get_string(req, "of", "W");
    auto pick = [&](const std::vector<BoundReport>& reports,
                    bool match_of) -> BoundReport {
        for (const auto& r : reports) {
            if (r.metric != metric) continue;
            if (match_of) {
                const bool we = r.theorem_id.ends_with("-We");
                if ((of == "We") != we) continue;
            }
            return r;
        }
        throw std::runtime_error("insufficient-inputs: no " + theorem + " bound for " +
                                 metric_name(metric));
    };

    if (theorem == "thm1") {
        std::optional<double> e_abs, beta, pex;
        if (const tm::Value* v = tm::find(req, "e_abs_diff")) e_abs = v->as_number();
        if (const tm::Value* v = tm::find(req, "beta")) beta = v->as_number();
        if (const tm::Value* v = tm::find(req, "p_exceed")) pex = v->as_number();
        return pick(thm1_bounds(e_abs, beta, pex), true);
    }
    if (theorem == "thm2") {
        RTerms r;
        if (tm::get_string(req, "coupling", "") == "geometric") {
            const double p = opt_num(req, "p", 0.5);
            const auto tuples = geometric_sum_coupling_tuples(
                p, static_cast<std::size_t>(opt_num(req, "tuples", 100000)),
                run_params(c).seed + 17);
            r = estimate_r_terms(tuples, opt_num(req, "alpha", 2.0),
                                 opt_num(req, "beta", 2.0), opt_num(req, "beta_p", 2.0));
        } else {
            r.r1 = opt_num(req, "r1", 0.0);
            r.r2 = opt_num(req, "r2", 0.0);
            r.r3 = opt_num(req, "r3", 0.0);
            r.r3p = opt_num(req, "r3p", 0.0);
            r.r4 = opt_num(req, "r4", 0.0);
            r.r4p = opt_num(req, "r4p", 0.0);
            r.r5 = opt_num(req, "r5", 0.0);
            r.r5p = opt_num(req, "r5p", 0.0);
            r.alpha = opt_num(req, "alpha", 0.0);
            r.beta = opt_num(req, "beta", 0.0);
            r.beta_p = opt_num(req, "beta_p", 0.0);
        }
        return pick(thm2_bounds(r), false);
    }
    if (theorem == "thm3") {
        double mu = opt_num(req, "mu", 0.0);
        double sup_mu_i = opt_num(req, "sup_mu_i", 0.0);
        if ((mu <= 0.0 || sup_mu_i <= 0.0) && model_kind(c) == "random-sum") {
            const auto n_dist =
                dist_from_literal(tm::require(c.model, "n_dist").as_table());
            const auto x_dist =
                dist_from_literal(tm::require(c.model, "x_dist").as_table());
            if (sup_mu_i <= 0.0) sup_mu_i = x_dist.mean;
            if (mu <= 0.0) mu = opt_num(c.model, "mu", n_dist.mean * x_dist.mean);
        }
        return pick(thm3_bounds(mu, sup_mu_i, opt_num(req, "e_x_gap", 0.0),
                                opt_num(req, "e_nm_gap", 0.0),
                                opt_num(req, "quantile_gap", 0.0),
                                opt_num(req, "C", 0.0), opt_num(req, "K", 0.0)),
                    false);
    }
    if (theorem == "random-sum-nbue") {
        return random_sum_nbue_bound(opt_num(req, "mu", 1.0),
                                     opt_num(req, "sup_half_m2_gap", 0.0),
                                     opt_num(req, "e_n2", 0.0));
    }
    if (theorem == "thm4") {
        std::optional<Thm4DwTerms> dw;
        if (tm::find(req, "e_cross") || tm::find(req, "e_snn"))
            dw = Thm4DwTerms{opt_num(req, "e_cross", 0.0), opt_num(req, "e_snn", 0.0)};
        return pick(thm4_bounds(opt_num(req, "p", 0.5), opt_num(req, "mu", 1.0),
                                opt_num(req, "s", 1.0), opt_num(req, "C", 0.0),
                                opt_num(req, "K1", 0.0), opt_num(req, "K2", 0.0), dw),
                    false);
    }
    if (theorem == "nbue") {
        double m2 = opt_num(req, "second_moment", 0.0);
        if (m2 <= 0.0 && model_kind(c) == "distribution") {
            const auto dist = dist_from_literal(tm::require(c.model, "dist").as_table());
            m2 = moments(dist).second;
        }
        return pick(nbue_bounds(m2), true);
    }
    if (theorem == "pattern") {
        const double p = opt_num(req, "p", opt_num(c.model, "p", 0.5));
        const std::string pattern = tm::get_string(c.model, "pattern", "");
        if (!pattern.empty()) {
            return pattern_bounds(p, static_cast<int>(pattern.size()),
                                  PatternKind::non_overlapping, pattern_pi(pattern, p));
        }
        const int k = static_cast<int>(opt_num(req, "k", opt_num(c.model, "k", 1)));
        return pattern_bounds(p, k, PatternKind::head_run);
    }
    if (theorem == "hitting") {
        const std::string variant = tm::get_string(req, "variant", "mixing_sum");
        HittingInputs in;
        if (const tm::Value* v = tm::find(req, "pi_i")) in.pi_i = v->as_number();
        if (const tm::Value* v = tm::find(req, "e_gap")) in.e_gap = v->as_number();
        if (const tm::Value* v = tm::find(req, "p_neq")) in.p_neq = v->as_number();
        if (const tm::Value* v = tm::find(req, "e_t_i_pi")) in.e_t_i_pi = v->as_number();
        if (const tm::Value* v = tm::find(req, "rho")) in.rho = v->as_number();
        if (const tm::Value* v = tm::find(req, "sup_e_t")) in.sup_e_t = v->as_number();
        if (const tm::Value* v = tm::find(req, "deviation_sum"))
            in.deviation_sum = v->as_number();
        if (model_kind(c) == "hitting") {
            const auto chain = chain_from_config(c.model);
            const auto i = static_cast<std::size_t>(opt_num(c.model, "target", 0));
            if (!in.pi_i) in.pi_i = stationary_distribution(chain)[i];
            if (variant == "mixing_sum" && !in.deviation_sum)
                in.deviation_sum = diagonal_deviation_sum(chain, i);
        }
        HittingVariant v = HittingVariant::mixing_sum;
        if (variant == "renewal_gap") v = HittingVariant::renewal_gap;
        else if (variant == "mismatch_prob") v = HittingVariant::mismatch_prob;
        else if (variant == "stationary_time") v = HittingVariant::stationary_time;
        else if (variant != "mixing_sum") bad("unknown hitting variant '" + variant + "'");
        return hitting_time_bounds(v, in);
    }
    bad("unknown theorem '" + theorem + "'");
}

}  // namespace

EmpiricalSample simulate_from_config(const ExperimentConfig& config) {
    return simulate_model(config, run_params(config));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    try {
        const RunParams rp = run_params(config);
        ExperimentResult result;

        std::vector<tm::Table> requests;
        if (const tm::Value* reqs = tm::find(config.bounds, "requests"))
            for (const auto& r : reqs->as_array()) requests.push_back(r.as_table());

        const bool needs_sample =
            rp.distance == "empirical" &&
            (!requests.empty() || tm::find(config.run, "out"));
        if (needs_sample) result.sample = simulate_model(config, rp);

        const auto target = make_builtin("exponential", {1.0});
        const std::string default_metric = tm::get_string(config.run, "metric", "dW");
        for (const auto& req : requests) {
            const Metric metric =
                metric_from(tm::get_string(req, "metric", default_metric));
            BoundReport report = resolve_bound(config, req, metric);
            DistanceResult dist =
                rp.distance == "oracle"
                    ? oracle_distance(config, metric)
                    : distance_empirical(*result.sample, target, metric);

            VerificationRow row;
            row.experiment_id = config.experiment_id;
            row.metric = metric_name(metric);
            row.bound_value = report.value;
            row.distance_value = dist.value;
            row.distance_method = dist.method;
            row.mc_halfwidth = dist.mc_halfwidth.value_or(0.0);
            row.dominance_ok =
                row.distance_value <= row.bound_value + 3.0 * row.mc_halfwidth;
            result.rows.push_back(std::move(row));
            result.reports.push_back(std::move(report));
        }

        if (const tm::Value* out = tm::find(config.run, "out")) {
            std::ofstream f(out->as_string());
            if (!f) bad("cannot open output '" + out->as_string() + "'");
            if (result.rows.empty() && result.sample)
                write_sample_csv(*result.sample, f);
            else
                write_rows_csv(result.rows, f);
        }
        if (const tm::Value* jpath = tm::find(config.run, "json")) {
            std::ofstream f(jpath->as_string());
            if (!f) bad("cannot open output '" + jpath->as_string() + "'");
            write_reports_json(result, f);
        }
        return result;
    } catch (const std::exception& e) {
        throw std::runtime_error("[" + config.experiment_id + "] " + e.what());
    }
}

SweepResult sweep(const tm::Table& config_template, const std::string& parameter,
                  const std::vector<double>& values) {
    SweepResult result;
    result.parameter = parameter;

    // split the dotted path
    std::vector<std::string> path;
    std::string seg;
    for (char ch : parameter) {
        if (ch == '.') {
            path.push_back(seg);
            seg.clear();
        } else {
            seg += ch;
        }
    }
    path.push_back(seg);
    if (path.empty() || path.front().empty()) bad("empty sweep parameter");

    std::vector<double> xs, ys;
    for (double value : values) {
        tm::Table root = config_template;
        tm::Value* cur = nullptr;
        tm::Table* tab = &root;
        for (std::size_t i = 0; i < path.size(); ++i) {
            auto it = tab->find(path[i]);
            if (it == tab->end()) {
                if (i + 1 != path.size()) bad("sweep path '" + parameter + "' not found");
                (*tab)[path[i]] = tm::Value{value};
                cur = nullptr;
                break;
            }
            cur = &it->second;
            if (i + 1 < path.size()) {
                if (!cur->is_table()) bad("sweep path '" + parameter + "' not a table");
                tab = &std::get<tm::Table>(cur->v);
            }
        }
        if (cur) *cur = tm::Value{value};

        auto res = run_experiment(config_from_table(root));
        for (const auto& row : res.rows) result.rows.push_back({value, row});
        if (!res.rows.empty() && res.rows.front().distance_value > 0.0 && value > 0.0) {
            xs.push_back(std::log(value));
            ys.push_back(std::log(res.rows.front().distance_value));
        }
    }

    if (xs.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        result.slope = slope;
        if (xs.size() > 2) {
            const double intercept = (sy - slope * sx) / n;
            double sse = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                const double e = ys[i] - intercept - slope * xs[i];
                sse += e * e;
            }
            result.slope_stderr = std::sqrt(sse / (n - 2) / (sxx - sx * sx / n));
        }
    }
    return result;
}

void write_rows_csv(const std::vector<VerificationRow>& rows, std::ostream& out) {
    out << "experiment_id,metric,bound_value,distance_value,distance_method,"
           "mc_halfwidth,dominance_ok\n";
    for (const auto& r : rows)
        out << r.experiment_id << ',' << r.metric << ',' << fmt(r.bound_value) << ','
            << fmt(r.distance_value) << ',' << r.distance_method << ','
            << fmt(r.mc_halfwidth) << ',' << (r.dominance_ok ? "true" : "false")
            << '\n';
}

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    out << result.parameter
        << ",experiment_id,metric,bound_value,distance_value,distance_method,"
           "mc_halfwidth,dominance_ok,slope,slope_stderr\n";
    for (const auto& [value, r] : result.rows)
        out << fmt(value) << ',' << r.experiment_id << ',' << r.metric << ','
            << fmt(r.bound_value) << ',' << fmt(r.distance_value) << ','
            << r.distance_method << ',' << fmt(r.mc_halfwidth) << ','
            << (r.dominance_ok ? "true" : "false") << ','
            << (result.slope ? fmt(*result.slope) : "") << ','
            << (result.slope_stderr ? fmt(*result.slope_stderr) : "") << '\n';
}

void write_sample_csv(const EmpiricalSample& sample, std::ostream& out) {
    out << "replicate,value\n";
    for (std::size_t i = 0; i < sample.values.size(); ++i)
        out << i << ',' << fmt(sample.values[i]) << '\n';
}

void write_reports_json(const ExperimentResult& result, std::ostream& out) {
    json doc;
    doc["rows"] = json::array();
    for (const auto& r : result.rows)
        doc["rows"].push_back({{"experiment_id", r.experiment_id},
                               {"metric", r.metric},
                               {"bound_value", r.bound_value},
                               {"distance_value", r.distance_value},
                               {"distance_method", r.distance_method},
                               {"mc_halfwidth", r.mc_halfwidth},
                               {"dominance_ok", r.dominance_ok}});
    doc["reports"] = json::array();
    for (const auto& rep : result.reports) {
        json terms = json::array();
        for (const auto& [name, value] : rep.terms)
            terms.push_back({{"name", name}, {"value", value}});
        doc["reports"].push_back({{"theorem_id", rep.theorem_id},
                                  {"metric", metric_name(rep.metric)},
                                  {"value", rep.value},
                                  {"terms", terms}});
    }
    out << doc.dump(2) << '\n';
}

}  // namespace expapprox
