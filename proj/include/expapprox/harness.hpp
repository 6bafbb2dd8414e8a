#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "expapprox/bounds.hpp"
#include "expapprox/chain.hpp"
#include "expapprox/distribution.hpp"
#include "expapprox/metrics.hpp"
#include "expapprox/tomlmini.hpp"

namespace expapprox {

// One declarative experiment: [model] says what to simulate or evaluate,
// [bounds].requests lists theorem instantiations, [run] carries reps/seed/
// metric/distance-source/output paths.
struct ExperimentConfig {
    std::string experiment_id;
    tomlmini::Table model;
    tomlmini::Table bounds;
    tomlmini::Table run;
};

ExperimentConfig config_from_table(const tomlmini::Table& root);
ExperimentConfig load_config(const std::string& path);

struct VerificationRow {
    std::string experiment_id;
    std::string metric;
    double bound_value = 0.0;
    double distance_value = 0.0;
    std::string distance_method;
    double mc_halfwidth = 0.0;
    bool dominance_ok = false;  // distance <= bound + 3*halfwidth
};

struct ExperimentResult {
    std::vector<VerificationRow> rows;
    std::vector<BoundReport> reports;          // term breakdowns, same order
    std::optional<EmpiricalSample> sample;     // present when simulation ran
};

// Runs the model and/or oracle, evaluates every bound request against the
// requested distance, and (when [run] names out/json paths) writes the CSV
// and JSON artifacts. Errors carry the experiment_id as context.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Simulation only (the `simulate` subcommand): draws from the model.
EmpiricalSample simulate_from_config(const ExperimentConfig& config);

struct SweepRow {
    double parameter = 0.0;
    VerificationRow row;
};

struct SweepResult {
    std::string parameter;
    std::vector<SweepRow> rows;
    std::optional<double> slope;         // log-log regression of distance on
    std::optional<double> slope_stderr;  // the swept parameter
};

// Runs the template once per value with `parameter` (a dotted path such as
// "model.p") overridden; emits combined rows plus a rate fit.
SweepResult sweep(const tomlmini::Table& config_template, const std::string& parameter,
                  const std::vector<double>& values);

// CSV columns exactly in VerificationRow field order.
void write_rows_csv(const std::vector<VerificationRow>& rows, std::ostream& out);
void write_sweep_csv(const SweepResult& result, std::ostream& out);
void write_sample_csv(const EmpiricalSample& sample, std::ostream& out);
void write_reports_json(const ExperimentResult& result, std::ostream& out);

// Parse a distribution literal {family = "...", params = [...]} or
// {family = "finite-pmf", support = [...], probs = [...]}.
DistributionSpec dist_from_literal(const tomlmini::Table& literal);

// Chain from [model]: either two_state = [a, b] or P = [[...], ...].
ChainSpec chain_from_config(const tomlmini::Table& model);

// Apply CLI overrides into [run] (0/empty means keep the config value).
void apply_overrides(ExperimentConfig& config, std::uint64_t seed, std::size_t reps,
                     const std::string& out);

}  // namespace expapprox
