#pragma once

#include "ra/types.hpp"

namespace ra {

struct TrialRow {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  double objective = 0.0;
  double min_profit_ratio = 0.0;  // objective / benchmark
  bool violated = false;
  std::int64_t served_count = 0;
};

struct SummaryStats {
  double mean_ratio = 0.0;
  double se_ratio = 0.0;  // standard error of the mean
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double violation_freq = 0.0;
  double yes_freq = 0.0;  // gap experiments only
};

// One experiment: `run` must be a pure function of the per-trial seed;
// trial t uses seed = base_seed + t, so results are independent of the
// parallelism degree.
struct ExperimentConfig {
  std::int64_t trials = 1;
  std::uint64_t base_seed = 0;
  int jobs = 1;
  double benchmark = 1.0;  // W_E used for the ratio column
  std::function<RunReport(std::uint64_t seed)> run;
};

struct ExperimentResult {
  std::vector<TrialRow> rows;
  SummaryStats stats;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Gap-solver flavor: counts YES verdicts instead of objective ratios.
SummaryStats run_gap_experiment(std::int64_t trials, std::uint64_t base_seed,
                                int jobs,
                                const std::function<bool(std::uint64_t)>& run);

SummaryStats summarize(const std::vector<TrialRow>& rows);

// Versioned CSV (leading "#schema=1" comment line) with columns
// trial, seed, objective, min_profit_ratio, violated, served_count.
std::string trials_csv(const std::vector<TrialRow>& rows);

struct BenchmarkComparison {
  double w_e = 0.0;
  double mean_w_r = 0.0;
  double se_w_r = 0.0;
};

// Monte-Carlo check of the benchmark dominance W_E >= E[W_R]: solve the
// realized instance of `samples` sampled streams exactly.
BenchmarkComparison compare_benchmarks(const Instance& inst,
                                       const StochasticInput& input,
                                       std::int64_t samples,
                                       std::uint64_t base_seed, int jobs = 1);

}  // namespace ra
