#include "ra/harness.hpp"

#include <atomic>
#include <cmath>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ra/core.hpp"
#include "ra/lp.hpp"
#include "ra/rng.hpp"

namespace ra {

namespace {

// Run fn(t) for t = 0..count-1 on a bounded pool; results land in
// index-order slots, so scheduling never affects output.
void parallel_for(std::int64_t count, int jobs,
                  const std::function<void(std::int64_t)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || count <= 1) {
    for (std::int64_t t = 0; t < count; ++t) fn(t);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::int64_t t = next.fetch_add(1);
      if (t >= count) return;
      try {
        fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min<std::int64_t>(jobs, count); ++w)
    pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::pair<double, double> mean_se(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace

SummaryStats summarize(const std::vector<TrialRow>& rows) {
  SummaryStats s;
  if (rows.empty()) return s;
  std::vector<double> ratios;
  ratios.reserve(rows.size());
  s.min_ratio = std::numeric_limits<double>::infinity();
  s.max_ratio = -std::numeric_limits<double>::infinity();
  std::int64_t violated = 0;
  for (const auto& r : rows) {
    ratios.push_back(r.min_profit_ratio);
    s.min_ratio = std::min(s.min_ratio, r.min_profit_ratio);
    s.max_ratio = std::max(s.max_ratio, r.min_profit_ratio);
    violated += r.violated ? 1 : 0;
  }
  std::tie(s.mean_ratio, s.se_ratio) = mean_se(ratios);
  s.violation_freq =
      static_cast<double>(violated) / static_cast<double>(rows.size());
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1)
    throw std::invalid_argument("run_experiment: trials must be >= 1");
  if (!config.run)
    throw std::invalid_argument("run_experiment: missing run function");
  if (!(config.benchmark > 0.0))
    throw std::invalid_argument("run_experiment: benchmark must be positive");

  ExperimentResult out;
  out.rows.resize(static_cast<std::size_t>(config.trials));
  parallel_for(config.trials, config.jobs, [&](std::int64_t t) {
    const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(t);
    RunReport rep;
    try {
      rep = config.run(seed);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "trial " << t << ": " << e.what();
      throw std::runtime_error(os.str());
    }
    TrialRow& row = out.rows[static_cast<std::size_t>(t)];
    row.trial = t;
    row.seed = seed;
    row.objective = rep.objective;
    row.min_profit_ratio = rep.objective / config.benchmark;
    row.violated = rep.violated();
    row.served_count = rep.served_count();
  });
  out.stats = summarize(out.rows);
  return out;
}

SummaryStats run_gap_experiment(std::int64_t trials, std::uint64_t base_seed,
                                int jobs,
                                const std::function<bool(std::uint64_t)>& run) {
  if (trials < 1)
    throw std::invalid_argument("run_gap_experiment: trials must be >= 1");
  std::vector<char> yes(static_cast<std::size_t>(trials), 0);
  parallel_for(trials, jobs, [&](std::int64_t t) {
    yes[static_cast<std::size_t>(t)] =
        run(base_seed + static_cast<std::uint64_t>(t)) ? 1 : 0;
  });
  SummaryStats s;
  std::int64_t count = 0;
  for (char y : yes) count += y;
  s.yes_freq = static_cast<double>(count) / static_cast<double>(trials);
  return s;
}

std::string trials_csv(const std::vector<TrialRow>& rows) {
  std::ostringstream os;
  os << "#schema=1\n";
  os << "trial,seed,objective,min_profit_ratio,violated,served_count\n";
  os << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.trial << ',' << r.seed << ',' << r.objective << ','
       << r.min_profit_ratio << ',' << (r.violated ? "true" : "false") << ','
       << r.served_count << '\n';
  }
  return os.str();
}

BenchmarkComparison compare_benchmarks(const Instance& inst,
                                       const StochasticInput& input,
                                       std::int64_t samples,
                                       std::uint64_t base_seed, int jobs) {
  if (samples < 1)
    throw std::invalid_argument("compare_benchmarks: samples must be >= 1");
  const auto* iid = std::get_if<IIDInput>(&input);
  if (!iid)
    throw std::invalid_argument("compare_benchmarks: i.i.d. input required");

  BenchmarkComparison out;
  out.w_e = solve_maximin_exact(build_expected_instance(inst, input)).lambda;

  std::vector<double> w_r(static_cast<std::size_t>(samples), 0.0);
  parallel_for(samples, jobs, [&](std::int64_t t) {
    Rng rng(base_seed + static_cast<std::uint64_t>(t));
    const auto stream = draw_iid_stream(iid->probs, inst.m, rng);
    w_r[static_cast<std::size_t>(t)] =
        solve_maximin_exact(realized_instance(inst, stream)).lambda;
  });
  std::tie(out.mean_w_r, out.se_w_r) = mean_se(w_r);
  return out;
}

}  // namespace ra
