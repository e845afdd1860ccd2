#pragma once

#include "ra/types.hpp"

namespace ra {

struct AdwordsInstance {
  int n_advertisers = 0;
  VectorXd budgets;          // B_i > 0
  Eigen::MatrixXd bids;      // b(i, j) >= 0, advertisers x query types
  std::int64_t m = 0;        // query count
  TypeDistribution probs;    // i.i.d. over query-type column indices
};

struct GreedyReport {
  VectorXd spend;                        // min(allocated_i, B_i)
  double revenue = 0.0;                  // sum of spend
  std::vector<int> assignments;          // advertiser index or -1, per step
};

std::vector<std::string> validate_instance(const AdwordsInstance& inst);

// min(bid, remaining budget); the amount the advertiser actually pays.
double effective_bid(double bid, double remaining_budget);

// Assign each arriving query to the advertiser with the largest effective
// bid (ties to the lowest index); queries with all-zero effective bids are
// dropped. Guarantees revenue >= (1 - 1/e) of the LP benchmark.
GreedyReport greedy_run(const AdwordsInstance& inst, std::uint64_t seed);

// Optimal value of the budgeted-assignment LP on the expected instance:
//   max sum b_ij x_ij  s.t.  sum_j y_j b_ij x_ij <= B_i, sum_i x_ij <= 1
// with y_j = m p_j.
double greedy_benchmark(const AdwordsInstance& inst);

// The same market as a one-profit-type allocation instance, so the
// potential-driven algorithms can run on it.
Instance adwords_to_instance(const AdwordsInstance& inst);
StochasticInput adwords_input(const AdwordsInstance& inst);

// Inverse of adwords_to_instance: accepts instances whose options each
// touch one resource with consumption equal to profit.
AdwordsInstance adwords_from_instance(const Instance& inst,
                                      const TypeDistribution& probs);

}  // namespace ra
