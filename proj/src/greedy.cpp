#include "ra/greedy.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ra/core.hpp"
#include "ra/lp.hpp"
#include "ra/rng.hpp"

namespace ra {

std::vector<std::string> validate_instance(const AdwordsInstance& inst) {
  std::vector<std::string> out;
  if (inst.n_advertisers < 1) out.push_back("n_advertisers must be >= 1");
  if (inst.m < 1) out.push_back("m must be >= 1");
  if (inst.budgets.size() != inst.n_advertisers)
    out.push_back("budgets length does not match n_advertisers");
  for (Eigen::Index i = 0; i < inst.budgets.size(); ++i)
    if (!(inst.budgets[i] > 0.0) || !std::isfinite(inst.budgets[i])) {
      std::ostringstream os;
      os << "budget " << inst.budgets[i] << " not positive (index " << i << ")";
      out.push_back(os.str());
    }
  if (inst.bids.rows() != inst.n_advertisers)
    out.push_back("bid table row count does not match n_advertisers");
  for (Eigen::Index i = 0; i < inst.bids.rows(); ++i)
    for (Eigen::Index j = 0; j < inst.bids.cols(); ++j)
      if (!(inst.bids(i, j) >= 0.0) || !std::isfinite(inst.bids(i, j))) {
        std::ostringstream os;
        os << "bid (" << i << "," << j << ") not a finite nonnegative number";
        out.push_back(os.str());
      }
  double mass = 0.0;
  for (const auto& [j, p] : inst.probs) {
    if (j < 0 || j >= inst.bids.cols())
      out.push_back("query distribution references unknown column");
    if (!(p >= 0.0) || !std::isfinite(p))
      out.push_back("query probability not a finite nonnegative number");
    else
      mass += p;
  }
  if (mass > 1.0 + 1e-12)
    out.push_back("query probabilities sum to more than 1");
  return out;
}

double effective_bid(double bid, double remaining_budget) {
  if (!(bid >= 0.0) || !(remaining_budget >= 0.0))
    throw std::domain_error("effective_bid: arguments must be >= 0");
  return std::min(bid, remaining_budget);
}

GreedyReport greedy_run(const AdwordsInstance& inst, std::uint64_t seed) {
  if (auto problems = validate_instance(inst); !problems.empty())
    throw std::invalid_argument("greedy_run: invalid instance: " + problems[0]);

  GreedyReport rep;
  rep.spend = VectorXd::Zero(inst.n_advertisers);
  rep.assignments.reserve(static_cast<std::size_t>(inst.m));

  Rng rng(seed);
  for (std::int64_t s = 0; s < inst.m; ++s) {
    const int j = draw_type(inst.probs, rng);
    int best = -1;
    double best_bid = 0.0;
    if (j != kNullRequest) {
      for (int i = 0; i < inst.n_advertisers; ++i) {
        const double e =
            effective_bid(inst.bids(i, j), inst.budgets[i] - rep.spend[i]);
        if (e > best_bid) {  // strict: ties keep the lowest index
          best = i;
          best_bid = e;
        }
      }
    }
    rep.assignments.push_back(best);
    if (best >= 0) {
      rep.spend[best] += best_bid;
      rep.revenue += best_bid;
    }
  }
  return rep;
}

Instance adwords_to_instance(const AdwordsInstance& inst) {
  Instance out;
  out.n_resources = inst.n_advertisers;
  out.n_profits = 1;
  out.capacities = inst.budgets;
  out.m = inst.m;
  for (Eigen::Index j = 0; j < inst.bids.cols(); ++j) {
    RequestType t;
    t.id = static_cast<int>(j);
    for (int i = 0; i < inst.n_advertisers; ++i) {
      const double b = inst.bids(i, j);
      if (b <= 0.0) continue;
      OptionVector o;
      o.consumption[i] = b;
      o.profit[0] = b;
      t.options.push_back(std::move(o));
    }
    out.request_types.push_back(std::move(t));
  }
  return out;
}

StochasticInput adwords_input(const AdwordsInstance& inst) {
  return IIDInput{inst.probs};
}

AdwordsInstance adwords_from_instance(const Instance& inst,
                                      const TypeDistribution& probs) {
  if (inst.n_profits != 1)
    throw std::invalid_argument("adwords_from_instance: needs one profit type");
  AdwordsInstance out;
  out.n_advertisers = inst.n_resources;
  out.budgets = inst.capacities;
  out.m = inst.m;
  out.bids = Eigen::MatrixXd::Zero(inst.n_resources,
                                   static_cast<Eigen::Index>(
                                       inst.request_types.size()));
  for (std::size_t j = 0; j < inst.request_types.size(); ++j) {
    const auto& t = inst.request_types[j];
    for (const auto& o : t.options) {
      if (o.consumption.size() != 1 || o.profit.size() != 1)
        throw std::invalid_argument(
            "adwords_from_instance: option is not a single bid");
      const auto [i, a] = *o.consumption.begin();
      const double w = o.profit.begin()->second;
      if (a != w)
        throw std::invalid_argument(
            "adwords_from_instance: bid and payment differ");
      out.bids(i, static_cast<Eigen::Index>(j)) = a;
    }
    const auto it = probs.find(t.id);
    out.probs[static_cast<int>(j)] = it == probs.end() ? 0.0 : it->second;
  }
  return out;
}

double greedy_benchmark(const AdwordsInstance& inst) {
  // With one profit row, the maximin objective equals total expected
  // revenue, which is exactly the budgeted-assignment LP value.
  const auto expected =
      build_expected_instance(adwords_to_instance(inst), adwords_input(inst));
  return solve_maximin_exact(expected).lambda;
}

}  // namespace ra
