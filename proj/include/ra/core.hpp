#pragma once

#include "ra/rng.hpp"
#include "ra/types.hpp"

namespace ra {

// Structural diagnostics; empty means the instance is well formed.
std::vector<std::string> validate_instance(const Instance& inst);
std::vector<std::string> validate_instance(const MixedPCInstance& inst);

// Expected instance of an i.i.d. input: type j gets multiplicity m * p_j.
OfflineFractionalInstance build_expected_instance(const Instance& inst,
                                                  const StochasticInput& input);

// gamma = max over all (i,j,k) of consumption/capacity and profit/benchmark
// ratios; the online form benchmarks profit against w_e, the offline form
// against the covering demands.
GammaReport compute_gamma_online(const Instance& inst, double w_e);
GammaReport compute_gamma_offline(const MixedPCInstance& inst);

// Surrogate-minimizing option for one request:
//   argmin over k in options+{drop} of
//     sum_i a_ijk * resource_prices_i - sum_i w_ijk * profit_weights_i
// where the drop option scores 0. Ties prefer a real option over drop,
// then the lowest option index.
int best_option(const RequestType& request, const VectorXd& resource_prices,
                const VectorXd& profit_weights);

double option_score(const OptionVector& opt, const VectorXd& resource_prices,
                    const VectorXd& profit_weights);

enum class ChernoffKind { kLower, kUpperSmall, kUpperLarge };

// Tail probability bounds for sums of i.i.d. variables in [0,B] with
// mean mu and relative deviation eps:
//   kLower      exp(-eps^2 mu / 2B)
//   kUpperSmall exp(-eps^2 mu / 4B)   (valid for eps <= 2e-1)
//   kUpperLarge 2^{-(1+eps) mu / B}
double chernoff_tail(ChernoffKind kind, double mu, double bound, double eps);

// Draw a length-m request stream (type ids; -1 marks a null request).
// Handles both i.i.d. inputs and ASI schedules; for adaptive schedules
// the caller must instead sample step by step during the run.
std::vector<int> draw_iid_stream(const TypeDistribution& probs, std::int64_t m,
                                 Rng& rng);
int draw_type(const TypeDistribution& probs, Rng& rng);

constexpr int kNullRequest = -1;

}  // namespace ra
