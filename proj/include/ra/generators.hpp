#pragma once

#include "ra/greedy.hpp"
#include "ra/types.hpp"

namespace ra {

struct AdwordsGenParams {
  int n_advertisers = 5;
  int n_query_types = 20;
  std::int64_t m = 1000;
  double budget = 100.0;
  double bid_lo = 0.5;
  double bid_hi = 1.0;
  double zero_bid_prob = 0.0;  // chance a (i,j) bid is dropped to 0
};

AdwordsInstance gen_adwords_iid(const AdwordsGenParams& params,
                                std::uint64_t seed);

// Family of hard instances: n = 2^z resources with B units each and one
// profit type; request categories i = 1..z each contribute four types
// built from complementary binary columns, plus the leftover-probability
// null request.
struct LowerBoundParams {
  int z = 2;
  double B = 4.0;
  double alpha = 0.5;
};

struct LowerBoundFamily {
  Instance instance;
  IIDInput input;
  // column vectors per category (length 2^z): ascending column * alpha
  // and its descending complement
  std::vector<VectorXd> v;
  std::vector<VectorXd> w;
};

LowerBoundFamily gen_lower_bound(const LowerBoundParams& params);

enum class ASIPattern { kChunked, kAlternating, kAdaptive };

struct ASIGenerated {
  ASISchedule schedule;
  // Per-step benchmarks: W_E(t) for the time-varying-objective run, and
  // per-step capacity/benchmark profiles for the per-resource run.
  // Profiles are empty for adaptive schedules (no fixed per-step LP).
  std::vector<double> w_e_per_step;
  Eigen::MatrixXd c_profile;    // m x n_resources
  Eigen::MatrixXd opt_profile;  // m x n_profits
};

ASIGenerated gen_asi_schedule(const Instance& inst,
                              const std::vector<TypeDistribution>& bases,
                              ASIPattern pattern, int chunks,
                              std::uint64_t seed);

struct RoutingEdge {
  int u = 0;
  int v = 0;
  double capacity = 0.0;
};

struct RoutingGraph {
  int n_nodes = 0;
  bool directed = false;
  std::vector<RoutingEdge> edges;  // edge index is the resource id
};

struct RoutingRequest {
  int s = 0;
  int t = 0;
  double rho = 1.0;    // bandwidth consumed on every edge of the path
  double value = 0.0;  // profit if routed
};

// "u v capacity" per line; '#' starts a comment.
RoutingGraph parse_edge_list(const std::string& text, bool directed);

// Best route under per-edge prices, judged exactly like best_option over
// the implicit set of all simple paths: serve the path minimizing
// rho * sum of prices if that beats the drop score, else nothing.
// Ties break toward the lexicographically smallest edge-index sequence.
std::optional<std::vector<int>> routing_best_option(const RoutingGraph& graph,
                                                    const RoutingRequest& req,
                                                    const VectorXd& edge_prices,
                                                    double profit_weight);

// All simple s-t paths as edge-index sequences (small graphs only).
std::vector<std::vector<int>> enumerate_simple_paths(const RoutingGraph& graph,
                                                     int s, int t);

// Explicit option set of a routing request: one option per simple path,
// consuming rho on each edge, paying the request value into profit 0.
RequestType routing_request_type(const RoutingGraph& graph,
                                 const RoutingRequest& req, int id);

struct MixedPCGenParams {
  int n_pack = 3;
  int n_cover = 3;
  int n_types = 40;
  std::int64_t m = 2000;
  double eps = 0.2;
};

struct MixedPCPair {
  MixedPCInstance yes;  // planted assignment with factor-2 slack
  MixedPCInstance no;   // demands scaled until certified infeasible
};

MixedPCPair gen_mixed_pc_planted(const MixedPCGenParams& params,
                                 std::uint64_t seed);

}  // namespace ra
