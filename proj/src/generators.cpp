#include "ra/generators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ra/core.hpp"
#include "ra/gap.hpp"
#include "ra/lp.hpp"
#include "ra/rng.hpp"

namespace ra {

AdwordsInstance gen_adwords_iid(const AdwordsGenParams& p, std::uint64_t seed) {
  if (p.n_advertisers < 1 || p.n_query_types < 1 || p.m < 1)
    throw std::invalid_argument("gen_adwords_iid: dimensions must be >= 1");
  if (!(p.budget > 0.0) || !(p.bid_lo >= 0.0) || !(p.bid_hi >= p.bid_lo))
    throw std::invalid_argument("gen_adwords_iid: bad budget or bid range");

  Rng rng(seed);
  AdwordsInstance inst;
  inst.n_advertisers = p.n_advertisers;
  inst.budgets = VectorXd::Constant(p.n_advertisers, p.budget);
  inst.bids = Eigen::MatrixXd(p.n_advertisers, p.n_query_types);
  inst.m = p.m;
  for (Eigen::Index i = 0; i < inst.bids.rows(); ++i)
    for (Eigen::Index j = 0; j < inst.bids.cols(); ++j)
      inst.bids(i, j) = rng.bernoulli(p.zero_bid_prob)
                            ? 0.0
                            : rng.uniform(p.bid_lo, p.bid_hi);
  const double pj = 1.0 / p.n_query_types;
  for (int j = 0; j < p.n_query_types; ++j) inst.probs[j] = pj;
  return inst;
}

LowerBoundFamily gen_lower_bound(const LowerBoundParams& p) {
  if (p.z < 1) throw std::invalid_argument("gen_lower_bound: z must be >= 1");
  if (!(p.B > 0.0)) throw std::invalid_argument("gen_lower_bound: B must be > 0");
  if (!(p.alpha > 0.0) || !(p.alpha < 1.0))
    throw std::invalid_argument("gen_lower_bound: alpha must be in (0,1)");

  const int n = 1 << p.z;
  const double md = p.B * p.z * (2.0 + 1.0 / p.alpha) +
                    std::sqrt(p.B * p.z);
  const auto m = std::llround(md);

  LowerBoundFamily fam;
  fam.instance.n_resources = n;
  fam.instance.n_profits = 1;
  fam.instance.capacities = VectorXd::Constant(n, p.B);
  fam.instance.m = m;

  // Ascending all-binary-strings matrix: row r holds r in binary, column
  // i = 1..z reads bit z-i (most significant first). The descending
  // matrix is its complement.
  for (int i = 1; i <= p.z; ++i) {
    VectorXd v(n), w(n);
    for (int r = 0; r < n; ++r) {
      const int bit = (r >> (p.z - i)) & 1;
      v[r] = p.alpha * bit;
      w[r] = 1.0 - bit;
    }
    fam.v.push_back(v);
    fam.w.push_back(w);
  }

  const double mm = static_cast<double>(m);
  const double p_v = p.B / (p.alpha * p.z * mm);
  const double p_w = p.B / (p.z * mm);
  const double p_mid = std::sqrt(p.B / (p.z * mm));
  auto check_prob = [](double prob, const char* name) {
    if (!(prob >= 0.0) || !(prob <= 1.0)) {
      std::ostringstream os;
      os << "gen_lower_bound: probability " << name << " = " << prob
         << " outside [0,1]";
      throw std::invalid_argument(os.str());
    }
  };
  check_prob(p_v, "B/(alpha z m)");
  check_prob(p_w, "B/(z m)");
  check_prob(p_mid, "sqrt(B/(z m))");

  const double profits[4] = {4.0 * p.alpha, 3.0, 2.0, 1.0};
  const double probs[4] = {p_v, p_w, p_mid, p_w};
  double total = 0.0;
  for (int i = 0; i < p.z; ++i) {
    for (int kind = 0; kind < 4; ++kind) {
      const VectorXd& col = kind == 0 ? fam.v[i] : fam.w[i];
      const int id = i * 4 + kind;
      RequestType t;
      t.id = id;
      OptionVector o;
      for (int r = 0; r < n; ++r)
        if (col[r] != 0.0) o.consumption[r] = col[r];
      o.profit[0] = profits[kind];
      t.options.push_back(std::move(o));
      fam.instance.request_types.push_back(std::move(t));
      fam.input.probs[id] = probs[kind];
      total += probs[kind];
    }
  }
  if (total > 1.0) {
    std::ostringstream os;
    os << "gen_lower_bound: total probability mass " << total
       << " exceeds 1 (bound z(B/(alpha z m) + 2B/(z m) + sqrt(B/(z m))) <= 1)";
    throw std::invalid_argument(os.str());
  }
  // The remaining mass is the zero-consumption zero-profit request,
  // represented as the distribution deficit.
  return fam;
}

namespace {

double base_benchmark(const Instance& inst, const TypeDistribution& base) {
  return solve_maximin_exact(build_expected_instance(inst, IIDInput{base}))
      .lambda;
}

}  // namespace

ASIGenerated gen_asi_schedule(const Instance& inst,
                              const std::vector<TypeDistribution>& bases,
                              ASIPattern pattern, int chunks,
                              std::uint64_t seed) {
  if (bases.empty())
    throw std::invalid_argument("gen_asi_schedule: need at least one base");
  const auto m = inst.m;
  ASIGenerated out;

  if (pattern == ASIPattern::kAdaptive) {
    // Adversary pressing the currently fullest resource: each step pick
    // the base whose expected consumption lines up most with current
    // loads (first option of each type as the proxy).
    std::vector<VectorXd> exp_cons(bases.size(),
                                   VectorXd::Zero(inst.n_resources));
    for (std::size_t b = 0; b < bases.size(); ++b) {
      for (const auto& [id, prob] : bases[b]) {
        const RequestType* t = inst.find_type(id);
        if (!t)
          throw std::invalid_argument("gen_asi_schedule: unknown type in base");
        if (t->options.empty()) continue;
        for (const auto& [i, a] : t->options[0].consumption)
          exp_cons[b][i] += prob * a;
      }
    }
    const VectorXd caps = inst.capacities;
    const auto base_list = bases;
    out.schedule.policy = [exp_cons, caps,
                           base_list](std::int64_t, const RunHistory& h) {
      std::size_t best = 0;
      double best_score = -1.0;
      for (std::size_t b = 0; b < base_list.size(); ++b) {
        double score = 0.0;
        for (Eigen::Index i = 0; i < caps.size(); ++i) {
          const double load =
              h.cum_consumption.size() > i ? h.cum_consumption[i] / caps[i] : 0.0;
          score += load * exp_cons[b][i];
        }
        if (score > best_score) {
          best_score = score;
          best = b;
        }
      }
      return base_list[best];
    };
    double w_min = std::numeric_limits<double>::infinity();
    for (const auto& b : bases) w_min = std::min(w_min, base_benchmark(inst, b));
    out.w_e_per_step.assign(static_cast<std::size_t>(m), w_min);
    return out;
  }

  // Base index per step.
  std::vector<int> pick(static_cast<std::size_t>(m), 0);
  if (pattern == ASIPattern::kAlternating) {
    for (std::int64_t s = 0; s < m; ++s)
      pick[s] = static_cast<int>(s % static_cast<std::int64_t>(bases.size()));
  } else {
    if (chunks < 1)
      throw std::invalid_argument("gen_asi_schedule: chunks must be >= 1");
    std::vector<int> chunk_base(chunks);
    for (int c = 0; c < chunks; ++c)
      chunk_base[c] = c % static_cast<int>(bases.size());
    Rng rng(seed);
    for (int c = chunks - 1; c > 0; --c)
      std::swap(chunk_base[c],
                chunk_base[rng.index(static_cast<std::uint64_t>(c) + 1)]);
    for (std::int64_t s = 0; s < m; ++s)
      pick[s] = chunk_base[static_cast<std::size_t>(s * chunks / m)];
  }
  out.schedule.per_step.reserve(pick.size());
  for (int b : pick) out.schedule.per_step.push_back(bases[b]);

  // Per-step benchmark as if the whole horizon were drawn from that
  // step's distribution.
  std::vector<double> bench(bases.size());
  for (std::size_t b = 0; b < bases.size(); ++b)
    bench[b] = base_benchmark(inst, bases[b]);
  out.w_e_per_step.resize(pick.size());
  for (std::size_t s = 0; s < pick.size(); ++s)
    out.w_e_per_step[s] = bench[pick[s]];

  // Per-step profiles from the coupled LP: one type copy per (type, base
  // class) with scale = (steps of that class) * p_j; every step of a
  // class receives an equal share.
  std::vector<std::int64_t> class_count(bases.size(), 0);
  for (int b : pick) ++class_count[b];

  OfflineFractionalInstance lp;
  lp.n_resources = inst.n_resources;
  lp.n_profits = inst.n_profits;
  lp.capacities = inst.capacities;
  struct Slot {
    std::size_t base;
    const RequestType* type;
    double prob;
  };
  std::vector<Slot> slots;
  for (std::size_t b = 0; b < bases.size(); ++b) {
    if (class_count[b] == 0) continue;
    for (const auto& [id, prob] : bases[b]) {
      const RequestType* t = inst.find_type(id);
      if (!t)
        throw std::invalid_argument("gen_asi_schedule: unknown type in base");
      lp.request_types.push_back(*t);
      lp.scale.push_back(static_cast<double>(class_count[b]) * prob);
      slots.push_back({b, t, prob});
    }
  }
  const auto sol = solve_maximin_exact(lp);

  // Per-step consumption and profit of the optimal plan, per base class.
  std::vector<VectorXd> step_cons(bases.size(), VectorXd::Zero(inst.n_resources));
  std::vector<VectorXd> step_prof(bases.size(), VectorXd::Zero(inst.n_profits));
  for (std::size_t s = 0; s < slots.size(); ++s) {
    const auto& slot = slots[s];
    for (std::size_t k = 0; k < slot.type->options.size(); ++k) {
      const double x = slot.prob * sol.allocation[s][k];
      for (const auto& [i, a] : slot.type->options[k].consumption)
        step_cons[slot.base][i] += x * a;
      for (const auto& [i, w] : slot.type->options[k].profit)
        step_prof[slot.base][i] += x * w;
    }
  }
  out.c_profile = Eigen::MatrixXd(m, inst.n_resources);
  out.opt_profile = Eigen::MatrixXd(m, inst.n_profits);
  for (std::int64_t s = 0; s < m; ++s) {
    out.c_profile.row(s) = step_cons[pick[s]].transpose();
    out.opt_profile.row(s) = step_prof[pick[s]].transpose();
  }
  return out;
}

RoutingGraph parse_edge_list(const std::string& text, bool directed) {
  RoutingGraph g;
  g.directed = directed;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    RoutingEdge e;
    if (!(ls >> e.u >> e.v >> e.capacity)) continue;
    if (e.u < 0 || e.v < 0 || !(e.capacity > 0.0))
      throw std::invalid_argument("parse_edge_list: bad edge line: " + line);
    g.n_nodes = std::max({g.n_nodes, e.u + 1, e.v + 1});
    g.edges.push_back(e);
  }
  return g;
}

namespace {

struct PathLabel {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<int> path;  // edge indices

  bool better_than(const PathLabel& other) const {
    if (cost != other.cost) return cost < other.cost;
    return std::lexicographical_compare(path.begin(), path.end(),
                                        other.path.begin(), other.path.end());
  }
};

}  // namespace

std::optional<std::vector<int>> routing_best_option(const RoutingGraph& graph,
                                                    const RoutingRequest& req,
                                                    const VectorXd& edge_prices,
                                                    double profit_weight) {
  if (edge_prices.size() != static_cast<Eigen::Index>(graph.edges.size()))
    throw std::invalid_argument("routing_best_option: price vector size");
  if (req.s < 0 || req.s >= graph.n_nodes || req.t < 0 ||
      req.t >= graph.n_nodes)
    throw std::invalid_argument("routing_best_option: endpoint out of range");
  for (Eigen::Index e = 0; e < edge_prices.size(); ++e)
    if (!(edge_prices[e] >= 0.0))
      throw std::invalid_argument("routing_best_option: negative price");

  // Label-correcting shortest path with (cost, lexicographic edge
  // sequence) labels. Appending a cycle never improves a label, so the
  // relaxation reaches a fixpoint within n_nodes rounds.
  std::vector<PathLabel> label(static_cast<std::size_t>(graph.n_nodes));
  label[req.s].cost = 0.0;
  struct Arc {
    int from, to, edge;
  };
  std::vector<Arc> arcs;
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& ed = graph.edges[e];
    arcs.push_back({ed.u, ed.v, static_cast<int>(e)});
    if (!graph.directed) arcs.push_back({ed.v, ed.u, static_cast<int>(e)});
  }
  for (int round = 0; round <= graph.n_nodes + 1; ++round) {
    bool changed = false;
    for (const auto& arc : arcs) {
      if (!std::isfinite(label[arc.from].cost)) continue;
      PathLabel cand;
      cand.cost = label[arc.from].cost + edge_prices[arc.edge];
      cand.path = label[arc.from].path;
      cand.path.push_back(arc.edge);
      if (cand.better_than(label[arc.to])) {
        label[arc.to] = std::move(cand);
        changed = true;
      }
    }
    if (!changed) break;
  }

  const PathLabel& best = label[req.t];
  if (!std::isfinite(best.cost)) return std::nullopt;  // disconnected
  const double score = req.rho * best.cost - req.value * profit_weight;
  if (score > 0.0) return std::nullopt;  // the drop option wins
  return best.path;
}

std::vector<std::vector<int>> enumerate_simple_paths(const RoutingGraph& graph,
                                                     int s, int t) {
  if (graph.n_nodes > 16)
    throw std::invalid_argument("enumerate_simple_paths: graph too large");
  std::vector<std::vector<std::pair<int, int>>> adj(graph.n_nodes);  // (to, edge)
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    const auto& ed = graph.edges[e];
    adj[ed.u].push_back({ed.v, static_cast<int>(e)});
    if (!graph.directed) adj[ed.v].push_back({ed.u, static_cast<int>(e)});
  }
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  std::vector<bool> visited(graph.n_nodes, false);
  std::function<void(int)> dfs = [&](int u) {
    if (u == t) {
      out.push_back(path);
      return;
    }
    visited[u] = true;
    for (const auto& [v, e] : adj[u]) {
      if (visited[v]) continue;
      path.push_back(e);
      dfs(v);
      path.pop_back();
    }
    visited[u] = false;
  };
  dfs(s);
  return out;
}

RequestType routing_request_type(const RoutingGraph& graph,
                                 const RoutingRequest& req, int id) {
  RequestType t;
  t.id = id;
  for (const auto& path : enumerate_simple_paths(graph, req.s, req.t)) {
    OptionVector o;
    for (int e : path) o.consumption[e] = req.rho;
    o.profit[0] = req.value;
    t.options.push_back(std::move(o));
  }
  return t;
}

MixedPCPair gen_mixed_pc_planted(const MixedPCGenParams& p,
                                 std::uint64_t seed) {
  if (p.n_pack < 1 || p.n_cover < 1 || p.n_types < 1 || p.m < p.n_types)
    throw std::invalid_argument("gen_mixed_pc_planted: bad shape");
  Rng rng(seed);

  MixedPCInstance yes;
  yes.n_pack = p.n_pack;
  yes.n_cover = p.n_cover;
  yes.m = p.m;
  for (int j = 0; j < p.n_types; ++j) {
    RequestType t;
    t.id = j;
    const int n_options = 1 + static_cast<int>(rng.index(3));
    for (int k = 0; k < n_options; ++k) {
      OptionVector o;
      for (int i = 0; i < p.n_pack; ++i)
        if (rng.bernoulli(0.7)) o.consumption[i] = rng.uniform(0.5, 1.5);
      for (int i = 0; i < p.n_cover; ++i)
        if (rng.bernoulli(0.7)) o.profit[i] = rng.uniform(0.5, 1.5);
      t.options.push_back(std::move(o));
    }
    yes.request_types.push_back(std::move(t));
  }
  yes.multiplicity.assign(p.n_types, p.m / p.n_types);
  for (std::int64_t r = 0; r < p.m % p.n_types; ++r) ++yes.multiplicity[r];

  // Plant one served option per type and derive rows from the exact
  // sums: capacities doubled, demands halved, so the plan fits with a
  // comfortable margin on both sides.
  VectorXd pack_sum = VectorXd::Zero(p.n_pack);
  VectorXd cover_sum = VectorXd::Zero(p.n_cover);
  for (int j = 0; j < p.n_types; ++j) {
    const auto& opts = yes.request_types[j].options;
    const auto k = rng.index(static_cast<std::uint64_t>(opts.size()));
    const double count = static_cast<double>(yes.multiplicity[j]);
    for (const auto& [i, a] : opts[k].consumption) pack_sum[i] += count * a;
    for (const auto& [i, w] : opts[k].profit) cover_sum[i] += count * w;
  }
  yes.capacities = VectorXd(p.n_pack);
  yes.demands = VectorXd(p.n_cover);
  for (int i = 0; i < p.n_pack; ++i)
    yes.capacities[i] = pack_sum[i] > 0.0 ? 2.0 * pack_sum[i] : 1.0;
  for (int i = 0; i < p.n_cover; ++i)
    yes.demands[i] = cover_sum[i] > 0.0 ? 0.5 * cover_sum[i] : 1e-6;

  MixedPCPair out;
  out.no = gen_no_instance(yes, 3.0 * p.eps * (1.0 + p.eps), p.eps);
  out.yes = std::move(yes);
  return out;
}

}  // namespace ra
