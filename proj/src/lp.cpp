#include "ra/lp.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ra/core.hpp"
#include "ra/gap.hpp"

namespace ra {

std::vector<double> simplex_max(const Eigen::VectorXd& c,
                                const Eigen::MatrixXd& A,
                                const Eigen::VectorXd& b) {
  const Eigen::Index rows = A.rows();
  const Eigen::Index nv = A.cols();
  if (b.minCoeff() < 0.0)
    throw std::invalid_argument("simplex_max: requires b >= 0");

  const double tol = 1e-10;
  Eigen::MatrixXd T(rows, nv + rows + 1);
  T.setZero();
  T.leftCols(nv) = A;
  T.block(0, nv, rows, rows).setIdentity();
  T.col(nv + rows) = b;

  Eigen::VectorXd obj(nv + rows + 1);
  obj.setZero();
  obj.head(nv) = c;

  std::vector<Eigen::Index> basis(rows);
  for (Eigen::Index r = 0; r < rows; ++r) basis[r] = nv + r;

  const long max_iters = 50L * (rows + nv) + 5000;
  long iters = 0;
  for (;;) {
    ++iters;
    const bool bland = iters > max_iters;  // anti-cycling fallback
    if (iters > 4 * max_iters)
      throw std::runtime_error("simplex_max: iteration limit exceeded");

    // entering column
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < nv + rows; ++j) {
      if (obj[j] > (bland ? tol : best)) {
        enter = j;
        best = obj[j];
        if (bland) break;
      }
    }
    if (enter < 0) break;  // optimal

    // ratio test
    Eigen::Index leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (T(r, enter) > tol) {
        const double ratio = T(r, nv + rows) / T(r, enter);
        if (ratio < best_ratio - tol ||
            (ratio < best_ratio + tol && leave >= 0 &&
             basis[r] < basis[leave])) {
          best_ratio = ratio;
          leave = r;
        }
      }
    }
    if (leave < 0) throw std::runtime_error("simplex_max: LP is unbounded");

    // pivot
    T.row(leave) /= T(leave, enter);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (r != leave && std::abs(T(r, enter)) > 0.0)
        T.row(r) -= T(r, enter) * T.row(leave);
    }
    obj -= obj[enter] * T.row(leave).transpose();
    basis[leave] = enter;
  }

  std::vector<double> z(nv, 0.0);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (basis[r] < nv) z[basis[r]] = std::max(0.0, T(r, nv + rows));
  }
  return z;
}

namespace {

struct MaximinShape {
  Eigen::Index n_vars;  // 1 + sum K_j; lambda first
  std::vector<Eigen::Index> offset;  // x_{j,0} index per type
};

MaximinShape shape_of(const OfflineFractionalInstance& inst) {
  MaximinShape s;
  s.n_vars = 1;
  s.offset.resize(inst.request_types.size());
  for (std::size_t j = 0; j < inst.request_types.size(); ++j) {
    s.offset[j] = s.n_vars;
    s.n_vars += static_cast<Eigen::Index>(inst.request_types[j].options.size());
  }
  return s;
}

}  // namespace

LPSolution solve_maximin_exact(const OfflineFractionalInstance& inst,
                               double /*tol*/, const ExactSolverLimits& limits) {
  const int n_rows = std::max(inst.n_resources, inst.n_profits);
  std::size_t total_options = 0;
  for (const auto& t : inst.request_types) total_options += t.options.size();
  if (n_rows > limits.max_rows ||
      total_options > static_cast<std::size_t>(limits.max_options)) {
    std::ostringstream os;
    os << "solve_maximin_exact: instance too large (rows " << n_rows
       << ", options " << total_options
       << "); use solve_maximin_sampling instead";
    throw std::length_error(os.str());
  }
  if (inst.capacities.size() != inst.n_resources)
    throw std::invalid_argument("solve_maximin_exact: bad capacities length");

  const auto shape = shape_of(inst);
  const Eigen::Index J = static_cast<Eigen::Index>(inst.request_types.size());
  const Eigen::Index rows = inst.n_profits + inst.n_resources + J;

  Eigen::MatrixXd A(rows, shape.n_vars);
  Eigen::VectorXd b(rows);
  A.setZero();
  b.setZero();

  // profit rows: lambda - sum scale_j w_ij.x_j <= 0
  for (Eigen::Index i = 0; i < inst.n_profits; ++i) A(i, 0) = 1.0;
  for (std::size_t j = 0; j < inst.request_types.size(); ++j) {
    const double sc = inst.scale[j];
    const auto& opts = inst.request_types[j].options;
    for (std::size_t k = 0; k < opts.size(); ++k) {
      const Eigen::Index col = shape.offset[j] + static_cast<Eigen::Index>(k);
      for (const auto& [i, w] : opts[k].profit) A(i, col) -= sc * w;
      for (const auto& [i, a] : opts[k].consumption)
        A(inst.n_profits + i, col) += sc * a;
      A(inst.n_profits + inst.n_resources + static_cast<Eigen::Index>(j), col) =
          1.0;
    }
  }
  for (Eigen::Index i = 0; i < inst.n_resources; ++i)
    b[inst.n_profits + i] = inst.capacities[i];
  for (Eigen::Index j = 0; j < J; ++j)
    b[inst.n_profits + inst.n_resources + j] = 1.0;

  Eigen::VectorXd c(shape.n_vars);
  c.setZero();
  c[0] = 1.0;

  const auto z = simplex_max(c, A, b);

  LPSolution sol;
  sol.lambda = z[0];
  sol.allocation.resize(inst.request_types.size());
  for (std::size_t j = 0; j < inst.request_types.size(); ++j) {
    const auto& opts = inst.request_types[j].options;
    sol.allocation[j].resize(opts.size());
    for (std::size_t k = 0; k < opts.size(); ++k)
      sol.allocation[j][k] = z[shape.offset[j] + k];
  }
  return sol;
}

FeasibilityReport check_feasible(const OfflineFractionalInstance& inst,
                                 const LPSolution& sol, double tol) {
  FeasibilityReport rep;
  rep.worst_slack = std::numeric_limits<double>::infinity();

  auto consider = [&](double slack, const std::string& name) {
    if (slack < rep.worst_slack) {
      rep.worst_slack = slack;
      rep.worst_constraint = name;
    }
  };

  VectorXd profit = VectorXd::Zero(inst.n_profits);
  VectorXd used = VectorXd::Zero(inst.n_resources);
  for (std::size_t j = 0; j < inst.request_types.size(); ++j) {
    const auto& opts = inst.request_types[j].options;
    if (sol.allocation.size() <= j || sol.allocation[j].size() != opts.size())
      throw std::invalid_argument("check_feasible: allocation shape mismatch");
    double simplex_sum = 0.0;
    for (std::size_t k = 0; k < opts.size(); ++k) {
      const double x = sol.allocation[j][k];
      std::ostringstream os;
      os << "x[" << inst.request_types[j].id << "][" << k << "] >= 0";
      consider(x, os.str());
      simplex_sum += x;
      for (const auto& [i, w] : opts[k].profit)
        profit[i] += inst.scale[j] * w * x;
      for (const auto& [i, a] : opts[k].consumption)
        used[i] += inst.scale[j] * a * x;
    }
    std::ostringstream os;
    os << "sum_k x[" << inst.request_types[j].id << "] <= 1";
    consider(1.0 - simplex_sum, os.str());
  }
  for (Eigen::Index i = 0; i < inst.n_resources; ++i) {
    std::ostringstream os;
    os << "packing row " << i;
    consider(inst.capacities[i] - used[i], os.str());
  }
  for (Eigen::Index i = 0; i < inst.n_profits; ++i) {
    std::ostringstream os;
    os << "profit row " << i << " >= lambda";
    consider(profit[i] - sol.lambda, os.str());
  }
  rep.feasible = rep.worst_slack >= -tol;
  return rep;
}

OfflineFractionalInstance realized_instance(const Instance& inst,
                                            const std::vector<int>& stream) {
  std::map<int, std::int64_t> counts;
  for (int id : stream)
    if (id != kNullRequest) ++counts[id];
  OfflineFractionalInstance out;
  out.n_resources = inst.n_resources;
  out.n_profits = inst.n_profits;
  out.capacities = inst.capacities;
  for (const auto& [id, count] : counts) {
    const RequestType* t = inst.find_type(id);
    if (!t) throw std::invalid_argument("realized_instance: unknown type id");
    out.request_types.push_back(*t);
    out.scale.push_back(static_cast<double>(count));
  }
  return out;
}

SamplingInterval solve_maximin_sampling(const Instance& inst,
                                        const StochasticInput& input,
                                        double eps, double delta,
                                        std::uint64_t seed) {
  const auto* iid = std::get_if<IIDInput>(&input);
  if (!iid)
    throw std::invalid_argument("solve_maximin_sampling: i.i.d. input required");

  // lambda is bracketed by 0 and m * max_jk total profit of one option
  double w_top = 0.0;
  for (const auto& t : inst.request_types) {
    for (const auto& opt : t.options) {
      double tot = 0.0;
      for (const auto& [i, w] : opt.profit) tot += w;
      w_top = std::max(w_top, tot);
    }
  }
  SamplingInterval out;
  out.hi = static_cast<double>(inst.m) * w_top;
  if (out.hi == 0.0) return out;  // no profit anywhere

  // Expected-instance request pool as a multiset: expected counts rounded
  // to integers so the gap solver can sample uniformly over m requests.
  MixedPCInstance pc;
  pc.n_pack = inst.n_resources;
  pc.n_cover = inst.n_profits;
  pc.capacities = inst.capacities;
  pc.m = 0;
  for (const auto& t : inst.request_types) {
    auto it = iid->probs.find(t.id);
    const double p = it == iid->probs.end() ? 0.0 : it->second;
    const auto mult = static_cast<std::int64_t>(
        std::llround(p * static_cast<double>(inst.m)));
    if (mult <= 0) continue;
    pc.request_types.push_back(t);
    pc.multiplicity.push_back(mult);
    pc.m += mult;
  }
  if (pc.m == 0) return SamplingInterval{0.0, 0.0, 0};

  const double slack = 3.0 * eps * (1.0 + eps);
  const double width = (1.0 + slack) / std::max(1e-12, 1.0 - slack);

  double lo = 0.0, hi = out.hi;
  const double lo_guess = hi * 1e-3;
  int max_probes = static_cast<int>(
      std::ceil(std::log2(std::max(2.0, hi / (eps * lo_guess)))));
  max_probes = std::min(max_probes, 60);

  Rng seeder(seed);
  int probes = 0;
  while (probes < max_probes && (lo == 0.0 || hi / lo > width)) {
    const double mid = lo == 0.0 ? hi * 0.25 : std::sqrt(lo * hi);
    pc.demands = VectorXd::Constant(inst.n_profits, mid);
    const auto verdict = gap_check(pc, eps, delta, seeder.next(), std::nullopt);
    if (verdict.yes)
      lo = mid;
    else
      hi = mid;
    ++probes;
  }
  out.lo = lo;
  out.hi = hi;
  out.probes = probes;
  return out;
}

}  // namespace ra
