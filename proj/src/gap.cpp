#include "ra/gap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ra/core.hpp"
#include "ra/lp.hpp"
#include "ra/online.hpp"
#include "ra/rng.hpp"

namespace ra {

std::int64_t sample_size(double gamma, std::int64_t m, int n, double delta,
                         double eps, double constant) {
  if (!(gamma > 0.0) || m <= 0)
    throw std::domain_error("sample_size: gamma * m must be positive");
  if (n <= 0) throw std::domain_error("sample_size: n must be positive");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::domain_error("sample_size: delta must be in (0,1)");
  if (!(eps > 0.0)) throw std::domain_error("sample_size: eps must be positive");
  if (!(constant > 0.0))
    throw std::domain_error("sample_size: constant must be positive");
  const double t = constant * gamma * static_cast<double>(m) *
                   std::log(2.0 * n / delta) / (eps * eps);
  return static_cast<std::int64_t>(std::ceil(t));
}

GapVerdict gap_check(const MixedPCInstance& inst, double eps, double delta,
                     std::uint64_t seed,
                     std::optional<std::int64_t> t_override) {
  if (auto problems = validate_instance(inst); !problems.empty()) {
    std::ostringstream os;
    os << "gap_check: invalid instance:";
    for (const auto& p : problems) os << " [" << p << "]";
    throw std::invalid_argument(os.str());
  }
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::domain_error("gap_check: eps must be in (0,1)");

  GapVerdict v;
  v.sum_consumption = VectorXd::Zero(inst.n_pack);
  v.sum_profit = VectorXd::Zero(inst.n_cover);

  const double gamma = compute_gamma_offline(inst).gamma;
  const int n = inst.n_pack + inst.n_cover;
  if (gamma == 0.0) {
    // No option touches any row; covering demands are unreachable.
    v.yes = false;
    v.packing_margin = 1.0;
    v.covering_margin = -1.0;
    v.warnings.push_back("gamma is zero: no option earns profit, NO by default");
    return v;
  }

  const std::int64_t t_total =
      t_override ? *t_override : sample_size(gamma, inst.m, n, delta, eps);
  if (t_total <= 0)
    throw std::domain_error("gap_check: sample count must be positive");
  v.samples = t_total;

  const double gamma_cap = eps * eps / std::log(2.0 * n / delta);
  if (gamma > gamma_cap) {
    std::ostringstream os;
    os << "gamma " << gamma << " exceeds sampling threshold " << gamma_cap
       << "; verdict guarantees degrade";
    v.warnings.push_back(os.str());
  }

  auto state = make_gap_state(inst.capacities, inst.demands, t_total, inst.m,
                              gamma, eps);

  // Uniform multiset sampling: prefix sums over type multiplicities.
  std::vector<std::int64_t> prefix(inst.multiplicity.size());
  std::partial_sum(inst.multiplicity.begin(), inst.multiplicity.end(),
                   prefix.begin());

  Rng rng(seed);
  for (std::int64_t t = 0; t < t_total; ++t) {
    const auto u =
        static_cast<std::int64_t>(rng.index(static_cast<std::uint64_t>(inst.m)));
    const auto j = static_cast<std::size_t>(
        std::upper_bound(prefix.begin(), prefix.end(), u) - prefix.begin());
    const RequestType& req = inst.request_types[j];
    const int k = online_step(state, req);
    if (k != kDropOption) {
      for (const auto& [i, a] : req.options[k].consumption)
        v.sum_consumption[i] += a;
      for (const auto& [i, w] : req.options[k].profit) v.sum_profit[i] += w;
    }
  }

  const double scale = static_cast<double>(t_total) / static_cast<double>(inst.m);
  double pack_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < inst.n_pack; ++i) {
    const double cap = scale * inst.capacities[i] * (1.0 + eps);
    pack_margin = std::min(pack_margin, (cap - v.sum_consumption[i]) / cap);
  }
  double cover_margin = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < inst.n_cover; ++i) {
    const double need = scale * inst.demands[i] * (1.0 - eps);
    cover_margin = std::min(cover_margin, (v.sum_profit[i] - need) / need);
  }
  v.packing_margin = pack_margin;
  v.covering_margin = cover_margin;
  v.yes = pack_margin > 0.0 && cover_margin > 0.0;
  return v;
}

double slackened_cover_ratio(const MixedPCInstance& inst, double slack) {
  OfflineFractionalInstance lp;
  lp.n_resources = inst.n_pack;
  lp.n_profits = inst.n_cover;
  lp.capacities = inst.capacities * (1.0 + slack);
  lp.request_types = inst.request_types;
  // Normalize profit rows by the deflated demands so the objective reads
  // as the fraction of every covering demand met.
  for (auto& t : lp.request_types) {
    for (auto& opt : t.options) {
      for (auto& [i, w] : opt.profit) w /= inst.demands[i] * (1.0 - slack);
    }
  }
  lp.scale.reserve(inst.multiplicity.size());
  for (auto c : inst.multiplicity) lp.scale.push_back(static_cast<double>(c));
  return solve_maximin_exact(lp).lambda;
}

MixedPCInstance gen_no_instance(const MixedPCInstance& base, double slack,
                                double eps) {
  if (!(slack > 0.0))
    throw std::domain_error("gen_no_instance: slack must be positive");
  const double min_slack = 3.0 * eps * (1.0 + eps);
  if (slack < min_slack - 1e-12) {
    std::ostringstream os;
    os << "gen_no_instance: slack " << slack << " below required " << min_slack;
    throw std::domain_error(os.str());
  }

  double ratio;
  try {
    ratio = slackened_cover_ratio(base, slack);
  } catch (const std::length_error& e) {
    throw std::runtime_error(
        std::string("gen_no_instance: cannot certify, exact solver limit: ") +
        e.what());
  }

  MixedPCInstance out = base;
  if (ratio > 0.0) {
    // Scaling demands by at least 2x the achievable ratio halves the best
    // attainable coverage fraction, so the slackened LP becomes infeasible.
    out.demands *= 2.0 * std::max(ratio, 1.0);
    const double check = slackened_cover_ratio(out, slack);
    if (!(check < 1.0 - 1e-9))
      throw std::runtime_error("gen_no_instance: certification failed");
  } else if (!(ratio < 1.0)) {
    throw std::runtime_error("gen_no_instance: certification failed");
  }
  return out;
}

}  // namespace ra
