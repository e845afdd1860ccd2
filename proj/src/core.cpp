#include "ra/core.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ra {

namespace {

void check_options(const std::vector<RequestType>& types, int n_resources,
                   int n_profits, std::vector<std::string>& out) {
  std::set<int> seen_ids;
  for (std::size_t j = 0; j < types.size(); ++j) {
    const auto& t = types[j];
    if (!seen_ids.insert(t.id).second) {
      std::ostringstream os;
      os << "duplicate request type id " << t.id;
      out.push_back(os.str());
    }
    for (std::size_t k = 0; k < t.options.size(); ++k) {
      for (const auto& [i, a] : t.options[k].consumption) {
        if (i < 0 || i >= n_resources) {
          std::ostringstream os;
          os << "resource id out of range: type " << t.id << " option " << k
             << " resource " << i;
          out.push_back(os.str());
        }
        if (!(a >= 0.0) || !std::isfinite(a)) {
          std::ostringstream os;
          os << "consumption not a finite nonnegative number: type " << t.id
             << " option " << k << " resource " << i;
          out.push_back(os.str());
        }
      }
      for (const auto& [i, w] : t.options[k].profit) {
        if (i < 0 || i >= n_profits) {
          std::ostringstream os;
          os << "profit id out of range: type " << t.id << " option " << k
             << " profit " << i;
          out.push_back(os.str());
        }
        if (!(w >= 0.0) || !std::isfinite(w)) {
          std::ostringstream os;
          os << "profit not a finite nonnegative number: type " << t.id
             << " option " << k << " profit " << i;
          out.push_back(os.str());
        }
      }
    }
  }
}

void check_positive(const VectorXd& v, const char* what,
                    std::vector<std::string>& out) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      std::ostringstream os;
      os << what << " " << v[i] << " not positive (index " << i << ")";
      out.push_back(os.str());
    }
  }
}

}  // namespace

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> out;
  if (inst.n_resources < 1) out.push_back("n_resources must be >= 1");
  if (inst.n_profits < 1) out.push_back("n_profits must be >= 1");
  if (inst.m < 1) out.push_back("m must be >= 1");
  if (inst.capacities.size() != inst.n_resources)
    out.push_back("capacities length does not match n_resources");
  check_positive(inst.capacities, "capacity", out);
  check_options(inst.request_types, inst.n_resources, inst.n_profits, out);
  return out;
}

std::vector<std::string> validate_instance(const MixedPCInstance& inst) {
  std::vector<std::string> out;
  if (inst.n_pack < 1) out.push_back("n_pack must be >= 1");
  if (inst.n_cover < 1) out.push_back("n_cover must be >= 1");
  if (inst.m < 1) out.push_back("m must be >= 1");
  if (inst.capacities.size() != inst.n_pack)
    out.push_back("capacities length does not match n_pack");
  if (inst.demands.size() != inst.n_cover)
    out.push_back("demands length does not match n_cover");
  check_positive(inst.capacities, "capacity", out);
  check_positive(inst.demands, "demand", out);
  if (inst.multiplicity.size() != inst.request_types.size()) {
    out.push_back("multiplicity length does not match request_types");
  } else {
    std::int64_t total = 0;
    for (auto c : inst.multiplicity) {
      if (c < 0) out.push_back("negative multiplicity");
      total += c;
    }
    if (total != inst.m)
      out.push_back("multiplicities do not sum to m");
  }
  check_options(inst.request_types, inst.n_pack, inst.n_cover, out);
  return out;
}

OfflineFractionalInstance build_expected_instance(const Instance& inst,
                                                  const StochasticInput& input) {
  const auto* iid = std::get_if<IIDInput>(&input);
  if (!iid)
    throw std::invalid_argument(
        "build_expected_instance: only i.i.d. inputs have an expected instance");
  OfflineFractionalInstance out;
  out.n_resources = inst.n_resources;
  out.n_profits = inst.n_profits;
  out.capacities = inst.capacities;
  out.request_types = inst.request_types;
  out.scale.resize(inst.request_types.size(), 0.0);
  for (std::size_t j = 0; j < inst.request_types.size(); ++j) {
    auto it = iid->probs.find(inst.request_types[j].id);
    if (it != iid->probs.end())
      out.scale[j] = static_cast<double>(inst.m) * it->second;
  }
  return out;
}

namespace {

template <typename CapFn, typename DemFn>
GammaReport gamma_over(const std::vector<RequestType>& types, CapFn cap,
                       DemFn dem) {
  GammaReport rep;
  for (std::size_t j = 0; j < types.size(); ++j) {
    for (std::size_t k = 0; k < types[j].options.size(); ++k) {
      for (const auto& [i, a] : types[j].options[k].consumption) {
        const double r = a / cap(i);
        if (r > rep.gamma) {
          rep.gamma = r;
          rep.witness = {i, static_cast<int>(j), static_cast<int>(k),
                         GammaReport::Ratio::kConsumptionOverCapacity};
        }
      }
      for (const auto& [i, w] : types[j].options[k].profit) {
        const double r = w / dem(i);
        if (r > rep.gamma) {
          rep.gamma = r;
          rep.witness = {i, static_cast<int>(j), static_cast<int>(k),
                         GammaReport::Ratio::kProfitOverBenchmark};
        }
      }
    }
  }
  return rep;
}

}  // namespace

GammaReport compute_gamma_online(const Instance& inst, double w_e) {
  if (!(w_e > 0.0))
    throw std::domain_error("compute_gamma_online: w_e must be positive");
  return gamma_over(
      inst.request_types, [&](int i) { return inst.capacities[i]; },
      [&](int) { return w_e; });
}

GammaReport compute_gamma_offline(const MixedPCInstance& inst) {
  for (Eigen::Index i = 0; i < inst.capacities.size(); ++i)
    if (!(inst.capacities[i] > 0.0))
      throw std::domain_error("compute_gamma_offline: capacities must be positive");
  for (Eigen::Index i = 0; i < inst.demands.size(); ++i)
    if (!(inst.demands[i] > 0.0))
      throw std::domain_error("compute_gamma_offline: demands must be positive");
  return gamma_over(
      inst.request_types, [&](int i) { return inst.capacities[i]; },
      [&](int i) { return inst.demands[i]; });
}

double option_score(const OptionVector& opt, const VectorXd& resource_prices,
                    const VectorXd& profit_weights) {
  double s = 0.0;
  for (const auto& [i, a] : opt.consumption) {
    if (i < 0 || i >= resource_prices.size())
      throw std::invalid_argument("option_score: resource id out of range");
    s += a * resource_prices[i];
  }
  for (const auto& [i, w] : opt.profit) {
    if (i < 0 || i >= profit_weights.size())
      throw std::invalid_argument("option_score: profit id out of range");
    s -= w * profit_weights[i];
  }
  return s;
}

int best_option(const RequestType& request, const VectorXd& resource_prices,
                const VectorXd& profit_weights) {
  int best = kDropOption;
  double best_score = 0.0;  // drop scores 0
  for (std::size_t k = 0; k < request.options.size(); ++k) {
    const double s =
        option_score(request.options[k], resource_prices, profit_weights);
    if (s < best_score || (s == best_score && best == kDropOption)) {
      best = static_cast<int>(k);
      best_score = s;
    }
  }
  return best;
}

double chernoff_tail(ChernoffKind kind, double mu, double bound, double eps) {
  if (!(mu >= 0.0)) throw std::domain_error("chernoff_tail: mu must be >= 0");
  if (!(bound > 0.0)) throw std::domain_error("chernoff_tail: bound must be > 0");
  if (!(eps > 0.0)) throw std::domain_error("chernoff_tail: eps must be > 0");
  switch (kind) {
    case ChernoffKind::kLower:
      return std::exp(-eps * eps * mu / (2.0 * bound));
    case ChernoffKind::kUpperSmall:
      if (eps > 2.0 * std::exp(1.0) - 1.0)
        throw std::domain_error("chernoff_tail: upper_small requires eps <= 2e-1");
      return std::exp(-eps * eps * mu / (4.0 * bound));
    case ChernoffKind::kUpperLarge:
      return std::exp2(-(1.0 + eps) * mu / bound);
  }
  throw std::logic_error("chernoff_tail: unknown kind");
}

int draw_type(const TypeDistribution& probs, Rng& rng) {
  double u = rng.uniform();
  for (const auto& [id, p] : probs) {
    if (u < p) return id;
    u -= p;
  }
  return kNullRequest;
}

std::vector<int> draw_iid_stream(const TypeDistribution& probs, std::int64_t m,
                                 Rng& rng) {
  std::vector<int> stream(m);
  for (auto& s : stream) s = draw_type(probs, rng);
  return stream;
}

}  // namespace ra
