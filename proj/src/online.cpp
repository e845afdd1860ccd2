#include "ra/online.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ra {

std::pair<VectorXd, VectorXd> potential_prices(const PotentialState& state) {
  const double shift =
      std::max(state.log_phi_x.maxCoeff(), state.log_phi_y.maxCoeff());
  return {(state.log_phi_x.array() - shift).exp().matrix(),
          (state.log_phi_y.array() - shift).exp().matrix()};
}

int select_option(const PotentialState& state, const RequestType& request) {
  const auto [px, py] = potential_prices(state);
  return best_option(request, px, py);
}

void apply_update(PotentialState& state, const OptionVector* chosen) {
  if (state.step >= state.horizon)
    throw std::logic_error("apply_update: past the state horizon");
  if (chosen) {
    for (const auto& [i, a] : chosen->consumption)
      state.log_phi_x[i] += state.schedule.coef_x[i] * a;
    for (const auto& [i, w] : chosen->profit)
      state.log_phi_y[i] += state.schedule.coef_y[i] * w;
  }
  ++state.step;
  state.log_phi_x -= state.schedule.drift_x(state.step);
  state.log_phi_y -= state.schedule.drift_y(state.step);
}

int online_step(PotentialState& state, const RequestType& request) {
  const int k = select_option(state, request);
  apply_update(state, k == kDropOption ? nullptr : &request.options[k]);
  return k;
}

namespace {

std::function<VectorXd(std::int64_t)> constant_drift(Eigen::Index n,
                                                     double value) {
  const VectorXd v = VectorXd::Constant(n, value);
  return [v](std::int64_t) { return v; };
}

void require_eps(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::domain_error("potential schedule: eps must be in (0,1)");
}

void require_gamma(double gamma) {
  if (!(gamma > 0.0))
    throw std::domain_error("potential schedule: gamma must be positive");
}

}  // namespace

PotentialState make_asi2_state(const Instance& inst,
                               const std::vector<double>& w_e_per_step,
                               double gamma, double eps) {
  require_eps(eps);
  require_gamma(gamma);
  if (static_cast<std::int64_t>(w_e_per_step.size()) != inst.m)
    throw std::invalid_argument("make_asi2_state: need one benchmark per step");
  for (double w : w_e_per_step)
    if (!(w > 0.0))
      throw std::domain_error("make_asi2_state: per-step benchmarks must be > 0");

  const auto m = inst.m;
  const double md = static_cast<double>(m);
  const double w_bar =
      std::accumulate(w_e_per_step.begin(), w_e_per_step.end(), 0.0) / md;
  const double fx = eps / ((1.0 + eps) * gamma * md);

  PotentialState st;
  st.horizon = m;
  st.log_phi_x = VectorXd::Zero(inst.n_resources);
  st.log_phi_y = VectorXd::Zero(inst.n_profits);
  st.schedule.coef_x = VectorXd::Zero(inst.n_resources);
  st.schedule.coef_y = VectorXd::Zero(inst.n_profits);

  for (Eigen::Index i = 0; i < inst.n_resources; ++i) {
    const double c = inst.capacities[i];
    st.log_phi_x[i] = -std::log(c) + (md - 1.0) * std::log1p(fx) -
                      std::log1p(eps) / gamma;
    st.schedule.coef_x[i] = std::log1p(eps) / (gamma * c);
  }

  // Per-step profit-side factors 1 - eps W(t) / ((1+eps) Wbar gamma m);
  // the initial potential carries factors t = 2..m, and step s divides
  // out the factor indexed s+1 (so the last step has no factor left).
  auto fy = std::make_shared<std::vector<double>>(m + 1, 0.0);
  double init_y = 0.0;
  for (std::int64_t t = 2; t <= m; ++t) {
    const double f = std::log1p(-eps * w_e_per_step[t - 1] /
                                ((1.0 + eps) * w_bar * gamma * md));
    (*fy)[t] = f;
    init_y += f;
  }
  for (Eigen::Index i = 0; i < inst.n_profits; ++i) {
    st.log_phi_y[i] = -std::log(w_bar) + init_y -
                      (1.0 - eps) / (gamma * (1.0 + eps)) * std::log1p(-eps);
    st.schedule.coef_y[i] = std::log1p(-eps) / (gamma * w_bar);
  }

  const Eigen::Index nr = inst.n_resources;
  const Eigen::Index np = inst.n_profits;
  const double dx = std::log1p(fx);
  st.schedule.drift_x = [nr, dx](std::int64_t) {
    return VectorXd::Constant(nr, dx).eval();
  };
  st.schedule.drift_y = [np, fy, m](std::int64_t s) {
    const double d = s + 1 <= m ? (*fy)[s + 1] : 0.0;
    return VectorXd::Constant(np, d).eval();
  };
  return st;
}

PotentialState make_known_we_state(const Instance& inst, double w_e,
                                   double gamma, double eps) {
  if (!(w_e > 0.0))
    throw std::domain_error("make_known_we_state: w_e must be positive");
  // Shares the time-varying engine so that a constant per-step benchmark
  // is bit-identical to the general schedule.
  return make_asi2_state(inst, std::vector<double>(inst.m, w_e), gamma, eps);
}

PotentialState make_asi3_state(const Instance& inst,
                               const Eigen::MatrixXd& c_profile,
                               const Eigen::MatrixXd& opt_profile, double gamma,
                               double eps) {
  require_eps(eps);
  require_gamma(gamma);
  const auto m = inst.m;
  if (c_profile.rows() != m || c_profile.cols() != inst.n_resources)
    throw std::invalid_argument("make_asi3_state: c_profile shape mismatch");
  if (opt_profile.rows() != m || opt_profile.cols() != inst.n_profits)
    throw std::invalid_argument("make_asi3_state: opt_profile shape mismatch");
  for (Eigen::Index i = 0; i < inst.n_resources; ++i) {
    const double total = c_profile.col(i).sum();
    if (total > inst.capacities[i] * (1.0 + 1e-9))
      throw std::invalid_argument(
          "make_asi3_state: per-step capacities exceed c_i");
  }
  VectorXd opt_total = opt_profile.colwise().sum();
  for (Eigen::Index i = 0; i < opt_total.size(); ++i)
    if (!(opt_total[i] > 0.0))
      throw std::domain_error("make_asi3_state: benchmark totals must be > 0");
  if (opt_profile.minCoeff() < 0.0 || c_profile.minCoeff() < 0.0)
    throw std::domain_error("make_asi3_state: profiles must be nonnegative");

  PotentialState st;
  st.horizon = m;
  st.log_phi_x = VectorXd::Zero(inst.n_resources);
  st.log_phi_y = VectorXd::Zero(inst.n_profits);
  st.schedule.coef_x = VectorXd::Zero(inst.n_resources);
  st.schedule.coef_y = VectorXd::Zero(inst.n_profits);

  // fx[t](i), fy[t](i): log factors removed after step t-1.
  auto fx = std::make_shared<std::vector<VectorXd>>(
      m + 1, VectorXd::Zero(inst.n_resources));
  auto fy = std::make_shared<std::vector<VectorXd>>(
      m + 1, VectorXd::Zero(inst.n_profits));
  for (std::int64_t t = 2; t <= m; ++t) {
    for (Eigen::Index i = 0; i < inst.n_resources; ++i)
      (*fx)[t][i] = std::log1p(eps * c_profile(t - 1, i) /
                               ((1.0 + eps) * inst.capacities[i] * gamma));
    for (Eigen::Index i = 0; i < inst.n_profits; ++i)
      (*fy)[t][i] = std::log1p(-eps * opt_profile(t - 1, i) /
                               ((1.0 + eps) * opt_total[i] * gamma));
  }
  VectorXd init_x = VectorXd::Zero(inst.n_resources);
  VectorXd init_y = VectorXd::Zero(inst.n_profits);
  for (std::int64_t t = 2; t <= m; ++t) {
    init_x += (*fx)[t];
    init_y += (*fy)[t];
  }
  for (Eigen::Index i = 0; i < inst.n_resources; ++i) {
    st.log_phi_x[i] = -std::log(inst.capacities[i]) + init_x[i] -
                      std::log1p(eps) / gamma;
    st.schedule.coef_x[i] = std::log1p(eps) / (gamma * inst.capacities[i]);
  }
  for (Eigen::Index i = 0; i < inst.n_profits; ++i) {
    st.log_phi_y[i] = -std::log(opt_total[i]) + init_y[i] -
                      (1.0 - eps) / (gamma * (1.0 + eps)) * std::log1p(-eps);
    st.schedule.coef_y[i] = std::log1p(-eps) / (gamma * opt_total[i]);
  }

  const Eigen::Index nr = inst.n_resources;
  const Eigen::Index np = inst.n_profits;
  st.schedule.drift_x = [nr, fx, m](std::int64_t s) {
    return s + 1 <= m ? (*fx)[s + 1] : VectorXd::Zero(nr).eval();
  };
  st.schedule.drift_y = [np, fy, m](std::int64_t s) {
    return s + 1 <= m ? (*fy)[s + 1] : VectorXd::Zero(np).eval();
  };
  return st;
}

PotentialState make_gap_state(const VectorXd& capacities,
                              const VectorXd& demands, std::int64_t samples,
                              std::int64_t m, double gamma, double eps) {
  require_eps(eps);
  require_gamma(gamma);
  const double md = static_cast<double>(m);
  if (!(eps < md * gamma))
    throw std::domain_error("make_gap_state: requires eps < m * gamma");
  const double f = eps / (md * gamma);
  const double td = static_cast<double>(samples);

  PotentialState st;
  st.horizon = samples;
  st.log_phi_x = VectorXd::Zero(capacities.size());
  st.log_phi_y = VectorXd::Zero(demands.size());
  st.schedule.coef_x = VectorXd::Zero(capacities.size());
  st.schedule.coef_y = VectorXd::Zero(demands.size());
  for (Eigen::Index i = 0; i < capacities.size(); ++i) {
    st.log_phi_x[i] = -std::log(capacities[i]) + (td - 1.0) * std::log1p(f) -
                      (1.0 + eps) * td / (md * gamma) * std::log1p(eps);
    st.schedule.coef_x[i] = std::log1p(eps) / (gamma * capacities[i]);
  }
  for (Eigen::Index i = 0; i < demands.size(); ++i) {
    st.log_phi_y[i] = -std::log(demands[i]) + (td - 1.0) * std::log1p(-f) -
                      (1.0 - eps) * td / (md * gamma) * std::log1p(-eps);
    st.schedule.coef_y[i] = std::log1p(-eps) / (gamma * demands[i]);
  }
  st.schedule.drift_x = constant_drift(capacities.size(), std::log1p(f));
  st.schedule.drift_y = constant_drift(demands.size(), std::log1p(-f));
  return st;
}

PotentialState make_stage_state(const VectorXd& capacities, int n_profits,
                                std::int64_t t_r, std::int64_t m, double gamma,
                                double ex, double ey, double z, double w_max) {
  require_gamma(gamma);
  if (!(ex > 0.0) || !(ey > 0.0) || !(ey < 1.0))
    throw std::domain_error("make_stage_state: bad stage error parameters");
  if (!(z > 0.0) || !(w_max > 0.0))
    throw std::domain_error("make_stage_state: z and w_max must be positive");
  const double md = static_cast<double>(m);
  if (!(ey < md * gamma))
    throw std::domain_error("make_stage_state: requires ey < m * gamma");
  const double td = static_cast<double>(t_r);

  PotentialState st;
  st.horizon = t_r;
  st.log_phi_x = VectorXd::Zero(capacities.size());
  st.log_phi_y = VectorXd::Zero(n_profits);
  st.schedule.coef_x = VectorXd::Zero(capacities.size());
  st.schedule.coef_y = VectorXd::Zero(n_profits);
  for (Eigen::Index i = 0; i < capacities.size(); ++i) {
    st.log_phi_x[i] = std::log(ex) - std::log(gamma * capacities[i]) +
                      (td - 1.0) * std::log1p(ex / (md * gamma)) -
                      (1.0 + ex) * td / (md * gamma) * std::log1p(ex);
    st.schedule.coef_x[i] = std::log1p(ex) / (gamma * capacities[i]);
  }
  for (Eigen::Index i = 0; i < n_profits; ++i) {
    st.log_phi_y[i] = std::log(ey) - std::log(w_max) +
                      (td - 1.0) * std::log1p(-ey / (md * gamma)) -
                      (1.0 - ey) * td * z / (md * w_max) * std::log1p(-ey);
    st.schedule.coef_y[i] = std::log1p(-ey) / w_max;
  }
  st.schedule.drift_x =
      constant_drift(capacities.size(), std::log1p(ex / (md * gamma)));
  st.schedule.drift_y =
      constant_drift(n_profits, std::log1p(-ey / (md * gamma)));
  return st;
}

RequestSource fixed_stream_source(std::vector<int> stream) {
  auto data = std::make_shared<std::vector<int>>(std::move(stream));
  return [data](std::int64_t step, const RunHistory&) {
    if (step < 1 || step > static_cast<std::int64_t>(data->size()))
      throw std::out_of_range("fixed_stream_source: stream shorter than run");
    return (*data)[step - 1];
  };
}

RequestSource input_source(const Instance& inst, const StochasticInput& input,
                           std::uint64_t seed) {
  auto rng = std::make_shared<Rng>(seed);
  if (const auto* iid = std::get_if<IIDInput>(&input)) {
    const TypeDistribution probs = iid->probs;
    return [rng, probs](std::int64_t, const RunHistory&) {
      return draw_type(probs, *rng);
    };
  }
  const auto& asi = std::get<ASISchedule>(input);
  if (asi.policy) {
    const AdversaryPolicy policy = asi.policy;
    return [rng, policy](std::int64_t step, const RunHistory& h) {
      return draw_type(policy(step, h), *rng);
    };
  }
  auto steps = std::make_shared<std::vector<TypeDistribution>>(asi.per_step);
  if (static_cast<std::int64_t>(steps->size()) != inst.m)
    throw std::invalid_argument("input_source: schedule length must equal m");
  return [rng, steps](std::int64_t step, const RunHistory&) {
    if (step < 1 || step > static_cast<std::int64_t>(steps->size()))
      throw std::out_of_range("input_source: step outside schedule");
    return draw_type((*steps)[step - 1], *rng);
  };
}

namespace {

struct RunAccumulator {
  RunHistory h;
  std::vector<std::pair<int, std::int64_t>> violations;
  std::vector<bool> over;  // per resource: already past capacity

  explicit RunAccumulator(const Instance& inst)
      : over(static_cast<std::size_t>(inst.n_resources), false) {
    h.cum_consumption = VectorXd::Zero(inst.n_resources);
    h.cum_profit = VectorXd::Zero(inst.n_profits);
  }

  bool would_violate(const Instance& inst, const OptionVector& opt) const {
    for (const auto& [i, a] : opt.consumption)
      if (h.cum_consumption[i] + a > inst.capacities[i]) return true;
    return false;
  }

  void record(const Instance& inst, std::int64_t step, int type_id, int k,
              const OptionVector* opt) {
    h.decisions.emplace_back(type_id, k);
    if (opt) {
      for (const auto& [i, a] : opt->consumption) {
        h.cum_consumption[i] += a;
        if (!over[i] && h.cum_consumption[i] > inst.capacities[i]) {
          over[i] = true;
          violations.emplace_back(i, step);
        }
      }
      for (const auto& [i, w] : opt->profit) h.cum_profit[i] += w;
    }
  }

  RunReport finish() {
    RunReport r;
    r.objective =
        h.cum_profit.size() > 0 ? h.cum_profit.minCoeff() : 0.0;
    r.decisions = std::move(h.decisions);
    r.cum_consumption = std::move(h.cum_consumption);
    r.cum_profit = std::move(h.cum_profit);
    r.violations = std::move(violations);
    return r;
  }
};

// One engine step against the accumulator; shared by whole-run and
// staged drivers.
void drive_step(const Instance& inst, PotentialState& state,
                const RequestSource& source, const RunOptions& opts,
                std::int64_t step, RunAccumulator& acc) {
  const int id = source(step, acc.h);
  const RequestType* req = id == kNullRequest ? nullptr : inst.find_type(id);
  if (id != kNullRequest && !req)
    throw std::invalid_argument("run: stream references unknown type id");
  int k = kDropOption;
  if (req) k = select_option(state, *req);
  const OptionVector* opt = k == kDropOption ? nullptr : &req->options[k];
  if (opt && opts.hard_cap && acc.would_violate(inst, *opt)) {
    k = kDropOption;
    opt = nullptr;
  }
  apply_update(state, opt);
  acc.record(inst, step, id, k, opt);
}

}  // namespace

RunReport engine_run(const Instance& inst, PotentialState state,
                     const RequestSource& source, const RunOptions& opts) {
  RunAccumulator acc(inst);
  for (std::int64_t s = 1; s <= state.horizon; ++s)
    drive_step(inst, state, source, opts, s, acc);
  return acc.finish();
}

RunReport known_we_run(const Instance& inst, const RequestSource& source,
                       double w_e, double gamma, double eps,
                       const RunOptions& opts) {
  return engine_run(inst, make_known_we_state(inst, w_e, gamma, eps), source,
                    opts);
}

RunReport asi2_run(const Instance& inst, const RequestSource& source,
                   const std::vector<double>& w_e_per_step, double gamma,
                   double eps, const RunOptions& opts) {
  return engine_run(inst, make_asi2_state(inst, w_e_per_step, gamma, eps),
                    source, opts);
}

RunReport asi3_run(const Instance& inst, const RequestSource& source,
                   const Eigen::MatrixXd& c_profile,
                   const Eigen::MatrixXd& opt_profile, double gamma, double eps,
                   const RunOptions& opts) {
  return engine_run(inst,
                    make_asi3_state(inst, c_profile, opt_profile, gamma, eps),
                    source, opts);
}

RunReport ho_conservative_run(const Instance& inst, const StochasticInput& input,
                              const std::vector<std::vector<double>>& x_star,
                              double eps, std::uint64_t seed) {
  if (!(eps >= 0.0))
    throw std::domain_error("ho_conservative_run: eps must be >= 0");
  const auto expected = build_expected_instance(inst, input);
  LPSolution sol;
  sol.lambda = 0.0;  // only packing/simplex feasibility is required
  sol.allocation = x_star;
  const auto rep = check_feasible(expected, sol, 1e-9);
  if (!rep.feasible)
    throw std::invalid_argument("ho_conservative_run: x_star infeasible (" +
                                rep.worst_constraint + ")");

  std::map<int, std::size_t> index_of;
  for (std::size_t j = 0; j < inst.request_types.size(); ++j)
    index_of[inst.request_types[j].id] = j;

  const auto& probs = std::get<IIDInput>(input).probs;
  Rng rng(seed);
  RunAccumulator acc(inst);
  for (std::int64_t s = 1; s <= inst.m; ++s) {
    const int id = draw_type(probs, rng);
    int k = kDropOption;
    const OptionVector* opt = nullptr;
    if (id != kNullRequest) {
      const std::size_t j = index_of.at(id);
      double u = rng.uniform() * (1.0 + eps);
      for (std::size_t kk = 0; kk < x_star[j].size(); ++kk) {
        if (u < x_star[j][kk]) {
          k = static_cast<int>(kk);
          opt = &inst.request_types[j].options[kk];
          break;
        }
        u -= x_star[j][kk];
      }
    }
    acc.record(inst, s, id, k, opt);
  }
  return acc.finish();
}

StageParams make_stage_partition(std::int64_t m, double eps) {
  if (m < 1) throw std::domain_error("make_stage_partition: m must be >= 1");
  if (!(eps >= 1.0 / static_cast<double>(m)) || !(eps <= 0.5))
    throw std::domain_error("make_stage_partition: need 1/m <= eps <= 1/2");
  StageParams sp;
  sp.l = static_cast<int>(std::ceil(std::log2(1.0 / eps)));
  sp.l = std::max(sp.l, 1);
  sp.delta = eps / (3.0 * sp.l);
  sp.t_observe = std::llround(eps * static_cast<double>(m));
  if (sp.t_observe < 1)
    throw std::domain_error("make_stage_partition: observation stage empty");
  std::int64_t used = sp.t_observe;
  sp.t.resize(sp.l);
  for (int r = 0; r + 1 < sp.l; ++r) {
    sp.t[r] = std::llround(eps * static_cast<double>(m) *
                           std::pow(2.0, static_cast<double>(r)));
    used += sp.t[r];
  }
  sp.t[sp.l - 1] = m - used;  // the last stage absorbs rounding residue
  if (sp.t[sp.l - 1] < 1)
    throw std::domain_error("make_stage_partition: stages do not fit m");
  return sp;
}

OfflineOracle exact_lp_oracle() {
  return [](const OfflineFractionalInstance& inst) {
    return solve_maximin_exact(inst).lambda;
  };
}

StagedReport staged_run(const Instance& inst, const RequestSource& source,
                        double gamma, double eps, const StagedOptions& opts) {
  require_gamma(gamma);
  StagedReport out;
  out.stages = make_stage_partition(inst.m, eps);
  StageParams& sp = out.stages;

  const OfflineOracle oracle = opts.oracle ? opts.oracle : exact_lp_oracle();
  const double md = static_cast<double>(inst.m);
  const int n = std::max(inst.n_resources, inst.n_profits);
  const double ln_term = std::log(2.0 * n / sp.delta);

  double w_static = 0.0;
  for (const auto& t : inst.request_types)
    for (const auto& o : t.options)
      for (const auto& [i, w] : o.profit) w_static = std::max(w_static, w);

  RunAccumulator acc(inst);
  std::int64_t step = 0;
  double w_seen = 0.0;
  std::vector<int> stage_ids;

  auto observe = [&](int id) {
    if (id == kNullRequest) return;
    const RequestType* t = inst.find_type(id);
    if (!t)
      throw std::invalid_argument("staged_run: stream references unknown type");
    for (const auto& o : t->options)
      for (const auto& [i, w] : o.profit) w_seen = std::max(w_seen, w);
  };

  sp.eps_x.assign(static_cast<std::size_t>(sp.l) + 1, 0.0);
  sp.eps_y.assign(static_cast<std::size_t>(sp.l), 0.0);
  sp.z.assign(static_cast<std::size_t>(sp.l), 0.0);
  sp.eps_x[0] =
      std::sqrt(4.0 * gamma * md * ln_term / static_cast<double>(sp.t_observe));

  // Observation stage: record arrivals, serve nothing.
  for (std::int64_t s = 0; s < sp.t_observe; ++s) {
    ++step;
    const int id = source(step, acc.h);
    observe(id);
    stage_ids.push_back(id);
    acc.record(inst, step, id, kDropOption, nullptr);
  }

  std::int64_t t_prev = sp.t_observe;
  for (int r = 0; r < sp.l; ++r) {
    auto prev = realized_instance(inst, stage_ids);
    prev.capacities =
        inst.capacities * (static_cast<double>(t_prev) / md);
    const double e_prev = oracle(prev);

    double z = e_prev / (1.0 + sp.eps_x[r]) * (md / static_cast<double>(t_prev));
    if (!(z > 0.0)) z = 1e-12;  // keeps the schedule finite on empty stages
    sp.z[r] = z;

    const double td = static_cast<double>(sp.t[r]);
    sp.eps_x[r + 1] = std::sqrt(4.0 * gamma * md * ln_term / td);
    double w_max = opts.w_max ? *opts.w_max
                              : (w_seen > 0.0 ? w_seen : w_static);
    if (!(w_max > 0.0)) w_max = 1.0;
    double ey = std::sqrt(2.0 * w_max * md * ln_term / (td * z));
    ey = std::min({ey, 1.0 - 1e-6, (1.0 - 1e-6) * md * gamma});
    sp.eps_y[r] = ey;

    auto state = make_stage_state(inst.capacities, inst.n_profits, sp.t[r],
                                  inst.m, gamma, sp.eps_x[r + 1], ey, z, w_max);
    stage_ids.clear();
    for (std::int64_t s = 0; s < sp.t[r]; ++s) {
      ++step;
      const int id = source(step, acc.h);
      observe(id);
      stage_ids.push_back(id);
      const RequestType* req = id == kNullRequest ? nullptr : inst.find_type(id);
      int k = kDropOption;
      if (req) k = select_option(state, *req);
      const OptionVector* opt = k == kDropOption ? nullptr : &req->options[k];
      if (opt && opts.run.hard_cap && acc.would_violate(inst, *opt)) {
        k = kDropOption;
        opt = nullptr;
      }
      apply_update(state, opt);
      acc.record(inst, step, id, k, opt);
    }
    t_prev = sp.t[r];
  }

  out.run = acc.finish();
  return out;
}

VectorXd posted_prices(const PotentialState& state) {
  if (state.log_phi_y.size() != 1)
    throw std::invalid_argument("posted_prices: needs exactly one profit type");
  return (state.log_phi_x.array() - state.log_phi_y[0]).exp().matrix();
}

}  // namespace ra
