#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ra/core.hpp"
#include "ra/lp.hpp"
#include "ra/online.hpp"

using namespace ra;

namespace {

Instance random_instance(int n_res, int n_prof, std::int64_t m,
                         std::uint64_t seed, IIDInput* iid = nullptr) {
  Rng rng(seed);
  Instance inst;
  inst.n_resources = n_res;
  inst.n_profits = n_prof;
  inst.capacities = VectorXd(n_res);
  for (int i = 0; i < n_res; ++i)
    inst.capacities[i] = rng.uniform(0.3, 1.0) * static_cast<double>(m) / 4.0;
  inst.m = m;
  const int n_types = 6;
  for (int j = 0; j < n_types; ++j) {
    RequestType t;
    t.id = j;
    const int n_opts = 1 + static_cast<int>(rng.index(3));
    for (int k = 0; k < n_opts; ++k) {
      OptionVector o;
      for (int i = 0; i < n_res; ++i)
        if (rng.bernoulli(0.7)) o.consumption[i] = rng.uniform(0.1, 1.0);
      for (int i = 0; i < n_prof; ++i)
        if (rng.bernoulli(0.7)) o.profit[i] = rng.uniform(0.1, 1.0);
      t.options.push_back(o);
    }
    inst.request_types.push_back(t);
    if (iid) iid->probs[j] = 1.0 / n_types;
  }
  return inst;
}

bool close_rel(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("online_step serves costless profit and drops profitless cost") {
  Instance inst = random_instance(2, 1, 10, 1);
  auto state = make_known_we_state(inst, 5.0, 0.2, 0.1);

  RequestType profitless;
  profitless.id = 90;
  profitless.options.push_back({{{0, 1.0}}, {}});
  const VectorXd lx = state.log_phi_x;
  const VectorXd ly = state.log_phi_y;
  CHECK(online_step(state, profitless) == kDropOption);
  // Only the per-step decay factors moved the potentials.
  const double fx = 0.1 / (1.1 * 0.2 * 10.0);
  CHECK(close_rel(state.log_phi_x[0], lx[0] - std::log1p(fx)));
  CHECK(close_rel(state.log_phi_y[0], ly[0] - std::log1p(-fx)));

  RequestType costless;
  costless.id = 91;
  costless.options.push_back({{}, {{0, 1.0}}});
  CHECK(online_step(state, costless) == 0);
}

TEST_CASE("online_step respects the surrogate argmin with hand potentials") {
  PotentialState state;
  state.horizon = 5;
  state.log_phi_x = VectorXd::Zero(1);  // phi_x = 1
  state.log_phi_y = VectorXd::Zero(1);  // phi_y = 1
  state.schedule.coef_x = VectorXd::Constant(1, 0.5);
  state.schedule.coef_y = VectorXd::Constant(1, -0.25);
  state.schedule.drift_x = [](std::int64_t) { return VectorXd::Zero(1); };
  state.schedule.drift_y = [](std::int64_t) { return VectorXd::Zero(1); };

  RequestType two;
  two.id = 0;
  two.options.push_back({{{0, 1.0}}, {{0, 1.0}}});  // score 0
  two.options.push_back({{{0, 2.0}}, {{0, 3.0}}});  // score -1
  CHECK(online_step(state, two) == 1);
  CHECK(close_rel(state.log_phi_x[0], 0.5 * 2.0));
  CHECK(close_rel(state.log_phi_y[0], -0.25 * 3.0));
}

TEST_CASE("chosen option is per-step optimal throughout a run") {
  IIDInput iid;
  Instance inst = random_instance(3, 2, 300, 2, &iid);
  auto state = make_known_we_state(inst, 20.0, 0.05, 0.15);
  Rng rng(3);
  for (std::int64_t s = 1; s <= inst.m; ++s) {
    const int id = draw_type(iid.probs, rng);
    if (id == kNullRequest) {
      apply_update(state, nullptr);
      continue;
    }
    const RequestType& req = *inst.find_type(id);
    const auto [px, py] = potential_prices(state);
    const int k = select_option(state, req);
    if (k != kDropOption) {
      const double score = option_score(req.options[k], px, py);
      CHECK(score <= 0.0);
      for (const auto& alt : req.options)
        CHECK(score <= option_score(alt, px, py) + 1e-15);
    } else {
      for (const auto& alt : req.options)
        CHECK(option_score(alt, px, py) >= 0.0);
    }
    apply_update(state, k == kDropOption ? nullptr : &req.options[k]);
  }
}

TEST_CASE("fixed-benchmark potentials match the closed form") {
  IIDInput iid;
  Instance inst = random_instance(3, 2, 500, 4, &iid);
  const double w_e = 30.0, gamma = 0.08, eps = 0.12;
  auto state = make_known_we_state(inst, w_e, gamma, eps);
  const double md = static_cast<double>(inst.m);
  const double f = eps / ((1.0 + eps) * gamma * md);

  VectorXd sum_x = VectorXd::Zero(3), sum_y = VectorXd::Zero(2);
  Rng rng(5);
  for (std::int64_t s = 1; s <= inst.m; ++s) {
    const int id = draw_type(iid.probs, rng);
    const RequestType* req = id == kNullRequest ? nullptr : inst.find_type(id);
    int k = kDropOption;
    if (req) k = select_option(state, *req);
    apply_update(state, k == kDropOption ? nullptr : &req->options[k]);
    if (k != kDropOption) {
      for (const auto& [i, a] : req->options[k].consumption) sum_x[i] += a;
      for (const auto& [i, w] : req->options[k].profit) sum_y[i] += w;
    }
    for (int i = 0; i < 3; ++i) {
      const double closed = -std::log(inst.capacities[i]) +
                            sum_x[i] / (gamma * inst.capacities[i]) *
                                std::log1p(eps) +
                            (md - s - 1.0) * std::log1p(f) -
                            std::log1p(eps) / gamma;
      CHECK(close_rel(state.log_phi_x[i], closed));
    }
    for (int i = 0; i < 2; ++i) {
      const double factors = s == inst.m ? 0.0 : (md - s - 1.0) * std::log1p(-f);
      const double closed = -std::log(w_e) +
                            sum_y[i] / (gamma * w_e) * std::log1p(-eps) +
                            factors -
                            (1.0 - eps) / (gamma * (1.0 + eps)) *
                                std::log1p(-eps);
      CHECK(close_rel(state.log_phi_y[i], closed));
    }
  }
}

TEST_CASE("time-varying benchmark potentials match the closed form") {
  IIDInput iid;
  Instance inst = random_instance(2, 1, 400, 6, &iid);
  const double gamma = 0.06, eps = 0.15;
  Rng wr(7);
  std::vector<double> we(inst.m);
  double w_sum = 0.0;
  for (auto& w : we) {
    w = wr.uniform(10.0, 40.0);
    w_sum += w;
  }
  const double w_bar = w_sum / static_cast<double>(inst.m);
  auto state = make_asi2_state(inst, we, gamma, eps);
  const double md = static_cast<double>(inst.m);

  double sum_y = 0.0;
  Rng rng(8);
  for (std::int64_t s = 1; s <= inst.m; ++s) {
    const int id = draw_type(iid.probs, rng);
    const RequestType* req = id == kNullRequest ? nullptr : inst.find_type(id);
    int k = kDropOption;
    if (req) k = select_option(state, *req);
    apply_update(state, k == kDropOption ? nullptr : &req->options[k]);
    if (k != kDropOption)
      for (const auto& [i, w] : req->options[k].profit) sum_y += w;
    double factors = 0.0;
    for (std::int64_t t = s + 2; t <= inst.m; ++t)
      factors +=
          std::log1p(-eps * we[t - 1] / ((1.0 + eps) * w_bar * gamma * md));
    const double closed = -std::log(w_bar) +
                          sum_y / (gamma * w_bar) * std::log1p(-eps) + factors -
                          (1.0 - eps) / (gamma * (1.0 + eps)) *
                              std::log1p(-eps);
    CHECK(close_rel(state.log_phi_y[0], closed));
  }
}

TEST_CASE("constant per-step benchmark reproduces fixed-benchmark decisions") {
  IIDInput iid;
  Instance inst = random_instance(3, 1, 200, 9, &iid);
  const double w_e = 25.0, gamma = 0.07, eps = 0.2;
  for (int trial = 0; trial < 5; ++trial) {
    const auto seed = static_cast<std::uint64_t>(100 + trial);
    const auto a = known_we_run(inst, input_source(inst, IIDInput{iid}, seed),
                                w_e, gamma, eps);
    const auto b =
        asi2_run(inst, input_source(inst, IIDInput{iid}, seed),
                 std::vector<double>(inst.m, w_e), gamma, eps);
    CHECK(a.decisions == b.decisions);
    CHECK(a.cum_profit == b.cum_profit);
  }
}

TEST_CASE("single-step schedule has an empty initialization product") {
  Instance inst = random_instance(2, 1, 1, 10);
  auto state = make_asi2_state(inst, {12.0}, 0.1, 0.2);
  // No product factors: phi_y(0) = (1/W)(1-eps)^{-(1-eps)/(gamma(1+eps))}
  const double expect = -std::log(12.0) -
                        (1.0 - 0.2) / (0.1 * 1.2) * std::log1p(-0.2);
  CHECK(close_rel(state.log_phi_y[0], expect));
}

TEST_CASE("per-resource schedule with uniform profiles reduces to the fixed form") {
  Instance inst = random_instance(3, 2, 100, 11);
  const double gamma = 0.09, eps = 0.18;
  const double md = static_cast<double>(inst.m);
  Eigen::MatrixXd c_profile(inst.m, 3), opt_profile(inst.m, 2);
  const double w_e = 17.0;
  for (std::int64_t s = 0; s < inst.m; ++s) {
    for (int i = 0; i < 3; ++i) c_profile(s, i) = inst.capacities[i] / md;
    for (int i = 0; i < 2; ++i) opt_profile(s, i) = w_e / md;
  }
  auto uniform = make_asi3_state(inst, c_profile, opt_profile, gamma, eps);
  auto fixed = make_known_we_state(inst, w_e, gamma, eps);
  for (int i = 0; i < 3; ++i)
    CHECK(close_rel(uniform.log_phi_x[i], fixed.log_phi_x[i], 1e-9));
  for (int i = 0; i < 2; ++i)
    CHECK(close_rel(uniform.log_phi_y[i], fixed.log_phi_y[i], 1e-9));
}

TEST_CASE("per-resource potentials match the closed form") {
  IIDInput iid;
  Instance inst = random_instance(2, 2, 300, 12, &iid);
  const double gamma = 0.07, eps = 0.14;
  Rng pr(13);
  Eigen::MatrixXd c_profile(inst.m, 2), opt_profile(inst.m, 2);
  for (std::int64_t s = 0; s < inst.m; ++s) {
    for (int i = 0; i < 2; ++i) {
      c_profile(s, i) =
          inst.capacities[i] / static_cast<double>(inst.m) * pr.uniform(0.2, 1.0);
      opt_profile(s, i) = pr.uniform(0.01, 0.2);
    }
  }
  const VectorXd opt_total = opt_profile.colwise().sum();
  auto state = make_asi3_state(inst, c_profile, opt_profile, gamma, eps);

  VectorXd sum_x = VectorXd::Zero(2), sum_y = VectorXd::Zero(2);
  Rng rng(14);
  for (std::int64_t s = 1; s <= inst.m; ++s) {
    const int id = draw_type(iid.probs, rng);
    const RequestType* req = id == kNullRequest ? nullptr : inst.find_type(id);
    int k = kDropOption;
    if (req) k = select_option(state, *req);
    apply_update(state, k == kDropOption ? nullptr : &req->options[k]);
    if (k != kDropOption) {
      for (const auto& [i, a] : req->options[k].consumption) sum_x[i] += a;
      for (const auto& [i, w] : req->options[k].profit) sum_y[i] += w;
    }
    for (int i = 0; i < 2; ++i) {
      double fx = 0.0, fy = 0.0;
      for (std::int64_t t = s + 2; t <= inst.m; ++t) {
        fx += std::log1p(eps * c_profile(t - 1, i) /
                         ((1.0 + eps) * inst.capacities[i] * gamma));
        fy += std::log1p(-eps * opt_profile(t - 1, i) /
                         ((1.0 + eps) * opt_total[i] * gamma));
      }
      const double closed_x = -std::log(inst.capacities[i]) +
                              sum_x[i] / (gamma * inst.capacities[i]) *
                                  std::log1p(eps) +
                              fx - std::log1p(eps) / gamma;
      const double closed_y = -std::log(opt_total[i]) +
                              sum_y[i] / (gamma * opt_total[i]) *
                                  std::log1p(-eps) +
                              fy -
                              (1.0 - eps) / (gamma * (1.0 + eps)) *
                                  std::log1p(-eps);
      CHECK(close_rel(state.log_phi_x[i], closed_x));
      CHECK(close_rel(state.log_phi_y[i], closed_y));
    }
  }
}

TEST_CASE("stage potentials match the closed form") {
  IIDInput iid;
  Instance inst = random_instance(2, 1, 400, 15, &iid);
  const double gamma = 0.08, ex = 0.3, ey = 0.25, z = 40.0, w_max = 1.0;
  const std::int64_t t_r = 200;
  auto state = make_stage_state(inst.capacities, 1, t_r, inst.m, gamma, ex, ey,
                                z, w_max);
  const double md = static_cast<double>(inst.m);
  const double td = static_cast<double>(t_r);

  VectorXd sum_x = VectorXd::Zero(2);
  double sum_y = 0.0;
  Rng rng(16);
  for (std::int64_t s = 1; s <= t_r; ++s) {
    const int id = draw_type(iid.probs, rng);
    const RequestType* req = id == kNullRequest ? nullptr : inst.find_type(id);
    int k = kDropOption;
    if (req) k = select_option(state, *req);
    apply_update(state, k == kDropOption ? nullptr : &req->options[k]);
    if (k != kDropOption) {
      for (const auto& [i, a] : req->options[k].consumption) sum_x[i] += a;
      for (const auto& [i, w] : req->options[k].profit) sum_y += w;
    }
    for (int i = 0; i < 2; ++i) {
      const double closed =
          std::log(ex) - std::log(gamma * inst.capacities[i]) +
          sum_x[i] / (gamma * inst.capacities[i]) * std::log1p(ex) +
          (td - s - 1.0) * std::log1p(ex / (md * gamma)) -
          (1.0 + ex) * td / (md * gamma) * std::log1p(ex);
      CHECK(close_rel(state.log_phi_x[i], closed));
    }
    const double closed_y =
        std::log(ey) - std::log(w_max) + sum_y / w_max * std::log1p(-ey) +
        (td - s - 1.0) * std::log1p(-ey / (md * gamma)) -
        (1.0 - ey) * td * z / (md * w_max) * std::log1p(-ey);
    CHECK(close_rel(state.log_phi_y[0], closed_y));
  }
}

TEST_CASE("conservative serving matches the binomial rate") {
  Instance inst;
  inst.n_resources = 1;
  inst.n_profits = 1;
  inst.capacities = VectorXd::Constant(1, 1e9);
  inst.m = 1000;
  RequestType t;
  t.id = 0;
  t.options.push_back({{{0, 1.0}}, {{0, 1.0}}});
  inst.request_types.push_back(t);
  const IIDInput iid{{{0, 1.0}}};

  const auto rep = ho_conservative_run(inst, StochasticInput{iid}, {{1.0}},
                                       0.25, 99);
  // Binomial(1000, 0.8): mean 800, sigma ~12.6, allow 4 sigma.
  CHECK(std::abs(static_cast<double>(rep.served_count()) - 800.0) <= 51.0);

  const auto none =
      ho_conservative_run(inst, StochasticInput{iid}, {{0.0}}, 0.25, 99);
  CHECK(none.served_count() == 0);
  CHECK(none.objective == 0.0);
}

TEST_CASE("conservative serving rejects infeasible allocations") {
  Instance inst;
  inst.n_resources = 1;
  inst.n_profits = 1;
  inst.capacities = VectorXd::Constant(1, 1.0);  // far below m demand
  inst.m = 1000;
  RequestType t;
  t.id = 0;
  t.options.push_back({{{0, 1.0}}, {{0, 1.0}}});
  inst.request_types.push_back(t);
  CHECK_THROWS_AS(ho_conservative_run(inst, StochasticInput{IIDInput{{{0, 1.0}}}},
                                      {{1.0}}, 0.25, 1),
                  std::invalid_argument);
}

TEST_CASE("stage partition arithmetic") {
  const auto sp = make_stage_partition(16, 0.25);
  CHECK(sp.l == 2);
  CHECK(sp.t_observe == 4);
  REQUIRE(sp.t.size() == 2);
  CHECK(sp.t[0] == 4);
  CHECK(sp.t[1] == 8);
  CHECK(sp.delta == doctest::Approx(0.25 / 6.0));
  CHECK_THROWS_AS(make_stage_partition(16, 0.6), std::domain_error);
  CHECK_THROWS_AS(make_stage_partition(10, 0.01), std::domain_error);

  // Stages partition m for assorted (m, eps).
  for (std::int64_t m : {40, 100, 1037, 20000}) {
    for (double eps : {0.1, 0.25, 0.5}) {
      const auto p = make_stage_partition(m, eps);
      std::int64_t total = p.t_observe;
      for (auto t : p.t) total += t;
      CHECK(total == m);
    }
  }
}

TEST_CASE("staged run serves a costless profitable stream after observing") {
  Instance inst;
  inst.n_resources = 1;
  inst.n_profits = 1;
  inst.capacities = VectorXd::Constant(1, 100.0);
  inst.m = 64;
  RequestType t;
  t.id = 0;
  t.options.push_back({{}, {{0, 1.0}}});
  inst.request_types.push_back(t);

  const auto out = staged_run(
      inst, fixed_stream_source(std::vector<int>(64, 0)), 0.1, 0.25, {});
  const auto sp = out.stages;
  CHECK(out.run.served_count() == inst.m - sp.t_observe);
  for (std::size_t s = 0; s < static_cast<std::size_t>(sp.t_observe); ++s)
    CHECK(out.run.decisions[s].second == kDropOption);
  for (std::size_t s = static_cast<std::size_t>(sp.t_observe);
       s < out.run.decisions.size(); ++s)
    CHECK(out.run.decisions[s].second == 0);
}

TEST_CASE("violations are recorded and hard-cap mode prevents them") {
  Instance inst;
  inst.n_resources = 1;
  inst.n_profits = 1;
  inst.capacities = VectorXd::Constant(1, 2.5);
  inst.m = 10;
  RequestType t;
  t.id = 0;
  t.options.push_back({{{0, 1.0}}, {{0, 10.0}}});
  inst.request_types.push_back(t);
  const auto stream = std::vector<int>(10, 0);

  // High-profit requests keep the surrogate serving past the capacity.
  const auto loose = known_we_run(inst, fixed_stream_source(stream), 10.0, 1.0,
                                  0.2);
  REQUIRE(loose.violated());
  CHECK(loose.violations[0] == std::pair<int, std::int64_t>{0, 3});

  RunOptions capped;
  capped.hard_cap = true;
  const auto hard = known_we_run(inst, fixed_stream_source(stream), 10.0, 1.0,
                                 0.2, capped);
  CHECK_FALSE(hard.violated());
  CHECK(hard.cum_consumption[0] <= 2.5);
  CHECK(hard.served_count() == 2);
}

TEST_CASE("posted prices replicate the selection rule") {
  CHECK_THROWS_AS(posted_prices(PotentialState{VectorXd::Zero(2),
                                               VectorXd::Zero(2),
                                               {},
                                               0,
                                               1}),
                  std::invalid_argument);

  PotentialState hand;
  hand.log_phi_x = VectorXd::Constant(1, std::log(2.0));
  hand.log_phi_y = VectorXd::Constant(1, std::log(4.0));
  CHECK(posted_prices(hand)[0] == doctest::Approx(0.5));
  hand.log_phi_x.array() += std::log(10.0);
  hand.log_phi_y.array() += std::log(10.0);
  CHECK(posted_prices(hand)[0] == doctest::Approx(0.5));

  Rng rng(33);
  int checked = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    PotentialState state;
    state.horizon = 1;
    state.log_phi_x = VectorXd(3);
    for (int i = 0; i < 3; ++i) state.log_phi_x[i] = rng.uniform(-6.0, 4.0);
    state.log_phi_y = VectorXd::Constant(1, rng.uniform(-6.0, 4.0));

    RequestType req;
    const int n_opts = 1 + static_cast<int>(rng.index(4));
    for (int k = 0; k < n_opts; ++k) {
      OptionVector o;
      for (int i = 0; i < 3; ++i)
        if (rng.bernoulli(0.7)) o.consumption[i] = rng.uniform(0.0, 2.0);
      if (rng.bernoulli(0.9)) o.profit[0] = rng.uniform(0.0, 2.0);
      req.options.push_back(o);
    }

    const VectorXd prices = posted_prices(state);
    int buyer = kDropOption;
    double best_u = 0.0;
    for (int k = 0; k < n_opts; ++k) {
      double u = 0.0;
      const auto it = req.options[k].profit.find(0);
      if (it != req.options[k].profit.end()) u += it->second;
      for (const auto& [i, a] : req.options[k].consumption)
        u -= a * prices[i];
      if (u > best_u || (u == best_u && buyer == kDropOption)) {
        buyer = k;
        best_u = u;
      }
    }
    CHECK(buyer == select_option(state, req));
    ++checked;
  }
  CHECK(checked == 10000);
}

TEST_CASE("parameter validation of the state builders") {
  Instance inst = random_instance(2, 1, 10, 50);
  CHECK_THROWS_AS(make_known_we_state(inst, 0.0, 0.1, 0.2), std::domain_error);
  CHECK_THROWS_AS(make_known_we_state(inst, 1.0, 0.0, 0.2), std::domain_error);
  CHECK_THROWS_AS(make_known_we_state(inst, 1.0, 0.1, 1.5), std::domain_error);
  CHECK_THROWS_AS(make_asi2_state(inst, {1.0}, 0.1, 0.2),
                  std::invalid_argument);
  std::vector<double> bad(10, 1.0);
  bad[3] = 0.0;
  CHECK_THROWS_AS(make_asi2_state(inst, bad, 0.1, 0.2), std::domain_error);
}
