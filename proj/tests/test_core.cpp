#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ra/core.hpp"

using namespace ra;

namespace {

Instance tiny_instance() {
  Instance inst;
  inst.n_resources = 1;
  inst.n_profits = 1;
  inst.capacities = VectorXd::Constant(1, 10.0);
  inst.m = 4;
  RequestType t;
  t.id = 0;
  OptionVector o;
  o.consumption[0] = 1.0;
  o.profit[0] = 1.0;
  t.options.push_back(o);
  inst.request_types.push_back(t);
  return inst;
}

}  // namespace

TEST_CASE("validate_instance accepts a well-formed instance") {
  CHECK(validate_instance(tiny_instance()).empty());
}

TEST_CASE("validate_instance flags a zero capacity") {
  auto inst = tiny_instance();
  inst.capacities[0] = 0.0;
  const auto problems = validate_instance(inst);
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("not positive") != std::string::npos);
}

TEST_CASE("validate_instance flags out-of-range resource ids") {
  auto inst = tiny_instance();
  inst.request_types[0].options[0].consumption[1] = 1.0;
  const auto problems = validate_instance(inst);
  REQUIRE(problems.size() == 1);
  CHECK(problems[0].find("resource id out of range") != std::string::npos);
}

TEST_CASE("validate_instance flags duplicate ids and negative amounts") {
  auto inst = tiny_instance();
  inst.request_types.push_back(inst.request_types[0]);
  inst.request_types[1].options[0].profit[0] = -1.0;
  const auto problems = validate_instance(inst);
  CHECK(problems.size() == 2);
}

TEST_CASE("build_expected_instance scales by m p_j") {
  auto inst = tiny_instance();
  const auto expected =
      build_expected_instance(inst, IIDInput{{{0, 0.5}}});
  REQUIRE(expected.scale.size() == 1);
  CHECK(expected.scale[0] == doctest::Approx(2.0));  // m=4, p=0.5

  const auto zero = build_expected_instance(inst, IIDInput{{}});
  CHECK(zero.scale[0] == 0.0);

  inst.m = 1;
  const auto identity = build_expected_instance(inst, IIDInput{{{0, 1.0}}});
  CHECK(identity.scale[0] == doctest::Approx(1.0));
}

TEST_CASE("build_expected_instance rejects ASI inputs") {
  CHECK_THROWS_AS(build_expected_instance(tiny_instance(),
                                          StochasticInput{ASISchedule{}}),
                  std::invalid_argument);
}

TEST_CASE("expected instance homogeneity") {
  // Scaling probabilities by c and m by 1/c keeps effective weights.
  auto inst = tiny_instance();
  inst.m = 12;
  const auto a = build_expected_instance(inst, IIDInput{{{0, 0.25}}});
  inst.m = 4;
  const auto b = build_expected_instance(inst, IIDInput{{{0, 0.75}}});
  CHECK(a.scale[0] == doctest::Approx(b.scale[0]));
}

TEST_CASE("compute_gamma_online matches the definition") {
  Instance inst = tiny_instance();
  inst.request_types[0].options[0].consumption[0] = 2.0;
  inst.request_types[0].options[0].profit[0] = 3.0;
  const auto rep = compute_gamma_online(inst, 6.0);
  CHECK(rep.gamma == doctest::Approx(0.5));
  CHECK(rep.witness.ratio == GammaReport::Ratio::kProfitOverBenchmark);

  Instance empty = tiny_instance();
  empty.request_types[0].options[0].consumption.clear();
  empty.request_types[0].options[0].profit.clear();
  const auto none = compute_gamma_online(empty, 1.0);
  CHECK(none.gamma == 0.0);
  CHECK(none.witness.ratio == GammaReport::Ratio::kNone);

  Instance boundary = tiny_instance();
  boundary.request_types[0].options[0].consumption[0] = 10.0;  // a = c
  CHECK(compute_gamma_online(boundary, 100.0).gamma >= 1.0);

  CHECK_THROWS_AS(compute_gamma_online(inst, 0.0), std::domain_error);
}

TEST_CASE("compute_gamma_offline matches the definition") {
  MixedPCInstance pc;
  pc.n_pack = 1;
  pc.n_cover = 1;
  pc.capacities = VectorXd::Constant(1, 4.0);
  pc.demands = VectorXd::Constant(1, 2.0);
  pc.m = 1;
  RequestType t;
  t.id = 0;
  OptionVector o;
  o.consumption[0] = 1.0;
  o.profit[0] = 1.0;
  t.options.push_back(o);
  pc.request_types.push_back(t);
  pc.multiplicity = {1};
  CHECK(compute_gamma_offline(pc).gamma == doctest::Approx(0.5));

  pc.request_types[0].options[0].profit.clear();
  const auto rep = compute_gamma_offline(pc);
  CHECK(rep.gamma == doctest::Approx(0.25));
  CHECK(rep.witness.ratio == GammaReport::Ratio::kConsumptionOverCapacity);

  // Symmetric tie: the consumption side is scanned first per option.
  pc.request_types[0].options[0].profit[0] = 1.0;
  pc.capacities[0] = 2.0;
  const auto tie = compute_gamma_offline(pc);
  CHECK(tie.gamma == doctest::Approx(0.5));
  CHECK(tie.witness.ratio == GammaReport::Ratio::kConsumptionOverCapacity);
}

TEST_CASE("gamma equals a brute-force maximum on random instances") {
  Rng rng(7);
  Instance inst;
  inst.n_resources = 4;
  inst.n_profits = 3;
  inst.capacities = VectorXd::Constant(4, 0.0);
  for (int i = 0; i < 4; ++i) inst.capacities[i] = rng.uniform(1.0, 5.0);
  inst.m = 10;
  for (int j = 0; j < 20; ++j) {
    RequestType t;
    t.id = j;
    for (int k = 0; k < 3; ++k) {
      OptionVector o;
      for (int i = 0; i < 4; ++i)
        if (rng.bernoulli(0.6)) o.consumption[i] = rng.uniform(0.0, 2.0);
      for (int i = 0; i < 3; ++i)
        if (rng.bernoulli(0.6)) o.profit[i] = rng.uniform(0.0, 2.0);
      t.options.push_back(o);
    }
    inst.request_types.push_back(t);
  }
  const double w_e = 3.7;
  double brute = 0.0;
  for (const auto& t : inst.request_types)
    for (const auto& o : t.options) {
      for (const auto& [i, a] : o.consumption)
        brute = std::max(brute, a / inst.capacities[i]);
      for (const auto& [i, w] : o.profit) brute = std::max(brute, w / w_e);
    }
  CHECK(compute_gamma_online(inst, w_e).gamma == doctest::Approx(brute));
}

TEST_CASE("best_option spec points") {
  VectorXd px(2), py(1);

  RequestType profitless;
  profitless.options.push_back({{{0, 1.0}}, {}});
  px << 0.5, 0.25;
  py << 1.0;
  CHECK(best_option(profitless, px, py) == kDropOption);

  RequestType costless;
  costless.options.push_back({{}, {{0, 1.0}}});
  py << 0.5;
  CHECK(best_option(costless, px, py) == 0);

  RequestType two;
  two.options.push_back({{{0, 1.0}}, {{0, 1.0}}});
  two.options.push_back({{{0, 2.0}}, {{0, 3.0}}});
  px << 1.0, 1.0;
  py << 1.0;
  CHECK(best_option(two, px, py) == 1);  // scores 0 and -1
}

TEST_CASE("best_option tie rules") {
  VectorXd px(1), py(1);
  px << 1.0;
  py << 1.0;
  RequestType zero_score;
  zero_score.options.push_back({{{0, 1.0}}, {{0, 1.0}}});  // score 0, like drop
  CHECK(best_option(zero_score, px, py) == 0);  // real option beats drop

  RequestType equal;
  equal.options.push_back({{}, {{0, 2.0}}});
  equal.options.push_back({{}, {{0, 2.0}}});
  CHECK(best_option(equal, px, py) == 0);  // lowest index on ties
}

TEST_CASE("best_option scale invariance and drop domination") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    RequestType t;
    const int n_opts = 1 + static_cast<int>(rng.index(4));
    for (int k = 0; k < n_opts; ++k) {
      OptionVector o;
      for (int i = 0; i < 3; ++i)
        if (rng.bernoulli(0.7)) o.consumption[i] = rng.uniform(0.0, 2.0);
      for (int i = 0; i < 2; ++i)
        if (rng.bernoulli(0.7)) o.profit[i] = rng.uniform(0.0, 2.0);
      t.options.push_back(o);
    }
    VectorXd px(3), py(2);
    for (int i = 0; i < 3; ++i) px[i] = rng.uniform(0.0, 3.0);
    for (int i = 0; i < 2; ++i) py[i] = rng.uniform(0.0, 3.0);
    const int k = best_option(t, px, py);
    const double scale = rng.uniform(0.1, 10.0);
    CHECK(best_option(t, (px * scale).eval(), (py * scale).eval()) == k);
    if (k != kDropOption) CHECK(option_score(t.options[k], px, py) <= 0.0);
  }
}

TEST_CASE("chernoff_tail closed forms and domain errors") {
  CHECK(chernoff_tail(ChernoffKind::kLower, 100.0, 1.0, 0.1) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  CHECK(chernoff_tail(ChernoffKind::kUpperLarge, 1.0, 1.0, 1.0) ==
        doctest::Approx(0.25).epsilon(1e-12));
  // eps -> 0+ pushes the exponential bounds to 1
  CHECK(chernoff_tail(ChernoffKind::kLower, 5.0, 1.0, 1e-9) ==
        doctest::Approx(1.0));
  CHECK(chernoff_tail(ChernoffKind::kUpperSmall, 5.0, 1.0, 1e-9) ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(chernoff_tail(ChernoffKind::kUpperSmall, 1.0, 1.0, 5.0),
                  std::domain_error);
  CHECK_THROWS_AS(chernoff_tail(ChernoffKind::kLower, -1.0, 1.0, 0.1),
                  std::domain_error);
  CHECK_THROWS_AS(chernoff_tail(ChernoffKind::kLower, 1.0, 0.0, 0.1),
                  std::domain_error);
}

TEST_CASE("chernoff_tail bounds are in [0,1] and monotone") {
  for (double mu : {0.5, 2.0, 10.0, 200.0}) {
    for (double eps : {0.05, 0.2, 0.8, 2.0}) {
      for (auto kind : {ChernoffKind::kLower, ChernoffKind::kUpperLarge}) {
        const double p = chernoff_tail(kind, mu, 1.0, eps);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(chernoff_tail(kind, mu * 2.0, 1.0, eps) <= p);
        CHECK(chernoff_tail(kind, mu, 1.0, eps * 1.5) <= p);
      }
      if (eps <= 2.0 * std::exp(1.0) - 1.0) {
        const double p = chernoff_tail(ChernoffKind::kUpperSmall, mu, 1.0, eps);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(chernoff_tail(ChernoffKind::kUpperSmall, mu * 2.0, 1.0, eps) <= p);
      }
    }
  }
}

TEST_CASE("draw_type treats the probability deficit as a null request") {
  TypeDistribution probs{{3, 0.25}, {7, 0.25}};
  Rng rng(42);
  std::int64_t nulls = 0, total = 40000;
  for (std::int64_t i = 0; i < total; ++i) {
    const int id = draw_type(probs, rng);
    if (id == kNullRequest)
      ++nulls;
    else
      CHECK((id == 3 || id == 7));
  }
  const double frac = static_cast<double>(nulls) / static_cast<double>(total);
  CHECK(frac == doctest::Approx(0.5).epsilon(0.03));
}
