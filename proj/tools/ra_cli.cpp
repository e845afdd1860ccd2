#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ra/core.hpp"
#include "ra/gap.hpp"
#include "ra/generators.hpp"
#include "ra/greedy.hpp"
#include "ra/harness.hpp"
#include "ra/json_io.hpp"
#include "ra/lp.hpp"
#include "ra/online.hpp"

namespace {

using namespace ra;

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

StochasticInput require_input(const InstanceFile& file) {
  if (!file.input)
    throw std::invalid_argument("instance file lacks an \"input\" section");
  return *file.input;
}

double expected_benchmark(const Instance& inst, const StochasticInput& input) {
  return solve_maximin_exact(build_expected_instance(inst, input)).lambda;
}

std::vector<double> load_series(const std::string& path) {
  const auto root = nlohmann::json::parse(read_file(path));
  if (!root.is_array())
    throw std::invalid_argument("per-step file must be a JSON array");
  return root.get<std::vector<double>>();
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> load_profiles(
    const std::string& path) {
  const auto root = nlohmann::json::parse(read_file(path));
  auto to_matrix = [](const nlohmann::json& rows) {
    const auto data = rows.get<std::vector<std::vector<double>>>();
    if (data.empty()) return Eigen::MatrixXd();
    Eigen::MatrixXd m(data.size(), data[0].size());
    for (std::size_t r = 0; r < data.size(); ++r) {
      if (data[r].size() != data[0].size())
        throw std::invalid_argument("profile rows have unequal lengths");
      for (std::size_t c = 0; c < data[r].size(); ++c)
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            data[r][c];
    }
    return m;
  };
  return {to_matrix(root.at("c_profile")), to_matrix(root.at("opt_profile"))};
}

struct OnlineArgs {
  std::string algo;
  std::string instance_path;
  double eps = 0.1;
  std::uint64_t seed = 0;
  std::int64_t trials = 1;
  int jobs = 1;
  double we = 0.0;
  double gamma = 0.0;
  double alpha = 1.0;
  std::string we_per_step_path;
  std::string profiles_path;
  std::string out_path;
  bool hard_cap = false;
};

int cmd_run_online(const OnlineArgs& args) {
  const auto file = load_instance_file(args.instance_path);
  const Instance& inst = file.instance;
  if (auto problems = validate_instance(inst); !problems.empty())
    throw std::invalid_argument("invalid instance: " + problems[0]);
  const StochasticInput input = require_input(file);

  RunOptions ropts;
  ropts.hard_cap = args.hard_cap;

  // Resolve the benchmark data each variant needs.
  std::vector<double> we_steps;
  if (!args.we_per_step_path.empty()) we_steps = load_series(args.we_per_step_path);
  Eigen::MatrixXd c_profile, opt_profile;
  if (!args.profiles_path.empty())
    std::tie(c_profile, opt_profile) = load_profiles(args.profiles_path);

  double w_e = args.we;
  if (w_e <= 0.0) {
    if (!we_steps.empty()) {
      w_e = *std::min_element(we_steps.begin(), we_steps.end());
    } else if (std::holds_alternative<IIDInput>(input)) {
      w_e = expected_benchmark(inst, input);
    }
  }
  if (args.algo != "asi3" && !(w_e > 0.0))
    throw std::invalid_argument(
        "cannot determine the benchmark; pass --we or --we-per-step");

  double gamma = args.gamma;
  if (gamma <= 0.0) {
    double bench = w_e;
    if (args.algo == "asi3") {
      if (opt_profile.size() == 0)
        throw std::invalid_argument("asi3 requires --profiles");
      bench = opt_profile.colwise().sum().minCoeff();
    }
    gamma = compute_gamma_online(inst, bench).gamma;
  }

  LPSolution x_star;
  if (args.algo == "ho")
    x_star = solve_maximin_exact(build_expected_instance(inst, input));
  if (args.algo == "asi2" && we_steps.empty()) {
    if (!std::holds_alternative<IIDInput>(input))
      throw std::invalid_argument("asi2 requires --we-per-step for ASI inputs");
    we_steps.assign(static_cast<std::size_t>(inst.m), w_e);
  }

  auto run_one = [&](std::uint64_t seed) -> RunReport {
    const auto source = input_source(inst, input, seed);
    if (args.algo == "ho")
      return ho_conservative_run(inst, input, x_star.allocation, args.eps, seed);
    if (args.algo == "known-we" || args.algo == "asi1")
      return known_we_run(inst, source, w_e, gamma, args.eps, ropts);
    if (args.algo == "staged") {
      StagedOptions sopts;
      sopts.run = ropts;
      sopts.alpha = args.alpha;
      return staged_run(inst, source, gamma, args.eps, sopts).run;
    }
    if (args.algo == "asi2")
      return asi2_run(inst, source, we_steps, gamma, args.eps, ropts);
    if (args.algo == "asi3")
      return asi3_run(inst, source, c_profile, opt_profile, gamma, args.eps,
                      ropts);
    throw std::invalid_argument("unknown --algo: " + args.algo);
  };

  if (args.trials <= 1) {
    write_output(args.out_path, run_report_json(run_one(args.seed)));
    return 0;
  }
  ExperimentConfig cfg;
  cfg.trials = args.trials;
  cfg.base_seed = args.seed;
  cfg.jobs = args.jobs;
  cfg.benchmark = args.algo == "asi3"
                      ? opt_profile.colwise().sum().minCoeff()
                      : w_e;
  cfg.run = run_one;
  write_output(args.out_path, trials_csv(run_experiment(cfg).rows));
  return 0;
}

int cmd_run_greedy(const std::string& instance_path, std::uint64_t seed,
                   std::int64_t trials, const std::string& out_path) {
  const auto file = load_instance_file(instance_path);
  const auto input = require_input(file);
  const auto* iid = std::get_if<IIDInput>(&input);
  if (!iid) throw std::invalid_argument("run-greedy needs an i.i.d. input");
  const auto adwords = adwords_from_instance(file.instance, iid->probs);
  const double w_e = greedy_benchmark(adwords);

  std::ostringstream os;
  os << "#schema=1\ntrial,revenue,w_e,ratio\n" << std::setprecision(17);
  for (std::int64_t t = 0; t < std::max<std::int64_t>(trials, 1); ++t) {
    const auto rep = greedy_run(adwords, seed + static_cast<std::uint64_t>(t));
    os << t << ',' << rep.revenue << ',' << w_e << ','
       << (w_e > 0.0 ? rep.revenue / w_e : 0.0) << '\n';
  }
  write_output(out_path, os.str());
  return 0;
}

int cmd_gap_check(const std::string& instance_path, double eps, double delta,
                  std::uint64_t seed, std::int64_t samples,
                  const std::string& out_path) {
  const auto file = load_instance_file(instance_path);
  const auto pc = to_mixed_pc(file);
  std::optional<std::int64_t> t_override;
  if (samples > 0) t_override = samples;
  write_output(out_path,
               gap_verdict_json(gap_check(pc, eps, delta, seed, t_override)));
  return 0;
}

int cmd_solve_offline(const std::string& instance_path,
                      const std::string& out_path) {
  const auto file = load_instance_file(instance_path);
  const auto input = require_input(file);
  const auto sol =
      solve_maximin_exact(build_expected_instance(file.instance, input));
  write_output(out_path, lp_solution_json(sol));
  return 0;
}

struct GenArgs {
  std::string family;
  std::uint64_t seed = 0;
  std::string out_path;
  // adwords / asi
  int n = 5;
  int types = 20;
  std::int64_t m = 1000;
  double budget = 100.0;
  double bid_lo = 0.5;
  double bid_hi = 1.0;
  // lower-bound
  int z = 2;
  double b = 4.0;
  double alpha = 0.5;
  // mixed-pc
  int pack = 3;
  int cover = 3;
  double eps = 0.2;
  bool no_variant = false;
  // routing
  std::string graph_path;
  int requests = 4;
  int chunks = 4;
};

InstanceFile gen_instance_file(const GenArgs& g) {
  InstanceFile file;
  if (g.family == "adwords" || g.family == "asi") {
    AdwordsGenParams p;
    p.n_advertisers = g.n;
    p.n_query_types = g.types;
    p.m = g.m;
    p.budget = g.budget;
    p.bid_lo = g.bid_lo;
    p.bid_hi = g.bid_hi;
    const auto adwords = gen_adwords_iid(p, g.seed);
    file.instance = adwords_to_instance(adwords);
    if (g.family == "adwords") {
      file.input = adwords_input(adwords);
      return file;
    }
    // Two bases: the uniform query mix and one skewed toward the first
    // half of the query types, laid out in chunks.
    TypeDistribution base0 = adwords.probs, base1;
    double mass = 0.0;
    for (const auto& [j, prob] : base0) {
      const double q = j < g.types / 2 ? prob * 1.8 : prob * 0.2;
      base1[j] = q;
      mass += q;
    }
    for (auto& [j, q] : base1) q /= std::max(mass, 1e-12);
    const auto gen = gen_asi_schedule(file.instance, {base0, base1},
                                      ASIPattern::kChunked, g.chunks, g.seed);
    file.input = StochasticInput{gen.schedule};
    return file;
  }
  if (g.family == "lower-bound") {
    LowerBoundParams p{g.z, g.b, g.alpha};
    auto fam = gen_lower_bound(p);
    file.instance = std::move(fam.instance);
    file.input = StochasticInput{fam.input};
    return file;
  }
  if (g.family == "mixed-pc") {
    MixedPCGenParams p;
    p.n_pack = g.pack;
    p.n_cover = g.cover;
    p.n_types = g.types;
    p.m = g.m;
    p.eps = g.eps;
    const auto pair = gen_mixed_pc_planted(p, g.seed);
    const MixedPCInstance& pc = g.no_variant ? pair.no : pair.yes;
    file.instance.n_resources = pc.n_pack;
    file.instance.n_profits = pc.n_cover;
    file.instance.capacities = pc.capacities;
    file.instance.m = pc.m;
    file.instance.request_types = pc.request_types;
    IIDInput iid;
    for (std::size_t j = 0; j < pc.request_types.size(); ++j)
      iid.probs[pc.request_types[j].id] =
          static_cast<double>(pc.multiplicity[j]) / static_cast<double>(pc.m);
    file.input = StochasticInput{iid};
    file.demands = pc.demands;
    return file;
  }
  if (g.family == "routing") {
    const auto graph = parse_edge_list(read_file(g.graph_path), false);
    file.instance.n_resources = static_cast<int>(graph.edges.size());
    file.instance.n_profits = 1;
    file.instance.capacities = VectorXd(graph.edges.size());
    for (std::size_t e = 0; e < graph.edges.size(); ++e)
      file.instance.capacities[static_cast<Eigen::Index>(e)] =
          graph.edges[e].capacity;
    file.instance.m = g.m;
    Rng rng(g.seed);
    IIDInput iid;
    for (int r = 0; r < g.requests; ++r) {
      RoutingRequest req;
      req.s = static_cast<int>(rng.index(graph.n_nodes));
      do {
        req.t = static_cast<int>(rng.index(graph.n_nodes));
      } while (req.t == req.s);
      req.rho = rng.uniform(0.5, 1.5);
      req.value = rng.uniform(0.5, 2.0);
      auto type = routing_request_type(graph, req, r);
      if (type.options.empty()) continue;  // disconnected pair
      file.instance.request_types.push_back(std::move(type));
      iid.probs[r] = 1.0 / g.requests;
    }
    file.input = StochasticInput{iid};
    return file;
  }
  throw std::invalid_argument("unknown --family: " + g.family);
}

int cmd_bench(const std::string& name, std::int64_t trials, std::uint64_t seed,
              int jobs, const std::string& out_path) {
  nlohmann::json out;
  out["experiment"] = name;
  if (name == "dominance") {
    GenArgs g;
    g.family = "adwords";
    g.n = 2;
    g.types = 4;
    g.m = 40;
    g.budget = 5.0;
    const auto file = gen_instance_file(g);
    const auto cmp = compare_benchmarks(file.instance, *file.input,
                                        std::max<std::int64_t>(trials, 1), seed,
                                        jobs);
    out["w_e"] = cmp.w_e;
    out["mean_w_r"] = cmp.mean_w_r;
    out["se_w_r"] = cmp.se_w_r;
  } else if (name == "known-we" || name == "staged") {
    GenArgs g;
    g.family = "adwords";
    g.n = 5;
    g.types = 20;
    g.m = 5000;
    g.budget = 250.0;
    const auto file = gen_instance_file(g);
    const Instance& inst = file.instance;
    const double eps = name == "staged" ? 0.25 : 0.2;
    const double w_e = expected_benchmark(inst, *file.input);
    const double gamma = compute_gamma_online(inst, w_e).gamma;
    ExperimentConfig cfg;
    cfg.trials = std::max<std::int64_t>(trials, 1);
    cfg.base_seed = seed;
    cfg.jobs = jobs;
    cfg.benchmark = w_e;
    cfg.run = [&](std::uint64_t s) {
      const auto source = input_source(inst, *file.input, s);
      if (name == "staged")
        return staged_run(inst, source, gamma, eps, {}).run;
      return known_we_run(inst, source, w_e, gamma, eps);
    };
    const auto res = run_experiment(cfg);
    out["w_e"] = w_e;
    out["gamma"] = gamma;
    out["eps"] = eps;
    out["mean_ratio"] = res.stats.mean_ratio;
    out["violation_freq"] = res.stats.violation_freq;
  } else if (name == "greedy") {
    GenArgs g;
    g.family = "adwords";
    g.n = 4;
    g.types = 10;
    g.m = 400;
    g.budget = 10.0;
    g.bid_lo = 0.2;
    g.bid_hi = 10.0;
    const auto file = gen_instance_file(g);
    const auto* iid = std::get_if<IIDInput>(&*file.input);
    const auto adwords = adwords_from_instance(file.instance, iid->probs);
    const double w_e = greedy_benchmark(adwords);
    double sum = 0.0;
    const auto n = std::max<std::int64_t>(trials, 1);
    for (std::int64_t t = 0; t < n; ++t)
      sum += greedy_run(adwords, seed + static_cast<std::uint64_t>(t)).revenue;
    out["w_e"] = w_e;
    out["mean_ratio"] = sum / static_cast<double>(n) / w_e;
  } else if (name == "gap") {
    MixedPCGenParams p;
    const auto n = std::max<std::int64_t>(trials, 1);
    std::int64_t yes_ok = 0, no_ok = 0;
    for (std::int64_t t = 0; t < n; ++t) {
      const auto pair =
          gen_mixed_pc_planted(p, seed + static_cast<std::uint64_t>(t));
      if (gap_check(pair.yes, p.eps, 0.1, seed + 1000 + t, std::nullopt).yes)
        ++yes_ok;
      if (!gap_check(pair.no, p.eps, 0.1, seed + 2000 + t, std::nullopt).yes)
        ++no_ok;
    }
    out["yes_accept_freq"] = static_cast<double>(yes_ok) / n;
    out["no_reject_freq"] = static_cast<double>(no_ok) / n;
  } else if (name == "lower-bound") {
    const auto fam = gen_lower_bound({2, 4.0, 0.5});
    out["w_e"] = expected_benchmark(fam.instance, IIDInput{fam.input});
    out["seven_b"] = 7.0 * 4.0;
  } else {
    throw std::invalid_argument(
        "unknown experiment; known: dominance, known-we, staged, greedy, gap, "
        "lower-bound");
  }
  write_output(out_path, out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resource allocation algorithms workbench"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::int64_t trials = 1;
  std::string format = "json";
  std::string out_path;
  int jobs = 1;
  app.add_option("--seed", seed, "base random seed")->capture_default_str();
  app.add_option("--trials", trials, "number of trials");
  app.add_option("--format", format, "output format (json|csv)");
  app.add_option("--out", out_path, "output file (default stdout)");
  app.add_option("--jobs", jobs, "worker threads");

  OnlineArgs online;
  auto* run_online = app.add_subcommand("run-online", "run an online algorithm");
  run_online->add_option("--algo", online.algo)->required();
  run_online->add_option("--instance", online.instance_path)->required();
  run_online->add_option("--eps", online.eps)->required();
  run_online->add_option("--we", online.we);
  run_online->add_option("--gamma", online.gamma);
  run_online->add_option("--alpha", online.alpha);
  run_online->add_option("--we-per-step", online.we_per_step_path);
  run_online->add_option("--profiles", online.profiles_path);
  run_online->add_flag("--hard-cap", online.hard_cap);

  std::string instance_path;
  auto* run_greedy = app.add_subcommand("run-greedy", "run greedy assignment");
  run_greedy->add_option("--instance", instance_path)->required();

  double eps = 0.1, delta = 0.1;
  std::int64_t samples = 0;
  auto* gap = app.add_subcommand("gap-check", "packing-covering feasibility");
  gap->add_option("--instance", instance_path)->required();
  gap->add_option("--eps", eps)->required();
  gap->add_option("--delta", delta)->required();
  gap->add_option("--samples", samples);

  auto* solve = app.add_subcommand("solve-offline", "expected-instance LP");
  solve->add_option("--instance", instance_path)->required();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-instance", "write an instance file");
  gen_cmd->add_option("--family", gen.family)->required();
  gen_cmd->add_option("--n", gen.n);
  gen_cmd->add_option("--types", gen.types);
  gen_cmd->add_option("--m", gen.m);
  gen_cmd->add_option("--budget", gen.budget);
  gen_cmd->add_option("--bid-lo", gen.bid_lo);
  gen_cmd->add_option("--bid-hi", gen.bid_hi);
  gen_cmd->add_option("--z", gen.z);
  gen_cmd->add_option("--b", gen.b);
  gen_cmd->add_option("--alpha", gen.alpha);
  gen_cmd->add_option("--pack", gen.pack);
  gen_cmd->add_option("--cover", gen.cover);
  gen_cmd->add_option("--eps", gen.eps);
  gen_cmd->add_flag("--no", gen.no_variant, "emit the certified-NO variant");
  gen_cmd->add_option("--graph", gen.graph_path);
  gen_cmd->add_option("--requests", gen.requests);
  gen_cmd->add_option("--chunks", gen.chunks);

  std::string bench_name;
  auto* bench = app.add_subcommand("bench", "run a named experiment");
  bench->add_option("name", bench_name)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_online->parsed()) {
      online.seed = seed;
      online.trials = trials;
      online.jobs = jobs;
      online.out_path = out_path;
      return cmd_run_online(online);
    }
    if (run_greedy->parsed())
      return cmd_run_greedy(instance_path, seed, trials, out_path);
    if (gap->parsed())
      return cmd_gap_check(instance_path, eps, delta, seed, samples, out_path);
    if (solve->parsed()) return cmd_solve_offline(instance_path, out_path);
    if (gen_cmd->parsed()) {
      gen.seed = seed;
      if (out_path.empty())
        throw std::invalid_argument("gen-instance requires --out");
      write_output(out_path, save_instance_json(gen_instance_file(gen)));
      return 0;
    }
    if (bench->parsed())
      return cmd_bench(bench_name, trials, seed, jobs, out_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
