#include "ra/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ra {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where) {
  if (!obj.is_object())
    throw std::invalid_argument("instance schema: " + where +
                                " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw std::invalid_argument("instance schema: unknown key \"" + key +
                                  "\" in " + where);
  }
}

int parse_int_key(const std::string& key, const std::string& where) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(key, &pos);
    if (pos != key.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("instance schema: non-integer key \"" + key +
                                "\" in " + where);
  }
}

std::map<int, double> parse_sparse(const json& obj, const std::string& where) {
  if (!obj.is_object())
    throw std::invalid_argument("instance schema: " + where +
                                " must be an object");
  std::map<int, double> out;
  for (const auto& [key, value] : obj.items())
    out[parse_int_key(key, where)] = value.get<double>();
  return out;
}

TypeDistribution parse_distribution(const json& obj, const std::string& where) {
  TypeDistribution d = parse_sparse(obj, where);
  return d;
}

json sparse_to_json(const std::map<int, double>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[std::to_string(k)] = v;
  return out;
}

json vector_to_json(const VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

InstanceFile load_instance_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("instance schema: bad JSON: ") +
                                e.what());
  }
  require_keys(root,
               {"n_resources", "n_profits", "capacities", "m", "request_types",
                "input", "demands"},
               "top level");

  InstanceFile file;
  Instance& inst = file.instance;
  inst.n_resources = root.at("n_resources").get<int>();
  inst.n_profits = root.at("n_profits").get<int>();
  inst.m = root.at("m").get<std::int64_t>();

  const auto& caps = root.at("capacities");
  if (!caps.is_array())
    throw std::invalid_argument("instance schema: capacities must be an array");
  inst.capacities = VectorXd(caps.size());
  for (std::size_t i = 0; i < caps.size(); ++i)
    inst.capacities[static_cast<Eigen::Index>(i)] = caps[i].get<double>();

  for (const auto& tj : root.at("request_types")) {
    require_keys(tj, {"id", "options"}, "request type");
    RequestType t;
    t.id = tj.at("id").get<int>();
    for (const auto& oj : tj.at("options")) {
      require_keys(oj, {"a", "w"}, "option");
      OptionVector o;
      if (oj.contains("a")) o.consumption = parse_sparse(oj.at("a"), "option a");
      if (oj.contains("w")) o.profit = parse_sparse(oj.at("w"), "option w");
      t.options.push_back(std::move(o));
    }
    inst.request_types.push_back(std::move(t));
  }

  if (root.contains("input")) {
    const auto& in = root.at("input");
    require_keys(in, {"iid", "asi"}, "input");
    if (in.contains("iid") == in.contains("asi"))
      throw std::invalid_argument(
          "instance schema: input needs exactly one of iid, asi");
    if (in.contains("iid")) {
      file.input = IIDInput{parse_distribution(in.at("iid"), "input.iid")};
    } else {
      ASISchedule sched;
      for (const auto& dj : in.at("asi"))
        sched.per_step.push_back(parse_distribution(dj, "input.asi step"));
      file.input = StochasticInput{std::move(sched)};
    }
  }

  if (root.contains("demands")) {
    const auto& dem = root.at("demands");
    if (!dem.is_array())
      throw std::invalid_argument("instance schema: demands must be an array");
    VectorXd d(dem.size());
    for (std::size_t i = 0; i < dem.size(); ++i)
      d[static_cast<Eigen::Index>(i)] = dem[i].get<double>();
    file.demands = std::move(d);
  }
  return file;
}

InstanceFile load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_instance_json(buf.str());
}

std::string save_instance_json(const InstanceFile& file) {
  const Instance& inst = file.instance;
  json root;
  root["n_resources"] = inst.n_resources;
  root["n_profits"] = inst.n_profits;
  root["capacities"] = vector_to_json(inst.capacities);
  root["m"] = inst.m;
  root["request_types"] = json::array();
  for (const auto& t : inst.request_types) {
    json tj;
    tj["id"] = t.id;
    tj["options"] = json::array();
    for (const auto& o : t.options) {
      json oj;
      oj["a"] = sparse_to_json(o.consumption);
      oj["w"] = sparse_to_json(o.profit);
      tj["options"].push_back(std::move(oj));
    }
    root["request_types"].push_back(std::move(tj));
  }
  if (file.input) {
    if (const auto* iid = std::get_if<IIDInput>(&*file.input)) {
      root["input"]["iid"] = sparse_to_json(iid->probs);
    } else {
      const auto& asi = std::get<ASISchedule>(*file.input);
      if (asi.policy)
        throw std::invalid_argument(
            "save_instance_json: adaptive policies are not serializable");
      json steps = json::array();
      for (const auto& d : asi.per_step) steps.push_back(sparse_to_json(d));
      root["input"]["asi"] = std::move(steps);
    }
  }
  if (file.demands) root["demands"] = vector_to_json(*file.demands);
  return root.dump(2) + "\n";
}

MixedPCInstance to_mixed_pc(const InstanceFile& file) {
  if (!file.demands)
    throw std::invalid_argument("to_mixed_pc: instance file lacks demands");
  if (!file.input || !std::holds_alternative<IIDInput>(*file.input))
    throw std::invalid_argument("to_mixed_pc: needs an i.i.d. input");
  const auto& probs = std::get<IIDInput>(*file.input).probs;

  const Instance& inst = file.instance;
  MixedPCInstance pc;
  pc.n_pack = inst.n_resources;
  pc.n_cover = inst.n_profits;
  pc.capacities = inst.capacities;
  pc.demands = *file.demands;
  pc.m = 0;
  for (const auto& t : inst.request_types) {
    const auto it = probs.find(t.id);
    const double p = it == probs.end() ? 0.0 : it->second;
    const auto mult = std::llround(p * static_cast<double>(inst.m));
    if (mult <= 0) continue;
    pc.request_types.push_back(t);
    pc.multiplicity.push_back(mult);
    pc.m += mult;
  }
  if (pc.m == 0)
    throw std::invalid_argument("to_mixed_pc: no request mass");
  return pc;
}

std::string run_report_json(const RunReport& report) {
  json root;
  root["objective"] = report.objective;
  root["served_count"] = report.served_count();
  root["violated"] = report.violated();
  root["cum_consumption"] = vector_to_json(report.cum_consumption);
  root["cum_profit"] = vector_to_json(report.cum_profit);
  json viols = json::array();
  for (const auto& [i, step] : report.violations)
    viols.push_back({{"resource", i}, {"step", step}});
  root["violations"] = std::move(viols);
  json decisions = json::array();
  for (const auto& [id, k] : report.decisions)
    decisions.push_back({{"type", id}, {"option", k}});
  root["decisions"] = std::move(decisions);
  return root.dump(2) + "\n";
}

std::string gap_verdict_json(const GapVerdict& verdict) {
  json root;
  root["answer"] = verdict.yes ? "YES" : "NO";
  root["samples"] = verdict.samples;
  root["sum_consumption"] = vector_to_json(verdict.sum_consumption);
  root["sum_profit"] = vector_to_json(verdict.sum_profit);
  root["packing_margin"] = verdict.packing_margin;
  root["covering_margin"] = verdict.covering_margin;
  root["warnings"] = verdict.warnings;
  return root.dump(2) + "\n";
}

std::string lp_solution_json(const LPSolution& sol) {
  json root;
  root["lambda"] = sol.lambda;
  root["allocation"] = sol.allocation;
  return root.dump(2) + "\n";
}

}  // namespace ra
