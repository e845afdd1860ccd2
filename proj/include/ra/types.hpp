#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ra {

using Eigen::VectorXd;

// One way of serving a request: sparse consumption over resources and
// sparse profit over profit types. The all-zero OptionVector is the
// explicit form of the "drop it" option, which is otherwise implicit.
struct OptionVector {
  std::map<int, double> consumption;  // resource id -> amount
  std::map<int, double> profit;       // profit type id -> amount
};

struct RequestType {
  int id = 0;
  std::vector<OptionVector> options;  // the implicit drop option is never stored
};

constexpr int kDropOption = -1;

struct Instance {
  int n_resources = 0;
  int n_profits = 0;
  VectorXd capacities;
  std::int64_t m = 0;  // number of online requests
  std::vector<RequestType> request_types;

  const RequestType* find_type(int id) const {
    for (const auto& t : request_types)
      if (t.id == id) return &t;
    return nullptr;
  }
};

// Distribution over request-type ids; mass may sum to < 1, the deficit
// is a null request that consumes and earns nothing.
using TypeDistribution = std::map<int, double>;

struct RunHistory;  // defined below with RunReport

// Adversary policy: given the step index and the public run history so
// far, produce the distribution for this step.
using AdversaryPolicy =
    std::function<TypeDistribution(std::int64_t step, const RunHistory&)>;

struct IIDInput {
  TypeDistribution probs;
};

struct ASISchedule {
  std::vector<TypeDistribution> per_step;  // empty when policy is set
  AdversaryPolicy policy;
};

using StochasticInput = std::variant<IIDInput, ASISchedule>;

// Offline instance with fractional per-type multiplicities, the input
// shape for LP solving. scale[j] multiplies every row contribution of
// request_types[j].
struct OfflineFractionalInstance {
  int n_resources = 0;
  int n_profits = 0;
  VectorXd capacities;
  std::vector<RequestType> request_types;
  std::vector<double> scale;
};

struct GammaReport {
  enum class Ratio { kNone, kConsumptionOverCapacity, kProfitOverBenchmark };
  struct Witness {
    int resource_or_profit = -1;  // i
    int type_index = -1;          // j (index into request_types)
    int option = -1;              // k
    Ratio ratio = Ratio::kNone;
  };
  double gamma = 0.0;
  Witness witness;
};

struct RunHistory {
  // (request type id, chosen option index or kDropOption), per step
  std::vector<std::pair<int, int>> decisions;
  VectorXd cum_consumption;
  VectorXd cum_profit;
};

struct RunReport {
  std::vector<std::pair<int, int>> decisions;
  VectorXd cum_consumption;
  VectorXd cum_profit;
  // (resource id, step) at which cumulative consumption first exceeded c_i
  std::vector<std::pair<int, std::int64_t>> violations;
  double objective = 0.0;  // min over profit types of cum_profit

  bool violated() const { return !violations.empty(); }
  std::int64_t served_count() const {
    std::int64_t c = 0;
    for (const auto& d : decisions) c += (d.second != kDropOption);
    return c;
  }
};

// Mixed packing-covering feasibility instance. Option consumption
// indexes the n_pack packing rows, option profit the n_cover covering
// rows. Requests are listed as distinct types with multiplicities
// summing to m.
struct MixedPCInstance {
  int n_pack = 0;
  int n_cover = 0;
  VectorXd capacities;  // c_i > 0
  VectorXd demands;     // d_i > 0
  std::int64_t m = 0;
  std::vector<RequestType> request_types;
  std::vector<std::int64_t> multiplicity;
};

struct GapVerdict {
  bool yes = false;
  std::int64_t samples = 0;  // T
  VectorXd sum_consumption;  // per packing row
  VectorXd sum_profit;       // per covering row
  // Smallest signed distance to the verdict thresholds; positive means
  // the YES condition held with room to spare.
  double packing_margin = 0.0;
  double covering_margin = 0.0;
  std::vector<std::string> warnings;
};

}  // namespace ra
