#pragma once

#include "ra/core.hpp"
#include "ra/lp.hpp"
#include "ra/types.hpp"

namespace ra {

// Per-step multiplicative potential schedule, kept in log domain.
// After the decision of step s (1-based) consumes X_i and earns Y_i:
//   log_phi_x_i += coef_x_i * X_i - drift_x(s)_i
//   log_phi_y_i += coef_y_i * Y_i - drift_y(s)_i
struct PotentialSchedule {
  VectorXd coef_x;  // log(1+eps_x) / (gamma c_i), or variant-specific
  VectorXd coef_y;  // log(1-eps_y) / normalizer (negative)
  std::function<VectorXd(std::int64_t)> drift_x;
  std::function<VectorXd(std::int64_t)> drift_y;
};

struct PotentialState {
  VectorXd log_phi_x;
  VectorXd log_phi_y;
  PotentialSchedule schedule;
  std::int64_t step = 0;     // steps already taken
  std::int64_t horizon = 0;  // steps this state is built for
};

// Exponentiated potentials after joint shift by the common max log;
// the shift preserves the argmin of the selection surrogate.
std::pair<VectorXd, VectorXd> potential_prices(const PotentialState& state);

// Selection and update halves of a step; online_step composes them.
// apply_update takes the served option, or nullptr for a drop (the
// per-step decay factors apply either way).
int select_option(const PotentialState& state, const RequestType& request);
void apply_update(PotentialState& state, const OptionVector* chosen);

// One step of the potential-driven engine: pick the surrogate-minimizing
// option, apply the multiplicative updates, and report the decision.
int online_step(PotentialState& state, const RequestType& request);

// Builders for the different algorithm variants. All take gamma (or an
// upper bound on it) and the error parameter eps.
PotentialState make_known_we_state(const Instance& inst, double w_e,
                                   double gamma, double eps);
PotentialState make_asi2_state(const Instance& inst,
                               const std::vector<double>& w_e_per_step,
                               double gamma, double eps);
PotentialState make_asi3_state(const Instance& inst,
                               const Eigen::MatrixXd& c_profile,
                               const Eigen::MatrixXd& opt_profile, double gamma,
                               double eps);
// Gap-solver potentials over packing rows c and covering rows d.
PotentialState make_gap_state(const VectorXd& capacities,
                              const VectorXd& demands, std::int64_t samples,
                              std::int64_t m, double gamma, double eps);
// Potentials of one stage of the staged algorithm: horizon t_r, stage
// error parameters ex/ey, benchmark estimate z, profit scale w_max.
PotentialState make_stage_state(const VectorXd& capacities, int n_profits,
                                std::int64_t t_r, std::int64_t m, double gamma,
                                double ex, double ey, double z, double w_max);

// Requests fed to a run, one per step; may depend on the public history
// (adaptive adversaries). Returns a type id or kNullRequest.
using RequestSource = std::function<int(std::int64_t step, const RunHistory&)>;

RequestSource fixed_stream_source(std::vector<int> stream);
RequestSource input_source(const Instance& inst, const StochasticInput& input,
                           std::uint64_t seed);

struct RunOptions {
  // When set, an option that would push any resource past its capacity is
  // replaced by the drop option (used for Adwords-style hard budgets).
  bool hard_cap = false;
};

// Drive a prepared potential state over the full horizon.
RunReport engine_run(const Instance& inst, PotentialState state,
                     const RequestSource& source, const RunOptions& opts = {});

// Serve each request with option k w.p. x_star[j][k] / (1+eps).
RunReport ho_conservative_run(const Instance& inst, const StochasticInput& input,
                              const std::vector<std::vector<double>>& x_star,
                              double eps, std::uint64_t seed);

RunReport known_we_run(const Instance& inst, const RequestSource& source,
                       double w_e, double gamma, double eps,
                       const RunOptions& opts = {});

RunReport asi2_run(const Instance& inst, const RequestSource& source,
                   const std::vector<double>& w_e_per_step, double gamma,
                   double eps, const RunOptions& opts = {});

RunReport asi3_run(const Instance& inst, const RequestSource& source,
                   const Eigen::MatrixXd& c_profile,
                   const Eigen::MatrixXd& opt_profile, double gamma, double eps,
                   const RunOptions& opts = {});

// Objective estimate for a stage instance; must be within factor alpha of
// optimal. The default wraps the exact LP solver (alpha = 1).
using OfflineOracle = std::function<double(const OfflineFractionalInstance&)>;
OfflineOracle exact_lp_oracle();

struct StagedOptions {
  RunOptions run;
  OfflineOracle oracle;          // defaults to exact_lp_oracle()
  double alpha = 1.0;            // approximation factor of the oracle
  std::optional<double> w_max;   // estimated from observed profits if unset
};

struct StageParams {
  int l = 0;                       // stage count
  std::int64_t t_observe = 0;      // t_{-1}
  std::vector<std::int64_t> t;     // per-stage lengths, r = 0..l-1
  double delta = 0.0;              // eps / 3l
  std::vector<double> eps_x;       // index r+1 holds eps^X_r, r from -1
  std::vector<double> eps_y;
  std::vector<double> z;           // per-stage benchmark estimates Z_r
};

StageParams make_stage_partition(std::int64_t m, double eps);

struct StagedReport {
  RunReport run;
  StageParams stages;
};

StagedReport staged_run(const Instance& inst, const RequestSource& source,
                        double gamma, double eps,
                        const StagedOptions& opts = {});

// Item prices that make a utility-maximizing buyer replicate the
// engine's choice; defined for a single profit type only.
VectorXd posted_prices(const PotentialState& state);

}  // namespace ra
