#pragma once

#include "ra/types.hpp"

namespace ra {

struct LPSolution {
  double lambda = 0.0;
  // allocation[j][k] in [0,1], sum_k allocation[j][k] <= 1
  std::vector<std::vector<double>> allocation;
};

struct FeasibilityReport {
  bool feasible = true;
  double worst_slack = 0.0;  // signed; negative means violated
  std::string worst_constraint;
};

struct ExactSolverLimits {
  int max_rows = 20;        // max(n_resources, n_profits)
  int max_options = 2000;   // sum over types of K_j
};

// Maximin LP of an offline fractional instance:
//   max lambda
//   s.t. sum_j scale_j w_ij . x_j >= lambda     (each profit type i)
//        sum_j scale_j a_ij . x_j <= c_i        (each resource i)
//        sum_k x_jk <= 1, x >= 0
// Solved with a dense primal simplex; the all-slack basis is feasible, so
// no phase-1 is needed. Throws std::length_error past the size limits.
LPSolution solve_maximin_exact(const OfflineFractionalInstance& inst,
                               double tol = 1e-9,
                               const ExactSolverLimits& limits = {});

FeasibilityReport check_feasible(const OfflineFractionalInstance& inst,
                                 const LPSolution& sol, double tol);

struct SamplingInterval {
  double lo = 0.0;
  double hi = 0.0;
  int probes = 0;
};

// Estimate W_E of the expected instance through the sampling gap solver
// plus binary search on the objective value.
SamplingInterval solve_maximin_sampling(const Instance& inst,
                                        const StochasticInput& input,
                                        double eps, double delta,
                                        std::uint64_t seed);

// Realized request multiset of a stream, with unit scale weights; the
// exact solver on this gives W_R.
OfflineFractionalInstance realized_instance(const Instance& inst,
                                            const std::vector<int>& stream);

// General-purpose dense simplex for  max c.z  s.t.  A z <= b, z >= 0
// with b >= 0. Returns the optimal z.
std::vector<double> simplex_max(const Eigen::VectorXd& c,
                                const Eigen::MatrixXd& A,
                                const Eigen::VectorXd& b);

}  // namespace ra
