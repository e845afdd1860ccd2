#pragma once

#include "ra/types.hpp"

namespace ra {

// Sample count T = ceil(C * gamma * m * ln(2n/delta) / eps^2) with n the
// total row count (packing + covering). Throws std::domain_error on
// degenerate inputs (gamma * m = 0, nonpositive delta/eps).
std::int64_t sample_size(double gamma, std::int64_t m, int n, double delta,
                         double eps, double constant = 4.0);

// Sampling feasibility check for a mixed packing-covering program:
// draw T requests uniformly with replacement from the m-element request
// multiset, route each through the potential-driven selector, and answer
// YES iff every packing sum stays under (T c_i / m)(1+eps) and every
// covering sum clears (T d_i / m)(1-eps). A feasible instance is accepted
// w.p. >= 1-delta; an instance infeasible even with multiplicative slack
// 3 eps (1+eps) is rejected w.p. >= 1-delta.
GapVerdict gap_check(const MixedPCInstance& inst, double eps, double delta,
                     std::uint64_t seed,
                     std::optional<std::int64_t> t_override = std::nullopt);

// Largest f such that the fractional relaxation can cover f*d_i on every
// row within capacities c_i (1+slack), demands deflated by (1-slack).
// Values below 1 certify infeasibility at that slack.
double slackened_cover_ratio(const MixedPCInstance& inst, double slack);

// Scale the demands of a feasible planted instance up until the LP
// relaxation is infeasible even with the given multiplicative slack, and
// certify that via the exact solver. slack must be >= 3 eps (1+eps).
// Throws std::runtime_error when certification is impossible (instance
// too large for the exact solver).
MixedPCInstance gen_no_instance(const MixedPCInstance& base, double slack,
                                double eps);

}  // namespace ra
