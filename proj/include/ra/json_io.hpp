#pragma once

#include "ra/gap.hpp"
#include "ra/lp.hpp"
#include "ra/types.hpp"

namespace ra {

// Parsed instance file: the allocation instance, its stochastic input,
// and (for packing-covering files) the covering demands.
struct InstanceFile {
  Instance instance;
  std::optional<StochasticInput> input;
  std::optional<VectorXd> demands;
};

// Strict parser for the instance schema; unknown keys are rejected with
// std::invalid_argument naming the key.
InstanceFile load_instance_json(const std::string& text);
InstanceFile load_instance_file(const std::string& path);

std::string save_instance_json(const InstanceFile& file);

// The packing-covering view of an instance file: demands required,
// multiplicities = round(m * p_j) from the i.i.d. input.
MixedPCInstance to_mixed_pc(const InstanceFile& file);

std::string run_report_json(const RunReport& report);
std::string gap_verdict_json(const GapVerdict& verdict);
std::string lp_solution_json(const LPSolution& sol);

}  // namespace ra
