#pragma once

#include <cstdint>
#include <vector>

#include "idid/solver.hpp"

namespace idid {

struct SimulationReport {
  struct Run {
    int run = 0;
    std::uint64_t seed = 0;
    int true_model = 0;  // id of the sampled model of the other agent
    double reward = 0;
  };
  int runs = 0;
  std::uint64_t seed = 0;
  double mean_reward = 0;
  double std_dev = 0;  // sample standard deviation (0 for a single run)
  std::vector<Run> records;
};

// Executes the subject's policy against a sampled "true" other agent. Per
// run: sample the state from the joint belief's marginal, sample the other
// agent's model from the belief conditioned on that state, solve that model
// for its policy, then co-execute both policies for the policy's horizon,
// sampling transitions and both agents' observations. Level-0 true models are
// solved exactly; interactive ones use `true_model_config` (its horizon is
// overridden by the policy's). A foreign-state-space model keeps its own
// state chain, seeded from its belief and advanced by its own tables.
//
// Every run draws its randomness from a seed derived from `seed` and the run
// index, so the report is reproducible and runs are order-independent.
SimulationReport simulate(const PolicyTreePtr& policy, const Model& subject, int runs,
                          std::uint64_t seed, const SolverConfig& true_model_config);

}  // namespace idid
