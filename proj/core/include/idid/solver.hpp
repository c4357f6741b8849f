#pragma once

#include <optional>
#include <string>

#include "idid/domains.hpp"
#include "idid/equivalence.hpp"
#include "idid/policy_graph.hpp"

namespace idid {

enum class Method { exact, exact_be, dmu, ae, mc };

std::string method_name(Method m);
std::optional<Method> parse_method(const std::string& name);

struct SolverConfig {
  Method method = Method::exact;
  int horizon = 1;
  int K = 0;  // 0 means all models (dmu/ae/mc only)
  double epsilon = 0;
  std::uint64_t seed = 0;
  double tie_tol = kTieTol;
};

// What happened while unrolling the model node, step by step. Updates record
// each row written into a step's ModCPT; groupings record mass moved onto a
// representative when models collapse; adoptions record models that skipped
// solving by borrowing an epsilon-close neighbor's policy.
struct ExpansionTrace {
  struct Update {
    int step = 0;
    int source = 0;
    int action = 0;
    int obs = 0;
    int target = 0;
    bool created = false;
    double weight = 1.0;  // below 1 only for class-level stochastic rows
  };
  struct Grouping {
    int step = 0;
    int member = 0;
    int representative = 0;
  };
  struct Adoption {
    int model = 0;
    int donor = 0;
    double distance = 0;
  };

  std::vector<int> counts;  // models (or classes) in the node at each step
  std::vector<Update> updates;
  std::vector<Grouping> groupings;
  std::vector<Adoption> adoptions;
  std::vector<bool> ae_exact;  // one flag per expansion step; empty unless AE
  std::vector<std::string> notes;
  long long comparisons = 0;  // policy-graph merge work, when a graph is built
};

// Unrolled model node: the candidate set at every step, each candidate's
// action distribution, and the update rows linking consecutive steps.
// initial_map routes the subject's prior mass from input model ids onto
// spaces[0]; under AE the per-step entries are class representatives and ids
// are class indices.
struct Expansion {
  std::vector<ModelSpace> spaces;
  std::vector<std::map<int, ActionDistribution>> dists;
  std::vector<ModCPT> cpts;  // size horizon-1
  std::map<int, int> initial_map;
  std::vector<std::map<int, int>> vertex_of;  // model id -> graph vertex, when a graph exists
  std::optional<PolicyGraph> graph;
  std::vector<std::vector<AEClass>> ae_classes;  // members are base-space ids
  ExpansionTrace trace;
};

Expansion expand_exact(const ModelSpace& space, const FramePtr& subject_frame, int horizon,
                       bool minimize_be, const SolverConfig& config);
Expansion expand_dmu(const ModelSpace& space, const FramePtr& subject_frame, int horizon,
                     const SolverConfig& config);
Expansion expand_ae(const ModelSpace& space, const FramePtr& subject_frame, int horizon,
                    const SolverConfig& config, const InteractiveBelief& initial);
Expansion expand_mc(const ModelSpace& space, const FramePtr& subject_frame, int horizon,
                    const SolverConfig& config);

// One subject-side Bayes step over the joint (state, model) space: condition
// on the subject's action and observation, push every model through its
// update rows, and renormalize. Throws std::domain_error when the observation
// has zero probability.
InteractiveBelief interactive_belief_update(const InteractiveBelief& b, int a_own, int o_own,
                                            const Frame& subject, const ModelSpace& sources,
                                            const std::map<int, ActionDistribution>& dists,
                                            const ModCPT& tau, const std::vector<int>& targets);

// Pr(observation | b, a_own) for every subject observation.
std::vector<double> interactive_obs_likelihood(const InteractiveBelief& b, int a_own,
                                               const Frame& subject, const ModelSpace& sources,
                                               const std::map<int, ActionDistribution>& dists,
                                               const ModCPT& tau,
                                               const std::vector<int>& targets);

// Evolve the joint one step without conditioning on the subject's
// observation, averaging over the subject's actions uniformly. This is the
// prior the class-level update rows are weighted with.
InteractiveBelief push_prior(const InteractiveBelief& b, const Frame& subject,
                             const ModelSpace& sources,
                             const std::map<int, ActionDistribution>& dists, const ModCPT& tau,
                             const std::vector<int>& targets);

struct SolveResult {
  PolicyTreePtr tree;
  double value = 0;
  std::vector<double> root_q;
  Expansion expansion;
};

// Full lookahead/backup solve of a subject model at level >= 1. Models the
// other agent per config.method; other-agent models at level >= 1 are solved
// by recursing with the same configuration.
SolveResult solve_idid(const Model& subject, const SolverConfig& config);

// Worst-case loss in the modeled agent's predicted behavior from adopting an
// epsilon-close neighbor's policy: one step, and accumulated over the
// horizon.
double one_step_error_bound(double epsilon, int horizon, const Frame& frame_j);
double prediction_error_bound(double epsilon, int horizon, const Frame& frame_j);

// Subject model for a built-in domain. Level 1 nests the given space
// directly; level 2 wraps each belief of `others` into a level-1 model of the
// other agent, each of which nests a level-0 space built from the domain's
// default belief grid. Empty state_belief or model_prior mean uniform.
Model make_subject_model(const DomainSpec& spec, int level, const ModelSpace& others,
                         const std::vector<double>& state_belief = {},
                         const std::vector<double>& model_prior = {});

}  // namespace idid
