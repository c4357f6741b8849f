#pragma once

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "idid/model.hpp"

namespace idid {

struct PolicyTree;
using PolicyTreePtr = std::shared_ptr<const PolicyTree>;

// Complete finite-horizon policy tree node. `children` holds one subtree per
// observation (in observation order) and is empty at horizon 1. `opt_actions`
// is the full set of root actions whose value ties within kTieTol at the
// belief this node was solved for; `action` is its lowest index. Structural
// identity -- the notion the equivalence machinery works with -- covers
// action, opt_actions and children; `reachable` is diagnostic metadata for
// branches reached with probability zero and never influences identity.
struct PolicyTree {
  int action = 0;
  int horizon = 1;
  std::vector<int> opt_actions;
  std::vector<PolicyTreePtr> children;
  std::vector<bool> reachable;
  std::size_t node_hash = 0;
};

PolicyTreePtr make_leaf(int action, std::vector<int> opt_actions);
PolicyTreePtr make_node(int action, std::vector<int> opt_actions,
                        std::vector<PolicyTreePtr> children, std::vector<bool> reachable);

bool tree_equal(const PolicyTreePtr& a, const PolicyTreePtr& b);
int tree_node_count(const PolicyTreePtr& t);

// Expected total reward per starting state for executing the tree.
using AlphaVector = std::vector<double>;

// Exact Bayes update. Throws std::domain_error when the observation has zero
// probability under (b, action): the posterior is undefined.
Belief belief_update(const Frame& f, const Belief& b, int action, int obs);

// Pr(obs | b, action) for every observation.
std::vector<double> obs_likelihood(const Frame& f, const Belief& b, int action);

AlphaVector alpha_vector(const PolicyTreePtr& tree, const Frame& f);

// Memoizing exact solver for one level-0 frame. Beliefs are keyed rounded to
// 12 decimals, so equal-up-to-noise beliefs share one canonical solution.
// Trees are canonical: root action is the lowest optimal index and children
// are the canonical trees of the updated beliefs. Observation branches with
// zero probability get the canonical subtree of the uniform belief and are
// flagged unreachable.
class Level0Solver {
 public:
  explicit Level0Solver(FramePtr frame);

  struct Solution {
    PolicyTreePtr tree;
    double value = 0;
    std::vector<double> root_q;
  };

  const Solution& solve(const Belief& b, int horizon);
  ActionDistribution opt_action_set(const Belief& b, int horizon, double tie_tol = kTieTol);

  const Frame& frame() const { return *frame_; }
  FramePtr frame_ptr() const { return frame_; }

 private:
  FramePtr frame_;
  std::map<std::pair<std::vector<std::int64_t>, int>, Solution> memo_;
};

// One-shot conveniences over a fresh solver.
std::pair<PolicyTreePtr, double> solve_policy_tree(const Model& m, int horizon);
ActionDistribution opt_action_set(const Model& m, int horizon, double tie_tol = kTieTol);

}  // namespace idid
