#pragma once

#include <map>
#include <memory>
#include <vector>

#include "idid/frame.hpp"

namespace idid {

// Probability vector over a frame's states. Validated on construction:
// entries in [0,1], sum within kNormTol of 1.
class Belief {
 public:
  explicit Belief(std::vector<double> probs);
  static Belief uniform(int n);

  int size() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[i]; }
  const std::vector<double>& probs() const { return p_; }

 private:
  std::vector<double> p_;
};

double l1_distance(const Belief& a, const Belief& b);

struct ModelSpace;
class InteractiveBelief;

// One candidate model of an agent: a belief paired with a frame. Models at
// level >= 1 additionally carry the space of models they ascribe to the
// other agent and the joint belief over (state, nested model); the flat
// belief field always equals that joint's state marginal.
struct Model {
  Belief belief;
  FramePtr frame;
  int level = 0;
  int id = 0;
  std::shared_ptr<const ModelSpace> nested;
  std::shared_ptr<const InteractiveBelief> joint;
};

// Ordered candidate set. Ids are unique within a space and ordering is
// stable; every piece of the solver iterates spaces in this order.
struct ModelSpace {
  AgentRole owner = AgentRole::other;
  std::vector<Model> models;

  int size() const { return static_cast<int>(models.size()); }
  const Model& by_id(int id) const;
  bool has_id(int id) const;
};

// Joint distribution over (state, model id). Columns follow model_ids order.
class InteractiveBelief {
 public:
  InteractiveBelief(int num_states, std::vector<int> model_ids, std::vector<double> joint);

  int num_states() const { return num_states_; }
  int num_models() const { return static_cast<int>(model_ids_.size()); }
  const std::vector<int>& model_ids() const { return model_ids_; }
  double p(int s, int k) const { return joint_[s * model_ids_.size() + k]; }
  const std::vector<double>& joint() const { return joint_; }

  std::vector<double> state_marginal() const;
  std::vector<double> model_marginal() const;
  int column_of(int model_id) const;

 private:
  int num_states_;
  std::vector<int> model_ids_;
  std::vector<double> joint_;
};

// Pr(model | state). Throws when the state has zero marginal probability:
// the conditional is undefined and callers must not paper over that.
std::map<int, double> conditional_model_dist(const InteractiveBelief& b, int s);

// Distribution over the other agent's actions, uniform over an optimal set
// when produced by the solver.
using ActionDistribution = std::vector<double>;

ActionDistribution uniform_over(const std::vector<int>& opt_actions, int num_actions);
bool dist_equal(const ActionDistribution& a, const ActionDistribution& b, double tol);

// Model-transition table: rows keyed by (source model id, other-agent action,
// other-agent observation), each row a distribution over successor ids.
// Rows written by the exact and discriminative expansions are deterministic;
// class-level rows may be fully stochastic.
class ModCPT {
 public:
  using Key = std::tuple<int, int, int>;
  struct Row {
    std::vector<std::pair<int, double>> targets;  // (model id, probability)
  };

  void set_deterministic(int source, int action, int obs, int target);
  void set_row(int source, int action, int obs, std::vector<std::pair<int, double>> targets);
  const Row* find(int source, int action, int obs) const;
  const std::map<Key, Row>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

 private:
  std::map<Key, Row> rows_;
};

}  // namespace idid
