#include "idid/model.hpp"

#include <cmath>
#include <stdexcept>

namespace idid {

Belief::Belief(std::vector<double> probs) : p_(std::move(probs)) {
  if (p_.empty()) throw std::invalid_argument("belief: empty probability vector");
  double sum = 0;
  for (double v : p_) {
    if (v < 0.0 || v > 1.0) throw std::invalid_argument("belief: entry outside [0,1]");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > kNormTol)
    throw std::invalid_argument("belief: probabilities sum to " + format_double(sum));
}

Belief Belief::uniform(int n) {
  return Belief(std::vector<double>(n, 1.0 / n));
}

double l1_distance(const Belief& a, const Belief& b) {
  if (a.size() != b.size()) throw std::invalid_argument("l1_distance: size mismatch");
  double d = 0;
  for (int i = 0; i < a.size(); ++i) d += std::fabs(a[i] - b[i]);
  return d;
}

const Model& ModelSpace::by_id(int id) const {
  for (const Model& m : models)
    if (m.id == id) return m;
  throw std::out_of_range("model space: no model with id " + std::to_string(id));
}

bool ModelSpace::has_id(int id) const {
  for (const Model& m : models)
    if (m.id == id) return true;
  return false;
}

InteractiveBelief::InteractiveBelief(int num_states, std::vector<int> model_ids,
                                     std::vector<double> joint)
    : num_states_(num_states), model_ids_(std::move(model_ids)), joint_(std::move(joint)) {
  if (num_states_ <= 0 || model_ids_.empty())
    throw std::invalid_argument("interactive belief: empty axis");
  if (joint_.size() != static_cast<std::size_t>(num_states_) * model_ids_.size())
    throw std::invalid_argument("interactive belief: joint table has wrong size");
  double sum = 0;
  for (double v : joint_) {
    if (v < 0.0 || v > 1.0) throw std::invalid_argument("interactive belief: entry outside [0,1]");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > kNormTol)
    throw std::invalid_argument("interactive belief: joint sums to " + format_double(sum));
}

std::vector<double> InteractiveBelief::state_marginal() const {
  std::vector<double> m(num_states_, 0.0);
  for (int s = 0; s < num_states_; ++s)
    for (int k = 0; k < num_models(); ++k) m[s] += p(s, k);
  return m;
}

std::vector<double> InteractiveBelief::model_marginal() const {
  std::vector<double> m(num_models(), 0.0);
  for (int s = 0; s < num_states_; ++s)
    for (int k = 0; k < num_models(); ++k) m[k] += p(s, k);
  return m;
}

int InteractiveBelief::column_of(int model_id) const {
  for (int k = 0; k < num_models(); ++k)
    if (model_ids_[k] == model_id) return k;
  throw std::out_of_range("interactive belief: no column for model id " + std::to_string(model_id));
}

std::map<int, double> conditional_model_dist(const InteractiveBelief& b, int s) {
  double ps = 0;
  for (int k = 0; k < b.num_models(); ++k) ps += b.p(s, k);
  if (ps <= 0.0)
    throw std::domain_error("conditional_model_dist: state has zero probability, conditional undefined");
  std::map<int, double> out;
  for (int k = 0; k < b.num_models(); ++k) out[b.model_ids()[k]] = b.p(s, k) / ps;
  return out;
}

ActionDistribution uniform_over(const std::vector<int>& opt_actions, int num_actions) {
  if (opt_actions.empty()) throw std::invalid_argument("uniform_over: empty optimal set");
  ActionDistribution d(num_actions, 0.0);
  for (int a : opt_actions) d[a] = 1.0 / opt_actions.size();
  return d;
}

bool dist_equal(const ActionDistribution& a, const ActionDistribution& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::fabs(a[i] - b[i]) > tol) return false;
  return true;
}

void ModCPT::set_deterministic(int source, int action, int obs, int target) {
  rows_[{source, action, obs}] = Row{{{target, 1.0}}};
}

void ModCPT::set_row(int source, int action, int obs,
                     std::vector<std::pair<int, double>> targets) {
  double sum = 0;
  for (const auto& [id, p] : targets) {
    if (p < -kNormTol || p > 1.0 + kNormTol)
      throw std::invalid_argument("mod cpt: row entry outside [0,1]");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kNormTol)
    throw std::invalid_argument("mod cpt: row sums to " + format_double(sum));
  rows_[{source, action, obs}] = Row{std::move(targets)};
}

const ModCPT::Row* ModCPT::find(int source, int action, int obs) const {
  auto it = rows_.find({source, action, obs});
  return it == rows_.end() ? nullptr : &it->second;
}

}  // namespace idid
