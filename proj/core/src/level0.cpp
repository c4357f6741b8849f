#include "idid/level0.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace idid {

namespace {

std::size_t hash_combine(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

std::size_t compute_hash(const PolicyTree& t) {
  std::size_t h = std::hash<int>{}(t.action);
  h = hash_combine(h, t.opt_actions.size());
  for (int a : t.opt_actions) h = hash_combine(h, std::hash<int>{}(a));
  for (const auto& c : t.children) h = hash_combine(h, c->node_hash);
  return h;
}

}  // namespace

PolicyTreePtr make_leaf(int action, std::vector<int> opt_actions) {
  auto n = std::make_shared<PolicyTree>();
  n->action = action;
  n->horizon = 1;
  n->opt_actions = std::move(opt_actions);
  n->node_hash = compute_hash(*n);
  return n;
}

PolicyTreePtr make_node(int action, std::vector<int> opt_actions,
                        std::vector<PolicyTreePtr> children, std::vector<bool> reachable) {
  if (children.empty()) return make_leaf(action, std::move(opt_actions));
  auto n = std::make_shared<PolicyTree>();
  n->action = action;
  n->horizon = children.front()->horizon + 1;
  n->opt_actions = std::move(opt_actions);
  n->children = std::move(children);
  n->reachable = reachable.empty() ? std::vector<bool>(n->children.size(), true)
                                   : std::move(reachable);
  n->node_hash = compute_hash(*n);
  return n;
}

bool tree_equal(const PolicyTreePtr& a, const PolicyTreePtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->node_hash != b->node_hash || a->action != b->action ||
      a->horizon != b->horizon || a->opt_actions != b->opt_actions ||
      a->children.size() != b->children.size())
    return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
    if (!tree_equal(a->children[i], b->children[i])) return false;
  return true;
}

int tree_node_count(const PolicyTreePtr& t) {
  int n = 1;
  for (const auto& c : t->children) n += tree_node_count(c);
  return n;
}

namespace {

void check_belief_size(const char* fn, const Frame& f, const Belief& b) {
  if (b.size() != f.num_states())
    throw std::invalid_argument(std::string(fn) + ": belief size " + std::to_string(b.size()) +
                                " does not match the frame's " +
                                std::to_string(f.num_states()) + " states");
}

}  // namespace

std::vector<double> obs_likelihood(const Frame& f, const Belief& b, int action) {
  if (!f.is_level0()) throw std::invalid_argument("obs_likelihood: frame is not level 0");
  check_belief_size("obs_likelihood", f, b);
  std::vector<double> like(f.num_obs(), 0.0);
  for (int s = 0; s < f.num_states(); ++s) {
    if (b[s] == 0.0) continue;
    for (int s2 = 0; s2 < f.num_states(); ++s2) {
      const double t = f.transition(s, action, s2);
      if (t == 0.0) continue;
      for (int o = 0; o < f.num_obs(); ++o)
        like[o] += b[s] * t * f.observation(s2, action, o);
    }
  }
  return like;
}

Belief belief_update(const Frame& f, const Belief& b, int action, int obs) {
  if (!f.is_level0()) throw std::invalid_argument("belief_update: frame is not level 0");
  check_belief_size("belief_update", f, b);
  std::vector<double> post(f.num_states(), 0.0);
  double z = 0;
  for (int s2 = 0; s2 < f.num_states(); ++s2) {
    double pred = 0;
    for (int s = 0; s < f.num_states(); ++s) pred += b[s] * f.transition(s, action, s2);
    post[s2] = pred * f.observation(s2, action, obs);
    z += post[s2];
  }
  if (z <= 0.0)
    throw std::domain_error("belief_update: observation has zero probability under this belief");
  for (double& v : post) v /= z;
  return Belief(std::move(post));
}

AlphaVector alpha_vector(const PolicyTreePtr& tree, const Frame& f) {
  if (!f.is_level0()) throw std::invalid_argument("alpha_vector: frame is not level 0");
  AlphaVector a(f.num_states(), 0.0);
  std::vector<AlphaVector> child_alpha;
  if (!tree->children.empty()) {
    child_alpha.reserve(tree->children.size());
    for (const auto& c : tree->children) child_alpha.push_back(alpha_vector(c, f));
  }
  for (int s = 0; s < f.num_states(); ++s) {
    double v = f.reward(s, tree->action);
    if (!tree->children.empty()) {
      for (int s2 = 0; s2 < f.num_states(); ++s2) {
        const double t = f.transition(s, tree->action, s2);
        if (t == 0.0) continue;
        for (int o = 0; o < f.num_obs(); ++o)
          v += t * f.observation(s2, tree->action, o) * child_alpha[o][s2];
      }
    }
    a[s] = v;
  }
  return a;
}

Level0Solver::Level0Solver(FramePtr frame) : frame_(std::move(frame)) {
  if (!frame_ || !frame_->is_level0())
    throw std::invalid_argument("level0 solver requires a level-0 frame");
}

const Level0Solver::Solution& Level0Solver::solve(const Belief& b, int horizon) {
  if (horizon < 1) throw std::invalid_argument("solve: horizon must be >= 1");
  check_belief_size("solve", *frame_, b);
  const auto key = std::make_pair(quantize_vector(b.probs()), horizon);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  const Frame& f = *frame_;
  const int na = f.num_actions(), no = f.num_obs();
  std::vector<double> q(na, 0.0);
  std::vector<std::vector<PolicyTreePtr>> children(na);
  std::vector<std::vector<bool>> reach(na);

  for (int a = 0; a < na; ++a) {
    for (int s = 0; s < f.num_states(); ++s) q[a] += b[s] * f.reward(s, a);
    if (horizon > 1) {
      children[a].resize(no);
      reach[a].assign(no, true);
      const auto like = obs_likelihood(f, b, a);
      for (int o = 0; o < no; ++o) {
        if (like[o] > 0.0) {
          const Solution& sub = solve(belief_update(f, b, a, o), horizon - 1);
          q[a] += like[o] * sub.value;
          children[a][o] = sub.tree;
        } else {
          // zero-probability branch: complete the tree from the uniform
          // belief and mark the branch as never reached
          children[a][o] = solve(Belief::uniform(f.num_states()), horizon - 1).tree;
          reach[a][o] = false;
        }
      }
    }
  }

  int best = 0;
  for (int a = 1; a < na; ++a)
    if (q[a] > q[best]) best = a;
  std::vector<int> opt;
  for (int a = 0; a < na; ++a)
    if (q[best] - q[a] <= kTieTol) opt.push_back(a);
  const int root = opt.front();

  Solution sol;
  sol.value = q[root];
  sol.root_q = q;
  sol.tree = horizon == 1 ? make_leaf(root, opt)
                          : make_node(root, opt, std::move(children[root]), std::move(reach[root]));
  return memo_.emplace(key, std::move(sol)).first->second;
}

ActionDistribution Level0Solver::opt_action_set(const Belief& b, int horizon, double tie_tol) {
  const Solution& sol = solve(b, horizon);
  double best = *std::max_element(sol.root_q.begin(), sol.root_q.end());
  std::vector<int> opt;
  for (int a = 0; a < static_cast<int>(sol.root_q.size()); ++a)
    if (best - sol.root_q[a] <= tie_tol) opt.push_back(a);
  return uniform_over(opt, static_cast<int>(sol.root_q.size()));
}

std::pair<PolicyTreePtr, double> solve_policy_tree(const Model& m, int horizon) {
  Level0Solver solver(m.frame);
  const auto& sol = solver.solve(m.belief, horizon);
  return {sol.tree, sol.value};
}

ActionDistribution opt_action_set(const Model& m, int horizon, double tie_tol) {
  Level0Solver solver(m.frame);
  return solver.opt_action_set(m.belief, horizon, tie_tol);
}

}  // namespace idid
