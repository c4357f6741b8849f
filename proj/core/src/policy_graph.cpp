#include "idid/policy_graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace idid {

std::vector<int> PolicyGraph::layer_vertices(int layer) const {
  std::vector<int> out;
  for (const Vertex& v : vertices)
    if (v.layer == layer) out.push_back(v.id);
  return out;
}

GraphBuilder::GraphBuilder(int horizon, int num_obs, int num_actions) {
  g_.horizon = horizon;
  g_.num_obs = num_obs;
  g_.num_actions = num_actions;
}

int GraphBuilder::insert(const PolicyTreePtr& node) {
  if (auto it = seen_.find(node.get()); it != seen_.end()) return it->second;

  std::vector<int> key;
  key.reserve(3 + node->opt_actions.size() + node->children.size());
  key.push_back(g_.horizon - node->horizon);  // layer
  key.push_back(node->action);
  key.push_back(static_cast<int>(node->opt_actions.size()));
  for (int a : node->opt_actions) key.push_back(a);
  for (const auto& c : node->children) key.push_back(insert(c));

  // one comparison per key element touched while probing the index
  g_.comparisons += static_cast<long long>(key.size());
  auto [it, inserted] = index_.try_emplace(key, static_cast<int>(g_.vertices.size()));
  if (inserted) {
    PolicyGraph::Vertex v;
    v.id = it->second;
    v.layer = key[0];
    v.action = node->action;
    v.opt_actions = node->opt_actions;
    v.succ.assign(key.begin() + 3 + node->opt_actions.size(), key.end());
    g_.vertices.push_back(std::move(v));
  }
  seen_.emplace(node.get(), it->second);
  return it->second;
}

int GraphBuilder::add_tree(const PolicyTreePtr& tree) {
  if (tree->horizon != g_.horizon)
    throw std::invalid_argument("graph builder: tree horizon does not match graph horizon");
  return insert(tree);
}

int GraphBuilder::add_subtree(const PolicyTreePtr& tree) {
  if (tree->horizon < 1 || tree->horizon > g_.horizon)
    throw std::invalid_argument("graph builder: subtree deeper than the graph");
  return insert(tree);
}

void GraphBuilder::set_root(int model_id, int vertex_id) { g_.roots[model_id] = vertex_id; }

PolicyGraph GraphBuilder::take() { return std::move(g_); }

PolicyGraph merge_trees(const std::vector<PolicyTreePtr>& trees) {
  if (trees.empty()) throw std::invalid_argument("merge_trees: no trees");
  int num_obs = 0, num_actions = 0;
  for (const auto& t : trees) {
    num_obs = std::max(num_obs, static_cast<int>(t->children.size()));
    num_actions = std::max(num_actions, t->action + 1);
  }
  GraphBuilder b(trees.front()->horizon, num_obs, num_actions);
  for (std::size_t i = 0; i < trees.size(); ++i)
    b.set_root(static_cast<int>(i), b.add_tree(trees[i]));
  return b.take();
}

int transition(const PolicyGraph& g, int v, int obs) {
  const auto& vx = g.vertex(v);
  if (vx.succ.empty())
    throw std::domain_error("policy graph: vertex on the final layer has no successors");
  return vx.succ.at(obs);
}

namespace {
PolicyTreePtr expand_vertex(const PolicyGraph& g, int id, std::map<int, PolicyTreePtr>& memo) {
  if (auto it = memo.find(id); it != memo.end()) return it->second;
  const auto& v = g.vertex(id);
  PolicyTreePtr t;
  if (v.succ.empty()) {
    t = make_leaf(v.action, v.opt_actions);
  } else {
    std::vector<PolicyTreePtr> children;
    children.reserve(v.succ.size());
    for (int c : v.succ) children.push_back(expand_vertex(g, c, memo));
    t = make_node(v.action, v.opt_actions, std::move(children), {});
  }
  memo.emplace(id, t);
  return t;
}
}  // namespace

PolicyTreePtr expand_root(const PolicyGraph& g, int vertex_id) {
  std::map<int, PolicyTreePtr> memo;
  return expand_vertex(g, vertex_id, memo);
}

void compute_alphas(PolicyGraph& g, const Frame& f) {
  if (!f.is_level0())
    throw std::invalid_argument("compute_alphas: policy graphs carry level-0 behaviors");
  // children live on higher layers, so fill from the last layer backwards
  std::vector<int> order(g.vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return g.vertices[a].layer > g.vertices[b].layer;
  });
  for (int id : order) {
    auto& v = g.vertices[id];
    v.alpha.assign(f.num_states(), 0.0);
    for (int s = 0; s < f.num_states(); ++s) {
      double val = f.reward(s, v.action);
      if (!v.succ.empty()) {
        for (int s2 = 0; s2 < f.num_states(); ++s2) {
          const double t = f.transition(s, v.action, s2);
          if (t == 0.0) continue;
          for (int o = 0; o < f.num_obs(); ++o)
            val += t * f.observation(s2, v.action, o) * g.vertices[v.succ[o]].alpha[s2];
        }
      }
      v.alpha[s] = val;
    }
  }
}

int optimal_root(const PolicyGraph& g, const Belief& b) {
  int best = -1;
  double best_v = 0;
  for (const auto& v : g.vertices) {
    if (v.layer != 0) continue;
    if (v.alpha.empty())
      throw std::logic_error("optimal_root: alpha vectors not computed");
    double val = 0;
    for (int s = 0; s < b.size(); ++s) val += v.alpha[s] * b[s];
    if (best < 0 || val > best_v) {
      best = v.id;
      best_v = val;
    }
  }
  if (best < 0) throw std::domain_error("optimal_root: graph has no layer-0 vertices");
  return best;
}

}  // namespace idid
