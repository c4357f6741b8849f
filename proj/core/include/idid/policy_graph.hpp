#pragma once

#include <map>
#include <vector>

#include "idid/level0.hpp"

namespace idid {

// Layered DAG of merged policy trees. Vertices on layer t carry the action
// (plus its tie set) prescribed with T-t steps to go; edges connect layer t
// to t+1 only, one successor per observation. Identical subtrees share one
// vertex, so a vertex stands for one distinct behavior.
struct PolicyGraph {
  struct Vertex {
    int id = 0;
    int layer = 0;
    int action = 0;
    std::vector<int> opt_actions;
    std::vector<int> succ;   // per observation; empty on the final layer
    AlphaVector alpha;       // filled by compute_alphas
  };

  int horizon = 0;
  int num_obs = 0;
  int num_actions = 0;
  std::vector<Vertex> vertices;
  std::map<int, int> roots;        // input model id -> layer-0 vertex
  long long comparisons = 0;       // node comparisons spent merging

  const Vertex& vertex(int id) const { return vertices.at(id); }
  std::vector<int> layer_vertices(int layer) const;
};

// Incremental merge machinery. Vertex ids are assigned bottom-up in input
// order, so merging the same trees always yields the same graph.
class GraphBuilder {
 public:
  GraphBuilder(int horizon, int num_obs, int num_actions);

  int add_tree(const PolicyTreePtr& tree);       // find-or-insert, returns root vertex
  // find-or-insert a shallower behavior; its layer follows from its depth
  int add_subtree(const PolicyTreePtr& tree);
  void set_root(int model_id, int vertex_id);
  const PolicyGraph& graph() const { return g_; }
  PolicyGraph take();

 private:
  int insert(const PolicyTreePtr& node);

  PolicyGraph g_;
  std::map<std::vector<int>, int> index_;              // structural key -> vertex
  std::map<const PolicyTree*, int> seen_;              // fast path for shared nodes
};

// Merge complete same-horizon trees; roots maps each tree's position in the
// input to its root vertex.
PolicyGraph merge_trees(const std::vector<PolicyTreePtr>& trees);

// Successor of v under an observation. Throws on final-layer vertices: no
// further step exists.
int transition(const PolicyGraph& g, int v, int obs);

// Rebuild the full policy tree hanging off a vertex.
PolicyTreePtr expand_root(const PolicyGraph& g, int vertex_id);

// Expected-value vectors for every vertex (level-0 frames).
void compute_alphas(PolicyGraph& g, const Frame& f);

// Best layer-0 vertex for a belief by alpha dot product, lowest index on
// ties. Requires compute_alphas to have run.
int optimal_root(const PolicyGraph& g, const Belief& b);

}  // namespace idid
