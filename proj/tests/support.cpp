#include "support.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace oracle {

using idid::Frame;

std::vector<double> tree_alpha(const Frame& f, const Tree& t) {
  const int S = f.num_states();
  std::vector<double> alpha(S, 0.0);
  std::vector<std::vector<double>> child_alpha;
  for (const Tree& c : t.children) child_alpha.push_back(tree_alpha(f, c));
  for (int s = 0; s < S; ++s) {
    double v = f.reward(s, t.action);
    if (!t.children.empty()) {
      for (int s2 = 0; s2 < S; ++s2) {
        const double tr = f.transition(s, t.action, s2);
        if (tr == 0) continue;
        for (int o = 0; o < f.num_obs(); ++o)
          v += tr * f.observation(s2, t.action, o) * child_alpha[o][s2];
      }
    }
    alpha[s] = v;
  }
  return alpha;
}

double tree_value(const Frame& f, const Tree& t, const std::vector<double>& b) {
  std::vector<double> alpha = tree_alpha(f, t);
  double v = 0;
  for (std::size_t s = 0; s < b.size(); ++s) v += alpha[s] * b[s];
  return v;
}

std::vector<Tree> enumerate_trees(int num_actions, int num_obs, int depth) {
  std::vector<Tree> out;
  if (depth == 1) {
    for (int a = 0; a < num_actions; ++a) out.push_back(Tree{a, {}});
    return out;
  }
  const std::vector<Tree> sub = enumerate_trees(num_actions, num_obs, depth - 1);
  const int n = static_cast<int>(sub.size());
  for (int a = 0; a < num_actions; ++a) {
    std::vector<int> pick(num_obs, 0);
    while (true) {
      Tree t;
      t.action = a;
      for (int o = 0; o < num_obs; ++o) t.children.push_back(sub[pick[o]]);
      out.push_back(std::move(t));
      int i = num_obs - 1;
      while (i >= 0 && pick[i] == n - 1) pick[i--] = 0;
      if (i < 0) break;
      ++pick[i];
    }
  }
  return out;
}

BestTree best_tree(const Frame& f, const std::vector<double>& b, int depth) {
  const std::vector<Tree> all = enumerate_trees(f.num_actions(), f.num_obs(), depth);
  double best = -1e300;
  for (const Tree& t : all) best = std::max(best, tree_value(f, t, b));
  for (const Tree& t : all) {
    const double v = tree_value(f, t, b);
    if (v >= best - 1e-9) return {t, v};
  }
  throw std::logic_error("unreachable");
}

Rollout rollout_tree(const Frame& f, const Tree& t, const std::vector<double>& b, int runs,
                     unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto sample = [&](const std::vector<double>& dist) {
    double u = unif(gen), acc = 0;
    int last = 0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      if (dist[i] <= 0) continue;
      acc += dist[i];
      last = static_cast<int>(i);
      if (u < acc) return last;
    }
    return last;
  };
  double sum = 0, sumsq = 0;
  for (int r = 0; r < runs; ++r) {
    int s = sample(b);
    const Tree* node = &t;
    double total = 0;
    while (true) {
      total += f.reward(s, node->action);
      std::vector<double> trow(f.num_states());
      for (int s2 = 0; s2 < f.num_states(); ++s2) trow[s2] = f.transition(s, node->action, s2);
      const int s2 = sample(trow);
      if (node->children.empty()) break;
      std::vector<double> orow(f.num_obs());
      for (int o = 0; o < f.num_obs(); ++o) orow[o] = f.observation(s2, node->action, o);
      node = &node->children[sample(orow)];
      s = s2;
    }
    sum += total;
    sumsq += total * total;
  }
  Rollout out;
  out.mean = sum / runs;
  const double var = (sumsq - sum * sum / runs) / (runs - 1);
  out.sem = std::sqrt(std::max(0.0, var) / runs);
  return out;
}

Tree shape_of(const idid::PolicyTreePtr& t) {
  Tree out;
  out.action = t->action;
  for (const auto& c : t->children) out.children.push_back(shape_of(c));
  return out;
}

bool same_shape(const Tree& a, const Tree& b) {
  if (a.action != b.action || a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_shape(a.children[i], b.children[i])) return false;
  return true;
}

namespace {

struct Layered {
  // per layer: flat list of nodes; node n's child under observation o sits at
  // index n * num_obs + o in the next layer (complete trees only)
  std::vector<std::vector<const Tree*>> layers;
};

Layered layer_tree(const Tree& root, int horizon) {
  Layered out;
  out.layers.push_back({&root});
  for (int t = 1; t < horizon; ++t) {
    std::vector<const Tree*> next;
    for (const Tree* n : out.layers.back()) {
      if (n->children.empty()) throw std::invalid_argument("opponent tree too shallow");
      for (const Tree& c : n->children) next.push_back(&c);
    }
    out.layers.push_back(std::move(next));
  }
  return out;
}

double crossed_value(const Frame& fi, const Frame& fj, const Layered& lay,
                     const std::vector<double>& bel, int t, int horizon, int* root_action) {
  const int S = fi.num_states();
  const int A = fi.num_actions();
  const int O = fi.num_obs();
  const int OJ = fj.num_obs();
  const auto& nodes = lay.layers[t];
  double best = -1e300;
  int best_a = 0;
  for (int ai = 0; ai < A; ++ai) {
    double q = 0;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      const int aj = nodes[v]->action;
      for (int s = 0; s < S; ++s) q += bel[s * nodes.size() + v] * fi.reward(s, ai, aj);
    }
    if (t + 1 < horizon) {
      const auto& next_nodes = lay.layers[t + 1];
      for (int oi = 0; oi < O; ++oi) {
        std::vector<double> nb(static_cast<std::size_t>(S) * next_nodes.size(), 0.0);
        double mass = 0;
        for (std::size_t v = 0; v < nodes.size(); ++v) {
          const int aj = nodes[v]->action;
          for (int s = 0; s < S; ++s) {
            const double w = bel[s * nodes.size() + v];
            if (w <= 0) continue;
            for (int s2 = 0; s2 < S; ++s2) {
              const double wt = w * fi.transition(s, ai, aj, s2) *
                                fi.observation(s2, ai, aj, oi);
              if (wt <= 0) continue;
              for (int oj = 0; oj < OJ; ++oj) {
                const double wo = wt * fj.observation(s2, aj, oj);
                if (wo <= 0) continue;
                nb[s2 * next_nodes.size() + (v * OJ + oj)] += wo;
                mass += wo;
              }
            }
          }
        }
        if (mass <= 0) continue;
        for (double& x : nb) x /= mass;
        q += mass * crossed_value(fi, fj, lay, nb, t + 1, horizon, nullptr);
      }
    }
    if (q > best + 1e-9) {
      best = q;
      best_a = ai;
    } else if (q > best) {
      best = q;  // keep the earlier action on a within-tolerance tie
    }
  }
  if (root_action) *root_action = best_a;
  return best;
}

}  // namespace

CrossedResult crossed_dp(const Frame& fi, const Frame& fj, const std::vector<double>& b0,
                         const Tree& jtree, int horizon) {
  Layered lay = layer_tree(jtree, horizon);
  std::vector<double> bel(b0);  // one opponent node at t=0 with certainty
  CrossedResult out;
  out.value = crossed_value(fi, fj, lay, bel, 0, horizon, &out.root_action);
  return out;
}

}  // namespace oracle
