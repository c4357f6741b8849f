#include "idid/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "idid/common.hpp"

namespace idid {

BEPartition group_be(const ModelSpace& space, const std::map<int, PolicyTreePtr>& trees) {
  std::vector<std::pair<int, PolicyTreePtr>> items;
  items.reserve(space.models.size());
  for (const auto& m : space.models) {
    auto it = trees.find(m.id);
    if (it == trees.end() || !it->second)
      throw std::invalid_argument("no policy tree for model " + std::to_string(m.id));
    items.emplace_back(m.id, it->second);
  }
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  BEPartition p;
  std::vector<PolicyTreePtr> class_tree;
  for (const auto& [id, tree] : items) {
    int found = -1;
    for (std::size_t c = 0; c < class_tree.size(); ++c) {
      if (class_tree[c]->node_hash == tree->node_hash && tree_equal(class_tree[c], tree)) {
        found = static_cast<int>(c);
        break;
      }
    }
    if (found < 0) {
      class_tree.push_back(tree);
      p.classes.push_back({id});
    } else {
      p.classes[found].push_back(id);
    }
  }
  for (std::size_t c = 0; c < p.classes.size(); ++c) {
    int rep = p.classes[c].front();
    p.representative[static_cast<int>(c)] = rep;
    for (int id : p.classes[c]) p.mass_map[id] = rep;
  }
  return p;
}

InteractiveBelief aggregate_belief_be(const InteractiveBelief& b, const BEPartition& p) {
  std::vector<int> reps;
  reps.reserve(p.representative.size());
  for (const auto& [c, rep] : p.representative) reps.push_back(rep);
  std::sort(reps.begin(), reps.end());

  std::map<int, int> rep_col;
  for (std::size_t k = 0; k < reps.size(); ++k) rep_col[reps[k]] = static_cast<int>(k);

  const int S = b.num_states();
  std::vector<double> joint(static_cast<std::size_t>(S) * reps.size(), 0.0);
  for (int k = 0; k < b.num_models(); ++k) {
    int id = b.model_ids()[k];
    auto it = p.mass_map.find(id);
    if (it == p.mass_map.end())
      throw std::invalid_argument("model " + std::to_string(id) + " missing from partition");
    int col = rep_col.at(it->second);
    for (int s = 0; s < S; ++s) joint[s * reps.size() + col] += b.p(s, k);
  }
  return InteractiveBelief(S, std::move(reps), std::move(joint));
}

std::vector<AEClass> ae_partition(const ModelSpace& space,
                                  const std::map<int, ActionDistribution>& action_dists,
                                  int step) {
  std::vector<int> ids;
  ids.reserve(space.models.size());
  for (const auto& m : space.models) ids.push_back(m.id);
  std::sort(ids.begin(), ids.end());

  std::vector<AEClass> classes;
  for (int id : ids) {
    auto it = action_dists.find(id);
    if (it == action_dists.end())
      throw std::invalid_argument("no action distribution for model " + std::to_string(id));
    const ActionDistribution& d = it->second;
    bool placed = false;
    for (auto& cls : classes) {
      if (dist_equal(cls.action_dist, d, kNormTol)) {
        cls.members.push_back(id);
        placed = true;
        break;
      }
    }
    if (!placed) classes.push_back(AEClass{{id}, d, step});
  }
  return classes;
}

namespace {

// Per-state class row over individual target models: member rows mixed by
// Pr(member | class, s), members without a row for (a, o) dropped from the
// weighting. Empty when the state supports no member at all for this pair.
std::optional<std::vector<double>> state_row(const AEClass& cls, const InteractiveBelief& prior,
                                             const ModCPT& base_tau, int s, int a, int o,
                                             const std::map<int, int>& tindex,
                                             std::size_t num_targets) {
  double total = 0;
  std::vector<std::pair<const ModCPT::Row*, double>> parts;
  for (int id : cls.members) {
    double w = prior.p(s, prior.column_of(id));
    if (w <= 0) continue;
    const ModCPT::Row* row = base_tau.find(id, a, o);
    if (!row) continue;
    parts.emplace_back(row, w);
    total += w;
  }
  if (parts.empty() || total <= 0) return std::nullopt;
  std::vector<double> out(num_targets, 0.0);
  for (const auto& [row, w] : parts) {
    for (const auto& [target, pr] : row->targets) {
      auto it = tindex.find(target);
      if (it == tindex.end())
        throw std::invalid_argument("update target " + std::to_string(target) +
                                    " missing from target classes");
      out[it->second] += (w / total) * pr;
    }
  }
  return out;
}

}  // namespace

AECptResult ae_mod_cpt(const std::vector<AEClass>& classes, const InteractiveBelief& prior,
                       const ModCPT& base_tau, const std::vector<AEClass>& target_classes) {
  // Dense index over individual target models; the state-invariance test runs
  // on these before any mass is folded into target classes, so splits that a
  // class projection would hide still flag the step approximate.
  std::vector<int> target_ids;
  std::map<int, int> tindex, tclass;
  for (std::size_t c = 0; c < target_classes.size(); ++c) {
    for (int id : target_classes[c].members) {
      tindex[id] = static_cast<int>(target_ids.size());
      target_ids.push_back(id);
      tclass[id] = static_cast<int>(c);
    }
  }

  AECptResult out;
  const int S = prior.num_states();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    const AEClass& cls = classes[c];
    double mass = 0;
    for (int id : cls.members) {
      int k = prior.column_of(id);
      for (int s = 0; s < S; ++s) mass += prior.p(s, k);
    }
    if (mass <= 0)
      throw std::domain_error("model class " + std::to_string(c) +
                              " carries no probability mass");

    // (action, observation) pairs any member has a row for.
    std::set<std::pair<int, int>> pairs;
    for (int id : cls.members) {
      for (const auto& [key, row] : base_tau.rows()) {
        if (std::get<0>(key) == id) pairs.insert({std::get<1>(key), std::get<2>(key)});
      }
    }

    for (const auto& [a, o] : pairs) {
      std::vector<std::vector<double>> rows;
      for (int s = 0; s < S; ++s) {
        auto row = state_row(cls, prior, base_tau, s, a, o, tindex, target_ids.size());
        if (row) rows.push_back(std::move(*row));
      }
      if (rows.empty()) continue;

      bool same = true;
      for (std::size_t r = 1; r < rows.size(); ++r) {
        for (std::size_t k = 0; k < rows[0].size(); ++k) {
          double d = std::abs(rows[r][k] - rows[0][k]);
          out.max_divergence = std::max(out.max_divergence, d);
          if (d > kNormTol) same = false;
        }
      }
      std::vector<double> model_row(target_ids.size(), 0.0);
      if (same) {
        model_row = rows[0];
      } else {
        out.exact = false;
        for (const auto& row : rows)
          for (std::size_t k = 0; k < row.size(); ++k) model_row[k] += row[k] / rows.size();
      }
      std::vector<double> class_row(target_classes.size(), 0.0);
      for (std::size_t k = 0; k < model_row.size(); ++k)
        class_row[tclass.at(target_ids[k])] += model_row[k];
      std::vector<std::pair<int, double>> targets;
      for (std::size_t k = 0; k < class_row.size(); ++k)
        if (class_row[k] > 0) targets.emplace_back(static_cast<int>(k), class_row[k]);
      out.cpt.set_row(static_cast<int>(c), a, o, std::move(targets));
    }
  }
  return out;
}

ClusterResult mc_cluster(const ModelSpace& space, int K, std::uint64_t seed) {
  if (K <= 0) throw std::invalid_argument("cluster count must be positive");
  const int n = space.size();

  ClusterResult out;
  out.space.owner = space.owner;
  if (n == 0) return out;

  if (K >= n) {
    out.space = space;
    for (const auto& m : space.models) {
      out.clusters.push_back({m.id});
      out.mass_map[m.id] = m.id;
    }
    return out;
  }

  std::vector<const Belief*> beliefs;
  beliefs.reserve(n);
  for (const auto& m : space.models) beliefs.push_back(&m.belief);
  const int dim = beliefs[0]->size();

  // Farthest-point seeding from a seeded uniform first pick.
  Rng rng(seed);
  std::vector<int> center_idx{rng.uniform_int(n)};
  while (static_cast<int>(center_idx.size()) < K) {
    int best = -1;
    double best_d = -1;
    for (int i = 0; i < n; ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (int c : center_idx) nearest = std::min(nearest, l1_distance(*beliefs[i], *beliefs[c]));
      if (nearest > best_d) {
        best_d = nearest;
        best = i;
      }
    }
    center_idx.push_back(best);
  }

  std::vector<std::vector<double>> centers;
  centers.reserve(K);
  for (int c : center_idx) centers.push_back(beliefs[c]->probs());

  std::vector<int> assign(n, -1);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < K; ++c) {
        double d = 0;
        for (int k = 0; k < dim; ++k) d += std::abs((*beliefs[i])[k] - centers[c][k]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (assign[i] != best) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    for (int c = 0; c < K; ++c) {
      std::vector<double> mean(dim, 0.0);
      int count = 0;
      for (int i = 0; i < n; ++i) {
        if (assign[i] != c) continue;
        for (int k = 0; k < dim; ++k) mean[k] += (*beliefs[i])[k];
        ++count;
      }
      if (count > 0) {
        for (double& v : mean) v /= count;
        centers[c] = std::move(mean);
      }
    }
  }

  // Retain the member closest to each cluster mean, lowest id on ties.
  struct Kept {
    int model_pos;
    std::vector<int> member_ids;
  };
  std::vector<Kept> kept;
  for (int c = 0; c < K; ++c) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    std::vector<int> members;
    for (int i = 0; i < n; ++i) {
      if (assign[i] != c) continue;
      members.push_back(space.models[i].id);
      double d = 0;
      for (int k = 0; k < dim; ++k) d += std::abs((*beliefs[i])[k] - centers[c][k]);
      if (d < best_d || (d == best_d && best >= 0 && space.models[i].id < space.models[best].id)) {
        best_d = d;
        best = i;
      }
    }
    if (best < 0) continue;
    std::sort(members.begin(), members.end());
    kept.push_back(Kept{best, std::move(members)});
  }
  std::sort(kept.begin(), kept.end(), [&](const Kept& a, const Kept& b) {
    return space.models[a.model_pos].id < space.models[b.model_pos].id;
  });

  for (const auto& k : kept) {
    const Model& m = space.models[k.model_pos];
    out.space.models.push_back(m);
    out.clusters.push_back(k.member_ids);
    for (int id : k.member_ids) out.mass_map[id] = m.id;
  }
  return out;
}

std::optional<int> epsilon_neighbor(const Belief& b, const std::vector<Belief>& solved,
                                    double eps) {
  std::optional<int> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < solved.size(); ++i) {
    double d = l1_distance(b, solved[i]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  if (best && best_d <= eps) return best;
  return std::nullopt;
}

}  // namespace idid
