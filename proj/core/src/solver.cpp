#include "idid/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace idid {

std::string method_name(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::exact_be: return "exact-be";
    case Method::dmu: return "dmu";
    case Method::ae: return "ae";
    case Method::mc: return "mc";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& name) {
  if (name == "exact") return Method::exact;
  if (name == "exact-be") return Method::exact_be;
  if (name == "dmu") return Method::dmu;
  if (name == "ae") return Method::ae;
  if (name == "mc") return Method::mc;
  return std::nullopt;
}

namespace {

ActionDistribution dist_from_q(const std::vector<double>& q, double tie_tol) {
  int best = 0;
  for (std::size_t a = 1; a < q.size(); ++a)
    if (q[a] > q[best]) best = static_cast<int>(a);
  std::vector<int> opt;
  for (std::size_t a = 0; a < q.size(); ++a)
    if (q[best] - q[a] <= tie_tol) opt.push_back(static_cast<int>(a));
  return uniform_over(opt, static_cast<int>(q.size()));
}

// Observation factor of one modeled agent: Pr(o_j | s', a_j) for frames over
// the subject's state space (joint frames additionally see the subject's
// action), or a state-independent Pr(o_j | b_m, a_j) computed in the model's
// own frame when the state spaces differ.
class OjTable {
 public:
  OjTable(const Frame& subject, const ModelSpace& sources, int a_own) {
    for (const Model& m : sources.models) {
      Entry e;
      const Frame& fj = *m.frame;
      if (fj.num_states() == subject.num_states()) {
        e.mode = fj.is_level0() ? Mode::level0 : Mode::joint;
        e.frame = &fj;
        e.a_own = a_own;
      } else {
        if (!fj.is_level0())
          throw std::logic_error("nested joint frame over a foreign state space");
        e.mode = Mode::summary;
        e.obs = fj.num_obs();
        e.summary.assign(static_cast<std::size_t>(fj.num_actions()) * fj.num_obs(), 0.0);
        for (int aj = 0; aj < fj.num_actions(); ++aj) {
          for (int s2 = 0; s2 < fj.num_states(); ++s2) {
            double reach = 0;
            for (int s = 0; s < fj.num_states(); ++s)
              reach += m.belief[s] * fj.transition(s, aj, s2);
            if (reach <= 0) continue;
            for (int o = 0; o < fj.num_obs(); ++o)
              e.summary[aj * fj.num_obs() + o] += reach * fj.observation(s2, aj, o);
          }
        }
      }
      entries_[m.id] = std::move(e);
    }
  }

  double operator()(int model_id, int a_j, int o_j, int s2) const {
    const Entry& e = entries_.at(model_id);
    switch (e.mode) {
      case Mode::level0: return e.frame->observation(s2, a_j, o_j);
      case Mode::joint: return e.frame->observation(s2, a_j, e.a_own, o_j);
      case Mode::summary: return e.summary[a_j * e.obs + o_j];
    }
    return 0;
  }

 private:
  enum class Mode { level0, joint, summary };
  struct Entry {
    Mode mode = Mode::level0;
    const Frame* frame = nullptr;
    int a_own = 0;
    int obs = 0;
    std::vector<double> summary;
  };

  std::map<int, Entry> entries_;
};

}  // namespace

namespace {

// Unnormalized one-step pushforward of the joint; `mass` is the probability
// of the conditioned observation (or 1 when none is conditioned on).
struct JointStep {
  std::vector<double> joint;
  double mass = 0;
};

JointStep joint_step(const InteractiveBelief& b, int a_own, int o_own, const Frame& subject,
                     const ModelSpace& sources, const std::map<int, ActionDistribution>& dists,
                     const ModCPT& tau, const std::vector<int>& targets) {
  const int S = subject.num_states();
  if (b.num_states() != S) throw std::invalid_argument("joint/state-space size mismatch");
  std::map<int, int> tcol;
  for (std::size_t k = 0; k < targets.size(); ++k) tcol[targets[k]] = static_cast<int>(k);

  OjTable ojw(subject, sources, a_own);
  JointStep out{std::vector<double>(static_cast<std::size_t>(S) * targets.size(), 0.0), 0.0};

  for (int k = 0; k < b.num_models(); ++k) {
    const int mid = b.model_ids()[k];
    const ActionDistribution& d = dists.at(mid);
    const int num_oj = sources.by_id(mid).frame->num_obs();
    for (int aj = 0; aj < static_cast<int>(d.size()); ++aj) {
      if (d[aj] <= 0) continue;
      // update rows available for this (model, action)
      std::vector<const ModCPT::Row*> rows(num_oj, nullptr);
      bool any = false;
      for (int oj = 0; oj < num_oj; ++oj) {
        rows[oj] = tau.find(mid, aj, oj);
        any = any || rows[oj] != nullptr;
      }
      if (!any) continue;
      for (int s = 0; s < S; ++s) {
        const double w0 = b.p(s, k) * d[aj];
        if (w0 <= 0) continue;
        for (int s2 = 0; s2 < S; ++s2) {
          double wt = w0 * subject.transition(s, a_own, aj, s2);
          if (wt <= 0) continue;
          if (o_own >= 0) {
            wt *= subject.observation(s2, a_own, aj, o_own);
            if (wt <= 0) continue;
          }
          for (int oj = 0; oj < num_oj; ++oj) {
            if (!rows[oj]) continue;
            const double wo = wt * ojw(mid, aj, oj, s2);
            if (wo <= 0) continue;
            for (const auto& [tid, pr] : rows[oj]->targets)
              out.joint[s2 * targets.size() + tcol.at(tid)] += wo * pr;
          }
        }
      }
    }
  }
  for (double v : out.joint) out.mass += v;
  return out;
}

InteractiveBelief route_columns(const InteractiveBelief& b, const std::map<int, int>& onto,
                                const std::vector<int>& targets) {
  std::map<int, int> tcol;
  for (std::size_t k = 0; k < targets.size(); ++k) tcol[targets[k]] = static_cast<int>(k);
  const int S = b.num_states();
  std::vector<double> joint(static_cast<std::size_t>(S) * targets.size(), 0.0);
  for (int k = 0; k < b.num_models(); ++k) {
    int to = onto.at(b.model_ids()[k]);
    int col = tcol.at(to);
    for (int s = 0; s < S; ++s) joint[s * targets.size() + col] += b.p(s, k);
  }
  return InteractiveBelief(S, targets, std::move(joint));
}

std::vector<int> space_ids(const ModelSpace& s) {
  std::vector<int> ids;
  ids.reserve(s.models.size());
  for (const Model& m : s.models) ids.push_back(m.id);
  return ids;
}

void emit_updates(const ModCPT& tau, int step, ExpansionTrace& trace) {
  std::set<int> seen;
  for (const auto& [key, row] : tau.rows()) {
    for (const auto& [target, p] : row.targets) {
      bool created = seen.insert(target).second;
      trace.updates.push_back(
          {step, std::get<0>(key), std::get<1>(key), std::get<2>(key), target, created, p});
    }
  }
}

}  // namespace

InteractiveBelief interactive_belief_update(const InteractiveBelief& b, int a_own, int o_own,
                                            const Frame& subject, const ModelSpace& sources,
                                            const std::map<int, ActionDistribution>& dists,
                                            const ModCPT& tau, const std::vector<int>& targets) {
  JointStep js = joint_step(b, a_own, o_own, subject, sources, dists, tau, targets);
  if (js.mass <= kNormTol)
    throw std::domain_error("observation " + std::to_string(o_own) +
                            " has zero probability under action " + std::to_string(a_own));
  for (double& v : js.joint) v /= js.mass;
  return InteractiveBelief(b.num_states(), targets, std::move(js.joint));
}

std::vector<double> interactive_obs_likelihood(const InteractiveBelief& b, int a_own,
                                               const Frame& subject, const ModelSpace& sources,
                                               const std::map<int, ActionDistribution>& dists,
                                               const ModCPT& tau,
                                               const std::vector<int>& targets) {
  std::vector<double> likes(subject.num_obs(), 0.0);
  for (int o = 0; o < subject.num_obs(); ++o)
    likes[o] = joint_step(b, a_own, o, subject, sources, dists, tau, targets).mass;
  return likes;
}

InteractiveBelief push_prior(const InteractiveBelief& b, const Frame& subject,
                             const ModelSpace& sources,
                             const std::map<int, ActionDistribution>& dists, const ModCPT& tau,
                             const std::vector<int>& targets) {
  const int S = b.num_states();
  std::vector<double> joint(static_cast<std::size_t>(S) * targets.size(), 0.0);
  double mass = 0;
  const int A = subject.num_actions();
  for (int a = 0; a < A; ++a) {
    JointStep js = joint_step(b, a, -1, subject, sources, dists, tau, targets);
    for (std::size_t i = 0; i < joint.size(); ++i) joint[i] += js.joint[i] / A;
    mass += js.mass / A;
  }
  if (mass <= kNormTol) throw std::domain_error("prior evolves to zero mass");
  for (double& v : joint) v /= mass;
  return InteractiveBelief(S, targets, std::move(joint));
}

// ---------------------------------------------------------------------------
// Nested model operations: solving, observation likelihoods and belief
// updates for the other agent's models, recursing through levels. One-step
// expansion products for interactive models are cached per (space, horizon),
// which all models of a step share.

namespace {

class NestedOps {
 public:
  explicit NestedOps(const SolverConfig& config) : config_(config) {}

  std::pair<PolicyTreePtr, ActionDistribution> solve(const Model& m, int horizon) {
    if (m.level == 0) {
      Level0Solver& s = level0_for(m.frame);
      const auto& sol = s.solve(m.belief, horizon);
      return {sol.tree, s.opt_action_set(m.belief, horizon, config_.tie_tol)};
    }
    SolverConfig c = config_;
    c.horizon = horizon;
    SolveResult r = solve_idid(m, c);
    return {r.tree, dist_from_q(r.root_q, config_.tie_tol)};
  }

  std::vector<double> likelihood(const Model& m, int action, int horizon) {
    if (m.level == 0) return obs_likelihood(*m.frame, m.belief, action);
    const StepProducts& p = products(m.nested, horizon);
    return interactive_obs_likelihood(*m.joint, action, *m.frame, *m.nested, p.dists, p.tau,
                                      p.target_ids);
  }

  Model update(const Model& m, int action, int obs, int horizon) {
    if (m.level == 0) {
      Model out = m;
      out.belief = belief_update(*m.frame, m.belief, action, obs);
      out.id = -1;
      return out;
    }
    const StepProducts& p = products(m.nested, horizon);
    InteractiveBelief joint = interactive_belief_update(*m.joint, action, obs, *m.frame,
                                                        *m.nested, p.dists, p.tau, p.target_ids);
    Model out = m;
    out.belief = Belief(joint.state_marginal());
    out.joint = std::make_shared<InteractiveBelief>(std::move(joint));
    out.nested = p.targets;
    out.id = -1;
    return out;
  }

  std::vector<std::int64_t> dedupe_key(const Model& m) const {
    std::vector<std::int64_t> key;
    if (m.level == 0) {
      key.push_back(0);
      auto q = quantize_vector(m.belief.probs());
      key.insert(key.end(), q.begin(), q.end());
    } else {
      key.push_back(1);
      auto q = quantize_vector(m.joint->joint());
      key.insert(key.end(), q.begin(), q.end());
    }
    return key;
  }

 private:
  struct StepProducts {
    std::shared_ptr<const ModelSpace> targets;
    ModCPT tau;
    std::map<int, ActionDistribution> dists;
    std::vector<int> target_ids;
  };

  Level0Solver& level0_for(const FramePtr& f) {
    auto it = solvers_.find(f.get());
    if (it == solvers_.end()) it = solvers_.emplace(f.get(), Level0Solver(f)).first;
    return it->second;
  }

  // Exact one-step unrolling of a nested space with the given remaining
  // horizon: every member, every optimal action, every possible observation.
  const StepProducts& products(const std::shared_ptr<const ModelSpace>& space, int horizon) {
    auto key = std::make_pair(space.get(), horizon);
    auto it = products_.find(key);
    if (it != products_.end()) return it->second;

    StepProducts p;
    auto next = std::make_shared<ModelSpace>();
    next->owner = space->owner;
    std::map<std::vector<std::int64_t>, int> dedupe;
    int next_id = 0;
    for (const Model& m : space->models) {
      ActionDistribution d = solve(m, horizon).second;
      p.dists[m.id] = d;
      for (int a = 0; a < static_cast<int>(d.size()); ++a) {
        if (d[a] <= 0) continue;
        std::vector<double> likes = likelihood(m, a, horizon);
        for (int o = 0; o < static_cast<int>(likes.size()); ++o) {
          if (likes[o] <= kNormTol) continue;
          Model upd = update(m, a, o, horizon);
          auto [slot, inserted] = dedupe.try_emplace(dedupe_key(upd), next_id);
          if (inserted) {
            upd.id = next_id++;
            next->models.push_back(std::move(upd));
          }
          p.tau.set_deterministic(m.id, a, o, slot->second);
        }
      }
    }
    p.targets = next;
    p.target_ids = space_ids(*next);
    return products_.emplace(key, std::move(p)).first->second;
  }

  SolverConfig config_;
  std::map<const Frame*, Level0Solver> solvers_;
  std::map<std::pair<const ModelSpace*, int>, StepProducts> products_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Expansions

Expansion expand_exact(const ModelSpace& space, const FramePtr& subject_frame, int horizon,
                       bool minimize_be, const SolverConfig& config) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (space.models.empty()) throw std::invalid_argument("empty model space");
  NestedOps ops(config);
  Expansion exp;

  ModelSpace cur;
  cur.owner = space.owner;
  if (minimize_be) {
    std::map<int, PolicyTreePtr> trees;
    for (const Model& m : space.models) trees[m.id] = ops.solve(m, horizon).first;
    BEPartition part = group_be(space, trees);
    for (const auto& cls : part.classes) {
      cur.models.push_back(space.by_id(cls.front()));
      for (int id : cls) {
        exp.initial_map[id] = cls.front();
        if (id != cls.front()) exp.trace.groupings.push_back({0, id, cls.front()});
      }
    }
  } else {
    cur = space;
    for (const Model& m : space.models) exp.initial_map[m.id] = m.id;
  }
  std::map<int, ActionDistribution> d0;
  for (const Model& m : cur.models) d0[m.id] = ops.solve(m, horizon).second;
  exp.spaces.push_back(std::move(cur));
  exp.dists.push_back(std::move(d0));
  exp.trace.counts.push_back(exp.spaces[0].size());

  for (int t = 0; t + 1 < horizon; ++t) {
    const int h = horizon - t;
    const ModelSpace& st = exp.spaces[t];
    ModCPT tau;
    ModelSpace nxt;
    nxt.owner = st.owner;
    std::map<std::vector<std::int64_t>, int> dedupe;
    int next_id = 0;
    for (const Model& m : st.models) {
      const ActionDistribution& d = exp.dists[t].at(m.id);
      for (int aj = 0; aj < static_cast<int>(d.size()); ++aj) {
        if (d[aj] <= 0) continue;
        std::vector<double> likes = ops.likelihood(m, aj, h);
        for (int oj = 0; oj < static_cast<int>(likes.size()); ++oj) {
          if (likes[oj] <= kNormTol) continue;
          Model upd = ops.update(m, aj, oj, h);
          auto [slot, inserted] = dedupe.try_emplace(ops.dedupe_key(upd), next_id);
          if (inserted) {
            upd.id = next_id++;
            nxt.models.push_back(std::move(upd));
          }
          tau.set_deterministic(m.id, aj, oj, slot->second);
        }
      }
    }

    if (minimize_be) {
      std::map<int, PolicyTreePtr> trees;
      for (const Model& m : nxt.models) trees[m.id] = ops.solve(m, h - 1).first;
      BEPartition part = group_be(nxt, trees);
      if (part.classes.size() < nxt.models.size()) {
        // renumber representatives consecutively in creation order and route
        // every row through the renumbering
        std::map<int, int> final_id;
        ModelSpace reduced;
        reduced.owner = nxt.owner;
        for (std::size_t c = 0; c < part.classes.size(); ++c) {
          int rep = part.classes[c].front();
          Model keep = nxt.by_id(rep);
          keep.id = static_cast<int>(c);
          reduced.models.push_back(std::move(keep));
          for (int member : part.classes[c]) {
            final_id[member] = static_cast<int>(c);
            if (member != rep)
              exp.trace.groupings.push_back({t + 1, member, static_cast<int>(c)});
          }
        }
        ModCPT routed;
        for (const auto& [key, row] : tau.rows()) {
          std::map<int, double> onto;
          for (const auto& [target, p] : row.targets) onto[final_id.at(target)] += p;
          std::vector<std::pair<int, double>> targets(onto.begin(), onto.end());
          routed.set_row(std::get<0>(key), std::get<1>(key), std::get<2>(key),
                         std::move(targets));
        }
        tau = std::move(routed);
        nxt = std::move(reduced);
      }
    }

    std::map<int, ActionDistribution> dn;
    for (const Model& m : nxt.models) dn[m.id] = ops.solve(m, h - 1).second;
    emit_updates(tau, t, exp.trace);
    exp.cpts.push_back(std::move(tau));
    exp.spaces.push_back(std::move(nxt));
    exp.dists.push_back(std::move(dn));
    exp.trace.counts.push_back(exp.spaces.back().size());
  }
  return exp;
}

Expansion expand_dmu(const ModelSpace& space, const FramePtr& subject_frame, int horizon,
                     const SolverConfig& config) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (space.models.empty()) throw std::invalid_argument("empty model space");
  if (config.epsilon < 0) throw std::invalid_argument("epsilon must be nonnegative");
  if (config.K < 0) throw std::invalid_argument("K must be at least 1");
  NestedOps ops(config);
  Expansion exp;

  const int n = space.size();
  int K = config.K == 0 ? n : config.K;
  if (K > n) {
    exp.trace.notes.push_back("K=" + std::to_string(K) + " exceeds the " + std::to_string(n) +
                              " candidate models; clamped");
    K = n;
  }

  // seed selection: uniform without replacement
  Rng rng(config.seed);
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < K; ++i) {
    int j = i + static_cast<int>(rng.uniform_int(n - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> seed_pos(pool.begin(), pool.begin() + K);
  std::sort(seed_pos.begin(), seed_pos.end());

  std::map<int, PolicyTreePtr> trees;
  std::vector<int> seed_ids;
  std::vector<Belief> seed_beliefs;
  for (int pos : seed_pos) {
    const Model& m = space.models[pos];
    trees[m.id] = ops.solve(m, horizon).first;
    seed_ids.push_back(m.id);
    seed_beliefs.push_back(m.belief);
  }
  for (const Model& m : space.models) {
    if (trees.count(m.id)) continue;
    auto nb = epsilon_neighbor(m.belief, seed_beliefs, config.epsilon);
    if (nb) {
      trees[m.id] = trees.at(seed_ids[*nb]);
      exp.trace.adoptions.push_back(
          {m.id, seed_ids[*nb], l1_distance(m.belief, seed_beliefs[*nb])});
    } else {
      trees[m.id] = ops.solve(m, horizon).first;
    }
  }

  const int num_oj = space.models[0].frame->num_obs();
  const int num_aj = subject_frame->num_other_actions();
  GraphBuilder builder(horizon, num_oj, num_aj);
  for (const Model& m : space.models) builder.set_root(m.id, builder.add_tree(trees.at(m.id)));

  // initial node: one model per distinct behavior, lowest id representing
  std::map<int, int> rep_of_vertex;
  ModelSpace s0;
  s0.owner = space.owner;
  std::map<int, ActionDistribution> d0;
  std::vector<std::map<int, int>> vertex_of(1);
  for (const Model& m : space.models) {
    int v = builder.graph().roots.at(m.id);
    auto [it, first] = rep_of_vertex.try_emplace(v, m.id);
    exp.initial_map[m.id] = it->second;
    if (first) {
      s0.models.push_back(m);
      vertex_of[0][m.id] = v;
      d0[m.id] = uniform_over(builder.graph().vertex(v).opt_actions, num_aj);
    } else {
      exp.trace.groupings.push_back({0, m.id, it->second});
    }
  }
  exp.spaces.push_back(std::move(s0));
  exp.dists.push_back(std::move(d0));
  exp.trace.counts.push_back(exp.spaces[0].size());

  for (int t = 0; t + 1 < horizon; ++t) {
    const int h = horizon - t;
    const ModelSpace& st = exp.spaces[t];
    ModCPT tau;
    ModelSpace nxt;
    nxt.owner = st.owner;
    std::map<int, int> encountered;  // vertex -> created model id
    std::map<int, int> vtx_next;
    int next_id = 0;
    for (const Model& m : st.models) {
      const int v = vertex_of[t].at(m.id);
      const auto vtx_actions = builder.graph().vertex(v).opt_actions;
      const int committed = builder.graph().vertex(v).action;
      for (int aj : vtx_actions) {
        std::vector<double> likes = ops.likelihood(m, aj, h);
        for (int oj = 0; oj < static_cast<int>(likes.size()); ++oj) {
          if (likes[oj] <= kNormTol) continue;
          std::optional<Model> upd;
          int v2;
          if (aj == committed) {
            v2 = transition(builder.graph(), v, oj);
          } else {
            // a tied action has no edge in the merged graph; solve the
            // updated model and let the builder find or insert its behavior
            upd = ops.update(m, aj, oj, h);
            v2 = builder.add_subtree(ops.solve(*upd, h - 1).first);
          }
          auto it = encountered.find(v2);
          if (it == encountered.end()) {
            if (!upd) upd = ops.update(m, aj, oj, h);
            upd->id = next_id;
            encountered[v2] = next_id;
            vtx_next[next_id] = v2;
            nxt.models.push_back(std::move(*upd));
            tau.set_deterministic(m.id, aj, oj, next_id);
            ++next_id;
          } else {
            tau.set_deterministic(m.id, aj, oj, it->second);
          }
        }
      }
    }
    std::map<int, ActionDistribution> dn;
    for (const Model& m : nxt.models)
      dn[m.id] =
          uniform_over(builder.graph().vertex(vtx_next.at(m.id)).opt_actions, num_aj);
    emit_updates(tau, t, exp.trace);
    vertex_of.push_back(std::move(vtx_next));
    exp.cpts.push_back(std::move(tau));
    exp.spaces.push_back(std::move(nxt));
    exp.dists.push_back(std::move(dn));
    exp.trace.counts.push_back(exp.spaces.back().size());
  }

  exp.vertex_of = std::move(vertex_of);
  exp.graph = builder.take();
  exp.trace.comparisons = exp.graph->comparisons;
  return exp;
}

Expansion expand_ae(const ModelSpace& space, const FramePtr& subject_frame, int horizon,
                    const SolverConfig& config, const InteractiveBelief& initial) {
  Expansion base = expand_dmu(space, subject_frame, horizon, config);
  const int T = horizon;

  std::vector<std::vector<AEClass>> classes(T);
  for (int t = 0; t < T; ++t) classes[t] = ae_partition(base.spaces[t], base.dists[t], t);

  Expansion exp;
  exp.graph = std::move(base.graph);
  exp.trace.adoptions = std::move(base.trace.adoptions);
  exp.trace.notes = std::move(base.trace.notes);
  exp.trace.groupings = std::move(base.trace.groupings);
  exp.trace.comparisons = base.trace.comparisons;

  // class representatives become the node contents; ids are class indices
  std::map<int, int> class_of0;
  for (int t = 0; t < T; ++t) {
    ModelSpace cs;
    cs.owner = base.spaces[t].owner;
    std::map<int, ActionDistribution> cd;
    std::map<int, int> cv;
    for (std::size_t c = 0; c < classes[t].size(); ++c) {
      const int rep_id = classes[t][c].members.front();
      Model rep = base.spaces[t].by_id(rep_id);
      rep.id = static_cast<int>(c);
      cs.models.push_back(std::move(rep));
      cd[static_cast<int>(c)] = classes[t][c].action_dist;
      if (t < static_cast<int>(base.vertex_of.size()))
        cv[static_cast<int>(c)] = base.vertex_of[t].at(rep_id);
      for (int member : classes[t][c].members) {
        if (t == 0) class_of0[member] = static_cast<int>(c);
        if (member != rep_id)
          exp.trace.groupings.push_back({t, member, static_cast<int>(c)});
      }
    }
    exp.spaces.push_back(std::move(cs));
    exp.dists.push_back(std::move(cd));
    exp.vertex_of.push_back(std::move(cv));
    exp.trace.counts.push_back(static_cast<int>(classes[t].size()));
  }
  for (const auto& [input_id, rep] : base.initial_map)
    exp.initial_map[input_id] = class_of0.at(rep);

  // prior over the base space, evolved stepwise, weights the class rows
  InteractiveBelief prior =
      route_columns(initial, base.initial_map, space_ids(base.spaces[0]));
  for (int t = 0; t + 1 < T; ++t) {
    AECptResult r = ae_mod_cpt(classes[t], prior, base.cpts[t], classes[t + 1]);
    exp.trace.ae_exact.push_back(r.exact);
    if (!r.exact)
      exp.trace.notes.push_back("step " + std::to_string(t) +
                                " class rows averaged over states (divergence " +
                                format_double(r.max_divergence) + ")");
    emit_updates(r.cpt, t, exp.trace);
    exp.cpts.push_back(std::move(r.cpt));
    if (t + 2 < T)
      prior = push_prior(prior, *subject_frame, base.spaces[t], base.dists[t], base.cpts[t],
                         space_ids(base.spaces[t + 1]));
  }
  exp.ae_classes = std::move(classes);
  return exp;
}

Expansion expand_mc(const ModelSpace& space, const FramePtr& subject_frame, int horizon,
                    const SolverConfig& config) {
  if (space.models.empty()) throw std::invalid_argument("empty model space");
  const int n = space.size();
  int K = config.K == 0 ? n : config.K;
  std::vector<std::string> notes;
  if (K > n) {
    notes.push_back("K=" + std::to_string(K) + " exceeds the " + std::to_string(n) +
                    " candidate models; clamped");
    K = n;
  }
  ClusterResult cr = mc_cluster(space, K, config.seed);
  Expansion exp = expand_exact(cr.space, subject_frame, horizon, false, config);
  exp.trace.notes.insert(exp.trace.notes.begin(), notes.begin(), notes.end());
  if (cr.space.size() < n)
    exp.trace.notes.push_back("clustered " + std::to_string(n) + " models into " +
                              std::to_string(cr.space.size()));
  std::map<int, int> routed;
  for (const auto& [member, kept] : cr.mass_map) {
    routed[member] = exp.initial_map.at(kept);
    if (member != kept) exp.trace.groupings.push_back({0, member, kept});
  }
  exp.initial_map = std::move(routed);
  return exp;
}

// ---------------------------------------------------------------------------
// Subject-side lookahead/backup

namespace {

class SubjectDp {
 public:
  SubjectDp(const Frame& f, const Expansion& exp, int horizon, double tie_tol)
      : f_(f), exp_(exp), horizon_(horizon), tol_(tie_tol) {
    for (const ModelSpace& s : exp.spaces) target_ids_.push_back(space_ids(s));
  }

  struct Sol {
    PolicyTreePtr tree;
    double value = 0;
    std::vector<double> root_q;
  };

  const Sol& solve(const InteractiveBelief& b, int step) {
    auto key = std::make_pair(step, quantize_vector(b.joint()));
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    const int remaining = horizon_ - step;
    const int A = f_.num_actions();
    const int S = f_.num_states();
    const auto& dists = exp_.dists[step];

    std::vector<double> q(A, 0.0);
    for (int k = 0; k < b.num_models(); ++k) {
      const ActionDistribution& d = dists.at(b.model_ids()[k]);
      for (int s = 0; s < S; ++s) {
        const double w = b.p(s, k);
        if (w <= 0) continue;
        for (int ai = 0; ai < A; ++ai)
          for (int aj = 0; aj < static_cast<int>(d.size()); ++aj)
            if (d[aj] > 0) q[ai] += w * d[aj] * f_.reward(s, ai, aj);
      }
    }

    std::vector<std::vector<PolicyTreePtr>> children(A);
    std::vector<std::vector<bool>> reach(A);
    if (remaining > 1) {
      const ModelSpace& src = exp_.spaces[step];
      const ModCPT& tau = exp_.cpts[step];
      for (int ai = 0; ai < A; ++ai) {
        children[ai].resize(f_.num_obs());
        reach[ai].assign(f_.num_obs(), true);
        for (int oi = 0; oi < f_.num_obs(); ++oi) {
          JointStep js =
              joint_step(b, ai, oi, f_, src, dists, tau, target_ids_[step + 1]);
          if (js.mass <= kNormTol) {
            children[ai][oi] = solve(uniform_joint(step + 1), step + 1).tree;
            reach[ai][oi] = false;
            continue;
          }
          for (double& v : js.joint) v /= js.mass;
          const Sol& child = solve(
              InteractiveBelief(S, target_ids_[step + 1], std::move(js.joint)), step + 1);
          children[ai][oi] = child.tree;
          q[ai] += js.mass * child.value;
        }
      }
    }

    int best = 0;
    for (int a = 1; a < A; ++a)
      if (q[a] > q[best]) best = a;
    std::vector<int> opt;
    for (int a = 0; a < A; ++a)
      if (q[best] - q[a] <= tol_) opt.push_back(a);
    const int root = opt.front();

    Sol sol;
    sol.root_q = q;
    sol.value = q[root];
    if (remaining > 1)
      sol.tree = make_node(root, opt, std::move(children[root]), std::move(reach[root]));
    else
      sol.tree = make_leaf(root, opt);
    return memo_.emplace(std::move(key), std::move(sol)).first->second;
  }

 private:
  InteractiveBelief uniform_joint(int step) const {
    const int S = f_.num_states();
    const std::vector<int>& ids = target_ids_[step];
    std::vector<double> joint(static_cast<std::size_t>(S) * ids.size(),
                              1.0 / (S * ids.size()));
    return InteractiveBelief(S, ids, std::move(joint));
  }

  const Frame& f_;
  const Expansion& exp_;
  int horizon_;
  double tol_;
  std::vector<std::vector<int>> target_ids_;
  std::map<std::pair<int, std::vector<std::int64_t>>, Sol> memo_;
};

}  // namespace

SolveResult solve_idid(const Model& subject, const SolverConfig& config) {
  if (config.horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (subject.level < 1 || !subject.nested || !subject.joint)
    throw std::invalid_argument("subject model needs a nested model space and joint belief");

  Expansion exp;
  switch (config.method) {
    case Method::exact:
      exp = expand_exact(*subject.nested, subject.frame, config.horizon, false, config);
      break;
    case Method::exact_be:
      exp = expand_exact(*subject.nested, subject.frame, config.horizon, true, config);
      break;
    case Method::dmu:
      exp = expand_dmu(*subject.nested, subject.frame, config.horizon, config);
      break;
    case Method::ae:
      exp = expand_ae(*subject.nested, subject.frame, config.horizon, config, *subject.joint);
      break;
    case Method::mc:
      exp = expand_mc(*subject.nested, subject.frame, config.horizon, config);
      break;
  }

  InteractiveBelief b0 =
      route_columns(*subject.joint, exp.initial_map, space_ids(exp.spaces[0]));
  SubjectDp dp(*subject.frame, exp, config.horizon, config.tie_tol);
  const SubjectDp::Sol& sol = dp.solve(b0, 0);
  return {sol.tree, sol.value, sol.root_q, std::move(exp)};
}

double one_step_error_bound(double epsilon, int horizon, const Frame& frame_j) {
  if (epsilon < 0 || horizon < 1) throw std::invalid_argument("bad bound arguments");
  return (frame_j.max_reward() - frame_j.min_reward()) * horizon * epsilon;
}

double prediction_error_bound(double epsilon, int horizon, const Frame& frame_j) {
  if (epsilon < 0 || horizon < 1) throw std::invalid_argument("bad bound arguments");
  return (frame_j.max_reward() - frame_j.min_reward()) * horizon * horizon * epsilon;
}

Model make_subject_model(const DomainSpec& spec, int level, const ModelSpace& others,
                         const std::vector<double>& state_belief,
                         const std::vector<double>& model_prior) {
  if (level < 1 || level > 2) throw std::invalid_argument("level must be 1 or 2");
  if (others.models.empty()) throw std::invalid_argument("empty model space");
  const int S = spec.subject_frame->num_states();
  std::vector<double> sb = state_belief;
  if (sb.empty()) sb.assign(S, 1.0 / S);
  if (static_cast<int>(sb.size()) != S)
    throw std::invalid_argument("state belief has wrong dimension");

  auto nested = std::make_shared<ModelSpace>();
  nested->owner = AgentRole::other;
  if (level == 1) {
    *nested = others;
  } else {
    if (spec.other_frame->num_states() != S)
      throw std::invalid_argument("level 2 needs matching state spaces on both frames");
    FramePtr jframe = with_role(*spec.subject_frame, AgentRole::other);
    auto level0 = std::make_shared<ModelSpace>(default_model_space(spec, spec.default_beliefs));
    const int n0 = level0->size();
    int id = 0;
    for (const Model& om : others.models) {
      std::vector<double> joint(static_cast<std::size_t>(S) * n0);
      for (int s = 0; s < S; ++s)
        for (int k = 0; k < n0; ++k) joint[s * n0 + k] = om.belief[s] / n0;
      Model jm{om.belief, jframe, 1, id++, level0,
               std::make_shared<InteractiveBelief>(S, space_ids(*level0), std::move(joint))};
      nested->models.push_back(std::move(jm));
    }
  }

  std::vector<double> prior = model_prior;
  if (prior.empty()) prior.assign(nested->size(), 1.0 / nested->size());
  if (static_cast<int>(prior.size()) != nested->size())
    throw std::invalid_argument("model prior has wrong dimension");
  std::vector<double> joint(static_cast<std::size_t>(S) * nested->size());
  for (int s = 0; s < S; ++s)
    for (int k = 0; k < nested->size(); ++k) joint[s * nested->size() + k] = sb[s] * prior[k];

  return Model{Belief(sb), spec.subject_frame, level, 0, nested,
               std::make_shared<InteractiveBelief>(S, space_ids(*nested), std::move(joint))};
}

}  // namespace idid
