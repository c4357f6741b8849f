// Acceptance gate: exercises the headline guarantees end to end and prints
// one verdict line per check. Exits nonzero when anything fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "idid/domains.hpp"
#include "idid/equivalence.hpp"
#include "idid/io.hpp"
#include "idid/solver.hpp"
#include "support.hpp"

using namespace idid;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point start) {
  return std::chrono::duration<double>(clock_type::now() - start).count();
}

SolverConfig config_for(Method m, int horizon, std::uint64_t seed = 0, int K = 0,
                        double epsilon = 0) {
  SolverConfig c;
  c.method = m;
  c.horizon = horizon;
  c.seed = seed;
  c.K = K;
  c.epsilon = epsilon;
  return c;
}

std::vector<int> space_ids(const ModelSpace& s) {
  std::vector<int> ids;
  for (const Model& m : s.models) ids.push_back(m.id);
  return ids;
}

InteractiveBelief uniform_joint(int num_states, const ModelSpace& s) {
  std::vector<int> ids = space_ids(s);
  std::vector<double> j(static_cast<std::size_t>(num_states) * ids.size(),
                        1.0 / (num_states * static_cast<double>(ids.size())));
  return InteractiveBelief(num_states, ids, j);
}

PolicyTreePtr random_tree(Rng& rng, int num_actions, int num_obs, int depth) {
  int a = rng.uniform_int(num_actions);
  if (depth == 1) return make_leaf(a, {a});
  std::vector<PolicyTreePtr> children;
  std::vector<bool> reach;
  for (int o = 0; o < num_obs; ++o) {
    children.push_back(random_tree(rng, num_actions, num_obs, depth - 1));
    reach.push_back(true);
  }
  return make_node(a, {a}, std::move(children), std::move(reach));
}

void fail(std::string& detail, const std::string& msg) {
  if (detail.empty()) detail = msg;
}

// ---------------------------------------------------------------------------
// 1. grouping behaviorally identical models never changes the solution

bool check_lossless_grouping(std::string& detail) {
  const auto start = clock_type::now();
  for (const DomainSpec& spec : {build_tiger(), build_machine_maintenance()}) {
    ModelSpace m0 = default_model_space(spec, 6, 13);
    for (int T : {2, 3, 4}) {
      Model subject = make_subject_model(spec, 1, m0);
      SolveResult exact = solve_idid(subject, config_for(Method::exact, T));
      SolveResult grouped = solve_idid(subject, config_for(Method::exact_be, T));
      if (std::abs(exact.value - grouped.value) > 1e-9) {
        fail(detail, spec.name + " T=" + std::to_string(T) + ": values differ by " +
                         format_double(std::abs(exact.value - grouped.value)));
        return false;
      }
      if (!tree_equal(exact.tree, grouped.tree)) {
        fail(detail, spec.name + " T=" + std::to_string(T) + ": policy trees differ");
        return false;
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 60.0) {
    fail(detail, "took " + format_double(elapsed) + " s, budget is 60");
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 2. discriminative update with a full seed pool is minimal and lossless

bool check_dmu_exact_mode(std::string& detail) {
  for (const DomainSpec& spec : {build_tiger(), build_machine_maintenance()}) {
    ModelSpace m0 = default_model_space(spec, 6, 13);
    Level0Solver nested(spec.other_frame);
    for (int T : {2, 3, 4}) {
      Model subject = make_subject_model(spec, 1, m0);
      SolveResult dmu = solve_idid(
          subject, config_for(Method::dmu, T, 0, static_cast<int>(m0.size()), 0.0));
      SolveResult grouped = solve_idid(subject, config_for(Method::exact_be, T));
      if (dmu.value != grouped.value || !tree_equal(dmu.tree, grouped.tree)) {
        fail(detail, spec.name + " T=" + std::to_string(T) + ": output drifted");
        return false;
      }
      if (!dmu.expansion.trace.adoptions.empty()) {
        fail(detail, spec.name + ": adoptions recorded at epsilon 0");
        return false;
      }
      for (std::size_t t = 0; t < dmu.expansion.spaces.size(); ++t) {
        const ModelSpace& space = dmu.expansion.spaces[t];
        std::vector<PolicyTreePtr> trees;
        for (const Model& m : space.models)
          trees.push_back(nested.solve(m.belief, T - static_cast<int>(t)).tree);
        for (std::size_t a = 0; a < trees.size(); ++a)
          for (std::size_t b = a + 1; b < trees.size(); ++b)
            if (tree_equal(trees[a], trees[b])) {
              fail(detail, spec.name + " T=" + std::to_string(T) + " step " +
                               std::to_string(t) + ": two kept models share one tree");
              return false;
            }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 3. the level-0 solver against exhaustive tree enumeration

bool check_level0_oracle(std::string& detail) {
  const auto start = clock_type::now();
  struct Case {
    FramePtr frame;
    std::vector<std::vector<double>> beliefs;
  };
  std::vector<Case> cases;
  cases.push_back({build_tiger().other_frame,
                   {{0.05, 0.95},
                    {0.2, 0.8},
                    {0.35, 0.65},
                    {0.65, 0.35},
                    {0.8, 0.2},
                    {0.95, 0.05}}});
  cases.push_back({build_machine_maintenance().other_frame,
                   {{0.8, 0.15, 0.05},
                    {0.1, 0.2, 0.7},
                    {0.3, 0.4, 0.3},
                    {0.6, 0.3, 0.1},
                    {0.05, 0.9, 0.05},
                    {0.2, 0.5, 0.3}}});
  for (const Case& c : cases) {
    Level0Solver solver(c.frame);
    for (const auto& probs : c.beliefs) {
      Belief b(probs);
      for (int T = 1; T <= 3; ++T) {
        const auto& sol = solver.solve(b, T);
        oracle::BestTree best = oracle::best_tree(*c.frame, probs, T);
        if (std::abs(sol.value - best.value) > 1e-9) {
          fail(detail, "value gap " + format_double(std::abs(sol.value - best.value)));
          return false;
        }
        if (!oracle::same_shape(oracle::shape_of(sol.tree), best.tree)) {
          fail(detail, "canonical trees differ at T=" + std::to_string(T));
          return false;
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  if (elapsed >= 10.0) {
    fail(detail, "enumeration took " + format_double(elapsed) + " s, budget is 10");
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 4. growth bounds on per-step model and class counts

bool check_growth_bounds(std::string& detail) {
  auto tiger = build_tiger();
  // the default space holds two behaviorally identical models (0.01 and 0.05)
  ModelSpace m0 = default_model_space(tiger, tiger.default_beliefs);
  Model subject = make_subject_model(tiger, 1, m0);
  const int T = 3;
  std::vector<int> exact =
      solve_idid(subject, config_for(Method::exact, T)).expansion.trace.counts;
  std::vector<int> grouped =
      solve_idid(subject, config_for(Method::exact_be, T)).expansion.trace.counts;
  std::vector<int> classes =
      solve_idid(subject, config_for(Method::ae, T)).expansion.trace.counts;
  if (exact.size() != T || grouped.size() != T || classes.size() != T) {
    fail(detail, "trace counts missing steps");
    return false;
  }
  const int branch = tiger.other_frame->num_actions() * tiger.other_frame->num_obs();
  double cap = static_cast<double>(m0.size());
  bool strict = false;
  for (int t = 0; t < T; ++t) {
    if (exact[t] > cap) {
      fail(detail, "exact count " + std::to_string(exact[t]) + " above the step bound");
      return false;
    }
    if (classes[t] > tiger.other_frame->num_actions()) {
      fail(detail, "class count above the action count");
      return false;
    }
    if (grouped[t] > exact[t]) {
      fail(detail, "grouped count above the exact count");
      return false;
    }
    if (grouped[t] < exact[t]) strict = true;
    cap *= branch;
  }
  if (!strict) {
    fail(detail, "grouping never shrank a space holding identical models");
    return false;
  }

  auto machine = build_machine_maintenance();
  ModelSpace seeded = default_model_space(machine, 6, 13);
  Model msubject = make_subject_model(machine, 1, seeded);
  std::vector<int> mexact =
      solve_idid(msubject, config_for(Method::exact, T)).expansion.trace.counts;
  const int mbranch = machine.other_frame->num_actions() * machine.other_frame->num_obs();
  cap = static_cast<double>(seeded.size());
  for (int t = 0; t < T; ++t) {
    if (mexact[t] > cap) {
      fail(detail, "machine exact count above the step bound");
      return false;
    }
    cap *= mbranch;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 5. merge/expand roundtrip and the merge comparison budget

bool check_merge_roundtrip(std::string& detail) {
  const int num_actions = 3, num_obs = 2;
  for (int i = 0; i < 100; ++i) {
    Rng rng(Rng::derive(777, static_cast<std::uint64_t>(i)));
    const int depth = 1 + i % 4;
    const int count = 1 + rng.uniform_int(6);
    std::vector<PolicyTreePtr> trees;
    for (int k = 0; k < count; ++k)
      trees.push_back(random_tree(rng, num_actions, num_obs, depth));
    PolicyGraph g = merge_trees(trees);
    for (int k = 0; k < count; ++k)
      if (!tree_equal(expand_root(g, g.roots.at(k)), trees[k])) {
        fail(detail, "set " + std::to_string(i) + " tree " + std::to_string(k) +
                         " did not survive the roundtrip");
        return false;
      }
  }

  // adversarial merge: many distinct trees, comparisons within the budget
  const int T = 4, M = 100;
  Rng rng(Rng::derive(778, 0));
  std::vector<PolicyTreePtr> distinct;
  while (static_cast<int>(distinct.size()) < M) {
    PolicyTreePtr t = random_tree(rng, num_actions, num_obs, T);
    bool dup = false;
    for (const auto& have : distinct)
      if (tree_equal(have, t)) {
        dup = true;
        break;
      }
    if (!dup) distinct.push_back(std::move(t));
  }
  PolicyGraph g = merge_trees(distinct);
  const double budget = std::pow(std::pow(num_obs, T - 1), 2) * M * M;
  if (static_cast<double>(g.comparisons) > budget) {
    fail(detail, "merge spent " + std::to_string(g.comparisons) +
                     " comparisons, budget " + format_double(budget));
    return false;
  }
  for (int k = 0; k < M; ++k)
    if (!tree_equal(expand_root(g, g.roots.at(k)), distinct[k])) {
      fail(detail, "adversarial tree " + std::to_string(k) + " mangled");
      return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// 6. the worked update-skipping example, replayed from the trace

bool check_update_skipping(std::string& detail) {
  auto tiger = build_tiger();
  ModelSpace m0 = default_model_space(
      tiger, {{0.01, 0.99}, {0.5, 0.5}, {0.05, 0.95}});
  SolverConfig c = config_for(Method::dmu, 3, 0, static_cast<int>(m0.size()), 0.0);
  Expansion e = expand_dmu(m0, tiger.subject_frame, 3, c);

  // the 0.05 model collapses onto the 0.01 model before any update
  if (e.initial_map.at(0) != e.initial_map.at(2) ||
      e.initial_map.at(0) == e.initial_map.at(1)) {
    fail(detail, "initial grouping did not pair the two equivalent models");
    return false;
  }
  const int low = e.initial_map.at(0);   // 0.01 representative
  const int mid = e.initial_map.at(1);   // 0.5 model

  const ExpansionTrace::Update* fresh = nullptr;
  const ExpansionTrace::Update* rerouted = nullptr;
  for (const auto& u : e.trace.updates) {
    if (u.step != 0) continue;
    if (u.source == low && u.action == 0 && u.obs == 0) fresh = &u;
    if (u.source == mid && u.action == 0 && u.obs == 1) rerouted = &u;
  }
  if (!fresh || !rerouted) {
    fail(detail, "expected update rows missing from the trace");
    return false;
  }
  if (!fresh->created) {
    fail(detail, "the listen/growl-left update of the low model was not fresh");
    return false;
  }
  if (rerouted->created) {
    fail(detail, "the middle model's listen/growl-right update spawned a new model");
    return false;
  }
  if (rerouted->target != fresh->target) {
    fail(detail, "skipped mass was not routed to the equivalent updated model");
    return false;
  }
  if (rerouted->weight <= 0) {
    fail(detail, "the rerouted row carries no mass");
    return false;
  }
  // the posterior the skipped update would have produced is absent at step 1
  for (const Model& m : e.spaces[1].models)
    if (std::abs(m.belief[0] - 0.15) < 1e-6) {
      fail(detail, "the skipped posterior still appears in the next step");
      return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// 7. class-level update rows: exact when member weights are state-invariant

bool check_class_row_exactness(std::string& detail) {
  auto tiger = build_tiger();
  ModelSpace pair = default_model_space(tiger, {{0.3, 0.7}, {0.7, 0.3}});
  SolverConfig c = config_for(Method::exact, 2);
  Expansion e = expand_exact(pair, tiger.subject_frame, 2, false, c);
  auto classes0 = ae_partition(e.spaces[0], e.dists[0], 0);
  auto classes1 = ae_partition(e.spaces[1], e.dists[1], 1);
  if (classes0.size() != 1) {
    fail(detail, "setup drifted: both seed models should share one action class");
    return false;
  }

  // state-independent membership weights: rows are exact
  std::vector<int> ids0 = space_ids(e.spaces[0]);
  InteractiveBelief flat(2, ids0, {0.25, 0.25, 0.25, 0.25});
  AECptResult exact_case = ae_mod_cpt(classes0, flat, e.cpts[0], classes1);
  if (!exact_case.exact || exact_case.max_divergence > 1e-12) {
    fail(detail, "state-invariant weights were not recognized as exact");
    return false;
  }

  // class dynamics agree with the member-level joint pushed one step
  InteractiveBelief member_pushed = push_prior(flat, *tiger.subject_frame, e.spaces[0],
                                               e.dists[0], e.cpts[0], space_ids(e.spaces[1]));
  ModelSpace class_space;
  class_space.owner = e.spaces[0].owner;
  std::map<int, ActionDistribution> class_dists;
  for (std::size_t k = 0; k < classes0.size(); ++k) {
    Model rep = e.spaces[0].by_id(classes0[k].members.front());
    rep.id = static_cast<int>(k);
    class_space.models.push_back(std::move(rep));
    class_dists[static_cast<int>(k)] = classes0[k].action_dist;
  }
  std::vector<int> class_targets;
  for (std::size_t k = 0; k < classes1.size(); ++k)
    class_targets.push_back(static_cast<int>(k));
  InteractiveBelief class_prior(2, {0}, {0.5, 0.5});
  InteractiveBelief class_pushed = push_prior(class_prior, *tiger.subject_frame, class_space,
                                              class_dists, exact_case.cpt, class_targets);
  for (int s = 0; s < 2; ++s)
    for (std::size_t k = 0; k < classes1.size(); ++k) {
      double member_mass = 0;
      for (int m : classes1[k].members)
        member_mass += member_pushed.p(s, member_pushed.column_of(m));
      if (std::abs(member_mass - class_pushed.p(s, static_cast<int>(k))) > 1e-9) {
        fail(detail, "class dynamics diverge from the member-level joint");
        return false;
      }
    }

  // state-dependent weights: flagged approximate, rows averaged over states
  InteractiveBelief skew(2, ids0, {0.40, 0.10, 0.20, 0.30});
  AECptResult approx_case = ae_mod_cpt(classes0, skew, e.cpts[0], classes1);
  if (approx_case.exact || approx_case.max_divergence <= 1e-9) {
    fail(detail, "state-dependent weights slipped through as exact");
    return false;
  }
  // weights are 0.8/0.2 at one state and 0.4/0.6 at the other; the averaged
  // row mixes the two member rows at 0.6/0.4
  const ModCPT::Row* row = approx_case.cpt.find(0, 0, 0);
  const ModCPT::Row* m0_row = e.cpts[0].find(ids0[0], 0, 0);
  const ModCPT::Row* m1_row = e.cpts[0].find(ids0[1], 0, 0);
  if (!row || !m0_row || !m1_row) {
    fail(detail, "expected update rows are missing");
    return false;
  }
  auto class_of = [&](int model_id) {
    for (std::size_t k = 0; k < classes1.size(); ++k)
      for (int m : classes1[k].members)
        if (m == model_id) return static_cast<int>(k);
    return -1;
  };
  std::map<int, double> expected;
  for (const auto& [target, prob] : m0_row->targets) expected[class_of(target)] += 0.6 * prob;
  for (const auto& [target, prob] : m1_row->targets) expected[class_of(target)] += 0.4 * prob;
  std::map<int, double> got;
  for (const auto& [target, prob] : row->targets) got[target] += prob;
  if (got.size() != expected.size()) {
    fail(detail, "averaged row has the wrong support");
    return false;
  }
  for (const auto& [target, prob] : expected)
    if (!got.count(target) || std::abs(got.at(target) - prob) > 1e-9) {
      fail(detail, "averaged row disagrees with the hand mixture");
      return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// 8. adopting a nearby solved policy costs at most the one-step bound

bool check_adoption_error(std::string& detail) {
  auto tiger = build_tiger();
  ModelSpace models = default_model_space(tiger, 8, 21);
  const int horizon = 3;
  bool saw_adoption = false;
  for (double eps : {0.05, 0.1, 0.2}) {
    SolverConfig c = config_for(Method::dmu, horizon, 21, 3, eps);
    Expansion e = expand_dmu(models, tiger.subject_frame, horizon, c);
    const double bound = one_step_error_bound(eps, horizon, *tiger.other_frame);
    for (const auto& adoption : e.trace.adoptions) {
      saw_adoption = true;
      if (adoption.distance > eps + 1e-12) {
        fail(detail, "adoption distance exceeds epsilon");
        return false;
      }
      const Model& skipped = models.by_id(adoption.model);
      auto adopted = oracle::tree_alpha(
          *tiger.other_frame,
          oracle::shape_of(expand_root(*e.graph, e.graph->roots.at(adoption.model))));
      auto best = oracle::best_tree(*tiger.other_frame, skipped.belief.probs(), horizon);
      double adopted_value = 0;
      for (int s = 0; s < 2; ++s) adopted_value += skipped.belief[s] * adopted[s];
      const double loss = best.value - adopted_value;
      if (loss < -1e-9) {
        fail(detail, "adopted policy beats the exhaustive optimum");
        return false;
      }
      if (loss > bound + 1e-9) {
        fail(detail, "loss " + format_double(loss) + " exceeds bound " +
                         format_double(bound) + " at epsilon " + format_double(eps));
        return false;
      }
    }
  }
  if (!saw_adoption) {
    fail(detail, "no adoption occurred; the bound was never exercised");
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 9. every expansion variant conserves probability mass

bool check_mass_conservation(std::string& detail) {
  auto tiger = build_tiger();
  ModelSpace m0 = default_model_space(tiger, tiger.default_beliefs);
  const int T = 3;
  const int S = tiger.subject_frame->num_states();

  std::map<std::string, Expansion> expansions;
  expansions["exact"] =
      expand_exact(m0, tiger.subject_frame, T, false, config_for(Method::exact, T));
  expansions["exact-be"] =
      expand_exact(m0, tiger.subject_frame, T, true, config_for(Method::exact_be, T));
  expansions["dmu"] = expand_dmu(m0, tiger.subject_frame, T,
                                 config_for(Method::dmu, T, 5, 2, 0.05));
  expansions["ae"] = expand_ae(m0, tiger.subject_frame, T, config_for(Method::ae, T),
                               uniform_joint(S, m0));
  expansions["mc"] = expand_mc(m0, tiger.subject_frame, T,
                               config_for(Method::mc, T, 5, 2, 0));

  for (const auto& [name, e] : expansions) {
    for (const ModCPT& cpt : e.cpts)
      for (const auto& [key, row] : cpt.rows()) {
        double sum = 0;
        for (const auto& [target, prob] : row.targets) {
          if (prob < -1e-15) {
            fail(detail, name + ": negative row entry");
            return false;
          }
          sum += prob;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
          fail(detail, name + ": a model-update row sums to " + format_double(sum));
          return false;
        }
      }

    InteractiveBelief b = uniform_joint(S, e.spaces[0]);
    for (std::size_t t = 0; t + 1 < e.spaces.size(); ++t) {
      b = push_prior(b, *tiger.subject_frame, e.spaces[t], e.dists[t], e.cpts[t],
                     space_ids(e.spaces[t + 1]));
      double mass = 0;
      for (double v : b.joint()) {
        if (v < -1e-15) {
          fail(detail, name + ": negative joint entry at step " + std::to_string(t + 1));
          return false;
        }
        mass += v;
      }
      if (std::abs(mass - 1.0) > 1e-9) {
        fail(detail, name + ": step " + std::to_string(t + 1) + " mass " +
                         format_double(mass));
        return false;
      }
      std::vector<double> marginal = b.state_marginal();
      for (int s = 0; s < S; ++s) {
        if (marginal[s] <= 1e-12) continue;
        double cond = 0;
        for (const auto& [id, p] : conditional_model_dist(b, s)) {
          (void)id;
          cond += p;
        }
        if (std::abs(cond - 1.0) > 1e-9) {
          fail(detail, name + ": per-state mass " + format_double(cond));
          return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 10. command-line runs repeated with one seed are byte-identical

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("missing " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(IDID_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

bool check_cli_determinism(std::string& detail) {
  const fs::path dir = "/tmp/idid_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto p = [&](const char* name) { return (dir / name).string(); };

  const std::string solve_flags =
      "solve --domain tiger --level 1 --horizon 3 --method dmu --K 2 --epsilon 0.1 "
      "--num-models 6 --models-seed 4 --seed 7 --out ";
  if (run_cli(solve_flags + p("a.json")) != 0 || run_cli(solve_flags + p("b.json")) != 0) {
    fail(detail, "solve invocation failed");
    return false;
  }
  for (const char* suffix : {".json", ".trace.csv", ".trace.meta.json", ".graph.json"}) {
    if (read_file(dir / ("a" + std::string(suffix))) !=
        read_file(dir / ("b" + std::string(suffix)))) {
      fail(detail, std::string("solve outputs differ in *") + suffix);
      return false;
    }
  }

  const std::string sim_flags =
      "simulate --domain tiger --level 1 --num-models 6 --models-seed 4 --runs 25 "
      "--seed 11 --policy " +
      p("a.json") + " --out ";
  if (run_cli(sim_flags + p("r1.csv")) != 0 || run_cli(sim_flags + p("r2.csv")) != 0) {
    fail(detail, "simulate invocation failed");
    return false;
  }
  if (read_file(dir / "r1.csv") != read_file(dir / "r2.csv")) {
    fail(detail, "simulation reports differ");
    return false;
  }
  if (read_file(trace_meta_path(p("r1.csv"))) != read_file(trace_meta_path(p("r2.csv")))) {
    fail(detail, "report sidecars differ");
    return false;
  }
  return true;
}

struct Criterion {
  const char* phrase;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"grouping equal-behavior models preserves values and policy trees",
       check_lossless_grouping},
      {"discriminative updates with a full seed pool are minimal and lossless",
       check_dmu_exact_mode},
      {"the level-0 solver matches exhaustive tree enumeration", check_level0_oracle},
      {"per-step model and class counts respect their growth bounds", check_growth_bounds},
      {"tree sets survive merge and expansion within the comparison budget",
       check_merge_roundtrip},
      {"a redundant update is skipped and its mass rerouted, per the trace",
       check_update_skipping},
      {"class update rows are exact exactly when member weights ignore the state",
       check_class_row_exactness},
      {"adopting a nearby policy never loses more than the one-step bound",
       check_adoption_error},
      {"every expansion variant conserves probability mass", check_mass_conservation},
      {"repeated command-line runs produce byte-identical files", check_cli_determinism},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " " << (i + 1) << ": " << criteria[i].phrase;
    if (!ok && !detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!ok) ++failures;
  }
  if (failures) std::cout << failures << " of " << criteria.size() << " checks failed\n";
  return failures == 0 ? 0 : 1;
}
