#include "idid/simulate.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace idid {

namespace {

int sample_index(Rng& rng, const std::vector<double>& dist) {
  double u = rng.uniform();
  double acc = 0;
  int last = -1;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= 0) continue;
    acc += dist[i];
    last = static_cast<int>(i);
    if (u < acc) return last;
  }
  if (last < 0) throw std::domain_error("cannot sample from an all-zero distribution");
  return last;  // u landed in rounding slack past the final bucket
}

std::vector<double> transition_row(const Frame& f, int s, int a, int ao) {
  std::vector<double> row(f.num_states());
  for (int s2 = 0; s2 < f.num_states(); ++s2)
    row[s2] = f.is_level0() ? f.transition(s, a, s2) : f.transition(s, a, ao, s2);
  return row;
}

std::vector<double> observation_row(const Frame& f, int s2, int a, int ao) {
  std::vector<double> row(f.num_obs());
  for (int o = 0; o < f.num_obs(); ++o)
    row[o] = f.is_level0() ? f.observation(s2, a, o) : f.observation(s2, a, ao, o);
  return row;
}

int sample_model(Rng& rng, const std::map<int, double>& dist) {
  double u = rng.uniform();
  double acc = 0;
  int last = -1;
  for (const auto& [id, p] : dist) {
    if (p <= 0) continue;
    acc += p;
    last = id;
    if (u < acc) return last;
  }
  if (last < 0) throw std::domain_error("cannot sample from an all-zero distribution");
  return last;
}

PolicyTreePtr solve_true_model(const Model& m, int horizon, const SolverConfig& config) {
  if (m.level == 0) return solve_policy_tree(m, horizon).first;
  SolverConfig c = config;
  c.horizon = horizon;
  return solve_idid(m, c).tree;
}

}  // namespace

SimulationReport simulate(const PolicyTreePtr& policy, const Model& subject, int runs,
                          std::uint64_t seed, const SolverConfig& true_model_config) {
  if (!policy) throw std::invalid_argument("null policy");
  if (runs < 1) throw std::invalid_argument("need at least one run");
  if (!subject.joint || !subject.nested)
    throw std::invalid_argument("subject model needs a nested model space and joint belief");

  const Frame& fi = *subject.frame;
  const InteractiveBelief& b0 = *subject.joint;
  const int T = policy->horizon;

  SimulationReport report;
  report.runs = runs;
  report.seed = seed;

  // solved true-model policies, reused across runs that sample the same model
  std::map<int, PolicyTreePtr> true_trees;

  for (int r = 0; r < runs; ++r) {
    std::uint64_t run_seed = Rng::derive(seed, static_cast<std::uint64_t>(r));
    Rng rng(run_seed);

    int s = sample_index(rng, b0.state_marginal());
    const int model_id = sample_model(rng, conditional_model_dist(b0, s));
    const Model& jm = subject.nested->by_id(model_id);
    const Frame& fj = *jm.frame;
    const bool foreign = fj.num_states() != fi.num_states();

    auto it = true_trees.find(model_id);
    if (it == true_trees.end())
      it = true_trees.emplace(model_id, solve_true_model(jm, T, true_model_config)).first;

    int sj = foreign ? sample_index(rng, jm.belief.probs()) : s;
    PolicyTreePtr ni = policy;
    PolicyTreePtr nj = it->second;
    double total = 0;

    for (int t = 0; t < T; ++t) {
      const int ai = ni->action;
      const int aj = nj->action;
      total += fi.reward(s, ai, aj);

      const int s2 = sample_index(rng, transition_row(fi, s, ai, aj));
      if (t + 1 == T) break;

      const int oi = sample_index(rng, observation_row(fi, s2, ai, aj));
      int oj;
      if (foreign) {
        sj = sample_index(rng, transition_row(fj, sj, aj, /*ao=*/0));
        oj = sample_index(rng, observation_row(fj, sj, aj, /*ao=*/0));
      } else if (fj.is_level0()) {
        oj = sample_index(rng, observation_row(fj, s2, aj, /*ao=*/0));
      } else {
        oj = sample_index(rng, observation_row(fj, s2, aj, ai));
      }

      ni = ni->children.at(oi);
      nj = nj->children.at(oj);
      s = s2;
    }

    report.records.push_back({r, run_seed, model_id, total});
  }

  double sum = 0;
  for (const auto& rec : report.records) sum += rec.reward;
  report.mean_reward = sum / runs;
  if (runs > 1) {
    double ss = 0;
    for (const auto& rec : report.records) {
      const double d = rec.reward - report.mean_reward;
      ss += d * d;
    }
    report.std_dev = std::sqrt(ss / (runs - 1));
  }
  return report;
}

}  // namespace idid
