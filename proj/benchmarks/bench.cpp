#include <benchmark/benchmark.h>

#include <vector>

#include "idid/domains.hpp"
#include "idid/equivalence.hpp"
#include "idid/solver.hpp"

using namespace idid;

namespace {

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

void BM_Level0Solve(benchmark::State& state) {
  auto spec = build_tiger();
  const int horizon = static_cast<int>(state.range(0));
  Belief b({0.37, 0.63});
  for (auto _ : state) {
    // fresh solver per iteration, otherwise the memo makes repeats free
    Level0Solver solver(spec.other_frame);
    benchmark::DoNotOptimize(solver.solve(b, horizon).value);
  }
}
BENCHMARK(BM_Level0Solve)->Arg(3)->Arg(5)->Arg(7);

void BM_MergeTrees(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  Rng rng(42);
  std::vector<PolicyTreePtr> trees;
  for (int i = 0; i < count; ++i) trees.push_back(random_tree(rng, 3, 2, 5));
  for (auto _ : state) {
    PolicyGraph g = merge_trees(trees);
    benchmark::DoNotOptimize(g.vertices.size());
  }
}
BENCHMARK(BM_MergeTrees)->Arg(8)->Arg(64)->Arg(512);

void BM_SolveSubject(benchmark::State& state) {
  auto spec = build_tiger();
  ModelSpace others = default_model_space(spec, 6, 13);
  Model subject = make_subject_model(spec, 1, others);
  SolverConfig config;
  config.method = static_cast<Method>(state.range(0));
  config.horizon = static_cast<int>(state.range(1));
  config.K = 3;
  config.epsilon = 0.05;
  for (auto _ : state) benchmark::DoNotOptimize(solve_idid(subject, config).value);
}
BENCHMARK(BM_SolveSubject)
    ->ArgsProduct({{static_cast<long>(Method::exact), static_cast<long>(Method::exact_be),
                    static_cast<long>(Method::dmu), static_cast<long>(Method::ae),
                    static_cast<long>(Method::mc)},
                   {3, 5}});

void BM_ClusterBeliefs(benchmark::State& state) {
  auto spec = build_tiger();
  ModelSpace models = default_model_space(spec, static_cast<int>(state.range(0)), 7);
  for (auto _ : state) {
    ClusterResult r = mc_cluster(models, 4, 7);
    benchmark::DoNotOptimize(r.space.size());
  }
}
BENCHMARK(BM_ClusterBeliefs)->Arg(32)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
