#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "idid/io.hpp"
#include "idid/simulate.hpp"
#include "idid/solver.hpp"
#include "json.hpp"

namespace {

using namespace idid;

struct DomainOptions {
  std::string domain;
  int level = 1;
  std::string models_file;
  int num_models = 0;
  std::uint64_t models_seed = 0;
};

void add_domain_options(CLI::App* cmd, DomainOptions& opt) {
  cmd->add_option("--domain", opt.domain, "builtin name (tiger, machine, uav3, uav5) or a domain file")
      ->required();
  cmd->add_option("--level", opt.level, "subject nesting level")->check(CLI::Range(1, 2));
  auto* models = cmd->add_option("--models", opt.models_file,
                                 "file with the other agent's initial beliefs (idid.models/1)");
  auto* num = cmd->add_option("--num-models", opt.num_models,
                              "sample this many initial beliefs instead")
                  ->check(CLI::PositiveNumber);
  num->excludes(models);
  cmd->add_option("--models-seed", opt.models_seed, "seed for --num-models sampling");
}

DomainSpec resolve_domain(const std::string& name) {
  if (name == "tiger") return build_tiger();
  if (name == "machine") return build_machine_maintenance();
  if (name == "uav3") return build_uav_grid(3);
  if (name == "uav5") return build_uav_grid(5);
  return load_domain(name);
}

std::vector<std::vector<double>> load_models_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, true);
  if (!j.contains("schema") || j.at("schema") != "idid.models/1")
    throw std::runtime_error(path + ": expected schema idid.models/1");
  return j.at("beliefs").get<std::vector<std::vector<double>>>();
}

Model build_subject(const DomainSpec& spec, const DomainOptions& opt) {
  ModelSpace others;
  if (!opt.models_file.empty())
    others = default_model_space(spec, load_models_file(opt.models_file));
  else if (opt.num_models > 0)
    others = default_model_space(spec, opt.num_models, opt.models_seed);
  else
    others = default_model_space(spec, spec.default_beliefs);
  return make_subject_model(spec, opt.level, others);
}

std::string out_stem(const std::string& path) {
  const std::string suffix = ".json";
  if (path.size() > suffix.size() &&
      path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return path.substr(0, path.size() - suffix.size());
  return path;
}

std::string join_counts(const std::vector<int>& counts) {
  std::ostringstream ss;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) ss << ';';
    ss << counts[i];
  }
  return ss.str();
}

int run_solve(const DomainOptions& dopt, const std::string& method_str, int horizon, int K,
              double epsilon, std::uint64_t seed, const std::string& out,
              const std::string& graph_out) {
  auto method = parse_method(method_str);
  if (!method) throw std::runtime_error("unknown method " + method_str);
  DomainSpec spec = resolve_domain(dopt.domain);
  Model subject = build_subject(spec, dopt);

  SolverConfig config;
  config.method = *method;
  config.horizon = horizon;
  config.K = K;
  config.epsilon = epsilon;
  config.seed = seed;
  SolveResult result = solve_idid(subject, config);

  PolicyFile pf;
  pf.tree = result.tree;
  pf.domain = spec.name;
  pf.level = dopt.level;
  pf.horizon = horizon;
  pf.method = method_name(*method);
  pf.value = result.value;
  pf.root_q = result.root_q;
  pf.seed = seed;
  pf.action_labels = subject.frame->action_labels();
  pf.observation_labels = subject.frame->observation_labels();
  save_policy(pf, out);

  const std::string stem = out_stem(out);
  save_trace(result.expansion.trace, stem + ".trace.csv");
  std::string graph_path = graph_out;
  if (graph_path.empty() && result.expansion.graph) graph_path = stem + ".graph.json";
  if (result.expansion.graph) save_graph(*result.expansion.graph, graph_path);

  std::cout << "method " << pf.method << " value " << format_double(result.value)
            << " models-per-step " << join_counts(result.expansion.trace.counts) << "\n";
  std::cout << "policy " << out << "\n";
  std::cout << "trace " << stem + ".trace.csv" << "\n";
  if (result.expansion.graph) std::cout << "graph " << graph_path << "\n";
  return 0;
}

int run_simulate(const DomainOptions& dopt, const std::string& policy_path, int runs,
                 std::uint64_t seed, const std::string& out, const std::string& true_method,
                 int true_K, double true_epsilon) {
  DomainSpec spec = resolve_domain(dopt.domain);
  PolicyFile pf = load_policy(policy_path);
  if (pf.domain != spec.name)
    throw std::runtime_error("policy was solved for domain " + pf.domain + ", not " +
                             spec.name);
  Model subject = build_subject(spec, dopt);

  auto method = parse_method(true_method);
  if (!method) throw std::runtime_error("unknown method " + true_method);
  SolverConfig true_config;
  true_config.method = *method;
  true_config.K = true_K;
  true_config.epsilon = true_epsilon;
  true_config.seed = seed;

  SimulationReport report = simulate(pf.tree, subject, runs, seed, true_config);
  save_report(report, out);
  std::cout << "runs " << report.runs << " mean " << format_double(report.mean_reward)
            << " std " << format_double(report.std_dev) << "\n";
  std::cout << "report " << out << "\n";
  return 0;
}

int run_stats(const std::string& trace_path, const std::string& out) {
  ExpansionTrace trace = load_trace(trace_path);
  std::ostringstream csv;
  csv << "step,count\n";
  for (std::size_t t = 0; t < trace.counts.size(); ++t)
    csv << t << "," << trace.counts[t] << "\n";
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << csv.str();
  std::cout << csv.str();
  return 0;
}

int run_compare(const DomainOptions& dopt, const std::string& methods_csv, int horizon, int K,
                double epsilon, std::uint64_t seed, const std::string& out) {
  DomainSpec spec = resolve_domain(dopt.domain);
  Model subject = build_subject(spec, dopt);

  std::vector<std::string> methods;
  std::stringstream ss(methods_csv);
  std::string item;
  while (std::getline(ss, item, ',')) methods.push_back(item);
  if (methods.empty()) throw std::runtime_error("no methods given");

  std::ostringstream csv;
  csv << "method,value,models_per_step,wall_ms\n";
  for (const std::string& name : methods) {
    auto method = parse_method(name);
    if (!method) throw std::runtime_error("unknown method " + name);
    SolverConfig config;
    config.method = *method;
    config.horizon = horizon;
    config.K = K;
    config.epsilon = epsilon;
    config.seed = seed;
    auto start = std::chrono::steady_clock::now();
    SolveResult result = solve_idid(subject, config);
    auto end = std::chrono::steady_clock::now();
    const double ms = std::chrono::duration<double, std::milli>(end - start).count();
    csv << name << "," << format_double(result.value) << ","
        << join_counts(result.expansion.trace.counts) << "," << format_double(ms) << "\n";
  }
  std::cout << csv.str();
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << csv.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interactive dynamic influence diagram solver"};
  app.require_subcommand(1);

  DomainOptions solve_dopt;
  std::string solve_method = "exact";
  int solve_horizon = 1;
  int solve_K = 0;
  double solve_epsilon = 0;
  std::uint64_t solve_seed = 0;
  std::string solve_out, solve_graph;
  auto* solve_cmd = app.add_subcommand("solve", "solve a subject model and write its policy");
  add_domain_options(solve_cmd, solve_dopt);
  solve_cmd->add_option("--horizon", solve_horizon, "planning horizon")
      ->required()
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--method", solve_method, "exact, exact-be, dmu, ae, or mc");
  solve_cmd->add_option("--K", solve_K, "models solved exactly (dmu/ae) or retained (mc); 0 = all")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--epsilon", solve_epsilon, "adoption radius (dmu/ae)")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--seed", solve_seed, "seed for all solver randomness");
  solve_cmd->add_option("--out", solve_out, "policy output file")->required();
  solve_cmd->add_option("--graph", solve_graph, "policy graph output file (dmu/ae)");

  DomainOptions sim_dopt;
  std::string sim_policy, sim_out;
  std::string sim_true_method = "dmu";
  int sim_runs = 200;
  int sim_true_K = 0;
  double sim_true_epsilon = 0;
  std::uint64_t sim_seed = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "execute a policy against sampled true models");
  add_domain_options(sim_cmd, sim_dopt);
  sim_cmd->add_option("--policy", sim_policy, "policy file from solve")->required();
  sim_cmd->add_option("--runs", sim_runs, "number of runs")->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim_seed, "master seed; each run derives its own");
  sim_cmd->add_option("--out", sim_out, "report output file")->required();
  sim_cmd->add_option("--true-method", sim_true_method,
                      "solver for sampled interactive true models");
  sim_cmd->add_option("--true-K", sim_true_K, "K for the true-model solver; 0 = all")
      ->check(CLI::NonNegativeNumber);
  sim_cmd->add_option("--true-epsilon", sim_true_epsilon, "epsilon for the true-model solver")
      ->check(CLI::NonNegativeNumber);

  std::string stats_trace, stats_out;
  auto* stats_cmd = app.add_subcommand("stats", "per-step model counts from a trace");
  stats_cmd->add_option("--trace", stats_trace, "trace csv from solve")->required();
  stats_cmd->add_option("--out", stats_out, "counts csv output")->required();

  DomainOptions cmp_dopt;
  std::string cmp_methods, cmp_out;
  int cmp_horizon = 1;
  int cmp_K = 0;
  double cmp_epsilon = 0;
  std::uint64_t cmp_seed = 0;
  auto* cmp_cmd = app.add_subcommand("compare", "solve with several methods side by side");
  add_domain_options(cmp_cmd, cmp_dopt);
  cmp_cmd->add_option("--methods", cmp_methods, "comma-separated method list")->required();
  cmp_cmd->add_option("--horizon", cmp_horizon, "planning horizon")
      ->required()
      ->check(CLI::PositiveNumber);
  cmp_cmd->add_option("--K", cmp_K, "models solved exactly or retained; 0 = all")
      ->check(CLI::NonNegativeNumber);
  cmp_cmd->add_option("--epsilon", cmp_epsilon, "adoption radius")
      ->check(CLI::NonNegativeNumber);
  cmp_cmd->add_option("--seed", cmp_seed, "seed for all solver randomness");
  cmp_cmd->add_option("--out", cmp_out, "comparison csv output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed())
      return run_solve(solve_dopt, solve_method, solve_horizon, solve_K, solve_epsilon,
                       solve_seed, solve_out, solve_graph);
    if (sim_cmd->parsed())
      return run_simulate(sim_dopt, sim_policy, sim_runs, sim_seed, sim_out, sim_true_method,
                          sim_true_K, sim_true_epsilon);
    if (stats_cmd->parsed()) return run_stats(stats_trace, stats_out);
    if (cmp_cmd->parsed())
      return run_compare(cmp_dopt, cmp_methods, cmp_horizon, cmp_K, cmp_epsilon, cmp_seed,
                         cmp_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
