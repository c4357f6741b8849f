#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "idid/domains.hpp"
#include "idid/simulate.hpp"
#include "idid/solver.hpp"

namespace idid {

// All formats are structured text with a schema-version header so golden
// files diff cleanly. Saving then loading reproduces the value exactly, and
// re-saving a loaded file reproduces the bytes.

// domain files (schema idid.domain/1): labeled state/action/observation
// lists, tables as nested arrays
void save_domain(const DomainSpec& spec, const std::string& path);
DomainSpec load_domain(const std::string& path);

// policy files (schema idid.policy/1): nested action/children records plus
// the solve parameters that produced the tree
struct PolicyFile {
  PolicyTreePtr tree;
  std::string domain;
  int level = 1;
  int horizon = 1;
  std::string method;
  double value = 0;
  std::vector<double> root_q;
  std::uint64_t seed = 0;
  std::vector<std::string> action_labels;
  std::vector<std::string> observation_labels;
};
void save_policy(const PolicyFile& p, const std::string& path);
PolicyFile load_policy(const std::string& path);

// policy graphs (schema idid.graph/1)
void save_graph(const PolicyGraph& g, const std::string& path);
PolicyGraph load_graph(const std::string& path);

// expansion traces: flat CSV plus a .meta.json sidecar (schema idid.trace/1)
void save_trace(const ExpansionTrace& t, const std::string& csv_path);
ExpansionTrace load_trace(const std::string& csv_path);
std::string trace_meta_path(const std::string& csv_path);

// simulation reports: per-run CSV plus a .meta.json sidecar (idid.report/1)
void save_report(const SimulationReport& r, const std::string& csv_path);
SimulationReport load_report(const std::string& csv_path);

}  // namespace idid
