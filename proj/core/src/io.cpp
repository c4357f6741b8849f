#include "idid/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace idid {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

ordered_json parse_json(const std::string& path) {
  try {
    return ordered_json::parse(slurp(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void require_schema(const ordered_json& j, const std::string& want, const std::string& path) {
  if (!j.contains("schema") || j.at("schema") != want)
    throw std::runtime_error(path + ": expected schema " + want);
}

// ---- frames

ordered_json frame_to_json(const Frame& f) {
  ordered_json j;
  j["role"] = f.role() == AgentRole::subject ? "subject" : "other";
  j["states"] = f.state_labels();
  j["actions"] = f.action_labels();
  j["other_actions"] = f.other_action_labels();
  j["observations"] = f.observation_labels();

  const int S = f.num_states(), A = f.num_actions(), O = f.num_obs();
  const int AO = f.num_other_actions();
  auto t_row = [&](int s, int a, int ao) {
    ordered_json row = ordered_json::array();
    for (int s2 = 0; s2 < S; ++s2)
      row.push_back(f.is_level0() ? f.transition(s, a, s2) : f.transition(s, a, ao, s2));
    return row;
  };
  auto o_row = [&](int s2, int a, int ao) {
    ordered_json row = ordered_json::array();
    for (int o = 0; o < O; ++o)
      row.push_back(f.is_level0() ? f.observation(s2, a, o) : f.observation(s2, a, ao, o));
    return row;
  };

  ordered_json T = ordered_json::array(), Ob = ordered_json::array(), R = ordered_json::array();
  for (int s = 0; s < S; ++s) {
    ordered_json per_a = ordered_json::array();
    for (int a = 0; a < A; ++a) {
      if (f.is_level0()) {
        per_a.push_back(t_row(s, a, 0));
      } else {
        ordered_json per_ao = ordered_json::array();
        for (int ao = 0; ao < AO; ++ao) per_ao.push_back(t_row(s, a, ao));
        per_a.push_back(std::move(per_ao));
      }
    }
    T.push_back(std::move(per_a));
  }
  for (int s2 = 0; s2 < S; ++s2) {
    ordered_json per_a = ordered_json::array();
    for (int a = 0; a < A; ++a) {
      if (f.is_level0()) {
        per_a.push_back(o_row(s2, a, 0));
      } else {
        ordered_json per_ao = ordered_json::array();
        for (int ao = 0; ao < AO; ++ao) per_ao.push_back(o_row(s2, a, ao));
        per_a.push_back(std::move(per_ao));
      }
    }
    Ob.push_back(std::move(per_a));
  }
  for (int s = 0; s < S; ++s) {
    ordered_json per_a = ordered_json::array();
    for (int a = 0; a < A; ++a) {
      if (f.is_level0()) {
        per_a.push_back(f.reward(s, a));
      } else {
        ordered_json per_ao = ordered_json::array();
        for (int ao = 0; ao < AO; ++ao) per_ao.push_back(f.reward(s, a, ao));
        per_a.push_back(std::move(per_ao));
      }
    }
    R.push_back(std::move(per_a));
  }
  j["transition"] = std::move(T);
  j["observation"] = std::move(Ob);
  j["reward"] = std::move(R);
  return j;
}

FramePtr frame_from_json(const ordered_json& j, const std::string& path) {
  const std::string role_str = j.at("role");
  AgentRole role = role_str == "subject" ? AgentRole::subject : AgentRole::other;
  if (role_str != "subject" && role_str != "other")
    throw std::runtime_error(path + ": unknown role " + role_str);
  auto labels = [&](const char* key) {
    return j.at(key).get<std::vector<std::string>>();
  };
  std::vector<std::string> states = labels("states"), actions = labels("actions"),
                           other = labels("other_actions"), obs = labels("observations");
  const bool level0 = other.empty();
  const int S = static_cast<int>(states.size()), A = static_cast<int>(actions.size());
  const int AO = level0 ? 1 : static_cast<int>(other.size());
  const int O = static_cast<int>(obs.size());

  auto flatten = [&](const char* key, int d1, int depth3_inner) {
    // nested [d1][A]([AO])[inner] into the frame's flat storage order
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(d1) * A * AO * depth3_inner);
    const ordered_json& table = j.at(key);
    if (static_cast<int>(table.size()) != d1)
      throw std::runtime_error(path + ": bad outer extent in " + key);
    for (const auto& per_a : table) {
      if (static_cast<int>(per_a.size()) != A)
        throw std::runtime_error(path + ": bad action extent in " + key);
      for (const auto& cell : per_a) {
        if (level0) {
          if (depth3_inner == 1) {
            flat.push_back(cell.get<double>());
          } else {
            for (const auto& v : cell) flat.push_back(v.get<double>());
            if (static_cast<int>(cell.size()) != depth3_inner)
              throw std::runtime_error(path + ": bad row extent in " + key);
          }
        } else {
          if (static_cast<int>(cell.size()) != AO)
            throw std::runtime_error(path + ": bad other-action extent in " + key);
          for (const auto& per_ao : cell) {
            if (depth3_inner == 1) {
              flat.push_back(per_ao.get<double>());
            } else {
              for (const auto& v : per_ao) flat.push_back(v.get<double>());
              if (static_cast<int>(per_ao.size()) != depth3_inner)
                throw std::runtime_error(path + ": bad row extent in " + key);
            }
          }
        }
      }
    }
    return flat;
  };

  auto frame = std::make_shared<Frame>(role, states, actions, other, obs,
                                       flatten("transition", S, S),
                                       flatten("observation", S, O), flatten("reward", S, 1));
  std::vector<std::string> problems = validate_frame(*frame);
  if (!problems.empty()) {
    std::string msg = path + ": invalid frame";
    for (const std::string& p : problems) msg += "\n  " + p;
    throw std::runtime_error(msg);
  }
  return frame;
}

// ---- policy trees

ordered_json tree_to_json(const PolicyTreePtr& node) {
  ordered_json j;
  j["action"] = node->action;
  j["opt"] = node->opt_actions;
  if (!node->children.empty()) {
    ordered_json kids = ordered_json::array();
    for (const auto& c : node->children) kids.push_back(tree_to_json(c));
    j["children"] = std::move(kids);
    j["reachable"] = node->reachable;
  }
  return j;
}

PolicyTreePtr tree_from_json(const ordered_json& j) {
  const int action = j.at("action");
  std::vector<int> opt = j.at("opt").get<std::vector<int>>();
  if (!j.contains("children")) return make_leaf(action, opt);
  std::vector<PolicyTreePtr> children;
  for (const auto& c : j.at("children")) children.push_back(tree_from_json(c));
  std::vector<bool> reachable = j.at("reachable").get<std::vector<bool>>();
  return make_node(action, opt, std::move(children), std::move(reachable));
}

// ---- csv plumbing

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path, const std::string& header) {
  std::istringstream in(slurp(path));
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw std::runtime_error(path + ": expected header " + header);
  std::vector<std::vector<std::string>> rows;
  const std::size_t width = split_csv(header).size();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != width)
      throw std::runtime_error(path + ": malformed row " + line);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

// ---------------------------------------------------------------------------
// domains

void save_domain(const DomainSpec& spec, const std::string& path) {
  ordered_json j;
  j["schema"] = "idid.domain/1";
  j["name"] = spec.name;
  j["metadata"] = spec.metadata;
  j["default_beliefs"] = spec.default_beliefs;
  j["subject_frame"] = frame_to_json(*spec.subject_frame);
  j["other_frame"] = frame_to_json(*spec.other_frame);
  spill(path, j.dump(2) + "\n");
}

DomainSpec load_domain(const std::string& path) {
  ordered_json j = parse_json(path);
  require_schema(j, "idid.domain/1", path);
  DomainSpec spec;
  spec.name = j.at("name");
  spec.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
  spec.default_beliefs = j.at("default_beliefs").get<std::vector<std::vector<double>>>();
  spec.subject_frame = frame_from_json(j.at("subject_frame"), path);
  spec.other_frame = frame_from_json(j.at("other_frame"), path);
  return spec;
}

// ---------------------------------------------------------------------------
// policies

void save_policy(const PolicyFile& p, const std::string& path) {
  ordered_json j;
  j["schema"] = "idid.policy/1";
  j["domain"] = p.domain;
  j["level"] = p.level;
  j["horizon"] = p.horizon;
  j["method"] = p.method;
  j["seed"] = p.seed;
  j["value"] = p.value;
  j["root_q"] = p.root_q;
  j["actions"] = p.action_labels;
  j["observations"] = p.observation_labels;
  j["tree"] = tree_to_json(p.tree);
  spill(path, j.dump(2) + "\n");
}

PolicyFile load_policy(const std::string& path) {
  ordered_json j = parse_json(path);
  require_schema(j, "idid.policy/1", path);
  PolicyFile p;
  p.domain = j.at("domain");
  p.level = j.at("level");
  p.horizon = j.at("horizon");
  p.method = j.at("method");
  p.seed = j.at("seed");
  p.value = j.at("value");
  p.root_q = j.at("root_q").get<std::vector<double>>();
  p.action_labels = j.at("actions").get<std::vector<std::string>>();
  p.observation_labels = j.at("observations").get<std::vector<std::string>>();
  p.tree = tree_from_json(j.at("tree"));
  if (p.tree->horizon != p.horizon)
    throw std::runtime_error(path + ": tree depth disagrees with the declared horizon");
  return p;
}

// ---------------------------------------------------------------------------
// graphs

void save_graph(const PolicyGraph& g, const std::string& path) {
  ordered_json j;
  j["schema"] = "idid.graph/1";
  j["horizon"] = g.horizon;
  j["num_obs"] = g.num_obs;
  j["num_actions"] = g.num_actions;
  j["comparisons"] = g.comparisons;
  ordered_json verts = ordered_json::array();
  for (const auto& v : g.vertices) {
    ordered_json vj;
    vj["id"] = v.id;
    vj["layer"] = v.layer;
    vj["action"] = v.action;
    vj["opt"] = v.opt_actions;
    vj["succ"] = v.succ;
    vj["alpha"] = v.alpha;
    verts.push_back(std::move(vj));
  }
  j["vertices"] = std::move(verts);
  ordered_json roots = ordered_json::array();
  for (const auto& [model, vertex] : g.roots) roots.push_back({model, vertex});
  j["roots"] = std::move(roots);
  spill(path, j.dump(2) + "\n");
}

PolicyGraph load_graph(const std::string& path) {
  ordered_json j = parse_json(path);
  require_schema(j, "idid.graph/1", path);
  PolicyGraph g;
  g.horizon = j.at("horizon");
  g.num_obs = j.at("num_obs");
  g.num_actions = j.at("num_actions");
  g.comparisons = j.at("comparisons");
  for (const auto& vj : j.at("vertices")) {
    PolicyGraph::Vertex v;
    v.id = vj.at("id");
    v.layer = vj.at("layer");
    v.action = vj.at("action");
    v.opt_actions = vj.at("opt").get<std::vector<int>>();
    v.succ = vj.at("succ").get<std::vector<int>>();
    v.alpha = vj.at("alpha").get<std::vector<double>>();
    if (v.id != static_cast<int>(g.vertices.size()))
      throw std::runtime_error(path + ": vertex ids must be dense and ordered");
    g.vertices.push_back(std::move(v));
  }
  for (const auto& r : j.at("roots")) g.roots[r.at(0).get<int>()] = r.at(1).get<int>();
  return g;
}

// ---------------------------------------------------------------------------
// traces

std::string trace_meta_path(const std::string& csv_path) {
  const std::string suffix = ".csv";
  if (csv_path.size() > suffix.size() &&
      csv_path.compare(csv_path.size() - suffix.size(), suffix.size(), suffix) == 0)
    return csv_path.substr(0, csv_path.size() - suffix.size()) + ".meta.json";
  return csv_path + ".meta.json";
}

namespace {
const char* kTraceHeader = "step,kind,source,action,observation,target,value";
}

void save_trace(const ExpansionTrace& t, const std::string& csv_path) {
  std::ostringstream out;
  out << kTraceHeader << "\n";
  for (std::size_t step = 0; step < t.counts.size(); ++step)
    out << step << ",count,,,,," << t.counts[step] << "\n";
  for (const auto& u : t.updates)
    out << u.step << "," << (u.created ? "create" : "update") << "," << u.source << ","
        << u.action << "," << u.obs << "," << u.target << "," << format_double(u.weight)
        << "\n";
  for (const auto& g : t.groupings)
    out << g.step << ",group," << g.member << ",,," << g.representative << ",\n";
  for (const auto& a : t.adoptions)
    out << ",adopt," << a.model << ",,," << a.donor << "," << format_double(a.distance)
        << "\n";
  for (std::size_t step = 0; step < t.ae_exact.size(); ++step)
    out << step << ",exact,,,,," << (t.ae_exact[step] ? 1 : 0) << "\n";
  spill(csv_path, out.str());

  ordered_json meta;
  meta["schema"] = "idid.trace/1";
  meta["comparisons"] = t.comparisons;
  meta["notes"] = t.notes;
  spill(trace_meta_path(csv_path), meta.dump(2) + "\n");
}

ExpansionTrace load_trace(const std::string& csv_path) {
  ExpansionTrace t;
  for (const auto& row : read_csv(csv_path, kTraceHeader)) {
    const std::string& kind = row[1];
    if (kind == "count") {
      const int step = std::stoi(row[0]);
      if (step != static_cast<int>(t.counts.size()))
        throw std::runtime_error(csv_path + ": count rows out of order");
      t.counts.push_back(std::stoi(row[6]));
    } else if (kind == "create" || kind == "update") {
      t.updates.push_back({std::stoi(row[0]), std::stoi(row[2]), std::stoi(row[3]),
                           std::stoi(row[4]), std::stoi(row[5]), kind == "create",
                           std::stod(row[6])});
    } else if (kind == "group") {
      t.groupings.push_back({std::stoi(row[0]), std::stoi(row[2]), std::stoi(row[5])});
    } else if (kind == "adopt") {
      t.adoptions.push_back({std::stoi(row[2]), std::stoi(row[5]), std::stod(row[6])});
    } else if (kind == "exact") {
      t.ae_exact.push_back(row[6] == "1");
    } else {
      throw std::runtime_error(csv_path + ": unknown row kind " + kind);
    }
  }
  ordered_json meta = parse_json(trace_meta_path(csv_path));
  require_schema(meta, "idid.trace/1", trace_meta_path(csv_path));
  t.comparisons = meta.at("comparisons");
  t.notes = meta.at("notes").get<std::vector<std::string>>();
  return t;
}

// ---------------------------------------------------------------------------
// reports

void save_report(const SimulationReport& r, const std::string& csv_path) {
  std::ostringstream out;
  out << "run,seed,true_model,reward\n";
  for (const auto& rec : r.records)
    out << rec.run << "," << rec.seed << "," << rec.true_model << ","
        << format_double(rec.reward) << "\n";
  spill(csv_path, out.str());

  ordered_json meta;
  meta["schema"] = "idid.report/1";
  meta["runs"] = r.runs;
  meta["seed"] = r.seed;
  meta["mean_reward"] = r.mean_reward;
  meta["std_dev"] = r.std_dev;
  spill(trace_meta_path(csv_path), meta.dump(2) + "\n");
}

SimulationReport load_report(const std::string& csv_path) {
  SimulationReport r;
  for (const auto& row : read_csv(csv_path, "run,seed,true_model,reward")) {
    SimulationReport::Run rec;
    rec.run = std::stoi(row[0]);
    rec.seed = std::stoull(row[1]);
    rec.true_model = std::stoi(row[2]);
    rec.reward = std::stod(row[3]);
    r.records.push_back(rec);
  }
  ordered_json meta = parse_json(trace_meta_path(csv_path));
  require_schema(meta, "idid.report/1", trace_meta_path(csv_path));
  r.runs = meta.at("runs");
  r.seed = meta.at("seed");
  r.mean_reward = meta.at("mean_reward");
  r.std_dev = meta.at("std_dev");
  return r;
}

}  // namespace idid
