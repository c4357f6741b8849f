#include "idid/domains.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "idid/common.hpp"

namespace idid {

namespace {

ModelSpace belief_models(const DomainSpec& spec, const std::vector<std::vector<double>>& beliefs) {
  ModelSpace ms;
  ms.owner = AgentRole::other;
  int id = 0;
  for (const auto& b : beliefs) {
    Model m{Belief(b), spec.other_frame, 0, id++, nullptr, nullptr};
    ms.models.push_back(std::move(m));
  }
  return ms;
}

}  // namespace

DomainSpec build_tiger() {
  const std::vector<std::string> states{"TL", "TR"};
  const std::vector<std::string> actions{"L", "OL", "OR"};
  const std::vector<std::string> obs_j{"GL", "GR"};
  const std::vector<std::string> obs_i{"GL_CL", "GL_CR", "GL_S", "GR_CL", "GR_CR", "GR_S"};

  // Single-agent frame: listening preserves the tiger's location, opening any
  // door resets it; growls are 85% accurate and carry no information after an
  // open.
  std::vector<double> t0(2 * 3 * 2), o0(2 * 3 * 2), r0(2 * 3);
  for (int s = 0; s < 2; ++s) {
    for (int a = 0; a < 3; ++a) {
      for (int s2 = 0; s2 < 2; ++s2)
        t0[(s * 3 + a) * 2 + s2] = a == 0 ? (s == s2 ? 1.0 : 0.0) : 0.5;
      r0[s * 3 + a] = a == 0 ? -1.0 : ((a == 1) == (s == 0) ? -100.0 : 10.0);
    }
  }
  for (int s2 = 0; s2 < 2; ++s2) {
    for (int a = 0; a < 3; ++a) {
      for (int o = 0; o < 2; ++o)
        o0[(s2 * 3 + a) * 2 + o] = a == 0 ? (o == s2 ? 0.85 : 0.15) : 0.5;
    }
  }
  auto other = std::make_shared<Frame>(AgentRole::other, states, actions,
                                       std::vector<std::string>{}, obs_j, t0, o0, r0);

  // Joint frame: the location persists only under joint listening; growl and
  // creak accuracies factor at 0.85 and 0.9, and i hears nothing usable in
  // the step after it opens a door.
  std::vector<double> t1(2 * 3 * 3 * 2), o1(2 * 3 * 3 * 6), r1(2 * 3 * 3);
  for (int s = 0; s < 2; ++s) {
    for (int ai = 0; ai < 3; ++ai) {
      for (int aj = 0; aj < 3; ++aj) {
        bool both_listen = ai == 0 && aj == 0;
        for (int s2 = 0; s2 < 2; ++s2)
          t1[((s * 3 + ai) * 3 + aj) * 2 + s2] = both_listen ? (s == s2 ? 1.0 : 0.0) : 0.5;
        r1[(s * 3 + ai) * 3 + aj] =
            ai == 0 ? -1.0 : ((ai == 1) == (s == 0) ? -100.0 : 10.0);
      }
    }
  }
  for (int s2 = 0; s2 < 2; ++s2) {
    double growl[2] = {s2 == 0 ? 0.85 : 0.15, s2 == 0 ? 0.15 : 0.85};
    for (int ai = 0; ai < 3; ++ai) {
      for (int aj = 0; aj < 3; ++aj) {
        // creak order CL, CR, S given j's action
        double creak[3] = {0.05, 0.05, 0.9};
        if (aj == 1) creak[0] = 0.9, creak[1] = 0.05, creak[2] = 0.05;
        if (aj == 2) creak[0] = 0.05, creak[1] = 0.9, creak[2] = 0.05;
        for (int g = 0; g < 2; ++g) {
          for (int c = 0; c < 3; ++c) {
            int o = g * 3 + c;
            o1[((s2 * 3 + ai) * 3 + aj) * 6 + o] =
                ai == 0 ? growl[g] * creak[c] : 1.0 / 6.0;
          }
        }
      }
    }
  }
  auto subject =
      std::make_shared<Frame>(AgentRole::subject, states, actions, actions, obs_i, t1, o1, r1);

  DomainSpec spec;
  spec.name = "tiger";
  spec.subject_frame = subject;
  spec.other_frame = other;
  spec.default_beliefs = {{0.01, 0.99}, {0.5, 0.5}, {0.05, 0.95}};
  spec.metadata["description"] = "two-agent tiger with growls and creaks";
  return spec;
}

DomainSpec build_machine_maintenance() {
  const std::vector<std::string> states{"0-fail", "1-fail", "2-fail"};
  const std::vector<std::string> actions{"M", "E", "I", "R"};
  const std::vector<std::string> obs{"not-defective", "defective"};

  // Component failures accumulate while both agents keep producing; any
  // inspect/repair restores the machine almost surely.
  const double degrade[3][3] = {{0.81, 0.18, 0.01}, {0.0, 0.9, 0.1}, {0.0, 0.0, 1.0}};
  const double repair[3][3] = {{1.0, 0.0, 0.0}, {0.95, 0.05, 0.0}, {0.95, 0.0, 0.05}};
  const double examine[3][2] = {{0.75, 0.25}, {0.5, 0.5}, {0.25, 0.75}};
  // Per-agent utility contribution; the joint table is the sum of the two
  // agents' contributions.
  const double single[4][3] = {{0.9025, 0.475, 0.25},
                               {0.6525, 0.225, 0.0},
                               {-0.5, -1.5, -2.5},
                               {-2.0, -2.0, -2.0}};
  auto maintains = [](int a) { return a >= 2; };

  std::vector<double> t0(3 * 4 * 3), o0(3 * 4 * 2), r0(3 * 4);
  for (int s = 0; s < 3; ++s) {
    for (int a = 0; a < 4; ++a) {
      const double* row = maintains(a) ? repair[s] : degrade[s];
      for (int s2 = 0; s2 < 3; ++s2) t0[(s * 4 + a) * 3 + s2] = row[s2];
      r0[s * 4 + a] = single[a][s];
    }
  }
  for (int s2 = 0; s2 < 3; ++s2) {
    for (int a = 0; a < 4; ++a) {
      double nd = maintains(a) ? 0.95 : (a == 0 ? 0.5 : examine[s2][0]);
      o0[(s2 * 4 + a) * 2 + 0] = nd;
      o0[(s2 * 4 + a) * 2 + 1] = 1.0 - nd;
    }
  }
  auto other = std::make_shared<Frame>(AgentRole::other, states, actions,
                                       std::vector<std::string>{}, obs, t0, o0, r0);

  std::vector<double> t1(3 * 4 * 4 * 3), o1(3 * 4 * 4 * 2), r1(3 * 4 * 4);
  for (int s = 0; s < 3; ++s) {
    for (int ai = 0; ai < 4; ++ai) {
      for (int aj = 0; aj < 4; ++aj) {
        const double* row = (maintains(ai) || maintains(aj)) ? repair[s] : degrade[s];
        for (int s2 = 0; s2 < 3; ++s2) t1[((s * 4 + ai) * 4 + aj) * 3 + s2] = row[s2];
        r1[(s * 4 + ai) * 4 + aj] = single[ai][s] + single[aj][s];
      }
    }
  }
  for (int s2 = 0; s2 < 3; ++s2) {
    for (int ai = 0; ai < 4; ++ai) {
      for (int aj = 0; aj < 4; ++aj) {
        double nd;
        if (maintains(ai) || maintains(aj))
          nd = 0.95;
        else if (ai == 0)
          nd = 0.5;
        else
          nd = examine[s2][0];
        o1[((s2 * 4 + ai) * 4 + aj) * 2 + 0] = nd;
        o1[((s2 * 4 + ai) * 4 + aj) * 2 + 1] = 1.0 - nd;
      }
    }
  }
  auto subject =
      std::make_shared<Frame>(AgentRole::subject, states, actions, actions, obs, t1, o1, r1);

  DomainSpec spec;
  spec.name = "machine";
  spec.subject_frame = subject;
  spec.other_frame = other;
  spec.default_beliefs = {{1.0, 0.0, 0.0},
                          {0.5, 0.5, 0.0},
                          {1.0 / 3, 1.0 / 3, 1.0 / 3},
                          {0.0, 0.5, 0.5},
                          {0.0, 0.0, 1.0}};
  spec.metadata["description"] = "two-agent machine maintenance";
  return spec;
}

namespace {

struct Dir {
  int dr, dc;
};
constexpr Dir kDirs[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};  // N, S, W, E

// Distribution over displacements for one move on a bounded board: the
// intended direction takes 0.67 (staying put when it leads off the board) and
// the remaining 0.33 splits equally over the other directions that stay on,
// falling back to staying put when none do.
std::vector<std::pair<Dir, double>> move_outcomes(int action, bool flip,
                                                  const std::function<bool(Dir)>& valid) {
  std::vector<std::pair<Dir, double>> out;
  if (action == 4) {
    out.push_back({{0, 0}, 1.0});
    return out;
  }
  auto dir_of = [&](int a) {
    Dir d = kDirs[a];
    return flip ? Dir{-d.dr, -d.dc} : d;
  };
  Dir intended = dir_of(action);
  if (valid(intended))
    out.push_back({intended, 0.67});
  else
    out.push_back({{0, 0}, 0.67});
  std::vector<Dir> others;
  for (int a = 0; a < 4; ++a) {
    if (a == action) continue;
    Dir d = dir_of(a);
    if (valid(d)) others.push_back(d);
  }
  if (others.empty()) {
    out.push_back({{0, 0}, 0.33});
  } else {
    for (Dir d : others) out.push_back({d, 0.33 / others.size()});
  }
  return out;
}

}  // namespace

DomainSpec build_uav_grid(int n) {
  if (n != 3 && n != 5) throw std::invalid_argument("grid side must be 3 or 5");

  const std::vector<std::string> actions{"move_N", "move_S", "move_W", "move_E", "listen"};
  const std::vector<std::string> obs{"sense_north", "sense_south", "sense_level", "sense_found"};

  // Fugitive frame: absolute cells, safe house absorbing at the northwest
  // corner; it senses the house only within one sector of it.
  const int cells = n * n;
  std::vector<std::string> cell_labels(cells);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) cell_labels[r * n + c] = "cell_" + std::to_string(r) + "_" +
                                                        std::to_string(c);

  std::vector<double> t0(static_cast<std::size_t>(cells) * 5 * cells, 0.0);
  std::vector<double> o0(static_cast<std::size_t>(cells) * 5 * 4, 0.0);
  std::vector<double> r0(static_cast<std::size_t>(cells) * 5, 0.0);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      int s = r * n + c;
      for (int a = 0; a < 5; ++a) {
        std::size_t row = (static_cast<std::size_t>(s) * 5 + a) * cells;
        if (s == 0) {  // safe house reached; episode over
          t0[row + 0] = 1.0;
          continue;
        }
        auto valid = [&](Dir d) {
          int nr = r + d.dr, nc = c + d.dc;
          return nr >= 0 && nr < n && nc >= 0 && nc < n;
        };
        for (const auto& [d, p] : move_outcomes(a, false, valid))
          t0[row + (r + d.dr) * n + (c + d.dc)] += p;
        r0[s * 5 + a] = -5.0 + 55.0 * t0[row + 0];
      }
    }
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      int s2 = r * n + c;
      // observation class of the safe house seen from this cell
      int correct;
      if (s2 == 0)
        correct = 3;
      else if (r > 0)
        correct = 0;  // house to the north
      else
        correct = 2;  // same row
      bool near = r + c <= 1;
      for (int a = 0; a < 5; ++a) {
        for (int o = 0; o < 4; ++o) {
          double p = 0.25;
          if (a == 4 && near) p = o == correct ? 0.8 : 0.2 / 3;
          o0[(static_cast<std::size_t>(s2) * 5 + a) * 4 + o] = p;
        }
      }
    }
  }
  auto other = std::make_shared<Frame>(AgentRole::other, cell_labels, actions,
                                       std::vector<std::string>{}, obs, t0, o0, r0);

  // Subject frame: relative fugitive positions, capture absorbing at (0,0).
  // Both agents' moves compose on the relative board; whatever overshoots the
  // band after composition is clamped back onto it.
  const int span = 2 * n - 1;
  const int rel_states = span * span;
  const int lo = -(n - 1), hi = n - 1;
  std::vector<std::string> rel_labels(rel_states);
  auto rel_index = [&](int dr, int dc) { return (dr - lo) * span + (dc - lo); };
  for (int dr = lo; dr <= hi; ++dr)
    for (int dc = lo; dc <= hi; ++dc)
      rel_labels[rel_index(dr, dc)] =
          "rel_" + std::to_string(dr) + "_" + std::to_string(dc);
  const int captured = rel_index(0, 0);

  std::vector<double> t1(static_cast<std::size_t>(rel_states) * 5 * 5 * rel_states, 0.0);
  std::vector<double> o1(static_cast<std::size_t>(rel_states) * 5 * 5 * 4, 0.0);
  std::vector<double> r1(static_cast<std::size_t>(rel_states) * 5 * 5, 0.0);
  auto clamp = [&](int v) { return v < lo ? lo : (v > hi ? hi : v); };
  for (int dr = lo; dr <= hi; ++dr) {
    for (int dc = lo; dc <= hi; ++dc) {
      int s = rel_index(dr, dc);
      auto valid = [&](Dir d) {
        return dr + d.dr >= lo && dr + d.dr <= hi && dc + d.dc >= lo && dc + d.dc <= hi;
      };
      for (int ai = 0; ai < 5; ++ai) {
        for (int aj = 0; aj < 5; ++aj) {
          std::size_t row =
              ((static_cast<std::size_t>(s) * 5 + ai) * 5 + aj) * rel_states;
          if (s == captured) {
            t1[row + captured] = 1.0;
            continue;
          }
          // the UAV's own move shifts the fugitive the opposite way
          for (const auto& [di, pi] : move_outcomes(ai, true, valid)) {
            for (const auto& [dj, pj] : move_outcomes(aj, false, valid)) {
              int nr = clamp(dr + di.dr + dj.dr);
              int nc = clamp(dc + di.dc + dj.dc);
              t1[row + rel_index(nr, nc)] += pi * pj;
            }
          }
          r1[(static_cast<std::size_t>(s) * 5 + ai) * 5 + aj] =
              -5.0 + 55.0 * t1[row + captured];
        }
      }
    }
  }
  for (int dr = lo; dr <= hi; ++dr) {
    for (int dc = lo; dc <= hi; ++dc) {
      int s2 = rel_index(dr, dc);
      int correct;
      if (s2 == captured)
        correct = 3;
      else if (dr < 0)
        correct = 0;
      else if (dr > 0)
        correct = 1;
      else
        correct = 2;
      for (int ai = 0; ai < 5; ++ai) {
        for (int aj = 0; aj < 5; ++aj) {
          for (int o = 0; o < 4; ++o) {
            double p = ai == 4 ? (o == correct ? 0.8 : 0.2 / 3) : 0.25;
            o1[((static_cast<std::size_t>(s2) * 5 + ai) * 5 + aj) * 4 + o] = p;
          }
        }
      }
    }
  }
  auto subject = std::make_shared<Frame>(AgentRole::subject, rel_labels, actions, actions,
                                         obs, t1, o1, r1);

  DomainSpec spec;
  spec.name = "uav" + std::to_string(n);
  spec.subject_frame = subject;
  spec.other_frame = other;
  std::vector<double> uniform(cells, 1.0 / cells);
  spec.default_beliefs.push_back(uniform);
  for (int corner : {n - 1, (n - 1) * n, n * n - 1}) {
    std::vector<double> b(cells, 0.0);
    b[corner] = 1.0;
    spec.default_beliefs.push_back(b);
  }
  spec.metadata["description"] = "uav reconnaissance on a " + std::to_string(n) + "x" +
                                 std::to_string(n) + " grid";
  spec.metadata["grid_side"] = std::to_string(n);
  return spec;
}

ModelSpace default_model_space(const DomainSpec& spec,
                               const std::vector<std::vector<double>>& beliefs) {
  if (beliefs.empty()) throw std::invalid_argument("belief list is empty");
  return belief_models(spec, beliefs);
}

ModelSpace default_model_space(const DomainSpec& spec, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("model count must be positive");
  Rng rng(seed);
  const int S = spec.other_frame->num_states();
  std::vector<std::vector<double>> beliefs;
  beliefs.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::vector<double> b(S);
    double total = 0;
    for (double& v : b) {
      v = -std::log(1.0 - rng.uniform());
      total += v;
    }
    for (double& v : b) v /= total;
    beliefs.push_back(std::move(b));
  }
  return belief_models(spec, beliefs);
}

}  // namespace idid
