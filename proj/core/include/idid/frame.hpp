#pragma once

#include <memory>
#include <string>
#include <vector>

#include "idid/common.hpp"

namespace idid {

enum class AgentRole { subject, other };

// Finite decision problem tables for one agent. A frame either models a
// single agent acting alone (no other-agent actions; tables keyed on state
// and own action) or an agent embedded with one other agent (tables keyed on
// state and the joint action, own action first).
//
// Construction does not validate normalization -- validate_frame reports
// diagnostics so that loaders can reject bad tables with useful messages.
class Frame {
 public:
  Frame(AgentRole role,
        std::vector<std::string> states,
        std::vector<std::string> own_actions,
        std::vector<std::string> other_actions,
        std::vector<std::string> observations,
        std::vector<double> transition,   // [s][a][ao][s2], ao axis absent when level 0
        std::vector<double> observation,  // [s2][a][ao][o]
        std::vector<double> reward);      // [s][a][ao]

  AgentRole role() const { return role_; }
  bool is_level0() const { return other_actions_.empty(); }

  int num_states() const { return static_cast<int>(states_.size()); }
  int num_actions() const { return static_cast<int>(own_actions_.size()); }
  int num_other_actions() const { return static_cast<int>(other_actions_.size()); }
  int num_obs() const { return static_cast<int>(observations_.size()); }

  const std::vector<std::string>& state_labels() const { return states_; }
  const std::vector<std::string>& action_labels() const { return own_actions_; }
  const std::vector<std::string>& other_action_labels() const { return other_actions_; }
  const std::vector<std::string>& observation_labels() const { return observations_; }

  double transition(int s, int a, int ao, int s2) const {
    return transition_[t_index(s, a, ao, s2)];
  }
  double observation(int s2, int a, int ao, int o) const {
    return observation_[o_index(s2, a, ao, o)];
  }
  double reward(int s, int a, int ao) const { return reward_[r_index(s, a, ao)]; }

  // level-0 accessors
  double transition(int s, int a, int s2) const { return transition_[t_index(s, a, 0, s2)]; }
  double observation(int s2, int a, int o) const { return observation_[o_index(s2, a, 0, o)]; }
  double reward(int s, int a) const { return reward_[r_index(s, a, 0)]; }

  double min_reward() const;
  double max_reward() const;

  const std::vector<double>& transition_table() const { return transition_; }
  const std::vector<double>& observation_table() const { return observation_; }
  const std::vector<double>& reward_table() const { return reward_; }

 private:
  // width of the other-action axis in storage (1 when the frame is level 0)
  int oext() const { return other_actions_.empty() ? 1 : static_cast<int>(other_actions_.size()); }
  int t_index(int s, int a, int ao, int s2) const {
    return ((s * num_actions() + a) * oext() + ao) * num_states() + s2;
  }
  int o_index(int s2, int a, int ao, int o) const {
    return ((s2 * num_actions() + a) * oext() + ao) * num_obs() + o;
  }
  int r_index(int s, int a, int ao) const { return (s * num_actions() + a) * oext() + ao; }

  AgentRole role_;
  std::vector<std::string> states_, own_actions_, other_actions_, observations_;
  std::vector<double> transition_, observation_, reward_;
};

using FramePtr = std::shared_ptr<const Frame>;

// Returns one human-readable diagnostic per violated table row (bad sum or
// out-of-range entry), naming the row's state/action key. Empty means valid.
std::vector<std::string> validate_frame(const Frame& f);

// Copy of the frame with the role flag changed. In the symmetric built-in
// domains the other agent's tables written own-action-first coincide with the
// subject's, so this is all that is needed to view them from the other seat.
FramePtr with_role(const Frame& f, AgentRole role);

}  // namespace idid
