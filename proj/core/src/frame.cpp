#include "idid/frame.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace idid {

Frame::Frame(AgentRole role,
             std::vector<std::string> states,
             std::vector<std::string> own_actions,
             std::vector<std::string> other_actions,
             std::vector<std::string> observations,
             std::vector<double> transition,
             std::vector<double> observation,
             std::vector<double> reward)
    : role_(role),
      states_(std::move(states)),
      own_actions_(std::move(own_actions)),
      other_actions_(std::move(other_actions)),
      observations_(std::move(observations)),
      transition_(std::move(transition)),
      observation_(std::move(observation)),
      reward_(std::move(reward)) {
  if (states_.empty() || own_actions_.empty() || observations_.empty())
    throw std::invalid_argument("frame: states, actions and observations must be non-empty");
  const std::size_t n = states_.size(), a = own_actions_.size(), e = oext(), o = observations_.size();
  if (transition_.size() != n * a * e * n)
    throw std::invalid_argument("frame: transition table has wrong size");
  if (observation_.size() != n * a * e * o)
    throw std::invalid_argument("frame: observation table has wrong size");
  if (reward_.size() != n * a * e)
    throw std::invalid_argument("frame: reward table has wrong size");
}

double Frame::min_reward() const {
  return *std::min_element(reward_.begin(), reward_.end());
}

double Frame::max_reward() const {
  return *std::max_element(reward_.begin(), reward_.end());
}

namespace {

std::string row_key(const Frame& f, int s, int a, int ao, bool primed) {
  std::ostringstream os;
  os << (primed ? "s'=" : "s=") << f.state_labels()[s]
     << ", a=" << f.action_labels()[a];
  if (!f.other_action_labels().empty())
    os << ", a_other=" << f.other_action_labels()[ao];
  return os.str();
}

}  // namespace

std::vector<std::string> validate_frame(const Frame& f) {
  std::vector<std::string> diags;
  const int ne = f.other_action_labels().empty() ? 1 : f.num_other_actions();
  for (int s = 0; s < f.num_states(); ++s) {
    for (int a = 0; a < f.num_actions(); ++a) {
      for (int ao = 0; ao < ne; ++ao) {
        double tsum = 0, osum = 0;
        bool trange = true, orange = true;
        for (int s2 = 0; s2 < f.num_states(); ++s2) {
          const double p = f.transition(s, a, ao, s2);
          tsum += p;
          if (p < 0.0 || p > 1.0) trange = false;
        }
        for (int o = 0; o < f.num_obs(); ++o) {
          const double p = f.observation(s, a, ao, o);  // here s plays the s' role
          osum += p;
          if (p < 0.0 || p > 1.0) orange = false;
        }
        if (!trange)
          diags.push_back("transition row (" + row_key(f, s, a, ao, false) + ") has entries outside [0,1]");
        if (std::fabs(tsum - 1.0) > kNormTol)
          diags.push_back("transition row (" + row_key(f, s, a, ao, false) + ") sums to " + format_double(tsum));
        if (!orange)
          diags.push_back("observation row (" + row_key(f, s, a, ao, true) + ") has entries outside [0,1]");
        if (std::fabs(osum - 1.0) > kNormTol)
          diags.push_back("observation row (" + row_key(f, s, a, ao, true) + ") sums to " + format_double(osum));
      }
    }
  }
  return diags;
}

FramePtr with_role(const Frame& f, AgentRole role) {
  return std::make_shared<Frame>(role, f.state_labels(), f.action_labels(),
                                 f.other_action_labels(), f.observation_labels(),
                                 f.transition_table(), f.observation_table(),
                                 f.reward_table());
}

}  // namespace idid
