#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "idid/model.hpp"

namespace idid {

// One benchmark problem: the subject agent's joint-action frame plus the
// single-agent frame it ascribes to the other agent, with a small default
// belief grid for seeding candidate model sets.
struct DomainSpec {
  std::string name;
  FramePtr subject_frame;
  FramePtr other_frame;
  std::vector<std::vector<double>> default_beliefs;
  std::map<std::string, std::string> metadata;
};

DomainSpec build_tiger();
DomainSpec build_machine_maintenance();
// Reconnaissance on an n x n grid, n in {3, 5}. The subject frame lives on
// relative positions, the fugitive frame on absolute cells.
DomainSpec build_uav_grid(int n);

// Level-0 candidate models for the other agent, one per belief, ids assigned
// 0..n-1 in input order.
ModelSpace default_model_space(const DomainSpec& spec,
                               const std::vector<std::vector<double>>& beliefs);
// `count` beliefs drawn uniformly from the simplex, reproducible from seed.
ModelSpace default_model_space(const DomainSpec& spec, int count, std::uint64_t seed);

}  // namespace idid
