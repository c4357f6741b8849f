#pragma once

#include <map>
#include <optional>
#include <vector>

#include "idid/level0.hpp"

namespace idid {

// Partition of a model space into classes of identical behavior. Classes are
// ordered by their lowest member id; the representative of a class is that
// lowest member. mass_map sends every member to its representative and is
// what belief aggregation applies.
struct BEPartition {
  std::vector<std::vector<int>> classes;   // member ids, ascending
  std::map<int, int> representative;       // class index -> representative id
  std::map<int, int> mass_map;             // member id -> representative id
};

// Group models whose full-horizon policy trees are structurally identical
// (action, tie set and children at every node).
BEPartition group_be(const ModelSpace& space, const std::map<int, PolicyTreePtr>& trees);

// Move each class's probability mass onto its representative, per state. The
// state marginal is untouched.
InteractiveBelief aggregate_belief_be(const InteractiveBelief& b, const BEPartition& p);

// Class of models sharing one action distribution at a time step.
struct AEClass {
  std::vector<int> members;       // model ids, ascending
  ActionDistribution action_dist;
  int step = 0;
};

// Partition by equal action distributions (within 1e-9), classes ordered by
// lowest member id.
std::vector<AEClass> ae_partition(const ModelSpace& space,
                                  const std::map<int, ActionDistribution>& action_dists,
                                  int step);

struct AECptResult {
  ModCPT cpt;             // rows keyed by class index
  bool exact = true;      // true iff every row was state-invariant
  double max_divergence = 0;  // largest row difference seen across states
};

// Class-level model update rows, mapping a source class under (action,
// observation) to a distribution over target classes. For each state with
// positive class mass the member rows are weighted by Pr(member | class, s);
// when that gives the same row for every such state the row is exact,
// otherwise the rows are averaged unweighted over those states and the whole
// table is flagged approximate. A class with zero mass under every state is
// an error. Members whose update row was pruned (impossible observation)
// drop out of the weighting; a pair no member supports yields no row.
AECptResult ae_mod_cpt(const std::vector<AEClass>& classes, const InteractiveBelief& prior,
                       const ModCPT& base_tau, const std::vector<AEClass>& target_classes);

struct ClusterResult {
  ModelSpace space;                      // retained models, original ids kept
  std::vector<std::vector<int>> clusters;  // member ids per cluster, ascending
  std::map<int, int> mass_map;           // member id -> retained id
};

// k-means on belief vectors under L1 distance: seeded farthest-point
// initialization, assignment/update iterations capped at 100, then the model
// nearest each mean is retained (lowest id on ties) and cluster mass mapped
// onto it. K >= |space| returns the identity clustering.
ClusterResult mc_cluster(const ModelSpace& space, int K, std::uint64_t seed);

// Index of the closest belief within eps (L1), lowest index on ties; empty
// when nothing is that close.
std::optional<int> epsilon_neighbor(const Belief& b, const std::vector<Belief>& solved,
                                    double eps);

}  // namespace idid
