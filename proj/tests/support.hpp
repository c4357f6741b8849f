#pragma once

// Brute-force and simulation oracles. Everything here recomputes results
// straight from the frame tables with its own tree representation and its
// own arithmetic; nothing routes through the library's solvers, so these
// serve as independent references in tests.

#include <cstdint>
#include <vector>

#include "idid/frame.hpp"
#include "idid/level0.hpp"

namespace oracle {

struct Tree {
  int action = 0;
  std::vector<Tree> children;
};

// expected total reward of executing the tree, per starting state
std::vector<double> tree_alpha(const idid::Frame& f, const Tree& t);
double tree_value(const idid::Frame& f, const Tree& t, const std::vector<double>& b);

// all complete depth-`depth` trees in lexicographic order: root action major,
// then children by observation index
std::vector<Tree> enumerate_trees(int num_actions, int num_obs, int depth);

struct BestTree {
  Tree tree;
  double value = 0;
};
// exhaustive optimum: computes the maximum value over all complete trees and
// returns the first tree (in enumeration order) within 1e-9 of it
BestTree best_tree(const idid::Frame& f, const std::vector<double>& b, int depth);

// Monte-Carlo estimate of the tree's value from belief b
struct Rollout {
  double mean = 0;
  double sem = 0;  // standard error of the mean
};
Rollout rollout_tree(const idid::Frame& f, const Tree& t, const std::vector<double>& b,
                     int runs, unsigned seed);

// shape-only view of a library tree, for comparing against enumerated trees
Tree shape_of(const idid::PolicyTreePtr& t);
bool same_shape(const Tree& a, const Tree& b);

// Flat dynamic program for a subject facing a single known opponent policy:
// the joint state is (physical state, opponent tree node). Only the subject
// frame's tables and the opponent's literal tree drive it.
struct CrossedResult {
  int root_action = 0;
  double value = 0;
};
CrossedResult crossed_dp(const idid::Frame& fi, const idid::Frame& fj,
                         const std::vector<double>& b0, const Tree& jtree, int horizon);

}  // namespace oracle
