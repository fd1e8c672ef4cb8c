#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "symlift/coordinates.hpp"
#include "symlift/group.hpp"
#include "symlift/model.hpp"

namespace symlift {

class LiftError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Orbit partitions of the four domains a lifted model is built from.
struct LiftPartitions {
  OrbitPartition vars;
  OrbitPartition edges;
  OrbitPartition arcs;
  OrbitPartition factor_assignments;
};

LiftPartitions partitions_from_generators(const GeneratorSet& gens, const Model& model);

/// Multigraph on node orbits, one edge per edge orbit (from its
/// representative). Self-loops and parallel edges are kept.
struct LiftedGraph {
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;
};

/// Lifted coordinates: node orbit x {0,1}, then edge orbit x {00,11}, then
/// arc orbits (the 01 cells), then factor-assignment orbits.
class LiftedModel {
 public:
  LiftedModel(const Model& model, LiftPartitions parts);

  const GroundCoordinates& coords() const { return coords_; }
  const LiftPartitions& partitions() const { return parts_; }

  int num_node_orbits() const { return parts_.vars.num_cells(); }
  int num_edge_orbits() const { return parts_.edges.num_cells(); }
  int num_arc_orbits() const { return parts_.arcs.num_cells(); }
  int num_factor_assignment_orbits() const { return parts_.factor_assignments.num_cells(); }

  int num_cells() const { return static_cast<int>(cells_.size()); }
  int node_cell(int orbit, int t) const { return 2 * orbit + t; }
  int edge_cell(int orbit, int t) const { return edge_base_ + 2 * orbit + t; }  // t=0: 00, t=1: 11
  int arc_cell(int orbit) const { return arc_base_ + orbit; }
  int factor_cell(int orbit) const { return factor_base_ + orbit; }

  /// rho: ground coordinate -> lifted cell.
  const std::vector<int>& rho() const { return rho_; }
  int rho(int coord) const { return rho_[coord]; }
  const std::vector<int>& cell(int c) const { return cells_[c]; }
  int cell_size(int c) const { return static_cast<int>(cells_[c].size()); }
  int representative(int c) const { return cells_[c].front(); }

  /// True when both arc directions of the edge orbit fall in one arc orbit.
  bool self_paired(int edge_orbit) const { return self_paired_[edge_orbit]; }

  /// theta-bar[c] = sum of theta-o over cell c.
  const std::vector<double>& theta_bar() const { return theta_bar_; }
  const std::vector<double>& theta_ground() const { return theta_ground_; }

  const LiftedGraph& graph() const { return graph_; }

  std::string describe(int cell) const;

 private:
  GroundCoordinates coords_;
  LiftPartitions parts_;
  int edge_base_ = 0, arc_base_ = 0, factor_base_ = 0;
  std::vector<int> rho_;
  std::vector<std::vector<int>> cells_;
  std::vector<bool> self_paired_;
  std::vector<double> theta_bar_;
  std::vector<double> theta_ground_;
  LiftedGraph graph_;
};

/// Throws LiftError when theta-o is not constant on some cell.
LiftedModel build_lifted_model(const Model& model, const GeneratorSet& gens);
LiftedModel build_lifted_model(const Model& model, LiftPartitions parts);

/// Cell means of a ground vector.
std::vector<double> lift_vector(std::span<const double> tau, const LiftedModel& lm);
/// Broadcast of cell values to their members.
std::vector<double> unlift_vector(std::span<const double> tau_bar, const LiftedModel& lm);

}  // namespace symlift
