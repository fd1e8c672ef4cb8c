#pragma once

#include <span>
#include <string>
#include <vector>

#include "symlift/model.hpp"

namespace symlift {

/// Layout of the ground overcomplete vector: node coordinates (v:t) first,
/// then four coordinates per skeleton edge {u < v} indexed 2*t_u + t_v, then
/// one coordinate per cluster assignment.
class GroundCoordinates {
 public:
  explicit GroundCoordinates(const Model& model);

  int num_coords() const { return num_coords_; }
  int num_vars() const { return skeleton_.num_vars; }
  int num_edges() const { return static_cast<int>(skeleton_.edges.size()); }
  int num_clusters() const { return static_cast<int>(skeleton_.hyperedges.size()); }
  const Skeleton& skeleton() const { return skeleton_; }

  int node(int v, int t) const { return 2 * v + t; }
  int edge(int e, int tu, int tv) const { return edge_offset_ + 4 * e + 2 * tu + tv; }
  int cluster(int c, int assignment) const { return cluster_offset_[c] + assignment; }
  /// Coordinate of tau_{tail:0, head:1} for arc 2e = (u, v) or 2e + 1 = (v, u).
  int arc(int arc_id) const {
    return arc_id % 2 == 0 ? edge(arc_id / 2, 0, 1) : edge(arc_id / 2, 1, 0);
  }

  /// theta-o laid out on these coordinates.
  std::vector<double> theta(const Model& model) const;
  /// Phi-o(x): 0/1 indicator vector of a configuration.
  std::vector<double> indicator(std::span<const std::uint8_t> x) const;
  /// Indices of the coordinates that are 1 in Phi-o(x).
  void active(std::span<const std::uint8_t> x, std::vector<int>& out) const;

  std::string describe(int coord) const;

 private:
  Skeleton skeleton_;
  int edge_offset_ = 0;
  std::vector<int> cluster_offset_;
  int num_coords_ = 0;
};

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace symlift
