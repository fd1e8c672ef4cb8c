#include "symlift/lift.hpp"

#include <cmath>

#include "symlift/symmetry.hpp"

namespace symlift {

LiftPartitions partitions_from_generators(const GeneratorSet& gens, const Model& model) {
  return {orbits_of(gens, OrbitDomain::kVars, model),
          orbits_of(gens, OrbitDomain::kEdges, model),
          orbits_of(gens, OrbitDomain::kArcs, model),
          orbits_of(gens, OrbitDomain::kFactorAssignments, model)};
}

LiftedModel::LiftedModel(const Model& model, LiftPartitions parts)
    : coords_(model), parts_(std::move(parts)) {
  const int n = coords_.num_vars(), ne = coords_.num_edges();
  int num_fa = 0;
  for (int c = 0; c < coords_.num_clusters(); ++c)
    num_fa += 1 << coords_.skeleton().hyperedges[c].size();
  if (static_cast<int>(parts_.vars.cell_of.size()) != n ||
      static_cast<int>(parts_.edges.cell_of.size()) != ne ||
      static_cast<int>(parts_.arcs.cell_of.size()) != 2 * ne ||
      static_cast<int>(parts_.factor_assignments.cell_of.size()) != num_fa)
    throw std::invalid_argument("orbit partitions do not match the model");

  edge_base_ = 2 * num_node_orbits();
  arc_base_ = edge_base_ + 2 * num_edge_orbits();
  factor_base_ = arc_base_ + num_arc_orbits();
  const int total = factor_base_ + num_factor_assignment_orbits();

  rho_.assign(coords_.num_coords(), -1);
  for (int v = 0; v < n; ++v)
    for (int t = 0; t < 2; ++t) rho_[coords_.node(v, t)] = node_cell(parts_.vars.cell_of[v], t);
  for (int e = 0; e < ne; ++e) {
    const int eo = parts_.edges.cell_of[e];
    rho_[coords_.edge(e, 0, 0)] = edge_cell(eo, 0);
    rho_[coords_.edge(e, 1, 1)] = edge_cell(eo, 1);
    rho_[coords_.arc(2 * e)] = arc_cell(parts_.arcs.cell_of[2 * e]);
    rho_[coords_.arc(2 * e + 1)] = arc_cell(parts_.arcs.cell_of[2 * e + 1]);
  }
  {
    int fa = 0;
    for (int c = 0; c < coords_.num_clusters(); ++c) {
      const int size = 1 << coords_.skeleton().hyperedges[c].size();
      for (int a = 0; a < size; ++a, ++fa)
        rho_[coords_.cluster(c, a)] = factor_cell(parts_.factor_assignments.cell_of[fa]);
    }
  }

  cells_.assign(total, {});
  for (int i = 0; i < coords_.num_coords(); ++i) cells_[rho_[i]].push_back(i);
  for (int c = 0; c < total; ++c)
    if (cells_[c].empty()) throw std::logic_error("empty lifted cell");

  self_paired_.assign(num_edge_orbits(), false);
  graph_.num_nodes = num_node_orbits();
  for (int eo = 0; eo < num_edge_orbits(); ++eo) {
    const int e = parts_.edges.representative(eo);
    self_paired_[eo] = parts_.arcs.cell_of[2 * e] == parts_.arcs.cell_of[2 * e + 1];
    const auto [u, v] = coords_.skeleton().edges[e];
    graph_.edges.emplace_back(parts_.vars.cell_of[u], parts_.vars.cell_of[v]);
  }

  theta_ground_ = coords_.theta(model);
  theta_bar_.assign(total, 0.0);
  for (int c = 0; c < total; ++c) {
    const double ref = theta_ground_[cells_[c].front()];
    for (int i : cells_[c]) {
      const double d = std::abs(theta_ground_[i] - ref);
      if (d > 1e-12 * std::max(1.0, std::abs(ref)))
        throw LiftError("cell not theta-constant: coordinates " +
                        coords_.describe(cells_[c].front()) + " and " + coords_.describe(i));
      theta_bar_[c] += theta_ground_[i];
    }
  }
}

std::string LiftedModel::describe(int c) const {
  std::string kind;
  if (c < edge_base_) kind = "node";
  else if (c < arc_base_) kind = "edge";
  else if (c < factor_base_) kind = "arc";
  else kind = "factor";
  return kind + " cell of " + coords_.describe(representative(c)) + " (size " +
         std::to_string(cell_size(c)) + ")";
}

LiftedModel build_lifted_model(const Model& model, const GeneratorSet& gens) {
  return LiftedModel(model, partitions_from_generators(gens, model));
}

LiftedModel build_lifted_model(const Model& model, LiftPartitions parts) {
  return LiftedModel(model, std::move(parts));
}

std::vector<double> lift_vector(std::span<const double> tau, const LiftedModel& lm) {
  if (static_cast<int>(tau.size()) != lm.coords().num_coords())
    throw std::invalid_argument("lift_vector: dimension mismatch");
  std::vector<double> out(lm.num_cells(), 0.0);
  for (int c = 0; c < lm.num_cells(); ++c) {
    for (int i : lm.cell(c)) out[c] += tau[i];
    out[c] /= lm.cell_size(c);
  }
  return out;
}

std::vector<double> unlift_vector(std::span<const double> tau_bar, const LiftedModel& lm) {
  if (static_cast<int>(tau_bar.size()) != lm.num_cells())
    throw std::invalid_argument("unlift_vector: dimension mismatch");
  std::vector<double> out(lm.coords().num_coords());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = tau_bar[lm.rho(static_cast<int>(i))];
  return out;
}

}  // namespace symlift
