#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symlift/coordinates.hpp"
#include "symlift/group.hpp"
#include "symlift/lift.hpp"
#include "symlift/lp.hpp"
#include "symlift/model.hpp"

namespace symlift {

// ---- local polytope ----

/// Node normalization, four edge-marginalization rows per skeleton edge and,
/// per cluster, normalization plus cluster->node and cluster->edge rows.
std::vector<LpRow> ground_local_rows(const GroundCoordinates& coords);

LinearProgram build_local_lp(const Model& model);
/// Ground rows with rho substituted; zero rows and duplicates removed.
LinearProgram build_local_lp(const LiftedModel& lm);

/// Uniform pseudomarginal: nodes 1/2, edges 1/4, clusters 2^-k.
std::vector<double> uniform_point(const GroundCoordinates& coords);
std::vector<double> uniform_point(const LiftedModel& lm);

// ---- cycle separation ----

/// Undirected multigraph whose edges carry the LP variables summed for the
/// "cut" weight (endpoints disagree) and the "nocut" weight (they agree).
/// A variable may appear twice in one list.
struct SeparationGraph {
  struct Edge {
    int a = 0, b = 0;
    std::vector<int> nocut_vars;
    std::vector<int> cut_vars;
  };
  int num_nodes = 0;
  std::vector<Edge> edges;
  std::vector<int> sources;
};

struct WalkStep {
  int edge = 0;
  bool in_f = false;  // crossing between mirror copies
};

struct MirrorPath {
  bool found = false;
  std::vector<WalkStep> steps;
  double weight = 0.0;
};

/// Shortest walk from copy 1 of `source` to copy 2 in the two-copy mirror
/// graph. Weights are clamped at 0. The number of in_f steps is odd.
MirrorPath mirror_shortest_path(const SeparationGraph& g, std::span<const double> cut_w,
                                std::span<const double> nocut_w, int source);

struct CycleCut {
  int graph = 0;
  int source = 0;
  std::vector<WalkStep> steps;
  double lhs = 0.0;  // at the separation point
  LpRow row;         // sum of step variables >= 1, merged and sorted
};

/// One graph over all variables with every variable as a source.
SeparationGraph ground_separation_graph(const GroundCoordinates& coords);

/// Stabilized lifted graph for the node orbit represented by `rep`: nodes
/// are orbits of the stabilizer, edges its edge orbits, and the edge
/// variables are the full-group cells. The single source is {rep}.
SeparationGraph lifted_separation_graph(const LiftedModel& lm, const Model& model,
                                        const GeneratorSet& stabilizer, int rep);

/// Most violated walk inequality over all graphs and sources, or nothing if
/// no LHS is below 1 - tol. Ties go to the earliest (graph, source).
std::optional<CycleCut> separate_cycles(std::span<const SeparationGraph> graphs,
                                        std::span<const double> tau, double tol = 1e-6);

double row_activity(const LpRow& row, std::span<const double> x);

// ---- MAP driver ----

enum class Polytope { kLocal, kCycle };
enum class Space { kGround, kLifted };

std::string to_string(Polytope p);
std::string to_string(Space s);
Polytope polytope_from_string(const std::string& s);
Space space_from_string(const std::string& s);

struct MapOptions {
  Polytope polytope = Polytope::kLocal;
  double alpha = 0.99;
  double tol = 1e-6;
  int max_cuts = 1000;
};

struct Decoded {
  std::vector<int> assignment;   // per variable (ground) or per node orbit (lifted)
  std::vector<double> centroid;  // tau_{v:1} per variable or node orbit
  bool fractional = false;
};

struct MapResult {
  std::string status;  // optimal | converged | cap | infeasible
  double objective = 0.0;
  std::vector<double> bounds;
  std::vector<CycleCut> cuts;
  int iterations = 0;  // separation rounds
  std::vector<double> tau;
  int lp_vars = 0;
  int lp_rows = 0;  // local rows, before cuts
  Decoded decode;
  double solve_ms = 0.0;
  double separation_ms = 0.0;
};

/// Solves `lp` and, for the cycle polytope, runs the in-out cutting-plane
/// loop with `graphs` and interior start `tau_in`.
MapResult cutting_plane_map(const LinearProgram& lp, std::span<const double> theta,
                            std::span<const SeparationGraph> graphs,
                            std::vector<double> tau_in, const MapOptions& opts,
                            int num_decode_nodes);

MapResult map_ground(const Model& model, const MapOptions& opts);
/// `stabilizers[o]` generates the stabilizer of the representative of node
/// orbit o; only needed for the cycle polytope.
MapResult map_lifted(const Model& model, const LiftedModel& lm,
                     const std::vector<GeneratorSet>& stabilizers, const MapOptions& opts);

/// x_v = 1 iff tau_{v:1} > 0.5, so ties go to 0. Node coordinates are
/// assumed to lead the vector (2v + t).
Decoded decode(std::span<const double> tau, int num_nodes);

}  // namespace symlift
