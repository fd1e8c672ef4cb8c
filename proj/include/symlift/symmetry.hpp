#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symlift/group.hpp"
#include "symlift/model.hpp"

namespace symlift {

/// Argument-order normal form of a feature table.
struct CanonicalFeature {
  std::vector<double> table;
  /// reorder[j] is the original argument position placed at canonical
  /// position j. Ties between minimizing orders resolve to the
  /// lexicographically first reorder.
  std::vector<int> reorder;
  bool fully_symmetric = false;
  /// Per canonical position, the smallest position it can be swapped with
  /// without changing the table. Identity unless the table is invariant
  /// under every permutation within these classes.
  std::vector<int> position_class;
};

CanonicalFeature canonicalize_feature(const Feature& f);

/// Bipartite graph with variable nodes [0, n) and factor nodes [n, n + m).
struct ColoredFactorGraph {
  struct Edge {
    int var;
    int factor;  // factor index in [0, m), node id n + factor
    int color;   // 0 for symmetric factors, else position class + 1
  };

  int num_vars = 0;
  int num_factors = 0;
  std::vector<int> node_color;
  std::vector<Edge> edges;

  int num_nodes() const { return num_vars + num_factors; }
  int num_colors() const;
};

ColoredFactorGraph build_colored_factor_graph(const Model& model);

/// Coarsest equitable refinement of the graph's node coloring. Colors are
/// numbered canonically, so isomorphic inputs get corresponding outputs.
std::vector<int> refine_colors(const ColoredFactorGraph& g);

/// Generators of the color- and edge-color-preserving automorphism group of
/// `g`, split into variable and factor parts. group_order is the product of
/// the basic orbit lengths seen along the first search path.
GeneratorSet search_automorphisms(const ColoredFactorGraph& g);

/// search_automorphisms on a copy of `g` where `fixed_var` gets a fresh color.
GeneratorSet stabilizer_generators(const ColoredFactorGraph& g, int fixed_var);

struct VerifyResult {
  bool ok = true;
  std::string reason;
  Configuration witness;  // offending configuration, if any
  int feature = -1;       // offending feature index, if any
};

/// Checks Phi(x^pi) = Phi^gamma(x) on the all-zeros and all-ones
/// configurations plus `num_samples` random ones, and that gamma stays
/// inside the tie classes.
VerifyResult verify_generator(const Model& model, const PermutationPair& p,
                              int num_samples, std::uint64_t seed);

/// Search on the model's colored factor graph, optionally fixing one
/// variable, with every generator verified against the model. Throws
/// std::logic_error if a generator fails verification.
GeneratorSet detect_symmetries(const Model& model,
                               std::optional<int> fixed_var = std::nullopt);

/// x^pi, i.e. y[v] = x[pi[v]].
Configuration permute_configuration(const Configuration& x, const Permutation& pi);

/// Orbit partition of a domain under the group generated by `gens`.
/// Edges and arcs follow the skeleton order (arc 2e = (u, v), arc 2e + 1 =
/// (v, u) for edge e = {u < v}); factor assignments enumerate skeleton
/// clusters times their scope assignments.
OrbitPartition orbits_of(const GeneratorSet& gens, OrbitDomain domain,
                         const Model& model);

}  // namespace symlift
