#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace symlift {

using Permutation = std::vector<int>;

Permutation identity_permutation(int n);
bool is_permutation(const Permutation& p, int n);
bool is_identity(const Permutation& p);
Permutation compose(const Permutation& outer, const Permutation& inner);  // outer(inner(i))
Permutation inverse(const Permutation& p);

/// A model automorphism candidate: pi permutes variables, gamma permutes
/// features, with Phi(x^pi) = Phi^gamma(x).
struct PermutationPair {
  Permutation pi;
  Permutation gamma;

  bool operator==(const PermutationPair&) const = default;
  bool operator<(const PermutationPair& o) const {
    return pi != o.pi ? pi < o.pi : gamma < o.gamma;
  }
};

PermutationPair compose(const PermutationPair& outer, const PermutationPair& inner);

struct GeneratorSet {
  std::vector<PermutationPair> generators;
  std::optional<std::uint64_t> group_order;  // empty when unknown or too large
};

class UnionFind {
 public:
  explicit UnionFind(int n);
  int find(int x);
  /// Links the two classes; the smaller root survives.
  bool unite(int a, int b);
  int size() const { return static_cast<int>(parent_.size()); }

 private:
  std::vector<int> parent_;
};

enum class OrbitDomain { kVars, kFeatures, kEdges, kArcs, kFactorAssignments };

std::string to_string(OrbitDomain d);
OrbitDomain orbit_domain_from_string(const std::string& s);

/// Cells are sorted by their minimum element, which is the representative.
struct OrbitPartition {
  OrbitDomain domain = OrbitDomain::kVars;
  std::vector<int> cell_of;
  std::vector<std::vector<int>> cells;

  int num_cells() const { return static_cast<int>(cells.size()); }
  int representative(int cell) const { return cells[cell].front(); }
  /// True if every cell of this partition lies inside one cell of `coarser`.
  bool refines(const OrbitPartition& coarser) const;

  static OrbitPartition from_union_find(OrbitDomain domain, UnionFind& uf);
  static OrbitPartition from_labels(OrbitDomain domain, const std::vector<int>& labels);
};

}  // namespace symlift
