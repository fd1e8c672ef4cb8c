#include "symlift/group.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

namespace symlift {

Permutation identity_permutation(int n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  return p;
}

bool is_permutation(const Permutation& p, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<bool> seen(n, false);
  for (int x : p) {
    if (x < 0 || x >= n || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

bool is_identity(const Permutation& p) {
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] != static_cast<int>(i)) return false;
  return true;
}

Permutation compose(const Permutation& outer, const Permutation& inner) {
  Permutation r(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) r[i] = outer[inner[i]];
  return r;
}

Permutation inverse(const Permutation& p) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<int>(i);
  return r;
}

PermutationPair compose(const PermutationPair& outer, const PermutationPair& inner) {
  return {compose(outer.pi, inner.pi), compose(outer.gamma, inner.gamma)};
}

UnionFind::UnionFind(int n) : parent_(n) {
  std::iota(parent_.begin(), parent_.end(), 0);
}

int UnionFind::find(int x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (b < a) std::swap(a, b);
  parent_[b] = a;
  return true;
}

std::string to_string(OrbitDomain d) {
  switch (d) {
    case OrbitDomain::kVars: return "vars";
    case OrbitDomain::kFeatures: return "features";
    case OrbitDomain::kEdges: return "edges";
    case OrbitDomain::kArcs: return "arcs";
    case OrbitDomain::kFactorAssignments: return "factor-assignments";
  }
  return "?";
}

OrbitDomain orbit_domain_from_string(const std::string& s) {
  if (s == "vars") return OrbitDomain::kVars;
  if (s == "features") return OrbitDomain::kFeatures;
  if (s == "edges") return OrbitDomain::kEdges;
  if (s == "arcs") return OrbitDomain::kArcs;
  if (s == "factor-assignments") return OrbitDomain::kFactorAssignments;
  throw std::invalid_argument("unknown orbit domain '" + s + "'");
}

bool OrbitPartition::refines(const OrbitPartition& coarser) const {
  if (cell_of.size() != coarser.cell_of.size()) return false;
  for (const auto& cell : cells) {
    const int target = coarser.cell_of[cell.front()];
    for (int x : cell)
      if (coarser.cell_of[x] != target) return false;
  }
  return true;
}

OrbitPartition OrbitPartition::from_union_find(OrbitDomain domain, UnionFind& uf) {
  std::vector<int> labels(uf.size());
  for (int i = 0; i < uf.size(); ++i) labels[i] = uf.find(i);
  return from_labels(domain, labels);
}

OrbitPartition OrbitPartition::from_labels(OrbitDomain domain,
                                           const std::vector<int>& labels) {
  OrbitPartition p;
  p.domain = domain;
  p.cell_of.assign(labels.size(), -1);
  std::map<int, int> cell_of_label;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, fresh] = cell_of_label.try_emplace(labels[i], p.num_cells());
    if (fresh) p.cells.emplace_back();
    p.cells[it->second].push_back(static_cast<int>(i));
    p.cell_of[i] = it->second;
  }
  return p;
}

}  // namespace symlift
