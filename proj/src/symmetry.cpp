#include "symlift/symmetry.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace symlift {

CanonicalFeature canonicalize_feature(const Feature& f) {
  const int k = f.arity();
  const std::uint32_t size = 1u << k;
  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);

  CanonicalFeature best;
  best.fully_symmetric = true;
  std::vector<double> table(size);
  do {
    for (std::uint32_t b = 0; b < size; ++b) {
      std::uint32_t a = 0;
      for (int j = 0; j < k; ++j) {
        const std::uint32_t bit = (b >> (k - 1 - j)) & 1u;
        a |= bit << (k - 1 - order[j]);
      }
      table[b] = f.table[a];
    }
    if (table != f.table) best.fully_symmetric = false;
    if (best.table.empty() || table < best.table) {
      best.table = table;
      best.reorder = order;
    }
  } while (std::next_permutation(order.begin(), order.end()));

  // Position classes: orbits of the canonical table's own symmetries. Only
  // used when the symmetries are every permutation within those orbits;
  // otherwise positions stay distinct.
  best.position_class.resize(k);
  std::iota(best.position_class.begin(), best.position_class.end(), 0);
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t num_sym = 0;
  do {
    bool same = true;
    for (std::uint32_t b = 0; b < size && same; ++b) {
      std::uint32_t a = 0;
      for (int j = 0; j < k; ++j)
        a |= ((b >> (k - 1 - j)) & 1u) << (k - 1 - order[j]);
      same = best.table[b] == best.table[a];
    }
    if (!same) continue;
    ++num_sym;
    for (int j = 0; j < k; ++j) {
      const int lo = std::min(best.position_class[j], best.position_class[order[j]]);
      const int hi = std::max(best.position_class[j], best.position_class[order[j]]);
      for (int& c : best.position_class)
        if (c == hi) c = lo;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  std::vector<int> count(k, 0);
  for (int c : best.position_class) ++count[c];
  std::uint64_t young = 1;
  for (int c : count)
    for (int j = 2; j <= c; ++j) young *= static_cast<std::uint64_t>(j);
  if (young != num_sym) std::iota(best.position_class.begin(), best.position_class.end(), 0);
  return best;
}

int ColoredFactorGraph::num_colors() const {
  return node_color.empty()
             ? 0
             : *std::max_element(node_color.begin(), node_color.end()) + 1;
}

ColoredFactorGraph build_colored_factor_graph(const Model& model) {
  ColoredFactorGraph g;
  g.num_vars = model.num_vars();
  g.num_factors = model.num_features();
  g.node_color.assign(g.num_nodes(), 0);

  std::vector<CanonicalFeature> canon;
  canon.reserve(model.num_features());
  std::map<std::pair<int, std::vector<double>>, int> factor_color;
  for (int i = 0; i < model.num_features(); ++i) {
    canon.push_back(canonicalize_feature(model.feature(i)));
    factor_color.try_emplace({model.tie_class_of(i), canon.back().table}, 0);
  }
  int next = 1;
  for (auto& [key, color] : factor_color) color = next++;

  for (int i = 0; i < model.num_features(); ++i) {
    const CanonicalFeature& c = canon[i];
    g.node_color[g.num_vars + i] =
        factor_color.at({model.tie_class_of(i), c.table});
    const auto& scope = model.feature(i).scope;
    for (int j = 0; j < static_cast<int>(scope.size()); ++j) {
      g.edges.push_back({scope[c.reorder[j]], i, c.fully_symmetric ? 0 : c.position_class[j] + 1});
    }
  }
  return g;
}

namespace {

using Adjacency = std::vector<std::vector<std::pair<int, int>>>;

Adjacency build_adjacency(const ColoredFactorGraph& g) {
  Adjacency adj(g.num_nodes());
  for (const auto& e : g.edges) {
    adj[e.var].emplace_back(g.num_vars + e.factor, e.color);
    adj[g.num_vars + e.factor].emplace_back(e.var, e.color);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

int canonical_renumber(std::vector<int>& colors) {
  std::vector<int> values = colors;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  for (int& c : colors)
    c = static_cast<int>(std::lower_bound(values.begin(), values.end(), c) -
                         values.begin());
  return static_cast<int>(values.size());
}

// Iterates (color, sorted neighbour (color, edge color) multiset) relabeling
// until the number of classes stops growing. New ids are ranks of the keys,
// which keeps the numbering isomorphism-invariant.
std::vector<int> refine(const Adjacency& adj, std::vector<int> colors) {
  const int n = static_cast<int>(colors.size());
  int num = canonical_renumber(colors);
  std::vector<std::vector<std::pair<int, int>>> sig(n);
  std::vector<int> order(n);
  while (true) {
    for (int v = 0; v < n; ++v) {
      sig[v].clear();
      for (auto [w, ec] : adj[v]) sig[v].emplace_back(colors[w], ec);
      std::sort(sig[v].begin(), sig[v].end());
    }
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (colors[a] != colors[b]) return colors[a] < colors[b];
      return sig[a] < sig[b];
    });
    std::vector<int> next(n);
    int id = 0;
    for (int i = 0; i < n; ++i) {
      if (i > 0) {
        const int a = order[i - 1], b = order[i];
        if (colors[a] != colors[b] || sig[a] != sig[b]) ++id;
      }
      next[order[i]] = id;
    }
    const int count = n == 0 ? 0 : id + 1;
    colors = std::move(next);
    if (count == num) return colors;
    num = count;
  }
}

class AutomorphismSearch {
 public:
  explicit AutomorphismSearch(const ColoredFactorGraph& g)
      : g_(g), adj_(build_adjacency(g)), n_(g.num_nodes()) {}

  GeneratorSet run() {
    GeneratorSet result;
    std::vector<int> part = refine(adj_, g_.node_color);
    // First path of the search tree.
    while (!is_discrete(part)) {
      std::vector<int> cell = target_cell(part);
      path_parts_.push_back(part);
      path_cells_.push_back(cell);
      part = individualize(part, cell.front());
    }
    path_parts_.push_back(part);
    first_leaf_ = part;
    leaf_node_of_color_.assign(n_, -1);
    for (int v = 0; v < n_; ++v) leaf_node_of_color_[first_leaf_[v]] = v;

    std::vector<Permutation> found;
    std::uint64_t order = 1;
    bool order_known = true;
    const int levels = static_cast<int>(path_cells_.size());
    for (int level = levels - 1; level >= 0; --level) {
      const std::vector<int>& cell = path_cells_[level];
      const int base = cell.front();
      UnionFind uf(n_);
      for (const auto& p : found)
        for (int v = 0; v < n_; ++v) uf.unite(v, p[v]);
      std::vector<int> failed_roots;
      for (std::size_t idx = 1; idx < cell.size(); ++idx) {
        const int w = cell[idx];
        if (uf.find(w) == uf.find(base)) continue;
        const int rw = uf.find(w);
        if (std::find(failed_roots.begin(), failed_roots.end(), rw) !=
            failed_roots.end())
          continue;
        auto sigma = explore(individualize(path_parts_[level], w), level + 1);
        if (sigma) {
          for (int v = 0; v < n_; ++v) uf.unite(v, (*sigma)[v]);
          found.push_back(std::move(*sigma));
          // Roots may have moved; recompute the failed list.
          for (int& r : failed_roots) r = uf.find(r);
        } else {
          failed_roots.push_back(rw);
        }
      }
      std::uint64_t orbit = 0;
      const int root = uf.find(base);
      for (int v : cell)
        if (uf.find(v) == root) ++orbit;
      if (order_known && __builtin_mul_overflow(order, orbit, &order))
        order_known = false;
    }

    for (const auto& sigma : found) {
      PermutationPair pp;
      pp.pi.assign(sigma.begin(), sigma.begin() + g_.num_vars);
      pp.gamma.resize(g_.num_factors);
      for (int i = 0; i < g_.num_factors; ++i)
        pp.gamma[i] = sigma[g_.num_vars + i] - g_.num_vars;
      result.generators.push_back(std::move(pp));
    }
    if (order_known) result.group_order = order;
    return result;
  }

 private:
  static bool is_discrete(const std::vector<int>& part) {
    std::vector<int> sorted = part;
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }

  // First largest non-singleton cell (smallest color among the largest).
  std::vector<int> target_cell(const std::vector<int>& part) const {
    std::vector<int> size(n_, 0);
    for (int c : part) ++size[c];
    int best = -1;
    for (int c = 0; c < n_; ++c)
      if (size[c] > 1 && (best < 0 || size[c] > size[best])) best = c;
    std::vector<int> cell;
    for (int v = 0; v < n_; ++v)
      if (part[v] == best) cell.push_back(v);
    return cell;
  }

  std::vector<int> individualize(std::vector<int> part, int v) const {
    part[v] = n_;  // fresh color above every existing id
    return refine(adj_, std::move(part));
  }

  bool compatible(const std::vector<int>& a, const std::vector<int>& b) const {
    std::vector<int> ca(n_ + 1, 0), cb(n_ + 1, 0);
    for (int c : a) ++ca[c];
    for (int c : b) ++cb[c];
    return ca == cb;
  }

  bool is_automorphism(const Permutation& sigma) const {
    std::vector<std::pair<int, int>> mapped;
    for (int v = 0; v < n_; ++v) {
      const int w = sigma[v];
      if (g_.node_color[v] != g_.node_color[w]) return false;
      if (adj_[v].size() != adj_[w].size()) return false;
      mapped.clear();
      for (auto [x, ec] : adj_[v]) mapped.emplace_back(sigma[x], ec);
      std::sort(mapped.begin(), mapped.end());
      if (mapped != adj_[w]) return false;
    }
    return true;
  }

  // Depth-first search below `part` for a leaf equivalent to the first leaf.
  std::optional<Permutation> explore(const std::vector<int>& part, int depth) {
    if (depth >= static_cast<int>(path_parts_.size()) ||
        !compatible(part, path_parts_[depth]))
      return std::nullopt;
    if (is_discrete(part)) {
      // Map the first-leaf node of each color to this leaf's node.
      Permutation sigma(n_);
      for (int w = 0; w < n_; ++w) sigma[leaf_node_of_color_[part[w]]] = w;
      if (is_automorphism(sigma)) return sigma;
      return std::nullopt;
    }
    for (int w : target_cell(part)) {
      auto r = explore(individualize(part, w), depth + 1);
      if (r) return r;
    }
    return std::nullopt;
  }

  const ColoredFactorGraph& g_;
  Adjacency adj_;
  int n_;
  std::vector<std::vector<int>> path_parts_;
  std::vector<std::vector<int>> path_cells_;
  std::vector<int> first_leaf_;
  std::vector<int> leaf_node_of_color_;
};

}  // namespace

std::vector<int> refine_colors(const ColoredFactorGraph& g) {
  return refine(build_adjacency(g), g.node_color);
}

GeneratorSet search_automorphisms(const ColoredFactorGraph& g) {
  return AutomorphismSearch(g).run();
}

GeneratorSet stabilizer_generators(const ColoredFactorGraph& g, int fixed_var) {
  if (fixed_var < 0 || fixed_var >= g.num_vars)
    throw std::out_of_range("fixed variable out of range");
  ColoredFactorGraph h = g;
  h.node_color[fixed_var] = g.num_colors();
  return search_automorphisms(h);
}

Configuration permute_configuration(const Configuration& x, const Permutation& pi) {
  Configuration y(x.size());
  for (std::size_t v = 0; v < x.size(); ++v) y[v] = x[pi[v]];
  return y;
}

VerifyResult verify_generator(const Model& model, const PermutationPair& p,
                              int num_samples, std::uint64_t seed) {
  VerifyResult r;
  if (!is_permutation(p.pi, model.num_vars()) ||
      !is_permutation(p.gamma, model.num_features())) {
    r.ok = false;
    r.reason = "not a permutation of the right size";
    return r;
  }
  for (int i = 0; i < model.num_features(); ++i) {
    if (model.tie_class_of(i) != model.tie_class_of(p.gamma[i])) {
      r.ok = false;
      r.reason = "gamma crosses tie classes";
      r.feature = i;
      return r;
    }
  }
  const int n = model.num_vars();
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  Configuration x(n);
  for (int s = -2; s < num_samples; ++s) {
    if (s == -2) {
      std::fill(x.begin(), x.end(), 0);
    } else if (s == -1) {
      std::fill(x.begin(), x.end(), 1);
    } else {
      for (auto& b : x) b = coin(rng) ? 1 : 0;
    }
    const Configuration y = permute_configuration(x, p.pi);
    for (int j = 0; j < model.num_features(); ++j) {
      if (model.feature(j).value(y) != model.feature(p.gamma[j]).value(x)) {
        r.ok = false;
        r.reason = "feature map not preserved";
        r.witness = x;
        r.feature = j;
        return r;
      }
    }
  }
  return r;
}

GeneratorSet detect_symmetries(const Model& model, std::optional<int> fixed_var) {
  const ColoredFactorGraph g = build_colored_factor_graph(model);
  GeneratorSet gens = fixed_var ? stabilizer_generators(g, *fixed_var)
                                : search_automorphisms(g);
  for (std::size_t k = 0; k < gens.generators.size(); ++k) {
    VerifyResult v = verify_generator(model, gens.generators[k], 100, 7919 + k);
    if (!v.ok)
      throw std::logic_error("generator " + std::to_string(k) +
                             " failed verification: " + v.reason);
  }
  return gens;
}

OrbitPartition orbits_of(const GeneratorSet& gens, OrbitDomain domain,
                         const Model& model) {
  for (const auto& g : gens.generators) {
    if (static_cast<int>(g.pi.size()) != model.num_vars() ||
        static_cast<int>(g.gamma.size()) != model.num_features())
      throw std::invalid_argument("generator does not match model size");
  }
  switch (domain) {
    case OrbitDomain::kVars: {
      UnionFind uf(model.num_vars());
      for (const auto& g : gens.generators)
        for (int v = 0; v < model.num_vars(); ++v) uf.unite(v, g.pi[v]);
      return OrbitPartition::from_union_find(domain, uf);
    }
    case OrbitDomain::kFeatures: {
      UnionFind uf(model.num_features());
      for (const auto& g : gens.generators)
        for (int i = 0; i < model.num_features(); ++i) uf.unite(i, g.gamma[i]);
      return OrbitPartition::from_union_find(domain, uf);
    }
    case OrbitDomain::kEdges:
    case OrbitDomain::kArcs: {
      const Skeleton sk = skeleton(model);
      const int ne = static_cast<int>(sk.edges.size());
      const bool arcs = domain == OrbitDomain::kArcs;
      UnionFind uf(arcs ? 2 * ne : ne);
      for (const auto& g : gens.generators) {
        for (int e = 0; e < ne; ++e) {
          const auto [u, v] = sk.edges[e];
          const int pu = g.pi[u], pv = g.pi[v];
          const int f = sk.edge_index(pu, pv);
          if (f < 0) throw std::invalid_argument("generator does not preserve edges");
          if (!arcs) {
            uf.unite(e, f);
          } else {
            const bool flipped = pu > pv;
            uf.unite(2 * e, 2 * f + (flipped ? 1 : 0));
            uf.unite(2 * e + 1, 2 * f + (flipped ? 0 : 1));
          }
        }
      }
      return OrbitPartition::from_union_find(domain, uf);
    }
    case OrbitDomain::kFactorAssignments: {
      const Skeleton sk = skeleton(model);
      std::vector<int> offset;
      int total = 0;
      for (const auto& c : sk.hyperedges) {
        offset.push_back(total);
        total += 1 << c.size();
      }
      UnionFind uf(total);
      for (const auto& g : gens.generators) {
        for (std::size_t c = 0; c < sk.hyperedges.size(); ++c) {
          const auto& scope = sk.hyperedges[c];
          const int k = static_cast<int>(scope.size());
          std::vector<int> image(k);
          for (int j = 0; j < k; ++j) image[j] = g.pi[scope[j]];
          std::vector<int> sorted = image;
          std::sort(sorted.begin(), sorted.end());
          const int d = sk.cluster_index(sorted);
          if (d < 0) throw std::invalid_argument("generator does not preserve clusters");
          std::vector<int> pos(k);
          for (int j = 0; j < k; ++j)
            pos[j] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), image[j]) -
                                      sorted.begin());
          for (int a = 0; a < (1 << k); ++a) {
            int b = 0;
            for (int j = 0; j < k; ++j)
              if ((a >> (k - 1 - j)) & 1) b |= 1 << (k - 1 - pos[j]);
            uf.unite(offset[c] + a, offset[d] + b);
          }
        }
      }
      return OrbitPartition::from_union_find(domain, uf);
    }
  }
  throw std::invalid_argument("unknown domain");
}

}  // namespace symlift
