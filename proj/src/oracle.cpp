#include "symlift/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <bit>
#include <numeric>
#include <set>

#include "symlift/symmetry.hpp"

namespace symlift::oracle {

namespace {

Configuration decode_bits(std::uint64_t code, int n) {
  Configuration x(n);
  for (int v = 0; v < n; ++v) x[v] = (code >> (n - 1 - v)) & 1u;
  return x;
}

std::uint64_t encode_bits(const Configuration& x) {
  std::uint64_t code = 0;
  for (auto b : x) code = (code << 1) | b;
  return code;
}

}  // namespace

ExactResult exact_enumerate(const Model& model, int limit) {
  const int n = model.num_vars();
  if (n > limit)
    throw LimitExceeded("exact_enumerate: " + std::to_string(n) +
                        " variables exceeds limit " + std::to_string(limit));
  const std::uint64_t total = std::uint64_t{1} << n;
  std::vector<double> scores(total);
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t c = 0; c < total; ++c) {
    scores[c] = score(model, decode_bits(c, n));
    best = std::max(best, scores[c]);
  }
  ExactResult r;
  r.map_value = best;
  double z = 0.0;
  for (std::uint64_t c = 0; c < total; ++c) {
    z += std::exp(scores[c] - best);
    if (scores[c] >= best - 1e-9) r.argmax.push_back(decode_bits(c, n));
  }
  r.log_partition = best + std::log(z);

  const GroundCoordinates coords(model);
  r.mean_params.assign(coords.num_coords(), 0.0);
  std::vector<int> on;
  for (std::uint64_t c = 0; c < total; ++c) {
    const double p = std::exp(scores[c] - r.log_partition);
    coords.active(decode_bits(c, n), on);
    for (int i : on) r.mean_params[i] += p;
  }
  return r;
}

std::vector<ConfigurationOrbit> configuration_orbits(const Model& model,
                                                     const GeneratorSet& gens,
                                                     int limit) {
  const int n = model.num_vars();
  if (n > limit)
    throw LimitExceeded("configuration_orbits: " + std::to_string(n) +
                        " variables exceeds limit " + std::to_string(limit));
  const std::uint64_t total = std::uint64_t{1} << n;
  UnionFind uf(static_cast<int>(total));
  for (std::uint64_t c = 0; c < total; ++c) {
    const Configuration x = decode_bits(c, n);
    for (const auto& g : gens.generators)
      uf.unite(static_cast<int>(c),
               static_cast<int>(encode_bits(permute_configuration(x, g.pi))));
  }
  const OrbitPartition part = OrbitPartition::from_union_find(OrbitDomain::kVars, uf);

  const GroundCoordinates coords(model);
  const std::vector<double> theta = coords.theta(model);
  std::vector<ConfigurationOrbit> orbits;
  std::vector<int> on;
  double best_centroid = -std::numeric_limits<double>::infinity();
  for (const auto& cell : part.cells) {
    ConfigurationOrbit o;
    o.centroid.assign(coords.num_coords(), 0.0);
    for (int c : cell) {
      o.members.push_back(decode_bits(c, n));
      coords.active(o.members.back(), on);
      for (int i : on) o.centroid[i] += 1.0;
    }
    for (double& v : o.centroid) v /= static_cast<double>(cell.size());
    o.value = dot(theta, o.centroid);
    best_centroid = std::max(best_centroid, o.value);
    orbits.push_back(std::move(o));
  }
  const ExactResult exact = exact_enumerate(model, limit);
  if (std::abs(best_centroid - exact.map_value) > 1e-9)
    throw std::logic_error("centroid maximum differs from exact MAP value");
  return orbits;
}

namespace {

// f_i(x^pi) as a feature over the sorted image scope.
Feature compose_with(const Feature& f, const Permutation& pi) {
  const int k = f.arity();
  std::vector<int> image(k);
  for (int j = 0; j < k; ++j) image[j] = pi[f.scope[j]];
  Feature h;
  h.scope = image;
  std::sort(h.scope.begin(), h.scope.end());
  h.table.resize(f.table.size());
  for (std::uint32_t b = 0; b < h.table.size(); ++b) {
    // b assigns the sorted image scope; argument j of f reads x_{image[j]}.
    std::uint32_t a = 0;
    for (int j = 0; j < k; ++j) {
      const int pos = static_cast<int>(
          std::lower_bound(h.scope.begin(), h.scope.end(), image[j]) - h.scope.begin());
      a = (a << 1) | ((b >> (k - 1 - pos)) & 1u);
    }
    h.table[b] = f.table[a];
  }
  return h;
}

}  // namespace

std::vector<PermutationPair> exhaustive_automorphisms(const Model& model, int limit) {
  const int n = model.num_vars();
  const int m = model.num_features();
  if (n > limit)
    throw LimitExceeded("exhaustive_automorphisms: " + std::to_string(n) +
                        " variables exceeds limit " + std::to_string(limit));
  std::vector<PermutationPair> result;
  Permutation pi = identity_permutation(n);
  const std::uint64_t total = std::uint64_t{1} << n;
  do {
    PermutationPair pp{pi, Permutation(m, -1)};
    std::vector<bool> used(m, false);
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      const Feature h = compose_with(model.feature(i), pi);
      int match = -1;
      for (int j = 0; j < m; ++j) {
        if (used[j] || model.tie_class_of(j) != model.tie_class_of(i)) continue;
        if (model.feature(j) == h) {
          match = j;
          break;
        }
      }
      if (match < 0) ok = false;
      else {
        used[match] = true;
        pp.gamma[i] = match;
      }
    }
    if (!ok) continue;
    for (std::uint64_t c = 0; c < total && ok; ++c) {
      const Configuration x = decode_bits(c, n);
      const Configuration y = permute_configuration(x, pi);
      for (int j = 0; j < m; ++j) {
        if (model.feature(j).value(y) != model.feature(pp.gamma[j]).value(x)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) result.push_back(std::move(pp));
  } while (std::next_permutation(pi.begin(), pi.end()));
  return result;
}

std::vector<PermutationPair> group_elements(const GeneratorSet& gens, int num_vars,
                                            int num_features, std::size_t limit) {
  const PermutationPair id{identity_permutation(num_vars),
                           identity_permutation(num_features)};
  std::set<PermutationPair> seen{id};
  std::vector<PermutationPair> frontier{id};
  while (!frontier.empty()) {
    std::vector<PermutationPair> next;
    for (const auto& g : frontier) {
      for (const auto& s : gens.generators) {
        PermutationPair h = compose(s, g);
        if (seen.insert(h).second) {
          if (seen.size() > limit) throw LimitExceeded("group too large to enumerate");
          next.push_back(std::move(h));
        }
      }
    }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

std::vector<CycleInequality> enumerate_cycle_constraints(const GroundCoordinates& coords,
                                                         std::span<const double> tau,
                                                         int max_len) {
  if (static_cast<int>(tau.size()) != coords.num_coords())
    throw std::invalid_argument("tau has wrong dimension");
  const Skeleton& sk = coords.skeleton();
  const int n = sk.num_vars;
  std::vector<std::vector<int>> nbr(n);
  for (const auto& [u, v] : sk.edges) {
    nbr[u].push_back(v);
    nbr[v].push_back(u);
  }
  auto nocut = [&](int e) {
    return tau[coords.edge(e, 0, 0)] + tau[coords.edge(e, 1, 1)];
  };
  auto cut = [&](int e) {
    return tau[coords.edge(e, 0, 1)] + tau[coords.edge(e, 1, 0)];
  };

  std::vector<CycleInequality> out;
  std::vector<int> path;
  std::vector<bool> on_path(n, false);
  auto emit = [&]() {
    // Each undirected cycle is seen in both directions; keep one.
    if (path[1] > path.back()) return;
    const int k = static_cast<int>(path.size());
    std::vector<int> edges(k);
    for (int j = 0; j < k; ++j)
      edges[j] = sk.edge_index(path[j], path[(j + 1) % k]);
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
      if (std::popcount(mask) % 2 == 0) continue;
      CycleInequality c;
      c.vars = path;
      c.edges = edges;
      c.f_mask = mask;
      for (int j = 0; j < k; ++j)
        c.lhs += (mask >> j & 1u) ? nocut(edges[j]) : cut(edges[j]);
      out.push_back(std::move(c));
    }
  };
  // DFS over paths whose smallest vertex is the start.
  auto dfs = [&](auto&& self, int start, int v) -> void {
    for (int w : nbr[v]) {
      if (w == start && path.size() >= 3) emit();
      if (w <= start || on_path[w] || static_cast<int>(path.size()) >= max_len) continue;
      path.push_back(w);
      on_path[w] = true;
      self(self, start, w);
      on_path[w] = false;
      path.pop_back();
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    on_path[s] = true;
    dfs(dfs, s, s);
    on_path[s] = false;
  }
  return out;
}

}  // namespace symlift::oracle
