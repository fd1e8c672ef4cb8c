#include "symlift/coordinates.hpp"

#include <stdexcept>

namespace symlift {

GroundCoordinates::GroundCoordinates(const Model& model)
    : skeleton_(symlift::skeleton(model)) {
  edge_offset_ = 2 * skeleton_.num_vars;
  int next = edge_offset_ + 4 * static_cast<int>(skeleton_.edges.size());
  for (const auto& c : skeleton_.hyperedges) {
    cluster_offset_.push_back(next);
    next += 1 << c.size();
  }
  num_coords_ = next;
}

std::vector<double> GroundCoordinates::theta(const Model& model) const {
  const OvercompleteParams p = to_overcomplete(model);
  std::vector<double> th(num_coords_, 0.0);
  for (int v = 0; v < num_vars(); ++v)
    for (int t = 0; t < 2; ++t) th[node(v, t)] = p.node_theta[v][t];
  for (const auto& [pair, table] : p.pair_theta) {
    const int e = skeleton_.edge_index(pair.first, pair.second);
    for (int a = 0; a < 4; ++a) th[edge(e, a >> 1, a & 1)] = table[a];
  }
  for (const auto& [scope, table] : p.factor_theta) {
    const int c = skeleton_.cluster_index(scope);
    for (std::size_t a = 0; a < table.size(); ++a)
      th[cluster(c, static_cast<int>(a))] = table[a];
  }
  return th;
}

void GroundCoordinates::active(std::span<const std::uint8_t> x,
                               std::vector<int>& out) const {
  out.clear();
  for (int v = 0; v < num_vars(); ++v) out.push_back(node(v, x[v]));
  for (int e = 0; e < num_edges(); ++e) {
    const auto [u, v] = skeleton_.edges[e];
    out.push_back(edge(e, x[u], x[v]));
  }
  for (int c = 0; c < num_clusters(); ++c) {
    int a = 0;
    for (int v : skeleton_.hyperedges[c]) a = (a << 1) | x[v];
    out.push_back(cluster(c, a));
  }
}

std::vector<double> GroundCoordinates::indicator(
    std::span<const std::uint8_t> x) const {
  std::vector<double> phi(num_coords_, 0.0);
  std::vector<int> on;
  active(x, on);
  for (int i : on) phi[i] = 1.0;
  return phi;
}

std::string GroundCoordinates::describe(int coord) const {
  if (coord < 0 || coord >= num_coords_) throw std::out_of_range("coordinate");
  if (coord < edge_offset_)
    return std::to_string(coord / 2) + ":" + std::to_string(coord % 2);
  if (cluster_offset_.empty() || coord < cluster_offset_.front()) {
    const int e = (coord - edge_offset_) / 4, a = (coord - edge_offset_) % 4;
    const auto [u, v] = skeleton_.edges[e];
    return "{" + std::to_string(u) + ":" + std::to_string(a >> 1) + "," +
           std::to_string(v) + ":" + std::to_string(a & 1) + "}";
  }
  int c = static_cast<int>(cluster_offset_.size()) - 1;
  while (cluster_offset_[c] > coord) --c;
  std::string s = "[";
  const auto& scope = skeleton_.hyperedges[c];
  const int a = coord - cluster_offset_[c];
  for (std::size_t j = 0; j < scope.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(scope[j]) + ":" +
         std::to_string((a >> (scope.size() - 1 - j)) & 1);
  }
  return s + "]";
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace symlift
