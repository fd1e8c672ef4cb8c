#include "symlift/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "symlift/symmetry.hpp"

namespace symlift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

LpRow make_row(std::vector<std::pair<int, double>> coeffs, Sense sense, double rhs) {
  return LpRow{std::move(coeffs), sense, rhs};
}

// Sorts by variable, merges repeats and drops zeros.
void normalize_row(LpRow& row) {
  std::map<int, double> acc;
  for (const auto& [v, a] : row.coeffs) acc[v] += a;
  row.coeffs.clear();
  for (const auto& [v, a] : acc)
    if (a != 0.0) row.coeffs.emplace_back(v, a);
}

bool same_row(const LpRow& a, const LpRow& b) {
  return a.sense == b.sense && a.rhs == b.rhs && a.coeffs == b.coeffs;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

std::vector<LpRow> ground_local_rows(const GroundCoordinates& coords) {
  std::vector<LpRow> rows;
  const Skeleton& sk = coords.skeleton();
  for (int v = 0; v < coords.num_vars(); ++v)
    rows.push_back(make_row({{coords.node(v, 0), 1.0}, {coords.node(v, 1), 1.0}}, Sense::kEq, 1.0));
  for (int e = 0; e < coords.num_edges(); ++e) {
    const auto [u, v] = sk.edges[e];
    for (int t = 0; t < 2; ++t) {
      rows.push_back(make_row({{coords.edge(e, t, 0), 1.0},
                               {coords.edge(e, t, 1), 1.0},
                               {coords.node(u, t), -1.0}},
                              Sense::kEq, 0.0));
    }
    for (int t = 0; t < 2; ++t) {
      rows.push_back(make_row({{coords.edge(e, 0, t), 1.0},
                               {coords.edge(e, 1, t), 1.0},
                               {coords.node(v, t), -1.0}},
                              Sense::kEq, 0.0));
    }
  }
  for (int c = 0; c < coords.num_clusters(); ++c) {
    const auto& scope = sk.hyperedges[c];
    const int k = static_cast<int>(scope.size());
    const int size = 1 << k;
    auto bit = [k](int a, int j) { return (a >> (k - 1 - j)) & 1; };
    LpRow norm;
    for (int a = 0; a < size; ++a) norm.coeffs.emplace_back(coords.cluster(c, a), 1.0);
    norm.rhs = 1.0;
    rows.push_back(std::move(norm));
    for (int j = 0; j < k; ++j) {
      for (int t = 0; t < 2; ++t) {
        LpRow row;
        for (int a = 0; a < size; ++a)
          if (bit(a, j) == t) row.coeffs.emplace_back(coords.cluster(c, a), 1.0);
        row.coeffs.emplace_back(coords.node(scope[j], t), -1.0);
        rows.push_back(std::move(row));
      }
    }
    for (int j = 0; j < k; ++j) {
      for (int l = j + 1; l < k; ++l) {
        const int e = sk.edge_index(scope[j], scope[l]);
        for (int tj = 0; tj < 2; ++tj) {
          for (int tl = 0; tl < 2; ++tl) {
            LpRow row;
            for (int a = 0; a < size; ++a)
              if (bit(a, j) == tj && bit(a, l) == tl)
                row.coeffs.emplace_back(coords.cluster(c, a), 1.0);
            row.coeffs.emplace_back(coords.edge(e, tj, tl), -1.0);
            rows.push_back(std::move(row));
          }
        }
      }
    }
  }
  return rows;
}

LinearProgram build_local_lp(const Model& model) {
  const GroundCoordinates coords(model);
  LinearProgram lp(coords.num_coords());
  lp.objective = coords.theta(model);
  lp.rows = ground_local_rows(coords);
  return lp;
}

LinearProgram build_local_lp(const LiftedModel& lm) {
  LinearProgram lp(lm.num_cells());
  lp.objective = lm.theta_bar();
  std::set<std::pair<std::vector<std::pair<int, double>>, double>> seen;
  for (LpRow row : ground_local_rows(lm.coords())) {
    for (auto& [v, a] : row.coeffs) v = lm.rho(v);
    normalize_row(row);
    if (row.coeffs.empty()) continue;
    if (!seen.emplace(row.coeffs, row.rhs).second) continue;
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

std::vector<double> uniform_point(const GroundCoordinates& coords) {
  std::vector<double> tau(coords.num_coords());
  for (int v = 0; v < coords.num_vars(); ++v)
    for (int t = 0; t < 2; ++t) tau[coords.node(v, t)] = 0.5;
  for (int e = 0; e < coords.num_edges(); ++e)
    for (int a = 0; a < 4; ++a) tau[coords.edge(e, a >> 1, a & 1)] = 0.25;
  for (int c = 0; c < coords.num_clusters(); ++c) {
    const int size = 1 << coords.skeleton().hyperedges[c].size();
    for (int a = 0; a < size; ++a) tau[coords.cluster(c, a)] = 1.0 / size;
  }
  return tau;
}

std::vector<double> uniform_point(const LiftedModel& lm) {
  return lift_vector(uniform_point(lm.coords()), lm);
}

MirrorPath mirror_shortest_path(const SeparationGraph& g, std::span<const double> cut_w,
                                std::span<const double> nocut_w, int source) {
  const int n = g.num_nodes;
  // Mirror node id: 2 * node + copy.
  struct Arc {
    int to;
    int edge;
    bool cross;
    double w;
  };
  std::vector<std::vector<Arc>> adj(2 * n);
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const auto& ed = g.edges[e];
    const double wc = std::max(cut_w[e], 0.0);
    const double wn = std::max(nocut_w[e], 0.0);
    for (int c = 0; c < 2; ++c) {
      if (ed.a != ed.b) {
        adj[2 * ed.a + c].push_back({2 * ed.b + c, e, false, wc});
        adj[2 * ed.b + c].push_back({2 * ed.a + c, e, false, wc});
      }
      adj[2 * ed.a + c].push_back({2 * ed.b + (1 - c), e, true, wn});
      if (ed.a != ed.b) adj[2 * ed.b + c].push_back({2 * ed.a + (1 - c), e, true, wn});
    }
  }
  std::vector<double> dist(2 * n, kInf);
  std::vector<int> pred_node(2 * n, -1), pred_edge(2 * n, -1);
  std::vector<char> pred_cross(2 * n, 0), done(2 * n, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const int s = 2 * source, target = 2 * source + 1;
  dist[s] = 0.0;
  pq.emplace(0.0, s);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (u == target) break;
    for (const Arc& a : adj[u]) {
      const double nd = d + a.w;
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        pred_node[a.to] = u;
        pred_edge[a.to] = a.edge;
        pred_cross[a.to] = a.cross;
        pq.emplace(nd, a.to);
      }
    }
  }
  MirrorPath out;
  if (!std::isfinite(dist[target])) return out;
  out.found = true;
  out.weight = dist[target];
  for (int u = target; u != s; u = pred_node[u])
    out.steps.push_back({pred_edge[u], pred_cross[u] != 0});
  std::reverse(out.steps.begin(), out.steps.end());
  return out;
}

SeparationGraph ground_separation_graph(const GroundCoordinates& coords) {
  SeparationGraph g;
  g.num_nodes = coords.num_vars();
  for (int e = 0; e < coords.num_edges(); ++e) {
    const auto [u, v] = coords.skeleton().edges[e];
    g.edges.push_back({u, v, {coords.edge(e, 0, 0), coords.edge(e, 1, 1)},
                       {coords.edge(e, 0, 1), coords.edge(e, 1, 0)}});
  }
  std::vector<bool> touched(g.num_nodes, false);
  for (const auto& e : g.edges) touched[e.a] = touched[e.b] = true;
  for (int v = 0; v < g.num_nodes; ++v)
    if (touched[v]) g.sources.push_back(v);
  return g;
}

SeparationGraph lifted_separation_graph(const LiftedModel& lm, const Model& model,
                                        const GeneratorSet& stabilizer, int rep) {
  const OrbitPartition vars = orbits_of(stabilizer, OrbitDomain::kVars, model);
  const OrbitPartition edges = orbits_of(stabilizer, OrbitDomain::kEdges, model);
  if (vars.cells[vars.cell_of[rep]].size() != 1)
    throw std::invalid_argument("stabilizer does not fix the representative");
  const GroundCoordinates& coords = lm.coords();
  SeparationGraph g;
  g.num_nodes = vars.num_cells();
  for (int eo = 0; eo < edges.num_cells(); ++eo) {
    const int e = edges.representative(eo);
    const auto [u, v] = coords.skeleton().edges[e];
    g.edges.push_back({vars.cell_of[u], vars.cell_of[v],
                       {lm.rho(coords.edge(e, 0, 0)), lm.rho(coords.edge(e, 1, 1))},
                       {lm.rho(coords.arc(2 * e)), lm.rho(coords.arc(2 * e + 1))}});
  }
  g.sources = {vars.cell_of[rep]};
  return g;
}

double row_activity(const LpRow& row, std::span<const double> x) {
  double s = 0.0;
  for (const auto& [v, a] : row.coeffs) s += a * x[v];
  return s;
}

std::optional<CycleCut> separate_cycles(std::span<const SeparationGraph> graphs,
                                        std::span<const double> tau, double tol) {
  std::optional<CycleCut> best;
  for (int gi = 0; gi < static_cast<int>(graphs.size()); ++gi) {
    const SeparationGraph& g = graphs[gi];
    std::vector<double> cut_w(g.edges.size()), nocut_w(g.edges.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      for (int v : g.edges[e].cut_vars) cut_w[e] += tau[v];
      for (int v : g.edges[e].nocut_vars) nocut_w[e] += tau[v];
    }
    for (int s : g.sources) {
      const MirrorPath p = mirror_shortest_path(g, cut_w, nocut_w, s);
      if (!p.found || p.steps.empty()) continue;
      CycleCut c;
      c.graph = gi;
      c.source = s;
      c.steps = p.steps;
      c.row.sense = Sense::kGe;
      c.row.rhs = 1.0;
      for (const auto& st : p.steps) {
        const auto& vars = st.in_f ? g.edges[st.edge].nocut_vars : g.edges[st.edge].cut_vars;
        for (int v : vars) c.row.coeffs.emplace_back(v, 1.0);
      }
      normalize_row(c.row);
      c.lhs = row_activity(c.row, tau);
      if (c.lhs >= 1.0 - tol) continue;
      if (!best || c.lhs < best->lhs) best = std::move(c);
    }
  }
  return best;
}

std::string to_string(Polytope p) { return p == Polytope::kLocal ? "local" : "cycle"; }
std::string to_string(Space s) { return s == Space::kGround ? "ground" : "lifted"; }

Polytope polytope_from_string(const std::string& s) {
  if (s == "local") return Polytope::kLocal;
  if (s == "cycle") return Polytope::kCycle;
  throw std::invalid_argument("unknown polytope: " + s);
}

Space space_from_string(const std::string& s) {
  if (s == "ground") return Space::kGround;
  if (s == "lifted") return Space::kLifted;
  throw std::invalid_argument("unknown space: " + s);
}

Decoded decode(std::span<const double> tau, int num_nodes) {
  Decoded d;
  for (int v = 0; v < num_nodes; ++v) {
    const double p = tau[2 * v + 1];
    d.centroid.push_back(p);
    d.assignment.push_back(p > 0.5 ? 1 : 0);
    if (p > 1e-6 && p < 1.0 - 1e-6) d.fractional = true;
  }
  return d;
}

MapResult cutting_plane_map(const LinearProgram& lp, std::span<const double> theta,
                            std::span<const SeparationGraph> graphs,
                            std::vector<double> tau_in, const MapOptions& opts,
                            int num_decode_nodes) {
  MapResult res;
  res.lp_vars = lp.num_vars;
  res.lp_rows = lp.num_rows();
  auto t0 = std::chrono::steady_clock::now();
  SimplexSolver solver(lp);
  LpSolution sol = solver.solve();
  res.solve_ms += elapsed_ms(t0);
  if (sol.status != LpStatus::kOptimal) {
    res.status = to_string(sol.status);
    return res;
  }
  std::vector<double> tau = sol.x;
  res.bounds.push_back(dot(theta, tau));
  res.status = "optimal";

  if (opts.polytope == Polytope::kCycle) {
    res.status = "converged";
    std::vector<LpRow> added;
    auto is_dup = [&](const LpRow& r) {
      return std::any_of(added.begin(), added.end(), [&](const LpRow& a) { return same_row(a, r); });
    };
    for (;;) {
      if (static_cast<int>(res.cuts.size()) >= opts.max_cuts) {
        res.status = "cap";
        break;
      }
      ++res.iterations;
      t0 = std::chrono::steady_clock::now();
      std::vector<double> sigma(tau.size());
      for (std::size_t i = 0; i < tau.size(); ++i)
        sigma[i] = opts.alpha * tau[i] + (1.0 - opts.alpha) * tau_in[i];
      std::optional<CycleCut> cut = separate_cycles(graphs, sigma, opts.tol);
      if (cut && is_dup(cut->row)) cut.reset();
      if (!cut) {
        tau_in = sigma;
        cut = separate_cycles(graphs, tau, opts.tol);
        if (cut && is_dup(cut->row)) cut.reset();
      }
      res.separation_ms += elapsed_ms(t0);
      if (!cut) break;
      t0 = std::chrono::steady_clock::now();
      sol = solver.add_row(cut->row);
      res.solve_ms += elapsed_ms(t0);
      added.push_back(cut->row);
      res.cuts.push_back(std::move(*cut));
      if (sol.status != LpStatus::kOptimal) {
        res.status = to_string(sol.status);
        return res;
      }
      tau = sol.x;
      res.bounds.push_back(dot(theta, tau));
    }
  }
  res.tau = tau;
  res.objective = dot(theta, tau);
  res.decode = decode(tau, num_decode_nodes);
  return res;
}

MapResult map_ground(const Model& model, const MapOptions& opts) {
  const GroundCoordinates coords(model);
  const LinearProgram lp = build_local_lp(model);
  std::vector<SeparationGraph> graphs;
  if (opts.polytope == Polytope::kCycle) graphs.push_back(ground_separation_graph(coords));
  return cutting_plane_map(lp, lp.objective, graphs, uniform_point(coords), opts,
                           coords.num_vars());
}

MapResult map_lifted(const Model& model, const LiftedModel& lm,
                     const std::vector<GeneratorSet>& stabilizers, const MapOptions& opts) {
  const LinearProgram lp = build_local_lp(lm);
  std::vector<SeparationGraph> graphs;
  if (opts.polytope == Polytope::kCycle) {
    if (static_cast<int>(stabilizers.size()) != lm.num_node_orbits())
      throw std::invalid_argument("one stabilizer per node orbit required");
    for (int o = 0; o < lm.num_node_orbits(); ++o)
      graphs.push_back(lifted_separation_graph(lm, model, stabilizers[o],
                                               lm.partitions().vars.representative(o)));
  }
  return cutting_plane_map(lp, lp.objective, graphs, uniform_point(lm), opts,
                           lm.num_node_orbits());
}

}  // namespace symlift
