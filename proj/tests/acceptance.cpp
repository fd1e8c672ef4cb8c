// Acceptance suite: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "symlift/lift.hpp"
#include "symlift/mln.hpp"
#include "symlift/oracle.hpp"
#include "symlift/solve.hpp"
#include "symlift/symmetry.hpp"

using namespace symlift;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

std::vector<std::size_t> sizes(const OrbitPartition& p) {
  std::vector<std::size_t> s;
  for (const auto& c : p.cells) s.push_back(c.size());
  std::sort(s.rbegin(), s.rend());
  return s;
}

std::vector<GeneratorSet> search_stabilizers(const Model& m, const LiftedModel& lm) {
  std::vector<GeneratorSet> out;
  for (int o = 0; o < lm.num_node_orbits(); ++o)
    out.push_back(detect_symmetries(m, lm.partitions().vars.representative(o)));
  return out;
}

std::vector<Model> pairwise_fixtures() {
  std::vector<Model> ms = {fixtures::ex1(), fixtures::triangle(), fixtures::complete3(),
                           fixtures::unary(), fixtures::frucht()};
  for (int k = 0; k < 20; ++k) ms.push_back(fixtures::random_model(k));
  return ms;
}

std::vector<double> random_local_point(const GroundCoordinates& coords, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> tau(coords.num_coords(), 0.0);
  std::vector<double> p(coords.num_vars());
  for (int v = 0; v < coords.num_vars(); ++v) {
    p[v] = u(rng) < 0.3 ? 0.5 : u(rng);
    tau[coords.node(v, 1)] = p[v];
    tau[coords.node(v, 0)] = 1 - p[v];
  }
  for (int e = 0; e < coords.num_edges(); ++e) {
    const auto [a, b] = coords.skeleton().edges[e];
    const double lo = std::max(0.0, p[a] + p[b] - 1), hi = std::min(p[a], p[b]);
    const double t11 = u(rng) < 0.4 ? lo : lo + (hi - lo) * u(rng);
    tau[coords.edge(e, 1, 1)] = t11;
    tau[coords.edge(e, 1, 0)] = p[a] - t11;
    tau[coords.edge(e, 0, 1)] = p[b] - t11;
    tau[coords.edge(e, 0, 0)] = 1 - p[a] - p[b] + t11;
  }
  return tau;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void ac1(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const Model m = fixtures::ex1();
  const GeneratorSet gs = detect_symmetries(m);
  c.expect(gs.group_order == 4u, "group order ");
  c.expect(orbits_of(gs, OrbitDomain::kVars, m).cells ==
               std::vector<std::vector<int>>{{0, 3}, {1, 2}},
           "node orbits ");
  c.expect(sizes(orbits_of(gs, OrbitDomain::kEdges, m)) == std::vector<std::size_t>{4, 1},
           "edge orbits ");
  c.expect(sizes(orbits_of(gs, OrbitDomain::kArcs, m)) == std::vector<std::size_t>{4, 4, 2},
           "arc orbits ");
  const LiftedModel lm = build_lifted_model(m, gs);
  MapOptions o;
  const MapResult g = map_ground(m, o);
  const MapResult l = map_lifted(m, lm, {}, o);
  c.expect(l.lp_vars == 11 && g.lp_vars == 28, "lp sizes ");
  const double exact = oracle::exact_enumerate(m).map_value;
  c.expect(std::abs(exact - 4.0) < 1e-12, "exact map ");
  c.expect(std::abs(g.objective - 4.0) <= 1e-6 && std::abs(l.objective - 4.0) <= 1e-6,
           "objectives ");
  const double secs = seconds_since(t0);
  c.expect(secs < 1.0, "runtime ");
  c.why << " lifted=" << l.lp_vars << " ground=" << g.lp_vars << " obj=" << l.objective;
}

void ac2(Check& c) {
  std::vector<Model> ms = {fixtures::ex1(), fixtures::triangle(), fixtures::frucht()};
  for (int k = 0; k < 20; ++k) ms.push_back(fixtures::random_model(k));
  int gens = 0, compared = 0;
  for (const Model& m : ms) {
    const GeneratorSet gs = search_automorphisms(build_colored_factor_graph(m));
    for (const auto& p : gs.generators) {
      ++gens;
      c.expect(verify_generator(m, p, 100, 17).ok, "generator fails verification ");
    }
    if (m.num_vars() <= 6) {
      ++compared;
      std::set<Permutation> a, b;
      for (const auto& p : oracle::group_elements(gs, m.num_vars(), m.num_features()))
        a.insert(p.pi);
      for (const auto& p : oracle::exhaustive_automorphisms(m)) b.insert(p.pi);
      c.expect(a == b, "group differs from exhaustive ");
    }
  }
  c.why << " generators=" << gens << " exhaustive_compared=" << compared;
}

void ac3(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  int models = 0;
  double worst = 0;
  for (const Model& m : pairwise_fixtures()) {
    ++models;
    const LiftedModel lm = build_lifted_model(m, detect_symmetries(m));
    const auto stabs = search_stabilizers(m, lm);
    for (Polytope p : {Polytope::kLocal, Polytope::kCycle}) {
      MapOptions o;
      o.polytope = p;
      o.max_cuts = 50;
      const MapResult g = map_ground(m, o);
      const MapResult l = map_lifted(m, lm, stabs, o);
      worst = std::max(worst, std::abs(g.objective - l.objective));
      if (p == Polytope::kCycle)
        c.expect(g.status == "converged" && l.status == "converged", "no convergence ");
    }
  }
  c.expect(worst <= 1e-6, "objective gap ");
  const double secs = seconds_since(t0);
  c.expect(secs < 30.0, "runtime ");
  c.why << " models=" << models << " max_gap=" << worst;
}

void ac4(Check& c) {
  const Model m = fixtures::triangle();
  MapOptions o;
  const MapResult local = map_ground(m, o);
  o.polytope = Polytope::kCycle;
  const MapResult cyc = map_ground(m, o);
  const double exact = oracle::exact_enumerate(m).map_value;
  c.expect(std::abs(local.objective) <= 1e-8, "local ");
  c.expect(std::abs(cyc.objective + 1.0) <= 1e-8 && std::abs(exact + 1.0) <= 1e-12, "cycle ");
  c.expect(!cyc.cuts.empty(), "no cuts ");
  for (std::size_t i = 1; i < cyc.bounds.size(); ++i)
    c.expect(cyc.bounds[i] <= cyc.bounds[i - 1] + 1e-8, "bounds increase ");
  c.why << " local=" << local.objective << " cycle=" << cyc.objective
        << " cuts=" << cyc.cuts.size();
}

void ac5(Check& c) {
  std::mt19937_64 rng(99);
  int violations = 0, symmetric = 0;
  for (const Model& m : pairwise_fixtures()) {
    if (m.num_vars() > 8) continue;
    const LiftedModel lm = build_lifted_model(m, detect_symmetries(m));
    const GroundCoordinates& coords = lm.coords();
    const std::vector<SeparationGraph> ground = {ground_separation_graph(coords)};
    const auto stabs = search_stabilizers(m, lm);
    std::vector<SeparationGraph> lifted;
    for (int o = 0; o < lm.num_node_orbits(); ++o)
      lifted.push_back(
          lifted_separation_graph(lm, m, stabs[o], lm.partitions().vars.representative(o)));
    for (int trial = 0; trial < 20; ++trial) {
      const auto tau = random_local_point(coords, rng);
      double max6 = 0, max_all = 0;
      for (const auto& ci : oracle::enumerate_cycle_constraints(coords, tau, 6))
        max6 = std::max(max6, 1 - ci.lhs);
      for (const auto& ci : oracle::enumerate_cycle_constraints(coords, tau, m.num_vars()))
        max_all = std::max(max_all, 1 - ci.lhs);
      const auto cut = separate_cycles(ground, tau, 1e-6);
      if (max6 > 1e-6) {
        ++violations;
        c.expect(cut.has_value(), "missed violation ");
        if (cut) {
          const double v = 1 - cut->lhs;
          c.expect(v >= max6 - 1e-9 && std::abs(v - max_all) <= 1e-9, "violation mismatch ");
        }
      }
      // symmetric point
      const auto bar = lift_vector(tau, lm);
      const auto sym = unlift_vector(bar, lm);
      const auto gc = separate_cycles(ground, sym, 1e-6);
      const auto lc = separate_cycles(lifted, bar, 1e-6);
      c.expect(gc.has_value() == lc.has_value(), "lifted/ground disagree ");
      if (gc && lc) {
        ++symmetric;
        c.expect(std::abs(gc->lhs - lc->lhs) <= 1e-9, "lifted violation mismatch ");
      }
    }
  }
  c.why << " violated_points=" << violations << " symmetric_cuts=" << symmetric;
}

void ac6(Check& c) {
  int cells = 0;
  for (const Model& m : pairwise_fixtures()) {
    if (m.num_vars() > 12) continue;
    const LiftedModel lm = build_lifted_model(m, detect_symmetries(m));
    const auto mu = oracle::exact_enumerate(m).mean_params;
    for (int k = 0; k < lm.num_cells(); ++k) {
      ++cells;
      for (int i : lm.cell(k))
        c.expect(std::abs(mu[i] - mu[lm.representative(k)]) <= 1e-9, "marginal varies ");
    }
  }
  c.why << " cells=" << cells;
}

void ac7(Check& c) {
  int models = 0;
  for (const Model& m : pairwise_fixtures()) {
    if (m.num_vars() > 10) continue;
    ++models;
    try {
      const auto orbits = oracle::configuration_orbits(m, detect_symmetries(m));
      double best = -1e300;
      for (const auto& o : orbits) best = std::max(best, o.value);
      c.expect(std::abs(best - oracle::exact_enumerate(m).map_value) <= 1e-9, "centroid max ");
    } catch (const std::logic_error& e) {
      c.expect(false, e.what());
    }
  }
  const Model k3 = fixtures::complete3();
  const auto orbits = oracle::configuration_orbits(k3, detect_symmetries(k3));
  c.expect(orbits.size() == 4, "complete3 orbit count ");
  c.why << " models=" << models << " complete3_orbits=" << orbits.size();
}

void ac8(Check& c) {
  {
    const auto g = mln::ground_mln(fixtures::q2(), 5);
    const auto r = mln::renaming_orbits(g.map, g.model);
    c.expect(sizes(r.vars) == std::vector<std::size_t>{12, 4, 4, 4, 1}, "q/2 orbits ");
    for (const auto& cell : r.vars.cells) {
      const auto& a = g.map.atoms[g.map.atom_of_var[cell.front()]];
      const auto sig = mln::signature_of(a.predicate, a.args, g.map.num_distinguished);
      c.expect(mln::orbit_size_analytic(sig, 5, g.map.num_distinguished) == cell.size(),
               "analytic size ");
    }
  }
  int checked = 0;
  for (const auto& mln : {fixtures::q2(), fixtures::lovers_smokers(), fixtures::friends_smokers()}) {
    for (int d = 2; d <= 4; ++d) {
      const auto g = mln::ground_mln(mln, d);
      const auto r = mln::renaming_orbits(g.map, g.model);
      const auto s = orbits_of(detect_symmetries(g.model), OrbitDomain::kVars, g.model);
      c.expect(r.vars.refines(s), "renaming not inside search ");
      ++checked;
    }
    std::set<int> counts;
    for (int d : {5, 10, 20}) {
      const auto g = mln::ground_mln(mln, d);
      counts.insert(mln::renaming_orbits(g.map, g.model).vars.num_cells());
    }
    c.expect(counts.size() == 1, "count varies with domain ");
  }
  c.why << " refinement_checks=" << checked;
}

void ac9(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto mln = fixtures::lovers_smokers();
  std::set<std::tuple<int, int, int>> counts;
  for (int d = 3; d <= 6; ++d) {
    const auto g = mln::ground_mln(mln, d);
    const auto parts = partitions_from_generators(mln::renaming_generators(g.map, g.model), g.model);
    counts.insert({parts.vars.num_cells(), parts.edges.num_cells(), parts.arcs.num_cells()});
    if (d <= 4) {
      const auto search = partitions_from_generators(detect_symmetries(g.model), g.model);
      c.expect(search.vars.num_cells() == parts.vars.num_cells() &&
                   search.edges.num_cells() == parts.edges.num_cells() &&
                   search.arcs.num_cells() == parts.arcs.num_cells(),
               "search and renaming counts differ ");
    }
  }
  c.expect(counts.size() == 1, "orbit counts vary ");
  const auto g = mln::ground_mln(mln, 4);
  c.expect(g.model.num_vars() == 28, "variable count ");
  const LiftedModel lm =
      build_lifted_model(g.model, mln::renaming_generators(g.map, g.model));
  MapOptions o;
  const MapResult gr = map_ground(g.model, o);
  const MapResult li = map_lifted(g.model, lm, {}, o);
  c.expect(std::abs(gr.objective - li.objective) <= 1e-6, "objective gap ");
  const double secs = seconds_since(t0);
  c.expect(secs < 60.0, "runtime ");
  const auto& [nv, ne, na] = *counts.begin();
  c.why << " orbits(node,edge,arc)=" << nv << "," << ne << "," << na
        << " ground=" << gr.objective << " lifted=" << li.objective;
}

void ac10(Check& c) {
  const Model m = fixtures::frucht();
  const GeneratorSet gs = detect_symmetries(m);
  c.expect(gs.generators.empty(), "nontrivial group ");
  const LiftedModel lm = build_lifted_model(m, gs);
  c.expect(lm.num_node_orbits() == 12, "node orbits ");
  c.expect(lm.num_cells() == lm.coords().num_coords(), "lifted size ");
  const auto colors = refine_colors(build_colored_factor_graph(m));
  std::set<int> var_colors(colors.begin(), colors.begin() + m.num_vars());
  c.expect(var_colors.size() == 1, "refinement split ");
  c.why << " node_orbits=" << lm.num_node_orbits() << " refinement_classes=" << var_colors.size();
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria = {
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}};
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.why << " exception: " << e.what();
    }
    std::printf("%s %s (%.3f s)%s\n", name, c.ok ? "PASS" : "FAIL", seconds_since(t0),
                c.why.str().c_str());
    std::fflush(stdout);
    failed += !c.ok;
  }
  return failed == 0 ? 0 : 1;
}
