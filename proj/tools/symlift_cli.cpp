// symlift command line: orbits, map, exact, ground.
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "symlift/lift.hpp"
#include "symlift/mln.hpp"
#include "symlift/oracle.hpp"
#include "symlift/solve.hpp"
#include "symlift/symmetry.hpp"

using nlohmann::json;
using namespace symlift;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kSolve = 3, kCap = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string input;
  std::string space = "ground";
  std::string polytope = "local";
  std::string method = "search";
  double alpha = 0.99;
  double tol = 1e-6;
  int max_cuts = 1000;
  std::uint64_t seed = 1;
  int domain_size = 0;
  std::string evidence;
  std::string out;
  std::string csv;
};

bool is_mln(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".mln") == 0;
}

// A model, and the grounding it came from when the input is an MLN.
struct Loaded {
  std::optional<mln::Mln> theory;
  std::optional<mln::Grounding> grounding;
  std::optional<Model> plain;

  const Model& model() const { return grounding ? grounding->model : *plain; }
};

Loaded load(const Config& cfg) {
  Loaded l;
  if (is_mln(cfg.input)) {
    if (cfg.domain_size <= 0) throw UsageError("--domain-size is required for MLN input");
    l.theory = mln::load_mln(cfg.input);
    std::vector<mln::EvidenceItem> ev;
    if (!cfg.evidence.empty()) ev = mln::load_evidence(cfg.evidence, *l.theory);
    l.grounding = mln::ground_mln(*l.theory, cfg.domain_size, ev);
  } else {
    if (!cfg.evidence.empty()) throw UsageError("--evidence needs an MLN input");
    l.plain = load_model(cfg.input);
  }
  return l;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

GeneratorSet symmetries(const Loaded& l, const std::string& method, std::uint64_t seed) {
  GeneratorSet gs;
  if (method == "search") {
    gs = detect_symmetries(l.model());
  } else if (method == "renaming") {
    if (!l.grounding) throw UsageError("--method renaming needs an MLN input");
    gs = mln::renaming_generators(l.grounding->map, l.model());
  } else if (method != "none") {
    throw UsageError("unknown method: " + method);
  }
  for (const auto& g : gs.generators) {
    const VerifyResult v = verify_generator(l.model(), g, 100, seed);
    if (!v.ok) throw std::logic_error("generator failed verification: " + v.reason);
  }
  return gs;
}

GeneratorSet stabilizer(const Loaded& l, const std::string& method, int var) {
  if (method == "search") return detect_symmetries(l.model(), var);
  if (method == "renaming") return mln::renaming_stabilizer(l.grounding->map, l.model(), var);
  return {};
}

std::string var_name(const Loaded& l, int v) {
  if (l.grounding) return l.grounding->map.atom_name(l.grounding->map.atom_of_var[v], *l.theory);
  return "x" + std::to_string(v);
}

json orbit_report(const Loaded& l, const std::string& method, const GeneratorSet& gs) {
  const Model& m = l.model();
  const LiftPartitions parts = partitions_from_generators(gs, m);
  json j;
  j["method"] = method;
  j["generators"] = gs.generators.size();
  j["group_order"] = gs.group_order ? json(*gs.group_order) : json(nullptr);
  j["node_orbits"] = parts.vars.num_cells();
  j["edge_orbits"] = parts.edges.num_cells();
  j["arc_orbits"] = parts.arcs.num_cells();
  j["factor_assignment_orbits"] = parts.factor_assignments.num_cells();
  j["domain"] = "vars";
  j["num_cells"] = parts.vars.num_cells();
  json cells = json::array();
  for (const auto& c : parts.vars.cells) {
    json cell;
    cell["rep"] = c.front();
    cell["size"] = c.size();
    cell["members"] = c;
    if (l.grounding) {
      json names = json::array();
      for (int v : c) names.push_back(var_name(l, v));
      cell["names"] = names;
    }
    cells.push_back(cell);
  }
  j["cells"] = cells;
  return j;
}

json model_summary(const Loaded& l) {
  json j;
  j["num_vars"] = l.model().num_vars();
  j["num_features"] = l.model().num_features();
  j["num_tie_classes"] = l.model().num_tie_classes();
  if (l.grounding) j["domain_size"] = l.grounding->map.domain_size;
  return j;
}

int cmd_orbits(const Config& cfg, json& out) {
  const Loaded l = load(cfg);
  out = model_summary(l);
  if (cfg.method == "both") {
    if (!l.grounding) throw UsageError("--method both needs an MLN input");
    const auto t0 = std::chrono::steady_clock::now();
    const GeneratorSet s = symmetries(l, "search", cfg.seed);
    const double search_ms = ms_since(t0);
    const auto t1 = std::chrono::steady_clock::now();
    const GeneratorSet r = symmetries(l, "renaming", cfg.seed);
    const double renaming_ms = ms_since(t1);
    out["search"] = orbit_report(l, "search", s);
    out["renaming"] = orbit_report(l, "renaming", r);
    const auto rs = orbits_of(r, OrbitDomain::kVars, l.model());
    out["renaming_refines_search"] = rs.refines(orbits_of(s, OrbitDomain::kVars, l.model()));
    out["timings_ms"] = {{"search", search_ms}, {"renaming", renaming_ms}};
    return kOk;
  }
  const auto t0 = std::chrono::steady_clock::now();
  const GeneratorSet gs = symmetries(l, cfg.method, cfg.seed);
  const double sym_ms = ms_since(t0);
  out.update(orbit_report(l, cfg.method, gs));
  out["timings_ms"] = {{"symmetry", sym_ms}};
  return kOk;
}

int cmd_map(const Config& cfg, json& out) {
  MapOptions opts;
  opts.polytope = polytope_from_string(cfg.polytope);
  opts.alpha = cfg.alpha;
  opts.tol = cfg.tol;
  opts.max_cuts = cfg.max_cuts;
  const Space space = space_from_string(cfg.space);
  if (opts.alpha <= 0 || opts.alpha > 1) throw UsageError("--alpha must be in (0, 1]");
  if (opts.max_cuts < 0) throw UsageError("--max-cuts must be non-negative");

  const auto t_all = std::chrono::steady_clock::now();
  const Loaded l = load(cfg);
  const Model& m = l.model();
  MapResult r;
  json timings;
  out = model_summary(l);
  if (space == Space::kGround) {
    r = map_ground(m, opts);
  } else {
    auto t0 = std::chrono::steady_clock::now();
    const GeneratorSet gs = symmetries(l, cfg.method, cfg.seed);
    timings["symmetry"] = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    const LiftedModel lm = build_lifted_model(m, gs);
    std::vector<GeneratorSet> stabs;
    if (opts.polytope == Polytope::kCycle)
      for (int o = 0; o < lm.num_node_orbits(); ++o)
        stabs.push_back(stabilizer(l, cfg.method, lm.partitions().vars.representative(o)));
    timings["lift"] = ms_since(t0);
    out["orbits"] = {{"node", lm.num_node_orbits()},
                     {"edge", lm.num_edge_orbits()},
                     {"arc", lm.num_arc_orbits()},
                     {"factor_assignment", lm.num_factor_assignment_orbits()}};
    r = map_lifted(m, lm, stabs, opts);
  }
  timings["solve"] = r.solve_ms;
  timings["separation"] = r.separation_ms;
  timings["total"] = ms_since(t_all);

  out["space"] = to_string(space);
  out["polytope"] = to_string(opts.polytope);
  out["method"] = space == Space::kGround ? "none" : cfg.method;
  out["status"] = r.status;
  out["objective"] = r.objective;
  out["bounds"] = r.bounds;
  out["cuts"] = r.cuts.size();
  out["iterations"] = r.iterations;
  out["lp_vars"] = r.lp_vars;
  out["lp_rows"] = r.lp_rows;
  json dec;
  dec["assignment"] = r.decode.assignment;
  dec["centroid"] = r.decode.centroid;
  dec["fractional"] = r.decode.fractional;
  out["decode"] = dec;
  out["timings_ms"] = timings;

  if (!cfg.csv.empty()) {
    std::ofstream csv(cfg.csv);
    if (!csv) throw std::runtime_error("cannot write " + cfg.csv);
    csv << "iteration,bound\n";
    for (std::size_t i = 0; i < r.bounds.size(); ++i)
      csv << i << ',' << format_real(r.bounds[i]) << '\n';
  }
  if (r.status == "cap") return kCap;
  if (r.status == "infeasible") return kSolve;
  return kOk;
}

int cmd_exact(const Config& cfg, json& out) {
  const Loaded l = load(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const oracle::ExactResult r = oracle::exact_enumerate(l.model());
  out = model_summary(l);
  out["map_value"] = r.map_value;
  json argmax = json::array();
  for (const auto& x : r.argmax) argmax.push_back(std::vector<int>(x.begin(), x.end()));
  out["argmax"] = argmax;
  out["log_partition"] = r.log_partition;
  const GroundCoordinates coords(l.model());
  std::vector<double> node_marginals;
  for (int v = 0; v < coords.num_vars(); ++v) node_marginals.push_back(r.mean_params[coords.node(v, 1)]);
  out["node_marginals"] = node_marginals;
  out["mean_params"] = r.mean_params;
  out["timings_ms"] = {{"total", ms_since(t0)}};
  return kOk;
}

int cmd_ground(const Config& cfg, std::string& text) {
  if (!is_mln(cfg.input)) throw UsageError("ground needs an MLN input");
  const Loaded l = load(cfg);
  text = serialize_model(l.model());
  return kOk;
}

void emit(const Config& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw std::runtime_error("cannot write " + cfg.out);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry detection and lifted MAP inference for tied exponential families"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input, "model (.fgm) or Markov logic network (.mln)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--domain-size", cfg.domain_size, "total number of constants (MLN input)");
    sub->add_option("--evidence", cfg.evidence, "evidence file (MLN input)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", cfg.out, "write output here instead of stdout");
    sub->add_option("--seed", cfg.seed, "seed for generator verification samples");
  };
  auto* orbits = app.add_subcommand("orbits", "report variable, edge and arc orbits");
  add_common(orbits);
  orbits->add_option("--method", cfg.method, "search | renaming | none | both")
      ->check(CLI::IsMember({"search", "renaming", "none", "both"}));

  auto* map = app.add_subcommand("map", "MAP LP relaxation, ground or lifted");
  add_common(map);
  map->add_option("--space", cfg.space, "ground | lifted")
      ->check(CLI::IsMember({"ground", "lifted"}));
  map->add_option("--polytope", cfg.polytope, "local | cycle")
      ->check(CLI::IsMember({"local", "cycle"}));
  map->add_option("--method", cfg.method, "search | renaming | none")
      ->check(CLI::IsMember({"search", "renaming", "none"}));
  map->add_option("--alpha", cfg.alpha, "in-out separation weight on the LP optimum");
  map->add_option("--tol", cfg.tol, "violation threshold for cuts");
  map->add_option("--max-cuts", cfg.max_cuts, "cut budget");
  map->add_option("--csv", cfg.csv, "write the bound sequence as CSV");

  auto* exact = app.add_subcommand("exact", "brute-force MAP and marginals (small models)");
  add_common(exact);

  auto* ground = app.add_subcommand("ground", "ground an MLN and print the model file");
  add_common(ground);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*ground) {
      std::string text;
      const int code = cmd_ground(cfg, text);
      emit(cfg, text);
      return code;
    }
    json out;
    int code = kOk;
    if (*orbits) code = cmd_orbits(cfg, out);
    else if (*map) code = cmd_map(cfg, out);
    else code = cmd_exact(cfg, out);
    emit(cfg, out.dump(2) + "\n");
    return code;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kParse;
  } catch (const mln::MlnError& e) {
    std::cerr << "mln error: " << e.what() << '\n';
    return kParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "solve error: " << e.what() << '\n';
    return kSolve;
  }
}
