#include "symlift/model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace symlift {

namespace {

std::uint32_t assignment_index(const Feature& f,
                               std::span<const std::uint8_t> x) {
  std::uint32_t a = 0;
  for (int v : f.scope) a = (a << 1) | (x[v] & 1u);
  return a;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r')
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

long parse_int(std::string_view tok, int line) {
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
  return v;
}

double parse_real(std::string_view tok, int line) {
  double v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    throw ParseError(line, "expected real, got '" + std::string(tok) + "'");
  return v;
}

}  // namespace

double Feature::value(std::span<const std::uint8_t> x) const {
  return table[assignment_index(*this, x)];
}

bool Feature::depends_on_position(int position) const {
  const int k = arity();
  const std::uint32_t bit = 1u << (k - 1 - position);
  for (std::uint32_t a = 0; a < table.size(); ++a) {
    if (a & bit) continue;
    if (table[a] != table[a | bit]) return true;
  }
  return false;
}

Model Model::create(int num_vars, std::vector<Feature> features,
                    std::vector<int> tie_class_of, std::vector<double> theta) {
  if (num_vars < 1) throw ModelError("model needs at least one variable");
  if (features.empty()) throw ModelError("model needs at least one feature");
  if (tie_class_of.size() != features.size())
    throw ModelError("tie class list does not match feature count");
  std::vector<int> class_use(theta.size(), 0);
  for (std::size_t i = 0; i < features.size(); ++i) {
    const Feature& f = features[i];
    const std::string who = "feature " + std::to_string(i) + ": ";
    if (f.scope.empty()) throw ModelError(who + "empty scope");
    if (f.scope.size() > 20) throw ModelError(who + "arity too large");
    for (std::size_t k = 0; k < f.scope.size(); ++k) {
      if (f.scope[k] < 0 || f.scope[k] >= num_vars)
        throw ModelError(who + "variable index out of range");
      if (k > 0 && f.scope[k] <= f.scope[k - 1])
        throw ModelError(who + "scope not strictly increasing");
    }
    if (f.table.size() != (std::size_t{1} << f.scope.size()))
      throw ModelError(who + "table length mismatch");
    for (int k = 0; k < f.arity(); ++k) {
      if (!f.depends_on_position(k))
        throw ModelError(who + "does not depend on argument " +
                         std::to_string(k));
    }
    const int c = tie_class_of[i];
    if (c < 0 || c >= static_cast<int>(theta.size()))
      throw ModelError(who + "unknown tie class " + std::to_string(c));
    ++class_use[c];
  }
  for (std::size_t c = 0; c < class_use.size(); ++c) {
    if (class_use[c] == 0)
      throw ModelError("tie class " + std::to_string(c) + " is empty");
  }
  Model m;
  m.num_vars_ = num_vars;
  m.features_ = std::move(features);
  m.tie_class_of_ = std::move(tie_class_of);
  m.theta_ = std::move(theta);
  return m;
}

double score(const Model& model, std::span<const std::uint8_t> x) {
  if (static_cast<int>(x.size()) != model.num_vars())
    throw ModelError("configuration length mismatch");
  double s = 0.0;
  for (int i = 0; i < model.num_features(); ++i)
    s += model.feature_weight(i) * model.feature(i).value(x);
  return s;
}

std::vector<double> feature_vector(const Model& model,
                                   std::span<const std::uint8_t> x) {
  if (static_cast<int>(x.size()) != model.num_vars())
    throw ModelError("configuration length mismatch");
  std::vector<double> phi(model.num_features());
  for (int i = 0; i < model.num_features(); ++i)
    phi[i] = model.feature(i).value(x);
  return phi;
}

int Skeleton::edge_index(int u, int v) const {
  if (u > v) std::swap(u, v);
  auto it = std::lower_bound(edges.begin(), edges.end(), VarPair{u, v});
  if (it == edges.end() || *it != VarPair{u, v}) return -1;
  return static_cast<int>(it - edges.begin());
}

int Skeleton::cluster_index(const std::vector<int>& scope) const {
  auto it = std::lower_bound(hyperedges.begin(), hyperedges.end(), scope);
  if (it == hyperedges.end() || *it != scope) return -1;
  return static_cast<int>(it - hyperedges.begin());
}

Skeleton skeleton(const Model& model) {
  std::set<VarPair> edges;
  std::set<std::vector<int>> clusters;
  for (const Feature& f : model.features()) {
    for (std::size_t a = 0; a < f.scope.size(); ++a)
      for (std::size_t b = a + 1; b < f.scope.size(); ++b)
        edges.emplace(f.scope[a], f.scope[b]);
    if (f.scope.size() >= 3) clusters.insert(f.scope);
  }
  Skeleton s;
  s.num_vars = model.num_vars();
  s.edges.assign(edges.begin(), edges.end());
  s.hyperedges.assign(clusters.begin(), clusters.end());
  return s;
}

OvercompleteParams to_overcomplete(const Model& model) {
  OvercompleteParams p;
  p.node_theta.assign(model.num_vars(), {0.0, 0.0});
  for (int i = 0; i < model.num_features(); ++i) {
    const Feature& f = model.feature(i);
    const double w = model.feature_weight(i);
    switch (f.arity()) {
      case 1:
        for (int t = 0; t < 2; ++t) p.node_theta[f.scope[0]][t] += w * f.table[t];
        break;
      case 2: {
        auto& pt = p.pair_theta[{f.scope[0], f.scope[1]}];
        for (int a = 0; a < 4; ++a) pt[a] += w * f.table[a];
        break;
      }
      default: {
        auto& ft = p.factor_theta[f.scope];
        if (ft.empty()) ft.assign(f.table.size(), 0.0);
        for (std::size_t a = 0; a < f.table.size(); ++a)
          ft[a] += w * f.table[a];
      }
    }
  }
  return p;
}

double OvercompleteParams::inner_product(
    std::span<const std::uint8_t> x) const {
  double s = 0.0;
  for (std::size_t v = 0; v < node_theta.size(); ++v) s += node_theta[v][x[v]];
  for (const auto& [e, t] : pair_theta) s += t[2 * x[e.first] + x[e.second]];
  for (const auto& [scope, t] : factor_theta) {
    std::uint32_t a = 0;
    for (int v : scope) a = (a << 1) | x[v];
    s += t[a];
  }
  return s;
}

std::string format_real(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

Model parse_model(std::string_view text) {
  int n = -1;
  long num_classes = -1;
  std::vector<double> theta;
  std::vector<bool> theta_seen;
  std::vector<Feature> features;
  std::vector<int> ties;
  bool header = false;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    auto tok = split_tokens(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::string_view kw = tok[0];
    if (!header) {
      if (kw != "fgm" || tok.size() != 2 || tok[1] != "1")
        throw ParseError(line_no, "expected header 'fgm 1'");
      header = true;
    } else if (kw == "vars") {
      if (n >= 0) throw ParseError(line_no, "duplicate 'vars'");
      if (tok.size() != 2) throw ParseError(line_no, "expected 'vars <n>'");
      n = static_cast<int>(parse_int(tok[1], line_no));
      if (n < 1) throw ParseError(line_no, "vars must be positive");
    } else if (kw == "tieclasses") {
      if (n < 0) throw ParseError(line_no, "'tieclasses' before 'vars'");
      if (num_classes >= 0) throw ParseError(line_no, "duplicate 'tieclasses'");
      if (tok.size() != 2)
        throw ParseError(line_no, "expected 'tieclasses <K>'");
      num_classes = parse_int(tok[1], line_no);
      if (num_classes < 1)
        throw ParseError(line_no, "tieclasses must be positive");
      theta.assign(num_classes, 0.0);
      theta_seen.assign(num_classes, false);
    } else if (kw == "theta") {
      if (num_classes < 0) throw ParseError(line_no, "'theta' before 'tieclasses'");
      if (tok.size() != 3) throw ParseError(line_no, "expected 'theta <k> <real>'");
      const long k = parse_int(tok[1], line_no);
      if (k < 0 || k >= num_classes) throw ParseError(line_no, "unknown tie class");
      if (theta_seen[k]) throw ParseError(line_no, "duplicate theta for class");
      theta[k] = parse_real(tok[2], line_no);
      theta_seen[k] = true;
    } else if (kw == "factor") {
      if (num_classes < 0) throw ParseError(line_no, "'factor' before 'tieclasses'");
      if (tok.size() < 3) throw ParseError(line_no, "truncated factor line");
      const long cls = parse_int(tok[1], line_no);
      if (cls < 0 || cls >= num_classes) throw ParseError(line_no, "unknown tie class");
      const long k = parse_int(tok[2], line_no);
      if (k < 1 || k > 20) throw ParseError(line_no, "arity out of range");
      if (static_cast<long>(tok.size()) < 3 + k)
        throw ParseError(line_no, "truncated scope");
      Feature f;
      for (long j = 0; j < k; ++j) {
        const long v = parse_int(tok[3 + j], line_no);
        if (v < 0 || v >= n) throw ParseError(line_no, "variable index out of range");
        if (!f.scope.empty() && v <= f.scope.back())
          throw ParseError(line_no, "scope not strictly increasing");
        f.scope.push_back(static_cast<int>(v));
      }
      const std::size_t want = std::size_t{1} << k;
      if (tok.size() - 3 - k != want) throw ParseError(line_no, "table length mismatch");
      for (std::size_t j = 3 + k; j < tok.size(); ++j)
        f.table.push_back(parse_real(tok[j], line_no));
      for (int p = 0; p < f.arity(); ++p) {
        if (!f.depends_on_position(p))
          throw ParseError(line_no, "feature does not depend on argument " +
                                        std::to_string(p));
      }
      features.push_back(std::move(f));
      ties.push_back(static_cast<int>(cls));
    } else {
      throw ParseError(line_no, "unknown keyword '" + std::string(kw) + "'");
    }
    if (end == text.size()) break;
  }
  if (!header) throw ParseError(line_no, "missing header 'fgm 1'");
  if (n < 0) throw ParseError(line_no, "missing 'vars'");
  if (num_classes < 0) throw ParseError(line_no, "missing 'tieclasses'");
  for (long k = 0; k < num_classes; ++k) {
    if (!theta_seen[k])
      throw ParseError(line_no, "theta missing for tie class " + std::to_string(k));
  }
  if (features.empty()) throw ParseError(line_no, "model has no factors");
  return Model::create(n, std::move(features), std::move(ties), std::move(theta));
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

std::string serialize_model(const Model& model) {
  std::string out = "fgm 1\n";
  out += "vars " + std::to_string(model.num_vars()) + "\n";
  out += "tieclasses " + std::to_string(model.num_tie_classes()) + "\n";
  for (int k = 0; k < model.num_tie_classes(); ++k)
    out += "theta " + std::to_string(k) + " " + format_real(model.theta(k)) + "\n";
  for (int i = 0; i < model.num_features(); ++i) {
    const Feature& f = model.feature(i);
    out += "factor " + std::to_string(model.tie_class_of(i)) + " " +
           std::to_string(f.arity());
    for (int v : f.scope) out += " " + std::to_string(v);
    for (double t : f.table) out += " " + format_real(t);
    out += "\n";
  }
  return out;
}

}  // namespace symlift
