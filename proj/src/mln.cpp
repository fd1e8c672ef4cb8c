#include "symlift/mln.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace symlift::mln {

namespace {

struct Token {
  enum class Kind { kIdent, kLParen, kRParen, kComma, kNot, kAnd, kImplies, kIff, kEq, kNeq, kEnd };
  Kind kind = Kind::kEnd;
  std::string text;
};

std::vector<Token> tokenize(std::string_view s, int line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::Kind::kIdent, std::string(s.substr(i, j - i))});
      i = j;
      continue;
    }
    auto starts = [&](std::string_view op) { return s.substr(i, op.size()) == op; };
    if (starts("<=>")) {
      out.push_back({Token::Kind::kIff, "<=>"});
      i += 3;
    } else if (starts("=>")) {
      out.push_back({Token::Kind::kImplies, "=>"});
      i += 2;
    } else if (starts("!=")) {
      out.push_back({Token::Kind::kNeq, "!="});
      i += 2;
    } else if (c == '=') {
      out.push_back({Token::Kind::kEq, "="});
      ++i;
    } else if (c == '!') {
      out.push_back({Token::Kind::kNot, "!"});
      ++i;
    } else if (c == '^') {
      out.push_back({Token::Kind::kAnd, "^"});
      ++i;
    } else if (c == '(') {
      out.push_back({Token::Kind::kLParen, "("});
      ++i;
    } else if (c == ')') {
      out.push_back({Token::Kind::kRParen, ")"});
      ++i;
    } else if (c == ',') {
      out.push_back({Token::Kind::kComma, ","});
      ++i;
    } else {
      throw ParseError(line, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::Kind::kEnd, ""});
  return out;
}

bool is_constant_name(const std::string& s) {
  return std::isupper(static_cast<unsigned char>(s[0])) != 0;
}

double parse_real(std::string_view s, int line) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw ParseError(line, "bad number '" + std::string(s) + "'");
  return v;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, int line, Mln& mln, Formula& f)
      : toks_(std::move(toks)), line_(line), mln_(mln), f_(f) {}

  int parse() {
    const int root = iff();
    if (peek().kind != Token::Kind::kEnd) fail("unexpected '" + peek().text + "'");
    return root;
  }

 private:
  const Token& peek(int k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token take() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

  int add(Node n) {
    f_.nodes.push_back(std::move(n));
    return static_cast<int>(f_.nodes.size()) - 1;
  }

  int binary(Node::Kind k, int a, int b) {
    Node n;
    n.kind = k;
    n.children = {a, b};
    return add(std::move(n));
  }

  int iff() {
    int left = implies();
    while (peek().kind == Token::Kind::kIff) {
      take();
      left = binary(Node::Kind::kIff, left, implies());
    }
    return left;
  }

  int implies() {
    const int left = disj();
    if (peek().kind == Token::Kind::kImplies) {
      take();
      return binary(Node::Kind::kImplies, left, implies());
    }
    return left;
  }

  // A bare `v` where an operator is expected is disjunction.
  bool at_or() const {
    return peek().kind == Token::Kind::kIdent && peek().text == "v" &&
           peek(1).kind != Token::Kind::kLParen;
  }

  int disj() {
    int left = conj();
    while (at_or()) {
      take();
      left = binary(Node::Kind::kOr, left, conj());
    }
    return left;
  }

  int conj() {
    int left = unary();
    while (peek().kind == Token::Kind::kAnd) {
      take();
      left = binary(Node::Kind::kAnd, left, unary());
    }
    return left;
  }

  int unary() {
    if (peek().kind == Token::Kind::kNot) {
      take();
      Node n;
      n.kind = Node::Kind::kNot;
      n.children = {unary()};
      return add(std::move(n));
    }
    return primary();
  }

  Term term(const std::string& name) {
    Term t;
    if (is_constant_name(name)) {
      t.constant = name;
      return t;
    }
    t.is_var = true;
    auto it = std::find(f_.var_names.begin(), f_.var_names.end(), name);
    if (it == f_.var_names.end()) {
      f_.var_names.push_back(name);
      t.var = static_cast<int>(f_.var_names.size()) - 1;
    } else {
      t.var = static_cast<int>(it - f_.var_names.begin());
    }
    return t;
  }

  int primary() {
    if (peek().kind == Token::Kind::kLParen) {
      take();
      const int inner = iff();
      if (take().kind != Token::Kind::kRParen) fail("expected ')'");
      return inner;
    }
    if (peek().kind != Token::Kind::kIdent) fail("expected atom, got '" + peek().text + "'");
    const std::string name = take().text;
    if (peek().kind == Token::Kind::kLParen) {
      take();
      Node n;
      n.kind = Node::Kind::kAtom;
      for (;;) {
        if (peek().kind != Token::Kind::kIdent) fail("expected argument in " + name);
        n.terms.push_back(term(take().text));
        if (peek().kind == Token::Kind::kComma) {
          take();
          continue;
        }
        if (take().kind != Token::Kind::kRParen) fail("expected ')' after arguments of " + name);
        break;
      }
      n.predicate = declare(name, static_cast<int>(n.terms.size()));
      return add(std::move(n));
    }
    Node n;
    if (peek().kind == Token::Kind::kEq) n.kind = Node::Kind::kEq;
    else if (peek().kind == Token::Kind::kNeq) n.kind = Node::Kind::kNeq;
    else fail("expected '(' , '=' or '!=' after " + name);
    take();
    if (peek().kind != Token::Kind::kIdent) fail("expected term after (in)equality");
    n.terms = {term(name), term(take().text)};
    return add(std::move(n));
  }

  int declare(const std::string& name, int arity) {
    const int p = mln_.predicate_index(name);
    if (p < 0) {
      mln_.predicates.push_back({name, arity});
      return static_cast<int>(mln_.predicates.size()) - 1;
    }
    if (mln_.predicates[p].arity != arity)
      fail("arity mismatch for " + name + ": declared " +
           std::to_string(mln_.predicates[p].arity) + ", used with " + std::to_string(arity));
    return p;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int line_;
  Mln& mln_;
  Formula& f_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  int line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    std::string_view l = text.substr(start, end - start);
    if (auto h = l.find('#'); h != std::string_view::npos) l = l.substr(0, h);
    l = trim(l);
    if (!l.empty()) f(l, line);
    start = end + 1;
  }
}

void collect_constants(const Formula& f, std::set<std::string>& out) {
  for (const auto& n : f.nodes)
    for (const auto& t : n.terms)
      if (!t.is_var) out.insert(t.constant);
}

}  // namespace

int Mln::predicate_index(std::string_view name) const {
  for (std::size_t i = 0; i < predicates.size(); ++i)
    if (predicates[i].name == name) return static_cast<int>(i);
  return -1;
}

Mln parse_mln(std::string_view text) {
  Mln mln;
  for_each_line(text, [&](std::string_view l, int line) {
    if (l.substr(0, 10) == "predicate ") {
      const std::string_view decl = trim(l.substr(10));
      const auto slash = decl.find('/');
      if (slash == std::string_view::npos) throw ParseError(line, "expected Name/arity");
      const std::string name(trim(decl.substr(0, slash)));
      const std::string_view ar = trim(decl.substr(slash + 1));
      int arity = 0;
      const auto [p, ec] = std::from_chars(ar.data(), ar.data() + ar.size(), arity);
      if (ec != std::errc() || p != ar.data() + ar.size() || arity < 1)
        throw ParseError(line, "bad arity in predicate declaration");
      if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
        throw ParseError(line, "bad predicate name");
      const int existing = mln.predicate_index(name);
      if (existing >= 0 && mln.predicates[existing].arity != arity)
        throw ParseError(line, "arity mismatch for " + name);
      if (existing < 0) mln.predicates.push_back({name, arity});
      return;
    }
    const auto sp = l.find_first_of(" \t");
    if (sp == std::string_view::npos) throw ParseError(line, "expected '<weight> <formula>'");
    Formula f;
    f.weight = parse_real(l.substr(0, sp), line);
    f.text = std::string(trim(l.substr(sp)));
    Parser parser(tokenize(f.text, line), line, mln, f);
    f.root = parser.parse();
    mln.formulas.push_back(std::move(f));
  });
  if (mln.formulas.empty()) throw ParseError(0, "no formulas");
  std::set<std::string> consts;
  for (const auto& f : mln.formulas) collect_constants(f, consts);
  mln.constants.assign(consts.begin(), consts.end());
  return mln;
}

Mln load_mln(const std::string& path) { return parse_mln(read_file(path)); }

std::vector<EvidenceItem> parse_evidence(std::string_view text, const Mln& mln) {
  std::vector<EvidenceItem> items;
  for_each_line(text, [&](std::string_view l, int line) {
    EvidenceItem item;
    if (l.substr(0, 5) == "soft ") {
      item.kind = EvidenceItem::Kind::kSoft;
      l = trim(l.substr(5));
      const auto close = l.rfind(')');
      if (close == std::string_view::npos) throw ParseError(line, "expected atom");
      item.weight = parse_real(trim(l.substr(close + 1)), line);
      l = l.substr(0, close + 1);
    } else if (l[0] == '!') {
      item.kind = EvidenceItem::Kind::kFalse;
      l = trim(l.substr(1));
    }
    const auto open = l.find('(');
    if (open == std::string_view::npos || l.back() != ')') throw ParseError(line, "expected atom");
    const std::string name(trim(l.substr(0, open)));
    item.predicate = mln.predicate_index(name);
    if (item.predicate < 0) throw ParseError(line, "unknown predicate " + name);
    std::string_view args = l.substr(open + 1, l.size() - open - 2);
    while (true) {
      const auto comma = args.find(',');
      const std::string a(trim(args.substr(0, comma)));
      if (a.empty() || !is_constant_name(a))
        throw ParseError(line, "evidence arguments must be constants");
      item.args.push_back(a);
      if (comma == std::string_view::npos) break;
      args = args.substr(comma + 1);
    }
    if (static_cast<int>(item.args.size()) != mln.predicates[item.predicate].arity)
      throw ParseError(line, "arity mismatch for " + name);
    items.push_back(std::move(item));
  });
  return items;
}

std::vector<EvidenceItem> load_evidence(const std::string& path, const Mln& mln) {
  return parse_evidence(read_file(path), mln);
}

int GroundingMap::atom_index(int predicate, const std::vector<int>& args) const {
  int off = 0;
  for (int c : args) off = off * domain_size + c;
  return predicate_offset.at(predicate) + off;
}

std::string GroundingMap::atom_name(int atom, const Mln& mln) const {
  const GroundAtom& a = atoms[atom];
  std::string s = mln.predicates[a.predicate].name + "(";
  for (std::size_t j = 0; j < a.args.size(); ++j) {
    if (j) s += ",";
    s += constants[a.args[j]];
  }
  return s + ")";
}

namespace {

bool eval_node(const Formula& f, int node, const std::vector<int>& atom_val,
               const std::vector<char>& eq_val) {
  const Node& n = f.nodes[node];
  switch (n.kind) {
    case Node::Kind::kAtom: return atom_val[node] != 0;
    case Node::Kind::kEq:
    case Node::Kind::kNeq: return eq_val[node] != 0;
    case Node::Kind::kNot: return !eval_node(f, n.children[0], atom_val, eq_val);
    case Node::Kind::kAnd:
      return eval_node(f, n.children[0], atom_val, eq_val) &&
             eval_node(f, n.children[1], atom_val, eq_val);
    case Node::Kind::kOr:
      return eval_node(f, n.children[0], atom_val, eq_val) ||
             eval_node(f, n.children[1], atom_val, eq_val);
    case Node::Kind::kImplies:
      return !eval_node(f, n.children[0], atom_val, eq_val) ||
             eval_node(f, n.children[1], atom_val, eq_val);
    case Node::Kind::kIff:
      return eval_node(f, n.children[0], atom_val, eq_val) ==
             eval_node(f, n.children[1], atom_val, eq_val);
  }
  return false;
}

}  // namespace

Grounding ground_mln(const Mln& mln, int domain_size, const std::vector<EvidenceItem>& evidence) {
  GroundingMap g;
  std::set<std::string> named(mln.constants.begin(), mln.constants.end());
  for (const auto& e : evidence) named.insert(e.args.begin(), e.args.end());
  if (domain_size < static_cast<int>(named.size()) || domain_size < 1)
    throw MlnError("domain size " + std::to_string(domain_size) + " smaller than the " +
                   std::to_string(named.size()) + " named constants");
  g.constants.assign(named.begin(), named.end());
  g.num_distinguished = static_cast<int>(g.constants.size());
  g.domain_size = domain_size;
  for (int k = 1; static_cast<int>(g.constants.size()) < domain_size; ++k) {
    const std::string name = "C" + std::to_string(k);
    if (!named.count(name)) g.constants.push_back(name);
  }
  std::map<std::string, int> const_id;
  for (std::size_t i = 0; i < g.constants.size(); ++i)
    const_id[g.constants[i]] = static_cast<int>(i);

  const int d = domain_size;
  for (int p = 0; p < static_cast<int>(mln.predicates.size()); ++p) {
    const int ar = mln.predicates[p].arity;
    std::vector<int> args(ar, 0);
    std::uint64_t count = 1;
    for (int j = 0; j < ar; ++j) {
      count *= static_cast<std::uint64_t>(d);
      if (count > 10000000) throw MlnError("too many ground atoms");
    }
    for (std::uint64_t c = 0; c < count; ++c) {
      std::uint64_t rest = c;
      for (int j = ar - 1; j >= 0; --j) {
        args[j] = static_cast<int>(rest % d);
        rest /= d;
      }
      g.atoms.push_back({p, args});
    }
  }
  g.predicate_offset.assign(mln.predicates.size(), 0);
  for (int i = static_cast<int>(g.atoms.size()) - 1; i >= 0; --i)
    g.predicate_offset[g.atoms[i].predicate] = i;
  auto atom_of = [&](int p, const std::vector<int>& args) { return g.atom_index(p, args); };

  g.hard_value.assign(g.atoms.size(), -1);
  g.soft_weight.assign(g.atoms.size(), 0.0);
  std::vector<char> has_soft(g.atoms.size(), 0);
  for (const auto& e : evidence) {
    std::vector<int> args;
    for (const auto& a : e.args) args.push_back(const_id.at(a));
    const int atom = atom_of(e.predicate, args);
    if (g.hard_value[atom] >= 0 || has_soft[atom])
      throw MlnError("duplicate evidence for an atom");
    if (e.kind == EvidenceItem::Kind::kSoft) {
      has_soft[atom] = 1;
      g.soft_weight[atom] = e.weight;
    } else {
      g.hard_value[atom] = e.kind == EvidenceItem::Kind::kTrue ? 1 : 0;
    }
  }
  g.var_of_atom.assign(g.atoms.size(), -1);
  for (std::size_t a = 0; a < g.atoms.size(); ++a) {
    if (g.hard_value[a] >= 0) continue;
    g.var_of_atom[a] = static_cast<int>(g.atom_of_var.size());
    g.atom_of_var.push_back(static_cast<int>(a));
  }

  std::vector<Feature> features;
  std::vector<int> formula_of_feature;
  for (int fi = 0; fi < static_cast<int>(mln.formulas.size()); ++fi) {
    const Formula& f = mln.formulas[fi];
    const int k = static_cast<int>(f.var_names.size());
    std::uint64_t count = 1;
    for (int j = 0; j < k; ++j) {
      count *= static_cast<std::uint64_t>(d);
      if (count > 10000000) throw MlnError("too many groundings");
    }
    std::vector<int> sub(k, 0);
    auto resolve = [&](const Term& t) { return t.is_var ? sub[t.var] : const_id.at(t.constant); };
    for (std::uint64_t c = 0; c < count; ++c) {
      std::uint64_t rest = c;
      for (int j = k - 1; j >= 0; --j) {
        sub[j] = static_cast<int>(rest % d);
        rest /= d;
      }
      std::vector<int> node_var(f.nodes.size(), -1);
      std::vector<int> atom_val(f.nodes.size(), 0);
      std::vector<char> eq_val(f.nodes.size(), 0);
      std::vector<int> scope;
      for (int ni = 0; ni < static_cast<int>(f.nodes.size()); ++ni) {
        const Node& n = f.nodes[ni];
        if (n.kind == Node::Kind::kAtom) {
          std::vector<int> args;
          for (const auto& t : n.terms) args.push_back(resolve(t));
          const int atom = atom_of(n.predicate, args);
          if (g.hard_value[atom] >= 0) {
            atom_val[ni] = g.hard_value[atom];
          } else {
            node_var[ni] = g.var_of_atom[atom];
            scope.push_back(node_var[ni]);
          }
        } else if (n.kind == Node::Kind::kEq || n.kind == Node::Kind::kNeq) {
          const bool same = resolve(n.terms[0]) == resolve(n.terms[1]);
          eq_val[ni] = (n.kind == Node::Kind::kEq) == same;
        }
      }
      std::sort(scope.begin(), scope.end());
      scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
      const int ks = static_cast<int>(scope.size());
      if (ks > 20) throw MlnError("grounding has more than 20 atoms");
      std::vector<double> table(std::size_t{1} << ks);
      for (std::uint32_t a = 0; a < table.size(); ++a) {
        for (int ni = 0; ni < static_cast<int>(f.nodes.size()); ++ni) {
          if (node_var[ni] < 0) continue;
          const int pos = static_cast<int>(
              std::lower_bound(scope.begin(), scope.end(), node_var[ni]) - scope.begin());
          atom_val[ni] = (a >> (ks - 1 - pos)) & 1u;
        }
        table[a] = eval_node(f, f.root, atom_val, eq_val) ? 1.0 : 0.0;
      }
      // Keep only the atoms the indicator depends on.
      Feature full{scope, table};
      std::vector<int> keep;
      for (int j = 0; j < ks; ++j)
        if (full.depends_on_position(j)) keep.push_back(j);
      if (keep.empty()) continue;
      Feature feat;
      for (int j : keep) feat.scope.push_back(scope[j]);
      const int kr = static_cast<int>(keep.size());
      feat.table.resize(std::size_t{1} << kr);
      for (std::uint32_t b = 0; b < feat.table.size(); ++b) {
        std::uint32_t a = 0;
        for (int r = 0; r < kr; ++r)
          if ((b >> (kr - 1 - r)) & 1u) a |= 1u << (ks - 1 - keep[r]);
        feat.table[b] = table[a];
      }
      g.feature_of_grounding[{fi, sub}] = static_cast<int>(features.size());
      g.feature_source.push_back({fi, sub, -1});
      features.push_back(std::move(feat));
      formula_of_feature.push_back(fi);
    }
  }

  g.tie_class_of_formula.assign(mln.formulas.size(), -1);
  std::vector<double> theta;
  {
    std::vector<char> used(mln.formulas.size(), 0);
    for (int fi : formula_of_feature) used[fi] = 1;
    for (int fi = 0; fi < static_cast<int>(mln.formulas.size()); ++fi) {
      if (!used[fi]) continue;
      g.tie_class_of_formula[fi] = static_cast<int>(theta.size());
      theta.push_back(mln.formulas[fi].weight);
    }
  }
  std::vector<int> ties;
  for (int fi : formula_of_feature) ties.push_back(g.tie_class_of_formula[fi]);

  std::map<double, int> soft_class;
  for (std::size_t a = 0; a < g.atoms.size(); ++a) {
    if (!has_soft[a]) continue;
    const double w = g.soft_weight[a];
    auto it = soft_class.find(w);
    if (it == soft_class.end()) {
      it = soft_class.emplace(w, static_cast<int>(theta.size())).first;
      theta.push_back(w);
    }
    features.push_back({{g.var_of_atom[a]}, {0.0, 1.0}});
    ties.push_back(it->second);
    g.feature_source.push_back({-1, {}, static_cast<int>(a)});
  }
  if (g.atom_of_var.empty()) throw MlnError("every ground atom is observed");
  if (features.empty()) throw MlnError("grounding produced no features");
  Model model = Model::create(static_cast<int>(g.atom_of_var.size()), std::move(features),
                              std::move(ties), std::move(theta));
  return {std::move(model), std::move(g)};
}

int AtomSignature::num_anonymous_classes() const {
  int k = 0;
  for (int t : tags) k = std::max(k, t < 0 ? -t : 0);
  return k;
}

AtomSignature signature_of(int predicate, const std::vector<int>& args, int num_distinguished) {
  AtomSignature s;
  s.predicate = predicate;
  std::vector<int> anon;
  for (int c : args) {
    if (c < num_distinguished) {
      s.tags.push_back(c);
      continue;
    }
    auto it = std::find(anon.begin(), anon.end(), c);
    if (it == anon.end()) {
      anon.push_back(c);
      s.tags.push_back(-static_cast<int>(anon.size()));
    } else {
      s.tags.push_back(-1 - static_cast<int>(it - anon.begin()));
    }
  }
  return s;
}

RenamingOrbits renaming_orbits(const GroundingMap& gmap, const Model& model) {
  RenamingOrbits out;
  {
    std::map<AtomSignature, int> label;
    std::vector<int> labels;
    for (int atom : gmap.atom_of_var) {
      const auto& a = gmap.atoms[atom];
      const auto sig = signature_of(a.predicate, a.args, gmap.num_distinguished);
      labels.push_back(label.emplace(sig, static_cast<int>(label.size())).first->second);
    }
    out.vars = OrbitPartition::from_labels(OrbitDomain::kVars, labels);
  }
  {
    std::map<std::pair<int, AtomSignature>, int> label;
    std::vector<int> labels;
    for (int i = 0; i < model.num_features(); ++i) {
      const FeatureSource& src = gmap.feature_source[i];
      std::pair<int, AtomSignature> key;
      if (src.formula >= 0) {
        key = {src.formula, signature_of(-1, src.substitution, gmap.num_distinguished)};
      } else {
        key = {-1, AtomSignature{-1, {src.soft_atom}}};
      }
      labels.push_back(label.emplace(key, static_cast<int>(label.size())).first->second);
    }
    out.features = OrbitPartition::from_labels(OrbitDomain::kFeatures, labels);
  }
  return out;
}

std::uint64_t orbit_size_analytic(const AtomSignature& sig, int domain_size,
                                  int num_distinguished) {
  const int k = sig.num_anonymous_classes();
  const int free = domain_size - num_distinguished;
  if (k > free) return 0;
  std::uint64_t n = 1;
  for (int j = 0; j < k; ++j) n *= static_cast<std::uint64_t>(free - j);
  return n;
}

PermutationPair renaming_to_pair(const std::vector<int>& r, const GroundingMap& gmap,
                                 const Model& model) {
  if (static_cast<int>(r.size()) != gmap.domain_size || !is_permutation(r, gmap.domain_size))
    throw std::invalid_argument("renaming is not a permutation of the domain");
  for (int c = 0; c < gmap.num_distinguished; ++c)
    if (r[c] != c) throw std::invalid_argument("renaming moves a distinguished constant");
  auto image = [&](const GroundAtom& a) {
    std::vector<int> args = a.args;
    for (int& c : args) c = r[c];
    return gmap.atom_index(a.predicate, args);
  };
  PermutationPair pp;
  pp.pi.resize(gmap.atom_of_var.size());
  for (std::size_t v = 0; v < gmap.atom_of_var.size(); ++v) {
    const int img = gmap.var_of_atom[image(gmap.atoms[gmap.atom_of_var[v]])];
    if (img < 0) throw std::logic_error("renaming maps a variable onto evidence");
    pp.pi[v] = img;
  }
  pp.gamma.resize(model.num_features());
  for (int i = 0; i < model.num_features(); ++i) {
    const FeatureSource& src = gmap.feature_source[i];
    if (src.formula < 0) {
      pp.gamma[i] = i;
      continue;
    }
    std::vector<int> sub = src.substitution;
    for (int& c : sub) c = r[c];
    pp.gamma[i] = gmap.feature_of_grounding.at({src.formula, sub});
  }
  return pp;
}

GeneratorSet renaming_generators(const GroundingMap& gmap, const Model& model,
                                 const std::vector<int>& movable) {
  GeneratorSet gs;
  const int k = static_cast<int>(movable.size());
  std::uint64_t order = 1;
  bool overflow = false;
  for (int j = 2; j <= k; ++j) {
    if (order > UINT64_MAX / static_cast<std::uint64_t>(j)) overflow = true;
    else order *= static_cast<std::uint64_t>(j);
  }
  if (!overflow) gs.group_order = order;
  if (k < 2) return gs;
  Permutation swap = identity_permutation(gmap.domain_size);
  std::swap(swap[movable[0]], swap[movable[1]]);
  gs.generators.push_back(renaming_to_pair(swap, gmap, model));
  if (k > 2) {
    Permutation cycle = identity_permutation(gmap.domain_size);
    for (int j = 0; j < k; ++j) cycle[movable[j]] = movable[(j + 1) % k];
    gs.generators.push_back(renaming_to_pair(cycle, gmap, model));
  }
  return gs;
}

GeneratorSet renaming_generators(const GroundingMap& gmap, const Model& model) {
  std::vector<int> movable;
  for (int c = gmap.num_distinguished; c < gmap.domain_size; ++c) movable.push_back(c);
  return renaming_generators(gmap, model, movable);
}

GeneratorSet renaming_stabilizer(const GroundingMap& gmap, const Model& model, int var) {
  const auto& args = gmap.atoms[gmap.atom_of_var.at(var)].args;
  std::vector<int> movable;
  for (int c = gmap.num_distinguished; c < gmap.domain_size; ++c)
    if (std::find(args.begin(), args.end(), c) == args.end()) movable.push_back(c);
  return renaming_generators(gmap, model, movable);
}

}  // namespace symlift::mln
