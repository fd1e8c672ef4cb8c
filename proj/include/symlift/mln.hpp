#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "symlift/group.hpp"
#include "symlift/model.hpp"

namespace symlift::mln {

class MlnError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Term {
  bool is_var = false;
  int var = -1;          // index into Formula::var_names
  std::string constant;  // when !is_var
};

struct Node {
  enum class Kind { kAtom, kEq, kNeq, kNot, kAnd, kOr, kImplies, kIff };
  Kind kind = Kind::kAtom;
  int predicate = -1;        // kAtom
  std::vector<Term> terms;   // kAtom arguments, or the two sides of kEq/kNeq
  std::vector<int> children; // node indices
};

struct Formula {
  double weight = 0.0;
  std::string text;
  std::vector<Node> nodes;
  int root = -1;
  std::vector<std::string> var_names;  // order of first appearance
};

struct Predicate {
  std::string name;
  int arity = 0;
};

struct Mln {
  std::vector<Predicate> predicates;
  std::vector<Formula> formulas;
  std::vector<std::string> constants;  // named in formulas, sorted

  int predicate_index(std::string_view name) const;  // -1 if unknown
};

/// Lines are `predicate Name/arity` or `<weight> <formula>`; `#` starts a
/// comment. Throws ParseError with the line number.
Mln parse_mln(std::string_view text);
Mln load_mln(const std::string& path);

struct EvidenceItem {
  enum class Kind { kTrue, kFalse, kSoft };
  Kind kind = Kind::kTrue;
  int predicate = -1;
  std::vector<std::string> args;
  double weight = 0.0;
};

/// Lines `Atom`, `!Atom` or `soft Atom <weight>`.
std::vector<EvidenceItem> parse_evidence(std::string_view text, const Mln& mln);
std::vector<EvidenceItem> load_evidence(const std::string& path, const Mln& mln);

struct GroundAtom {
  int predicate = -1;
  std::vector<int> args;  // constant ids
};

struct FeatureSource {
  int formula = -1;               // -1 for soft evidence
  std::vector<int> substitution;  // constant id per formula variable
  int soft_atom = -1;
};

struct GroundingMap {
  std::vector<std::string> constants;  // distinguished first, then C1, C2, ...
  int num_distinguished = 0;
  int domain_size = 0;
  std::vector<GroundAtom> atoms;       // predicate-major, tuples lexicographic
  std::vector<int> predicate_offset;   // first atom of each predicate
  std::vector<int> var_of_atom;        // -1 for hard evidence
  std::vector<int> atom_of_var;
  std::vector<std::int8_t> hard_value; // -1 unobserved, else 0/1
  std::vector<double> soft_weight;     // per atom, 0 when none
  std::vector<FeatureSource> feature_source;
  std::vector<int> tie_class_of_formula;  // -1 when no grounding survives
  std::map<std::pair<int, std::vector<int>>, int> feature_of_grounding;

  int atom_index(int predicate, const std::vector<int>& args) const;
  std::string atom_name(int atom, const Mln& mln) const;
  int num_anonymous() const { return domain_size - num_distinguished; }
};

struct Grounding {
  Model model;
  GroundingMap map;
};

/// domain_size is the total number of constants, named ones included.
Grounding ground_mln(const Mln& mln, int domain_size,
                     const std::vector<EvidenceItem>& evidence = {});

/// Per-argument tags: a distinguished constant id (>= 0) or -1 - k for the
/// k-th distinct anonymous constant in the tuple.
struct AtomSignature {
  int predicate = -1;
  std::vector<int> tags;

  int num_anonymous_classes() const;
  auto operator<=>(const AtomSignature&) const = default;
};

AtomSignature signature_of(int predicate, const std::vector<int>& args, int num_distinguished);

struct RenamingOrbits {
  OrbitPartition vars;
  OrbitPartition features;
};

/// Orbits of the renaming group (permutations of the anonymous constants)
/// on ground variables and features, from signatures alone.
RenamingOrbits renaming_orbits(const GroundingMap& gmap, const Model& model);

/// Number of groundings of a signature: (d - c)(d - c - 1)... over its
/// anonymous classes, 0 when there are too few anonymous constants.
std::uint64_t orbit_size_analytic(const AtomSignature& sig, int domain_size,
                                  int num_distinguished);

/// Renaming r (permutation of constant ids fixing the distinguished ones) as
/// a model automorphism.
PermutationPair renaming_to_pair(const std::vector<int>& r, const GroundingMap& gmap,
                                 const Model& model);

/// A transposition and a full cycle of the given constants, as pairs.
GeneratorSet renaming_generators(const GroundingMap& gmap, const Model& model,
                                 const std::vector<int>& movable);
GeneratorSet renaming_generators(const GroundingMap& gmap, const Model& model);
/// Renaming group with the constants of variable `var`'s atom also fixed.
GeneratorSet renaming_stabilizer(const GroundingMap& gmap, const Model& model, int var);

}  // namespace symlift::mln
