#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symlift {

/// Raised for malformed FGM text. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Raised when a model violates a structural invariant.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Configuration = std::vector<std::uint8_t>;

/// A feature f(x_{s_0}, ..., x_{s_{K-1}}) stored as a table over the 2^K
/// scope assignments. The first scope variable is the most significant bit of
/// the table index.
struct Feature {
  std::vector<int> scope;
  std::vector<double> table;

  int arity() const { return static_cast<int>(scope.size()); }
  double value(std::span<const std::uint8_t> x) const;
  double value_at(std::uint32_t assignment) const { return table[assignment]; }
  bool depends_on_position(int position) const;

  bool operator==(const Feature&) const = default;
};

/// Binary-variable factored exponential family with tied natural parameters.
/// Immutable once built; `Model::create` validates every invariant.
class Model {
 public:
  static Model create(int num_vars, std::vector<Feature> features,
                      std::vector<int> tie_class_of, std::vector<double> theta);

  int num_vars() const { return num_vars_; }
  int num_features() const { return static_cast<int>(features_.size()); }
  int num_tie_classes() const { return static_cast<int>(theta_.size()); }
  const std::vector<Feature>& features() const { return features_; }
  const Feature& feature(int i) const { return features_[i]; }
  int tie_class_of(int i) const { return tie_class_of_[i]; }
  const std::vector<int>& tie_classes() const { return tie_class_of_; }
  double theta(int tie_class) const { return theta_[tie_class]; }
  const std::vector<double>& thetas() const { return theta_; }
  double feature_weight(int i) const { return theta_[tie_class_of_[i]]; }

  bool operator==(const Model&) const = default;

 private:
  Model() = default;

  int num_vars_ = 0;
  std::vector<Feature> features_;
  std::vector<int> tie_class_of_;
  std::vector<double> theta_;
};

/// Sum of theta_{tie(i)} * f_i(x). Throws ModelError on length mismatch.
double score(const Model& model, std::span<const std::uint8_t> x);

/// Feature vector Phi(x) (unweighted feature values).
std::vector<double> feature_vector(const Model& model,
                                   std::span<const std::uint8_t> x);

using VarPair = std::pair<int, int>;

/// Graph structure of a model: every pair of variables sharing a scope is an
/// edge; scopes of arity >= 3 are also kept as clusters.
struct Skeleton {
  int num_vars = 0;
  std::vector<VarPair> edges;                 // sorted, u < v
  std::vector<std::vector<int>> hyperedges;   // sorted scopes, arity >= 3

  int edge_index(int u, int v) const;  // -1 if absent
  int cluster_index(const std::vector<int>& scope) const;
};

Skeleton skeleton(const Model& model);

/// Overcomplete parameters. Pair tables are indexed 2*t_u + t_v with u < v;
/// cluster tables follow the cluster's sorted scope (first var most
/// significant), with features sharing a scope summed.
struct OvercompleteParams {
  std::vector<std::array<double, 2>> node_theta;
  std::map<VarPair, std::array<double, 4>> pair_theta;
  std::map<std::vector<int>, std::vector<double>> factor_theta;

  double inner_product(std::span<const std::uint8_t> x) const;
};

OvercompleteParams to_overcomplete(const Model& model);

// FGM text format.
Model parse_model(std::string_view text);
Model load_model(const std::string& path);
std::string serialize_model(const Model& model);

std::string format_real(double v);

}  // namespace symlift
