#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symlift {

enum class Sense { kLe, kEq, kGe };

struct LpRow {
  std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
  Sense sense = Sense::kEq;
  double rhs = 0.0;
};

/// maximize objective . x subject to rows and lower <= x <= upper.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<double> lower;
  std::vector<double> upper;

  explicit LinearProgram(int n = 0)
      : num_vars(n), objective(n, 0.0), lower(n, 0.0), upper(n, 1.0) {}

  int num_rows() const { return static_cast<int>(rows.size()); }
  /// Throws std::invalid_argument on bad indices or non-finite data.
  void validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

std::string to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::kOptimal;
  std::vector<double> x;
  double value = 0.0;
  long pivots = 0;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense bounded-variable simplex. Rows can be appended after a solve; the
/// next solve then starts from the previous basis (dual simplex).
class SimplexSolver {
 public:
  explicit SimplexSolver(LinearProgram lp);

  LpSolution solve();
  /// Appends a row and reoptimizes. Falls back to a cold solve if the warm
  /// start runs into numerical trouble.
  LpSolution add_row(const LpRow& row);

  const LinearProgram& lp() const { return lp_; }
  /// Pivot log (entering column per pivot), for determinism checks.
  const std::vector<int>& pivot_log() const { return pivot_log_; }

 private:
  enum class State : unsigned char { kBasic, kLower, kUpper, kFree };

  double& t(int i, int j) { return tab_[static_cast<std::size_t>(i) * cols_ + j]; }
  double t(int i, int j) const { return tab_[static_cast<std::size_t>(i) * cols_ + j]; }
  double basic_lb(int i) const;
  double basic_ub(int i) const;
  double col_lb(int j) const;
  double col_ub(int j) const;
  double col_cost(int j) const;

  void init_basis();
  void pivot(int r, int q);
  bool primal(bool phase1);  // false if unbounded
  bool dual();               // false if infeasible or stalled
  void compute_reduced_costs(bool phase1);
  void recompute_basics();
  void drive_out_artificials();
  LpSolution extract(LpStatus status) const;
  bool residual_ok(const std::vector<double>& x) const;
  LpSolution cold_solve();

  LinearProgram lp_;
  int m_ = 0, cols_ = 0;  // cols_ = num_vars + m_
  std::vector<double> tab_;
  std::vector<double> beta_;
  std::vector<int> head_;  // column index, or -1 for an artificial
  std::vector<State> state_;
  std::vector<double> xval_;  // values of nonbasic columns
  std::vector<double> d_;
  bool phase1_ = false;
  bool solved_ = false;
  long degenerate_ = 0;
  long pivots_ = 0;
  std::vector<int> pivot_log_;
};

LpSolution simplex_solve(const LinearProgram& lp);

}  // namespace symlift
