#include <algorithm>
#include <cmath>

#include "symlift/lp.hpp"

namespace symlift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr double kOptTol = 1e-7;
constexpr double kResidualTol = 1e-6;
constexpr long kBlandAfter = 1000;
constexpr long kMaxPivots = 2000000;

}  // namespace

void LinearProgram::validate() const {
  if (static_cast<int>(objective.size()) != num_vars ||
      static_cast<int>(lower.size()) != num_vars || static_cast<int>(upper.size()) != num_vars)
    throw std::invalid_argument("LP vectors do not match num_vars");
  for (int j = 0; j < num_vars; ++j) {
    if (!std::isfinite(objective[j])) throw std::invalid_argument("non-finite objective");
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j])
      throw std::invalid_argument("bad bounds on variable " + std::to_string(j));
  }
  for (const auto& row : rows) {
    if (!std::isfinite(row.rhs)) throw std::invalid_argument("non-finite rhs");
    for (const auto& [v, a] : row.coeffs) {
      if (v < 0 || v >= num_vars) throw std::invalid_argument("row references bad variable");
      if (!std::isfinite(a)) throw std::invalid_argument("non-finite coefficient");
    }
  }
}

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
  }
  return "?";
}

SimplexSolver::SimplexSolver(LinearProgram lp) : lp_(std::move(lp)) { lp_.validate(); }

double SimplexSolver::col_lb(int j) const {
  if (j < lp_.num_vars) return lp_.lower[j];
  return lp_.rows[j - lp_.num_vars].sense == Sense::kGe ? -kInf : 0.0;
}

double SimplexSolver::col_ub(int j) const {
  if (j < lp_.num_vars) return lp_.upper[j];
  return lp_.rows[j - lp_.num_vars].sense == Sense::kLe ? kInf : 0.0;
}

double SimplexSolver::col_cost(int j) const {
  return j < lp_.num_vars ? lp_.objective[j] : 0.0;
}

double SimplexSolver::basic_lb(int i) const {
  return head_[i] < 0 ? 0.0 : col_lb(head_[i]);
}

double SimplexSolver::basic_ub(int i) const {
  if (head_[i] < 0) return phase1_ ? kInf : 0.0;
  return col_ub(head_[i]);
}

void SimplexSolver::init_basis() {
  const int n = lp_.num_vars;
  m_ = lp_.num_rows();
  cols_ = n + m_;
  tab_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
  beta_.assign(m_, 0.0);
  head_.assign(m_, -1);
  state_.assign(cols_, State::kLower);
  xval_.assign(cols_, 0.0);
  degenerate_ = 0;

  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp_.lower[j])) {
      state_[j] = State::kLower;
      xval_[j] = lp_.lower[j];
    } else if (std::isfinite(lp_.upper[j])) {
      state_[j] = State::kUpper;
      xval_[j] = lp_.upper[j];
    } else {
      state_[j] = State::kFree;
      xval_[j] = 0.0;
    }
  }
  for (int i = 0; i < m_; ++i) {
    const LpRow& row = lp_.rows[i];
    double r = row.rhs;
    for (const auto& [v, a] : row.coeffs) {
      t(i, v) += a;
      r -= a * xval_[v];
    }
    const int s = n + i;
    t(i, s) = 1.0;
    if (r >= col_lb(s) - kFeasTol && r <= col_ub(s) + kFeasTol) {
      head_[i] = s;
      state_[s] = State::kBasic;
      beta_[i] = r;
      continue;
    }
    // Artificial basic; slack parked at its nearest bound (always 0 here).
    state_[s] = row.sense == Sense::kGe ? State::kUpper : State::kLower;
    xval_[s] = 0.0;
    const double sign = r > 0 ? 1.0 : -1.0;
    for (int j = 0; j < cols_; ++j) t(i, j) *= sign;
    beta_[i] = std::abs(r);
    head_[i] = -1;
  }
}

void SimplexSolver::pivot(int r, int q) {
  const double piv = t(r, q);
  double* prow = &tab_[static_cast<std::size_t>(r) * cols_];
  std::vector<int> nz;
  for (int j = 0; j < cols_; ++j) {
    if (prow[j] != 0.0) {
      prow[j] /= piv;
      nz.push_back(j);
    }
  }
  prow[q] = 1.0;
  for (int i = 0; i < m_; ++i) {
    if (i == r) continue;
    double* row = &tab_[static_cast<std::size_t>(i) * cols_];
    const double f = row[q];
    if (f == 0.0) continue;
    for (int j : nz) row[j] -= f * prow[j];
    row[q] = 0.0;
  }
  const double dq = d_[q];
  if (dq != 0.0) {
    for (int j : nz) d_[j] -= dq * prow[j];
    d_[q] = 0.0;
  }
  head_[r] = q;
  state_[q] = State::kBasic;
  ++pivots_;
  pivot_log_.push_back(q);
  if (pivots_ > kMaxPivots) throw NumericalError("simplex pivot limit reached");
}

void SimplexSolver::compute_reduced_costs(bool phase1) {
  d_.assign(cols_, 0.0);
  if (!phase1)
    for (int j = 0; j < cols_; ++j) d_[j] = col_cost(j);
  for (int i = 0; i < m_; ++i) {
    double cb;
    if (head_[i] < 0) cb = phase1 ? -1.0 : 0.0;
    else cb = phase1 ? 0.0 : col_cost(head_[i]);
    if (cb == 0.0) continue;
    const double* row = &tab_[static_cast<std::size_t>(i) * cols_];
    for (int j = 0; j < cols_; ++j) d_[j] -= cb * row[j];
  }
  for (int i = 0; i < m_; ++i)
    if (head_[i] >= 0) d_[head_[i]] = 0.0;
}

void SimplexSolver::recompute_basics() {
  // The slack block of the tableau is the accumulated row transform.
  const int n = lp_.num_vars;
  for (int i = 0; i < m_; ++i) {
    double b = 0.0;
    for (int k = 0; k < m_; ++k) b += t(i, n + k) * lp_.rows[k].rhs;
    for (int j = 0; j < cols_; ++j)
      if (state_[j] != State::kBasic && xval_[j] != 0.0) b -= t(i, j) * xval_[j];
    beta_[i] = b;
  }
}

bool SimplexSolver::primal(bool phase1) {
  phase1_ = phase1;
  compute_reduced_costs(phase1);
  for (;;) {
    const bool bland = degenerate_ > kBlandAfter;
    int q = -1;
    int dir = 0;
    double best = 0.0;
    for (int j = 0; j < cols_; ++j) {
      const State s = state_[j];
      if (s == State::kBasic) continue;
      const double lb = col_lb(j), ub = col_ub(j);
      if (lb == ub) continue;
      int dj = 0;
      if (d_[j] > kOptTol && s != State::kUpper) dj = 1;
      else if (d_[j] < -kOptTol && s != State::kLower) dj = -1;
      if (dj == 0) continue;
      const double score = std::abs(d_[j]);
      if (bland) {
        q = j;
        dir = dj;
        break;
      }
      if (score > best) {
        best = score;
        q = j;
        dir = dj;
      }
    }
    if (q < 0) return true;

    double tmax = col_ub(q) - col_lb(q);  // bound flip
    int r = -1;
    double rbest_alpha = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double alpha = t(i, q) * dir;
      double ti;
      if (alpha > kPivotTol) {
        const double lb = basic_lb(i);
        if (!std::isfinite(lb)) continue;
        ti = (beta_[i] - lb) / alpha;
      } else if (alpha < -kPivotTol) {
        const double ub = basic_ub(i);
        if (!std::isfinite(ub)) continue;
        ti = (ub - beta_[i]) / -alpha;
      } else {
        continue;
      }
      ti = std::max(ti, 0.0);
      bool take = false;
      if (ti < tmax - 1e-12) take = true;
      else if (ti <= tmax + 1e-12 && r >= 0) {
        if (bland) {
          const int hi = head_[i] < 0 ? -1 - i : head_[i];
          const int hr = head_[r] < 0 ? -1 - r : head_[r];
          take = hi < hr;
        } else {
          take = std::abs(alpha) > rbest_alpha;
        }
      }
      if (take) {
        tmax = ti;
        r = i;
        rbest_alpha = std::abs(alpha);
      }
    }
    if (!std::isfinite(tmax)) return false;

    for (int i = 0; i < m_; ++i) {
      const double a = t(i, q);
      if (a != 0.0) beta_[i] -= a * dir * tmax;
    }
    if (tmax < 1e-12) ++degenerate_;
    if (r < 0) {
      xval_[q] = dir > 0 ? col_ub(q) : col_lb(q);
      state_[q] = dir > 0 ? State::kUpper : State::kLower;
      continue;
    }
    const double entering = xval_[q] + dir * tmax;
    const int leave = head_[r];
    if (leave >= 0) {
      const bool to_lower = t(r, q) * dir > 0;
      state_[leave] = to_lower ? State::kLower : State::kUpper;
      xval_[leave] = to_lower ? col_lb(leave) : col_ub(leave);
    }
    pivot(r, q);
    beta_[r] = entering;
    xval_[q] = 0.0;
  }
}

void SimplexSolver::drive_out_artificials() {
  for (int r = 0; r < m_; ++r) {
    if (head_[r] >= 0) continue;
    int q = -1;
    double best = kPivotTol;
    for (int j = 0; j < cols_; ++j) {
      if (state_[j] == State::kBasic) continue;
      if (std::abs(t(r, j)) > best) {
        best = std::abs(t(r, j));
        q = j;
      }
    }
    if (q < 0) continue;  // redundant row; the artificial stays fixed at 0
    const double delta = beta_[r] / t(r, q);
    for (int i = 0; i < m_; ++i) {
      const double a = t(i, q);
      if (a != 0.0) beta_[i] -= a * delta;
    }
    const double entering = xval_[q] + delta;
    pivot(r, q);
    beta_[r] = entering;
    xval_[q] = 0.0;
  }
}

bool SimplexSolver::dual() {
  phase1_ = false;
  long iters = 0;
  for (;;) {
    int r = -1;
    double worst = kFeasTol;
    for (int i = 0; i < m_; ++i) {
      const double lb = basic_lb(i), ub = basic_ub(i);
      const double viol = std::max(lb - beta_[i], beta_[i] - ub);
      if (viol > worst) {
        worst = viol;
        r = i;
      }
    }
    if (r < 0) return true;
    if (++iters > 50000) return false;
    const bool raise = beta_[r] < basic_lb(r);
    const double target = raise ? basic_lb(r) : basic_ub(r);

    int q = -1;
    double best_ratio = kInf, best_alpha = 0.0;
    for (int j = 0; j < cols_; ++j) {
      const State s = state_[j];
      if (s == State::kBasic) continue;
      if (col_lb(j) == col_ub(j)) continue;
      const double a = t(r, j);
      if (std::abs(a) <= kPivotTol) continue;
      // Basic r moves by -a * dx_j.
      bool ok;
      if (raise) ok = (s == State::kLower && a < 0) || (s == State::kUpper && a > 0) || s == State::kFree;
      else ok = (s == State::kLower && a > 0) || (s == State::kUpper && a < 0) || s == State::kFree;
      if (!ok) continue;
      const double ratio = std::abs(d_[j]) / std::abs(a);
      if (ratio < best_ratio - 1e-12 ||
          (ratio <= best_ratio + 1e-12 && std::abs(a) > best_alpha)) {
        best_ratio = ratio;
        best_alpha = std::abs(a);
        q = j;
      }
    }
    if (q < 0) return false;

    const double delta = (beta_[r] - target) / t(r, q);
    for (int i = 0; i < m_; ++i) {
      const double a = t(i, q);
      if (a != 0.0) beta_[i] -= a * delta;
    }
    const double entering = xval_[q] + delta;
    const int leave = head_[r];
    if (leave >= 0) {
      state_[leave] = raise ? State::kLower : State::kUpper;
      xval_[leave] = target;
    }
    pivot(r, q);
    beta_[r] = entering;
    xval_[q] = 0.0;
  }
}

LpSolution SimplexSolver::extract(LpStatus status) const {
  LpSolution sol;
  sol.status = status;
  sol.pivots = pivots_;
  if (status != LpStatus::kOptimal) return sol;
  std::vector<double> full(cols_);
  for (int j = 0; j < cols_; ++j) full[j] = xval_[j];
  for (int i = 0; i < m_; ++i)
    if (head_[i] >= 0) full[head_[i]] = beta_[i];
  sol.x.assign(full.begin(), full.begin() + lp_.num_vars);
  for (int j = 0; j < lp_.num_vars; ++j) {
    // Snap tiny bound overshoots.
    sol.x[j] = std::clamp(sol.x[j], lp_.lower[j], lp_.upper[j]);
    sol.value += lp_.objective[j] * sol.x[j];
  }
  return sol;
}

bool SimplexSolver::residual_ok(const std::vector<double>& x) const {
  for (const auto& row : lp_.rows) {
    double act = 0.0;
    for (const auto& [v, a] : row.coeffs) act += a * x[v];
    const double diff = act - row.rhs;
    if (row.sense == Sense::kLe && diff > kResidualTol) return false;
    if (row.sense == Sense::kGe && diff < -kResidualTol) return false;
    if (row.sense == Sense::kEq && std::abs(diff) > kResidualTol) return false;
  }
  return true;
}

LpSolution SimplexSolver::cold_solve() {
  init_basis();
  if (!primal(true)) throw NumericalError("phase 1 reported unbounded");
  double infeas = 0.0;
  for (int i = 0; i < m_; ++i)
    if (head_[i] < 0) infeas += beta_[i];
  if (infeas > kFeasTol) {
    solved_ = false;
    return extract(LpStatus::kInfeasible);
  }
  phase1_ = false;
  drive_out_artificials();
  recompute_basics();
  if (!primal(false)) {
    solved_ = false;
    return extract(LpStatus::kUnbounded);
  }
  recompute_basics();
  LpSolution sol = extract(LpStatus::kOptimal);
  if (!residual_ok(sol.x)) throw NumericalError("feasibility residual above 1e-6 at optimum");
  solved_ = true;
  return sol;
}

LpSolution SimplexSolver::solve() { return cold_solve(); }

LpSolution SimplexSolver::add_row(const LpRow& row) {
  for (const auto& [v, a] : row.coeffs)
    if (v < 0 || v >= lp_.num_vars || !std::isfinite(a))
      throw std::invalid_argument("add_row: bad coefficient");
  if (!solved_) {
    lp_.rows.push_back(row);
    return cold_solve();
  }
  const int n = lp_.num_vars;
  const int old_cols = cols_;
  const int r = m_;

  // Current values of all columns before the row is added.
  std::vector<double> full(old_cols);
  for (int j = 0; j < old_cols; ++j) full[j] = xval_[j];
  for (int i = 0; i < m_; ++i)
    if (head_[i] >= 0) full[head_[i]] = beta_[i];

  lp_.rows.push_back(row);
  ++m_;
  cols_ = n + m_;
  std::vector<double> tab(static_cast<std::size_t>(m_) * cols_, 0.0);
  for (int i = 0; i < r; ++i)
    std::copy_n(&tab_[static_cast<std::size_t>(i) * old_cols], old_cols,
                &tab[static_cast<std::size_t>(i) * cols_]);
  tab_ = std::move(tab);
  const int s = cols_ - 1;
  double act = 0.0;
  for (const auto& [v, a] : row.coeffs) {
    t(r, v) += a;
    act += a * full[v];
  }
  t(r, s) = 1.0;
  // Express the new row in nonbasic columns.
  for (int i = 0; i < r; ++i) {
    const int h = head_[i];
    if (h < 0) continue;
    const double f = t(r, h);
    if (f == 0.0) continue;
    for (int j = 0; j < cols_; ++j) t(r, j) -= f * t(i, j);
    t(r, h) = 0.0;
  }
  head_.push_back(s);
  beta_.push_back(row.rhs - act);
  state_.push_back(State::kBasic);
  xval_.push_back(0.0);
  d_.push_back(0.0);

  const long before = pivots_;
  bool ok = dual();
  if (ok) ok = primal(false);
  if (ok) {
    recompute_basics();
    LpSolution sol = extract(LpStatus::kOptimal);
    bool feasible = true;
    for (int i = 0; i < m_; ++i)
      if (beta_[i] < basic_lb(i) - 1e-6 || beta_[i] > basic_ub(i) + 1e-6) feasible = false;
    if (feasible && residual_ok(sol.x)) {
      sol.pivots = pivots_ - before;
      return sol;
    }
  }
  return cold_solve();
}

LpSolution simplex_solve(const LinearProgram& lp) {
  SimplexSolver s(lp);
  return s.solve();
}

}  // namespace symlift
