#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "symlift/lp.hpp"
#include "symlift/oracle.hpp"
#include "symlift/solve.hpp"
#include "symlift/symmetry.hpp"

using namespace symlift;

TEST(Simplex, TinyMax) {
  LinearProgram lp(2);
  lp.objective = {1, 1};
  lp.rows.push_back({{{0, 1}, {1, 1}}, Sense::kLe, 1});
  const LpSolution s = simplex_solve(lp);
  EXPECT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.value, 1.0, 1e-9);
}

TEST(Simplex, EqualityAndGe) {
  // max 2x + 3y  s.t. x + y = 1, x >= 0.3
  LinearProgram lp(2);
  lp.objective = {2, 3};
  lp.rows.push_back({{{0, 1}, {1, 1}}, Sense::kEq, 1});
  lp.rows.push_back({{{0, 1}}, Sense::kGe, 0.3});
  const LpSolution s = simplex_solve(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.x[0], 0.3, 1e-9);
  EXPECT_NEAR(s.x[1], 0.7, 1e-9);
  EXPECT_NEAR(s.value, 2.7, 1e-9);
}

TEST(Simplex, Infeasible) {
  LinearProgram lp(2);
  lp.rows.push_back({{{0, 1}, {1, 1}}, Sense::kGe, 3});
  EXPECT_EQ(simplex_solve(lp).status, LpStatus::kInfeasible);
}

TEST(Simplex, Unbounded) {
  LinearProgram lp(2);
  lp.objective = {1, 0};
  lp.upper[0] = std::numeric_limits<double>::infinity();
  lp.rows.push_back({{{0, 1}, {1, -1}}, Sense::kGe, 0});
  EXPECT_EQ(simplex_solve(lp).status, LpStatus::kUnbounded);
}

TEST(Simplex, FreeVariable) {
  // max -|x - 2| style: max t s.t. t <= x - 2, t <= 2 - x, x free
  LinearProgram lp(2);
  const double inf = std::numeric_limits<double>::infinity();
  lp.lower = {-inf, -inf};
  lp.upper = {inf, inf};
  lp.objective = {0, 1};
  lp.rows.push_back({{{1, 1}, {0, -1}}, Sense::kLe, -2});
  lp.rows.push_back({{{1, 1}, {0, 1}}, Sense::kLe, 2});
  const LpSolution s = simplex_solve(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.value, 0.0, 1e-9);
  EXPECT_NEAR(s.x[0], 2.0, 1e-9);
}

TEST(Simplex, RejectsBadIndex) {
  LinearProgram lp(1);
  lp.rows.push_back({{{3, 1}}, Sense::kLe, 1});
  EXPECT_THROW(lp.validate(), std::invalid_argument);
}

TEST(Simplex, LocalLpOfEx1) {
  const Model m = fixtures::ex1();
  LinearProgram lp = build_local_lp(m);
  GroundCoordinates coords(m);
  lp.objective = coords.theta(m);
  const LpSolution s = simplex_solve(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.value, 4.0, 1e-9);
}

TEST(Simplex, LiftedLocalLpOfEx1) {
  const Model m = fixtures::ex1();
  const LiftedModel lm = build_lifted_model(m, detect_symmetries(m));
  LinearProgram lp = build_local_lp(lm);
  lp.objective = lm.theta_bar();
  const LpSolution s = simplex_solve(lp);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.value, 4.0, 1e-9);
}

TEST(Simplex, Deterministic) {
  const Model m = fixtures::random_model(7);
  LinearProgram lp = build_local_lp(m);
  lp.objective = GroundCoordinates(m).theta(m);
  SimplexSolver a(lp), b(lp);
  const LpSolution sa = a.solve(), sb = b.solve();
  EXPECT_EQ(a.pivot_log(), b.pivot_log());
  EXPECT_EQ(sa.x, sb.x);
}

TEST(Simplex, WarmStartMatchesColdSolve) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 6;
    LinearProgram lp(n);
    for (double& c : lp.objective) c = u(rng);
    for (int r = 0; r < 3; ++r) {
      LpRow row;
      for (int j = 0; j < n; ++j) row.coeffs.push_back({j, u(rng)});
      row.sense = Sense::kLe;
      row.rhs = 1.0;
      lp.rows.push_back(row);
    }
    SimplexSolver warm(lp);
    warm.solve();
    for (int extra = 0; extra < 4; ++extra) {
      LpRow row;
      for (int j = 0; j < n; ++j) row.coeffs.push_back({j, u(rng)});
      row.sense = extra % 2 ? Sense::kGe : Sense::kLe;
      row.rhs = extra % 2 ? -0.5 : 0.5;
      const LpSolution ws = warm.add_row(row);
      lp.rows.push_back(row);
      const LpSolution cs = simplex_solve(lp);
      ASSERT_EQ(ws.status, cs.status);
      if (cs.status == LpStatus::kOptimal) {
        EXPECT_NEAR(ws.value, cs.value, 1e-7);
      }
    }
  }
}

TEST(Simplex, CycleRowOnTriangle) {
  const Model m = fixtures::triangle();
  const GroundCoordinates coords(m);
  LinearProgram lp = build_local_lp(m);
  lp.objective = coords.theta(m);
  SimplexSolver solver(lp);
  EXPECT_NEAR(solver.solve().value, 0.0, 1e-9);
  // all three edges in F: sum of agreement mass >= 1
  LpRow row;
  for (int e = 0; e < 3; ++e) {
    row.coeffs.push_back({coords.edge(e, 0, 0), 1});
    row.coeffs.push_back({coords.edge(e, 1, 1), 1});
  }
  row.sense = Sense::kGe;
  row.rhs = 1;
  EXPECT_NEAR(solver.add_row(row).value, -1.0, 1e-9);
}
