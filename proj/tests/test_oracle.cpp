#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "fixtures.hpp"
#include "symlift/oracle.hpp"
#include "symlift/symmetry.hpp"

using namespace symlift;

TEST(Exact, Ex1) {
  const auto r = oracle::exact_enumerate(fixtures::ex1());
  EXPECT_DOUBLE_EQ(r.map_value, 4.0);
  ASSERT_EQ(r.argmax.size(), 1u);
  EXPECT_EQ(r.argmax[0], (Configuration{1, 0, 0, 1}));
}

TEST(Exact, TriangleFrustrated) {
  const auto r = oracle::exact_enumerate(fixtures::triangle());
  EXPECT_DOUBLE_EQ(r.map_value, -1.0);
  EXPECT_EQ(r.argmax.size(), 6u);
}

TEST(Exact, UnaryLogistic) {
  const auto r = oracle::exact_enumerate(fixtures::unary());
  const double p = std::exp(0.7) / (1.0 + std::exp(0.7));
  EXPECT_NEAR(r.mean_params[1], p, 1e-12);
  EXPECT_NEAR(r.mean_params[0], 1.0 - p, 1e-12);
  EXPECT_NEAR(r.log_partition, std::log1p(std::exp(0.7)), 1e-12);
}

TEST(Exact, MeanParamsAreConsistent) {
  const Model m = fixtures::ex1();
  const auto r = oracle::exact_enumerate(m);
  const GroundCoordinates coords(m);
  for (int v = 0; v < 4; ++v)
    EXPECT_NEAR(r.mean_params[coords.node(v, 0)] + r.mean_params[coords.node(v, 1)], 1.0, 1e-12);
  for (int e = 0; e < coords.num_edges(); ++e) {
    const int u = coords.skeleton().edges[e].first;
    EXPECT_NEAR(r.mean_params[coords.edge(e, 1, 0)] + r.mean_params[coords.edge(e, 1, 1)],
                r.mean_params[coords.node(u, 1)], 1e-12);
  }
}

TEST(Exact, LimitEnforced) {
  EXPECT_THROW(oracle::exact_enumerate(fixtures::frucht(), 10), oracle::LimitExceeded);
}

TEST(ConfigOrbits, Complete3HasFour) {
  const Model m = fixtures::complete3();
  const auto orbits = oracle::configuration_orbits(m, detect_symmetries(m));
  EXPECT_EQ(orbits.size(), 4u);
  std::multiset<std::size_t> sizes;
  for (const auto& o : orbits) sizes.insert(o.members.size());
  EXPECT_EQ(sizes, (std::multiset<std::size_t>{1, 1, 3, 3}));
}

TEST(ConfigOrbits, Ex1MaximizerIsFixed) {
  const Model m = fixtures::ex1();
  const auto orbits = oracle::configuration_orbits(m, detect_symmetries(m));
  int total = 0;
  double best = -1e300;
  for (const auto& o : orbits) {
    total += static_cast<int>(o.members.size());
    best = std::max(best, o.value);
    for (const auto& x : o.members)
      if (x == Configuration{1, 0, 0, 1}) {
        EXPECT_EQ(o.members.size(), 1u);
      }
  }
  EXPECT_EQ(total, 16);
  EXPECT_NEAR(best, 4.0, 1e-12);
}

TEST(ConfigOrbits, TrivialGroupGivesSingletons) {
  const Model m = fixtures::frucht();
  const auto orbits = oracle::configuration_orbits(m, GeneratorSet{});
  EXPECT_EQ(orbits.size(), 4096u);
}

TEST(Exhaustive, Counts) {
  EXPECT_EQ(oracle::exhaustive_automorphisms(fixtures::ex1()).size(), 4u);
  EXPECT_EQ(oracle::exhaustive_automorphisms(fixtures::triangle()).size(), 6u);
  EXPECT_EQ(oracle::exhaustive_automorphisms(fixtures::complete3()).size(), 6u);
  EXPECT_EQ(oracle::exhaustive_automorphisms(fixtures::unary()).size(), 1u);
  EXPECT_THROW(oracle::exhaustive_automorphisms(fixtures::frucht()), oracle::LimitExceeded);
}

TEST(Exhaustive, EveryElementVerifies) {
  const Model m = fixtures::ex1();
  for (const auto& p : oracle::exhaustive_automorphisms(m))
    EXPECT_TRUE(verify_generator(m, p, 50, 2).ok);
}

TEST(GroupElements, ClosureOfTranspositionAndCycle) {
  GeneratorSet gs;
  gs.generators.push_back({{1, 0, 2, 3}, {}});
  gs.generators.push_back({{1, 2, 3, 0}, {}});
  EXPECT_EQ(oracle::group_elements(gs, 4, 0).size(), 24u);
  EXPECT_EQ(oracle::group_elements(GeneratorSet{}, 4, 0).size(), 1u);
}

TEST(CycleEnum, TriangleCounts) {
  const Model m = fixtures::triangle();
  const GroundCoordinates coords(m);
  std::vector<double> tau(coords.num_coords(), 0.0);
  for (int v = 0; v < 3; ++v) tau[coords.node(v, 0)] = tau[coords.node(v, 1)] = 0.5;
  for (int e = 0; e < 3; ++e) tau[coords.edge(e, 0, 1)] = tau[coords.edge(e, 1, 0)] = 0.5;
  const auto cycles = oracle::enumerate_cycle_constraints(coords, tau);
  ASSERT_EQ(cycles.size(), 4u);
  double min_lhs = 1e300;
  for (const auto& c : cycles) {
    EXPECT_EQ(c.vars.size(), 3u);
    min_lhs = std::min(min_lhs, c.lhs);
    EXPECT_DOUBLE_EQ(c.lhs, c.f_mask == 7u ? 0.0 : 2.0);
  }
  EXPECT_DOUBLE_EQ(min_lhs, 0.0);
}

TEST(CycleEnum, CompleteFourCounts) {
  std::vector<Feature> fs;
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v) fs.push_back({{u, v}, {1, 0, 0, 1}});
  const Model m = Model::create(4, fs, std::vector<int>(6, 0), {1.0});
  const GroundCoordinates coords(m);
  const std::vector<double> tau(coords.num_coords(), 0.25);
  // 4 triangles x 4 odd masks + 3 squares x 8 odd masks
  EXPECT_EQ(oracle::enumerate_cycle_constraints(coords, tau).size(), 40u);
  EXPECT_EQ(oracle::enumerate_cycle_constraints(coords, tau, 3).size(), 16u);
}

TEST(CycleEnum, IntegralPointsSatisfyAll) {
  const Model m = fixtures::random_model(4);
  const GroundCoordinates coords(m);
  for (int c = 0; c < (1 << m.num_vars()); c += 7) {
    Configuration x(m.num_vars());
    for (int v = 0; v < m.num_vars(); ++v) x[v] = (c >> v) & 1;
    for (const auto& ci : oracle::enumerate_cycle_constraints(coords, coords.indicator(x)))
      EXPECT_GE(ci.lhs, 1.0 - 1e-12);
  }
}
