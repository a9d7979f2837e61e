#include <gtest/gtest.h>

#include <cmath>

#include "cavity/hamiltonian.hpp"
#include "cavity/rng.hpp"
#include "cavity/thermo.hpp"
#include "oracles.hpp"

using namespace cavity;

namespace {

Configuration random_config(CounterRng& rng, std::uint32_t n, std::uint32_t k) {
  return Configuration(random_subset(rng, n, k));
}

}  // namespace

TEST(CavityFields, CompleteGraph) {
  const Configuration sigma({1, 4, 6});
  const auto t = cavity_fields(Graph::complete(9), sigma, 0.7);
  for (std::uint32_t i = 0; i < 9; ++i)
    EXPECT_DOUBLE_EQ(t.fields[i], sigma.contains(i) ? 0.0 : 0.7);
  EXPECT_EQ(t.degeneracy[0][0], 3u);
  EXPECT_EQ(t.degeneracy[0][1], 6u);
}

TEST(CavityFields, EdgelessGraph) {
  const Configuration sigma({0, 2, 5, 7});
  const auto t = cavity_fields(Graph::edgeless(10), sigma, 1.5);
  for (std::uint32_t i = 0; i < 10; ++i)
    EXPECT_DOUBLE_EQ(t.fields[i], sigma.contains(i) ? 3.0 : 4.0 + 1.5);
}

TEST(CavityFields, MatchNaiveRecount) {
  const Graph g = generate_graph(10, 0.5, 3);
  CounterRng rng(31);
  for (int t = 0; t < 50; ++t) {
    const auto sigma = random_config(rng, 10, 4);
    const auto table = cavity_fields(g, sigma, 0.9);
    const auto want = oracle::naive_fields(g, sigma, 0.9);
    for (std::uint32_t i = 0; i < 10; ++i) ASSERT_DOUBLE_EQ(table.fields[i], want[i]);
  }
}

TEST(CavityFields, DegeneraciesSumToSizes) {
  CounterRng rng(8);
  for (int t = 0; t < 40; ++t) {
    const auto n = static_cast<std::uint32_t>(5 + rng.below(120));
    const auto k = static_cast<std::uint32_t>(1 + rng.below(std::min<std::uint64_t>(n, 12)));
    const Graph g = generate_graph(n, 0.2 + 0.6 * rng.uniform(), 100 + t);
    const auto table = cavity_fields(g, random_config(rng, n, k), 0.4);
    std::uint32_t total = 0, inside = 0;
    for (const auto& d : table.degeneracy) {
      total += d[0] + d[1];
      inside += d[0];
    }
    EXPECT_EQ(total, n);
    EXPECT_EQ(inside, k);
    EXPECT_EQ(table.degeneracy[k][0], 0u);  // a site of sigma has at most k-1 missing links
  }
}

TEST(PairEnergy, CliqueWithItselfIsZero) {
  const Configuration s({0, 1, 2, 3});
  const auto d = pair_energy(Graph::complete(8), s, s, 2.0);
  EXPECT_EQ(d.q, 4u);
  EXPECT_EQ(d.H0, 0u);
  EXPECT_EQ(d.H, 0.0);
}

TEST(PairEnergy, DisjointFullyLinkedPair) {
  const auto d =
      pair_energy(Graph::complete(8), Configuration({0, 1, 2}), Configuration({4, 5, 6}), 0.6);
  EXPECT_EQ(d.q, 0u);
  EXPECT_EQ(d.H0, 0u);
  EXPECT_NEAR(d.H, 0.6 * 3, 1e-15);
}

TEST(PairEnergy, FieldSumIdentity) {
  CounterRng rng(12);
  for (int t = 0; t < 100; ++t) {
    const Graph g = generate_graph(8, 0.5, 40 + t);
    const auto s = random_config(rng, 8, 3);
    const auto u = random_config(rng, 8, 3);
    const double h = 0.25 * static_cast<double>(t % 7);
    const auto table = cavity_fields(g, s, h);
    double via_fields = 0.0;
    for (auto i : u) via_fields += table.fields[i];
    const auto d = pair_energy(g, s, u, h);
    ASSERT_NEAR(d.H, via_fields, 1e-12);
    ASSERT_NEAR(d.H, oracle::naive_pair_energy(g, s, u, h), 1e-12);
    ASSERT_NEAR(d.H, d.H0 + h * (3.0 - d.q), 1e-12);
  }
}

TEST(PairEnergy, OrderedSumCountsEachIncidence) {
  Graph g = Graph::complete(3);
  g.set_edge(0, 2, false);
  const auto d = pair_energy(g, Configuration({0, 1}), Configuration({1, 2}), 0.0);
  // ordered incidences (i in sigma, j in tau, i != j, J_ij = 1): (0,2) only
  EXPECT_EQ(d.H0, 1u);
  const auto self = pair_energy(g, Configuration({0, 2}), Configuration({0, 2}), 0.0);
  EXPECT_EQ(self.H0, 2u);  // (0,2) and (2,0)
}

TEST(PairEnergy, SymmetricExhaustively) {
  for (std::uint32_t n = 3; n <= 8; ++n) {
    const Graph g = generate_graph(n, 0.5, 900 + n);
    for (std::uint32_t k = 1; k <= 3 && k <= n; ++k) {
      const auto configs = all_configurations(n, k);
      for (const auto& s : configs)
        for (const auto& u : configs)
          ASSERT_DOUBLE_EQ(pair_energy(g, s, u, 0.37).H, pair_energy(g, u, s, 0.37).H);
    }
  }
}

TEST(PairEnergy, LevelDecomposition) {
  CounterRng rng(4);
  for (int t = 0; t < 40; ++t) {
    const Graph g = generate_graph(30, 0.4, 70 + t);
    const auto s = random_config(rng, 30, 5);
    const auto u = random_config(rng, 30, 5);
    const auto table = cavity_fields(g, s, 1.1);
    const auto occ = level_occupations(table, u);
    double e = 0.0;
    for (std::uint32_t l = 0; l < occ.size(); ++l)
      for (int r = 0; r < 2; ++r) e += table.level_energy(l, r) * occ[l][r];
    ASSERT_NEAR(e, pair_energy(g, s, u, 1.1).H, 1e-12);
  }
}

TEST(PairEnergy, SizeMismatchRejected) {
  EXPECT_THROW(pair_energy(Graph::complete(5), Configuration({0}), Configuration({1, 2}), 0.0),
               std::invalid_argument);
}

TEST(Typicality, IdenticalPairRatioIsZero) {
  const Graph g = generate_graph(40, 0.5, 6);
  const Configuration s({1, 5, 9, 20, 22, 30, 31, 39});
  const auto params = ModelParams::for_graph(40, 8, 0.5, 1.0, 0.1);
  EXPECT_EQ(typicality(g, s, s, params).qbar_ratio, 0.0);
}

TEST(Typicality, CliqueIdenticalPairIsTypicalInPhaseA) {
  const auto params = ModelParams::for_graph(10, 4, 0.5, 10.0, 2.0);
  ASSERT_EQ(thermo::phase_classify(params).region, thermo::Region::A);
  ASSERT_LT(thermo::f_prime(20.0, 0.5), 0.1);
  const Configuration s({0, 3, 5, 8});
  const auto d = typicality(Graph::complete(10), s, s, params, 0.1);
  ASSERT_TRUE(d.in_typical_set.has_value());
  EXPECT_TRUE(*d.in_typical_set);
  EXPECT_TRUE(d.in_q_interval);
  EXPECT_TRUE(d.in_h_interval);
}

TEST(Typicality, DisjointPairOnEdgelessGraphIsOutsideEnergyBand) {
  const auto params = ModelParams::for_graph(10, 4, 0.5, 1.0, 0.0);
  ASSERT_LT(thermo::f_prime(1.0, 0.5), 1.0 - 0.05);
  const auto d = typicality(Graph::edgeless(10), Configuration({0, 1, 2, 3}),
                            Configuration({4, 5, 6, 7}), params);
  EXPECT_EQ(d.H0, 16u);
  EXPECT_FALSE(d.in_h_interval);
  ASSERT_TRUE(d.in_typical_set.has_value());
  EXPECT_FALSE(*d.in_typical_set);
}

TEST(Typicality, BoundaryLeavesMembershipEmpty) {
  auto params = ModelParams::for_graph(10, 4, 0.5, 1.0, 0.0);
  params.htilde = thermo::critical_lines(params).htilde_c;
  ASSERT_EQ(thermo::phase_classify(params).region, thermo::Region::Boundary);
  const Configuration s({0, 1, 2, 3});
  EXPECT_FALSE(typicality(Graph::complete(10), s, s, params).in_typical_set.has_value());
}

TEST(Typicality, QbarBoundedBySymmetricDifference) {
  CounterRng rng(17);
  const Graph g = generate_graph(60, 0.5, 17);
  const auto params = ModelParams::for_graph(60, 6, 0.5, 1.0, 0.1);
  for (int t = 0; t < 100; ++t) {
    const auto s = random_config(rng, 60, 6);
    const auto u = random_config(rng, 60, 6);
    const auto d = typicality(g, s, u, params);
    ASSERT_LE(d.qbar, 2 * (6 - d.q));
    ASSERT_LE(d.qbar_ratio, 1.0);
  }
  EXPECT_THROW(typicality(g, Configuration({0}), Configuration({1}),
                          ModelParams::for_graph(60, 1, 0.5, 1.0, 0.1), 0.6),
               std::invalid_argument);
}
