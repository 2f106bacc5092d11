#include <gtest/gtest.h>

#include <cmath>

#include "univ/layers.hpp"

using namespace univ;

namespace {

// Solves (1-q)^4 = 1-p by bisection, independently of the closed form.
double solve_quartic(double p) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2;
    (1.0 - std::pow(1.0 - mid, 4) < p ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

bool subset(const HostGraph& a, const HostGraph& b) {
  for (auto [u, v] : a.edges())
    if (!b.has_edge(u, v)) return false;
  return true;
}

}  // namespace

TEST(Layers, LayerProbabilitySolvesTheQuartic) {
  const double q = layer_probability(0.5);
  EXPECT_NEAR(q, 0.1591, 1e-4);
  EXPECT_NEAR(std::pow(1.0 - q, 4), 0.5, 1e-12);
  for (double p : {0.01, 0.1, 0.3, 0.6, 0.9}) EXPECT_NEAR(layer_probability(p), solve_quartic(p), 1e-12);
  EXPECT_EQ(layer_probability(0.0), 0.0);
  EXPECT_EQ(layer_probability(1.0), 1.0);
  EXPECT_THROW(layer_probability(-0.1), std::invalid_argument);
}

TEST(Layers, PatternWeightsMatchIndependentLayers) {
  // Integrate layer_pattern over [0,p) on a fine grid: each layer must receive
  // mass q and each pair of layers mass q^2.
  const double p = 0.6, q = layer_probability(p);
  const int steps = 400000;
  std::vector<double> single(4, 0.0);
  double both01 = 0.0;
  for (int i = 0; i < steps; ++i) {
    double u = (i + 0.5) / steps;
    unsigned mask = layer_pattern(u, p);
    if (u >= p) EXPECT_EQ(mask, 0u);
    for (int b = 0; b < 4; ++b)
      if (mask & (1u << b)) single[b] += 1.0 / steps;
    if ((mask & 3u) == 3u) both01 += 1.0 / steps;
  }
  for (double m : single) EXPECT_NEAR(m, q, 1e-4);
  EXPECT_NEAR(both01, q * q, 1e-4);
}

TEST(Layers, EmptyAndCompleteExtremes) {
  auto empty = make_layers(12, 0.0, 3);
  EXPECT_EQ(empty.q, 0.0);
  EXPECT_EQ(empty.host.edge_count(), 0u);
  EXPECT_EQ(empty.g1.edge_count() + empty.g2.edge_count() + empty.g4.edge_count() + empty.g5.edge_count(), 0u);

  auto full = make_layers(12, 1.0, 3);
  EXPECT_EQ(full.q, 1.0);
  for (const HostGraph* g : {&full.g1, &full.g2, &full.g4, &full.g5}) EXPECT_EQ(g->edge_count(), 66u);
}

TEST(Layers, UnionIsTheCoupledSample) {
  for (double p : {0.1, 0.3, 0.6})
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto layers = make_layers(60, p, seed);
      HostGraph sample = gen_random_graph(60, p, RandomSeed{seed, "G"});
      EXPECT_EQ(layers.host, sample);
      for (const HostGraph* g : {&layers.g1, &layers.g2, &layers.g4, &layers.g5}) EXPECT_TRUE(subset(*g, sample));
      EXPECT_EQ(layers.g3, union_graphs({&layers.g4, &layers.g5}));
    }
}

TEST(Layers, UnionRateAtAFixedPairIsP) {
  const int samples = 10000;
  for (double p : {0.1, 0.3, 0.6}) {
    int hits = 0, in_g1 = 0;
    for (int s = 0; s < samples; ++s) {
      auto layers = make_layers(2, p, static_cast<std::uint64_t>(s));
      hits += layers.host.has_edge(0, 1);
      in_g1 += layers.g1.has_edge(0, 1);
    }
    const double sigma = std::sqrt(p * (1 - p) / samples);
    EXPECT_LE(std::abs(hits / double(samples) - p), 3 * sigma) << "p=" << p;
    const double q = layer_probability(p), sq = std::sqrt(q * (1 - q) / samples);
    EXPECT_LE(std::abs(in_g1 / double(samples) - q), 3 * sq) << "p=" << p;
  }
}

TEST(Layers, SplitHostKeepsTheUnion) {
  HostGraph host = gen_random_graph(50, 0.3, RandomSeed{8, "host"});
  auto a = split_host(host, 0.3, 1);
  auto b = split_host(host, 0.3, 2);
  EXPECT_EQ(a.host, host);
  EXPECT_EQ(b.host, host);
  EXPECT_FALSE(a.g1 == b.g1);
  for (auto [u, v] : host.edges()) EXPECT_FALSE(a.layer_of(u, v).empty());
  EXPECT_EQ(a.layer_of(0, 0), "");
}
