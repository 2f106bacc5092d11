#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"
#include "univ/spanning.hpp"

using namespace univ;

namespace {

struct Instance {
  HostGraph g;
  VertexList X, Y, W;
};

// Sources 0..t-1, targets t..2t-1, workspace the rest.
Instance random_instance(std::size_t t, std::size_t l, double p, std::uint64_t seed) {
  Instance in;
  const std::size_t n = 2 * t + t * (l - 1);
  in.g = gen_random_graph(n, p, RandomSeed{seed, "spanning"});
  for (Vertex i = 0; i < t; ++i) {
    in.X.push_back(i);
    in.Y.push_back(static_cast<Vertex>(t) + i);
  }
  for (Vertex v = static_cast<Vertex>(2 * t); v < n; ++v) in.W.push_back(v);
  return in;
}

SpanningParams params(std::uint64_t seed, SpanningMode mode = SpanningMode::Auto) {
  SpanningParams p;
  p.connector.seed = seed;
  p.mode = mode;
  return p;
}

// Empty when the paths have length l, join the pairs, and their interiors
// partition W (checked in both directions).
std::string cover_problem(const Instance& in, std::size_t l, const PathBundle& b) {
  std::vector<std::size_t> lengths(in.X.size(), l);
  auto problem = oracle::bundle_problem(in.g.arcs(), in.X, in.Y, lengths, in.W, b.paths);
  if (!problem.empty()) return problem;
  std::set<Vertex> interiors;
  std::size_t total = 0;
  for (const auto& p : b.paths) {
    interiors.insert(p.begin() + 1, p.end() - 1);
    total += p.size() - 2;
  }
  if (total != in.W.size()) return "interior sizes do not sum to |W|";
  if (interiors != std::set<Vertex>(in.W.begin(), in.W.end())) return "interiors differ from W";
  return "";
}

}  // namespace

TEST(Spanning, CountingConditionIsEnforced) {
  auto in = random_instance(3, 10, 0.5, 1);
  VertexList shorter(in.W.begin(), in.W.end() - 1);
  EXPECT_THROW(connect_pairs_spanning(in.g, in.X, in.Y, 10, shorter, params(1)), std::invalid_argument);
  EXPECT_THROW(connect_pairs_spanning(in.g, in.X, in.Y, 11, in.W, params(1)), std::invalid_argument);
  VertexList clash = in.W;
  clash[0] = in.X[0];
  EXPECT_THROW(connect_pairs_spanning(in.g, in.X, in.Y, 10, clash, params(1)), std::invalid_argument);
  EXPECT_THROW(connect_pairs_spanning(in.g, in.X, in.Y, 0, {}, params(1)), std::invalid_argument);
}

TEST(Spanning, SingleBarePathIsForced) {
  for (std::size_t l : {2u, 8u, 15u, 40u}) {
    // x = 0, y = 1, W = 2..l along a path, with the vertices shuffled.
    std::vector<Edge> edges;
    Path want{0};
    for (Vertex v = 2; v <= l; ++v) want.push_back(v);
    want.push_back(1);
    std::swap(want[1], want[l / 2]);
    for (std::size_t i = 0; i + 1 < want.size(); ++i) edges.emplace_back(want[i], want[i + 1]);
    Instance in;
    in.g = HostGraph::from_edges(l + 1, edges);
    in.X = {0};
    in.Y = {1};
    for (Vertex v = 2; v <= l; ++v) in.W.push_back(v);
    auto r = connect_pairs_spanning(in.g, in.X, in.Y, l, in.W, params(l));
    ASSERT_TRUE(r.ok()) << r.error().describe();
    EXPECT_EQ(r->bundle.paths[0], want);
  }
}

TEST(Spanning, UnitAndTwoLengths) {
  auto g = HostGraph::from_edges(6, {{0, 3}, {1, 4}, {0, 2}, {2, 3}});
  auto r = connect_pairs_spanning(g, {0, 1}, {3, 4}, 1, {}, params(1));
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->bundle.paths[1], (Path{1, 4}));
  auto two = connect_pairs_spanning(g, {0}, {3}, 2, {2}, params(1));
  ASSERT_TRUE(two.ok());
  EXPECT_EQ(two->bundle.paths[0], (Path{0, 2, 3}));
  EXPECT_FALSE(connect_pairs_spanning(g, {1}, {4}, 2, {5}, params(1)).ok());
}

TEST(Spanning, DirectModeOnRandomHosts) {
  struct Case { std::size_t t, l; double p; };
  for (Case c : {Case{10, 5, 0.4}, Case{20, 30, 0.15}, Case{8, 12, 0.5}, Case{5, 120, 0.2}}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto in = random_instance(c.t, c.l, c.p, seed);
      auto r = connect_pairs_spanning(in.g, in.X, in.Y, c.l, in.W, params(seed, SpanningMode::Direct));
      ASSERT_TRUE(r.ok()) << r.error().describe();
      EXPECT_EQ(r->mode, SpanningMode::Direct);
      EXPECT_EQ(cover_problem(in, c.l, r->bundle), "");
    }
  }
}

TEST(Spanning, EmptyHostFailsWithoutThrowing) {
  auto in = random_instance(4, 6, 0.0, 1);
  auto r = connect_pairs_spanning(in.g, in.X, in.Y, 6, in.W, params(1));
  ASSERT_FALSE(r.ok());
  EXPECT_FALSE(r.error().witness.empty());
}

TEST(Spanning, DeterministicForFixedSeed) {
  auto in = random_instance(12, 20, 0.3, 4);
  auto a = connect_pairs_spanning(in.g, in.X, in.Y, 20, in.W, params(9));
  auto b = connect_pairs_spanning(in.g, in.X, in.Y, 20, in.W, params(9));
  ASSERT_TRUE(a.ok() && b.ok());
  EXPECT_EQ(a->bundle.paths, b->bundle.paths);
}

TEST(Spanning, AbsorbingNeedsEnoughPairs) {
  auto p = params(1);
  EXPECT_FALSE(absorbing_applies(10, 150, p));
  EXPECT_FALSE(absorbing_applies(60, 100, p));
  EXPECT_TRUE(absorbing_applies(60, 150, p));
  auto in = random_instance(5, 150, 0.3, 1);
  EXPECT_THROW(connect_pairs_spanning(in.g, in.X, in.Y, 150, in.W, params(1, SpanningMode::Absorbing)),
               std::invalid_argument);
}

TEST(Spanning, AbsorbingBaseCoversExactly) {
  auto in = random_instance(60, 150, 0.3, 2);
  auto r = connect_pairs_spanning(in.g, in.X, in.Y, 150, in.W, params(2, SpanningMode::Absorbing));
  ASSERT_TRUE(r.ok()) << r.error().describe();
  EXPECT_EQ(r->mode, SpanningMode::Absorbing);
  EXPECT_EQ(cover_problem(in, 150, r->bundle), "");
}

TEST(Spanning, AbsorbingWithReductionCoversExactly) {
  // 460 = 3 * 151 + 7: prefixes of length 8 and two bridges per pair.
  auto in = random_instance(25, 460, 0.25, 3);
  auto r = connect_pairs_spanning(in.g, in.X, in.Y, 460, in.W, params(3, SpanningMode::Absorbing));
  ASSERT_TRUE(r.ok()) << r.error().describe();
  EXPECT_EQ(cover_problem(in, 460, r->bundle), "");
}

TEST(Spanning, RingOfPairsClosesIntoOneCycle) {
  // Anchors 0..t-1 with pair j running from a_j to a_{j+1}: the paths close up.
  const std::size_t t = 4, l = 12;
  Instance in;
  in.g = gen_random_graph(t + t * (l - 1), 0.4, RandomSeed{9, "ring"});
  for (Vertex i = 0; i < t; ++i) {
    in.X.push_back(i);
    in.Y.push_back(static_cast<Vertex>((i + 1) % t));
  }
  for (Vertex v = t; v < in.g.n(); ++v) in.W.push_back(v);
  auto r = connect_pairs_spanning(in.g, in.X, in.Y, l, in.W, params(3));
  ASSERT_TRUE(r.ok()) << r.error().describe();
  EXPECT_EQ(cover_problem(in, l, r->bundle), "");

  VertexList loop = in.X;
  loop[1] = in.Y[1];
  EXPECT_THROW(connect_pairs_spanning(in.g, loop, in.Y, l, in.W, params(3)), std::invalid_argument);
}
