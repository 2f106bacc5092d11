#pragma once

#include <cstddef>
#include <vector>

#include "univ/graph.hpp"
#include "univ/result.hpp"

namespace univ {

// Result of a bipartite b-matching where left vertex i may take up to
// capacity[i] distinct right vertices.
struct BipartiteMatching {
  std::vector<std::vector<int>> assigned;  // per left vertex, matched right indices
  std::size_t size = 0;
  bool saturated = false;                  // every left vertex filled to capacity
  // When not saturated: left vertices B with |N(B)| < sum of their capacities.
  std::vector<int> deficient_left;
};

// Hopcroft-Karp on the capacity-fold clone of the left side.
BipartiteMatching capacitated_matching(const std::vector<std::vector<int>>& adjacency,
                                       const std::vector<int>& capacity, std::size_t right_count);

// Pairs (u, v) of a maximum matching of host[S]; blossoms are handled.
std::vector<Edge> maximum_matching(const HostGraph& g, const VertexList& S);

// Disjoint stars centred at A with leaves in X.
struct StarMatching {
  VertexList centers;
  std::vector<VertexList> leaves;  // leaves[i] belongs to centers[i]
};

// Each centre a gets sizes[i] leaves x in X with a->x (Out), x->a (In) or an
// edge (Undirected). Failure carries a deficient set of centres.
Expected<StarMatching> star_matching(const ArcView& g, const VertexList& A, const VertexList& X,
                                     const std::vector<int>& sizes, Direction dir = Direction::Out);
Expected<StarMatching> star_matching(const ArcView& g, const VertexList& A, const VertexList& X, int c,
                                     Direction dir = Direction::Out);

}  // namespace univ
