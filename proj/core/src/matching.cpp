#include "univ/matching.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

namespace univ {

BipartiteMatching capacitated_matching(const std::vector<std::vector<int>>& adjacency,
                                       const std::vector<int>& capacity, std::size_t right_count) {
  if (adjacency.size() != capacity.size())
    throw std::invalid_argument("capacitated_matching: adjacency and capacity sizes differ");
  // Clone each left vertex once per unit of capacity.
  std::vector<int> owner;
  for (std::size_t i = 0; i < capacity.size(); ++i) {
    if (capacity[i] < 0) throw std::invalid_argument("capacitated_matching: negative capacity");
    owner.insert(owner.end(), static_cast<std::size_t>(capacity[i]), static_cast<int>(i));
  }
  const int L = static_cast<int>(owner.size());
  const int R = static_cast<int>(right_count);
  const int INF = std::numeric_limits<int>::max();
  std::vector<int> match_l(L, -1), match_r(R, -1), dist(L);

  auto bfs = [&] {
    std::queue<int> q;
    bool found = false;
    for (int l = 0; l < L; ++l) {
      if (match_l[l] < 0) {
        dist[l] = 0;
        q.push(l);
      } else {
        dist[l] = INF;
      }
    }
    while (!q.empty()) {
      int l = q.front();
      q.pop();
      for (int r : adjacency[owner[l]]) {
        int nl = match_r[r];
        if (nl < 0) {
          found = true;
        } else if (dist[nl] == INF) {
          dist[nl] = dist[l] + 1;
          q.push(nl);
        }
      }
    }
    return found;
  };
  std::vector<std::size_t> it(L);
  auto dfs = [&](auto&& self, int l) -> bool {
    const auto& nbrs = adjacency[owner[l]];
    for (; it[l] < nbrs.size(); ++it[l]) {
      int r = nbrs[it[l]];
      int nl = match_r[r];
      if (nl < 0 || (dist[nl] == dist[l] + 1 && self(self, nl))) {
        match_l[l] = r;
        match_r[r] = l;
        return true;
      }
    }
    dist[l] = INF;
    return false;
  };

  std::size_t size = 0;
  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int l = 0; l < L; ++l)
      if (match_l[l] < 0 && dfs(dfs, l)) ++size;
  }

  BipartiteMatching result;
  result.assigned.resize(adjacency.size());
  for (int l = 0; l < L; ++l)
    if (match_l[l] >= 0) result.assigned[owner[l]].push_back(match_l[l]);
  for (auto& a : result.assigned) std::sort(a.begin(), a.end());
  result.size = size;
  result.saturated = size == owner.size();
  if (!result.saturated) {
    // Left clones reachable by alternating paths from free clones form a Hall
    // violator; their owners inherit it because clones share neighbourhoods.
    std::vector<char> seen_l(L, 0), seen_r(R, 0);
    std::queue<int> q;
    for (int l = 0; l < L; ++l)
      if (match_l[l] < 0) {
        seen_l[l] = 1;
        q.push(l);
      }
    while (!q.empty()) {
      int l = q.front();
      q.pop();
      for (int r : adjacency[owner[l]]) {
        if (seen_r[r]) continue;
        seen_r[r] = 1;
        int nl = match_r[r];
        if (nl >= 0 && !seen_l[nl]) {
          seen_l[nl] = 1;
          q.push(nl);
        }
      }
    }
    std::vector<char> mark(adjacency.size(), 0);
    for (int l = 0; l < L; ++l)
      if (seen_l[l]) mark[owner[l]] = 1;
    for (std::size_t i = 0; i < mark.size(); ++i)
      if (mark[i]) result.deficient_left.push_back(static_cast<int>(i));
  }
  return result;
}

std::vector<Edge> maximum_matching(const HostGraph& g, const VertexList& S) {
  using BGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  std::vector<int> local(g.n(), -1);
  for (std::size_t i = 0; i < S.size(); ++i) local[S[i]] = static_cast<int>(i);
  BGraph bg(S.size());
  for (std::size_t i = 0; i < S.size(); ++i)
    for (Vertex w : g.neighbors(S[i]))
      if (local[w] > static_cast<int>(i)) boost::add_edge(i, static_cast<std::size_t>(local[w]), bg);
  std::vector<boost::graph_traits<BGraph>::vertex_descriptor> mate(S.size());
  boost::edmonds_maximum_cardinality_matching(bg, &mate[0]);
  std::vector<Edge> pairs;
  const auto none = boost::graph_traits<BGraph>::null_vertex();
  for (std::size_t i = 0; i < S.size(); ++i)
    if (mate[i] != none && i < mate[i]) pairs.emplace_back(S[i], S[mate[i]]);
  return pairs;
}

Expected<StarMatching> star_matching(const ArcView& g, const VertexList& A, const VertexList& X,
                                     const std::vector<int>& sizes, Direction dir) {
  if (sizes.size() != A.size()) throw std::invalid_argument("star_matching: one size per centre required");
  std::vector<int> pos(g.n, -1);
  for (std::size_t i = 0; i < X.size(); ++i) pos[X[i]] = static_cast<int>(i);
  for (Vertex a : A)
    if (pos[a] >= 0) throw std::invalid_argument("star_matching: centres and leaf pool must be disjoint");
  std::vector<std::vector<int>> adjacency(A.size());
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (Vertex x : g.neighbors(A[i], dir))
      if (pos[x] >= 0) adjacency[i].push_back(pos[x]);
    std::sort(adjacency[i].begin(), adjacency[i].end());
  }
  auto m = capacitated_matching(adjacency, sizes, X.size());
  if (!m.saturated) {
    VertexList witness;
    for (int i : m.deficient_left) witness.push_back(A[i]);
    return fail("star_matching", "Hall condition violated: " + std::to_string(witness.size()) +
                                     " centres see too few leaves", witness);
  }
  StarMatching sm;
  sm.centers = A;
  sm.leaves.resize(A.size());
  for (std::size_t i = 0; i < A.size(); ++i)
    for (int r : m.assigned[i]) sm.leaves[i].push_back(X[r]);
  return sm;
}

Expected<StarMatching> star_matching(const ArcView& g, const VertexList& A, const VertexList& X, int c,
                                     Direction dir) {
  return star_matching(g, A, X, std::vector<int>(A.size(), c), dir);
}

}  // namespace univ
