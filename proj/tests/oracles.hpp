#pragma once

// Brute-force reference implementations used as test oracles. They are kept
// deliberately naive and share no code with the library algorithms.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "univ/graph.hpp"

namespace oracle {

using univ::Vertex;
using univ::VertexList;

inline bool adjacent(const univ::HostGraph& g, Vertex u, Vertex v) {
  const auto& nb = g.neighbors(u);
  return std::find(nb.begin(), nb.end(), v) != nb.end();
}

inline bool arc(const univ::HostDigraph& g, Vertex u, Vertex v) {
  const auto& nb = g.out_neighbors(u);
  return std::find(nb.begin(), nb.end(), v) != nb.end();
}

// Partitions of n into parts drawn from `allowed` (number of multisets).
inline std::uint64_t restricted_partitions(std::size_t n, std::size_t max_part,
                                           const std::function<bool(std::size_t)>& allowed) {
  if (n == 0) return 1;
  std::uint64_t total = 0;
  for (std::size_t a = std::min(n, max_part); a >= 1; --a)
    if (allowed(a)) total += restricted_partitions(n - a, a, allowed);
  return total;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Dinic-free max flow by repeated BFS augmentation on a dense capacity matrix.
inline int max_flow(std::vector<std::vector<int>> cap, int s, int t) {
  const int n = static_cast<int>(cap.size());
  int flow = 0;
  for (;;) {
    std::vector<int> prev(n, -1);
    prev[s] = s;
    std::queue<int> q;
    q.push(s);
    while (!q.empty() && prev[t] < 0) {
      int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v)
        if (prev[v] < 0 && cap[u][v] > 0) {
          prev[v] = u;
          q.push(v);
        }
    }
    if (prev[t] < 0) return flow;
    int push = 1 << 30;
    for (int v = t; v != s; v = prev[v]) push = std::min(push, cap[prev[v]][v]);
    for (int v = t; v != s; v = prev[v]) {
      cap[prev[v]][v] -= push;
      cap[v][prev[v]] += push;
    }
    flow += push;
  }
}

// Whether an x->y path with exactly `len` arcs exists through allowed
// interior vertices (plain exhaustive DFS).
inline bool exact_path_exists(const univ::ArcView& g, Vertex x, Vertex y, std::size_t len,
                              const std::vector<char>& allowed) {
  std::vector<char> on(g.n, 0);
  std::function<bool(Vertex, std::size_t)> rec = [&](Vertex v, std::size_t left) {
    if (left == 1) return g.has_arc(v, y);
    for (Vertex w = 0; w < g.n; ++w)
      if (allowed[w] && !on[w] && w != y && w != x && g.has_arc(v, w)) {
        on[w] = 1;
        if (rec(w, left - 1)) return true;
        on[w] = 0;
      }
    return false;
  };
  on[x] = 1;
  return rec(x, len);
}

// Empty string when `paths` joins every (sources[i], targets[i]) with exactly
// lengths[i] arcs, interiors inside `workspace`, and all interiors pairwise
// disjoint and disjoint from every endpoint. Otherwise a description.
inline std::string bundle_problem(const univ::ArcView& g, const VertexList& sources, const VertexList& targets,
                                  const std::vector<std::size_t>& lengths, const VertexList& workspace,
                                  const std::vector<VertexList>& paths) {
  if (paths.size() != sources.size()) return "wrong number of paths";
  std::set<Vertex> ws(workspace.begin(), workspace.end());
  std::set<Vertex> ends(sources.begin(), sources.end());
  ends.insert(targets.begin(), targets.end());
  std::set<Vertex> used;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    std::string tag = "path " + std::to_string(i) + ": ";
    if (p.size() != lengths[i] + 1) return tag + "wrong length";
    if (p.front() != sources[i] || p.back() != targets[i]) return tag + "wrong endpoints";
    for (std::size_t j = 0; j + 1 < p.size(); ++j)
      if (!g.has_arc(p[j], p[j + 1])) return tag + "missing arc";
    for (std::size_t j = 1; j + 1 < p.size(); ++j) {
      if (!ws.count(p[j])) return tag + "interior outside workspace";
      if (ends.count(p[j])) return tag + "interior hits an endpoint";
      if (!used.insert(p[j]).second) return tag + "interior reused";
    }
  }
  return "";
}

// Empty string when `walk` is a host path from `from` to `to` whose vertex
// set is exactly `expected`.
inline std::string walk_problem(const univ::HostGraph& g, const VertexList& walk, Vertex from, Vertex to,
                                const VertexList& expected) {
  if (walk.empty()) return "empty walk";
  if (walk.front() != from || walk.back() != to) return "wrong ends";
  for (std::size_t i = 0; i + 1 < walk.size(); ++i)
    if (!adjacent(g, walk[i], walk[i + 1]))
      return "non-edge " + std::to_string(walk[i]) + "-" + std::to_string(walk[i + 1]);
  std::set<Vertex> seen(walk.begin(), walk.end());
  if (seen.size() != walk.size()) return "repeated vertex";
  if (seen != std::set<Vertex>(expected.begin(), expected.end())) return "vertex set differs";
  return "";
}

// Whether the bipartite graph (left i adjacent to right j in adj[i]) has a
// matching saturating the left side, by max flow.
inline bool saturating_matching(const std::vector<std::vector<int>>& adj, int right) {
  const int left = static_cast<int>(adj.size());
  const int n = left + right + 2, s = n - 2, t = n - 1;
  std::vector<std::vector<int>> cap(n, std::vector<int>(n, 0));
  for (int i = 0; i < left; ++i) {
    cap[s][i] = 1;
    for (int j : adj[i]) cap[i][left + j] = 1;
  }
  for (int j = 0; j < right; ++j) cap[left + j][t] = 1;
  return max_flow(cap, s, t) == left;
}

// Whether `seq` is a cycle of the given length in g: one vertex, an edge, or a
// closed walk without repeats.
inline bool is_host_cycle(const univ::HostGraph& g, const VertexList& seq, std::size_t length) {
  if (seq.size() != length || length == 0) return false;
  if (std::set<Vertex>(seq.begin(), seq.end()).size() != seq.size()) return false;
  if (length == 1) return true;
  if (length == 2) return adjacent(g, seq[0], seq[1]);
  for (std::size_t i = 0; i < length; ++i)
    if (!adjacent(g, seq[i], seq[(i + 1) % length])) return false;
  return true;
}

// Empty when `cycles` are vertex-disjoint host cycles of length s covering S exactly.
inline std::string cycle_cover_problem(const univ::HostGraph& g, const std::vector<VertexList>& cycles,
                                       const VertexList& S, std::size_t s) {
  std::multiset<Vertex> used;
  for (const auto& c : cycles) {
    if (!is_host_cycle(g, c, s)) return "not a host cycle of length " + std::to_string(s);
    used.insert(c.begin(), c.end());
  }
  if (std::multiset<Vertex>(S.begin(), S.end()) != used) return "cover differs from S";
  return "";
}

// Assignment check written from the component lengths alone: consecutive
// images adjacent, closing edge present, images distinct and in range.
inline bool assignment_is_copy(const univ::HostGraph& g, const std::vector<std::size_t>& lengths,
                               const VertexList& assignment) {
  std::size_t total = std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
  if (assignment.size() != total) return false;
  for (Vertex v : assignment)
    if (v >= g.n()) return false;
  if (std::set<Vertex>(assignment.begin(), assignment.end()).size() != total) return false;
  std::size_t at = 0;
  for (std::size_t len : lengths) {
    VertexList c(assignment.begin() + at, assignment.begin() + at + len);
    if (!is_host_cycle(g, c, len)) return false;
    at += len;
  }
  return true;
}

// Unpruned reference search: tries every ordering of the host vertices as the
// assignment. Only for n <= 9.
inline bool embeddable_by_permutation(const univ::HostGraph& g, const std::vector<std::size_t>& lengths) {
  VertexList perm(g.n());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (assignment_is_copy(g, lengths, perm)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace oracle
