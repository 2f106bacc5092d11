#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "univ/result.hpp"
#include "univ/rng.hpp"

namespace univ {

using Edge = std::pair<Vertex, Vertex>;

enum class Direction { Out, In, Undirected };

// Non-owning view used by the routing code, so one implementation serves
// both graphs (out == in) and digraphs. The viewed graph must outlive it.
struct ArcView {
  std::size_t n = 0;
  const std::vector<VertexList>* out = nullptr;
  const std::vector<VertexList>* in = nullptr;
  const std::vector<std::uint64_t>* bits = nullptr;
  std::size_t words = 0;
  bool directed = false;

  bool has_arc(Vertex u, Vertex v) const;
  const VertexList& out_neighbors(Vertex v) const { return (*out)[v]; }
  const VertexList& in_neighbors(Vertex v) const { return (*in)[v]; }
  // Neighbours of v following `dir` (Undirected and Out coincide for graphs).
  const VertexList& neighbors(Vertex v, Direction dir) const {
    return dir == Direction::In ? (*in)[v] : (*out)[v];
  }
  // Arc test oriented by `dir`: Out means u->v, In means v->u.
  bool adjacent(Vertex u, Vertex v, Direction dir) const {
    return dir == Direction::In ? has_arc(v, u) : has_arc(u, v);
  }
};

class HostGraph {
 public:
  HostGraph() = default;
  explicit HostGraph(std::size_t n);

  // Throws std::invalid_argument on loops, duplicates or out-of-range ends.
  static HostGraph from_edges(std::size_t n, const std::vector<Edge>& edges);
  // Adjacency lists must already be symmetric; they are sorted here.
  static HostGraph from_adjacency(std::vector<VertexList> adjacency);

  std::size_t n() const { return adj_.size(); }
  std::size_t edge_count() const { return m_; }
  const VertexList& neighbors(Vertex v) const { return adj_[v]; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }
  bool has_edge(Vertex u, Vertex v) const;
  // Edges as (u, v) with u < v, sorted lexicographically.
  std::vector<Edge> edges() const;
  ArcView arcs() const;

  friend bool operator==(const HostGraph& a, const HostGraph& b) { return a.adj_ == b.adj_; }

 private:
  void finalize();

  std::vector<VertexList> adj_;
  std::size_t m_ = 0;
  std::vector<std::uint64_t> bits_;
  std::size_t words_ = 0;
};

class HostDigraph {
 public:
  HostDigraph() = default;
  explicit HostDigraph(std::size_t n);

  static HostDigraph from_arcs(std::size_t n, const std::vector<Edge>& arcs);
  // Both orientations of every edge.
  static HostDigraph symmetric_closure(const HostGraph& g);

  std::size_t n() const { return out_.size(); }
  std::size_t arc_count() const { return m_; }
  const VertexList& out_neighbors(Vertex v) const { return out_[v]; }
  const VertexList& in_neighbors(Vertex v) const { return in_[v]; }
  bool has_arc(Vertex u, Vertex v) const;
  std::vector<Edge> arcs_list() const;
  ArcView arcs() const;

  friend bool operator==(const HostDigraph& a, const HostDigraph& b) { return a.out_ == b.out_; }

 private:
  void finalize();

  std::vector<VertexList> out_;
  std::vector<VertexList> in_;
  std::size_t m_ = 0;
  std::vector<std::uint64_t> bits_;
  std::size_t words_ = 0;
};

// G(n,p): pair {i,j} (i<j) is kept iff pair_uniform(stream, i, j) < p.
HostGraph gen_random_graph(std::size_t n, double p, const RandomSeed& seed);
HostGraph gen_random_graph(std::size_t n, double p, std::uint64_t stream);
// D(n,p): ordered pair (i,j), i != j, kept iff pair_uniform(stream, i, j) < p.
HostDigraph gen_random_digraph(std::size_t n, double p, const RandomSeed& seed);

HostGraph union_graphs(const std::vector<const HostGraph*>& parts);

// Vertices of Y \ X adjacent to some vertex of X in the given direction.
VertexList neighbors_into(const ArcView& g, const VertexList& X, const VertexList& Y, Direction dir);
VertexList neighbors_into(const HostGraph& g, const VertexList& X, const VertexList& Y);
VertexList neighbors_into(const HostDigraph& g, const VertexList& X, const VertexList& Y,
                          Direction dir);

// Ordered pairs (x,y) with x in X, y in Y and an arc x->y.
std::size_t edges_between(const HostDigraph& g, const VertexList& X, const VertexList& Y);
// Unordered edges {u,v} with one end in X and the other in Y.
std::size_t edges_between(const HostGraph& g, const VertexList& X, const VertexList& Y);

class EdgeListError : public std::runtime_error {
 public:
  EdgeListError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

HostGraph parse_edge_list(std::istream& in);
HostGraph read_edge_list(const std::string& path);
void write_edge_list(const HostGraph& g, std::ostream& out);
void write_edge_list(const HostGraph& g, const std::string& path);

// Membership mask over [0, n).
std::vector<char> make_mask(std::size_t n, const VertexList& members);

}  // namespace univ
