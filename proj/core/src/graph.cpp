#include "univ/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace univ {

std::string Failure::describe() const {
  std::string out = stage + ": " + reason;
  if (!witness.empty()) {
    out += " [";
    for (std::size_t i = 0; i < witness.size() && i < 16; ++i) out += (i ? " " : "") + std::to_string(witness[i]);
    if (witness.size() > 16) out += " ...";
    out += "]";
  }
  return out;
}

namespace {

// Dense bit rows are only kept for hosts small enough that n^2 bits stay cheap.
constexpr std::size_t kMatrixLimit = 8192;

void build_bits(std::size_t n, const std::vector<VertexList>& rows, std::vector<std::uint64_t>& bits,
                std::size_t& words) {
  bits.clear();
  words = 0;
  if (n == 0 || n > kMatrixLimit) return;
  words = (n + 63) / 64;
  bits.assign(n * words, 0);
  for (std::size_t u = 0; u < n; ++u)
    for (Vertex v : rows[u]) bits[u * words + v / 64] |= std::uint64_t{1} << (v % 64);
}

bool sorted_contains(const VertexList& list, Vertex v) {
  return std::binary_search(list.begin(), list.end(), v);
}

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0,1]");
}

}  // namespace

bool ArcView::has_arc(Vertex u, Vertex v) const {
  if (u >= n || v >= n) return false;
  if (bits) return ((*bits)[u * words + v / 64] >> (v % 64)) & 1u;
  return sorted_contains((*out)[u], v);
}

// ---------------------------------------------------------------- HostGraph

HostGraph::HostGraph(std::size_t n) : adj_(n) { finalize(); }

HostGraph HostGraph::from_edges(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<VertexList> adj(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (auto& row : adj) {
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end())
      throw std::invalid_argument("duplicate edge");
  }
  HostGraph g;
  g.adj_ = std::move(adj);
  g.finalize();
  return g;
}

HostGraph HostGraph::from_adjacency(std::vector<VertexList> adjacency) {
  HostGraph g;
  g.adj_ = std::move(adjacency);
  for (auto& row : g.adj_) std::sort(row.begin(), row.end());
  g.finalize();
  return g;
}

void HostGraph::finalize() {
  std::size_t deg = 0;
  for (const auto& row : adj_) deg += row.size();
  m_ = deg / 2;
  build_bits(adj_.size(), adj_, bits_, words_);
}

bool HostGraph::has_edge(Vertex u, Vertex v) const {
  if (u >= n() || v >= n()) return false;
  if (words_) return (bits_[u * words_ + v / 64] >> (v % 64)) & 1u;
  return sorted_contains(adj_[u], v);
}

std::vector<Edge> HostGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (Vertex u = 0; u < n(); ++u)
    for (Vertex v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

ArcView HostGraph::arcs() const {
  ArcView view;
  view.n = n();
  view.out = &adj_;
  view.in = &adj_;
  view.bits = words_ ? &bits_ : nullptr;
  view.words = words_;
  view.directed = false;
  return view;
}

// -------------------------------------------------------------- HostDigraph

HostDigraph::HostDigraph(std::size_t n) : out_(n), in_(n) { finalize(); }

HostDigraph HostDigraph::from_arcs(std::size_t n, const std::vector<Edge>& arcs) {
  HostDigraph d;
  d.out_.assign(n, {});
  d.in_.assign(n, {});
  for (auto [u, v] : arcs) {
    if (u >= n || v >= n) throw std::invalid_argument("arc endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
    d.out_[u].push_back(v);
    d.in_[v].push_back(u);
  }
  for (auto& row : d.out_) {
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end())
      throw std::invalid_argument("duplicate arc");
  }
  for (auto& row : d.in_) std::sort(row.begin(), row.end());
  d.finalize();
  return d;
}

HostDigraph HostDigraph::symmetric_closure(const HostGraph& g) {
  HostDigraph d;
  d.out_.resize(g.n());
  for (Vertex v = 0; v < g.n(); ++v) d.out_[v] = g.neighbors(v);
  d.in_ = d.out_;
  d.finalize();
  return d;
}

void HostDigraph::finalize() {
  m_ = 0;
  for (const auto& row : out_) m_ += row.size();
  build_bits(out_.size(), out_, bits_, words_);
}

bool HostDigraph::has_arc(Vertex u, Vertex v) const {
  if (u >= n() || v >= n()) return false;
  if (words_) return (bits_[u * words_ + v / 64] >> (v % 64)) & 1u;
  return sorted_contains(out_[u], v);
}

std::vector<Edge> HostDigraph::arcs_list() const {
  std::vector<Edge> out;
  out.reserve(m_);
  for (Vertex u = 0; u < n(); ++u)
    for (Vertex v : out_[u]) out.emplace_back(u, v);
  return out;
}

ArcView HostDigraph::arcs() const {
  ArcView view;
  view.n = n();
  view.out = &out_;
  view.in = &in_;
  view.bits = words_ ? &bits_ : nullptr;
  view.words = words_;
  view.directed = true;
  return view;
}

// --------------------------------------------------------------- generators

HostGraph gen_random_graph(std::size_t n, double p, std::uint64_t stream) {
  check_probability(p);
  std::vector<VertexList> adj(n);
  if (p > 0.0) {
    for (Vertex i = 0; i < n; ++i)
      for (Vertex j = i + 1; j < n; ++j)
        if (p >= 1.0 || pair_uniform(stream, i, j) < p) {
          adj[i].push_back(j);
          adj[j].push_back(i);
        }
  }
  return HostGraph::from_adjacency(std::move(adj));
}

HostGraph gen_random_graph(std::size_t n, double p, const RandomSeed& seed) {
  return gen_random_graph(n, p, seed.stream());
}

HostDigraph gen_random_digraph(std::size_t n, double p, const RandomSeed& seed) {
  check_probability(p);
  std::uint64_t stream = seed.stream();
  std::vector<Edge> arcs;
  if (p > 0.0) {
    for (Vertex i = 0; i < n; ++i)
      for (Vertex j = 0; j < n; ++j)
        if (i != j && (p >= 1.0 || pair_uniform(stream, i, j) < p)) arcs.emplace_back(i, j);
  }
  return HostDigraph::from_arcs(n, arcs);
}

HostGraph union_graphs(const std::vector<const HostGraph*>& parts) {
  std::size_t n = 0;
  for (const auto* g : parts) n = std::max(n, g->n());
  std::vector<VertexList> adj(n);
  for (Vertex v = 0; v < n; ++v) {
    for (const auto* g : parts)
      if (v < g->n()) adj[v].insert(adj[v].end(), g->neighbors(v).begin(), g->neighbors(v).end());
    std::sort(adj[v].begin(), adj[v].end());
    adj[v].erase(std::unique(adj[v].begin(), adj[v].end()), adj[v].end());
  }
  return HostGraph::from_adjacency(std::move(adj));
}

// ------------------------------------------------------------ neighbourhoods

std::vector<char> make_mask(std::size_t n, const VertexList& members) {
  std::vector<char> mask(n, 0);
  for (Vertex v : members) {
    if (v >= n) throw std::invalid_argument("vertex out of range");
    mask[v] = 1;
  }
  return mask;
}

VertexList neighbors_into(const ArcView& g, const VertexList& X, const VertexList& Y, Direction dir) {
  auto in_x = make_mask(g.n, X);
  auto in_y = make_mask(g.n, Y);
  std::vector<char> seen(g.n, 0);
  VertexList result;
  for (Vertex x : X)
    for (Vertex y : g.neighbors(x, dir))
      if (in_y[y] && !in_x[y] && !seen[y]) {
        seen[y] = 1;
        result.push_back(y);
      }
  std::sort(result.begin(), result.end());
  return result;
}

VertexList neighbors_into(const HostGraph& g, const VertexList& X, const VertexList& Y) {
  return neighbors_into(g.arcs(), X, Y, Direction::Undirected);
}

VertexList neighbors_into(const HostDigraph& g, const VertexList& X, const VertexList& Y,
                          Direction dir) {
  if (dir == Direction::Undirected) {
    VertexList a = neighbors_into(g.arcs(), X, Y, Direction::Out);
    VertexList b = neighbors_into(g.arcs(), X, Y, Direction::In);
    VertexList out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }
  return neighbors_into(g.arcs(), X, Y, dir);
}

std::size_t edges_between(const HostDigraph& g, const VertexList& X, const VertexList& Y) {
  auto in_y = make_mask(g.n(), Y);
  auto in_x = make_mask(g.n(), X);
  std::size_t count = 0;
  for (Vertex x = 0; x < g.n(); ++x) {
    if (!in_x[x]) continue;
    for (Vertex y : g.out_neighbors(x)) count += in_y[y] ? 1 : 0;
  }
  return count;
}

std::size_t edges_between(const HostGraph& g, const VertexList& X, const VertexList& Y) {
  auto in_y = make_mask(g.n(), Y);
  auto in_x = make_mask(g.n(), X);
  std::size_t count = 0;
  for (Vertex u = 0; u < g.n(); ++u)
    for (Vertex v : g.neighbors(u))
      if (u < v && ((in_x[u] && in_y[v]) || (in_x[v] && in_y[u]))) ++count;
  return count;
}

// ---------------------------------------------------------------------- I/O

HostGraph parse_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto next_content_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      if (out.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_content_line(line)) throw EdgeListError(line_no + 1, "missing header \"n m\"");
  long long n = -1, m = -1;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> n >> m) || (header >> extra) || n < 0 || m < 0)
      throw EdgeListError(line_no, "malformed header, expected \"n m\"");
  }
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_line;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long e = 0; e < m; ++e) {
    if (!next_content_line(line))
      throw EdgeListError(line_no + 1, "expected " + std::to_string(m) + " edges, found " +
                                           std::to_string(e));
    std::istringstream row(line);
    long long u = -1, v = -1;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra) || u < 0 || v < 0)
      throw EdgeListError(line_no, "malformed edge line");
    if (u >= n || v >= n) throw EdgeListError(line_no, "vertex >= n");
    if (u == v) throw EdgeListError(line_no, "self-loop at vertex " + std::to_string(u));
    edges.emplace_back(static_cast<Vertex>(std::min(u, v)), static_cast<Vertex>(std::max(u, v)));
    edge_line.push_back(line_no);
  }
  if (next_content_line(line)) throw EdgeListError(line_no, "more edge lines than declared");
  // Duplicate detection reports the line of the second occurrence.
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return edges[a] < edges[b]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (edges[order[i]] == edges[order[i - 1]]) {
      throw EdgeListError(edge_line[order[i]], "duplicate edge " + std::to_string(edges[order[i]].first) +
                                            " " + std::to_string(edges[order[i]].second));
    }
  return HostGraph::from_edges(static_cast<std::size_t>(n), edges);
}

HostGraph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  return parse_edge_list(in);
}

void write_edge_list(const HostGraph& g, std::ostream& out) {
  out << g.n() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

void write_edge_list(const HostGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path);
  write_edge_list(g, out);
}

}  // namespace univ
