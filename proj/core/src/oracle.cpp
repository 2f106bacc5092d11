#include "univ/oracle.hpp"

#include <stdexcept>
#include <string>

namespace univ {

namespace {

class Search {
 public:
  Search(const HostGraph& g, const CycleSpec& spec) : g_(g), spec_(spec), used_(g.n(), 0), cycles_(spec.lengths.size()) {}

  bool run() { return place(0, 0); }
  std::uint64_t nodes() const { return nodes_; }
  const std::vector<VertexList>& cycles() const { return cycles_; }

 private:
  // Component c; its smallest image must be at least `floor`.
  bool place(std::size_t c, Vertex floor) {
    if (c == spec_.lengths.size()) return true;
    const std::size_t len = spec_.lengths[c];
    if (len == 1) {
      // Isolated vertices take whatever is left, in increasing order.
      for (std::size_t i = c; i < spec_.lengths.size(); ++i) cycles_[i].clear();
      std::size_t i = c;
      for (Vertex v = 0; v < g_.n() && i < spec_.lengths.size(); ++v)
        if (!used_[v]) cycles_[i++] = {v};
      return i == spec_.lengths.size();
    }
    for (Vertex a = floor; a < g_.n(); ++a) {
      if (used_[a]) continue;
      ++nodes_;
      VertexList& path = cycles_[c];
      path.assign(1, a);
      used_[a] = 1;
      if (extend(c, path)) return true;
      used_[a] = 0;
    }
    return false;
  }

  bool extend(std::size_t c, VertexList& path) {
    const std::size_t len = spec_.lengths[c];
    const Vertex a = path.front();
    if (path.size() == len) {
      bool closes = len == 2 || (g_.has_edge(path.back(), a) && path[1] < path.back());
      if (!closes) return false;
      std::size_t next = c + 1;
      Vertex floor = next < spec_.lengths.size() && spec_.lengths[next] == len ? a + 1 : 0;
      return place(next, floor);
    }
    for (Vertex v : g_.neighbors(path.back())) {
      if (v <= a || used_[v]) continue;
      ++nodes_;
      path.push_back(v);
      used_[v] = 1;
      if (extend(c, path)) return true;
      used_[v] = 0;
      path.pop_back();
    }
    return false;
  }

  const HostGraph& g_;
  const CycleSpec& spec_;
  std::vector<char> used_;
  std::vector<VertexList> cycles_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

OracleResult brute_force_embed(const HostGraph& host, const CycleSpec& spec, std::size_t cap) {
  if (host.n() > cap)
    throw std::invalid_argument("oracle: host order " + std::to_string(host.n()) + " exceeds the cap " +
                                std::to_string(cap));
  if (spec.n != host.n()) throw std::invalid_argument("oracle: spec and host orders differ");
  Search search(host, spec);
  OracleResult r;
  r.embeddable = search.run();
  r.nodes_explored = search.nodes();
  if (r.embeddable) r.witness = embedding_from_cycles(spec, search.cycles());
  return r;
}

UniversalityVerdict exhaustive_universality(std::size_t n, int ell, const HostGraph& host, std::size_t cap) {
  if (host.n() != n) throw std::invalid_argument("oracle: host order differs from n");
  if (n > cap) throw std::invalid_argument("oracle: n exceeds the cap");
  UniversalityVerdict v;
  for_each_bounded_spec(n, ell, n, [&](const CycleSpec& spec) {
    ++v.specs_checked;
    if (brute_force_embed(host, spec, cap).embeddable) return true;
    v.universal = false;
    v.first_failure = spec;
    return false;
  });
  return v;
}

}  // namespace univ
