#include "univ/cycle_search.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "univ/matching.hpp"
#include "univ/spanning.hpp"

namespace univ {

std::optional<VertexList> find_cycle_through(const HostGraph& g, const std::vector<char>& allowed,
                                             Vertex start, std::size_t length, Rng& rng,
                                             std::uint64_t budget) {
  if (length == 0 || start >= g.n() || !allowed[start]) return std::nullopt;
  if (length == 1) return VertexList{start};

  std::vector<char> on_path(g.n(), 0);
  VertexList path{start};
  on_path[start] = 1;
  // Candidates for the vertex after path[d], consumed from the back.
  std::vector<VertexList> stack;

  auto candidates = [&](Vertex from) {
    VertexList c;
    bool closing = path.size() + 1 == length;
    for (Vertex w : g.neighbors(from)) {
      if (!allowed[w] || on_path[w]) continue;
      if (closing && length >= 3 && !g.has_edge(w, start)) continue;
      c.push_back(w);
    }
    rng.shuffle(c);
    return c;
  };

  stack.push_back(candidates(start));
  std::uint64_t spent = 0;
  while (!stack.empty()) {
    if (++spent > budget) return std::nullopt;
    auto& top = stack.back();
    if (top.empty()) {
      stack.pop_back();
      if (path.size() > 1) {
        on_path[path.back()] = 0;
        path.pop_back();
      }
      continue;
    }
    Vertex w = top.back();
    top.pop_back();
    path.push_back(w);
    on_path[w] = 1;
    if (path.size() == length) return path;
    stack.push_back(candidates(w));
  }
  return std::nullopt;
}

std::optional<VertexList> find_cycle(const HostGraph& g, const std::vector<char>& allowed,
                                     std::size_t length, Rng& rng, std::uint64_t budget) {
  VertexList starts;
  for (Vertex v = 0; v < g.n(); ++v)
    if (allowed[v]) starts.push_back(v);
  if (starts.size() < length) return std::nullopt;
  rng.shuffle(starts);
  // Every start gets a share of the budget, so one hopeless start cannot eat it.
  std::uint64_t share = std::max<std::uint64_t>(budget / starts.size(), 64);
  std::uint64_t left = budget;
  for (Vertex v : starts) {
    if (left == 0) break;
    std::uint64_t b = std::min(share, left);
    if (auto c = find_cycle_through(g, allowed, v, length, rng, b)) return c;
    left -= b;
  }
  return std::nullopt;
}

namespace {

Expected<std::vector<VertexList>> pack_cycles(const HostGraph& g, const VertexList& S,
                                              std::size_t s, const FactorParams& params) {
  Rng rng(derive_seed(params.seed, "factor"));
  const std::size_t want = S.size() / s;
  std::size_t best = 0;
  for (int attempt = 0; attempt <= params.restarts; ++attempt) {
    std::vector<char> free = make_mask(g.n(), S);
    std::vector<VertexList> cycles;
    std::size_t remaining = S.size();
    int undo_credit = static_cast<int>(4 * want + 8);
    while (remaining > 0) {
      // Cover the most constrained free vertex first.
      Vertex pick = 0;
      std::size_t pick_deg = SIZE_MAX;
      std::size_t ties = 0;
      for (Vertex v : S) {
        if (!free[v]) continue;
        std::size_t d = 0;
        for (Vertex w : g.neighbors(v)) d += free[w] ? 1 : 0;
        if (d < pick_deg) {
          pick = v, pick_deg = d, ties = 1;
        } else if (d == pick_deg && rng.below(++ties) == 0) {
          pick = v;
        }
      }
      auto c = find_cycle_through(g, free, pick, s, rng, params.budget);
      if (c) {
        for (Vertex v : *c) free[v] = 0;
        remaining -= s;
        cycles.push_back(std::move(*c));
        best = std::max(best, cycles.size());
        continue;
      }
      if (cycles.empty() || --undo_credit < 0) break;
      // Release one or two cycles next to the stuck vertex so it can be
      // covered on the next step.
      std::vector<char> near(g.n(), 0);
      for (Vertex w : g.neighbors(pick)) near[w] = 1;
      std::vector<std::size_t> touching;
      for (std::size_t i = 0; i < cycles.size(); ++i)
        for (Vertex v : cycles[i])
          if (near[v]) {
            touching.push_back(i);
            break;
          }
      if (touching.empty()) touching.push_back(rng.below(cycles.size()));
      rng.shuffle(touching);
      touching.resize(std::min<std::size_t>(touching.size(), 1 + rng.below(2)));
      std::sort(touching.rbegin(), touching.rend());
      for (std::size_t idx : touching) {
        for (Vertex v : cycles[idx]) free[v] = 1;
        remaining += s;
        cycles.erase(cycles.begin() + static_cast<std::ptrdiff_t>(idx));
      }
    }
    if (remaining == 0) return cycles;
  }
  return fail("cycle_factor", "packed at most " + std::to_string(best) + " of " +
                                  std::to_string(want) + " cycles of length " + std::to_string(s));
}

}  // namespace

Expected<std::vector<VertexList>> find_cycle_factor(const HostGraph& g, const VertexList& S,
                                                    std::size_t s, const FactorParams& params) {
  if (s == 0 || S.size() % s != 0)
    throw std::invalid_argument("cycle length must divide the vertex set size");
  std::vector<VertexList> out;
  if (S.empty()) return out;
  if (s == 1) {
    for (Vertex v : S) out.push_back({v});
    return out;
  }
  if (s == 2) {
    auto m = maximum_matching(g, S);
    if (2 * m.size() != S.size()) {
      auto covered = make_mask(g.n(), {});
      for (auto [a, b] : m) covered[a] = covered[b] = 1;
      VertexList exposed;
      for (Vertex v : S)
        if (!covered[v]) exposed.push_back(v);
      return fail("cycle_factor", "host[S] has no perfect matching (" +
                                      std::to_string(exposed.size()) + " exposed)",
                  exposed);
    }
    for (auto [a, b] : m) out.push_back({a, b});
    return out;
  }
  if (S.size() == s) {
    // A single cycle through all of S: close a Hamilton path over an edge.
    Rng rng(derive_seed(params.seed, "hamilton"));
    std::vector<char> in_s = make_mask(g.n(), S);
    for (int attempt = 0; attempt <= params.restarts; ++attempt) {
      Vertex x = S[rng.below(S.size())];
      VertexList nbrs;
      for (Vertex w : g.neighbors(x))
        if (in_s[w]) nbrs.push_back(w);
      if (nbrs.empty()) break;
      Vertex y = nbrs[rng.below(nbrs.size())];
      VertexList block;
      for (Vertex v : S)
        if (v != x && v != y) block.push_back(v);
      if (auto path = hamilton_path_through(g, x, y, block, rng.next(), params.budget)) {
        out.push_back(std::move(*path));
        return out;
      }
    }
  }
  return pack_cycles(g, S, s, params);
}

}  // namespace univ
