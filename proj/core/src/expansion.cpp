#include "univ/expansion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace univ {

namespace {

using Words = std::vector<std::uint64_t>;

struct Bits {
  std::size_t words;
  explicit Bits(std::size_t n) : words((n + 63) / 64) {}
  Words make() const { return Words(words, 0); }
  static void set(Words& w, Vertex v) { w[v / 64] |= std::uint64_t{1} << (v % 64); }
  static bool get(const Words& w, Vertex v) { return (w[v / 64] >> (v % 64)) & 1u; }
};

std::uint64_t binom_capped(std::size_t n, std::size_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double acc = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    acc = acc * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    if (acc > static_cast<long double>(cap)) return cap + 1;
  }
  return static_cast<std::uint64_t>(std::llround(acc));
}

// Neighbourhood rows as bit vectors, one per direction.
std::vector<Words> neighbour_rows(const ArcView& g, Direction dir, const Bits& bits) {
  std::vector<Words> rows(g.n, bits.make());
  for (Vertex v = 0; v < g.n; ++v)
    for (Vertex w : g.neighbors(v, dir)) Bits::set(rows[v], w);
  return rows;
}

std::size_t count_outside(const Words& nb, const Words& target, const Words& x) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < nb.size(); ++i) c += std::popcount(nb[i] & target[i] & ~x[i]);
  return c;
}

// Depth-first enumeration of all subsets of [0,n) with size in [1, max_size],
// keeping the running union of neighbourhood rows. `visit` returns false to stop.
template <class Visit>
bool enumerate_subsets(std::size_t n, std::size_t max_size, const std::vector<Words>& rows,
                       const Bits& bits, Visit&& visit) {
  VertexList chosen;
  std::vector<Words> unions(max_size + 1, bits.make());
  std::vector<Words> members(max_size + 1, bits.make());
  auto rec = [&](auto&& self, Vertex start) -> bool {
    std::size_t depth = chosen.size();
    if (depth == max_size) return true;
    for (Vertex v = start; v < n; ++v) {
      unions[depth + 1] = unions[depth];
      members[depth + 1] = members[depth];
      for (std::size_t i = 0; i < bits.words; ++i) unions[depth + 1][i] |= rows[v][i];
      Bits::set(members[depth + 1], v);
      chosen.push_back(v);
      bool go_on = visit(chosen, unions[depth + 1], members[depth + 1]) && self(self, v + 1);
      chosen.pop_back();
      if (!go_on) return false;
    }
    return true;
  };
  return rec(rec, 0);
}

VertexList first_members(const Words& set, const Words& exclude, std::size_t n, std::size_t limit) {
  VertexList out;
  for (Vertex v = 0; v < n && out.size() < limit; ++v)
    if (Bits::get(set, v) && !Bits::get(exclude, v)) out.push_back(v);
  return out;
}

struct Check {
  const ArcView& g;
  std::vector<char> in_w;
  std::size_t w_size;
  double d;
  std::size_t m;
};

// Exact decision over one direction. P2 uses the equivalent form: no m-set X
// leaves at least m vertices outside X ∪ N(X).
Expected<ExpansionVerdict> exact_check(const Check& c, const std::vector<Direction>& p1_dirs,
                                       const ExpansionMode& mode) {
  const std::size_t n = c.g.n;
  const std::size_t p1_max = std::min(c.m - 1, n);
  std::uint64_t budget = 0;
  for (std::size_t j = 1; j <= p1_max; ++j) {
    budget += binom_capped(n, j, mode.cap) * p1_dirs.size();
    if (budget > mode.cap) break;
  }
  bool p2_relevant = mode.pair_property && 2 * c.m <= n;
  if (p2_relevant && budget <= mode.cap) budget += binom_capped(n, c.m, mode.cap);
  if (budget > mode.cap)
    return fail("expands_into", "budget exceeded, use sampled mode");

  Bits bits(n);
  Words target = bits.make();
  for (Vertex v = 0; v < n; ++v)
    if (c.in_w[v]) Bits::set(target, v);
  ExpansionVerdict verdict;
  verdict.certified = true;
  for (Direction dir : p1_dirs) {
    auto rows = neighbour_rows(c.g, dir, bits);
    enumerate_subsets(n, p1_max, rows, bits, [&](const VertexList& X, const Words& nb, const Words& xs) {
      if (static_cast<double>(count_outside(nb, target, xs)) < c.d * static_cast<double>(X.size())) {
        verdict.holds = false;
        verdict.property = "P1";
        verdict.witness_x = X;
        verdict.direction = dir;
        return false;
      }
      return true;
    });
    if (!verdict.holds) return verdict;
  }
  if (p2_relevant) {
    auto rows = neighbour_rows(c.g, Direction::Out, bits);
    Words all = bits.make();
    for (Vertex v = 0; v < n; ++v) Bits::set(all, v);
    enumerate_subsets(n, c.m, rows, bits, [&](const VertexList& X, const Words& nb, const Words& xs) {
      if (X.size() < c.m) return true;
      Words closed = nb;
      for (std::size_t i = 0; i < closed.size(); ++i) closed[i] |= xs[i];
      std::size_t outside = 0;
      for (std::size_t i = 0; i < closed.size(); ++i) outside += std::popcount(all[i] & ~closed[i]);
      if (outside >= c.m) {
        verdict.holds = false;
        verdict.property = "P2";
        verdict.witness_x = X;
        verdict.witness_y = first_members(all, closed, n, c.m);
        return false;
      }
      return true;
    });
  }
  return verdict;
}

ExpansionVerdict sampled_check(const Check& c, const std::vector<Direction>& p1_dirs,
                               const ExpansionMode& mode) {
  const std::size_t n = c.g.n;
  const std::size_t p1_max = std::min(c.m - 1, n);
  Rng rng(derive_seed(mode.seed, "expansion-probe"));
  ExpansionVerdict verdict;
  verdict.trials = mode.trials;
  VertexList all(n);
  for (Vertex v = 0; v < n; ++v) all[v] = v;
  std::vector<char> in_x(n, 0), seen(n, 0);
  for (Direction dir : p1_dirs) {
    if (p1_max == 0) break;
    for (std::size_t t = 0; t < mode.trials; ++t) {
      std::size_t size = 1 + rng.below(p1_max);
      VertexList X = rng.sample(all, size);
      for (Vertex x : X) in_x[x] = 1;
      std::size_t count = 0;
      VertexList touched;
      for (Vertex x : X)
        for (Vertex y : c.g.neighbors(x, dir))
          if (c.in_w[y] && !in_x[y] && !seen[y]) {
            seen[y] = 1;
            touched.push_back(y);
            ++count;
          }
      for (Vertex y : touched) seen[y] = 0;
      for (Vertex x : X) in_x[x] = 0;
      if (static_cast<double>(count) < c.d * static_cast<double>(size)) {
        std::sort(X.begin(), X.end());
        verdict.holds = false;
        verdict.property = "P1";
        verdict.witness_x = X;
        verdict.direction = dir;
        return verdict;
      }
    }
  }
  if (mode.pair_property && 2 * c.m <= n) {
    for (std::size_t t = 0; t < mode.trials; ++t) {
      VertexList X = rng.sample(all, c.m);
      std::vector<char> closed(n, 0);
      for (Vertex x : X) {
        closed[x] = 1;
        for (Vertex y : c.g.out_neighbors(x)) closed[y] = 1;
      }
      VertexList Y;
      for (Vertex v = 0; v < n && Y.size() < c.m; ++v)
        if (!closed[v]) Y.push_back(v);
      if (Y.size() >= c.m) {
        std::sort(X.begin(), X.end());
        verdict.holds = false;
        verdict.property = "P2";
        verdict.witness_x = X;
        verdict.witness_y = Y;
        return verdict;
      }
    }
  }
  return verdict;
}

Expected<ExpansionVerdict> run_check(const ArcView& g, const VertexList& W, double d,
                                     const ExpansionMode& mode, const std::vector<Direction>& dirs) {
  if (!(d > 0)) throw std::invalid_argument("expansion factor must be positive");
  Check c{g, make_mask(g.n, W), W.size(), d, expansion_set_size(W.size(), d)};
  if (W.empty()) return ExpansionVerdict{true, mode.exact, mode.trials, "", {}, {}, Direction::Out};
  if (mode.exact) return exact_check(c, dirs, mode);
  return sampled_check(c, dirs, mode);
}

}  // namespace

std::size_t expansion_set_size(std::size_t w, double d) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(w) / (2.0 * d)));
}

Expected<ExpansionVerdict> expands_into(const ArcView& g, const VertexList& W, double d,
                                        const ExpansionMode& mode, Direction dir) {
  if (dir == Direction::Undirected) dir = Direction::Out;
  return run_check(g, W, d, mode, {dir});
}

Expected<ExpansionVerdict> is_expander(const ArcView& g, double d, const ExpansionMode& mode) {
  VertexList all(g.n);
  for (Vertex v = 0; v < g.n; ++v) all[v] = v;
  if (g.directed) return run_check(g, all, d, mode, {Direction::Out, Direction::In});
  return run_check(g, all, d, mode, {Direction::Out});
}

Expected<std::vector<VertexList>> split_expanding(const ArcView& g, const VertexList& W,
                                                  const std::vector<std::size_t>& sizes, double d,
                                                  std::uint64_t seed, int retries, std::size_t probes) {
  std::size_t total = 0;
  for (std::size_t s : sizes) total += s;
  if (total != W.size()) throw std::invalid_argument("split_expanding: sizes must sum to |W|");
  if (sizes.empty()) throw std::invalid_argument("split_expanding: at least one part required");
  std::size_t max_parts = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(g.n, 2))))));
  if (sizes.size() > max_parts) throw std::invalid_argument("split_expanding: more than log2(n) parts");
  if (retries < 1) throw std::invalid_argument("split_expanding: retries must be positive");

  std::string diagnostics;
  for (int attempt = 0; attempt < retries; ++attempt) {
    Rng rng(derive_seed(derive_seed(seed, "split"), static_cast<std::uint64_t>(attempt)));
    VertexList order = W;
    rng.shuffle(order);
    std::vector<VertexList> parts;
    std::size_t at = 0;
    for (std::size_t s : sizes) {
      parts.emplace_back(order.begin() + static_cast<long>(at), order.begin() + static_cast<long>(at + s));
      std::sort(parts.back().begin(), parts.back().end());
      at += s;
    }
    if (probes == 0) return parts;
    bool all_ok = true;
    diagnostics.clear();
    for (std::size_t i = 0; i < parts.size(); ++i) {
      double di = static_cast<double>(sizes[i]) / (5.0 * static_cast<double>(W.size())) * d;
      if (parts[i].empty() || di <= 0) continue;
      auto v = expands_into(g, parts[i], di,
                            ExpansionMode::sampled(probes, derive_seed(seed, attempt, i)));
      if (!v.ok() || !v->holds) {
        all_ok = false;
        diagnostics += " part " + std::to_string(i) + " (size " + std::to_string(sizes[i]) + ", d=" +
                       std::to_string(di) + ") failed " + (v.ok() ? v->property : v.error().reason) + ";";
      }
    }
    if (all_ok) return parts;
  }
  return fail("split_expanding",
              "partition not certified after " + std::to_string(retries) + " retries:" + diagnostics);
}

}  // namespace univ
