#include "univ/spanning.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "univ/matching.hpp"
#include "univ/rng.hpp"

namespace univ {

std::string to_string(SpanningMode mode) {
  switch (mode) {
    case SpanningMode::Auto: return "auto";
    case SpanningMode::Absorbing: return "absorbing";
    case SpanningMode::Direct: return "direct";
  }
  return "?";
}

SpanningParams SpanningParams::from_profile(const ConstantsProfile& profile, std::size_t n, std::uint64_t seed) {
  SpanningParams p;
  p.k = profile.gadget_k;
  p.base_length = static_cast<std::size_t>(profile.spanning_base);
  p.leftover = static_cast<std::size_t>(profile.spanning_leftover);
  p.link_min = static_cast<std::size_t>(profile.link_min);
  p.template_seed = profile.template_seed;
  p.template_options.min_degree = profile.template_min_degree;
  p.template_options.max_degree = profile.template_max_degree;
  p.template_options.verification_trials = profile.template_trials;
  p.connector = ConnectorParams::from_profile(profile, n, seed);
  p.search_budget = profile.search_budget;
  p.restarts = profile.search_restarts;
  return p;
}

namespace {

void validate_request(const HostGraph& g, const VertexList& X, const VertexList& Y, std::size_t length,
                      const VertexList& W) {
  if (X.size() != Y.size()) throw std::invalid_argument("spanning: sources and targets differ in size");
  if (length == 0) throw std::invalid_argument("spanning: length must be positive");
  if (X.size() * (length - 1) != W.size())
    throw std::invalid_argument("spanning: counting condition fails, t(l-1) = " +
                                std::to_string(X.size() * (length - 1)) + " but |W| = " + std::to_string(W.size()));
  // Sources are distinct, targets are distinct, and a vertex may end one path
  // and start another; the workspace avoids every endpoint.
  std::vector<char> as_source(g.n(), 0), as_target(g.n(), 0), in_w(g.n(), 0);
  auto check = [&](Vertex v, std::vector<char>& seen, const char* what) {
    if (v >= g.n()) throw std::invalid_argument(std::string("spanning: ") + what + " out of range");
    if (seen[v]) throw std::invalid_argument("spanning: " + std::string(what) + " " + std::to_string(v) + " appears twice");
    seen[v] = 1;
  };
  for (Vertex v : X) check(v, as_source, "source");
  for (Vertex v : Y) check(v, as_target, "target");
  for (std::size_t i = 0; i < X.size(); ++i)
    if (X[i] == Y[i]) throw std::invalid_argument("spanning: pair " + std::to_string(i) + " is a loop");
  for (Vertex v : W) {
    check(v, in_w, "workspace vertex");
    if (as_source[v] || as_target[v])
      throw std::invalid_argument("spanning: workspace vertex " + std::to_string(v) + " is an endpoint");
  }
}

// Hamilton paths through small vertex sets, with scratch space reused across
// calls.
class BlockSolver {
 public:
  explicit BlockSolver(const HostGraph& g) : g_(g), pos_(g.n(), -1), member_(g.n(), 0) {}

  std::optional<Path> solve(Vertex x, Vertex y, const VertexList& block, Rng& rng, std::uint64_t budget) {
    if (block.empty()) {
      if (g_.has_edge(x, y)) return Path{x, y};
      return std::nullopt;
    }
    if (block.size() <= 14) return exact(x, y, block);
    return rotate_extend(x, y, block, rng, budget);
  }

 private:
  // Dynamic programming over subsets.
  std::optional<Path> exact(Vertex x, Vertex y, const VertexList& block) {
    const std::size_t m = block.size();
    const std::uint32_t full = (1u << m) - 1;
    std::vector<std::uint16_t> reach(std::size_t{1} << m, 0);
    std::vector<std::uint8_t> pred((std::size_t{1} << m) * m, 0xff);
    for (std::size_t v = 0; v < m; ++v)
      if (g_.has_edge(x, block[v])) reach[1u << v] |= static_cast<std::uint16_t>(1u << v);
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      if (!reach[mask]) continue;
      for (std::size_t v = 0; v < m; ++v) {
        if (!(reach[mask] >> v & 1u)) continue;
        for (std::size_t w = 0; w < m; ++w) {
          if (mask >> w & 1u) continue;
          std::uint32_t next = mask | (1u << w);
          if (reach[next] >> w & 1u) continue;
          if (!g_.has_edge(block[v], block[w])) continue;
          reach[next] |= static_cast<std::uint16_t>(1u << w);
          pred[next * m + w] = static_cast<std::uint8_t>(v);
        }
      }
    }
    for (std::size_t v = 0; v < m; ++v) {
      if (!(reach[full] >> v & 1u) || !g_.has_edge(block[v], y)) continue;
      Path rev{y};
      std::uint32_t mask = full;
      std::size_t at = v;
      for (;;) {
        rev.push_back(block[at]);
        std::uint8_t p = pred[mask * m + at];
        mask &= ~(1u << at);
        if (p == 0xff) break;
        at = p;
      }
      rev.push_back(x);
      std::reverse(rev.begin(), rev.end());
      return rev;
    }
    return std::nullopt;
  }

  // Rotation-extension keeping x fixed as the first vertex.
  std::optional<Path> rotate_extend(Vertex x, Vertex y, const VertexList& block, Rng& rng, std::uint64_t budget) {
    for (Vertex v : block) member_[v] = 1;
    Path P{x};
    pos_[x] = 0;
    std::optional<Path> found;
    VertexList options;
    for (std::uint64_t step = 0; step < budget; ++step) {
      const Vertex e = P.back();
      if (P.size() == block.size() + 1 && g_.has_edge(e, y)) {
        found = P;
        found->push_back(y);
        break;
      }
      options.clear();
      if (P.size() < block.size() + 1)
        for (Vertex w : g_.neighbors(e))
          if (member_[w] && pos_[w] < 0) options.push_back(w);
      if (!options.empty()) {
        Vertex w = options[rng.below(options.size())];
        pos_[w] = static_cast<int>(P.size());
        P.push_back(w);
        continue;
      }
      options.clear();
      for (Vertex w : g_.neighbors(e))
        if (pos_[w] >= 0 && static_cast<std::size_t>(pos_[w]) + 2 < P.size()) options.push_back(w);
      if (options.empty()) {
        // Dead end: back off one vertex.
        if (P.size() == 1) break;
        pos_[P.back()] = -1;
        P.pop_back();
        continue;
      }
      const std::size_t j = static_cast<std::size_t>(pos_[options[rng.below(options.size())]]);
      std::reverse(P.begin() + static_cast<std::ptrdiff_t>(j + 1), P.end());
      for (std::size_t i = j + 1; i < P.size(); ++i) pos_[P[i]] = static_cast<int>(i);
    }
    for (Vertex v : P) pos_[v] = -1;
    for (Vertex v : block) member_[v] = 0;
    return found;
  }

  const HostGraph& g_;
  std::vector<int> pos_;
  std::vector<char> member_;
};

// Blocks of size l-1, one per pair, each traversed by a Hamilton path.
Expected<PathBundle> connect_direct(const HostGraph& g, const VertexList& X, const VertexList& Y,
                                    std::size_t length, const VertexList& W, const SpanningParams& params) {
  const std::size_t t = X.size(), m = length - 1;
  PathBundle out;
  out.paths.resize(t);
  if (t == 0) return out;
  Rng rng(derive_seed(params.connector.seed, "spanning-direct"));

  if (m == 0) {
    for (std::size_t i = 0; i < t; ++i) {
      if (!g.has_edge(X[i], Y[i])) return fail("spanning/direct", "pair is not an edge", {X[i], Y[i]});
      out.paths[i] = {X[i], Y[i]};
    }
    return out;
  }
  if (m == 1) {
    // Exactly a perfect matching of pairs to common neighbours.
    std::vector<std::vector<int>> adj(t);
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t w = 0; w < W.size(); ++w)
        if (g.has_edge(X[i], W[w]) && g.has_edge(W[w], Y[i])) adj[i].push_back(static_cast<int>(w));
    auto match = capacitated_matching(adj, std::vector<int>(t, 1), W.size());
    if (!match.saturated) {
      VertexList witness;
      for (int i : match.deficient_left) witness.push_back(X[static_cast<std::size_t>(i)]);
      return fail("spanning/direct", "pairs lack distinct common neighbours", witness);
    }
    for (std::size_t i = 0; i < t; ++i)
      out.paths[i] = {X[i], W[static_cast<std::size_t>(match.assigned[i][0])], Y[i]};
    return out;
  }

  // Seed each block with a neighbour of each end where possible.
  VertexList pool = W;
  rng.shuffle(pool);
  std::vector<VertexList> blocks(t);
  std::vector<char> placed(g.n(), 0);
  VertexList ends = X;
  ends.insert(ends.end(), Y.begin(), Y.end());
  auto seeds = star_matching(g.arcs(), ends, pool, 1, Direction::Undirected);
  if (seeds.ok())
    for (std::size_t i = 0; i < t; ++i) {
      blocks[i].push_back(seeds->leaves[i][0]);
      blocks[i].push_back(seeds->leaves[t + i][0]);
      placed[seeds->leaves[i][0]] = placed[seeds->leaves[t + i][0]] = 1;
    }
  std::size_t at = 0;
  for (Vertex v : pool) {
    if (placed[v]) continue;
    while (blocks[at].size() == m) ++at;
    blocks[at].push_back(v);
  }

  BlockSolver solver(g);
  const std::uint64_t budget = std::max<std::uint64_t>(200, 20 * m * m);
  std::vector<std::optional<Path>> solved(t);
  std::vector<std::size_t> failing;
  for (std::size_t i = 0; i < t; ++i) {
    solved[i] = solver.solve(X[i], Y[i], blocks[i], rng, budget);
    if (!solved[i]) failing.push_back(i);
  }

  // Repair failing blocks by exchanging vertices with other blocks.
  const std::size_t rounds = static_cast<std::size_t>(std::max(1, params.restarts)) * (25 * t + 100);
  for (std::size_t round = 0; round < rounds && !failing.empty(); ++round) {
    const std::size_t fi = rng.below(failing.size());
    const std::size_t i = failing[fi];
    if (t == 1) break;
    std::size_t j = rng.below(t - 1);
    if (j >= i) ++j;
    const std::size_t a = rng.below(m), b = rng.below(m);
    std::swap(blocks[i][a], blocks[j][b]);
    auto pi = solver.solve(X[i], Y[i], blocks[i], rng, budget);
    auto pj = solver.solve(X[j], Y[j], blocks[j], rng, budget);
    const bool j_was_ok = solved[j].has_value();
    // Neutral moves are accepted so that failing blocks keep drifting.
    const int gain = (pi ? 1 : 0) + (pj ? 1 : 0) - (j_was_ok ? 1 : 0);
    if (gain < 0) {
      std::swap(blocks[i][a], blocks[j][b]);
      continue;
    }
    solved[i] = std::move(pi);
    solved[j] = std::move(pj);
    failing.clear();
    for (std::size_t z = 0; z < t; ++z)
      if (!solved[z]) failing.push_back(z);
  }
  if (t == 1 && !failing.empty()) {
    // A single block has nothing to trade with; spend the budget on search.
    for (int attempt = 0; attempt < params.restarts && !solved[0]; ++attempt)
      solved[0] = solver.solve(X[0], Y[0], blocks[0], rng, budget * 10);
    if (solved[0]) failing.clear();
  }
  if (!failing.empty()) {
    VertexList witness;
    for (std::size_t i : failing) witness.push_back(X[i]);
    return fail("spanning/direct", std::to_string(failing.size()) + " blocks without a Hamilton path after repair",
                witness);
  }
  for (std::size_t i = 0; i < t; ++i) out.paths[i] = std::move(*solved[i]);
  return out;
}

struct Shape {
  std::size_t r = 0;        // robust set parameter
  std::size_t regular = 0;  // length of regular segments
  std::size_t segments = 0; // per pair
  std::size_t first = 0;    // length of the first segment
};

Shape shape_for(std::size_t length, const SpanningParams& params) {
  Shape s;
  const std::size_t k = static_cast<std::size_t>(params.k);
  s.r = 10 * k * params.leftover;
  s.regular = 10 * k + 2;
  s.segments = length / s.regular;
  s.first = s.segments == 0 ? 0 : length - (s.segments - 1) * s.regular;
  return s;
}

RobustSetParams robust_params(const SpanningParams& params) {
  RobustSetParams rp;
  rp.k = params.k;
  rp.link_min = params.link_min;
  rp.template_seed = params.template_seed;
  rp.template_options = params.template_options;
  rp.connector = params.connector;
  return rp;
}

bool base_applies(std::size_t t, std::size_t length, const SpanningParams& params) {
  const Shape sh = shape_for(length, params);
  if (sh.segments < 2 || t < 3 * sh.r + params.leftover) return false;
  const std::size_t waypoints = (t - 3 * sh.r) * (sh.segments - 1);
  if (waypoints < params.leftover) return false;
  auto guide = TemplateCache::instance().get(3 * sh.r, params.template_seed, params.template_options);
  if (!guide.ok()) return false;
  const auto rp = robust_params(params);
  if (robust_set_min_length(*guide, rp) > length + 1) return false;
  const std::size_t need = robust_set_workspace_need(*guide, length + 1, rp);
  return need + 2 * sh.r + waypoints <= t * (length - 1);
}

// Exact-length legs through `free` (marked 1), joined one at a time.
std::optional<std::vector<Path>> route_legs(const HostGraph& g, const VertexList& from, const VertexList& to,
                                            std::size_t length, std::vector<char> free, std::uint64_t budget) {
  std::vector<Path> legs;
  const ArcView view = g.arcs();
  for (std::size_t i = 0; i < from.size(); ++i) {
    auto p = find_exact_path(view, from[i], to[i], length, free, budget);
    if (!p) return std::nullopt;
    for (std::size_t j = 1; j + 1 < p->size(); ++j) free[(*p)[j]] = 0;
    legs.push_back(std::move(*p));
  }
  return legs;
}

// Base case of the absorbing construction for length l.
Expected<PathBundle> connect_absorbing_base(const HostGraph& g, const VertexList& X, const VertexList& Y,
                                            std::size_t length, const VertexList& W, const SpanningParams& params) {
  const std::size_t t = X.size();
  const std::size_t k = static_cast<std::size_t>(params.k), s = params.leftover;
  const Shape sh = shape_for(length, params);
  const std::size_t r = sh.r;
  Rng rng(derive_seed(params.connector.seed, "spanning-absorbing"));
  const ArcView view = g.arcs();

  // Flexible pool: the first 5ks vertices receive the leftover stars, the
  // remaining 15ks carry the legs.
  VertexList rest = W;
  rng.shuffle(rest);
  VertexList pool(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(2 * r));
  rest.erase(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(2 * r));
  const std::size_t star_part = 5 * k * s;
  VertexList stars_pool(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(star_part));
  VertexList legs_pool(pool.begin() + static_cast<std::ptrdiff_t>(star_part), pool.end());

  // Robust set for the first 3r pairs.
  const auto rp = robust_params(params);
  auto guide = TemplateCache::instance().get(3 * r, params.template_seed, params.template_options);
  if (!guide.ok()) return nest("spanning/absorbing", guide.error());
  const std::size_t waypoint_count = (t - 3 * r) * (sh.segments - 1);
  const std::size_t need = robust_set_workspace_need(*guide, length + 1, rp);
  const std::size_t avail = rest.size() - waypoint_count;
  const std::size_t give = std::min(avail, need + (avail - need) / 4);
  VertexList rs_ws(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(give));
  VertexList rs_x(X.begin(), X.begin() + static_cast<std::ptrdiff_t>(3 * r));
  VertexList rs_y(Y.begin(), Y.begin() + static_cast<std::ptrdiff_t>(3 * r));
  auto rs = build_robust_set(g, pool, rs_x, rs_y, rs_ws, length + 1, rp);
  if (!rs.ok()) return nest("spanning/absorbing", rs.error());

  // Everything not covered by the robust set is routed by segments.
  VertexList free_ws = rs->unused;
  free_ws.insert(free_ws.end(), rest.begin() + static_cast<std::ptrdiff_t>(give), rest.end());
  rng.shuffle(free_ws);
  VertexList waypoints(free_ws.begin(), free_ws.begin() + static_cast<std::ptrdiff_t>(waypoint_count));
  VertexList routing(free_ws.begin() + static_cast<std::ptrdiff_t>(waypoint_count), free_ws.end());

  struct Segment {
    Vertex a, b;
    std::size_t len;
    std::size_t pair;
    std::size_t slot;
  };
  std::vector<Segment> segs;
  std::vector<std::vector<Path>> pieces(t);
  std::size_t wp = 0;
  for (std::size_t i = 3 * r; i < t; ++i) {
    pieces[i].resize(sh.segments);
    Vertex prev = X[i];
    for (std::size_t j = 0; j < sh.segments; ++j) {
      Vertex next = j + 1 == sh.segments ? Y[i] : waypoints[wp++];
      segs.push_back({prev, next, j == 0 ? sh.first : sh.regular, i, j});
      prev = next;
    }
  }

  // Saturation: irregular segments first, then regular ones, until exactly
  // `s` regular segments remain.
  ConnectorParams cp = params.connector;
  cp.seed = derive_seed(params.connector.seed, "spanning-saturate");
  detail::Router router(view, routing, cp);
  std::vector<std::size_t> open;
  for (std::size_t i = 0; i < segs.size(); ++i)
    if (segs[i].slot == 0) open.push_back(i);
  std::size_t irregular = open.size();
  {
    std::vector<std::size_t> reg;
    for (std::size_t i = 0; i < segs.size(); ++i)
      if (segs[i].slot != 0) reg.push_back(i);
    rng.shuffle(reg);
    open.insert(open.end(), reg.begin(), reg.end());
  }
  std::vector<std::pair<std::size_t, Path>> history;
  int undo = 0;
  std::size_t depth = 2;
  while (open.size() > s) {
    const std::size_t window = std::min<std::size_t>(irregular > 0 ? irregular : open.size(), 8);
    VertexList xs, ys;
    std::vector<std::size_t> ls;
    for (std::size_t w = 0; w < window; ++w) {
      xs.push_back(segs[open[w]].a);
      ys.push_back(segs[open[w]].b);
      ls.push_back(segs[open[w]].len);
    }
    auto got = router.connect_one(xs, ys, ls);
    if (got.ok()) {
      const std::size_t id = open[got->index];
      router.take(got->path);
      history.emplace_back(id, std::move(got->path));
      open.erase(open.begin() + static_cast<std::ptrdiff_t>(got->index));
      if (segs[id].slot == 0) --irregular;
      continue;
    }
    if (++undo > params.restarts)
      return nest("spanning/absorbing/saturation", got.error());
    // Undo the most recent paths and retry in a new order.
    for (std::size_t u = 0; u < depth && !history.empty(); ++u) {
      auto [id, path] = std::move(history.back());
      history.pop_back();
      router.release(path);
      if (segs[id].slot == 0) {
        open.insert(open.begin(), id);
        ++irregular;
      } else {
        open.push_back(id);
      }
    }
    rng.shuffle(open);
    std::stable_partition(open.begin(), open.end(), [&](std::size_t id) { return segs[id].slot == 0; });
    depth = std::min<std::size_t>(depth * 2, 64);
  }
  for (auto& [id, path] : history) pieces[segs[id].pair][segs[id].slot] = std::move(path);

  VertexList spare = router.free_vertices();
  if (spare.size() != s)
    throw std::logic_error("spanning: " + std::to_string(spare.size()) + " vertices left after saturation, expected " +
                           std::to_string(s));

  // Absorb each leftover vertex e into a leftover segment c..d:
  // c, p_c, leg, p_e, e, p_e', leg, p_d, d.
  const std::vector<char> in_stars = make_mask(g.n(), stars_pool);
  auto star_degree = [&](Vertex v) {
    std::size_t d = 0;
    for (Vertex w : g.neighbors(v)) d += in_stars[w] ? 1 : 0;
    return d;
  };
  auto piece = [&](std::size_t id) -> Path& { return pieces[segs[id].pair][segs[id].slot]; };
  // Trade a leftover vertex for an interior vertex of a routed segment that
  // sees more of the star pool.
  auto trade_vertex = [&](std::size_t i) {
    const Vertex e = spare[i];
    const std::size_t offset = rng.below(segs.size());
    for (std::size_t o = 0; o < segs.size(); ++o) {
      const std::size_t id = (offset + o) % segs.size();
      Path& p = piece(id);
      for (std::size_t j = 1; j + 1 < p.size(); ++j)
        if (star_degree(p[j]) >= 2 && g.has_edge(e, p[j - 1]) && g.has_edge(e, p[j + 1])) {
          std::swap(spare[i], p[j]);
          return true;
        }
    }
    return false;
  };
  // Leave a different regular segment open, rerouting segment open[i] through
  // the freed vertices and the leftover ones.
  auto trade_segment = [&](std::size_t i) {
    std::vector<std::size_t> ids;
    for (std::size_t id = 0; id < segs.size(); ++id)
      if (segs[id].slot != 0 && !piece(id).empty() && star_degree(segs[id].a) >= 1 && star_degree(segs[id].b) >= 1)
        ids.push_back(id);
    rng.shuffle(ids);
    if (ids.size() > 64) ids.resize(64);
    const Segment& want = segs[open[i]];
    for (std::size_t id : ids) {
      Path& old = piece(id);
      std::vector<char> free(g.n(), 0);
      for (std::size_t j = 1; j + 1 < old.size(); ++j) free[old[j]] = 1;
      for (Vertex e : spare) free[e] = 1;
      auto p = find_exact_path(view, want.a, want.b, want.len, free, params.search_budget / 16 + 1);
      if (!p) continue;
      for (std::size_t j = 1; j + 1 < p->size(); ++j) free[(*p)[j]] = 0;
      spare.clear();
      for (Vertex v = 0; v < g.n(); ++v)
        if (free[v]) spare.push_back(v);
      old.clear();
      piece(open[i]) = std::move(*p);
      open[i] = id;
      return true;
    }
    return false;
  };

  const std::size_t leg = 5 * k - 1;
  std::optional<std::vector<Path>> legs;
  for (int attempt = 0; attempt <= 4 * params.restarts && !legs; ++attempt) {
    VertexList centres;
    std::vector<int> sizes;
    for (std::size_t id : open) {
      centres.push_back(segs[id].a);
      sizes.push_back(1);
    }
    for (std::size_t id : open) {
      centres.push_back(segs[id].b);
      sizes.push_back(1);
    }
    for (Vertex e : spare) {
      centres.push_back(e);
      sizes.push_back(2);
    }
    VertexList shuffled = stars_pool;
    rng.shuffle(shuffled);
    auto sm = star_matching(view, centres, shuffled, sizes, Direction::Undirected);
    if (!sm.ok()) {
      const auto& witness = sm.error().witness;
      const Vertex bad = witness[rng.below(witness.size())];
      const std::size_t at = static_cast<std::size_t>(std::find(centres.begin(), centres.end(), bad) - centres.begin());
      const bool fixed = at >= 2 * s ? trade_vertex(at - 2 * s) : trade_segment(at % s);
      if (!fixed) return nest("spanning/absorbing/leftover", sm.error());
      continue;
    }
    VertexList from, to;
    for (std::size_t i = 0; i < s; ++i) {
      from.push_back(sm->leaves[i][0]);          // p_c
      to.push_back(sm->leaves[2 * s + i][0]);    // p_e
      from.push_back(sm->leaves[2 * s + i][1]);  // p_e'
      to.push_back(sm->leaves[s + i][0]);        // p_d
    }
    std::vector<char> free(g.n(), 0);
    VertexList order = legs_pool;
    rng.shuffle(order);
    for (Vertex v : order) free[v] = 1;
    legs = route_legs(g, from, to, leg, free, params.search_budget);
  }
  if (!legs) return fail("spanning/absorbing/leftover", "no exact legs through the flexible pool", spare);

  std::vector<char> used(g.n(), 0);
  for (std::size_t i = 0; i < s; ++i) {
    const Segment& sg = segs[open[i]];
    const Path& l1 = (*legs)[2 * i];
    const Path& l2 = (*legs)[2 * i + 1];
    Path p{sg.a};
    p.insert(p.end(), l1.begin(), l1.end());
    p.push_back(spare[i]);
    p.insert(p.end(), l2.begin(), l2.end());
    p.push_back(sg.b);
    for (std::size_t j = 1; j + 1 < p.size(); ++j) used[p[j]] = 1;
    pieces[sg.pair][sg.slot] = std::move(p);
  }
  VertexList chosen;
  for (Vertex v : pool)
    if (!used[v]) chosen.push_back(v);
  if (chosen.size() != r)
    throw std::logic_error("spanning: " + std::to_string(chosen.size()) + " pool vertices left, expected " +
                           std::to_string(r));
  auto absorbed = query_robust_set(*rs, chosen);
  if (!absorbed.ok()) return nest("spanning/absorbing/query", absorbed.error());

  PathBundle out;
  out.paths.resize(t);
  for (std::size_t i = 0; i < 3 * r; ++i) out.paths[i] = std::move((*absorbed)[i]);
  for (std::size_t i = 3 * r; i < t; ++i) {
    Path p{X[i]};
    for (const Path& piece : pieces[i]) p.insert(p.end(), piece.begin() + 1, piece.end());
    out.paths[i] = std::move(p);
  }
  return out;
}

// Lengths above the base are cut down: a prefix x_i..z_i of length λ, then q
// base-length paths joined by q-1 bridge edges.
Expected<PathBundle> connect_absorbing(const HostGraph& g, const VertexList& X, const VertexList& Y,
                                       std::size_t length, const VertexList& W, const SpanningParams& params) {
  const std::size_t l0 = params.base_length;
  if (length == l0) return connect_absorbing_base(g, X, Y, length, W, params);
  const std::size_t t = X.size();
  const std::size_t q = length / (l0 + 1);
  const std::size_t lambda = length - q * (l0 + 1) + 1;
  Rng rng(derive_seed(params.connector.seed, "spanning-reduce"));
  const ArcView view = g.arcs();

  VertexList pool = W;
  rng.shuffle(pool);
  std::vector<Path> prefix(t);
  std::vector<char> taken(g.n(), 0);
  if (lambda == 1) {
    auto sm = star_matching(view, X, pool, 1, Direction::Undirected);
    if (!sm.ok()) return nest("spanning/reduce", sm.error());
    for (std::size_t i = 0; i < t; ++i) prefix[i] = {X[i], sm->leaves[i][0]};
  } else {
    ConnectionRequest rq;
    rq.sources = X;
    rq.targets.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(t));
    rq.lengths.assign(t, lambda);
    rq.workspace.assign(pool.begin() + static_cast<std::ptrdiff_t>(t), pool.end());
    ConnectorParams cp = params.connector;
    cp.seed = derive_seed(params.connector.seed, "spanning-prefix");
    auto b = connect_pairs(view, rq, cp);
    if (!b.ok()) return nest("spanning/reduce", b.error());
    prefix = std::move(b->paths);
  }
  for (const Path& p : prefix)
    for (std::size_t j = 1; j < p.size(); ++j) taken[p[j]] = 1;

  // Greedy disjoint bridge edges.
  const std::size_t bridges = t * (q - 1);
  std::vector<Edge> bridge;
  const std::vector<char> in_w = make_mask(g.n(), W);
  VertexList order;
  for (Vertex v : pool)
    if (!taken[v]) order.push_back(v);
  for (Vertex u : order) {
    if (bridge.size() == bridges) break;
    if (taken[u]) continue;
    const auto& nb = g.neighbors(u);
    if (nb.empty()) continue;
    const std::size_t start = rng.below(nb.size());
    for (std::size_t o = 0; o < nb.size(); ++o) {
      Vertex w = nb[(start + o) % nb.size()];
      if (taken[w] || w == u) continue;
      if (!in_w[w]) continue;
      taken[u] = taken[w] = 1;
      bridge.emplace_back(u, w);
      break;
    }
  }
  if (bridge.size() < bridges)
    return fail("spanning/reduce", "found " + std::to_string(bridge.size()) + " of " + std::to_string(bridges) +
                                       " disjoint bridge edges");

  VertexList sx, sy, rest;
  for (std::size_t i = 0; i < t; ++i) {
    Vertex from = prefix[i].back();
    for (std::size_t b = 0; b + 1 < q; ++b) {
      const Edge& e = bridge[i * (q - 1) + b];
      sx.push_back(from);
      sy.push_back(e.first);
      from = e.second;
    }
    sx.push_back(from);
    sy.push_back(Y[i]);
  }
  for (Vertex v : W)
    if (!taken[v]) rest.push_back(v);
  auto base = connect_absorbing_base(g, sx, sy, l0, rest, params);
  if (!base.ok()) return base;

  PathBundle out;
  out.paths.resize(t);
  for (std::size_t i = 0; i < t; ++i) {
    Path p = prefix[i];
    for (std::size_t b = 0; b < q; ++b) {
      const Path& sub = base->paths[i * q + b];
      // The first sub-path continues from z_i; later ones follow a bridge edge.
      p.insert(p.end(), sub.begin() + (b == 0 ? 1 : 0), sub.end());
    }
    out.paths[i] = std::move(p);
  }
  return out;
}

// Empty when the bundle is an exact spanning answer.
std::string spanning_problem(const HostGraph& g, const VertexList& X, const VertexList& Y, std::size_t length,
                             const VertexList& W, const PathBundle& b) {
  if (b.paths.size() != X.size()) return "wrong number of paths";
  std::vector<char> left = make_mask(g.n(), W);
  std::size_t covered = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const Path& p = b.paths[i];
    if (p.size() != length + 1 || p.front() != X[i] || p.back() != Y[i])
      return "path " + std::to_string(i) + " has the wrong shape";
    for (std::size_t j = 0; j + 1 < p.size(); ++j)
      if (!g.has_edge(p[j], p[j + 1])) return "path " + std::to_string(i) + " uses a non-edge";
    for (std::size_t j = 1; j + 1 < p.size(); ++j) {
      if (!left[p[j]]) return "path " + std::to_string(i) + " reuses or leaves the workspace at " + std::to_string(p[j]);
      left[p[j]] = 0;
      ++covered;
    }
  }
  if (covered != W.size()) return "workspace not covered";
  return "";
}

}  // namespace

bool absorbing_applies(std::size_t t, std::size_t length, const SpanningParams& params) {
  const std::size_t l0 = params.base_length;
  if (length < l0 || t == 0) return false;
  const std::size_t q = length == l0 ? 1 : length / (l0 + 1);
  return base_applies(t * q, l0, params);
}

std::optional<Path> hamilton_path_through(const HostGraph& g, Vertex x, Vertex y, const VertexList& block,
                                          std::uint64_t seed, std::uint64_t budget) {
  BlockSolver solver(g);
  Rng rng(seed);
  return solver.solve(x, y, block, rng, budget);
}

Expected<SpanningResult> connect_pairs_spanning(const HostGraph& g, const VertexList& sources,
                                                const VertexList& targets, std::size_t length,
                                                const VertexList& W, const SpanningParams& params) {
  validate_request(g, sources, targets, length, W);
  SpanningMode mode = params.mode;
  if (mode == SpanningMode::Absorbing && !absorbing_applies(sources.size(), length, params))
    throw std::invalid_argument("spanning: instance too small for the absorbing construction");
  if (mode == SpanningMode::Auto)
    mode = absorbing_applies(sources.size(), length, params) ? SpanningMode::Absorbing : SpanningMode::Direct;

  std::optional<Failure> absorbing_failure;
  if (mode == SpanningMode::Absorbing) {
    auto b = connect_absorbing(g, sources, targets, length, W, params);
    if (b.ok()) {
      if (auto bad = spanning_problem(g, sources, targets, length, W, *b); !bad.empty())
        throw std::logic_error("spanning: absorbing construction produced an invalid cover: " + bad);
      return SpanningResult{std::move(*b), SpanningMode::Absorbing};
    }
    if (params.mode == SpanningMode::Absorbing) return b.error();
    absorbing_failure = b.error();
  }
  auto b = connect_direct(g, sources, targets, length, W, params);
  if (b.ok()) {
    if (auto bad = spanning_problem(g, sources, targets, length, W, *b); !bad.empty())
      throw std::logic_error("spanning: direct construction produced an invalid cover: " + bad);
    return SpanningResult{std::move(*b), SpanningMode::Direct};
  }
  if (absorbing_failure)
    return fail("spanning", absorbing_failure->describe() + "; then " + b.error().describe(), b.error().witness);
  return b.error();
}

}  // namespace univ
