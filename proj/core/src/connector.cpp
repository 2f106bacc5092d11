#include "univ/connector.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "univ/expansion.hpp"
#include "univ/matching.hpp"

namespace univ {

namespace {

// Epoch-stamped membership set over [0,n), cleared in O(1).
class StampSet {
 public:
  explicit StampSet(std::size_t n = 0) : stamp_(n, 0) {}
  void ensure(std::size_t n) {
    if (stamp_.size() < n) stamp_.resize(n, 0);
  }
  void clear() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }
  bool contains(Vertex v) const { return stamp_[v] == epoch_; }
  void insert(Vertex v) { stamp_[v] = epoch_; }
  void erase(Vertex v) { stamp_[v] = 0; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 1;
};

std::size_t smallest_root(std::size_t count, std::size_t levels) {
  // Least r >= 1 with r^levels >= count.
  if (levels == 0 || count <= 1) return count == 0 ? 1 : count;
  std::size_t r = 1;
  for (;;) {
    long double power = 1;
    for (std::size_t i = 0; i < levels && power < count; ++i) power *= static_cast<long double>(r);
    if (power >= static_cast<long double>(count)) return r;
    ++r;
  }
}

std::size_t auto_cap(std::size_t pool_size, std::size_t depth) {
  std::size_t per_level = pool_size / std::max<std::size_t>(1, depth);
  return std::clamp<std::size_t>(per_level, 1, 64);
}

}  // namespace

ConnectorParams ConnectorParams::from_profile(const ConstantsProfile& profile, std::size_t n,
                                              std::uint64_t seed) {
  ConnectorParams p;
  p.frontier_cap = static_cast<std::size_t>(profile.frontier_cap);
  p.shrink_ratio = profile.shrink_ratio_for(n);
  p.rounds = profile.connector_rounds;
  p.reserve_fraction = profile.reserve_fraction;
  p.star_size = profile.star_size_for(n);
  p.min_length = profile.connect_min;
  p.max_length = profile.connect_max;
  p.seed = seed;
  p.partition_probes = static_cast<std::size_t>(profile.partition_probes);
  p.partition_retries = profile.partition_retries;
  p.exact_budget = profile.search_budget;
  return p;
}

Verdict verify_bundle(const ArcView& g, const ConnectionRequest& request, const PathBundle& bundle) {
  const std::size_t t = request.sources.size();
  if (bundle.paths.size() != t)
    return Verdict::reject("bundle has " + std::to_string(bundle.paths.size()) + " paths, expected " +
                           std::to_string(t));
  std::vector<char> in_w(g.n, 0), endpoint(g.n, 0), used(g.n, 0);
  for (Vertex w : request.workspace) in_w[w] = 1;
  for (std::size_t i = 0; i < t; ++i) endpoint[request.sources[i]] = endpoint[request.targets[i]] = 1;
  for (std::size_t i = 0; i < t; ++i) {
    const Path& path = bundle.paths[i];
    const std::string tag = "path " + std::to_string(i) + ": ";
    if (path.size() != request.lengths[i] + 1)
      return Verdict::reject(tag + "has " + std::to_string(path.size() - 1) + " edges, expected " +
                             std::to_string(request.lengths[i]));
    if (path.front() != request.sources[i] || path.back() != request.targets[i])
      return Verdict::reject(tag + "wrong endpoints");
    for (std::size_t j = 0; j + 1 < path.size(); ++j)
      if (!g.has_arc(path[j], path[j + 1]))
        return Verdict::reject(tag + "missing arc " + std::to_string(path[j]) + "->" +
                               std::to_string(path[j + 1]));
    for (std::size_t j = 1; j + 1 < path.size(); ++j) {
      Vertex v = path[j];
      if (!in_w[v]) return Verdict::reject(tag + "interior vertex " + std::to_string(v) + " outside W");
      if (endpoint[v]) return Verdict::reject(tag + "interior vertex " + std::to_string(v) + " is an endpoint");
      if (used[v]) return Verdict::reject(tag + "vertex " + std::to_string(v) + " reused");
      used[v] = 1;
    }
  }
  return Verdict::accept();
}

DivideResult divide(const VertexList& X, const VertexList& Y,
                    const std::function<bool(Vertex, Vertex)>& reach, std::size_t k) {
  if (k == 0) throw std::invalid_argument("divide: k must be positive");
  VertexList xs = X;
  std::sort(xs.begin(), xs.end());
  if (xs.empty()) return {};
  k = std::min(k, xs.size());
  const std::size_t part = (xs.size() + k - 1) / k;
  DivideResult best;
  std::size_t best_count = 0;
  bool have = false;
  for (std::size_t start = 0; start < xs.size(); start += part) {
    VertexList chunk(xs.begin() + static_cast<long>(start),
                     xs.begin() + static_cast<long>(std::min(xs.size(), start + part)));
    VertexList reached;
    for (Vertex y : Y)
      for (Vertex x : chunk)
        if (reach(x, y)) {
          reached.push_back(y);
          break;
        }
    if (!have || reached.size() > best_count) {
      have = true;
      best_count = reached.size();
      best = {std::move(chunk), std::move(reached)};
    }
  }
  return best;
}

Path LayeredReachability::trace(Vertex v) const {
  Path out{v};
  for (auto it = parent.find(v); it != parent.end(); it = parent.find(it->second)) out.push_back(it->second);
  return out;
}

Expected<LayeredReachability> grow_layers(const ArcView& g, const VertexList& sources,
                                          const std::vector<std::size_t>& depths,
                                          const std::vector<char>& pool, Direction dir,
                                          std::size_t frontier_cap, int shrink_ratio) {
  if (sources.size() != depths.size()) throw std::invalid_argument("grow_layers: one depth per source");
  if (sources.empty()) return fail("grow_layers", "no sources");
  if (shrink_ratio < 1) shrink_ratio = 1;
  static thread_local StampSet used, seen;
  used.ensure(g.n);
  seen.ensure(g.n);
  used.clear();

  // Survivors are source positions sorted by source vertex (ties by position).
  std::vector<std::size_t> surv(sources.size());
  std::iota(surv.begin(), surv.end(), 0);
  std::sort(surv.begin(), surv.end(), [&](auto a, auto b) {
    return sources[a] != sources[b] ? sources[a] < sources[b] : a < b;
  });
  if (frontier_cap == 0) {
    std::size_t pool_size = static_cast<std::size_t>(std::count(pool.begin(), pool.end(), 1));
    frontier_cap = auto_cap(pool_size, *std::max_element(depths.begin(), depths.end()));
  }

  struct Entry {
    Vertex v;
    std::size_t owner;
  };
  std::vector<Entry> frontier;
  for (std::size_t i : surv) frontier.push_back({sources[i], i});
  std::vector<std::vector<Entry>> history{frontier};
  std::unordered_map<Vertex, Vertex> parent;
  std::vector<std::size_t> owner_count(sources.size(), 0);

  for (std::size_t level = 0;; ++level) {
    // A survivor that has reached its own depth finishes; prefer the largest frontier.
    std::fill(owner_count.begin(), owner_count.end(), 0);
    for (const auto& e : frontier) ++owner_count[e.owner];
    std::size_t best = sources.size();
    for (std::size_t i : surv)
      if (depths[i] == level && owner_count[i] > 0 && (best == sources.size() || owner_count[i] > owner_count[best]))
        best = i;
    if (best != sources.size()) {
      LayeredReachability r;
      r.index = best;
      r.direction = dir;
      for (const auto& lvl : history) {
        VertexList vs;
        for (const auto& e : lvl)
          if (e.owner == best) vs.push_back(e.v);
        r.levels.push_back(std::move(vs));
      }
      for (std::size_t l = 1; l < r.levels.size(); ++l)
        for (Vertex v : r.levels[l]) r.parent.emplace(v, parent.at(v));
      return r;
    }
    if (frontier.empty())
      return fail("grow_layers", "frontier starvation at level " + std::to_string(level) + " with " +
                                     std::to_string(surv.size()) + " surviving sources");

    // Expand: scanning the frontier in vertex order gives each new vertex its
    // smallest-index parent.
    seen.clear();
    std::vector<Entry> cand;
    std::vector<Vertex> cand_parent;
    for (const auto& e : frontier)
      for (Vertex w : g.neighbors(e.v, dir))
        if (pool[w] && !used.contains(w) && !seen.contains(w)) {
          seen.insert(w);
          cand.push_back({w, e.owner});
          cand_parent.push_back(e.v);
        }
    std::vector<std::size_t> order(cand.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return cand[a].v < cand[b].v; });

    // Divide: shrink the survivors so that a single one is left by the time
    // the shallowest survivor reaches its depth.
    if (surv.size() > 1) {
      std::size_t min_depth = depths[surv.front()];
      for (std::size_t i : surv) min_depth = std::min(min_depth, depths[i]);
      std::size_t levels_left = min_depth - level;
      std::size_t rho = std::max<std::size_t>(static_cast<std::size_t>(shrink_ratio),
                                              smallest_root(surv.size(), levels_left));
      if (levels_left <= 1) rho = surv.size();
      rho = std::min(rho, surv.size());
      const std::size_t part = (surv.size() + rho - 1) / rho;
      std::vector<std::size_t> part_of(sources.size(), 0);
      for (std::size_t j = 0; j < surv.size(); ++j) part_of[surv[j]] = j / part;
      std::vector<std::size_t> counts((surv.size() + part - 1) / part, 0);
      for (const auto& e : cand) ++counts[part_of[e.owner]];
      std::size_t chosen = static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
      std::vector<std::size_t> kept;
      for (std::size_t j = 0; j < surv.size(); ++j)
        if (j / part == chosen) kept.push_back(surv[j]);
      surv = std::move(kept);
      std::vector<char> alive(sources.size(), 0);
      for (std::size_t i : surv) alive[i] = 1;
      std::vector<std::size_t> filtered;
      for (std::size_t idx : order)
        if (alive[cand[idx].owner]) filtered.push_back(idx);
      order = std::move(filtered);
    }
    if (order.empty())
      return fail("grow_layers", "frontier starvation at level " + std::to_string(level + 1) + " with " +
                                     std::to_string(surv.size()) + " surviving sources");
    if (order.size() > frontier_cap) order.resize(frontier_cap);

    frontier.clear();
    for (std::size_t idx : order) {
      frontier.push_back(cand[idx]);
      used.insert(cand[idx].v);
      parent[cand[idx].v] = cand_parent[idx];
    }
    std::vector<char> has_frontier(sources.size(), 0);
    for (const auto& e : frontier) has_frontier[e.owner] = 1;
    std::erase_if(surv, [&](std::size_t i) { return !has_frontier[i]; });
    history.push_back(frontier);
  }
}

std::optional<Path> find_exact_path(const ArcView& g, Vertex x, Vertex y, std::size_t length,
                                    const std::vector<char>& free, std::uint64_t budget) {
  if (length == 0 || x == y) return std::nullopt;
  if (length == 1) {
    if (g.has_arc(x, y)) return Path{x, y};
    return std::nullopt;
  }
  // dist[v]: fewest arcs from v to y through free vertices.
  constexpr std::size_t kInf = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(g.n, kInf);
  std::deque<Vertex> queue{y};
  dist[y] = 0;
  std::size_t reachable = 0;
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    for (Vertex w : g.in_neighbors(v))
      if (dist[w] == kInf && free[w] && w != x && w != y) {
        dist[w] = dist[v] + 1;
        ++reachable;
        queue.push_back(w);
      }
  }
  if (reachable + 1 < length) return std::nullopt;
  const bool warnsdorff = reachable <= 64;
  std::vector<char> on_path(g.n, 0);
  Path path{x};
  on_path[x] = 1;
  std::uint64_t nodes = 0;
  auto onward = [&](Vertex w) {
    std::size_t c = 0;
    for (Vertex u : g.out_neighbors(w)) c += (dist[u] != kInf && !on_path[u]) ? 1 : 0;
    return c;
  };
  auto rec = [&](auto&& self, Vertex v, std::size_t remaining) -> bool {
    if (++nodes > budget) return false;
    if (remaining == 1) return g.has_arc(v, y);
    std::vector<Vertex> next;
    for (Vertex w : g.out_neighbors(v))
      if (dist[w] != kInf && dist[w] <= remaining - 1 && !on_path[w] && w != y) next.push_back(w);
    if (warnsdorff) {
      std::vector<std::pair<std::size_t, Vertex>> keyed;
      for (Vertex w : next) keyed.emplace_back(onward(w), w);
      std::sort(keyed.begin(), keyed.end());
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = keyed[i].second;
    }
    for (Vertex w : next) {
      on_path[w] = 1;
      path.push_back(w);
      if (self(self, w, remaining - 1)) return true;
      path.pop_back();
      on_path[w] = 0;
      if (nodes > budget) return false;
    }
    return false;
  };
  if (!rec(rec, x, length)) return std::nullopt;
  path.push_back(y);
  return path;
}

// ------------------------------------------------------------------ Router

namespace detail {

Router::Router(const ArcView& g, const VertexList& workspace, const ConnectorParams& params)
    : g_(g), params_(params), free_(g.n, 0) {
  for (Vertex w : workspace) {
    if (!free_[w]) ++free_count_;
    free_[w] = 1;
  }
}

VertexList Router::free_vertices() const {
  VertexList out;
  for (Vertex v = 0; v < g_.n; ++v)
    if (free_[v]) out.push_back(v);
  return out;
}

void Router::take(const Path& path) {
  for (std::size_t j = 1; j + 1 < path.size(); ++j) {
    if (!free_[path[j]]) throw std::logic_error("Router::take: vertex already used");
    free_[path[j]] = 0;
    --free_count_;
  }
}

void Router::release(const Path& path) {
  for (std::size_t j = 1; j + 1 < path.size(); ++j) {
    if (free_[path[j]]) throw std::logic_error("Router::release: vertex already free");
    free_[path[j]] = 1;
    ++free_count_;
  }
}

Expected<SinglePairResult> Router::connect_one(const VertexList& X, const VertexList& Y,
                                               const std::vector<std::size_t>& lengths) {
  const std::size_t t = X.size();
  if (Y.size() != t || lengths.size() != t)
    throw std::invalid_argument("connect_single_pair: X, Y and lengths must have equal size");
  if (t == 0) return fail("connect_single_pair", "no pairs");
  // Interleave the free vertices into the two halves.
  std::vector<char> pool_f(g_.n, 0), pool_b(g_.n, 0);
  bool flip = false;
  for (Vertex v = 0; v < g_.n; ++v)
    if (free_[v]) {
      (flip ? pool_b : pool_f)[v] = 1;
      flip = !flip;
    }
  std::vector<std::size_t> depth_f(t), depth_b(t);
  for (std::size_t i = 0; i < t; ++i) {
    if (lengths[i] == 0) throw std::invalid_argument("connect_single_pair: lengths must be positive");
    depth_f[i] = (lengths[i] + 1) / 2 - 1;
    depth_b[i] = lengths[i] / 2;
  }
  const Direction back = g_.directed ? Direction::In : Direction::Undirected;
  const std::size_t cap = params_.frontier_cap;

  std::vector<std::optional<LayeredReachability>> fwd(t), bwd(t);
  std::vector<char> open_f(t, 1), open_b(t, 1), tried(t, 0);
  bool exhausted_f = false, exhausted_b = false;
  std::string last_failure;

  auto run = [&](bool forward, const std::vector<std::size_t>& subset) -> std::optional<std::size_t> {
    VertexList src;
    std::vector<std::size_t> dep;
    for (std::size_t i : subset) {
      src.push_back(forward ? X[i] : Y[i]);
      dep.push_back(forward ? depth_f[i] : depth_b[i]);
    }
    auto r = grow_layers(g_, src, dep, forward ? pool_f : pool_b, forward ? Direction::Out : back, cap,
                         params_.shrink_ratio);
    if (!r.ok()) {
      last_failure = (forward ? "forward " : "backward ") + r.error().reason;
      return std::nullopt;
    }
    std::size_t idx = subset[r->index];
    (forward ? fwd : bwd)[idx] = std::move(*r);
    (forward ? open_f : open_b)[idx] = 0;
    return idx;
  };
  auto open_list = [&](const std::vector<char>& open) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < t; ++i)
      if (open[i]) out.push_back(i);
    return out;
  };
  auto bridge = [&](std::size_t i) -> std::optional<Path> {
    tried[i] = 1;
    const VertexList& zf = fwd[i]->levels.back();
    const VertexList& zb = bwd[i]->levels.back();
    for (Vertex a : zf)
      for (Vertex b : zb)
        if (g_.has_arc(a, b)) {
          Path head = fwd[i]->trace(a);
          std::reverse(head.begin(), head.end());
          Path tail = bwd[i]->trace(b);
          head.insert(head.end(), tail.begin(), tail.end());
          return head;
        }
    last_failure = "no bridging edge between terminal frontiers of sizes " + std::to_string(zf.size()) +
                   " and " + std::to_string(zb.size());
    return std::nullopt;
  };
  auto try_bridges = [&]() -> std::optional<SinglePairResult> {
    for (std::size_t i = 0; i < t; ++i)
      if (fwd[i] && bwd[i] && !tried[i])
        if (auto p = bridge(i)) return SinglePairResult{i, std::move(*p)};
    return std::nullopt;
  };

  while (!(exhausted_f && exhausted_b)) {
    for (bool forward : {true, false}) {
      bool& exhausted = forward ? exhausted_f : exhausted_b;
      if (exhausted) continue;
      auto subset = open_list(forward ? open_f : open_b);
      if (subset.empty()) {
        exhausted = true;
        continue;
      }
      auto idx = run(forward, subset);
      if (!idx) {
        exhausted = true;
        continue;
      }
      // Grow the other side from the winner alone before widening the search.
      auto& other_open = forward ? open_b : open_f;
      if (other_open[*idx]) run(!forward, {*idx});
      if (auto r = try_bridges()) return *r;
    }
  }
  // Small or exhausted pools: bounded exhaustive search over the whole free set.
  if (params_.exact_budget > 0)
    for (std::size_t i = 0; i < t; ++i)
      if (auto p = find_exact_path(g_, X[i], Y[i], lengths[i], free_, params_.exact_budget))
        return SinglePairResult{i, std::move(*p)};
  return fail("connect_single_pair", last_failure.empty() ? "no connection found" : last_failure);
}

}  // namespace detail

Expected<SinglePairResult> connect_single_pair(const ArcView& g, const VertexList& X, const VertexList& Y,
                                               const std::vector<std::size_t>& lengths,
                                               const VertexList& W, const ConnectorParams& params) {
  auto endpoints = make_mask(g.n, X);
  for (Vertex y : Y) endpoints[y] = 1;
  for (Vertex w : W)
    if (endpoints[w]) throw std::invalid_argument("connect_single_pair: workspace meets an endpoint");
  detail::Router router(g, W, params);
  return router.connect_one(X, Y, lengths);
}

namespace {

void validate_request(const ArcView& g, const ConnectionRequest& rq, const ConnectorParams& params) {
  const std::size_t t = rq.sources.size();
  if (rq.targets.size() != t || rq.lengths.size() != t)
    throw std::invalid_argument("connection request: sources, targets and lengths differ in size");
  std::vector<char> src(g.n, 0), dst(g.n, 0), ws(g.n, 0);
  for (std::size_t i = 0; i < t; ++i) {
    Vertex x = rq.sources[i], y = rq.targets[i];
    if (x >= g.n || y >= g.n) throw std::invalid_argument("connection request: endpoint out of range");
    if (src[x]) throw std::invalid_argument("connection request: repeated source " + std::to_string(x));
    if (dst[y]) throw std::invalid_argument("connection request: repeated target " + std::to_string(y));
    if (x == y) throw std::invalid_argument("connection request: pair with equal endpoints");
    src[x] = dst[y] = 1;
    if (rq.lengths[i] < params.min_length || rq.lengths[i] > params.max_length)
      throw std::invalid_argument("connection request: length " + std::to_string(rq.lengths[i]) +
                                  " outside the configured band");
  }
  for (Vertex w : rq.workspace) {
    if (w >= g.n) throw std::invalid_argument("connection request: workspace vertex out of range");
    if (src[w] || dst[w]) throw std::invalid_argument("connection request: workspace meets an endpoint");
    if (ws[w]) throw std::invalid_argument("connection request: repeated workspace vertex");
    ws[w] = 1;
  }
  std::size_t total = std::accumulate(rq.lengths.begin(), rq.lengths.end(), std::size_t{0});
  if (static_cast<double>(total) > params.max_density * static_cast<double>(rq.workspace.size()))
    throw std::invalid_argument("connection request: total length " + std::to_string(total) +
                                " exceeds the allowed share of |W| = " + std::to_string(rq.workspace.size()));
}

}  // namespace

Expected<PathBundle> connect_pairs(const ArcView& g, const ConnectionRequest& rq, const ConnectorParams& params) {
  validate_request(g, rq, params);
  const std::size_t t = rq.sources.size();
  PathBundle bundle;
  bundle.paths.resize(t);
  if (t == 0) return bundle;

  // Main pool U plus reserve pools W_1..W_R (source side), Z_1..Z_R (target side).
  const std::size_t max_parts = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(std::max<std::size_t>(g.n, 2))))));
  std::size_t rounds = static_cast<std::size_t>(std::max(0, params.rounds));
  while (rounds > 0 && 2 * rounds + 1 > max_parts) --rounds;
  std::size_t pool = rounds == 0 ? 0
                                 : static_cast<std::size_t>(std::floor(static_cast<double>(rq.workspace.size()) *
                                                                       params.reserve_fraction / (2.0 * rounds)));
  if (pool == 0) rounds = 0;
  std::vector<std::size_t> sizes{rq.workspace.size() - 2 * rounds * pool};
  sizes.insert(sizes.end(), 2 * rounds, pool);
  auto parts = split_expanding(g, rq.workspace, sizes, 8.0, derive_seed(params.seed, "connect-split"),
                               params.partition_retries, params.partition_probes);
  if (!parts.ok()) return nest("connect_pairs", parts.error());

  detail::Router router(g, (*parts)[0], params);
  std::vector<std::size_t> open(t);
  std::iota(open.begin(), open.end(), 0);

  auto saturate = [&](const VertexList& xs, const VertexList& ys, const std::vector<std::size_t>& lens,
                      const std::vector<std::size_t>& owner, auto&& on_success) {
    std::vector<char> alive(xs.size(), 1);
    for (;;) {
      VertexList sx, sy;
      std::vector<std::size_t> sl, map;
      for (std::size_t j = 0; j < xs.size(); ++j)
        if (alive[j]) {
          sx.push_back(xs[j]);
          sy.push_back(ys[j]);
          sl.push_back(lens[j]);
          map.push_back(j);
        }
      if (sx.empty()) return;
      auto r = router.connect_one(sx, sy, sl);
      if (!r.ok()) return;
      router.take(r->path);
      std::size_t j = map[r->index];
      on_success(owner[j], std::move(r->path));
      for (std::size_t q = 0; q < xs.size(); ++q)
        if (owner[q] == owner[j]) alive[q] = 0;
    }
  };

  {
    VertexList xs, ys;
    std::vector<std::size_t> lens;
    for (std::size_t i : open) {
      xs.push_back(rq.sources[i]);
      ys.push_back(rq.targets[i]);
      lens.push_back(rq.lengths[i]);
    }
    saturate(xs, ys, lens, open, [&](std::size_t i, Path p) { bundle.paths[i] = std::move(p); });
  }
  auto pending = [&] {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < t; ++i)
      if (bundle.paths[i].empty()) out.push_back(i);
    return out;
  };

  for (std::size_t round = 0; round < rounds; ++round) {
    auto left = pending();
    std::erase_if(left, [&](std::size_t i) { return rq.lengths[i] < 3; });
    if (left.empty()) break;
    const VertexList& wpool = (*parts)[1 + round];
    const VertexList& zpool = (*parts)[1 + rounds + round];
    // Stars around the leftover endpoints; partial stars are used as they come.
    auto stars = [&](bool source_side) {
      std::vector<int> pos(g.n, -1);
      const VertexList& leaves = source_side ? wpool : zpool;
      for (std::size_t q = 0; q < leaves.size(); ++q) pos[leaves[q]] = static_cast<int>(q);
      std::vector<std::vector<int>> adj(left.size());
      for (std::size_t a = 0; a < left.size(); ++a) {
        Vertex centre = source_side ? rq.sources[left[a]] : rq.targets[left[a]];
        const auto& nb = source_side ? g.out_neighbors(centre) : g.in_neighbors(centre);
        for (Vertex w : nb)
          if (pos[w] >= 0) adj[a].push_back(pos[w]);
      }
      auto m = capacitated_matching(adj, std::vector<int>(left.size(), std::max(1, params.star_size)),
                                    leaves.size());
      std::vector<VertexList> out(left.size());
      for (std::size_t a = 0; a < left.size(); ++a)
        for (int q : m.assigned[a]) out[a].push_back(leaves[q]);
      return out;
    };
    auto out_stars = stars(true);
    auto in_stars = stars(false);
    VertexList xs, ys;
    std::vector<std::size_t> lens, owner;
    for (std::size_t a = 0; a < left.size(); ++a) {
      std::size_t c = std::min(out_stars[a].size(), in_stars[a].size());
      for (std::size_t j = 0; j < c; ++j) {
        xs.push_back(out_stars[a][j]);
        ys.push_back(in_stars[a][j]);
        lens.push_back(rq.lengths[left[a]] - 2);
        owner.push_back(left[a]);
      }
    }
    saturate(xs, ys, lens, owner, [&](std::size_t i, Path p) {
      Path full{rq.sources[i]};
      full.insert(full.end(), p.begin(), p.end());
      full.push_back(rq.targets[i]);
      bundle.paths[i] = std::move(full);
    });
  }

  auto left = pending();
  if (!left.empty()) {
    VertexList witness;
    for (std::size_t i : left) witness.push_back(rq.sources[i]);
    return fail("connect_pairs", std::to_string(left.size()) + " of " + std::to_string(t) +
                                     " pairs unconnected after " + std::to_string(rounds) +
                                     " re-anchoring rounds",
                witness);
  }
  auto check = verify_bundle(g, rq, bundle);
  if (!check.ok) throw std::logic_error("connect_pairs produced an invalid bundle: " + check.message);
  return bundle;
}

}  // namespace univ
