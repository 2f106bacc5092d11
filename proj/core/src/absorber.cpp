#include "univ/absorber.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "univ/matching.hpp"
#include "univ/rng.hpp"

namespace univ {

namespace {

Verdict check_walk(const HostGraph& g, const Path& p, Vertex r, Vertex s, VertexList expect, const char* name) {
  if (p.empty() || p.front() != r || p.back() != s)
    return Verdict::reject(std::string(name) + " does not run between the ends");
  for (std::size_t i = 0; i + 1 < p.size(); ++i)
    if (!g.has_edge(p[i], p[i + 1]))
      return Verdict::reject(std::string(name) + " uses non-edge " + std::to_string(p[i]) + "-" +
                             std::to_string(p[i + 1]));
  VertexList seen = p;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    return Verdict::reject(std::string(name) + " repeats a vertex");
  std::sort(expect.begin(), expect.end());
  if (seen != expect) return Verdict::reject(std::string(name) + " has the wrong vertex set");
  return Verdict::accept();
}

}  // namespace

Verdict verify_absorber(const HostGraph& g, const Absorber& a, std::size_t expected_size) {
  if (a.R.size() != expected_size)
    return Verdict::reject("|R| = " + std::to_string(a.R.size()) + ", expected " + std::to_string(expected_size));
  if (std::binary_search(a.R.begin(), a.R.end(), a.v)) return Verdict::reject("v lies inside R");
  auto without = check_walk(g, a.path_without, a.r, a.s, a.R, "path without v");
  if (!without.ok) return without;
  VertexList with = a.R;
  with.push_back(a.v);
  return check_walk(g, a.path_with, a.r, a.s, with, "path with v");
}

Absorber assemble_absorber(Vertex v, const Path& backbone, const std::vector<Path>& rungs, int k) {
  const std::size_t m = 3 * static_cast<std::size_t>(k);
  if (k < 1 || backbone.size() != backbone_length(k) + 1 || rungs.size() != m)
    throw std::invalid_argument("assemble_absorber: wrong gadget shape");
  auto x = [&](std::size_t i) { return backbone[i]; };
  auto y = [&](std::size_t i) { return i == 0 ? backbone[m + 1] : backbone[2 * m + 2 - i]; };
  for (std::size_t i = 1; i <= m; ++i) {
    const Path& p = rungs[i - 1];
    if (p.size() != rung_length(k) + 1 || p.front() != x(i) || p.back() != y(i))
      throw std::invalid_argument("assemble_absorber: rung " + std::to_string(i) + " has the wrong ends");
  }
  auto forward = [&](Path& out, std::size_t i) { out.insert(out.end(), rungs[i - 1].begin(), rungs[i - 1].end()); };
  auto backward = [&](Path& out, std::size_t i) {
    out.insert(out.end(), rungs[i - 1].rbegin(), rungs[i - 1].rend());
  };

  Absorber a;
  a.v = v;
  a.r = x(0);
  a.s = y(0);

  // Without v: odd rungs run x to y, even rungs y to x. Consecutive rungs
  // are joined by backbone edges y_i y_{i+1} or x_i x_{i+1}.
  a.path_without.push_back(x(0));
  for (std::size_t i = 1; i <= m; ++i) {
    if (i % 2 == 1) forward(a.path_without, i);
    else backward(a.path_without, i);
  }
  a.path_without.push_back(y(0));

  // With v: x0 v y1, then odd rungs y to x, even rungs x to y.
  a.path_with = {x(0), v};
  for (std::size_t i = 1; i <= m; ++i) {
    if (i % 2 == 1) backward(a.path_with, i);
    else forward(a.path_with, i);
  }
  a.path_with.push_back(y(0));

  a.R.assign(backbone.begin(), backbone.end());
  for (const auto& p : rungs) a.R.insert(a.R.end(), p.begin() + 1, p.end() - 1);
  std::sort(a.R.begin(), a.R.end());
  return a;
}

std::size_t absorber_workspace_need(std::size_t total, int k, double density) {
  const double n = static_cast<double>(total);
  const double m = 3.0 * k;
  double need = 2.0 * n / density + n * static_cast<double>(backbone_length(k)) / density +
                n * m * static_cast<double>(rung_length(k)) / density;
  return static_cast<std::size_t>(std::ceil(need));
}

Expected<AbsorberBatch> build_absorbers(const HostGraph& g, const VertexList& targets,
                                        const std::vector<std::size_t>& counts, const VertexList& W, int k,
                                        const ConnectorParams& params) {
  if (counts.size() != targets.size()) throw std::invalid_argument("build_absorbers: one count per target");
  if (k < 1) throw std::invalid_argument("build_absorbers: k must be positive");
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  AbsorberBatch batch;
  batch.absorbers.resize(targets.size());
  if (total == 0) {
    batch.unused = W;
    return batch;
  }
  const double density = params.max_density;
  if (absorber_workspace_need(total, k, density) > W.size())
    throw std::invalid_argument("build_absorbers: workspace of " + std::to_string(W.size()) + " too small for " +
                                std::to_string(total) + " gadgets");

  // Anchors are matched into all of W; what remains is split between
  // backbones and rungs in proportion to their total length.
  VertexList pool = W;
  Rng rng(derive_seed(params.seed, "absorber-split"));
  rng.shuffle(pool);
  std::vector<int> sizes;
  for (std::size_t c : counts) sizes.push_back(static_cast<int>(2 * c));
  auto stars = star_matching(g.arcs(), targets, pool, sizes, Direction::Undirected);
  if (!stars.ok()) return nest("build_absorbers/anchors", stars.error());
  std::vector<char> anchor(g.n(), 0);
  for (const auto& leaves : stars->leaves)
    for (Vertex w : leaves) anchor[w] = 1;
  pool.erase(std::remove_if(pool.begin(), pool.end(), [&](Vertex w) { return anchor[w] != 0; }), pool.end());

  const double n = static_cast<double>(total), m = 3.0 * k;
  const double d2 = n * static_cast<double>(backbone_length(k)), d3 = n * m * static_cast<double>(rung_length(k));
  const std::size_t s2 = static_cast<std::size_t>(std::floor(static_cast<double>(pool.size()) * d2 / (d2 + d3)));
  VertexList W2(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s2));
  VertexList W3(pool.begin() + static_cast<std::ptrdiff_t>(s2), pool.end());

  ConnectionRequest backbones;
  std::vector<std::pair<std::size_t, Vertex>> owner;  // (target index, v)
  for (std::size_t i = 0; i < targets.size(); ++i)
    for (std::size_t c = 0; c < counts[i]; ++c) {
      backbones.sources.push_back(stars->leaves[i][2 * c]);
      backbones.targets.push_back(stars->leaves[i][2 * c + 1]);
      backbones.lengths.push_back(backbone_length(k));
      owner.emplace_back(i, targets[i]);
    }
  backbones.workspace = W2;
  ConnectorParams p2 = params;
  p2.seed = derive_seed(params.seed, "absorber-backbones");
  auto q = connect_pairs(g.arcs(), backbones, p2);
  if (!q.ok()) return nest("build_absorbers/backbones", q.error());

  const std::size_t mm = 3 * static_cast<std::size_t>(k);
  ConnectionRequest rungs;
  for (const Path& path : q->paths)
    for (std::size_t i = 1; i <= mm; ++i) {
      rungs.sources.push_back(path[i]);
      rungs.targets.push_back(path[2 * mm + 2 - i]);
      rungs.lengths.push_back(rung_length(k));
    }
  rungs.workspace = W3;
  ConnectorParams p3 = params;
  p3.seed = derive_seed(params.seed, "absorber-rungs");
  auto pr = connect_pairs(g.arcs(), rungs, p3);
  if (!pr.ok()) return nest("build_absorbers/rungs", pr.error());

  std::vector<char> used(g.n(), 0);
  for (std::size_t a = 0; a < owner.size(); ++a) {
    std::vector<Path> rs(pr->paths.begin() + static_cast<std::ptrdiff_t>(a * mm),
                         pr->paths.begin() + static_cast<std::ptrdiff_t>((a + 1) * mm));
    Absorber gadget = assemble_absorber(owner[a].second, q->paths[a], rs, k);
    for (Vertex w : gadget.R) used[w] = 1;
    batch.absorbers[owner[a].first].push_back(std::move(gadget));
  }
  for (Vertex w : W)
    if (!used[w]) batch.unused.push_back(w);
  return batch;
}

}  // namespace univ
