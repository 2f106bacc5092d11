#include "univ/robust_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "univ/rng.hpp"

namespace univ {

namespace {

std::size_t template_edges(const FlexibleTemplate& t) {
  std::size_t e = 0;
  for (const auto& row : t.adjacency) e += row.size();
  return e;
}

std::size_t max_left_degree(const FlexibleTemplate& t) {
  std::size_t d = 0;
  for (const auto& row : t.adjacency) d = std::max(d, row.size());
  return d;
}

// Edges of the chain j outside its gadgets, split evenly over d+1 links.
std::vector<std::size_t> link_lengths(std::size_t length, std::size_t gadgets, int k) {
  const std::size_t total = (length - 2) - gadgets * (absorber_size(k) - 1);
  std::vector<std::size_t> out(gadgets + 1, total / (gadgets + 1));
  for (std::size_t i = 0; i < total % (gadgets + 1); ++i) ++out[i];
  return out;
}

}  // namespace

std::size_t robust_set_min_length(const FlexibleTemplate& guide, const RobustSetParams& params) {
  const std::size_t d = max_left_degree(guide);
  return 2 + d * (absorber_size(params.k) - 1) + (d + 1) * params.link_min;
}

std::size_t robust_set_workspace_need(const FlexibleTemplate& guide, std::size_t length,
                                      const RobustSetParams& params) {
  const std::size_t n0 = guide.n0;
  std::size_t link_total = 0;
  for (const auto& row : guide.adjacency) {
    auto ls = link_lengths(length, row.size(), params.k);
    link_total += std::accumulate(ls.begin(), ls.end(), std::size_t{0});
  }
  const double density = params.connector.max_density;
  return 2 * n0 / 3 + absorber_workspace_need(template_edges(guide), params.k, density) +
         static_cast<std::size_t>(std::ceil(static_cast<double>(link_total) / density));
}

Expected<RobustSet> build_robust_set(const HostGraph& g, const VertexList& pool, const VertexList& sources,
                                     const VertexList& targets, const VertexList& W, std::size_t length,
                                     const RobustSetParams& params) {
  if (pool.empty() || pool.size() % 2 != 0) throw std::invalid_argument("robust set: pool size must be 2r");
  const std::size_t r = pool.size() / 2;
  if (sources.size() != 3 * r || targets.size() != 3 * r)
    throw std::invalid_argument("robust set: need 3r endpoint pairs");

  auto guide = TemplateCache::instance().get(3 * r, params.template_seed, params.template_options);
  if (!guide.ok()) return nest("build_robust_set", guide.error());
  if (length < robust_set_min_length(*guide, params))
    throw std::invalid_argument("robust set: length " + std::to_string(length) + " below the chain minimum " +
                                std::to_string(robust_set_min_length(*guide, params)));
  const std::size_t need = robust_set_workspace_need(*guide, length, params);
  if (W.size() < need)
    throw std::invalid_argument("robust set: workspace of " + std::to_string(W.size()) + " below the required " +
                                std::to_string(need));

  RobustSet rs;
  rs.length = length;
  rs.pool = pool;
  rs.sources = sources;
  rs.targets = targets;
  rs.guide = *guide;

  VertexList ws = W;
  Rng rng(derive_seed(params.connector.seed, "robust-set"));
  rng.shuffle(ws);
  rs.extra.assign(ws.begin(), ws.begin() + static_cast<std::ptrdiff_t>(2 * r));
  ws.erase(ws.begin(), ws.begin() + static_cast<std::ptrdiff_t>(2 * r));

  // Right template index i stands for extra[i] (i < 2r) or pool[i - 2r].
  auto right_vertex = [&](int i) {
    return i < static_cast<int>(2 * r) ? rs.extra[static_cast<std::size_t>(i)]
                                       : pool[static_cast<std::size_t>(i) - 2 * r];
  };
  const auto right_adj = rs.guide.right_adjacency();
  VertexList absorbed;
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < right_adj.size(); ++i) {
    absorbed.push_back(right_vertex(static_cast<int>(i)));
    counts.push_back(right_adj[i].size());
  }

  // Workspace for gadgets and for links, proportional to their needs.
  const double density = params.connector.max_density;
  const double gadget_need =
      static_cast<double>(absorber_workspace_need(template_edges(rs.guide), params.k, density));
  const double link_need = static_cast<double>(need - 2 * r) - gadget_need;
  const std::size_t gadget_share = static_cast<std::size_t>(
      std::floor(static_cast<double>(ws.size()) * gadget_need / (gadget_need + link_need)));
  VertexList gadget_ws(ws.begin(), ws.begin() + static_cast<std::ptrdiff_t>(gadget_share));
  VertexList link_ws(ws.begin() + static_cast<std::ptrdiff_t>(gadget_share), ws.end());

  ConnectorParams cp = params.connector;
  cp.seed = derive_seed(params.connector.seed, "robust-set-gadgets");
  auto batch = build_absorbers(g, absorbed, counts, gadget_ws, params.k, cp);
  if (!batch.ok()) return nest("build_robust_set", batch.error());

  // Hand out gadgets to chains in template order.
  std::vector<std::size_t> next(right_adj.size(), 0);
  rs.chains.resize(3 * r);
  ConnectionRequest links;
  for (std::size_t j = 0; j < 3 * r; ++j) {
    auto& chain = rs.chains[j];
    for (int i : rs.guide.adjacency[j]) {
      chain.labels.push_back(i);
      chain.gadgets.push_back((*batch).absorbers[static_cast<std::size_t>(i)][next[static_cast<std::size_t>(i)]++]);
    }
    auto ls = link_lengths(length, chain.gadgets.size(), params.k);
    for (std::size_t m = 0; m <= chain.gadgets.size(); ++m) {
      links.sources.push_back(m == 0 ? sources[j] : chain.gadgets[m - 1].s);
      links.targets.push_back(m == chain.gadgets.size() ? targets[j] : chain.gadgets[m].r);
      links.lengths.push_back(ls[m]);
    }
  }
  std::vector<char> taken(g.n(), 0);
  links.workspace = link_ws;
  links.workspace.insert(links.workspace.end(), batch->unused.begin(), batch->unused.end());
  cp.seed = derive_seed(params.connector.seed, "robust-set-links");
  auto routed = connect_pairs(g.arcs(), links, cp);
  if (!routed.ok()) return nest("build_robust_set/links", routed.error());

  std::size_t at = 0;
  for (auto& chain : rs.chains)
    for (std::size_t m = 0; m <= chain.gadgets.size(); ++m) chain.links.push_back(routed->paths[at++]);

  for (const auto& chain : rs.chains) {
    for (const auto& a : chain.gadgets)
      for (Vertex v : a.R) taken[v] = 1;
    for (const auto& p : chain.links)
      for (std::size_t i = 1; i + 1 < p.size(); ++i) taken[p[i]] = 1;
  }
  for (Vertex v : rs.extra) taken[v] = 1;
  for (Vertex v : W)
    if (taken[v]) rs.covered.push_back(v);
    else rs.unused.push_back(v);
  std::sort(rs.covered.begin(), rs.covered.end());
  return rs;
}

Expected<std::vector<Path>> query_robust_set(const RobustSet& rs, const VertexList& chosen) {
  const std::size_t r = rs.r();
  if (chosen.size() != r) throw std::invalid_argument("robust set query: |A'| must be r");
  std::vector<int> z;
  for (Vertex v : chosen) {
    auto it = std::find(rs.pool.begin(), rs.pool.end(), v);
    if (it == rs.pool.end())
      throw std::invalid_argument("robust set query: vertex " + std::to_string(v) + " is not in the pool");
    z.push_back(static_cast<int>(it - rs.pool.begin()));
  }
  std::sort(z.begin(), z.end());
  if (std::adjacent_find(z.begin(), z.end()) != z.end())
    throw std::invalid_argument("robust set query: repeated vertex");
  auto match = template_matching(rs.guide, z);
  if (!match.ok()) return nest("query_robust_set", match.error());

  std::vector<Path> out;
  for (std::size_t j = 0; j < rs.chains.size(); ++j) {
    const auto& chain = rs.chains[j];
    Path p = chain.links[0];
    for (std::size_t m = 0; m < chain.gadgets.size(); ++m) {
      const auto& a = chain.gadgets[m];
      const Path& through = chain.labels[m] == (*match)[j] ? a.path_with : a.path_without;
      p.insert(p.end(), through.begin() + 1, through.end());
      p.insert(p.end(), chain.links[m + 1].begin() + 1, chain.links[m + 1].end());
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace univ
