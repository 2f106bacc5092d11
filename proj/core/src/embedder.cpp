#include "univ/embedder.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string_view>

#include "univ/connector.hpp"
#include "univ/cycle_search.hpp"
#include "univ/rng.hpp"
#include "univ/spanning.hpp"

namespace univ {

BoundedParams BoundedParams::from_profile(const ConstantsProfile& profile, std::uint64_t seed) {
  BoundedParams p;
  p.seed = seed;
  p.budget = profile.search_budget;
  p.restarts = profile.search_restarts;
  p.attempts = 1 + std::max(0, profile.phase_retries);
  return p;
}

namespace {

std::string str(std::size_t v) { return std::to_string(v); }

std::uint64_t seed_for(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  return derive_seed(derive_seed(seed, label), index);
}

std::uint64_t seed_for(std::uint64_t seed, std::string_view label, std::string_view key) {
  return derive_seed(derive_seed(seed, label), key);
}

void note(EmbedReport* report, std::string text) {
  if (report) report->notes.push_back(std::move(text));
}

void record(EmbedReport* report, const Failure& f) {
  if (report) report->failures.push_back(f);
}

// Components of a copy grouped by length; take() hands them out in order.
class ComponentPool {
 public:
  explicit ComponentPool(const std::vector<VertexList>& cycles, const std::vector<char>* skip = nullptr) {
    for (std::size_t i = 0; i < cycles.size(); ++i)
      if (!skip || !(*skip)[i]) by_length_[cycles[i].size()].push_back(cycles[i]);
  }

  VertexList take(std::size_t length) {
    auto& v = by_length_[length];
    if (next_[length] >= v.size())
      throw std::logic_error("copy has too few components of length " + str(length));
    return v[next_[length]++];
  }

 private:
  std::map<std::size_t, std::vector<VertexList>> by_length_;
  std::map<std::size_t, std::size_t> next_;
};

// Concatenates paths p_1..p_t, where p_j ends where p_{j+1} starts and p_t ends
// at the start of p_1, into one cyclic vertex sequence.
VertexList stitch(const std::vector<VertexList>& paths) {
  VertexList cycle;
  for (const auto& p : paths) cycle.insert(cycle.end(), p.begin(), p.end() - 1);
  return cycle;
}

}  // namespace

Expected<Embedding> embed_bounded(const HostGraph& first, const HostGraph& second,
                                  const CycleSpec& spec, const BoundedParams& params) {
  const std::size_t n = first.n();
  if (second.n() != n) throw std::invalid_argument("embed_bounded: layers differ in order");
  if (spec.n != n) throw std::invalid_argument("embed_bounded: spec order differs from host order");

  std::vector<VertexList> cycles(spec.lengths.size());
  if (std::all_of(spec.lengths.begin(), spec.lengths.end(), [](std::size_t l) { return l == 1; })) {
    for (Vertex v = 0; v < n; ++v) cycles[v] = {v};
    return embedding_from_cycles(spec, cycles);
  }

  // The length carrying the most vertices is left for the factor step.
  std::size_t s = 1, best = 0;
  for (std::size_t len : spec.lengths) {
    std::size_t mass = len * spec.count(len);
    if (mass > best) best = mass, s = len;
  }

  Failure last = fail("bounded", "no attempt made");
  for (int attempt = 0; attempt < std::max(1, params.attempts); ++attempt) {
    Rng rng(seed_for(params.seed, "bounded", static_cast<std::uint64_t>(attempt)));
    std::vector<char> free(n, 1);
    std::size_t residual = n;
    bool stuck = false;
    for (std::size_t c = 0; c < spec.lengths.size() && !stuck; ++c) {
      std::size_t len = spec.lengths[c];
      if (len == s || len == 1) continue;
      auto found = find_cycle(first, free, len, rng, params.budget);
      if (!found) {
        last = fail("bounded/greedy", "no cycle of length " + str(len) + " in a residual of " +
                                          str(residual) + " vertices");
        stuck = true;
        break;
      }
      for (Vertex v : *found) free[v] = 0;
      residual -= len;
      cycles[c] = std::move(*found);
    }
    if (stuck) continue;

    // Isolated vertices go where they hurt the factor least.
    if (s != 1) {
      std::vector<std::pair<std::size_t, Vertex>> by_degree;
      for (Vertex v = 0; v < n; ++v) {
        if (!free[v]) continue;
        std::size_t d = 0;
        for (Vertex w : second.neighbors(v)) d += free[w];
        by_degree.emplace_back(d, v);
      }
      std::sort(by_degree.begin(), by_degree.end());
      std::size_t next = 0;
      for (std::size_t c = 0; c < spec.lengths.size(); ++c) {
        if (spec.lengths[c] != 1) continue;
        Vertex v = by_degree[next++].second;
        free[v] = 0;
        cycles[c] = {v};
      }
    }

    VertexList S;
    for (Vertex v = 0; v < n; ++v)
      if (free[v]) S.push_back(v);
    FactorParams fp{seed_for(params.seed, "factor", static_cast<std::uint64_t>(attempt)), params.budget,
                    params.restarts};
    auto factor = find_cycle_factor(second, S, s, fp);
    if (!factor.ok()) {
      last = nest("bounded", factor.error());
      continue;
    }
    std::size_t next = 0;
    for (std::size_t c = 0; c < spec.lengths.size(); ++c)
      if (spec.lengths[c] == s) cycles[c] = std::move((*factor)[next++]);
    return embedding_from_cycles(spec, cycles);
  }
  return last;
}

std::vector<std::size_t> segment_lengths(std::size_t z, std::size_t k, std::size_t min_parts) {
  if (k == 0) return {};
  auto balanced = balanced_sum_representation(z, k);
  if (balanced.ok() && balanced->size() >= min_parts) return *balanced;
  const std::size_t t = z / k, r = z % k;
  if (t < std::max<std::size_t>(min_parts, 1) || r > t) return {};
  std::vector<std::size_t> parts(r, k + 1);
  parts.insert(parts.end(), t - r, k);
  return parts;
}

std::size_t choose_segment_length(const CycleSpec& spec, std::size_t cap, std::size_t must_cover) {
  for (std::size_t k = cap; k >= 2; --k) {
    bool all = true;
    for (std::size_t len : spec.lengths)
      if (len > must_cover && segment_lengths(len, k, 2).empty()) {
        all = false;
        break;
      }
    if (all) return k;
  }
  return 0;
}

AuxiliaryDigraph build_auxiliary_digraph(const ExposureLayers& layers, const Embedding& copy,
                                         const LongCycleReduction& reduction) {
  if (!(copy.spec == reduction.reduced))
    throw std::invalid_argument("auxiliary digraph: copy is not a copy of the reduced spec");
  const std::size_t u = reduction.u;
  const std::size_t isolated_needed = std::accumulate(reduction.beta.begin(), reduction.beta.end(), std::size_t{0});
  auto cycles = embedded_cycles(copy);

  AuxiliaryDigraph aux;
  std::vector<std::pair<Vertex, std::size_t>> zs, singles;
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    if (cycles[i].size() == u) zs.emplace_back(cycles[i].front(), i);
    else if (cycles[i].size() == 1) singles.emplace_back(cycles[i].front(), i);
  }
  if (u == 1) singles.clear();
  if (singles.size() < isolated_needed)
    throw std::invalid_argument("auxiliary digraph: copy has " + str(singles.size()) +
                                " isolated vertices, need " + str(isolated_needed));
  std::sort(zs.begin(), zs.end());
  std::sort(singles.begin(), singles.end());
  singles.resize(isolated_needed);

  aux.z_count = zs.size();
  for (auto [s, idx] : zs) {
    aux.pieces.push_back(cycles[idx]);
    aux.components.push_back(idx);
  }
  for (auto [v, idx] : singles) {
    aux.pieces.push_back({v});
    aux.components.push_back(idx);
  }

  const HostGraph& g4 = layers.g4;
  const HostGraph& g5 = layers.g5;
  const std::size_t total = aux.pieces.size();
  std::vector<Edge> arcs;
  for (Vertex a = 0; a < total; ++a)
    for (Vertex b = 0; b < total; ++b) {
      if (a == b) continue;
      bool arc;
      if (aux.is_z(a) || aux.is_z(b)) {
        // Leaving through t, entering through s; for an isolated vertex both are itself.
        arc = g4.has_edge(aux.t_of(a), aux.s_of(b));
      } else {
        Vertex x = aux.s_of(a), y = aux.s_of(b);
        arc = x < y ? g4.has_edge(x, y) : g5.has_edge(x, y);
      }
      if (arc) arcs.emplace_back(a, b);
    }
  aux.digraph = HostDigraph::from_arcs(total, arcs);
  return aux;
}

Embedder::Embedder(const ExposureLayers& layers, ConstantsProfile profile, std::uint64_t seed)
    : layers_(layers), profile_(std::move(profile)), seed_(seed) {
  profile_.validate();
}

Expected<Embedding> Embedder::phase1_copy(const CycleSpec& bounded, EmbedReport* report) {
  const std::size_t n = layers_.n;
  if (bounded.n > n) throw std::invalid_argument("phase 1: bounded part larger than the host");
  std::vector<std::size_t> lengths = bounded.lengths;
  lengths.insert(lengths.end(), n - bounded.n, 1);
  CycleSpec padded = CycleSpec::from_lengths(std::move(lengths));
  const std::string key = padded.id();
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto params = BoundedParams::from_profile(profile_, seed_for(seed_, "phase1", key));
  auto copy = embed_bounded(layers_.g1, layers_.g1, padded, params);
  if (!copy.ok()) {
    record(report, copy.error());
    return nest("phase1", copy.error());
  }
  std::lock_guard<std::mutex> lock(cache_mutex_);
  cache_.emplace(key, *copy);
  return copy;
}

Expected<Embedding> Embedder::embed(const CycleSpec& spec, EmbedReport* report) {
  if (spec.n != layers_.n)
    throw std::invalid_argument("embed: spec has " + str(spec.n) + " vertices, host has " + str(layers_.n));
  Expected<Embedding> result = fail("embed", "not attempted");
  const bool bounded = spec.lengths.empty() || spec.lengths.front() <= profile_.K;
  if (bounded) {
    if (report) report->phase = "bounded";
    // The two halves of the host: G1 ∪ G2 and G3 are independent with the
    // same density, and together they are the whole sample.
    HostGraph first = union_graphs({&layers_.g1, &layers_.g2});
    auto params = BoundedParams::from_profile(profile_, seed_for(seed_, "bounded", spec.id()));
    result = embed_bounded(first, layers_.g3, spec, params);
    if (!result.ok()) record(report, result.error());
  } else if (classify(spec, profile_) == SpecClass::H1) {
    result = embed_h1(spec, report);
  } else {
    result = embed_h2(spec, report);
  }
  if (!result.ok()) return result;
  if (auto v = verify_embedding(layers_.host, spec, *result); !v.ok)
    throw std::logic_error("embed produced an invalid embedding: " + v.message);
  annotate_provenance(*result, layers_);
  return result;
}

Expected<Embedding> Embedder::embed_h1(const CycleSpec& spec, EmbedReport* report) {
  auto parts = split_small_components(spec, profile_);
  if (report) report->phase = "phase1";
  auto copy = phase1_copy(parts.bounded, report);
  if (!copy.ok()) return copy;
  if (report) report->phase = "phase2";
  Expected<Embedding> last = fail("phase2", "not attempted");
  for (int attempt = 0; attempt <= std::max(0, profile_.phase_retries); ++attempt) {
    if (attempt > 0 && report) ++report->retries;
    last = phase2_attempt(spec, *copy, seed_for(seed_, "phase2", static_cast<std::uint64_t>(attempt)), report);
    if (last.ok()) return last;
    record(report, last.error());
  }
  return last;
}

Expected<Embedding> Embedder::phase2_attempt(const CycleSpec& spec, const Embedding& copy,
                                             std::uint64_t seed, EmbedReport* report) {
  const std::size_t n = layers_.n;
  const std::size_t K = profile_.K;
  const std::size_t sigma = choose_segment_length(spec, profile_.phase2_segment, K);
  if (sigma == 0) return fail("phase2", "no segment length splits every cycle longer than K");

  // Which components are rebuilt here and which keep their phase-1 copy.
  std::vector<std::vector<std::size_t>> segments(spec.lengths.size());
  std::vector<char> rebuilt(spec.lengths.size(), 0);
  for (std::size_t c = 0; c < spec.lengths.size(); ++c) {
    std::size_t len = spec.lengths[c];
    if (len <= profile_.short_cutoff) continue;
    segments[c] = segment_lengths(len, sigma, 2);
    if (segments[c].empty()) {
      note(report, "cycle of length " + str(len) + " keeps its phase-1 copy (no split into " + str(sigma) +
                       "/" + str(sigma + 1) + ")");
      continue;
    }
    rebuilt[c] = 1;
  }

  // Phase-1 components kept in place.
  ComponentPool pool(embedded_cycles(copy));
  std::vector<VertexList> cycles(spec.lengths.size());
  std::vector<char> taken(n, 0);
  std::size_t isolated_left = spec.count(1);
  for (std::size_t c = 0; c < spec.lengths.size(); ++c) {
    if (rebuilt[c]) continue;
    std::size_t len = spec.lengths[c];
    if (len == 1) {
      if (isolated_left == 0) continue;
      --isolated_left;
    }
    cycles[c] = pool.take(len);
    for (Vertex v : cycles[c]) taken[v] = 1;
  }

  // Anchors: the t smallest free vertices, handed out cycle by cycle.
  std::size_t t = 0;
  for (const auto& seg : segments) t += seg.size();
  VertexList anchors;
  for (Vertex v = 0; v < n && anchors.size() < t; ++v)
    if (!taken[v]) anchors.push_back(v);
  if (anchors.size() < t) throw std::logic_error("phase 2: not enough vertices for the anchors");
  for (Vertex v : anchors) taken[v] = 1;

  struct Pair {
    std::size_t component, index;
  };
  std::vector<Pair> pairs[2];
  VertexList X[2], Y[2];
  std::size_t need[2] = {0, 0};
  std::size_t next = 0;
  std::vector<std::size_t> first_anchor(spec.lengths.size(), 0);
  for (std::size_t c = 0; c < spec.lengths.size(); ++c) {
    if (!rebuilt[c]) continue;
    first_anchor[c] = next;
    const std::size_t ti = segments[c].size();
    for (std::size_t j = 0; j < ti; ++j) {
      int cls = segments[c][j] == sigma ? 0 : 1;
      pairs[cls].push_back({c, j});
      X[cls].push_back(anchors[next + j]);
      Y[cls].push_back(anchors[next + (j + 1) % ti]);
      need[cls] += segments[c][j] - 1;
    }
    next += ti;
  }

  VertexList W;
  for (Vertex v = 0; v < n; ++v)
    if (!taken[v]) W.push_back(v);
  if (W.size() != need[0] + need[1])
    throw std::logic_error("phase 2: workspace has " + str(W.size()) + " vertices, segments need " +
                           str(need[0] + need[1]));
  for (int cls = 0; cls < 2; ++cls)
    if (!pairs[cls].empty() && 4 * K * need[cls] < n)
      note(report, "segment class " + str(sigma + cls) + " covers " + str(need[cls]) + " < n/4K vertices");

  Rng rng(derive_seed(seed, "split"));
  rng.shuffle(W);
  VertexList part[2] = {VertexList(W.begin(), W.begin() + static_cast<std::ptrdiff_t>(need[0])),
                        VertexList(W.begin() + static_cast<std::ptrdiff_t>(need[0]), W.end())};

  std::vector<std::vector<VertexList>> paths(spec.lengths.size());
  for (std::size_t c = 0; c < spec.lengths.size(); ++c) paths[c].resize(segments[c].size());
  for (int cls = 0; cls < 2; ++cls) {
    if (pairs[cls].empty()) continue;
    std::sort(part[cls].begin(), part[cls].end());
    auto params = SpanningParams::from_profile(profile_, n, seed_for(seed, "spanning", static_cast<std::uint64_t>(cls)));
    auto r = connect_pairs_spanning(layers_.g2, X[cls], Y[cls], sigma + static_cast<std::size_t>(cls), part[cls], params);
    if (!r.ok()) {
      auto f = nest("phase2/class" + str(sigma + cls), r.error());
      f.reason += " (long cycle " + str(pairs[cls].front().component) + " first in class)";
      return f;
    }
    for (std::size_t i = 0; i < pairs[cls].size(); ++i)
      paths[pairs[cls][i].component][pairs[cls][i].index] = std::move(r->bundle.paths[i]);
  }

  for (std::size_t c = 0; c < spec.lengths.size(); ++c) {
    if (!rebuilt[c]) continue;
    cycles[c] = stitch(paths[c]);
    if (cycles[c].size() != spec.lengths[c])
      throw std::logic_error("phase 2: long cycle " + str(c) + " closed with length " + str(cycles[c].size()));
  }
  // Isolated vertices of the spec beyond the copy's genuine ones never occur:
  // every vertex is either kept, an anchor, or in W.
  return embedding_from_cycles(spec, cycles);
}

Expected<Embedding> Embedder::embed_h2(const CycleSpec& spec, EmbedReport* report) {
  auto red = reduce_long_cycles(spec, profile_);
  if (report) report->phase = "phase1";
  auto copy = phase1_copy(red.reduced, report);
  if (!copy.ok()) return copy;
  if (report) report->phase = "phase3";
  Expected<Embedding> last = fail("phase3", "not attempted");
  for (int attempt = 0; attempt <= std::max(0, profile_.phase_retries); ++attempt) {
    if (attempt > 0 && report) ++report->retries;
    if (report) report->long_cycles.clear();
    last = phase3_attempt(spec, red, *copy, seed_for(seed_, "phase3", static_cast<std::uint64_t>(attempt)),
                          report);
    if (last.ok()) return last;
    record(report, last.error());
  }
  return last;
}

Expected<Embedding> Embedder::phase3_attempt(const CycleSpec& spec, const LongCycleReduction& red,
                                             const Embedding& copy, std::uint64_t seed,
                                             EmbedReport* report) {
  const std::size_t u = red.u;
  const std::size_t low = profile_.phase3_segment > 1 ? profile_.phase3_segment - 1 : 1;
  AuxiliaryDigraph aux = build_auxiliary_digraph(layers_, copy, red);
  const std::size_t m = red.long_lengths.size();

  // The digraph cycle for C_i has sum(alpha) = gamma + beta vertices: beta
  // isolated ones and gamma replacement cycles.
  std::vector<std::vector<std::size_t>> alpha(m);
  std::size_t z_needed = 0;
  for (std::size_t i = 0; i < m; ++i) {
    alpha[i] = segment_lengths(red.gamma[i] + red.beta[i], low, std::max<std::size_t>(2, red.beta[i]));
    if (alpha[i].empty())
      return fail("phase3", "long cycle " + str(i) + ": " + str(red.gamma[i] + red.beta[i]) +
                                " has no split into parts " + str(low) + "/" + str(low + 1));
    z_needed += alpha[i].size() - red.beta[i];
  }
  if (z_needed > aux.z_count)
    return fail("phase3", "need " + str(z_needed) + " anchor cycles, copy has " + str(aux.z_count));

  ConnectionRequest rq;
  std::size_t next_isolated = aux.z_count, next_z = 0;
  std::vector<std::size_t> first_pair(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t ti = alpha[i].size();
    VertexList labels;
    for (std::size_t j = 0; j < ti; ++j)
      labels.push_back(static_cast<Vertex>(j < red.beta[i] ? next_isolated++ : next_z++));
    first_pair[i] = rq.sources.size();
    for (std::size_t j = 0; j < ti; ++j) {
      rq.sources.push_back(labels[j]);
      rq.targets.push_back(labels[(j + 1) % ti]);
      rq.lengths.push_back(alpha[i][j]);
    }
  }
  for (Vertex d = static_cast<Vertex>(z_needed); d < aux.z_count; ++d) rq.workspace.push_back(d);

  auto params = ConnectorParams::from_profile(profile_, aux.pieces.size(), derive_seed(seed, "connect"));
  std::size_t total = std::accumulate(rq.lengths.begin(), rq.lengths.end(), std::size_t{0});
  if (static_cast<double>(total) > params.max_density * static_cast<double>(rq.workspace.size()))
    return fail("phase3", "paths need " + str(total) + " digraph vertices but the workspace has " +
                              str(rq.workspace.size()));
  auto bundle = connect_pairs(aux.digraph.arcs(), rq, params);
  if (!bundle.ok()) return nest("phase3", bundle.error());

  // Expand every digraph vertex into its host piece.
  std::vector<char> used(aux.pieces.size(), 0);
  std::vector<VertexList> long_cycles(m);
  for (std::size_t i = 0; i < m; ++i) {
    LongCycleTrace trace{red.long_lengths[i], u, red.gamma[i], red.beta[i], alpha[i], 0};
    for (std::size_t j = 0; j < alpha[i].size(); ++j) {
      const Path& p = bundle->paths[first_pair[i] + j];
      for (std::size_t x = 0; x + 1 < p.size(); ++x) {
        used[p[x]] = 1;
        const auto& piece = aux.pieces[p[x]];
        long_cycles[i].insert(long_cycles[i].end(), piece.begin(), piece.end());
      }
    }
    trace.rebuilt = long_cycles[i].size();
    if (report) report->long_cycles.push_back(trace);
    if (trace.rebuilt != trace.length)
      throw std::logic_error("phase 3: long cycle " + str(i) + " rebuilt with length " + str(trace.rebuilt) +
                             ", expected " + str(trace.length));
  }

  std::vector<char> skip(embedded_cycles(copy).size(), 0);
  for (std::size_t d = 0; d < aux.pieces.size(); ++d)
    if (used[d]) skip[aux.components[d]] = 1;
  ComponentPool pool(embedded_cycles(copy), &skip);
  std::vector<VertexList> cycles(spec.lengths.size());
  std::size_t next_long = 0;
  for (std::size_t c = 0; c < spec.lengths.size(); ++c)
    cycles[c] = spec.lengths[c] > profile_.K ? std::move(long_cycles[next_long++]) : pool.take(spec.lengths[c]);
  return embedding_from_cycles(spec, cycles);
}

Expected<Embedding> embed(const ExposureLayers& layers, const CycleSpec& spec,
                          const ConstantsProfile& profile, std::uint64_t seed, EmbedReport* report) {
  Embedder embedder(layers, profile, seed);
  return embedder.embed(spec, report);
}

}  // namespace univ
