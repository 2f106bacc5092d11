#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "univ/cycle_spec.hpp"
#include "univ/graph.hpp"
#include "univ/profile.hpp"
#include "univ/result.hpp"

namespace univ {

using Path = VertexList;

// Pairs (x_i, y_i) to be joined by paths of exactly lengths[i] edges whose
// interior vertices come from the workspace.
struct ConnectionRequest {
  VertexList sources;
  VertexList targets;
  std::vector<std::size_t> lengths;
  VertexList workspace;
};

struct PathBundle {
  std::vector<Path> paths;  // paths[i] runs from sources[i] to targets[i]
};

struct ConnectorParams {
  std::size_t frontier_cap = 0;  // 0: automatic
  int shrink_ratio = 2;
  int rounds = 2;                // re-anchoring rounds through reserve pools
  double reserve_fraction = 0.1; // share of W set aside for those rounds
  int star_size = 2;
  std::size_t min_length = 1;
  std::size_t max_length = 1u << 20;
  double max_density = 0.7;      // sum of lengths may use at most this share of W
  std::uint64_t seed = 0;
  std::size_t partition_probes = 0;
  int partition_retries = 16;
  std::uint64_t exact_budget = 200000;  // node budget of the exhaustive fallback

  static ConnectorParams from_profile(const ConstantsProfile& profile, std::size_t n, std::uint64_t seed);
};

// Checks every invariant of a bundle against its request.
Verdict verify_bundle(const ArcView& g, const ConnectionRequest& request, const PathBundle& bundle);

struct DivideResult {
  VertexList sources;
  VertexList reached;
};

// Splits X (sorted) into k contiguous parts of size at most ceil(|X|/k) and
// keeps the part reaching the most of Y; ties go to the earliest part.
DivideResult divide(const VertexList& X, const VertexList& Y,
                    const std::function<bool(Vertex, Vertex)>& reach, std::size_t k);

// Breadth-first layers grown from a set of sources inside a pool, with the
// surviving source set shrinking until one source owns the last frontier.
struct LayeredReachability {
  std::size_t index = 0;                    // position of the surviving source
  std::vector<VertexList> levels;           // levels[0] = {source}, levels.back() = terminal frontier
  std::unordered_map<Vertex, Vertex> parent;  // frontier vertex -> predecessor
  Direction direction = Direction::Out;

  // Walk from `v` back to the source (inclusive), v first.
  Path trace(Vertex v) const;
};

// Grows layers from sources[i] to depth depths[i] inside `pool`.
Expected<LayeredReachability> grow_layers(const ArcView& g, const VertexList& sources,
                                          const std::vector<std::size_t>& depths,
                                          const std::vector<char>& pool, Direction dir,
                                          std::size_t frontier_cap, int shrink_ratio);

struct SinglePairResult {
  std::size_t index = 0;
  Path path;
};

// Connects one of the pairs (X[i], Y[i]) by a path of length lengths[i] with
// interior in W.
Expected<SinglePairResult> connect_single_pair(const ArcView& g, const VertexList& X, const VertexList& Y,
                                               const std::vector<std::size_t>& lengths,
                                               const VertexList& W, const ConnectorParams& params);

Expected<PathBundle> connect_pairs(const ArcView& g, const ConnectionRequest& request,
                                   const ConnectorParams& params);

// Exhaustive bounded search for an x->y path of exactly `length` edges whose
// interior avoids every vertex with free[v] == 0.
std::optional<Path> find_exact_path(const ArcView& g, Vertex x, Vertex y, std::size_t length,
                                    const std::vector<char>& free, std::uint64_t budget);

namespace detail {

// Routing state shared by the connectors: which vertices are still free.
class Router {
 public:
  Router(const ArcView& g, const VertexList& workspace, const ConnectorParams& params);

  const ArcView& graph() const { return g_; }
  const std::vector<char>& free_mask() const { return free_; }
  std::size_t free_count() const { return free_count_; }
  VertexList free_vertices() const;
  void take(const Path& path);     // marks the interior as used
  void release(const Path& path);  // returns the interior to the pool

  // One layered single-pair connection among the listed pairs.
  Expected<SinglePairResult> connect_one(const VertexList& X, const VertexList& Y,
                                         const std::vector<std::size_t>& lengths);

 private:
  const ArcView& g_;
  ConnectorParams params_;
  std::vector<char> free_;
  std::size_t free_count_ = 0;
};

}  // namespace detail

}  // namespace univ
