#pragma once

#include <cstddef>
#include <vector>

#include "univ/connector.hpp"
#include "univ/cycle_spec.hpp"
#include "univ/graph.hpp"
#include "univ/result.hpp"

namespace univ {

// A vertex set R with ends r, s that can be traversed by an r,s-path with or
// without the extra vertex v.
struct Absorber {
  Vertex v = 0;
  Vertex r = 0;
  Vertex s = 0;
  VertexList R;  // sorted
  Path path_without;
  Path path_with;
};

// Vertices in one gadget with parameter k.
constexpr std::size_t absorber_size(int k) { return 18 * static_cast<std::size_t>(k) * k + 2; }
constexpr std::size_t backbone_length(int k) { return 6 * static_cast<std::size_t>(k) + 1; }
constexpr std::size_t rung_length(int k) { return 6 * static_cast<std::size_t>(k) - 1; }

// Replays both traversals against the host.
Verdict verify_absorber(const HostGraph& g, const Absorber& a, std::size_t expected_size);

// Builds the two traversals from a backbone x0 x1 .. x3k y0 y3k .. y1 and the
// rungs rungs[i-1] = x_i .. y_i (i = 1..3k). v must be adjacent to x0 and y1.
Absorber assemble_absorber(Vertex v, const Path& backbone, const std::vector<Path>& rungs, int k);

struct AbsorberBatch {
  std::vector<std::vector<Absorber>> absorbers;  // absorbers[i] belong to targets[i]
  VertexList unused;                              // workspace left untouched
};

// counts[i] vertex-disjoint absorbers for targets[i], built inside W.
Expected<AbsorberBatch> build_absorbers(const HostGraph& g, const VertexList& targets,
                                        const std::vector<std::size_t>& counts, const VertexList& W, int k,
                                        const ConnectorParams& params);

// Smallest workspace build_absorbers accepts for `total` gadgets.
std::size_t absorber_workspace_need(std::size_t total, int k, double density);

}  // namespace univ
