#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "univ/absorber.hpp"
#include "univ/connector.hpp"
#include "univ/template.hpp"

namespace univ {

struct RobustSetParams {
  int k = 1;                  // gadget parameter
  std::size_t link_min = 2;   // shortest connector between consecutive gadgets
  std::uint64_t template_seed = 0x5eed;
  TemplateOptions template_options;
  ConnectorParams connector;
};

// 3r endpoint pairs joined through chains of absorbers. Any r-subset A' of the
// pool A can be absorbed: query() returns 3r disjoint paths of length l-1
// covering exactly covered ∪ A'.
struct RobustSet {
  struct Chain {
    std::vector<Path> links;             // links.size() == gadgets.size() + 1
    std::vector<Absorber> gadgets;
    std::vector<int> labels;             // right template index absorbed by each gadget
  };

  std::size_t length = 0;  // l
  VertexList pool;         // A, 2r vertices
  VertexList extra;        // B, 2r workspace vertices always absorbed
  VertexList sources;      // x_j
  VertexList targets;      // y_j
  VertexList covered;      // W', sorted
  VertexList unused;       // workspace returned untouched
  FlexibleTemplate guide;
  std::vector<Chain> chains;

  std::size_t r() const { return pool.size() / 2; }
};

// Workspace build_robust_set needs for a given guide template.
std::size_t robust_set_workspace_need(const FlexibleTemplate& guide, std::size_t length,
                                      const RobustSetParams& params);

// Shortest l a guide template allows.
std::size_t robust_set_min_length(const FlexibleTemplate& guide, const RobustSetParams& params);

Expected<RobustSet> build_robust_set(const HostGraph& g, const VertexList& pool, const VertexList& sources,
                                     const VertexList& targets, const VertexList& W, std::size_t length,
                                     const RobustSetParams& params);

// Throws std::invalid_argument unless `chosen` is an r-subset of the pool.
Expected<std::vector<Path>> query_robust_set(const RobustSet& rs, const VertexList& chosen);

}  // namespace univ
