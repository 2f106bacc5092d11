#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "univ/connector.hpp"
#include "univ/profile.hpp"
#include "univ/robust_set.hpp"

namespace univ {

enum class SpanningMode {
  Auto,       // absorbing when the instance is large enough, direct otherwise
  Absorbing,  // robust set, saturation and exact absorption of the leftover
  Direct,     // partition into blocks and one Hamilton path per block
};

std::string to_string(SpanningMode mode);

struct SpanningParams {
  int k = 1;                      // gadget parameter
  std::size_t base_length = 150;  // longer requests are reduced to this length
  std::size_t leftover = 1;       // segments left for absorption
  std::size_t link_min = 2;
  std::uint64_t template_seed = 0x5eed;
  TemplateOptions template_options;
  ConnectorParams connector;
  SpanningMode mode = SpanningMode::Auto;
  std::uint64_t search_budget = 200000;
  int restarts = 40;

  static SpanningParams from_profile(const ConstantsProfile& profile, std::size_t n, std::uint64_t seed);
};

struct SpanningResult {
  PathBundle bundle;
  SpanningMode mode = SpanningMode::Direct;  // the mode that produced it
};

// Whether the absorbing construction applies to t pairs of length l.
bool absorbing_applies(std::size_t t, std::size_t length, const SpanningParams& params);

// Joins every (sources[i], targets[i]) by a path of exactly `length` edges so
// that the interiors partition W. Requires t(length-1) = |W|; throws
// std::invalid_argument otherwise.
Expected<SpanningResult> connect_pairs_spanning(const HostGraph& g, const VertexList& sources,
                                                const VertexList& targets, std::size_t length,
                                                const VertexList& W, const SpanningParams& params);

// Hamilton path from x to y through exactly the vertices of `block`.
std::optional<Path> hamilton_path_through(const HostGraph& g, Vertex x, Vertex y, const VertexList& block,
                                          std::uint64_t seed, std::uint64_t budget);

}  // namespace univ
