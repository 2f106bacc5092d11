#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "univ/graph.hpp"
#include "univ/result.hpp"

namespace univ {

struct ExpansionMode {
  bool exact = true;
  std::size_t trials = 0;            // sampled mode: number of random probes per property
  std::uint64_t seed = 0;
  std::uint64_t cap = 1u << 20;      // exact mode: maximum number of enumerated sets
  bool pair_property = true;         // false: only the neighbourhood property is checked

  static ExpansionMode exact_mode(std::uint64_t cap = 1u << 20) { return {true, 0, 0, cap, true}; }
  static ExpansionMode sampled(std::size_t trials, std::uint64_t seed) { return {false, trials, seed, 0, true}; }
  ExpansionMode neighbourhood_only() const {
    ExpansionMode m = *this;
    m.pair_property = false;
    return m;
  }
};

struct ExpansionVerdict {
  bool holds = true;
  bool certified = false;  // only exact verdicts certify
  std::size_t trials = 0;
  // On failure: property "P1" with witness_x, or "P2" with the disjoint pair.
  std::string property;
  VertexList witness_x;
  VertexList witness_y;
  Direction direction = Direction::Out;
};

// Whether g d-expands into W. For digraphs P1 is checked in `dir` only.
Expected<ExpansionVerdict> expands_into(const ArcView& g, const VertexList& W, double d,
                                        const ExpansionMode& mode, Direction dir = Direction::Out);
// (n,d)-expander test: W = V(g), P1 in both directions for digraphs.
Expected<ExpansionVerdict> is_expander(const ArcView& g, double d, const ExpansionMode& mode);

// ceil(|W| / 2d), the set size used by both properties.
std::size_t expansion_set_size(std::size_t w, double d);

// Random partition of W into parts of the given sizes, each part checked with
// `probes` sampled probes at d_i = sizes[i] / (5 |W|) * d. probes = 0 skips
// the check. Parts are returned sorted.
Expected<std::vector<VertexList>> split_expanding(const ArcView& g, const VertexList& W,
                                                  const std::vector<std::size_t>& sizes, double d,
                                                  std::uint64_t seed, int retries = 16,
                                                  std::size_t probes = 0);

}  // namespace univ
