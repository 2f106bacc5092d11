#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "univ/graph.hpp"
#include "univ/result.hpp"
#include "univ/rng.hpp"

namespace univ {

// A cycle on exactly `length` vertices through `start`, all inside `allowed`.
// Length 1 is the vertex itself and length 2 an edge. Randomized depth-first
// search; gives up after `budget` expansions.
std::optional<VertexList> find_cycle_through(const HostGraph& g, const std::vector<char>& allowed,
                                             Vertex start, std::size_t length, Rng& rng,
                                             std::uint64_t budget);

// As above from any allowed start; the budget is shared across starts.
std::optional<VertexList> find_cycle(const HostGraph& g, const std::vector<char>& allowed,
                                     std::size_t length, Rng& rng, std::uint64_t budget);

struct FactorParams {
  std::uint64_t seed = 0;
  std::uint64_t budget = 200000;  // per cycle search
  int restarts = 40;
};

// Partition of S into cycles of length s. s = 2 is a perfect matching of
// host[S]; s >= 3 is randomized packing with undo and restarts. Throws
// std::invalid_argument unless s divides |S|.
Expected<std::vector<VertexList>> find_cycle_factor(const HostGraph& g, const VertexList& S,
                                                    std::size_t s, const FactorParams& params = {});

}  // namespace univ
