#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "univ/cycle_spec.hpp"
#include "univ/embedding.hpp"
#include "univ/graph.hpp"

namespace univ {

inline constexpr std::size_t kOracleCap = 14;

struct OracleResult {
  bool embeddable = false;
  std::optional<Embedding> witness;
  std::uint64_t nodes_explored = 0;
};

// Exhaustive backtracking for a copy of spec in host. Each cycle is searched
// once up to rotation and reflection (it starts at its smallest image and its
// second vertex is below its last), and equal-length components appear with
// increasing smallest images. Throws std::invalid_argument above the cap or
// when the orders differ.
OracleResult brute_force_embed(const HostGraph& host, const CycleSpec& spec,
                               std::size_t cap = kOracleCap);

struct UniversalityVerdict {
  bool universal = true;
  std::optional<CycleSpec> first_failure;
  std::size_t specs_checked = 0;
};

// Checks every spec of the bounded family with K = n, stopping at the first
// one that does not embed.
UniversalityVerdict exhaustive_universality(std::size_t n, int ell, const HostGraph& host,
                                            std::size_t cap = kOracleCap);

}  // namespace univ
