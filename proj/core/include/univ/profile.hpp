#pragma once

#include <cstdint>
#include <string>

namespace univ {

// Constants that steer the pipeline. The theoretical profile follows the
// asymptotic constants verbatim (and therefore saturates); the practical
// profile keeps the same structure with thresholds small enough for hosts of
// a few thousand vertices.
struct ConstantsProfile {
  std::string name = "practical";

  int ell = 3;
  double eps = 1.0 / 9.0;
  int k = 3;
  // Long-cycle cutoff. Saturates at UINT64_MAX; log2_K keeps the true size.
  std::uint64_t K = 729;
  double log2_K = 0.0;
  // Components up to this length count as short; defaults to floor(K^(1/3)).
  std::uint64_t short_cutoff = 9;

  // Segment lengths used when long cycles are cut into paths: long cycles of
  // a long-heavy spec use parts in {phase2_segment, phase2_segment + 1}, the
  // digraph paths of a short-heavy spec parts in {phase3_segment - 1,
  // phase3_segment}.
  std::uint64_t phase2_segment = 150;
  std::uint64_t phase3_segment = 3;
  // Band of admissible path lengths for the non-spanning connector.
  std::uint64_t connect_min = 1;
  std::uint64_t connect_max = 1u << 20;

  // Absorber gadget parameter; gadget size is 18k^2+2 for this k.
  int gadget_k = 1;
  int absorbers_per_vertex = 40;
  int template_max_degree = 40;
  int template_min_degree = 5;
  int template_trials = 2000;
  std::uint64_t template_seed = 0x5eed;

  // Base length of the spanning connector and its leftover count.
  std::uint64_t spanning_base = 150;
  int spanning_leftover = 1;
  // Minimum length of the links joining absorbers inside a robust set.
  int link_min = 2;

  // Non-spanning connector.
  int connector_rounds = 2;
  double reserve_fraction = 0.1;
  int star_size = 2;      // 0: derive n^(eps/6)
  int shrink_ratio = 2;   // 0: derive n^(eps/4)
  int frontier_cap = 0;   // 0: automatic

  int partition_probes = 0;
  int partition_retries = 16;

  // Cycle search and retries.
  std::uint64_t search_budget = 200000;
  int search_restarts = 40;
  int phase_retries = 2;

  // Throws std::invalid_argument when an invariant is broken.
  void validate() const;

  int star_size_for(std::size_t n) const;
  int shrink_ratio_for(std::size_t n) const;
};

ConstantsProfile theoretical_profile(int ell);
ConstantsProfile practical_profile(int ell = 3);
// "theoretical" or "practical".
// Practical constants with small search budgets and no retries, for sweeps
// where most attempts near the threshold fail and must fail quickly.
ConstantsProfile sweep_profile(int ell = 3);
ConstantsProfile profile_by_name(const std::string& name, int ell = 3);

std::uint64_t integer_cube_root(std::uint64_t x);

}  // namespace univ
