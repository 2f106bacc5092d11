#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "univ/profile.hpp"
#include "univ/result.hpp"

namespace univ {

// A disjoint union of cycles given by its multiset of lengths; 1 is an
// isolated vertex and 2 an isolated edge. Lengths are kept non-increasing.
struct CycleSpec {
  std::size_t n = 0;
  std::vector<std::size_t> lengths;

  static CycleSpec from_lengths(std::vector<std::size_t> lengths);

  // Number of components of the given length.
  std::size_t count(std::size_t length) const;
  // Compact identifier such as "5-3-1"; "empty" for n = 0.
  std::string id() const;

  friend bool operator==(const CycleSpec& a, const CycleSpec& b) {
    return a.n == b.n && a.lengths == b.lengths;
  }
};

struct Verdict {
  bool ok = true;
  std::string message;

  static Verdict accept() { return {}; }
  static Verdict reject(std::string why) { return {false, std::move(why)}; }
};

Verdict validate_spec(const CycleSpec& spec, int ell);

// Visits every multiset of parts from {1,2} ∪ [ell, K] summing to n, in
// ascending lexicographic order of the non-increasing length sequences.
// Returning false from `visit` stops the enumeration early.
void for_each_bounded_spec(std::size_t n, int ell, std::size_t K,
                           const std::function<bool(const CycleSpec&)>& visit);
std::vector<CycleSpec> enumerate_bounded_family(std::size_t n, int ell, std::size_t K);
std::uint64_t bounded_family_size(std::size_t n, int ell, std::size_t K);

enum class SpecClass { H1, H2 };
const char* to_string(SpecClass c);

// H1 iff the mass of components of length <= short_cutoff is at most (1 - 1/K) n.
SpecClass classify(const CycleSpec& spec, const ConstantsProfile& profile);

// floor(z/k) parts in {k, k+1} summing to z: the k+1 parts come first.
std::vector<std::size_t> sum_representation(std::size_t z, std::size_t k);
// Parts in {k, k+1} summing to z with each value used by at least a third of
// the parts. Among admissible splits the most even one is returned, k parts
// first.
Expected<std::vector<std::size_t>> balanced_sum_representation(std::size_t z, std::size_t k);

struct LongCycleReduction {
  std::size_t u = 0;
  // Per long cycle (length > K), in spec order.
  std::vector<std::size_t> long_lengths;
  std::vector<std::size_t> gamma;
  std::vector<std::size_t> beta;
  CycleSpec reduced;
};

LongCycleReduction reduce_long_cycles(const CycleSpec& spec, const ConstantsProfile& profile);

struct SmallComponents {
  CycleSpec bounded;  // components of length <= K
  CycleSpec short_;   // components of length <= short_cutoff
};
SmallComponents split_small_components(const CycleSpec& spec, const ConstantsProfile& profile);

std::string spec_to_json(const CycleSpec& spec);
// Accepts {"n": int, "cycles": [int,...]}; throws std::invalid_argument.
CycleSpec spec_from_json(const std::string& text);

}  // namespace univ
