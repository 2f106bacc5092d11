#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace univ {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t label_hash(std::string_view label);

// Mixes a seed with extra words into a fresh 64-bit seed.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Uniform draw in [0,1) attached to the ordered pair (i, j) of a stream.
// Counter based, so any pair can be queried independently.
double pair_uniform(std::uint64_t stream, std::uint32_t i, std::uint32_t j);

struct RandomSeed {
  std::uint64_t seed = 0;
  std::string label = "G";

  std::uint64_t stream() const { return derive_seed(seed, label); }
};

// Small deterministic generator. Distributions are implemented here rather
// than through <random> so results match across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next();
  // Uniform integer in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  double uniform();

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct elements of v, in random order.
  template <class T>
  std::vector<T> sample(std::vector<T> v, std::size_t k) {
    if (k > v.size()) k = v.size();
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + static_cast<std::size_t>(below(v.size() - i));
      std::swap(v[i], v[j]);
    }
    v.resize(k);
    return v;
  }

 private:
  std::uint64_t state_;
};

}  // namespace univ
