#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "univ/result.hpp"

namespace univ {

// Bipartite guide graph with left class X = [0, n0) and right class Y ∪ Z,
// where right indices [0, 2n0/3) form Y and [2n0/3, 4n0/3) form Z. For every
// Z' ⊂ Z of size n0/3 there is a perfect matching between X and Y ∪ Z'.
struct FlexibleTemplate {
  std::size_t n0 = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> adjacency;  // per left vertex, sorted right indices
  bool exhaustive = false;                  // every Z' was checked
  std::size_t checked = 0;                  // number of Z' verified

  std::size_t y_size() const { return 2 * n0 / 3; }
  std::size_t z_size() const { return 2 * n0 / 3; }
  std::size_t right_size() const { return 4 * n0 / 3; }
  int max_degree() const;
  // Right-side neighbourhoods.
  std::vector<std::vector<int>> right_adjacency() const;
};

struct TemplateOptions {
  int min_degree = 5;
  int max_degree = 40;
  int verification_trials = 2000;
  // Certify over every Z' whenever there are at most this many of them.
  std::uint64_t exhaustive_cap = 1u << 18;
  int attempts_per_degree = 200;
};

// Perfect matching between X and Y ∪ Z'; `z_subset` lists Z positions in
// [0, z_size()). Entry i of the result is the right index matched to i.
// Failure carries a left set violating Hall's condition.
Expected<std::vector<int>> template_matching(const FlexibleTemplate& t, const std::vector<int>& z_subset);

// Rejection sampling of left-regular random graphs, raising the degree from
// min_degree until a certified one is found.
Expected<FlexibleTemplate> build_flexible_template(std::size_t n0, std::uint64_t seed,
                                                   const TemplateOptions& options = {});

std::string template_to_json(const FlexibleTemplate& t);
FlexibleTemplate template_from_json(const std::string& text);

// Process-wide cache keyed by (n0, seed). When a directory is configured
// (argument or UNIV_TEMPLATE_CACHE) templates are also stored there as JSON.
class TemplateCache {
 public:
  static TemplateCache& instance();
  Expected<FlexibleTemplate> get(std::size_t n0, std::uint64_t seed, const TemplateOptions& options = {});
  void set_directory(std::string dir);
  void clear();

 private:
  TemplateCache();
  struct Impl;
  Impl* impl_;
};

}  // namespace univ
