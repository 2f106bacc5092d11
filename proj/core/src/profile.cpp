#include "univ/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace univ {

namespace {
constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
}

std::uint64_t integer_cube_root(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::cbrt(static_cast<long double>(x)));
  auto cube_le = [x](std::uint64_t c) {
    unsigned __int128 v = static_cast<unsigned __int128>(c) * c * c;
    return v <= x;
  };
  while (r > 0 && !cube_le(r)) --r;
  while (cube_le(r + 1)) ++r;
  return r;
}

void ConstantsProfile::validate() const {
  auto bad = [](const std::string& what) { throw std::invalid_argument("profile: " + what); };
  if (ell < 3) bad("ell must be at least 3");
  if (k < 3) bad("k must be at least 3");
  if (K != kSaturated && static_cast<unsigned __int128>(K) < static_cast<unsigned __int128>(k) * k)
    bad("K must be at least k^2");
  if (short_cutoff < 1) bad("short cutoff must be positive");
  if (phase2_segment < 2 || phase3_segment < 2) bad("segment lengths must be positive");
  if (connect_min < 1 || connect_max < connect_min) bad("connector band is empty");
  if (gadget_k < 1) bad("gadget k must be positive");
  if (absorbers_per_vertex < 1) bad("absorbers per vertex must be positive");
  if (template_max_degree < 1 || template_min_degree < 1) bad("template degrees must be positive");
  if (spanning_base < 3 || spanning_leftover < 1) bad("spanning parameters must be positive");
  if (link_min < 1) bad("link length must be positive");
  if (connector_rounds < 0) bad("connector rounds must be non-negative");
  if (!(reserve_fraction >= 0.0 && reserve_fraction < 1.0)) bad("reserve fraction must lie in [0,1)");
  if (star_size < 0 || shrink_ratio < 0 || frontier_cap < 0) bad("connector knobs must be non-negative");
  if (partition_retries < 1) bad("partition retries must be positive");
  if (search_restarts < 1 || search_budget < 1) bad("search budget must be positive");
  if (phase_retries < 0) bad("phase retries must be non-negative");
}

int ConstantsProfile::star_size_for(std::size_t n) const {
  if (star_size > 0) return star_size;
  return std::max(1, static_cast<int>(std::floor(std::pow(static_cast<double>(n), eps / 6.0))));
}

int ConstantsProfile::shrink_ratio_for(std::size_t n) const {
  if (shrink_ratio > 0) return shrink_ratio;
  return std::max(2, static_cast<int>(std::floor(std::pow(static_cast<double>(n), eps / 4.0))));
}

ConstantsProfile theoretical_profile(int ell) {
  if (ell < 3) throw std::invalid_argument("ell must be at least 3");
  ConstantsProfile p;
  p.name = "theoretical";
  p.ell = ell;
  p.eps = 1.0 / (3.0 * ell);
  p.k = 36 * ell;  // 12 / eps
  // K = 2^(2^(1/eps)) = 2^(2^(3 ell)).
  p.log2_K = std::ldexp(1.0, 3 * ell);
  p.K = p.log2_K < 64 ? (std::uint64_t{1} << static_cast<int>(p.log2_K)) : kSaturated;
  p.short_cutoff = p.log2_K / 3 < 64 ? integer_cube_root(p.K) : kSaturated;
  auto k2 = static_cast<std::uint64_t>(p.k) * p.k;
  p.phase2_segment = 1000 * k2;
  p.phase3_segment = 100 * static_cast<std::uint64_t>(p.k);
  p.connect_min = 5 * static_cast<std::uint64_t>(p.k);
  p.connect_max = 1000 * k2;
  p.gadget_k = p.k;
  p.absorbers_per_vertex = 40;
  p.template_max_degree = 40;
  p.template_min_degree = 40;
  p.spanning_base = 1000 * k2;
  p.spanning_leftover = 1;
  p.link_min = 5 * p.k;
  p.connector_rounds = p.k;
  p.reserve_fraction = 0.1;
  p.star_size = 0;
  p.shrink_ratio = 0;
  p.frontier_cap = 0;
  return p;
}

ConstantsProfile practical_profile(int ell) {
  if (ell < 3) throw std::invalid_argument("ell must be at least 3");
  ConstantsProfile p;
  p.ell = ell;
  p.eps = 1.0 / (3.0 * ell);
  p.log2_K = std::log2(static_cast<double>(p.K));
  p.short_cutoff = integer_cube_root(p.K);
  return p;
}

ConstantsProfile sweep_profile(int ell) {
  ConstantsProfile p = practical_profile(ell);
  p.search_budget = 20000;
  p.search_restarts = 4;
  p.phase_retries = 0;
  return p;
}

ConstantsProfile profile_by_name(const std::string& name, int ell) {
  if (name == "practical") return practical_profile(ell);
  if (name == "sweep") return sweep_profile(ell);
  if (name == "theoretical") return theoretical_profile(ell);
  throw std::invalid_argument("unknown profile: " + name);
}

}  // namespace univ
