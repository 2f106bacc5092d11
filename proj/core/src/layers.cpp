#include "univ/layers.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "univ/rng.hpp"

namespace univ {

double layer_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0,1]");
  if (p >= 1.0) return 1.0;
  return 1.0 - std::pow(1.0 - p, 0.25);
}

namespace {

// Cumulative weights of the fifteen nonempty layer patterns.
struct PatternTable {
  std::array<double, 15> cum{};
  bool complete = false;

  explicit PatternTable(double p) {
    double q = layer_probability(p);
    complete = q >= 1.0;
    double acc = 0.0;
    for (unsigned mask = 1; mask < 16; ++mask) {
      int bits = __builtin_popcount(mask);
      acc += std::pow(q, bits) * std::pow(1.0 - q, 4 - bits);
      cum[mask - 1] = acc;
    }
  }

  unsigned pick(double u) const {
    if (complete) return 15;
    for (unsigned i = 0; i < 15; ++i)
      if (u < cum[i]) return i + 1;
    // Rounding can leave a sliver of [cum.back(), p); give it the last pattern.
    return 15;
  }
};

}  // namespace

unsigned layer_pattern(double u, double p) {
  if (u >= p) return 0;
  return PatternTable(p).pick(u);
}

namespace {

ExposureLayers assemble(std::size_t n, double p, std::uint64_t seed,
                        const std::array<std::vector<Edge>, 4>& parts) {
  ExposureLayers out;
  out.n = n;
  out.p = p;
  out.q = layer_probability(p);
  out.seed = seed;
  out.g1 = HostGraph::from_edges(n, parts[0]);
  out.g2 = HostGraph::from_edges(n, parts[1]);
  out.g4 = HostGraph::from_edges(n, parts[2]);
  out.g5 = HostGraph::from_edges(n, parts[3]);
  out.g3 = union_graphs({&out.g4, &out.g5});
  out.host = union_graphs({&out.g1, &out.g2, &out.g3});
  return out;
}

void place(std::array<std::vector<Edge>, 4>& parts, unsigned mask, Vertex i, Vertex j) {
  for (int b = 0; b < 4; ++b)
    if (mask & (1u << b)) parts[b].emplace_back(i, j);
}

}  // namespace

ExposureLayers make_layers(std::size_t n, double p, std::uint64_t seed) {
  layer_probability(p);
  std::uint64_t stream = RandomSeed{seed, "G"}.stream();
  std::array<std::vector<Edge>, 4> parts;
  if (p > 0.0) {
    PatternTable table(p);
    for (Vertex i = 0; i < n; ++i)
      for (Vertex j = i + 1; j < n; ++j) {
        double u = p >= 1.0 ? 0.0 : pair_uniform(stream, i, j);
        if (u < p) place(parts, table.pick(u), i, j);
      }
  }
  return assemble(n, p, seed, parts);
}

ExposureLayers split_host(const HostGraph& host, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("split_host needs p in (0,1]");
  std::uint64_t stream = derive_seed(seed, "split");
  std::array<std::vector<Edge>, 4> parts;
  PatternTable table(p);
  for (auto [i, j] : host.edges()) {
    // Uniform on [0,p) conditional on the pair being present.
    double u = pair_uniform(stream, i, j) * p;
    place(parts, table.pick(u), i, j);
  }
  return assemble(host.n(), p, seed, parts);
}

std::string ExposureLayers::layer_of(Vertex u, Vertex v) const {
  if (g1.has_edge(u, v)) return "G1";
  if (g2.has_edge(u, v)) return "G2";
  if (g4.has_edge(u, v)) return "G4";
  if (g5.has_edge(u, v)) return "G5";
  return "";
}

}  // namespace univ
