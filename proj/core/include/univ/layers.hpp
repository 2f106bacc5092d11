#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "univ/graph.hpp"

namespace univ {

// Four independent G(n,q) layers with (1-q)^4 = 1-p. Every pair draws one
// master uniform U on the host stream; the pair is an edge of the coupled
// G(n,p) sample iff U < p, and in that case U picks which nonempty subset of
// layers carries it. The union of the layers is therefore exactly the sample.
struct ExposureLayers {
  std::size_t n = 0;
  double p = 0.0;
  double q = 0.0;
  std::uint64_t seed = 0;

  HostGraph g1, g2, g4, g5;
  HostGraph g3;    // g4 ∪ g5
  HostGraph host;  // union of all layers

  // "G1", "G2", "G4" or "G5": the first layer holding the edge, "" if none.
  std::string layer_of(Vertex u, Vertex v) const;
};

// Per-layer probability q = 1 - (1-p)^(1/4).
double layer_probability(double p);

// Layer pattern for a master uniform below p: bit i set means the pair is in
// layer i (order G1, G2, G4, G5). Returns 0 when u >= p.
unsigned layer_pattern(double u, double p);

ExposureLayers make_layers(std::size_t n, double p, std::uint64_t seed);

// Splits an existing host into layers as if it had been drawn at density p:
// each edge receives a nonempty pattern from the conditional law. Different
// seeds give different splits of the same union.
ExposureLayers split_host(const HostGraph& host, double p, std::uint64_t seed);

}  // namespace univ
