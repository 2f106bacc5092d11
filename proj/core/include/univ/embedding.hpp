#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "univ/cycle_spec.hpp"
#include "univ/graph.hpp"

namespace univ {

struct ExposureLayers;

// Target vertices are numbered component by component in spec order and
// consecutively along each cycle.
struct Embedding {
  CycleSpec spec;
  VertexList assignment;
  // Layer label per target edge, in target_edges order; may be empty.
  std::vector<std::string> provenance;
};

// Edges of the canonical target graph as pairs of target vertices.
std::vector<std::pair<std::size_t, std::size_t>> target_edges(const CycleSpec& spec);

// Builds an embedding from one host vertex sequence per component.
Embedding embedding_from_cycles(const CycleSpec& spec, const std::vector<VertexList>& cycles);

// Host vertex sequence of every component, in spec order.
std::vector<VertexList> embedded_cycles(const Embedding& emb);

Verdict verify_embedding(const HostGraph& host, const CycleSpec& spec, const Embedding& emb);

// Tags each used edge with the first layer holding it. Throws std::logic_error
// if some edge lies in no layer.
void annotate_provenance(Embedding& emb, const ExposureLayers& layers);

std::string embedding_to_json(const Embedding& emb);
// Throws std::invalid_argument on malformed input.
Embedding embedding_from_json(const std::string& text);

}  // namespace univ
