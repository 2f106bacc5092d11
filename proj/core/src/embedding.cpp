#include "univ/embedding.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

#include "univ/layers.hpp"

namespace univ {

std::vector<std::pair<std::size_t, std::size_t>> target_edges(const CycleSpec& spec) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t offset = 0;
  for (std::size_t len : spec.lengths) {
    if (len == 2) {
      out.emplace_back(offset, offset + 1);
    } else if (len >= 3) {
      for (std::size_t i = 0; i < len; ++i) out.emplace_back(offset + i, offset + (i + 1) % len);
    }
    offset += len;
  }
  return out;
}

Embedding embedding_from_cycles(const CycleSpec& spec, const std::vector<VertexList>& cycles) {
  if (cycles.size() != spec.lengths.size())
    throw std::invalid_argument("one vertex sequence per component expected");
  Embedding emb;
  emb.spec = spec;
  emb.assignment.reserve(spec.n);
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    if (cycles[c].size() != spec.lengths[c])
      throw std::invalid_argument("component " + std::to_string(c) + " has the wrong length");
    emb.assignment.insert(emb.assignment.end(), cycles[c].begin(), cycles[c].end());
  }
  return emb;
}

std::vector<VertexList> embedded_cycles(const Embedding& emb) {
  std::vector<VertexList> out;
  std::size_t offset = 0;
  for (std::size_t len : emb.spec.lengths) {
    if (offset + len > emb.assignment.size()) break;
    out.emplace_back(emb.assignment.begin() + offset, emb.assignment.begin() + offset + len);
    offset += len;
  }
  return out;
}

Verdict verify_embedding(const HostGraph& host, const CycleSpec& spec, const Embedding& emb) {
  if (!(emb.spec == spec)) return Verdict::reject("embedding is for spec " + emb.spec.id());
  std::size_t total = 0;
  for (std::size_t len : spec.lengths) total += len;
  if (total != spec.n) return Verdict::reject("spec lengths do not sum to n");
  if (emb.assignment.size() != spec.n)
    return Verdict::reject("assignment has " + std::to_string(emb.assignment.size()) +
                           " entries, expected " + std::to_string(spec.n));
  std::vector<char> seen(host.n(), 0);
  for (std::size_t i = 0; i < emb.assignment.size(); ++i) {
    Vertex v = emb.assignment[i];
    if (v >= host.n())
      return Verdict::reject("target " + std::to_string(i) + " maps outside the host");
    if (seen[v]) return Verdict::reject("host vertex " + std::to_string(v) + " used twice");
    seen[v] = 1;
  }
  // Adjacency and closure; the canonical numbering makes the realized cycle
  // lengths the spec lengths once every edge is present.
  for (auto [a, b] : target_edges(spec)) {
    Vertex x = emb.assignment[a], y = emb.assignment[b];
    if (!host.has_edge(x, y))
      return Verdict::reject("missing host edge " + std::to_string(x) + "-" + std::to_string(y) +
                             " for target edge " + std::to_string(a) + "-" + std::to_string(b));
  }
  return Verdict::accept();
}

void annotate_provenance(Embedding& emb, const ExposureLayers& layers) {
  emb.provenance.clear();
  for (auto [a, b] : target_edges(emb.spec)) {
    std::string label = layers.layer_of(emb.assignment[a], emb.assignment[b]);
    if (label.empty())
      throw std::logic_error("edge " + std::to_string(emb.assignment[a]) + "-" +
                             std::to_string(emb.assignment[b]) + " lies in no layer");
    emb.provenance.push_back(std::move(label));
  }
}

std::string embedding_to_json(const Embedding& emb) {
  nlohmann::json j;
  j["spec"] = nlohmann::json::parse(spec_to_json(emb.spec));
  j["assignment"] = emb.assignment;
  j["edge_provenance"] = emb.provenance;
  return j.dump();
}

Embedding embedding_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    Embedding emb;
    emb.spec = spec_from_json(j.at("spec").dump());
    emb.assignment = j.at("assignment").get<VertexList>();
    if (j.contains("edge_provenance"))
      emb.provenance = j.at("edge_provenance").get<std::vector<std::string>>();
    return emb;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad embedding json: ") + e.what());
  }
}

}  // namespace univ
