#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "univ/cycle_spec.hpp"
#include "univ/embedding.hpp"
#include "univ/graph.hpp"
#include "univ/layers.hpp"
#include "univ/profile.hpp"
#include "univ/result.hpp"

namespace univ {

struct BoundedParams {
  std::uint64_t seed = 0;
  std::uint64_t budget = 200000;  // per cycle search
  int restarts = 40;              // cycle factor restarts
  int attempts = 3;               // full greedy passes before giving up

  static BoundedParams from_profile(const ConstantsProfile& profile, std::uint64_t seed);
};

// Embeds a spec whose components are all short enough for cycle search: every
// component except those of the length s maximizing s * count(s) is placed
// greedily in `first`, and the leftover vertices are covered by a factor of
// s-cycles in `second`.
Expected<Embedding> embed_bounded(const HostGraph& first, const HostGraph& second,
                                  const CycleSpec& spec, const BoundedParams& params);

// Per long cycle of a short-heavy spec: how it was rebuilt.
struct LongCycleTrace {
  std::size_t length = 0;
  std::size_t u = 0;
  std::size_t gamma = 0;
  std::size_t beta = 0;
  std::vector<std::size_t> alpha;  // digraph path lengths
  std::size_t rebuilt = 0;         // length of the host cycle obtained
};

struct EmbedReport {
  std::string phase;  // "bounded", "phase1", "phase2" or "phase3": the last phase entered
  int retries = 0;    // extra attempts used across phases
  std::vector<std::string> notes;
  std::vector<Failure> failures;  // one per failed attempt, in order
  std::vector<LongCycleTrace> long_cycles;
};

// Digraph on the fixed edges z = (s,t) of the replacement cycles followed by
// the designated isolated vertices.
struct AuxiliaryDigraph {
  HostDigraph digraph;
  std::size_t z_count = 0;
  // Host vertices replacing each digraph vertex, from s to t: the z cycle
  // without its edge st, or the single isolated vertex.
  std::vector<VertexList> pieces;
  // Index of each piece among embedded_cycles(copy).
  std::vector<std::size_t> components;

  bool is_z(Vertex d) const { return d < z_count; }
  Vertex s_of(Vertex d) const { return pieces[d].front(); }
  Vertex t_of(Vertex d) const { return pieces[d].back(); }
};

// Arcs: z -> z' iff t s' in G4; z -> v iff t v in G4; v -> z iff v s in G4; for
// isolated a < b, a -> b iff ab in G4 and b -> a iff ab in G5. The z are the
// replacement-length cycles of the copy ordered by s; the isolated vertices
// are the sum(beta) smallest isolated vertices of the copy. Throws
// std::invalid_argument if the copy lacks them.
AuxiliaryDigraph build_auxiliary_digraph(const ExposureLayers& layers, const Embedding& copy,
                                         const LongCycleReduction& reduction);

// The three-phase pipeline over one set of layers. Copies of the bounded part
// are computed once per distinct bounded multiset and reused; the cache is
// safe to share between threads.
class Embedder {
 public:
  Embedder(const ExposureLayers& layers, ConstantsProfile profile, std::uint64_t seed);

  Expected<Embedding> embed(const CycleSpec& spec, EmbedReport* report = nullptr);
  Expected<Embedding> embed_h1(const CycleSpec& spec, EmbedReport* report = nullptr);
  Expected<Embedding> embed_h2(const CycleSpec& spec, EmbedReport* report = nullptr);

  // Copy in G1 of the components of length <= K, padded with isolated vertices.
  Expected<Embedding> phase1_copy(const CycleSpec& bounded, EmbedReport* report = nullptr);

  const ExposureLayers& layers() const { return layers_; }
  const ConstantsProfile& profile() const { return profile_; }

 private:
  Expected<Embedding> phase2_attempt(const CycleSpec& spec, const Embedding& copy,
                                     std::uint64_t seed, EmbedReport* report);
  Expected<Embedding> phase3_attempt(const CycleSpec& spec, const LongCycleReduction& red,
                                     const Embedding& copy, std::uint64_t seed,
                                     EmbedReport* report);

  const ExposureLayers& layers_;
  ConstantsProfile profile_;
  std::uint64_t seed_;
  std::mutex cache_mutex_;
  std::map<std::string, Embedding> cache_;
};

// One-shot form of Embedder::embed.
Expected<Embedding> embed(const ExposureLayers& layers, const CycleSpec& spec,
                          const ConstantsProfile& profile, std::uint64_t seed,
                          EmbedReport* report = nullptr);

// Segment length for the long cycles of a spec: the largest k <= cap such
// that every cycle longer than `must_cover` splits into at least two parts in
// {k, k+1}. Zero if there is none.
std::size_t choose_segment_length(const CycleSpec& spec, std::size_t cap, std::size_t must_cover);

// Parts in {k, k+1} summing to z, balanced when possible; empty if z has no
// such representation with at least `min_parts` parts.
std::vector<std::size_t> segment_lengths(std::size_t z, std::size_t k, std::size_t min_parts);

}  // namespace univ
