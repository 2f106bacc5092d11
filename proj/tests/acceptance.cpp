// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance            run everything
//   acceptance AC3 AC7    run a subset
//
// Exit status is nonzero when any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "univ/absorber.hpp"
#include "univ/cycle_spec.hpp"
#include "univ/embedder.hpp"
#include "univ/lab.hpp"
#include "univ/layers.hpp"
#include "univ/oracle.hpp"
#include "univ/robust_set.hpp"
#include "univ/spanning.hpp"
#include "univ/template.hpp"

using namespace univ;

namespace {

// Tolerances and sample sizes.
constexpr std::size_t kAc1Hosts = 50;
constexpr double kAc1Seconds = 300;
constexpr std::size_t kAc3Builds = 100;
constexpr std::size_t kAc4Sets = 30;
constexpr std::size_t kAc4Queries = 20;
constexpr int kAc5MaxDegree = 40;
constexpr std::size_t kAc5Seeds = 10;
constexpr std::size_t kAc6Instances = 100;
constexpr std::size_t kAc7Embeddings = 200;
constexpr std::size_t kAc8Samples = 10000;
constexpr double kAc8Sigmas = 3.0;
constexpr std::size_t kAc9OracleTrials = 2000;
constexpr double kAc9OracleResolution = 0.002;
constexpr std::size_t kAc9PipelineTrials = 100;
constexpr double kAc9PipelineResolution = 0.01;
constexpr double kAc9SlopeTarget = -2.0 / 3.0;
constexpr double kAc9SlopeBand = 0.2;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

VertexList range(Vertex lo, Vertex hi) {
  VertexList v(hi - lo);
  std::iota(v.begin(), v.end(), lo);
  return v;
}

Outcome ac1_oracle_agreement() {
  auto start = std::chrono::steady_clock::now();
  std::size_t attempts = 0, successes = 0, embeddable = 0, violations = 0;
  std::string first;
  for (std::size_t n = 1; n <= 9; ++n) {
    auto family = enumerate_bounded_family(n, 3, n);
    for (double p : {0.5, 0.8, 1.0})
      for (std::uint64_t seed = 0; seed < kAc1Hosts; ++seed) {
        auto layers = make_layers(n, p, derive_seed(seed, n));
        Embedder embedder(layers, practical_profile(3), seed);
        for (const auto& spec : family) {
          ++attempts;
          bool exists = brute_force_embed(layers.host, spec).embeddable;
          embeddable += exists;
          auto r = embedder.embed(spec);
          if (!r) continue;
          ++successes;
          bool sound = verify_embedding(layers.host, spec, *r).ok &&
                       oracle::assignment_is_copy(layers.host, spec.lengths, r->assignment) && exists;
          if (!sound) {
            ++violations;
            if (first.empty()) first = " first violation: n=" + std::to_string(n) + " spec " + spec.id();
          }
        }
      }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome o;
  o.pass = violations == 0 && secs < kAc1Seconds;
  o.detail = std::to_string(attempts) + " attempts, " + std::to_string(successes) + " pipeline successes, " +
             std::to_string(embeddable) + " embeddable per oracle, " + std::to_string(violations) +
             " soundness violations, " + fmt("%.1fs", secs) + first;
  return o;
}

Outcome ac2_partitions() {
  std::size_t checked = 0, balanced = 0, bad = 0;
  for (std::size_t k = 3; k <= 12; ++k)
    for (std::size_t z = k * k; z <= 4 * k * k; ++z) {
      ++checked;
      auto parts = sum_representation(z, k);
      std::size_t sum = 0;
      bool ok = parts.size() == z / k;
      for (auto a : parts) ok = ok && (a == k || a == k + 1), sum += a;
      if (!ok || sum != z) ++bad;
    }
  for (std::size_t k = 3; k <= 10; ++k)
    for (std::size_t z = 3 * k * k; z <= 6 * k * k; ++z) {
      auto r = balanced_sum_representation(z, k);
      if (!r) continue;
      ++balanced;
      std::size_t t = r->size(), small = 0, sum = 0;
      bool ok = true;
      for (auto a : *r) ok = ok && (a == k || a == k + 1), small += a == k, sum += a;
      if (!ok || sum != z || 3 * small < t || 3 * (t - small) < t) ++bad;
    }
  return {bad == 0, std::to_string(checked) + " plain and " + std::to_string(balanced) +
                        " balanced representations checked, " + std::to_string(bad) + " incorrect"};
}

Outcome ac3_absorbers() {
  std::size_t built = 0, bad = 0, failed = 0;
  for (int k = 1; k <= 3; ++k) {
    const std::size_t n = absorber_size(k) * 4 + 100;
    for (std::uint64_t seed = 0; seed < kAc3Builds; ++seed) {
      auto g = gen_random_graph(n, 0.3, RandomSeed{seed, "ac3-" + std::to_string(k)});
      ConnectorParams params;
      params.seed = seed;
      auto batch = build_absorbers(g, {0}, {1}, range(1, static_cast<Vertex>(n)), k, params);
      if (!batch) {
        ++failed;
        continue;
      }
      for (const auto& a : batch->absorbers[0]) {
        ++built;
        VertexList with = a.R;
        with.push_back(a.v);
        if (a.R.size() != 18u * k * k + 2 || !oracle::walk_problem(g, a.path_without, a.r, a.s, a.R).empty() ||
            !oracle::walk_problem(g, a.path_with, a.r, a.s, with).empty())
          ++bad;
      }
    }
  }
  return {bad == 0 && failed == 0, std::to_string(built) + " gadgets checked, " + std::to_string(bad) +
                                       " invalid, " + std::to_string(failed) + " constructions failed"};
}

Outcome ac4_robust_sets() {
  std::size_t sets = 0, queries = 0, bad = 0, failed = 0;
  for (std::size_t i = 0; i < kAc4Sets; ++i) {
    const std::size_t r = 1 + i % 3, n = 600 * r + 300, length = 115;
    auto g = gen_random_graph(n, 0.3, RandomSeed{i, "ac4"});
    Vertex v = 0;
    VertexList pool, sources, targets;
    for (std::size_t j = 0; j < 2 * r; ++j) pool.push_back(v++);
    for (std::size_t j = 0; j < 3 * r; ++j) sources.push_back(v++);
    for (std::size_t j = 0; j < 3 * r; ++j) targets.push_back(v++);
    RobustSetParams params;
    params.connector.seed = i;
    auto rs = build_robust_set(g, pool, sources, targets, range(v, static_cast<Vertex>(n)), length, params);
    if (!rs) {
      ++failed;
      continue;
    }
    ++sets;
    Rng rng(derive_seed(i, "queries"));
    for (std::size_t q = 0; q < kAc4Queries; ++q) {
      ++queries;
      auto chosen = rng.sample(pool, r);
      auto out = query_robust_set(*rs, chosen);
      if (!out) {
        ++bad;
        continue;
      }
      VertexList allowed = rs->covered;
      allowed.insert(allowed.end(), chosen.begin(), chosen.end());
      std::vector<std::size_t> lengths(3 * r, length - 1);
      std::set<Vertex> interiors;
      for (const auto& p : *out) interiors.insert(p.begin() + 1, p.end() - 1);
      if (out->size() != 3 * r ||
          !oracle::bundle_problem(g.arcs(), rs->sources, rs->targets, lengths, allowed, *out).empty() ||
          interiors != std::set<Vertex>(allowed.begin(), allowed.end()))
        ++bad;
    }
  }
  return {bad == 0 && failed == 0, std::to_string(sets) + " sets, " + std::to_string(queries) + " queries, " +
                                       std::to_string(bad) + " bad answers, " + std::to_string(failed) +
                                       " builds failed"};
}

Outcome ac5_templates() {
  std::ostringstream d;
  bool pass = true;
  for (std::size_t n0 : {6u, 9u, 12u}) {
    std::size_t subsets = 0, missing = 0, failed = 0;
    int degree = 0;
    for (std::uint64_t seed = 1; seed <= kAc5Seeds; ++seed) {
      auto t = build_flexible_template(n0, seed);
      if (!t) {
        ++failed;
        continue;
      }
      degree = std::max(degree, t->max_degree());
      const int y = static_cast<int>(t->y_size()), z = static_cast<int>(t->z_size());
      const int pick = static_cast<int>(n0 / 3);
      for (std::uint32_t mask = 0; mask < (1u << z); ++mask) {
        if (__builtin_popcount(mask) != pick) continue;
        ++subsets;
        // Right side relabelled as Y followed by the chosen Z positions.
        std::map<int, int> relabel;
        for (int j = 0; j < y; ++j) relabel[j] = j;
        int next = y;
        for (int j = 0; j < z; ++j)
          if (mask >> j & 1u) relabel[y + j] = next++;
        std::vector<std::vector<int>> adj(n0);
        for (std::size_t i = 0; i < n0; ++i)
          for (int j : t->adjacency[i])
            if (relabel.count(j)) adj[i].push_back(relabel[j]);
        if (!oracle::saturating_matching(adj, next)) ++missing;
      }
    }
    if (missing || failed || degree > kAc5MaxDegree) pass = false;
    if (n0 != 6) d << "; ";
    d << "n0=" << n0 << ": " << kAc5Seeds - failed << " templates, " << subsets << " subsets, " << missing
      << " without matching, max degree " << degree;
  }
  return {pass, d.str()};
}

Outcome ac6_spanning() {
  struct Case {
    std::size_t t, l;
    double p;
  };
  const Case cases[] = {{10, 5, 0.4}, {20, 30, 0.2}, {8, 12, 0.5}, {5, 120, 0.25}, {60, 150, 0.3}};
  std::size_t ok = 0, guard = 0, failed = 0, bad = 0;
  for (std::size_t i = 0; i < kAc6Instances; ++i) {
    const Case c = cases[i % 5];
    const std::size_t n = 2 * c.t + c.t * (c.l - 1);
    auto g = gen_random_graph(n, c.p, RandomSeed{i, "ac6"});
    VertexList X = range(0, c.t), Y = range(c.t, 2 * c.t), W = range(2 * c.t, n);
    SpanningParams params;
    params.connector.seed = i;
    VertexList short_w(W.begin(), W.end() - 1);
    try {
      (void)connect_pairs_spanning(g, X, Y, c.l, short_w, params);
    } catch (const std::invalid_argument&) {
      ++guard;
    }
    auto r = connect_pairs_spanning(g, X, Y, c.l, W, params);
    if (!r) {
      ++failed;
      continue;
    }
    std::vector<std::size_t> lengths(c.t, c.l);
    std::multiset<Vertex> interiors;
    for (const auto& p : r->bundle.paths) interiors.insert(p.begin() + 1, p.end() - 1);
    if (!oracle::bundle_problem(g.arcs(), X, Y, lengths, W, r->bundle.paths).empty() ||
        interiors != std::multiset<Vertex>(W.begin(), W.end()))
      ++bad;
    else
      ++ok;
  }
  return {ok == kAc6Instances && guard == kAc6Instances,
          std::to_string(ok) + "/" + std::to_string(kAc6Instances) + " exact covers, " + std::to_string(guard) +
              " guard rejections of |W| != t(l-1), " + std::to_string(failed) + " failed, " + std::to_string(bad) +
              " invalid"};
}

// The identity is checked as displayed, and also in the form that counts
// every digraph vertex on the closed walk once.
Outcome ac7_phase3_arithmetic() {
  auto profile = practical_profile(3);
  profile.K = 27;
  profile.short_cutoff = 3;
  profile.phase2_segment = 30;
  std::size_t embeddings = 0, attempts = 0, cycles = 0, literal = 0, counted = 0, rebuilt = 0, two_paths = 0;
  // Short-heavy specs need the long cycles to stay under n/K vertices in
  // total: one cycle of 28..71 or two of 28..35.
  const std::size_t n = 2000;
  for (std::uint64_t seed = 0; embeddings < kAc7Embeddings && attempts < 2 * kAc7Embeddings; ++seed) {
    ++attempts;
    Rng rng(derive_seed(seed, "ac7"));
    std::vector<std::size_t> lengths;
    std::size_t used = 0;
    const std::size_t m = 1 + rng.below(2);
    for (std::size_t c = 0; c < m; ++c) {
      lengths.push_back(28 + rng.below(m == 1 ? 44 : 8));
      used += lengths.back();
    }
    while (used + 3 <= n) lengths.push_back(3), used += 3;
    while (used < n) lengths.push_back(1), ++used;
    auto spec = CycleSpec::from_lengths(lengths);
    if (classify(spec, profile) != SpecClass::H2) continue;
    auto layers = make_layers(n, 0.5, seed);
    EmbedReport report;
    auto r = embed(layers, spec, profile, seed, &report);
    if (!r || report.phase != "phase3") continue;
    ++embeddings;
    for (const auto& lc : report.long_cycles) {
      ++cycles;
      const long long sum = std::accumulate(lc.alpha.begin(), lc.alpha.end(), 0LL);
      const long long t = static_cast<long long>(lc.alpha.size()), u = lc.u, beta = lc.beta;
      const long long length = static_cast<long long>(lc.length);
      literal += (sum + t - 2 - beta) * u + beta == length;
      counted += (sum - beta) * u + beta == length;
      rebuilt += lc.rebuilt == lc.length;
      two_paths += t == 2;
    }
  }
  Outcome o;
  o.pass = embeddings == kAc7Embeddings && cycles > 0 && literal == cycles;
  o.detail = std::to_string(embeddings) + " embeddings in " + std::to_string(attempts) + " attempts, " +
             std::to_string(cycles) + " long cycles: displayed identity holds for " + std::to_string(literal) +
             ", counted identity (sum(alpha) - beta) * u + beta holds for " + std::to_string(counted) +
             ", host cycle length matches for " + std::to_string(rebuilt) + ", two-path cycles " +
             std::to_string(two_paths);
  return o;
}

Outcome ac8_coupling() {
  std::ostringstream d;
  bool pass = true;
  const std::size_t n = 6;
  for (double p : {0.1, 0.3, 0.6}) {
    std::size_t hits = 0, mismatched = 0;
    for (std::uint64_t s = 0; s < kAc8Samples; ++s) {
      auto layers = make_layers(n, p, s);
      hits += layers.host.has_edge(0, 1);
      auto sample = gen_random_graph(n, p, RandomSeed{s, "G"});
      for (auto [a, b] : layers.host.edges())
        if (!sample.has_edge(a, b)) {
          ++mismatched;
          break;
        }
    }
    const double m = static_cast<double>(kAc8Samples);
    const double sigma = std::sqrt(m * p * (1 - p));
    const double z = (static_cast<double>(hits) - m * p) / sigma;
    if (std::abs(z) > kAc8Sigmas || mismatched) pass = false;
    if (p != 0.1) d << "; ";
    d << "p=" << p << ": rate " << fmt("%.4f", hits / m) << " (" << fmt("%+.2f", z) << " sd), " << mismatched
      << " samples outside G(n,p)";
  }
  return {pass, d.str()};
}

Outcome ac9_thresholds() {
  std::ostringstream d;
  bool pass = true;

  // Oracle thresholds: non-increasing up to the bisection resolution.
  ThresholdConfig oc;
  oc.trials = kAc9OracleTrials;
  oc.resolution = kAc9OracleResolution;
  oc.master_seed = 1;
  oc.workers = resolve_workers(1);
  double previous = 1.0;
  d << "oracle p*:";
  for (std::size_t n : {8u, 10u, 12u, 14u}) {
    auto e = estimate_threshold(n, 3, 0.5, oc);
    d << " n=" << n << " " << fmt("%.4f", e.p_star);
    if (e.p_star > previous + oc.resolution) pass = false;
    previous = e.p_star;
  }

  // Pipeline thresholds and the log-log slope.
  ThresholdConfig pc;
  pc.mode = SuccessMode::Pipeline;
  pc.policy = SpecPolicy::Random;
  pc.profile = "sweep";
  pc.trials = kAc9PipelineTrials;
  pc.resolution = kAc9PipelineResolution;
  pc.master_seed = 1;
  pc.workers = oc.workers;
  std::vector<std::size_t> ns{20, 40, 60, 80, 100, 120};
  std::vector<double> ps;
  d << "; pipeline p*:";
  for (std::size_t n : ns) {
    ps.push_back(estimate_threshold(n, 3, 0.5, pc).p_star);
    d << " n=" << n << " " << fmt("%.3f", ps.back());
  }
  auto fit = fit_log_slope(ns, ps);
  const bool in_band = std::abs(fit.slope - kAc9SlopeTarget) <= kAc9SlopeBand;
  d << "; slope " << fmt("%.3f", fit.slope) << " [" << fmt("%.3f", fit.ci_low) << ", " << fmt("%.3f", fit.ci_high)
    << "] " << (in_band ? "inside" : "outside") << " -2/3 +- 0.2 (diagnostic)";

  // Hard gate: success never drops as p grows over coupled hosts.
  auto monotone_rates = [&](const SweepConfig& config, std::size_t& inversions) {
    auto result = run_sweep(config);
    std::map<std::size_t, std::vector<std::pair<double, double>>> curve;
    for (const auto& pt : result.points) curve[pt.n].push_back({pt.p, pt.success_rate()});
    bool ok = true;
    for (auto& [n, c] : curve) {
      std::sort(c.begin(), c.end());
      for (std::size_t i = 1; i < c.size(); ++i) ok = ok && c[i].second >= c[i - 1].second;
    }
    std::map<std::tuple<std::size_t, std::uint64_t, std::string>, std::vector<std::pair<double, bool>>> runs;
    for (const auto& r : result.records) runs[{r.n, r.seed, r.spec_id}].push_back({r.p, r.success});
    inversions = 0;
    for (auto& [key, seq] : runs) {
      std::sort(seq.begin(), seq.end());
      for (std::size_t i = 1; i < seq.size(); ++i) inversions += seq[i - 1].second && !seq[i].second;
    }
    return ok;
  };
  SweepConfig os;
  os.n_values = {8, 10};
  for (int i = 1; i <= 19; ++i) os.p_grid.push_back(0.05 * i);
  os.trials = 50;
  os.mode = SuccessMode::Oracle;
  os.master_seed = 2;
  os.workers = oc.workers;
  std::size_t oracle_inversions = 0;
  bool oracle_monotone = monotone_rates(os, oracle_inversions);
  SweepConfig ps_config;
  ps_config.n_values = {20, 60, 120};
  for (int i = 2; i <= 10; ++i) ps_config.p_grid.push_back(0.1 * i);
  ps_config.trials = 20;
  ps_config.policy = SpecPolicy::Random;
  ps_config.random_specs = 6;
  ps_config.profile = "sweep";
  ps_config.master_seed = 2;
  ps_config.workers = oc.workers;
  std::size_t pipeline_inversions = 0;
  bool pipeline_monotone = monotone_rates(ps_config, pipeline_inversions);
  pass = pass && oracle_monotone && oracle_inversions == 0 && pipeline_monotone;
  d << "; coupled rates monotone: oracle " << (oracle_monotone ? "yes" : "no") << " (" << oracle_inversions
    << " per-host inversions), pipeline " << (pipeline_monotone ? "yes" : "no") << " (" << pipeline_inversions
    << " per-host inversions)";
  return {pass, d.str()};
}

Outcome ac10_family_counts() {
  std::size_t checked = 0, bad = 0;
  for (std::size_t n = 1; n <= 40; ++n)
    for (int ell = 3; ell <= 5; ++ell)
      for (std::size_t K = static_cast<std::size_t>(ell); K <= 8; ++K) {
        ++checked;
        auto allowed = [&](std::size_t a) { return a <= 2 || (a >= static_cast<std::size_t>(ell) && a <= K); };
        const std::uint64_t expected = oracle::restricted_partitions(n, n, allowed);
        if (enumerate_bounded_family(n, ell, K).size() != expected ||
            expected > oracle::binomial(n + K - 1, K - 1))
          ++bad;
      }
  return {bad == 0, std::to_string(checked) + " (n, ell, K) triples, " + std::to_string(bad) + " mismatches"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1", ac1_oracle_agreement}, {"AC2", ac2_partitions},    {"AC3", ac3_absorbers},
      {"AC4", ac4_robust_sets},      {"AC5", ac5_templates},     {"AC6", ac6_spanning},
      {"AC7", ac7_phase3_arithmetic}, {"AC8", ac8_coupling},     {"AC9", ac9_thresholds},
      {"AC10", ac10_family_counts}};
  std::set<std::string> wanted(argv + 1, argv + argc);
  bool all = true;
  for (const auto& [name, run] : criteria) {
    if (!wanted.empty() && !wanted.count(name)) continue;
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << name << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << o.detail << " [" << fmt("%.1f", secs) << "s]"
              << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
