#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "univ/cycle_spec.hpp"
#include "univ/profile.hpp"
#include "univ/rng.hpp"

namespace univ {

// How success is decided: by the embedding pipeline, or by exhaustive search
// (small n only). The two are never mixed in one result.
enum class SuccessMode { Pipeline, Oracle };
const char* to_string(SuccessMode m);
SuccessMode success_mode_from_string(const std::string& s);

enum class SpecPolicy { Exhaustive, Random, Corpus };
const char* to_string(SpecPolicy p);
SpecPolicy spec_policy_from_string(const std::string& s);

struct SweepConfig {
  std::vector<std::size_t> n_values;
  int ell = 3;
  std::vector<double> p_grid;
  std::size_t trials = 10;  // hosts per (n, p); host seeds do not depend on p
  SpecPolicy policy = SpecPolicy::Exhaustive;
  std::size_t random_specs = 8;
  std::vector<CycleSpec> corpus;
  std::string profile = "practical";
  SuccessMode mode = SuccessMode::Pipeline;
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
  // Wall times make the CSV differ between runs; off by default.
  bool timing = false;
  std::string out;

  // Throws std::invalid_argument on an empty grid or zero trials.
  void validate() const;
};

// Reads {"n": [...], "ell": 3, "p": [...], "trials": 10, "specs": "exhaustive" |
// "random" | [[3,3,1], ...], "random_specs": 8, "profile": "practical", "mode":
// "pipeline" | "oracle", "seed": 0, "workers": 1, "timing": false, "out": "x.csv"}.
SweepConfig sweep_config_from_json(const std::string& text);

struct SweepRecord {
  std::size_t n = 0;
  double p = 0.0;
  std::string spec_id;
  std::uint64_t seed = 0;
  std::string phase;
  bool success = false;
  int retries = 0;
  double ms = 0.0;
};

struct SweepPoint {
  std::size_t n = 0;
  double p = 0.0;
  std::size_t attempts = 0;
  std::size_t successes = 0;
  std::size_t hosts = 0;
  std::size_t universal_hosts = 0;  // hosts on which every spec succeeded

  double success_rate() const { return attempts ? double(successes) / double(attempts) : 0.0; }
  double universal_rate() const { return hosts ? double(universal_hosts) / double(hosts) : 0.0; }
};

struct SweepResult {
  SuccessMode mode = SuccessMode::Pipeline;
  std::vector<SweepRecord> records;  // grouped by (n, p, host), specs in family order
  std::vector<SweepPoint> points;
};

// Seed of host `trial` at order n; shared by every p so that the hosts at
// different densities are coupled.
std::uint64_t host_seed(std::uint64_t master, std::size_t n, std::size_t trial);

// Uniformly chosen parts from {1, 2} and [ell, remaining] until n is used up.
CycleSpec random_spec(std::size_t n, int ell, Rng& rng);

// The specs tried at order n under the config's policy.
std::vector<CycleSpec> spec_family(const SweepConfig& config, std::size_t n);

// Worker count: config.workers, overridden by UNIV_WORKERS when set.
std::size_t resolve_workers(std::size_t configured);

SweepResult run_sweep(const SweepConfig& config);
std::vector<SweepPoint> summarize(const std::vector<SweepRecord>& records);

// CSV with header n,p,spec_id,seed,phase,success,retries,ms.
void write_csv(const std::vector<SweepRecord>& records, std::ostream& out);
std::vector<SweepRecord> read_csv(std::istream& in);
std::string summary_to_json(const SweepResult& result);
// gnuplot script plotting success rate against p, one line per n.
std::string gnuplot_script(const SweepResult& result, const std::string& csv_path);

struct ThresholdConfig {
  double lo = 0.0;
  double hi = 1.0;
  double resolution = 0.01;
  std::size_t trials = 40;
  SuccessMode mode = SuccessMode::Oracle;
  SpecPolicy policy = SpecPolicy::Exhaustive;
  std::size_t random_specs = 6;
  std::string profile = "practical";
  std::uint64_t master_seed = 0;
  std::size_t workers = 1;
};

struct RateSample {
  double p = 0.0;
  std::size_t successes = 0;  // universal hosts
  std::size_t trials = 0;
};

struct ThresholdEstimate {
  std::size_t n = 0;
  int ell = 3;
  double target = 0.5;
  SuccessMode mode = SuccessMode::Oracle;
  double p_star = 0.0;
  double ci_low = 0.0;
  double ci_high = 1.0;
  std::vector<RateSample> samples;  // in evaluation order
};

// Wilson score interval for k successes out of m at the given z.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t m, double z = 1.96);

// Fraction of the coupled hosts at density p on which every spec of the
// family succeeds.
RateSample universality_rate(std::size_t n, int ell, double p, const ThresholdConfig& config);

// Bisection on p for the density at which the universality rate reaches the
// target. Throws std::invalid_argument when [lo, hi] does not bracket it.
ThresholdEstimate estimate_threshold(std::size_t n, int ell, double target_rate,
                                     const ThresholdConfig& config);
std::string threshold_to_json(const ThresholdEstimate& estimate);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t points = 0;
};

// Least squares fit of log p* on log n with a 95% t interval on the slope.
SlopeFit fit_log_slope(const std::vector<std::size_t>& n, const std::vector<double>& p_star);

}  // namespace univ
