#include "univ/lab.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <tuple>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "univ/embedder.hpp"
#include "univ/layers.hpp"
#include "univ/oracle.hpp"

namespace univ {

const char* to_string(SuccessMode m) { return m == SuccessMode::Oracle ? "oracle" : "pipeline"; }

SuccessMode success_mode_from_string(const std::string& s) {
  if (s == "pipeline") return SuccessMode::Pipeline;
  if (s == "oracle") return SuccessMode::Oracle;
  throw std::invalid_argument("unknown mode: " + s);
}

const char* to_string(SpecPolicy p) {
  switch (p) {
    case SpecPolicy::Exhaustive: return "exhaustive";
    case SpecPolicy::Random: return "random";
    case SpecPolicy::Corpus: return "corpus";
  }
  return "?";
}

SpecPolicy spec_policy_from_string(const std::string& s) {
  if (s == "exhaustive") return SpecPolicy::Exhaustive;
  if (s == "random") return SpecPolicy::Random;
  if (s == "corpus") return SpecPolicy::Corpus;
  throw std::invalid_argument("unknown spec policy: " + s);
}

void SweepConfig::validate() const {
  if (n_values.empty()) throw std::invalid_argument("sweep: no n values");
  if (p_grid.empty()) throw std::invalid_argument("sweep: empty p grid");
  if (trials == 0) throw std::invalid_argument("sweep: trials must be at least 1");
  if (ell < 3) throw std::invalid_argument("sweep: ell must be at least 3");
  for (double p : p_grid)
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("sweep: p outside [0,1]");
  if (mode == SuccessMode::Oracle)
    for (std::size_t n : n_values)
      if (n > kOracleCap) throw std::invalid_argument("sweep: oracle mode needs n <= " + std::to_string(kOracleCap));
  if (policy == SpecPolicy::Corpus && corpus.empty()) throw std::invalid_argument("sweep: empty corpus");
}

SweepConfig sweep_config_from_json(const std::string& text) {
  SweepConfig c;
  try {
    auto j = nlohmann::json::parse(text);
    c.n_values = j.at("n").get<std::vector<std::size_t>>();
    c.p_grid = j.at("p").get<std::vector<double>>();
    c.ell = j.value("ell", 3);
    c.trials = j.value("trials", std::size_t{10});
    c.random_specs = j.value("random_specs", std::size_t{8});
    c.profile = j.value("profile", std::string("practical"));
    c.mode = success_mode_from_string(j.value("mode", std::string("pipeline")));
    c.master_seed = j.value("seed", std::uint64_t{0});
    c.workers = j.value("workers", std::size_t{1});
    c.timing = j.value("timing", false);
    c.out = j.value("out", std::string());
    if (j.contains("specs")) {
      const auto& s = j.at("specs");
      if (s.is_string()) {
        c.policy = spec_policy_from_string(s.get<std::string>());
      } else {
        c.policy = SpecPolicy::Corpus;
        for (const auto& lengths : s) c.corpus.push_back(CycleSpec::from_lengths(lengths.get<std::vector<std::size_t>>()));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad sweep config: ") + e.what());
  }
  c.validate();
  return c;
}

std::uint64_t host_seed(std::uint64_t master, std::size_t n, std::size_t trial) {
  return derive_seed(derive_seed(master, "host"), n, trial);
}

CycleSpec random_spec(std::size_t n, int ell, Rng& rng) {
  std::vector<std::size_t> lengths;
  std::size_t rest = n;
  while (rest > 0) {
    std::vector<std::size_t> allowed{1};
    if (rest >= 2) allowed.push_back(2);
    for (std::size_t l = static_cast<std::size_t>(ell); l <= rest; ++l) allowed.push_back(l);
    std::size_t pick = allowed[rng.below(allowed.size())];
    lengths.push_back(pick);
    rest -= pick;
  }
  return CycleSpec::from_lengths(std::move(lengths));
}

std::vector<CycleSpec> spec_family(const SweepConfig& config, std::size_t n) {
  switch (config.policy) {
    case SpecPolicy::Exhaustive:
      return enumerate_bounded_family(n, config.ell, n);
    case SpecPolicy::Random: {
      Rng rng(derive_seed(derive_seed(config.master_seed, "specs"), n));
      std::vector<CycleSpec> out;
      for (std::size_t i = 0; i < config.random_specs; ++i) out.push_back(random_spec(n, config.ell, rng));
      return out;
    }
    case SpecPolicy::Corpus: {
      std::vector<CycleSpec> out;
      for (const auto& s : config.corpus)
        if (s.n == n) out.push_back(s);
      return out;
    }
  }
  return {};
}

std::size_t resolve_workers(std::size_t configured) {
  if (const char* env = std::getenv("UNIV_WORKERS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::max<std::size_t>(1, configured);
}

namespace {

// Runs task(i) for i in [0, count) on `workers` threads.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& task) {
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Outcome of every spec on one host.
struct HostRun {
  std::vector<SweepRecord> records;
};

HostRun run_host(std::size_t n, double p, std::uint64_t seed, const std::vector<CycleSpec>& family,
                 const ConstantsProfile& profile, SuccessMode mode, bool timing, bool stop_at_failure) {
  using clock = std::chrono::steady_clock;
  HostRun run;
  auto record = [&](const CycleSpec& spec, const std::string& phase, bool ok, int retries, clock::time_point t0) {
    double ms = timing ? std::chrono::duration<double, std::milli>(clock::now() - t0).count() : 0.0;
    run.records.push_back({n, p, spec.id(), seed, phase, ok, retries, ms});
  };
  if (mode == SuccessMode::Oracle) {
    HostGraph host = gen_random_graph(n, p, RandomSeed{seed, "G"});
    for (const auto& spec : family) {
      auto t0 = clock::now();
      bool ok = brute_force_embed(host, spec).embeddable;
      record(spec, "oracle", ok, 0, t0);
      if (!ok && stop_at_failure) break;
    }
    return run;
  }
  ExposureLayers layers = make_layers(n, p, seed);
  Embedder embedder(layers, profile, seed);
  for (const auto& spec : family) {
    auto t0 = clock::now();
    EmbedReport report;
    bool ok = embedder.embed(spec, &report).ok();
    record(spec, report.phase, ok, report.retries, t0);
    if (!ok && stop_at_failure) break;
  }
  return run;
}

std::string format_p(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", p);
  return buf;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  config.validate();
  const ConstantsProfile profile = profile_by_name(config.profile, config.ell);
  struct Task {
    std::size_t n;
    double p;
    std::uint64_t seed;
    const std::vector<CycleSpec>* family;
  };
  std::map<std::size_t, std::vector<CycleSpec>> families;
  for (std::size_t n : config.n_values) families[n] = spec_family(config, n);
  std::vector<Task> tasks;
  for (std::size_t n : config.n_values)
    for (double p : config.p_grid)
      for (std::size_t t = 0; t < config.trials; ++t)
        tasks.push_back({n, p, host_seed(config.master_seed, n, t), &families[n]});

  std::vector<HostRun> runs(tasks.size());
  parallel_for(tasks.size(), resolve_workers(config.workers), [&](std::size_t i) {
    const Task& t = tasks[i];
    runs[i] = run_host(t.n, t.p, t.seed, *t.family, profile, config.mode, config.timing, false);
  });

  SweepResult result;
  result.mode = config.mode;
  for (auto& r : runs) result.records.insert(result.records.end(), r.records.begin(), r.records.end());
  result.points = summarize(result.records);
  return result;
}

std::vector<SweepPoint> summarize(const std::vector<SweepRecord>& records) {
  std::vector<SweepPoint> points;
  std::map<std::pair<std::size_t, std::string>, std::size_t> index;
  std::map<std::tuple<std::size_t, std::string, std::uint64_t>, bool> host_ok;
  for (const auto& r : records) {
    auto key = std::make_pair(r.n, format_p(r.p));
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, points.size()).first;
      points.push_back({r.n, r.p, 0, 0, 0, 0});
    }
    auto& pt = points[it->second];
    ++pt.attempts;
    pt.successes += r.success;
    auto hk = std::make_tuple(r.n, key.second, r.seed);
    auto h = host_ok.find(hk);
    if (h == host_ok.end()) {
      host_ok.emplace(hk, r.success);
      ++pt.hosts;
    } else {
      h->second = h->second && r.success;
    }
  }
  for (const auto& [hk, ok] : host_ok)
    if (ok) ++points[index.at({std::get<0>(hk), std::get<1>(hk)})].universal_hosts;
  return points;
}

void write_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
  out << "n,p,spec_id,seed,phase,success,retries,ms\n";
  char ms[32];
  for (const auto& r : records) {
    std::snprintf(ms, sizeof ms, "%.3f", r.ms);
    out << r.n << ',' << format_p(r.p) << ',' << r.spec_id << ',' << r.seed << ',' << r.phase << ','
        << (r.success ? 1 : 0) << ',' << r.retries << ',' << ms << '\n';
  }
}

std::vector<SweepRecord> read_csv(std::istream& in) {
  std::vector<SweepRecord> out;
  std::string line;
  if (!std::getline(in, line) || line != "n,p,spec_id,seed,phase,success,retries,ms")
    throw std::invalid_argument("csv: unexpected header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw std::invalid_argument("csv: expected 8 fields in: " + line);
    SweepRecord r;
    r.n = std::stoul(f[0]);
    r.p = std::stod(f[1]);
    r.spec_id = f[2];
    r.seed = std::stoull(f[3]);
    r.phase = f[4];
    r.success = f[5] == "1";
    r.retries = std::stoi(f[6]);
    r.ms = std::stod(f[7]);
    out.push_back(r);
  }
  return out;
}

std::string summary_to_json(const SweepResult& result) {
  nlohmann::json j;
  j["mode"] = to_string(result.mode);
  j["points"] = nlohmann::json::array();
  for (const auto& pt : result.points)
    j["points"].push_back({{"n", pt.n},
                           {"p", pt.p},
                           {"attempts", pt.attempts},
                           {"successes", pt.successes},
                           {"success_rate", pt.success_rate()},
                           {"hosts", pt.hosts},
                           {"universal_hosts", pt.universal_hosts},
                           {"universal_rate", pt.universal_rate()}});
  return j.dump(2);
}

std::string gnuplot_script(const SweepResult& result, const std::string& csv_path) {
  std::map<std::size_t, std::vector<const SweepPoint*>> by_n;
  for (const auto& pt : result.points) by_n[pt.n].push_back(&pt);
  std::ostringstream s;
  s << "# success rate against p, " << to_string(result.mode) << " mode; raw records in " << csv_path << "\n";
  s << "set xlabel 'p'\nset ylabel 'success rate'\nset yrange [0:1]\nset key left top\n";
  s << "plot";
  bool first = true;
  for (const auto& [n, pts] : by_n) {
    s << (first ? " " : ", ") << "'-' using 1:2 with linespoints title 'n=" << n << "'";
    first = false;
  }
  s << "\n";
  for (const auto& [n, pts] : by_n) {
    auto sorted = pts;
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->p < b->p; });
    for (const auto* pt : sorted) s << format_p(pt->p) << ' ' << pt->success_rate() << '\n';
    s << "e\n";
  }
  return s.str();
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t m, double z) {
  if (m == 0) return {0.0, 1.0};
  const double n = static_cast<double>(m), phat = static_cast<double>(k) / n, z2 = z * z;
  const double centre = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

RateSample universality_rate(std::size_t n, int ell, double p, const ThresholdConfig& config) {
  SweepConfig sc;
  sc.n_values = {n};
  sc.ell = ell;
  sc.policy = config.mode == SuccessMode::Oracle ? SpecPolicy::Exhaustive : config.policy;
  sc.random_specs = config.random_specs;
  sc.master_seed = config.master_seed;
  const auto family = spec_family(sc, n);
  const ConstantsProfile profile = profile_by_name(config.profile, ell);
  std::vector<char> universal(config.trials, 0);
  parallel_for(config.trials, resolve_workers(config.workers), [&](std::size_t t) {
    auto run = run_host(n, p, host_seed(config.master_seed, n, t), family, profile, config.mode, false, true);
    universal[t] = run.records.size() == family.size() &&
                   std::all_of(run.records.begin(), run.records.end(), [](const SweepRecord& r) { return r.success; });
  });
  RateSample s{p, 0, config.trials};
  for (char u : universal) s.successes += u;
  return s;
}

ThresholdEstimate estimate_threshold(std::size_t n, int ell, double target_rate, const ThresholdConfig& config) {
  if (!(target_rate > 0.0 && target_rate < 1.0)) throw std::invalid_argument("threshold: target must lie in (0,1)");
  if (!(config.lo < config.hi)) throw std::invalid_argument("threshold: empty bracket");
  if (config.trials == 0) throw std::invalid_argument("threshold: trials must be positive");
  ThresholdEstimate est;
  est.n = n;
  est.ell = ell;
  est.target = target_rate;
  est.mode = config.mode;
  auto rate = [&](double p) {
    est.samples.push_back(universality_rate(n, ell, p, config));
    const auto& s = est.samples.back();
    return static_cast<double>(s.successes) / static_cast<double>(s.trials);
  };
  double lo = config.lo, hi = config.hi;
  if (rate(lo) >= target_rate || rate(hi) < target_rate)
    throw std::invalid_argument("threshold: [" + format_p(lo) + ", " + format_p(hi) + "] does not bracket rate " +
                                format_p(target_rate));
  while (hi - lo > config.resolution) {
    double mid = (lo + hi) / 2;
    (rate(mid) >= target_rate ? hi : lo) = mid;
  }
  est.p_star = (lo + hi) / 2;
  // Interval: densities whose rate is significantly below / above the target.
  est.ci_low = config.lo;
  est.ci_high = config.hi;
  for (const auto& s : est.samples) {
    auto [wlo, whi] = wilson_interval(s.successes, s.trials);
    if (whi < target_rate) est.ci_low = std::max(est.ci_low, s.p);
    if (wlo > target_rate) est.ci_high = std::min(est.ci_high, s.p);
  }
  est.ci_low = std::min(est.ci_low, lo);
  est.ci_high = std::max(est.ci_high, hi);
  return est;
}

std::string threshold_to_json(const ThresholdEstimate& e) {
  nlohmann::json j;
  j["n"] = e.n;
  j["ell"] = e.ell;
  j["target"] = e.target;
  j["mode"] = to_string(e.mode);
  j["p_star"] = e.p_star;
  j["ci"] = {e.ci_low, e.ci_high};
  j["samples"] = nlohmann::json::array();
  for (const auto& s : e.samples) j["samples"].push_back({{"p", s.p}, {"successes", s.successes}, {"trials", s.trials}});
  return j.dump(2);
}

SlopeFit fit_log_slope(const std::vector<std::size_t>& n, const std::vector<double>& p_star) {
  if (n.size() != p_star.size() || n.size() < 2) throw std::invalid_argument("slope fit: need matching inputs, at least two");
  const std::size_t m = n.size();
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (p_star[i] <= 0.0) throw std::invalid_argument("slope fit: thresholds must be positive");
    x[i] = std::log(static_cast<double>(n[i]));
    y[i] = std::log(p_star[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) mx += x[i] / m, my += y[i] / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
  SlopeFit fit;
  fit.points = m;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.ci_low = fit.ci_high = fit.slope;
  if (m > 2) {
    double sse = 0;
    for (std::size_t i = 0; i < m; ++i) {
      double r = y[i] - (fit.intercept + fit.slope * x[i]);
      sse += r * r;
    }
    double se = std::sqrt(sse / static_cast<double>(m - 2) / sxx);
    boost::math::students_t dist(static_cast<double>(m - 2));
    double tq = boost::math::quantile(boost::math::complement(dist, 0.025));
    fit.ci_low = fit.slope - tq * se;
    fit.ci_high = fit.slope + tq * se;
  }
  return fit;
}

}  // namespace univ
