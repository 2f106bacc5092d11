// univ: embed cycle unions into host graphs and run universality experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "univ/embedder.hpp"
#include "univ/graph.hpp"
#include "univ/lab.hpp"
#include "univ/layers.hpp"
#include "univ/oracle.hpp"

using namespace univ;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// --spec takes a file, or the JSON itself when no such file exists.
CycleSpec load_spec(const std::string& arg) {
  if (std::filesystem::exists(arg)) return spec_from_json(slurp(arg));
  return spec_from_json(arg);
}

double edge_density(const HostGraph& g) {
  const double n = static_cast<double>(g.n());
  return n < 2 ? 0.0 : static_cast<double>(g.edge_count()) / (n * (n - 1) / 2);
}

int run_embed(const std::string& host_path, const std::string& spec_arg, const std::string& profile_name,
              std::uint64_t seed, double p, int ell, const std::string& out) {
  HostGraph host = read_edge_list(host_path);
  CycleSpec spec = load_spec(spec_arg);
  if (p <= 0.0) p = edge_density(host);
  if (p <= 0.0) {
    std::cerr << "host has no edges\n";
    return 2;
  }
  ExposureLayers layers = split_host(host, std::min(p, 1.0), seed);
  EmbedReport report;
  auto result = embed(layers, spec, profile_by_name(profile_name, ell), seed, &report);
  std::cerr << "phase " << report.phase << ", retries " << report.retries << "\n";
  for (const auto& note : report.notes) std::cerr << "note: " << note << "\n";
  if (!result) {
    for (const auto& f : report.failures) std::cerr << "attempt failed: " << f.describe() << "\n";
    std::cerr << "embedding failed: " << result.error().describe() << "\n";
    return 2;
  }
  write_text(out, embedding_to_json(*result) + "\n");
  return 0;
}

int run_sweep_cmd(const std::string& config_path, std::string out, std::string summary, std::string plot, int workers) {
  SweepConfig config = sweep_config_from_json(slurp(config_path));
  if (!out.empty()) config.out = out;
  if (workers > 0) config.workers = static_cast<std::size_t>(workers);
  if (config.out.empty()) throw std::runtime_error("no output path: pass --out or set \"out\" in the config");
  SweepResult result = run_sweep(config);
  {
    std::ofstream csv(config.out);
    if (!csv) throw std::runtime_error("cannot write " + config.out);
    write_csv(result.records, csv);
  }
  if (summary.empty()) summary = config.out + ".summary.json";
  write_text(summary, summary_to_json(result) + "\n");
  if (!plot.empty()) write_text(plot, gnuplot_script(result, config.out));
  for (const auto& pt : result.points)
    std::cerr << "n=" << pt.n << " p=" << pt.p << " success " << pt.successes << "/" << pt.attempts << " universal "
              << pt.universal_hosts << "/" << pt.hosts << "\n";
  return 0;
}

int run_oracle(std::size_t n, int ell, const std::string& host_path) {
  HostGraph host = read_edge_list(host_path);
  if (host.n() != n) throw std::runtime_error("host has " + std::to_string(host.n()) + " vertices, expected " + std::to_string(n));
  auto verdict = exhaustive_universality(n, ell, host);
  nlohmann::json j{{"n", n}, {"ell", ell}, {"universal", verdict.universal}, {"specs_checked", verdict.specs_checked}};
  if (verdict.first_failure) j["first_failure"] = nlohmann::json::parse(spec_to_json(*verdict.first_failure));
  std::cout << j.dump(2) << "\n";
  return verdict.universal ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cycle-union embedding and universality experiments"};
  app.require_subcommand(1);

  std::string host_path, spec_arg, profile = "practical", out;
  std::uint64_t seed = 0;
  double p = 0.0;
  int ell = 3;
  auto* embed_cmd = app.add_subcommand("embed", "Embed one cycle union into a host graph");
  embed_cmd->add_option("--host", host_path, "Edge-list file of the host")->required();
  embed_cmd->add_option("--spec", spec_arg, "Spec JSON file or literal {\"n\":..,\"cycles\":[..]}")->required();
  embed_cmd->add_option("--profile", profile, "Constants profile: practical or theoretical");
  embed_cmd->add_option("--seed", seed, "Seed for layer splitting and search");
  embed_cmd->add_option("--p", p, "Density used to split the host into layers (default: its edge density)");
  embed_cmd->add_option("--ell", ell, "Shortest allowed cycle length");
  embed_cmd->add_option("--out", out, "Write the embedding here instead of stdout");

  std::string config_path, summary, plot;
  int workers = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a success-rate sweep from a JSON config");
  sweep_cmd->add_option("--config", config_path, "Sweep config JSON")->required();
  sweep_cmd->add_option("--out", out, "CSV output (overrides the config)");
  sweep_cmd->add_option("--summary", summary, "Summary JSON (default: <out>.summary.json)");
  sweep_cmd->add_option("--plot", plot, "Also write a gnuplot script here");
  sweep_cmd->add_option("--workers", workers, "Worker threads; UNIV_WORKERS overrides");

  std::size_t n = 0;
  double rate = 0.5;
  ThresholdConfig tc;
  std::string mode = "oracle", policy = "exhaustive";
  auto* thr_cmd = app.add_subcommand("threshold", "Bisect for the density reaching a universality rate");
  thr_cmd->add_option("--n", n, "Number of vertices")->required();
  thr_cmd->add_option("--ell", ell, "Shortest allowed cycle length");
  thr_cmd->add_option("--rate", rate, "Target universality rate in (0,1)");
  thr_cmd->add_option("--out", out, "JSON output (default stdout)");
  thr_cmd->add_option("--mode", mode, "oracle or pipeline")->check(CLI::IsMember({"oracle", "pipeline"}));
  thr_cmd->add_option("--specs", policy, "Spec family in pipeline mode: exhaustive or random")
      ->check(CLI::IsMember({"exhaustive", "random"}));
  thr_cmd->add_option("--random-specs", tc.random_specs, "Specs per host with --specs random");
  thr_cmd->add_option("--lo", tc.lo, "Lower end of the bracket");
  thr_cmd->add_option("--hi", tc.hi, "Upper end of the bracket");
  thr_cmd->add_option("--resolution", tc.resolution, "Stop when the bracket is this narrow");
  thr_cmd->add_option("--trials", tc.trials, "Hosts per density");
  thr_cmd->add_option("--profile", tc.profile, "Constants profile for pipeline mode");
  thr_cmd->add_option("--seed", tc.master_seed, "Master seed");
  thr_cmd->add_option("--workers", tc.workers, "Worker threads; UNIV_WORKERS overrides");

  auto* oracle_cmd = app.add_subcommand("oracle", "Check a small host for universality by exhaustive search");
  oracle_cmd->add_option("--n", n, "Number of vertices")->required();
  oracle_cmd->add_option("--ell", ell, "Shortest allowed cycle length");
  oracle_cmd->add_option("--host", host_path, "Edge-list file of the host")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*embed_cmd) return run_embed(host_path, spec_arg, profile, seed, p, ell, out);
    if (*sweep_cmd) return run_sweep_cmd(config_path, out, summary, plot, workers);
    if (*thr_cmd) {
      tc.mode = success_mode_from_string(mode);
      tc.policy = spec_policy_from_string(policy);
      auto estimate = estimate_threshold(n, ell, rate, tc);
      write_text(out, threshold_to_json(estimate) + "\n");
      std::cerr << "p* = " << estimate.p_star << " [" << estimate.ci_low << ", " << estimate.ci_high << "]\n";
      return 0;
    }
    if (*oracle_cmd) return run_oracle(n, ell, host_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
