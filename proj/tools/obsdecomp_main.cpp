// Copyright 2026 The obsdecomp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>

#include "obsdecomp/bound.hpp"
#include "obsdecomp/io.hpp"
#include "obsdecomp/version.hpp"
#include "obsdecomp/workloads.hpp"

namespace fs = std::filesystem;
using namespace obsdecomp;

namespace {

// Exit codes shared by every subcommand.
constexpr int kOk = 0;
constexpr int kTruncated = 2;
constexpr int kUsageError = 64;
constexpr int kDataError = 65;

class PhaseTimer {
 public:
  void start(const std::string& phase) {
    phase_ = phase;
    begin_ = std::chrono::steady_clock::now();
  }
  void stop() {
    const auto end = std::chrono::steady_clock::now();
    wall_ms_[phase_] +=
        std::chrono::duration<double, std::milli>(end - begin_).count();
  }
  json to_json() const {
    json j = json::object();
    for (const auto& [phase, ms] : wall_ms_) {
      j[phase] = ms;
    }
    return j;
  }

 private:
  std::string phase_;
  std::chrono::steady_clock::time_point begin_;
  std::map<std::string, double> wall_ms_;
};

// The digest covers the command name, input file bytes, and the seeds and
// tolerances, so identical inputs map to identical digests regardless of
// output paths or timing. Wall-clock lives only in manifest.json.
struct Manifest {
  std::string command_line;
  std::string digest;
  json seeds = json::object();

  json to_json(const PhaseTimer& timer) const {
    json j;
    j["command_line"] = command_line;
    j["digest"] = digest;
    j["seeds"] = seeds;
    j["versions"] = {{"obsdecomp", kVersion}};
    j["wall_ms"] = timer.to_json();
    return j;
  }
};

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i > 0) {
      out += ' ';
    }
    out += argv[i];
  }
  return out;
}

std::string csv_header_line(const std::string& digest) {
  return "# manifest=" + digest + "\n";
}

int env_threads() {
  const char* env = std::getenv("OBSDECOMP_THREADS");
  if (env == nullptr) {
    return 1;
  }
  const int v = std::atoi(env);
  return v >= 1 ? v : 1;
}

OptimizerConfig optimizer_from_file(const std::string& path,
                                    std::uint64_t seed) {
  OptimizerConfig cfg;
  if (!path.empty()) {
    const json j = load_json_file(path);
    // Reuse the bench validator by wrapping the optimizer block in a
    // minimal valid config.
    std::vector<std::string> errors;
    const json wrapped = {{"workload", "sparse"},
                          {"n", 1},
                          {"L", 0},
                          {"K", 1},
                          {"eps1", 0.5},
                          {"eps2", 0.5},
                          {"delta", 0.5},
                          {"repetitions", 1},
                          {"seeds", {{"instance", 0}, {"experiment", 0}}},
                          {"shots", json::array()},
                          {"nnz", 1},
                          {"optimizer", j}};
    const BenchConfig parsed = bench_config_from_json(wrapped, errors);
    if (!errors.empty()) {
      std::string msg = "optimizer config:";
      for (const auto& e : errors) {
        msg += "\n  " + e;
      }
      throw DataError(msg);
    }
    cfg = parsed.optimizer;
  }
  cfg.rng_seed = seed;
  return cfg;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  write_file(tmp, content);
  fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------

struct DecomposeArgs {
  std::string operator_path;
  std::string pauli_path;
  std::string resume_path;
  std::string out_path = "checkpoint.json";
  std::string residuals_path;
  std::string optimizer_path;
  int n = 0;
  int depth = 0;
  int max_terms = 10;
  double eps1 = 1e-2;
  std::uint64_t seed = 0;
  int threads = 0;
};

int run_decompose(const DecomposeArgs& args, const std::string& command_line) {
  PhaseTimer timer;
  timer.start("load");
  if (args.operator_path.empty() == args.pauli_path.empty()) {
    std::cerr << "exactly one of --operator and --pauli is required\n";
    return kUsageError;
  }

  DenseOperator target;
  std::string input_bytes;
  if (!args.operator_path.empty()) {
    input_bytes = read_file(args.operator_path);
    target = operator_from_json(load_json_file(args.operator_path));
  } else {
    input_bytes = read_file(args.pauli_path);
    target = to_dense(pauli_sum_from_text(input_bytes));
  }
  if (args.n > 0 && args.n != target.n_qubits) {
    throw DataError("--n does not match the input operator");
  }

  Manifest manifest;
  manifest.command_line = command_line;
  manifest.seeds = {{"rng_seed", args.seed}};
  manifest.digest = digest_bytes("decompose|" + input_bytes + "|" +
                                 std::to_string(args.seed) + "|" +
                                 std::to_string(args.depth) + "|" +
                                 std::to_string(args.max_terms) + "|" +
                                 fmt_double(args.eps1) + "|" + kVersion);
  timer.stop();

  const OptimizerConfig cfg =
      optimizer_from_file(args.optimizer_path, args.seed);
  const AnsatzSpec spec(target.n_qubits, args.depth);
  const int threads = args.threads > 0 ? args.threads : env_threads();

  const TermCallback checkpoint_each_term = [&](const Decomposition& d) {
    json j = checkpoint_to_json(d);
    j["manifest_digest"] = manifest.digest;
    atomic_write(args.out_path, j.dump(2) + "\n");
  };

  timer.start("decompose");
  Decomposition result;
  if (!args.resume_path.empty()) {
    const Decomposition prior =
        checkpoint_from_json(load_json_file(args.resume_path));
    if (prior.spec.n_qubits != target.n_qubits ||
        prior.spec.depth != args.depth) {
      throw DataError("checkpoint ansatz does not match --L or the operator");
    }
    if (!prior.truncated && prior.residual_spec.back() <= args.eps1) {
      std::cout << "checkpoint already meets eps1; nothing to do\n";
      return kOk;
    }
    result = continue_decompose(target, prior, args.eps1, args.max_terms, cfg,
                                threads, checkpoint_each_term);
  } else {
    result = greedy_decompose(target, spec, args.eps1, args.max_terms, cfg,
                              threads, checkpoint_each_term);
  }
  timer.stop();

  timer.start("write");
  json out = checkpoint_to_json(result);
  out["manifest_digest"] = manifest.digest;
  atomic_write(args.out_path, out.dump(2) + "\n");
  if (!args.residuals_path.empty()) {
    atomic_write(args.residuals_path,
                 csv_header_line(manifest.digest) + residuals_csv(result));
  }
  atomic_write(args.out_path + ".manifest.json",
               manifest.to_json(timer).dump(2) + "\n");
  timer.stop();

  std::cout << "terms=" << result.terms.size()
            << " residual_spec=" << fmt_double(result.residual_spec.back())
            << " residual_fro=" << fmt_double(result.residual_fro.back())
            << (result.truncated ? " truncated" : "") << "\n";
  return result.truncated ? kTruncated : kOk;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string checkpoint_path;
  std::string state_path;
  std::string workload_path;
  std::string report_path = "estimate_report.json";
  std::string csv_path = "estimate.csv";
  double eps2 = 0.1;
  double delta = 0.1;
  std::uint64_t seed = 0;
  int repetitions = 1;
  int threads = 0;
};

int run_estimate(const EstimateArgs& args, const std::string& command_line) {
  PhaseTimer timer;
  timer.start("load");
  const bool workload_mode = !args.workload_path.empty();
  if (workload_mode == !args.state_path.empty()) {
    std::cerr << "exactly one of --state and --workload is required\n";
    return kUsageError;
  }
  if (!workload_mode && args.checkpoint_path.empty()) {
    std::cerr << "--checkpoint is required together with --state\n";
    return kUsageError;
  }

  Decomposition d;
  StateVector psi;
  std::string input_bytes;
  cx exact;
  std::string exact_reference;
  const int threads = args.threads > 0 ? args.threads : env_threads();

  if (workload_mode) {
    input_bytes = read_file(args.workload_path);
    const json config_json = json::parse(input_bytes, nullptr, false);
    if (config_json.is_discarded()) {
      throw DataError("invalid JSON in " + args.workload_path);
    }
    std::vector<std::string> errors;
    BenchConfig cfg = bench_config_from_json(config_json, errors);
    if (!errors.empty()) {
      std::string msg = "config validation failed:";
      for (const auto& e : errors) {
        msg += "\n  " + e;
      }
      throw DataError(msg);
    }
    const WorkloadInstance instance = build_workload_instance(cfg);
    psi = instance.input_state;
    if (!args.checkpoint_path.empty()) {
      const std::string ckpt_bytes = read_file(args.checkpoint_path);
      input_bytes += ckpt_bytes;
      d = checkpoint_from_json(load_json_file(args.checkpoint_path));
      if (d.target_hash != operator_digest(instance.target)) {
        throw DataError("checkpoint was built for a different operator");
      }
    } else {
      timer.stop();
      timer.start("decompose");
      d = greedy_decompose(instance.target,
                           AnsatzSpec(psi.n_qubits, cfg.depth), cfg.eps1,
                           cfg.max_terms, cfg.optimizer, threads);
      timer.stop();
      timer.start("load");
    }
    // The true target is known here, so errors are reported against it.
    exact = expectation(psi, instance.target);
    exact_reference = "target";
  } else {
    const std::string ckpt_bytes = read_file(args.checkpoint_path);
    const std::string state_bytes = read_file(args.state_path);
    const json ckpt_json = json::parse(ckpt_bytes, nullptr, false);
    const json state_json = json::parse(state_bytes, nullptr, false);
    if (ckpt_json.is_discarded() || state_json.is_discarded()) {
      throw DataError("invalid JSON input");
    }
    d = checkpoint_from_json(ckpt_json);
    psi = state_from_json(state_json);
    input_bytes = ckpt_bytes + state_bytes;
    // Without the target operator the reconstruction is the exact reference.
    exact = 0.0;
    exact_reference = "reconstruction";
  }
  if (psi.n_qubits != d.spec.n_qubits) {
    throw DataError("state and checkpoint disagree on the qubit count");
  }
  if (exact_reference == "reconstruction") {
    exact = expectation(psi, reconstruct(d));
  }

  Manifest manifest;
  manifest.command_line = command_line;
  manifest.seeds = {{"rng_seed", args.seed}};
  manifest.digest =
      digest_bytes("estimate|" + input_bytes + "|" +
                   std::to_string(args.seed) + "|" + fmt_double(args.eps2) +
                   "|" + fmt_double(args.delta) + "|" +
                   std::to_string(args.repetitions) + "|" + kVersion);
  timer.stop();

  timer.start("estimate");
  std::string csv = csv_header_line(manifest.digest) +
                    "seed,T,value_re,value_im,abs_error_vs_exact\n";
  json first_report;
  cx first_value;
  for (int rep = 0; rep < args.repetitions; ++rep) {
    const std::uint64_t rep_seed =
        derive_seed(args.seed, static_cast<std::uint64_t>(rep));
    const EstimateReport report =
        estimate(psi, d, args.eps2, args.delta, rep_seed);
    if (rep == 0) {
      first_report = estimate_report_to_json(report);
      first_value = report.value;
    }
    csv += std::to_string(rep_seed) + "," + std::to_string(report.shots_used) +
           "," + fmt_complex_pair(report.value) + "," +
           fmt_double(std::abs(report.value - exact)) + "\n";
  }
  timer.stop();

  timer.start("write");
  first_report["manifest_digest"] = manifest.digest;
  first_report["exact_re"] = exact.real();
  first_report["exact_im"] = exact.imag();
  first_report["exact_reference"] = exact_reference;
  first_report["repetitions"] = args.repetitions;
  atomic_write(args.report_path, first_report.dump(2) + "\n");
  atomic_write(args.csv_path, csv);
  atomic_write(args.report_path + ".manifest.json",
               manifest.to_json(timer).dump(2) + "\n");
  timer.stop();

  std::cout << "value=" << fmt_complex_pair(first_value) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct BoundArgs {
  std::string operator_path;
  std::string report_path = "bound_report.json";
  int n = 0;
  int depth = 0;
  double epsilon = 0.1;
  int restarts = 16;
  std::uint64_t seed = 0;
  int threads = 0;
};

int run_bound(const BoundArgs& args, const std::string& command_line) {
  PhaseTimer timer;
  timer.start("load");
  const std::string input_bytes = read_file(args.operator_path);
  const json input_json = json::parse(input_bytes, nullptr, false);
  if (input_json.is_discarded()) {
    throw DataError("invalid JSON in " + args.operator_path);
  }
  const DenseOperator h = operator_from_json(input_json);
  if (args.n > 0 && args.n != h.n_qubits) {
    throw DataError("--n does not match the input operator");
  }

  Manifest manifest;
  manifest.command_line = command_line;
  manifest.seeds = {{"rng_seed", args.seed}};
  manifest.digest = digest_bytes(
      "bound|" + input_bytes + "|" + std::to_string(args.seed) + "|" +
      std::to_string(args.depth) + "|" + fmt_double(args.epsilon) + "|" +
      std::to_string(args.restarts) + "|" + kVersion);
  timer.stop();

  OptimizerConfig cfg;
  cfg.restarts = args.restarts;
  cfg.rng_seed = args.seed;
  const int threads = args.threads > 0 ? args.threads : env_threads();

  timer.start("ascent");
  const BoundReport report = lower_bound(
      h, AnsatzSpec(h.n_qubits, args.depth), args.epsilon, cfg, threads);
  timer.stop();

  timer.start("write");
  json j = bound_report_to_json(report);
  j["manifest_digest"] = manifest.digest;
  atomic_write(args.report_path, j.dump(2) + "\n");
  atomic_write(args.report_path + ".manifest.json",
               manifest.to_json(timer).dump(2) + "\n");
  timer.stop();

  std::cout << "delta_h0=" << fmt_double(report.delta_h0)
            << " lower_bound_T=" << fmt_double(report.lower_bound_T) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string config_path;
  std::string out_dir = "bench_out";
  int threads = 0;
};

int run_bench(const BenchArgs& args, const std::string& command_line) {
  PhaseTimer timer;
  timer.start("load");
  const std::string config_bytes = read_file(args.config_path);
  const json config_json = json::parse(config_bytes, nullptr, false);
  if (config_json.is_discarded()) {
    throw DataError("invalid JSON in " + args.config_path);
  }
  std::vector<std::string> errors;
  BenchConfig cfg = bench_config_from_json(config_json, errors);
  if (!errors.empty()) {
    std::cerr << "config validation failed:\n";
    for (const auto& e : errors) {
      std::cerr << "  " << e << "\n";
    }
    return kDataError;
  }
  cfg.threads = args.threads > 0 ? args.threads : env_threads();

  Manifest manifest;
  manifest.command_line = command_line;
  manifest.seeds = {{"instance", cfg.instance_seed},
                    {"experiment", cfg.experiment_seed},
                    {"optimizer", cfg.optimizer.rng_seed}};
  manifest.digest = digest_bytes("bench|" + config_bytes + "|" + kVersion);
  timer.stop();

  timer.start("run");
  const BenchOutput out = run_benchmark(cfg);
  timer.stop();

  timer.start("write");
  const fs::path dir = fs::path(args.out_dir) / manifest.digest;
  fs::create_directories(dir);

  std::string results = csv_header_line(manifest.digest) +
                        "shots_budget,repetition,seed,shots_used,batches,"
                        "batch_size,value_re,value_im,abs_error\n";
  for (const BenchRow& row : out.rows) {
    results += std::to_string(row.shots_budget) + "," +
               std::to_string(row.repetition) + "," +
               std::to_string(row.seed) + "," +
               std::to_string(row.shots_used) + "," +
               std::to_string(row.batches) + "," +
               std::to_string(row.batch_size) + "," +
               fmt_complex_pair(row.value) + "," +
               fmt_double(row.abs_error) + "\n";
  }
  atomic_write((dir / "results.csv").string(), results);
  atomic_write(
      (dir / "residuals.csv").string(),
      csv_header_line(manifest.digest) + residuals_csv(out.decomposition));

  json summary;
  summary["manifest_digest"] = manifest.digest;
  summary["workload"] = cfg.workload;
  summary["n"] = cfg.n;
  summary["L"] = cfg.depth;
  summary["terms"] = out.decomposition.terms.size();
  summary["truncated"] = out.decomposition.truncated;
  summary["eps1"] = cfg.eps1;
  summary["eps2"] = cfg.eps2;
  summary["delta"] = cfg.delta;
  summary["exact_re"] = out.exact.real();
  summary["exact_im"] = out.exact.imag();
  summary["exact_reconstruction_re"] = out.exact_recon.real();
  summary["exact_reconstruction_im"] = out.exact_recon.imag();
  summary["residual_final_fro"] = out.decomposition.residual_fro.back();
  summary["residual_final_spec"] = out.decomposition.residual_spec.back();
  json budgets = json::array();
  for (const BudgetSummary& b : out.budgets) {
    budgets.push_back({{"shots", b.shots},
                       {"mean_abs_error", b.mean_abs_error},
                       {"ci95_lo", b.ci95_lo},
                       {"ci95_hi", b.ci95_hi},
                       {"p50", b.p50},
                       {"p90", b.p90},
                       {"hit_rate", b.hit_rate}});
  }
  summary["budgets"] = std::move(budgets);
  atomic_write((dir / "summary.json").string(), summary.dump(2) + "\n");
  atomic_write((dir / "manifest.json").string(),
               manifest.to_json(timer).dump(2) + "\n");
  timer.stop();

  std::cout << "wrote " << (dir / "results.csv").string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"observable decomposition and estimation with shallow "
               "parameterized circuits"};
  app.require_subcommand(1);
  const std::string command_line = join_args(argc, argv);

  DecomposeArgs dec;
  CLI::App* cmd_dec = app.add_subcommand(
      "decompose", "greedy projected decomposition of an operator");
  cmd_dec->add_option("--operator", dec.operator_path,
                      "operator JSON file (dense or coo)");
  cmd_dec->add_option("--pauli", dec.pauli_path,
                      "Pauli-sum text file (coeff LETTERS per line)");
  cmd_dec->add_option("--n", dec.n, "expected qubit count (consistency check)");
  cmd_dec->add_option("--L", dec.depth, "ansatz depth")->required();
  cmd_dec->add_option("--K", dec.max_terms, "max decomposition terms")
      ->required();
  cmd_dec->add_option("--eps1", dec.eps1, "target spectral residual")
      ->required();
  cmd_dec->add_option("--seed", dec.seed, "decomposition RNG seed");
  cmd_dec->add_option("--optimizer-json", dec.optimizer_path,
                      "optimizer config JSON file");
  cmd_dec->add_option("--resume", dec.resume_path, "checkpoint to resume");
  cmd_dec->add_option("--out", dec.out_path, "checkpoint output path");
  cmd_dec->add_option("--residuals", dec.residuals_path,
                      "residual-history CSV output path");
  cmd_dec->add_option("--threads", dec.threads,
                      "worker cap (default OBSDECOMP_THREADS or 1)");

  EstimateArgs est;
  CLI::App* cmd_est = app.add_subcommand(
      "estimate", "importance-sampling estimate of tr(rho H_hat)");
  cmd_est->add_option("--checkpoint", est.checkpoint_path,
                      "decomposition checkpoint JSON");
  cmd_est->add_option("--state", est.state_path, "state amplitudes JSON");
  cmd_est->add_option("--workload", est.workload_path,
                      "experiment config JSON; regenerates the instance and "
                      "decomposes unless --checkpoint is also given");
  cmd_est->add_option("--eps2", est.eps2, "sampling accuracy")->required();
  cmd_est->add_option("--delta", est.delta, "failure probability")->required();
  cmd_est->add_option("--seed", est.seed, "estimation RNG seed");
  cmd_est->add_option("--repetitions", est.repetitions,
                      "independent repetitions (CSV rows)");
  cmd_est->add_option("--report", est.report_path, "report JSON output path");
  cmd_est->add_option("--csv", est.csv_path, "per-repetition CSV output path");
  cmd_est->add_option("--threads", est.threads,
                      "worker cap (default OBSDECOMP_THREADS or 1)");

  BoundArgs bnd;
  CLI::App* cmd_bnd = app.add_subcommand(
      "bound", "sample-complexity lower bound for the circuit family");
  cmd_bnd->add_option("--operator", bnd.operator_path, "operator JSON file")
      ->required();
  cmd_bnd->add_option("--n", bnd.n, "expected qubit count (consistency check)");
  cmd_bnd->add_option("--L", bnd.depth, "ansatz depth")->required();
  cmd_bnd->add_option("--epsilon", bnd.epsilon, "target accuracy")->required();
  cmd_bnd->add_option("--restarts", bnd.restarts, "ascent restarts");
  cmd_bnd->add_option("--seed", bnd.seed, "ascent RNG seed");
  cmd_bnd->add_option("--report", bnd.report_path, "report JSON output path");
  cmd_bnd->add_option("--threads", bnd.threads,
                      "worker cap (default OBSDECOMP_THREADS or 1)");

  BenchArgs bench;
  CLI::App* cmd_bench =
      app.add_subcommand("bench", "run a benchmark config end to end");
  cmd_bench->add_option("--config", bench.config_path, "experiment JSON")
      ->required();
  cmd_bench->add_option("--out-dir", bench.out_dir,
                        "parent directory for the digest-named output dir");
  cmd_bench->add_option("--threads", bench.threads,
                        "worker cap (default OBSDECOMP_THREADS or 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (cmd_dec->parsed()) {
      return run_decompose(dec, command_line);
    }
    if (cmd_est->parsed()) {
      return run_estimate(est, command_line);
    }
    if (cmd_bnd->parsed()) {
      return run_bound(bnd, command_line);
    }
    if (cmd_bench->parsed()) {
      return run_bench(bench, command_line);
    }
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}
