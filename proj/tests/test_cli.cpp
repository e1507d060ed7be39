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

// Drives the built binary end to end through temp files; the binary path
// arrives via the OBSDECOMP_CLI environment variable set by ctest.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "obsdecomp/io.hpp"
#include "obsdecomp/pauli.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace obsdecomp;

namespace {

std::string cli_path() {
  const char* env = std::getenv("OBSDECOMP_CLI");
  REQUIRE(env != nullptr);
  return env;
}

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("obsdecomp_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int counter() {
    static int c = 0;
    return c++;
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("decompose handles a Pauli-sum input and meets eps1") {
  TempDir dir;
  write_file(dir.file("h.txt"), "1.0 ZZ\n");
  const std::string ckpt = dir.file("ckpt.json");
  const int code =
      run("decompose --pauli " + dir.file("h.txt") + " --L 0 --K 4 " +
          "--eps1 1e-8 --seed 3 --out " + ckpt + " --residuals " +
          dir.file("res.csv"));
  CHECK(code == 0);

  const Decomposition d = checkpoint_from_json(load_json_file(ckpt));
  CHECK(d.terms.size() == 1);
  CHECK(d.residual_spec.back() <= 1e-8);

  const std::string res = read_file(dir.file("res.csv"));
  CHECK(res.find("# manifest=") == 0);
  CHECK(res.find("k,fro_norm,spec_norm") != std::string::npos);
}

TEST_CASE("decompose --resume on a finished checkpoint is a no-op") {
  TempDir dir;
  write_file(dir.file("h.txt"), "1.0 ZZ\n");
  const std::string ckpt = dir.file("ckpt.json");
  const std::string base = "decompose --pauli " + dir.file("h.txt") +
                           " --L 0 --K 4 --eps1 1e-8 --seed 3 --out " + ckpt;
  REQUIRE(run(base) == 0);
  const std::string before = read_file(ckpt);
  CHECK(run(base + " --resume " + ckpt) == 0);
  CHECK(read_file(ckpt) == before);
}

TEST_CASE("decompose returns the truncation exit code") {
  TempDir dir;
  write_file(dir.file("h.txt"), "1.0 XX\n0.5 ZI\n0.25 YZ\n");
  const int code =
      run("decompose --pauli " + dir.file("h.txt") + " --L 0 --K 1 " +
          "--eps1 1e-12 --seed 1 --out " + dir.file("c.json"));
  CHECK(code == 2);
}

TEST_CASE("decompose round-trips a coo operator within its residual") {
  TempDir dir;
  const DenseOperator h = oracles::random_hermitian(2, 12);
  write_file(dir.file("h.json"), operator_to_json(h, "coo").dump());
  const std::string ckpt = dir.file("ckpt.json");
  REQUIRE(run("decompose --operator " + dir.file("h.json") +
              " --L 1 --K 8 --eps1 1e-3 --seed 5 --out " + ckpt) == 0);

  const Decomposition d = checkpoint_from_json(load_json_file(ckpt));
  const DenseOperator rebuilt = reconstruct(d);
  CHECK((h.entries - rebuilt.entries).norm() <=
        d.residual_fro.back() + 1e-9);
}

TEST_CASE("estimate produces a deterministic report and CSV") {
  TempDir dir;
  write_file(dir.file("h.txt"), "1.0 Z\n");
  const std::string ckpt = dir.file("ckpt.json");
  REQUIRE(run("decompose --pauli " + dir.file("h.txt") +
              " --L 0 --K 2 --eps1 1e-8 --seed 2 --out " + ckpt) == 0);

  const StateVector zero = StateVector::computational_basis(1, 0);
  write_file(dir.file("state.json"), state_to_json(zero).dump());

  const std::string invocation =
      "estimate --checkpoint " + ckpt + " --state " + dir.file("state.json") +
      " --eps2 0.2 --delta 0.2 --seed 9 --repetitions 50 --report " +
      dir.file("r.json") + " --csv " + dir.file("e.csv");
  REQUIRE(run(invocation) == 0);

  const json report = load_json_file(dir.file("r.json"));
  CHECK(report["value_re"].get<double>() == doctest::Approx(1.0));
  CHECK(report["value_im"].get<double>() == 0.0);
  CHECK(report.contains("manifest_digest"));

  const std::string csv_first = read_file(dir.file("e.csv"));
  // Header comment + column header + one row per repetition.
  CHECK(std::count(csv_first.begin(), csv_first.end(), '\n') == 52);

  REQUIRE(run(invocation) == 0);
  CHECK(read_file(dir.file("e.csv")) == csv_first);
}

TEST_CASE("estimate accepts a workload reference instead of files") {
  TempDir dir;
  const json config = {{"workload", "sparse"},
                       {"n", 2},
                       {"L", 1},
                       {"K", 6},
                       {"eps1", 0.05},
                       {"eps2", 0.3},
                       {"delta", 0.2},
                       {"seeds", {{"instance", 3}, {"experiment", 4}}},
                       {"optimizer",
                        {{"restarts", 2}, {"max_iters", 80}, {"rng_seed", 5}}},
                       {"shots", json::array()},
                       {"repetitions", 1},
                       {"nnz", 6}};
  write_file(dir.file("config.json"), config.dump());
  REQUIRE(run("estimate --workload " + dir.file("config.json") +
              " --eps2 0.3 --delta 0.2 --seed 8 --repetitions 2 --report " +
              dir.file("r.json") + " --csv " + dir.file("e.csv")) == 0);
  const json report = load_json_file(dir.file("r.json"));
  CHECK(report["exact_reference"] == "target");
  // Estimated ground energy lands near the exact one.
  const double err = std::abs(report["value_re"].get<double>() -
                              report["exact_re"].get<double>());
  CHECK(err < 1.0);

  // Mixing --state and --workload is a usage error.
  CHECK(run("estimate --workload " + dir.file("config.json") + " --state " +
            dir.file("config.json") + " --eps2 0.3 --delta 0.2") == 64);
}

TEST_CASE("estimate rejects a state of the wrong dimension") {
  TempDir dir;
  write_file(dir.file("h.txt"), "1.0 ZZ\n");
  const std::string ckpt = dir.file("ckpt.json");
  REQUIRE(run("decompose --pauli " + dir.file("h.txt") +
              " --L 0 --K 2 --eps1 1e-8 --seed 2 --out " + ckpt) == 0);
  write_file(dir.file("state.json"),
             state_to_json(StateVector::computational_basis(1, 0)).dump());
  CHECK(run("estimate --checkpoint " + ckpt + " --state " +
            dir.file("state.json") + " --eps2 0.2 --delta 0.2 --report " +
            dir.file("r.json") + " --csv " + dir.file("e.csv")) == 65);
}

TEST_CASE("bound reports delta and scales with epsilon") {
  TempDir dir;
  write_file(dir.file("zz.json"),
             operator_to_json(to_dense(PauliString("ZZ")), "coo").dump());
  REQUIRE(run("bound --operator " + dir.file("zz.json") +
              " --L 0 --epsilon 0.1 --restarts 2 --seed 4 --report " +
              dir.file("b1.json")) == 0);
  const json b1 = load_json_file(dir.file("b1.json"));
  CHECK(b1["delta_h0"].get<double>() >= 1.0 - 1e-6);

  REQUIRE(run("bound --operator " + dir.file("zz.json") +
              " --L 0 --epsilon 0.05 --restarts 2 --seed 4 --report " +
              dir.file("b2.json")) == 0);
  const json b2 = load_json_file(dir.file("b2.json"));
  CHECK(b2["lower_bound_T"].get<double>() ==
        doctest::Approx(4.0 * b1["lower_bound_T"].get<double>()));
}

TEST_CASE("bound of the identity is zero with a note") {
  TempDir dir;
  write_file(dir.file("id.json"),
             operator_to_json(DenseOperator::identity(2), "coo").dump());
  REQUIRE(run("bound --operator " + dir.file("id.json") +
              " --L 0 --epsilon 0.1 --restarts 1 --seed 1 --report " +
              dir.file("b.json")) == 0);
  const json b = load_json_file(dir.file("b.json"));
  CHECK(b["lower_bound_T"].get<double>() == 0.0);
  CHECK_FALSE(b["note"].get<std::string>().empty());
}

TEST_CASE("bench completes and is byte-identical across reruns") {
  TempDir dir;
  const json config = {{"workload", "sparse"},
                       {"n", 2},
                       {"L", 1},
                       {"K", 4},
                       {"eps1", 0.05},
                       {"eps2", 0.3},
                       {"delta", 0.2},
                       {"seeds", {{"instance", 11}, {"experiment", 12}}},
                       {"optimizer",
                        {{"restarts", 2}, {"max_iters", 80}, {"rng_seed", 13}}},
                       {"shots", json::array({200, 800})},
                       {"repetitions", 4},
                       {"nnz", 6}};
  write_file(dir.file("config.json"), config.dump());
  const std::string invocation = "bench --config " + dir.file("config.json") +
                                 " --out-dir " + dir.file("out");
  REQUIRE(run(invocation) == 0);

  fs::path results;
  for (const auto& entry : fs::recursive_directory_iterator(dir.file("out"))) {
    if (entry.path().filename() == "results.csv") {
      results = entry.path();
    }
  }
  REQUIRE_FALSE(results.empty());
  const std::string first = read_file(results.string());
  // 2 budgets x 4 repetitions + comment + header.
  CHECK(std::count(first.begin(), first.end(), '\n') == 10);
  CHECK(fs::exists(results.parent_path() / "summary.json"));
  CHECK(fs::exists(results.parent_path() / "residuals.csv"));
  CHECK(fs::exists(results.parent_path() / "manifest.json"));

  REQUIRE(run(invocation) == 0);
  CHECK(read_file(results.string()) == first);
}

TEST_CASE("bench rejects an invalid workload with the schema path") {
  TempDir dir;
  write_file(dir.file("config.json"), R"({"workload": "warp"})");
  const std::string cmd = cli_path() + " bench --config " +
                          dir.file("config.json") + " --out-dir " +
                          dir.file("out") + " 2>" + dir.file("err.txt") +
                          " >/dev/null";
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 65);
  const std::string err = read_file(dir.file("err.txt"));
  CHECK(err.find("/workload") != std::string::npos);
}

TEST_CASE("usage errors exit with code 64 and help with 0") {
  CHECK(run("decompose --L 0") == 64);   // missing required flags
  CHECK(run("frobnicate") == 64);        // unknown subcommand
  CHECK(run("--help") == 0);
  CHECK(run("decompose --help") == 0);
  TempDir dir;
  CHECK(run("decompose --L 0 --K 1 --eps1 0.1 --out " + dir.file("c.json")) ==
        64);  // neither --operator nor --pauli
}

TEST_CASE("missing and malformed files exit with code 65") {
  TempDir dir;
  CHECK(run("decompose --pauli " + dir.file("absent.txt") +
            " --L 0 --K 1 --eps1 0.1 --out " + dir.file("c.json")) == 65);
  write_file(dir.file("bad.txt"), "0.5 XQ\n");
  CHECK(run("decompose --pauli " + dir.file("bad.txt") +
            " --L 0 --K 1 --eps1 0.1 --out " + dir.file("c.json")) == 65);
}
