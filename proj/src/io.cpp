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

#include "obsdecomp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace obsdecomp {

namespace {

json complex_vector_to_json(const VectorC& v, bool imag) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    arr.push_back(imag ? v(i).imag() : v(i).real());
  }
  return arr;
}

int require_qubit_count(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw DataError(std::string("missing or non-integer field \"") + key +
                    "\"");
  }
  const int n = j[key].get<int>();
  if (n < 1 || n > 24) {
    throw DataError(std::string("field \"") + key + "\" out of range");
  }
  return n;
}

}  // namespace

DenseOperator operator_from_json(const json& j) {
  const int n = require_qubit_count(j, "n");
  const std::string format = j.value("format", std::string("coo"));
  if (format != "dense" && format != "coo") {
    throw DataError("operator format must be \"dense\" or \"coo\"");
  }
  if (!j.contains("entries") || !j["entries"].is_array()) {
    throw DataError("operator file has no \"entries\" array");
  }
  const std::int64_t d = dim_of(n);
  MatrixC m = MatrixC::Zero(d, d);
  std::vector<bool> seen;
  if (format == "dense") {
    seen.assign(static_cast<std::size_t>(d * d), false);
  }
  std::size_t count = 0;
  for (const auto& e : j["entries"]) {
    if (!e.is_array() || e.size() != 4 || !e[0].is_number_integer() ||
        !e[1].is_number_integer() || !e[2].is_number() || !e[3].is_number()) {
      throw DataError("operator entry must be [row, col, re, im]");
    }
    const std::int64_t r = e[0].get<std::int64_t>();
    const std::int64_t c = e[1].get<std::int64_t>();
    if (r < 0 || r >= d || c < 0 || c >= d) {
      throw DataError("operator entry index out of range");
    }
    if (format == "dense") {
      if (seen[static_cast<std::size_t>(r * d + c)]) {
        throw DataError("dense operator lists a cell twice");
      }
      seen[static_cast<std::size_t>(r * d + c)] = true;
    } else if (m(r, c) != cx(0.0, 0.0)) {
      throw DataError("coo operator lists a cell twice");
    }
    m(r, c) = cx(e[2].get<double>(), e[3].get<double>());
    ++count;
  }
  if (format == "dense" && count != static_cast<std::size_t>(d * d)) {
    throw DataError("dense operator must list every cell exactly once");
  }
  DenseOperator a(n, std::move(m));
  if (j.value("hermitian", false) && !a.is_hermitian(1e-10)) {
    throw DataError("operator flagged hermitian fails the Hermitian check");
  }
  return a;
}

json operator_to_json(const DenseOperator& a, const std::string& format) {
  if (format != "dense" && format != "coo") {
    throw std::invalid_argument("format must be \"dense\" or \"coo\"");
  }
  json entries = json::array();
  const std::int64_t d = a.dim();
  for (std::int64_t r = 0; r < d; ++r) {
    for (std::int64_t c = 0; c < d; ++c) {
      const cx v = a.entries(r, c);
      if (format == "dense" || v != cx(0.0, 0.0)) {
        entries.push_back(json::array({r, c, v.real(), v.imag()}));
      }
    }
  }
  json j;
  j["n"] = a.n_qubits;
  j["format"] = format;
  j["entries"] = std::move(entries);
  j["hermitian"] = a.is_hermitian(1e-10);
  return j;
}

StateVector state_from_json(const json& j) {
  const int n = require_qubit_count(j, "n");
  if (!j.contains("amplitudes") || !j["amplitudes"].is_array()) {
    throw DataError("state file has no \"amplitudes\" array");
  }
  const std::int64_t d = dim_of(n);
  if (static_cast<std::int64_t>(j["amplitudes"].size()) != d) {
    throw DataError("state amplitude count does not match 2^n");
  }
  VectorC amps(d);
  std::int64_t i = 0;
  for (const auto& e : j["amplitudes"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
        !e[1].is_number()) {
      throw DataError("state amplitude must be [re, im]");
    }
    amps(i++) = cx(e[0].get<double>(), e[1].get<double>());
  }
  try {
    return StateVector(n, std::move(amps));
  } catch (const std::invalid_argument& ex) {
    throw DataError(ex.what());
  }
}

json state_to_json(const StateVector& psi) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) {
    amps.push_back(json::array(
        {psi.amplitudes(i).real(), psi.amplitudes(i).imag()}));
  }
  json j;
  j["n"] = psi.n_qubits;
  j["amplitudes"] = std::move(amps);
  return j;
}

PauliSum pauli_sum_from_text(const std::string& text) {
  PauliSum sum;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  int n_qubits = -1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    double coeff;
    std::string letters;
    if (!(ls >> coeff)) {
      std::string probe;
      if (std::istringstream(line) >> probe) {
        throw DataError("line " + std::to_string(lineno) +
                        ": expected \"coeff LETTERS\"");
      }
      continue;  // blank line
    }
    if (!(ls >> letters)) {
      throw DataError("line " + std::to_string(lineno) +
                      ": missing Pauli letters");
    }
    std::string trailing;
    if (ls >> trailing) {
      throw DataError("line " + std::to_string(lineno) +
                      ": unexpected trailing content");
    }
    PauliString p;
    try {
      p = PauliString(letters);
    } catch (const std::invalid_argument& ex) {
      throw DataError("line " + std::to_string(lineno) + ": " + ex.what());
    }
    if (n_qubits < 0) {
      n_qubits = p.n_qubits();
    } else if (p.n_qubits() != n_qubits) {
      throw DataError("line " + std::to_string(lineno) +
                      ": string length differs from earlier terms");
    }
    sum.terms.push_back({coeff, std::move(p)});
  }
  if (sum.terms.empty()) {
    throw DataError("Pauli sum file contains no terms");
  }
  sum.normalize();
  if (sum.terms.empty()) {
    throw DataError("Pauli sum cancels to zero");
  }
  return sum;
}

std::string pauli_sum_to_text(const PauliSum& s) {
  std::string out;
  for (const auto& t : s.terms) {
    out += fmt_double(t.coefficient);
    out += ' ';
    out += t.string.str();
    out += '\n';
  }
  return out;
}

json checkpoint_to_json(const Decomposition& d) {
  json terms = json::array();
  for (const auto& t : d.terms) {
    json jt;
    jt["theta"] = t.theta;
    jt["lambda_re"] = complex_vector_to_json(t.lambda.values, false);
    jt["lambda_im"] = complex_vector_to_json(t.lambda.values, true);
    terms.push_back(std::move(jt));
  }
  json j;
  j["n"] = d.spec.n_qubits;
  j["L"] = d.spec.depth;
  j["hermitian"] = d.hermitian;
  j["target_hash"] = d.target_hash;
  j["terms"] = std::move(terms);
  j["residual_fro"] = d.residual_fro;
  j["residual_spec"] = d.residual_spec;
  j["truncated"] = d.truncated;
  return j;
}

Decomposition checkpoint_from_json(const json& j) {
  Decomposition d;
  const int n = require_qubit_count(j, "n");
  if (!j.contains("L") || !j["L"].is_number_integer() || j["L"].get<int>() < 0) {
    throw DataError("checkpoint is missing a valid \"L\"");
  }
  d.spec = AnsatzSpec(n, j["L"].get<int>());
  if (!j.contains("hermitian") || !j["hermitian"].is_boolean() ||
      !j.contains("target_hash") || !j["target_hash"].is_string() ||
      !j.contains("terms") || !j["terms"].is_array() ||
      !j.contains("residual_fro") || !j["residual_fro"].is_array() ||
      !j.contains("residual_spec") || !j["residual_spec"].is_array() ||
      !j.contains("truncated") || !j["truncated"].is_boolean()) {
    throw DataError("checkpoint is missing required fields");
  }
  d.hermitian = j["hermitian"].get<bool>();
  d.target_hash = j["target_hash"].get<std::string>();
  d.truncated = j["truncated"].get<bool>();
  d.residual_fro = j["residual_fro"].get<std::vector<double>>();
  d.residual_spec = j["residual_spec"].get<std::vector<double>>();

  const std::int64_t dim = dim_of(n);
  for (const auto& jt : j["terms"]) {
    if (!jt.contains("theta") || !jt["theta"].is_array() ||
        !jt.contains("lambda_re") || !jt["lambda_re"].is_array() ||
        !jt.contains("lambda_im") || !jt["lambda_im"].is_array()) {
      throw DataError("checkpoint term is missing theta/lambda fields");
    }
    DecompTerm term;
    term.theta = jt["theta"].get<std::vector<double>>();
    if (static_cast<int>(term.theta.size()) != d.spec.param_count()) {
      throw DataError("checkpoint theta length does not match the ansatz");
    }
    const auto re = jt["lambda_re"].get<std::vector<double>>();
    const auto im = jt["lambda_im"].get<std::vector<double>>();
    if (static_cast<std::int64_t>(re.size()) != dim ||
        static_cast<std::int64_t>(im.size()) != dim) {
      throw DataError("checkpoint lambda length does not match 2^n");
    }
    VectorC lambda(dim);
    for (std::int64_t i = 0; i < dim; ++i) {
      lambda(i) = cx(re[i], im[i]);
    }
    term.lambda = DiagObservable(n, std::move(lambda));
    d.terms.push_back(std::move(term));
  }
  if (d.residual_fro.size() != d.terms.size() + 1 ||
      d.residual_spec.size() != d.terms.size() + 1) {
    throw DataError("checkpoint residual history length is inconsistent");
  }
  return d;
}

json estimate_report_to_json(const EstimateReport& r) {
  json j;
  j["value_re"] = r.value.real();
  j["value_im"] = r.value.imag();
  j["shots_used"] = r.shots_used;
  j["batches"] = r.batches;
  j["batch_size"] = r.batch_size;
  j["per_term_counts"] = r.per_term_counts;
  j["rng_seed"] = r.rng_seed;
  j["raw_sample_mean"] = r.raw_sample_mean;
  j["raw_sample_variance"] = r.raw_sample_variance;
  j["dropped_shots"] = r.dropped_shots;
  return j;
}

json bound_report_to_json(const BoundReport& r) {
  json j;
  j["delta_h0"] = r.delta_h0;
  j["trace_h0_sq"] = r.trace_h0_sq;
  j["epsilon"] = r.epsilon;
  j["lower_bound_T"] = r.lower_bound_T;
  j["argmax_theta"] = r.argmax_theta;
  j["argmax_bitstring"] = r.argmax_bitstring;
  j["restarts_used"] = r.restarts_used;
  j["unbounded"] = r.unbounded;
  j["note"] = r.note;
  return j;
}

BenchConfig bench_config_from_json(const json& j,
                                   std::vector<std::string>& errors) {
  BenchConfig cfg;
  auto fail = [&errors](const std::string& path, const std::string& msg) {
    errors.push_back(path + ": " + msg);
  };

  if (!j.contains("workload") || !j["workload"].is_string()) {
    fail("/workload", "required string, one of \"sparse\", \"inner_product\"");
  } else {
    cfg.workload = j["workload"].get<std::string>();
    if (cfg.workload != "sparse" && cfg.workload != "inner_product") {
      fail("/workload", "unknown workload \"" + cfg.workload + "\"");
    }
  }

  auto get_int = [&](const char* key, int lo, int hi, int def,
                     bool required) -> int {
    const std::string path = std::string("/") + key;
    if (!j.contains(key)) {
      if (required) {
        fail(path, "required integer");
      }
      return def;
    }
    if (!j[key].is_number_integer()) {
      fail(path, "must be an integer");
      return def;
    }
    const auto v = j[key].get<std::int64_t>();
    if (v < lo || v > hi) {
      fail(path, "must lie in [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]");
      return def;
    }
    return static_cast<int>(v);
  };
  auto get_real = [&](const char* key, double def, bool required) -> double {
    const std::string path = std::string("/") + key;
    if (!j.contains(key)) {
      if (required) {
        fail(path, "required number");
      }
      return def;
    }
    if (!j[key].is_number()) {
      fail(path, "must be a number");
      return def;
    }
    return j[key].get<double>();
  };

  cfg.n = get_int("n", 1, 12, 2, true);
  cfg.depth = get_int("L", 0, 64, 1, true);
  cfg.max_terms = get_int("K", 1, 100000, 10, true);
  cfg.eps1 = get_real("eps1", 0.1, true);
  cfg.eps2 = get_real("eps2", 0.1, true);
  cfg.delta = get_real("delta", 0.1, true);
  if (cfg.eps1 <= 0) {
    fail("/eps1", "must be positive");
  }
  if (cfg.eps2 <= 0 || cfg.eps2 >= 1) {
    fail("/eps2", "must lie in (0, 1)");
  }
  if (cfg.delta <= 0 || cfg.delta >= 1) {
    fail("/delta", "must lie in (0, 1)");
  }
  cfg.repetitions = get_int("repetitions", 1, 1000000, 1, true);

  if (!j.contains("seeds") || !j["seeds"].is_object()) {
    fail("/seeds", "required object with \"instance\" and \"experiment\"");
  } else {
    const json& seeds = j["seeds"];
    if (!seeds.contains("instance") || !seeds["instance"].is_number_integer()) {
      fail("/seeds/instance", "required integer");
    } else {
      cfg.instance_seed = seeds["instance"].get<std::uint64_t>();
    }
    if (!seeds.contains("experiment") ||
        !seeds["experiment"].is_number_integer()) {
      fail("/seeds/experiment", "required integer");
    } else {
      cfg.experiment_seed = seeds["experiment"].get<std::uint64_t>();
    }
  }

  if (j.contains("optimizer")) {
    if (!j["optimizer"].is_object()) {
      fail("/optimizer", "must be an object");
    } else {
      const json& o = j["optimizer"];
      auto opt_real = [&](const char* key, double def) -> double {
        if (!o.contains(key)) {
          return def;
        }
        if (!o[key].is_number()) {
          fail(std::string("/optimizer/") + key, "must be a number");
          return def;
        }
        return o[key].get<double>();
      };
      cfg.optimizer.learning_rate =
          opt_real("learning_rate", cfg.optimizer.learning_rate);
      cfg.optimizer.fd_step = opt_real("fd_step", cfg.optimizer.fd_step);
      cfg.optimizer.grad_tol = opt_real("grad_tol", cfg.optimizer.grad_tol);
      auto opt_int = [&](const char* key, int def) -> int {
        if (!o.contains(key)) {
          return def;
        }
        if (!o[key].is_number_integer()) {
          fail(std::string("/optimizer/") + key, "must be an integer");
          return def;
        }
        return o[key].get<int>();
      };
      cfg.optimizer.max_iters = opt_int("max_iters", cfg.optimizer.max_iters);
      cfg.optimizer.restarts = opt_int("restarts", cfg.optimizer.restarts);
      if (o.contains("rng_seed")) {
        if (!o["rng_seed"].is_number_integer()) {
          fail("/optimizer/rng_seed", "must be an integer");
        } else {
          cfg.optimizer.rng_seed = o["rng_seed"].get<std::uint64_t>();
        }
      }
      try {
        cfg.optimizer.validate();
      } catch (const std::invalid_argument& ex) {
        fail("/optimizer", ex.what());
      }
    }
  }

  if (!j.contains("shots")) {
    fail("/shots", "required array of shot budgets (may be empty)");
  } else if (!j["shots"].is_array()) {
    fail("/shots", "must be an array of positive integers");
  } else {
    for (std::size_t i = 0; i < j["shots"].size(); ++i) {
      const auto& s = j["shots"][i];
      if (!s.is_number_integer() || s.get<std::int64_t>() < 1) {
        fail("/shots/" + std::to_string(i), "must be a positive integer");
      } else {
        cfg.shots.push_back(s.get<std::int64_t>());
      }
    }
  }

  if (cfg.workload == "sparse") {
    if (!j.contains("nnz") || !j["nnz"].is_number_integer() ||
        j["nnz"].get<std::int64_t>() < 1) {
      fail("/nnz", "sparse workload requires a positive integer nnz");
    } else {
      cfg.nnz = j["nnz"].get<std::int64_t>();
    }
    cfg.magnitude_scale = get_real("magnitude_scale", 1.0, false);
    if (cfg.magnitude_scale <= 0) {
      fail("/magnitude_scale", "must be positive");
    }
  }
  if (cfg.workload == "inner_product") {
    cfg.tau = get_int("tau", 1, 24, 1, true);
    if (cfg.tau > cfg.n) {
      fail("/tau", "must not exceed n");
    }
  }

  if (j.contains("dry_run")) {
    if (!j["dry_run"].is_boolean()) {
      fail("/dry_run", "must be a boolean");
    } else {
      cfg.dry_run = j["dry_run"].get<bool>();
    }
  }
  return cfg;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_complex_pair(cx v) {
  return fmt_double(v.real()) + "," + fmt_double(v.imag());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open file: " + path);
  }
  std::ostringstream content;
  content << in.rdbuf();
  return content.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot write file: " + path);
  }
  out << content;
}

json load_json_file(const std::string& path) {
  const std::string text = read_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw DataError("invalid JSON in " + path);
  }
  return j;
}

std::string digest_bytes(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string residuals_csv(const Decomposition& d) {
  std::string out = "k,fro_norm,spec_norm\n";
  for (std::size_t k = 0; k < d.residual_fro.size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += fmt_double(d.residual_fro[k]);
    out += ',';
    out += fmt_double(d.residual_spec[k]);
    out += '\n';
  }
  return out;
}

}  // namespace obsdecomp
