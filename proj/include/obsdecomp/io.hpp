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

#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "obsdecomp/bound.hpp"
#include "obsdecomp/decompose.hpp"
#include "obsdecomp/estimate.hpp"
#include "obsdecomp/pauli.hpp"
#include "obsdecomp/workloads.hpp"

namespace obsdecomp {

using json = nlohmann::json;

/// Thrown for malformed or inconsistent data files; the CLI maps it to the
/// data-error exit code.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// -- operators: {"n": int, "format": "dense"|"coo",
//                "entries": [[row, col, re, im], ...]} -------------------

DenseOperator operator_from_json(const json& j);
json operator_to_json(const DenseOperator& a, const std::string& format);

// -- states: {"n": int, "amplitudes": [[re, im], ...]} -------------------

StateVector state_from_json(const json& j);
json state_to_json(const StateVector& psi);

// -- Pauli sums: one "coeff LETTERS" term per line ------------------------

PauliSum pauli_sum_from_text(const std::string& text);
std::string pauli_sum_to_text(const PauliSum& s);

// -- decomposition checkpoints --------------------------------------------

json checkpoint_to_json(const Decomposition& d);
Decomposition checkpoint_from_json(const json& j);

// -- reports ---------------------------------------------------------------

json estimate_report_to_json(const EstimateReport& r);
json bound_report_to_json(const BoundReport& r);

// -- experiment configs -----------------------------------------------------

/// Parses and validates a benchmark config, collecting every violation as
/// "/path: message" instead of stopping at the first.
BenchConfig bench_config_from_json(const json& j,
                                   std::vector<std::string>& errors);

// -- formatting and files ----------------------------------------------------

/// 17-significant-digit decimal form; round-trips doubles exactly.
std::string fmt_double(double v);
std::string fmt_complex_pair(cx v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
json load_json_file(const std::string& path);

/// FNV-1a digest of a byte string, as 16 hex characters.
std::string digest_bytes(const std::string& bytes);

/// residuals.csv body: "k,fro_norm,spec_norm" rows for k = 0..K.
std::string residuals_csv(const Decomposition& d);

}  // namespace obsdecomp
