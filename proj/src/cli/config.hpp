// Copyright 2026 The qmarkov Authors
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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qmarkov/covariance.hpp"
#include "qmarkov/models.hpp"

namespace qmarkov::cli {

enum class Command {
  kInfo,
  kQfi,
  kDecompose,
  kConnection,
  kSymplectic,
  kLanCheck,
  kEquivCheck,
  kCovConverge,
  kOutputOverlap,
};

enum class Format { kJson, kCsv };

// t-grid entries are either multiples of 1/gap or plain times.
enum class TimeUnit { kInverseGap, kAbsolute };

std::string_view to_string(Command c);
std::string_view to_string(Format f);
std::string_view to_string(TimeUnit u);

// Either a preset ("two-level", "phase", "coupling", "hamiltonian") or an
// explicit (H, L...). The one-parameter presets take their base point from
// hamiltonian/jumps.
struct ModelSpec {
  std::optional<std::string> preset;
  TwoLevelParams two_level;
  CMatrix hamiltonian;
  std::vector<CMatrix> jumps;
};

// Named two-level directions ("delta", "q1", ...) or explicit (dH, dL...).
struct TangentSpec {
  std::optional<std::string> name;
  CMatrix dh;
  std::vector<CMatrix> dl;
};

struct JobConfig {
  Command command = Command::kInfo;
  ModelSpec model;
  std::optional<ModelSpec> model2;
  std::vector<TangentSpec> tangents;
  std::optional<QfiConvention> convention;
  Tolerances tol;
  std::vector<double> t_grid;
  TimeUnit t_unit = TimeUnit::kInverseGap;
  Format format = Format::kJson;
  std::optional<std::string> out;
  RVector u;
  RVector u_prime;
  int quad_steps = 2000;
  bool complete_with_j = false;
};

// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<Format> format;
  std::optional<std::string> out;
  std::optional<QfiConvention> convention;
  std::optional<double> tol;  // residual tolerance
  std::optional<std::vector<double>> t_grid;
};

JobConfig parse_config(std::string_view text, const Overrides& overrides = {});
nlohmann::json to_json(const JobConfig& job);
std::string serialize(const JobConfig& job);

Format parse_format(std::string_view text);
std::vector<double> parse_t_grid(std::string_view text);

DynamicalParams build_model(const ModelSpec& model, const Tolerances& tol);
std::vector<TangentVector> build_tangents(const JobConfig& job);
std::vector<std::string> tangent_labels(const JobConfig& job);

nlohmann::json complex_json(Complex z);
nlohmann::json matrix_json(const CMatrix& m);

}  // namespace qmarkov::cli
