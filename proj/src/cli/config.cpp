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

#include "config.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace qmarkov::cli {
namespace {

using nlohmann::json;

constexpr const char* kModule = "cli";

const std::map<std::string, Command, std::less<>> kCommands = {
    {"info", Command::kInfo},
    {"qfi", Command::kQfi},
    {"decompose", Command::kDecompose},
    {"connection", Command::kConnection},
    {"symplectic", Command::kSymplectic},
    {"lan-check", Command::kLanCheck},
    {"equiv-check", Command::kEquivCheck},
    {"cov-converge", Command::kCovConverge},
    {"output-overlap", Command::kOutputOverlap},
};

const std::vector<std::string> kTwoLevelNames = {
    "delta", "omega", "alpha", "theta", "q1", "p1", "q2", "p2"};
const std::vector<std::string> kOneParamPresets = {"phase", "coupling",
                                                   "hamiltonian"};

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorKind::kParse, kModule, message, path);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) fail(path + "." + key, "unknown field");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "value is not finite");
  return v;
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Complex get_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {get_number(j, path), 0.0};
  if (j.is_array() && j.size() == 2) {
    return {get_number(j[0], path + "[0]"), get_number(j[1], path + "[1]")};
  }
  fail(path, "expected a number or [re, im]");
}

CMatrix get_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty list of rows");
  const auto n = static_cast<Index>(j.size());
  CMatrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      fail(rp, "matrix must be square with " + std::to_string(n) + " columns");
    }
    for (Index c = 0; c < n; ++c) {
      m(r, c) = get_complex(row[static_cast<std::size_t>(c)],
                            rp + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

std::vector<CMatrix> get_matrix_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of matrices");
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_matrix(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

RVector get_vector(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of numbers");
  RVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = get_number(j[i], path + "[" + std::to_string(i) + "]");
  }
  return v;
}

void require_hermitian(const CMatrix& h, const Tolerances& tol,
                       const std::string& path) {
  const double dev = (h - h.adjoint()).norm();
  if (dev > tol.hermitian * std::max(1.0, h.norm())) {
    std::ostringstream ctx;
    ctx << path << ": |H - H*| = " << dev;
    throw Error(ErrorKind::kParse, kModule, "matrix is not Hermitian",
                ctx.str());
  }
}

void require_dims(const std::vector<CMatrix>& ms, Index dim,
                  const std::string& path) {
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (ms[i].rows() != dim) {
      fail(path + "[" + std::to_string(i) + "]",
           "expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
               " matrix");
    }
  }
}

bool is_one_param(const std::string& p) {
  for (const auto& q : kOneParamPresets) {
    if (p == q) return true;
  }
  return false;
}

ModelSpec parse_model(const json& j, const std::string& path,
                      const Tolerances& tol) {
  check_keys(j, path, {"preset", "params", "H", "L"});
  ModelSpec m;
  if (j.contains("preset")) m.preset = get_string(j["preset"], path + ".preset");
  const bool explicit_h = j.contains("H");
  const bool explicit_l = j.contains("L");
  if (m.preset == "two-level") {
    if (explicit_h || explicit_l) {
      fail(path, "give either a preset or explicit matrices, not both");
    }
    if (j.contains("params")) {
      const json& p = j["params"];
      const std::string pp = path + ".params";
      check_keys(p, pp, {"alpha", "delta", "omega", "theta", "v"});
      TwoLevelParams& t = m.two_level;
      if (p.contains("alpha")) t.alpha = get_number(p["alpha"], pp + ".alpha");
      if (p.contains("delta")) t.delta = get_number(p["delta"], pp + ".delta");
      if (p.contains("omega")) t.omega = get_number(p["omega"], pp + ".omega");
      if (p.contains("theta")) t.theta = get_number(p["theta"], pp + ".theta");
      if (p.contains("v")) {
        const RVector v = get_vector(p["v"], pp + ".v");
        if (v.size() != 3) fail(pp + ".v", "expected 3 entries");
        t.v = {v(0), v(1), v(2)};
      }
      if (!(t.alpha > 0.0)) fail(pp + ".alpha", "alpha must be positive");
    }
    return m;
  }
  if (m.preset && !is_one_param(*m.preset)) {
    fail(path + ".preset", "unknown preset '" + *m.preset + "'");
  }
  if (j.contains("params")) fail(path + ".params", "only the two-level preset takes params");
  if (!explicit_h) fail(path + ".H", "missing field");
  if (!explicit_l) fail(path + ".L", "missing field");
  m.hamiltonian = get_matrix(j["H"], path + ".H");
  m.jumps = get_matrix_list(j["L"], path + ".L");
  if (m.jumps.empty()) fail(path + ".L", "at least one jump operator is needed");
  if (m.preset && m.jumps.size() != 1) {
    fail(path + ".L", "one-parameter presets take exactly one jump operator");
  }
  require_dims(m.jumps, m.hamiltonian.rows(), path + ".L");
  require_hermitian(m.hamiltonian, tol, path + ".H");
  return m;
}

TangentSpec parse_tangent(const json& j, const std::string& path,
                          const ModelSpec& model, const Tolerances& tol) {
  TangentSpec t;
  if (j.is_string()) {
    t.name = j.get<std::string>();
    if (model.preset != "two-level") {
      fail(path, "named tangents need the two-level preset");
    }
    bool known = false;
    for (const auto& n : kTwoLevelNames) known = known || n == *t.name;
    if (!known) fail(path, "unknown tangent name '" + *t.name + "'");
    return t;
  }
  check_keys(j, path, {"dH", "dL"});
  if (!j.contains("dH")) fail(path + ".dH", "missing field");
  if (!j.contains("dL")) fail(path + ".dL", "missing field");
  t.dh = get_matrix(j["dH"], path + ".dH");
  t.dl = get_matrix_list(j["dL"], path + ".dL");
  require_hermitian(t.dh, tol, path + ".dH");
  require_dims(t.dl, t.dh.rows(), path + ".dL");
  return t;
}

void parse_tolerances(const json& j, const std::string& path, Tolerances& tol) {
  check_keys(j, path,
             {"residual", "rank_factor", "full_rank", "equivalence_factor",
              "identifiable", "proportionality", "hermitian"});
  auto set = [&](const char* key, double& field) {
    if (!j.contains(key)) return;
    const double v = get_number(j[key], path + "." + key);
    if (!(v > 0.0)) fail(path + "." + key, "tolerance must be positive");
    field = v;
  };
  set("residual", tol.residual);
  set("rank_factor", tol.rank_factor);
  set("full_rank", tol.full_rank);
  set("equivalence_factor", tol.equivalence_factor);
  set("identifiable", tol.identifiable);
  set("proportionality", tol.proportionality);
  set("hermitian", tol.hermitian);
}

bool needs_tangents(Command c) {
  return c == Command::kQfi || c == Command::kDecompose ||
         c == Command::kConnection || c == Command::kSymplectic ||
         c == Command::kLanCheck || c == Command::kCovConverge;
}

bool needs_second_model(Command c) {
  return c == Command::kEquivCheck || c == Command::kOutputOverlap;
}

std::vector<double> default_t_grid(Command c) {
  switch (c) {
    case Command::kLanCheck: return {50.0, 100.0, 200.0, 400.0};
    case Command::kCovConverge: return {25.0, 50.0, 100.0, 200.0};
    case Command::kOutputOverlap: return {0.0, 50.0, 100.0, 200.0};
    default: return {};
  }
}

Index model_dim(const ModelSpec& m) {
  return m.preset == "two-level" ? 2 : m.hamiltonian.rows();
}

std::size_t model_channels(const ModelSpec& m) {
  return m.preset == "two-level" ? 1 : m.jumps.size();
}

void finish(JobConfig& job) {
  const Command c = job.command;
  const std::string cmd(to_string(c));
  if (needs_second_model(c) && !job.model2) {
    fail("model2", "command '" + cmd + "' needs a second model");
  }
  if (!needs_second_model(c) && job.model2) {
    fail("model2", "command '" + cmd + "' takes a single model");
  }
  if (job.model2 && (model_dim(*job.model2) != model_dim(job.model) ||
                     model_channels(*job.model2) != model_channels(job.model))) {
    fail("model2", "second model must match the first in dimension and channels");
  }

  if (needs_tangents(c) && job.tangents.empty()) {
    if (job.model.preset == "two-level") {
      for (int i = 0; i < 4; ++i) job.tangents.push_back({kTwoLevelNames[i], {}, {}});
    } else if (job.model.preset) {
      const auto presets =
          one_param_presets(job.model.hamiltonian, job.model.jumps[0]);
      for (const auto& p : presets) {
        if (p.name == *job.model.preset) {
          job.tangents.push_back({std::nullopt, p.tangent.dh(), p.tangent.dl()});
        }
      }
    } else {
      fail("tangents", "command '" + cmd + "' needs tangents for an explicit model");
    }
  }
  for (std::size_t i = 0; i < job.tangents.size(); ++i) {
    const auto& t = job.tangents[i];
    if (t.name) continue;
    if (t.dh.rows() != model_dim(job.model) ||
        t.dl.size() != model_channels(job.model)) {
      fail("tangents[" + std::to_string(i) + "]",
           "tangent does not match the model dimension or channel count");
    }
  }

  if (c == Command::kQfi || c == Command::kLanCheck) {
    if (!job.convention) {
      fail("options.convention",
           "command '" + cmd + "' needs --convention {four_x|metric}");
    }
  } else if (c == Command::kSymplectic && !job.convention) {
    job.convention = QfiConvention::kMetric;
  }

  if (job.t_grid.empty()) job.t_grid = default_t_grid(c);
  for (std::size_t i = 0; i < job.t_grid.size(); ++i) {
    const double t = job.t_grid[i];
    const bool ok = c == Command::kOutputOverlap ? t >= 0.0 : t > 0.0;
    if (!ok || !std::isfinite(t)) {
      fail("options.t_grid[" + std::to_string(i) + "]", "invalid time");
    }
  }

  if (c == Command::kLanCheck) {
    const auto n = static_cast<Index>(job.tangents.size());
    if (job.u.size() == 0) {
      job.u = RVector::Zero(n);
      job.u(0) = 1.0;
    }
    if (job.u_prime.size() == 0) job.u_prime = RVector::Zero(n);
    if (job.u.size() != n) fail("options.u", "length must match the tangent count");
    if (job.u_prime.size() != n) {
      fail("options.u_prime", "length must match the tangent count");
    }
  }
  if (job.quad_steps < 4 || job.quad_steps % 2 != 0) {
    fail("options.quad_steps", "must be even and at least 4");
  }
}

json model_to_json(const ModelSpec& m) {
  json j = json::object();
  if (m.preset) j["preset"] = *m.preset;
  if (m.preset == "two-level") {
    const TwoLevelParams& p = m.two_level;
    j["params"] = {{"alpha", p.alpha}, {"delta", p.delta}, {"omega", p.omega},
                   {"theta", p.theta}, {"v", {p.v[0], p.v[1], p.v[2]}}};
    return j;
  }
  j["H"] = matrix_json(m.hamiltonian);
  j["L"] = json::array();
  for (const auto& l : m.jumps) j["L"].push_back(matrix_json(l));
  return j;
}

json vector_json(const RVector& v) {
  json j = json::array();
  for (Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [name, cmd] : kCommands) {
    if (cmd == c) return name;
  }
  return "unknown";
}

std::string_view to_string(Format f) {
  return f == Format::kJson ? "json" : "csv";
}

std::string_view to_string(TimeUnit u) {
  return u == TimeUnit::kInverseGap ? "gap" : "absolute";
}

Format parse_format(std::string_view text) {
  if (text == "json") return Format::kJson;
  if (text == "csv") return Format::kCsv;
  throw Error(ErrorKind::kParse, kModule, "unknown format", std::string(text));
}

std::vector<double> parse_t_grid(std::string_view text) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw Error(ErrorKind::kParse, kModule, "bad --t-grid entry", item);
    }
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::kParse, kModule, "empty --t-grid");
  return out;
}

nlohmann::json complex_json(Complex z) { return {z.real(), z.imag()}; }

nlohmann::json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

JobConfig parse_config(std::string_view text, const Overrides& overrides) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kParse, kModule, "malformed config",
                "byte " + std::to_string(e.byte) + ": " + e.what());
  }
  check_keys(root, "config", {"command", "model", "model2", "tangents", "options"});

  JobConfig job;
  if (!root.contains("command")) fail("command", "missing field");
  const std::string cmd = get_string(root["command"], "command");
  const auto it = kCommands.find(cmd);
  if (it == kCommands.end()) fail("command", "unknown command '" + cmd + "'");
  job.command = it->second;

  // Options first: tolerances feed the model checks.
  if (root.contains("options")) {
    const json& o = root["options"];
    check_keys(o, "options",
               {"convention", "tolerances", "t_grid", "t_unit", "format", "out",
                "u", "u_prime", "quad_steps", "complete_with_j"});
    if (o.contains("convention")) {
      const std::string s = get_string(o["convention"], "options.convention");
      try {
        job.convention = parse_convention(s);
      } catch (const Error& e) {
        fail("options.convention", e.what());
      }
    }
    if (o.contains("tolerances")) {
      parse_tolerances(o["tolerances"], "options.tolerances", job.tol);
    }
    if (o.contains("t_grid")) {
      const RVector g = get_vector(o["t_grid"], "options.t_grid");
      job.t_grid.assign(g.data(), g.data() + g.size());
      if (job.t_grid.empty()) fail("options.t_grid", "empty grid");
    }
    if (o.contains("t_unit")) {
      const std::string s = get_string(o["t_unit"], "options.t_unit");
      if (s == "gap") {
        job.t_unit = TimeUnit::kInverseGap;
      } else if (s == "absolute") {
        job.t_unit = TimeUnit::kAbsolute;
      } else {
        fail("options.t_unit", "expected 'gap' or 'absolute'");
      }
    }
    if (o.contains("format")) {
      try {
        job.format = parse_format(get_string(o["format"], "options.format"));
      } catch (const Error& e) {
        fail("options.format", e.what());
      }
    }
    if (o.contains("out")) job.out = get_string(o["out"], "options.out");
    if (o.contains("u")) job.u = get_vector(o["u"], "options.u");
    if (o.contains("u_prime")) job.u_prime = get_vector(o["u_prime"], "options.u_prime");
    if (o.contains("quad_steps")) {
      if (!o["quad_steps"].is_number_integer()) {
        fail("options.quad_steps", "expected an integer");
      }
      job.quad_steps = o["quad_steps"].get<int>();
    }
    if (o.contains("complete_with_j")) {
      if (!o["complete_with_j"].is_boolean()) {
        fail("options.complete_with_j", "expected true or false");
      }
      job.complete_with_j = o["complete_with_j"].get<bool>();
    }
  }
  if (overrides.format) job.format = *overrides.format;
  if (overrides.out) job.out = *overrides.out;
  if (overrides.convention) job.convention = *overrides.convention;
  if (overrides.tol) {
    if (!(*overrides.tol > 0.0)) fail("--tol", "tolerance must be positive");
    job.tol.residual = *overrides.tol;
  }
  if (overrides.t_grid) job.t_grid = *overrides.t_grid;

  if (!root.contains("model")) fail("model", "missing field");
  job.model = parse_model(root["model"], "model", job.tol);
  if (root.contains("model2")) {
    job.model2 = parse_model(root["model2"], "model2", job.tol);
  }
  if (root.contains("tangents")) {
    const json& t = root["tangents"];
    if (!t.is_array()) fail("tangents", "expected a list");
    for (std::size_t i = 0; i < t.size(); ++i) {
      job.tangents.push_back(parse_tangent(
          t[i], "tangents[" + std::to_string(i) + "]", job.model, job.tol));
    }
  }
  finish(job);
  // Structural checks on the physics objects themselves.
  try {
    build_model(job.model, job.tol);
    if (job.model2) build_model(*job.model2, job.tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::kParse, kModule, e.what(), e.context());
  }
  return job;
}

nlohmann::json to_json(const JobConfig& job) {
  json j;
  j["command"] = std::string(to_string(job.command));
  j["model"] = model_to_json(job.model);
  if (job.model2) j["model2"] = model_to_json(*job.model2);
  j["tangents"] = json::array();
  for (const auto& t : job.tangents) {
    if (t.name) {
      j["tangents"].push_back(*t.name);
      continue;
    }
    json dl = json::array();
    for (const auto& l : t.dl) dl.push_back(matrix_json(l));
    j["tangents"].push_back({{"dH", matrix_json(t.dh)}, {"dL", dl}});
  }
  json o;
  if (job.convention) o["convention"] = std::string(to_string(*job.convention));
  const Tolerances& t = job.tol;
  o["tolerances"] = {{"residual", t.residual},
                     {"rank_factor", t.rank_factor},
                     {"full_rank", t.full_rank},
                     {"equivalence_factor", t.equivalence_factor},
                     {"identifiable", t.identifiable},
                     {"proportionality", t.proportionality},
                     {"hermitian", t.hermitian}};
  if (!job.t_grid.empty()) o["t_grid"] = job.t_grid;
  o["t_unit"] = std::string(to_string(job.t_unit));
  o["format"] = std::string(to_string(job.format));
  if (job.out) o["out"] = *job.out;
  if (job.u.size() > 0) o["u"] = vector_json(job.u);
  if (job.u_prime.size() > 0) o["u_prime"] = vector_json(job.u_prime);
  o["quad_steps"] = job.quad_steps;
  o["complete_with_j"] = job.complete_with_j;
  j["options"] = std::move(o);
  return j;
}

std::string serialize(const JobConfig& job) { return to_json(job).dump(2); }

DynamicalParams build_model(const ModelSpec& model, const Tolerances& tol) {
  if (model.preset == "two-level") {
    const DynamicalParams d = two_level(model.two_level);
    return DynamicalParams(d.hamiltonian(), d.jumps(), tol);
  }
  return DynamicalParams(model.hamiltonian, model.jumps, tol);
}

std::vector<TangentVector> build_tangents(const JobConfig& job) {
  std::vector<TangentVector> out;
  std::optional<TwoLevelTangents> named;
  for (const auto& t : job.tangents) {
    if (!t.name) {
      out.emplace_back(t.dh, t.dl, job.tol);
      continue;
    }
    if (!named) named = two_level_tangents(job.model.two_level);
    std::size_t idx = 0;
    while (kTwoLevelNames[idx] != *t.name) ++idx;
    out.push_back(idx < 4 ? named->physical[idx] : named->symplectic[idx - 4]);
  }
  return out;
}

std::vector<std::string> tangent_labels(const JobConfig& job) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < job.tangents.size(); ++i) {
    const auto& n = job.tangents[i].name;
    out.push_back(n ? *n : "tangent" + std::to_string(i));
  }
  return out;
}

}  // namespace qmarkov::cli
