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

#include "run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "qmarkov/lan.hpp"

namespace qmarkov::cli {
namespace {

using nlohmann::json;

class Builder {
 public:
  json result = json::object();
  std::vector<CsvRow> rows;

  void scalar(const std::string& name, double v) {
    result[name] = v;
    rows.push_back({name, 0, 0, v});
  }
  void scalar(const std::string& name, Complex v) {
    result[name] = complex_json(v);
    rows.push_back({name, 0, 0, v});
  }
  void matrix(const std::string& name, const CMatrix& m) {
    result[name] = matrix_json(m);
    add_rows(name, m);
  }
  void real_matrix(const std::string& name, const RMatrix& m) {
    json rows_j = json::array();
    for (Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows_j.push_back(std::move(row));
    }
    result[name] = std::move(rows_j);
    add_rows(name, m.cast<Complex>());
  }
  void series(const std::string& name, const std::vector<double>& v) {
    result[name] = v;
    for (std::size_t i = 0; i < v.size(); ++i) {
      rows.push_back({name, static_cast<Index>(i), 0, v[i]});
    }
  }
  void complex_series(const std::string& name, const std::vector<Complex>& v) {
    result[name] = complex_list(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
      rows.push_back({name, static_cast<Index>(i), 0, v[i]});
    }
  }
  void add_rows(const std::string& name, const CMatrix& m) {
    for (Index r = 0; r < m.rows(); ++r) {
      for (Index c = 0; c < m.cols(); ++c) rows.push_back({name, r, c, m(r, c)});
    }
  }
  static json complex_list(const std::vector<Complex>& v) {
    json arr = json::array();
    for (const Complex& z : v) arr.push_back(complex_json(z));
    return arr;
  }
};

json tangent_json(const TangentVector& v) {
  json dl = json::array();
  for (const auto& l : v.dl()) dl.push_back(matrix_json(l));
  return {{"dH", matrix_json(v.dh())}, {"dL", dl}};
}

void tangent_rows(Builder& b, const std::string& prefix, const TangentVector& v) {
  b.add_rows(prefix + ".dH", v.dh());
  for (std::size_t i = 0; i < v.channels(); ++i) {
    b.add_rows(prefix + ".dL" + std::to_string(i), v.dl(i));
  }
}

std::vector<double> times(const JobConfig& job, double gap) {
  std::vector<double> out = job.t_grid;
  if (job.t_unit == TimeUnit::kInverseGap) {
    for (double& t : out) t /= gap;
  }
  return out;
}

// Least-squares slope of -log(err) against log(t).
double decay_exponent(const std::vector<double>& t,
                      const std::vector<double>& e) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(e[i] > 0.0)) return std::numeric_limits<double>::infinity();
    const double x = std::log(t[i]);
    const double y = -std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  return den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

void run_info(const JobConfig& job, Builder& b) {
  const DynamicalParams d = build_model(job.model, job.tol);
  const ErgodicityReport r = stationary_state(d, job.tol);
  b.result["dim"] = d.dim();
  b.result["channels"] = d.channels();
  b.result["ergodic"] = r.ergodic;
  b.result["zero_eigen_count"] = r.zero_eigen_count;
  b.scalar("min_stationary_eigenvalue", r.min_stationary_eigenvalue);
  b.scalar("spectral_gap", r.spectral_gap);
  b.scalar("rank_tol", r.rank_tol);
  if (r.stationary) b.matrix("rho_ss", *r.stationary);
  std::vector<Complex> ev = eigenvalues(heisenberg_generator(d));
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex c) {
    return a.real() != c.real() ? a.real() > c.real() : a.imag() > c.imag();
  });
  b.complex_series("generator_eigenvalues", ev);
}

void run_qfi(const JobConfig& job, Builder& b) {
  const ErgodicDynamics dyn(build_model(job.model, job.tol), job.tol);
  const QfiMatrix q = qfi_rate(dyn, build_tangents(job), *job.convention);
  b.result["convention"] = std::string(to_string(q.convention));
  b.result["labels"] = tangent_labels(job);
  b.real_matrix("qfi", q.values);
}

void run_decompose(const JobConfig& job, Builder& b, bool full) {
  const ErgodicDynamics dyn(build_model(job.model, job.tol), job.tol);
  const std::vector<TangentVector> tangents = build_tangents(job);
  const auto labels = tangent_labels(job);
  json list = json::array();
  for (std::size_t i = 0; i < tangents.size(); ++i) {
    const LieAlgebraElement w = connection_form(dyn, tangents[i]);
    json entry = {{"label", labels[i]},
                  {"K", matrix_json(w.generator)},
                  {"r", w.shift}};
    b.add_rows(labels[i] + ".K", w.generator);
    b.rows.push_back({labels[i] + ".r", 0, 0, w.shift});
    if (full) {
      const double e = e_map(dyn.params(), tangents[i]).norm();
      const TangentVector h = horizontal_projection(dyn, tangents[i]);
      entry["e_norm"] = e;
      entry["identifiable"] = e <= job.tol.identifiable;
      entry["horizontal"] = tangent_json(h);
      entry["vertical"] = tangent_json(tangents[i] - h);
      b.rows.push_back({labels[i] + ".e_norm", 0, 0, e});
      tangent_rows(b, labels[i] + ".horizontal", h);
      tangent_rows(b, labels[i] + ".vertical", tangents[i] - h);
    }
    list.push_back(std::move(entry));
  }
  b.result[full ? "decomposition" : "connection"] = std::move(list);
}

void run_symplectic(const JobConfig& job, Builder& b) {
  const ErgodicDynamics dyn(build_model(job.model, job.tol), job.tol);
  // Identifiable vectors are fixed by the projection.
  std::vector<TangentVector> span;
  for (const auto& t : build_tangents(job)) {
    span.push_back(horizontal_projection(dyn, t));
  }
  const GaussianLimitModel m =
      symplectic_basis(dyn, span, *job.convention, job.complete_with_j);
  b.result["projected"] = true;
  b.result["dim_id"] = m.dim_id;
  b.result["convention"] = std::string(to_string(m.convention));
  b.real_matrix("F", m.F);
  b.real_matrix("Sigma", m.Sigma);
  b.real_matrix("change_of_basis", m.change_of_basis);
  b.scalar("condition_number", m.condition_number);
  json basis = json::array();
  for (std::size_t i = 0; i < m.basis.size(); ++i) {
    basis.push_back(tangent_json(m.basis[i]));
    tangent_rows(b, "basis" + std::to_string(i), m.basis[i]);
  }
  b.result["basis"] = std::move(basis);
}

void run_lan(const JobConfig& job, Builder& b) {
  const DynamicalParams d = build_model(job.model, job.tol);
  const std::vector<TangentVector> tangents = build_tangents(job);
  const LocalChart chart = linear_horizontal_chart(d, tangents, job.tol);
  const std::vector<double> ts = times(job, chart.base().spectral_gap());
  const LanReport r = lan_convergence(chart, job.u, job.u_prime, ts);
  std::vector<double> moduli;
  for (const Complex& z : r.finite_overlaps) moduli.push_back(std::abs(z));
  b.series("t_values", r.t_values);
  b.complex_series("finite_overlaps", r.finite_overlaps);
  b.series("moduli", moduli);
  b.series("errors", r.errors);
  b.scalar("limit_value", r.limit_value);
  b.scalar("closed_form_value", r.closed_form_value);
  b.scalar("max_abs_error", r.max_abs_error);
  b.real_matrix("phase_matrix_used", r.phase_matrix_used);
  b.result["phase_convention"] = r.phase_convention;
  b.result["f_convention"] = std::string(to_string(r.f_convention));
  const double scale =
      convention_factor(*job.convention) / convention_factor(r.f_convention);
  b.result["convention"] = std::string(to_string(*job.convention));
  b.real_matrix("F", scale * chart.model().F);
  b.real_matrix("Sigma", chart.model().Sigma);
}

void run_equiv(const JobConfig& job, Builder& b) {
  const DynamicalParams d1 = build_model(job.model, job.tol);
  const DynamicalParams d2 = build_model(*job.model2, job.tol);
  const EquivalenceWitness w = find_gauge_equivalence(d1, d2, job.tol);
  b.result["found"] = w.found;
  b.scalar("eigenvalue", w.eigenvalue);
  b.scalar("eigen_real_part", w.eigen_real_part);
  b.scalar("threshold", w.threshold);
  if (w.found) {
    b.matrix("unitary", w.unitary);
    b.scalar("shift", w.shift);
    b.scalar("proportionality_residual", w.proportionality_residual);
  }
}

void run_cov(const JobConfig& job, Builder& b) {
  const ErgodicDynamics dyn(build_model(job.model, job.tol), job.tol);
  const std::vector<TangentVector> tangents = build_tangents(job);
  const auto labels = tangent_labels(job);
  const std::vector<double> ts = times(job, dyn.spectral_gap());
  b.series("t_values", ts);
  FiniteTimeOptions opts;
  opts.quad_steps = job.quad_steps;
  json list = json::array();
  for (std::size_t i = 0; i < tangents.size(); ++i) {
    const OperatorTuple raw = x_map(dyn.params(), tangents[i]);
    const OperatorTuple x(dyn.center(raw.x0()), raw.xi());
    const Complex limit = markov_covariance(dyn, x, x);
    std::vector<Complex> values;
    std::vector<double> errors;
    for (double t : ts) {
      values.push_back(finite_time_covariance(dyn, x, x, t, opts));
      errors.push_back(std::abs(values.back() - limit));
    }
    list.push_back({{"label", labels[i]},
                    {"limit", complex_json(limit)},
                    {"values", Builder::complex_list(values)},
                    {"errors", errors},
                    {"decay_exponent", decay_exponent(ts, errors)}});
    b.rows.push_back({labels[i] + ".limit", 0, 0, limit});
    for (std::size_t k = 0; k < ts.size(); ++k) {
      const auto ki = static_cast<Index>(k);
      b.rows.push_back({labels[i] + ".value", ki, 0, values[k]});
      b.rows.push_back({labels[i] + ".error", ki, 0, errors[k]});
    }
  }
  b.result["tuples"] = std::move(list);
}

void run_output_overlap(const JobConfig& job, Builder& b) {
  const DynamicalParams d1 = build_model(job.model, job.tol);
  const DynamicalParams d2 = build_model(*job.model2, job.tol);
  const ErgodicDynamics e1(d1, job.tol);
  const std::vector<double> ts = times(job, e1.spectral_gap());
  std::vector<double> values;
  for (double t : ts) values.push_back(output_overlap_trace(d1, d2, t, job.tol));
  b.series("t_values", ts);
  b.series("overlap_trace", values);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Report run(const JobConfig& job) {
  Builder b;
  switch (job.command) {
    case Command::kInfo: run_info(job, b); break;
    case Command::kQfi: run_qfi(job, b); break;
    case Command::kDecompose: run_decompose(job, b, true); break;
    case Command::kConnection: run_decompose(job, b, false); break;
    case Command::kSymplectic: run_symplectic(job, b); break;
    case Command::kLanCheck: run_lan(job, b); break;
    case Command::kEquivCheck: run_equiv(job, b); break;
    case Command::kCovConverge: run_cov(job, b); break;
    case Command::kOutputOverlap: run_output_overlap(job, b); break;
  }
  Report r;
  r.doc = {{"effective_config", to_json(job)},
           {"command", std::string(to_string(job.command))},
           {"result", std::move(b.result)}};
  r.rows = std::move(b.rows);
  return r;
}

std::string Report::render(Format format) const {
  if (format == Format::kJson) return doc.dump(2) + "\n";
  std::string out = "# effective-config: " + doc["effective_config"].dump() + "\n";
  out += "series,i,j,re,im\n";
  for (const CsvRow& row : rows) {
    out += row.series + "," + std::to_string(row.i) + "," +
           std::to_string(row.j) + "," + format_double(row.value.real()) + "," +
           format_double(row.value.imag()) + "\n";
  }
  return out;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return 2;
    case ErrorKind::kPrecondition:
    case ErrorKind::kDimension: return 3;
    case ErrorKind::kNumerical: return 4;
  }
  return 4;
}

nlohmann::json error_json(const Error& e) {
  return {{"module", e.module()}, {"message", e.what()}, {"context", e.context()}};
}

}  // namespace qmarkov::cli
