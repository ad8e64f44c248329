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

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "run.hpp"

namespace {

int report_error(const qmarkov::Error& e) {
  std::cerr << qmarkov::cli::error_json(e).dump() << "\n";
  return qmarkov::cli::exit_code(e.kind());
}

}  // namespace

int main(int argc, char** argv) {
  using namespace qmarkov;
  CLI::App app{"Local asymptotic geometry of quantum Markov dynamics"};
  std::string config_path;
  std::string format, out, convention, t_grid;
  double tol = 0.0;
  app.add_option("config", config_path, "job file (JSON)")->required();
  auto* fmt_opt = app.add_option("--format", format, "json or csv")
                      ->check(CLI::IsMember({"json", "csv"}));
  auto* out_opt = app.add_option("--out", out, "report path (default stdout)");
  auto* conv_opt = app.add_option("--convention", convention, "four_x or metric")
                       ->check(CLI::IsMember({"four_x", "metric"}));
  auto* tol_opt = app.add_option("--tol", tol, "residual tolerance");
  auto* grid_opt = app.add_option("--t-grid", t_grid, "comma-separated times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error(Error(ErrorKind::kParse, "cli", e.what(), "arguments"));
  }

  try {
    cli::Overrides ov;
    if (*fmt_opt) ov.format = cli::parse_format(format);
    if (*out_opt) ov.out = out;
    if (*conv_opt) ov.convention = parse_convention(convention);
    if (*tol_opt) ov.tol = tol;
    if (*grid_opt) ov.t_grid = cli::parse_t_grid(t_grid);

    std::ifstream in(config_path);
    if (!in) throw Error(ErrorKind::kParse, "cli", "cannot read config", config_path);
    std::stringstream text;
    text << in.rdbuf();

    const cli::JobConfig job = cli::parse_config(text.str(), ov);
    const std::string rendered = cli::run(job).render(job.format);
    if (job.out) {
      std::ofstream os(*job.out);
      if (!os) throw Error(ErrorKind::kPrecondition, "cli", "cannot write report", *job.out);
      os << rendered;
    } else {
      std::cout << rendered;
    }
  } catch (const Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    return report_error(Error(ErrorKind::kNumerical, "cli", e.what()));
  }
  return 0;
}
