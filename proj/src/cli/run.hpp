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

#include <string>
#include <vector>

#include "config.hpp"

namespace qmarkov::cli {

// One CSV record: a named series entry at (i, j).
struct CsvRow {
  std::string series;
  Index i = 0;
  Index j = 0;
  Complex value;
};

struct Report {
  nlohmann::json doc;
  std::vector<CsvRow> rows;

  // JSON document or CSV with the effective-config echo on top.
  std::string render(Format format) const;
};

Report run(const JobConfig& job);

// 2 parse, 3 precondition/dimension, 4 numerical.
int exit_code(ErrorKind kind);
nlohmann::json error_json(const Error& e);

}  // namespace qmarkov::cli
