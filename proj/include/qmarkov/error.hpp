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

#include <stdexcept>
#include <string>

namespace qmarkov {

enum class ErrorKind {
  kParse,
  kPrecondition,
  kDimension,
  kNumerical,
};

// All library failures are reported through this type. `module` names the
// library module that raised it, `context` carries free-form detail such as
// the offending norm or parameter value.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string module, const std::string& message,
        std::string context = {})
      : std::runtime_error(message),
        kind_(kind),
        module_(std::move(module)),
        context_(std::move(context)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& context() const noexcept { return context_; }

 private:
  ErrorKind kind_;
  std::string module_;
  std::string context_;
};

}  // namespace qmarkov
