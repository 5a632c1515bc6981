// Copyright 2026 The gausstomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gausstomo {

/// Failure categories. The CLI maps each category onto an exit code.
enum class ErrorKind {
    InvalidArgument,
    InvalidShape,
    InvalidCovariance,
    SingularParametrization,
    Decomposition,
    Domain,
    IncompletePlan,
    DataFormat,
    Optimization,
    Io,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidShape: return "invalid-shape";
    case ErrorKind::InvalidCovariance: return "invalid-covariance";
    case ErrorKind::SingularParametrization: return "singular-parametrization";
    case ErrorKind::Decomposition: return "decomposition";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::IncompletePlan: return "incomplete-plan";
    case ErrorKind::DataFormat: return "data-format";
    case ErrorKind::Optimization: return "optimization";
    case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace gausstomo
