// Copyright 2026 The qcacg Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Exception hierarchy shared by every qcacg module.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qcacg {

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

#define QCACG_DEFINE_ERROR(Name)                                               \
    class Name : public Error {                                                \
      public:                                                                  \
        using Error::Error;                                                    \
    }

QCACG_DEFINE_ERROR(IndexError);
QCACG_DEFINE_ERROR(NormalizationError);
QCACG_DEFINE_ERROR(DomainError);
QCACG_DEFINE_ERROR(BoundaryError);
QCACG_DEFINE_ERROR(DivisibilityError);
QCACG_DEFINE_ERROR(ScheduleError);
QCACG_DEFINE_ERROR(StateError);
QCACG_DEFINE_ERROR(SizeError);
QCACG_DEFINE_ERROR(ResolutionError);
QCACG_DEFINE_ERROR(FitError);

#undef QCACG_DEFINE_ERROR

/// Raised by config validation; carries every violation found, not just the
/// first one.
class ConfigError : public Error {
  public:
    explicit ConfigError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}

    [[nodiscard]] const std::vector<std::string> &violations() const noexcept {
        return violations_;
    }

  private:
    static std::string join(const std::vector<std::string> &items) {
        std::string out = "invalid config:";
        for (const auto &item : items) {
            out += "\n  - ";
            out += item;
        }
        return out;
    }

    std::vector<std::string> violations_;
};

} // namespace qcacg
