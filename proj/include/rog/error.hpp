// Copyright 2026 The RoG Authors
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

namespace rog {

/// Broad failure category. Maps one-to-one onto CLI exit codes.
enum class ErrorCategory {
  kConfig = 2,   ///< bad flags, bad spec, bad estimator configuration
  kData = 3,     ///< unreadable or invalid input data
  kNumeric = 4,  ///< singular covariance, degenerate likelihood
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }
  int exit_code() const noexcept { return static_cast<int>(category_); }

 private:
  ErrorCategory category_;
};

#define ROG_DEFINE_ERROR(Name, Category)                                 \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& what) : Error(Category, what) {}    \
  }

ROG_DEFINE_ERROR(ParseError, ErrorCategory::kData);
ROG_DEFINE_ERROR(ValidationError, ErrorCategory::kData);
ROG_DEFINE_ERROR(DimensionError, ErrorCategory::kData);
ROG_DEFINE_ERROR(EmptyClassError, ErrorCategory::kData);
ROG_DEFINE_ERROR(SpecError, ErrorCategory::kConfig);
ROG_DEFINE_ERROR(ConfigError, ErrorCategory::kConfig);
ROG_DEFINE_ERROR(SingularCovarianceError, ErrorCategory::kNumeric);
ROG_DEFINE_ERROR(DegenerateError, ErrorCategory::kNumeric);

#undef ROG_DEFINE_ERROR

}  // namespace rog
