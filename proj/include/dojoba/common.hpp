// dojoba/common.hpp

// Copyright 2026 The dojoba Authors
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

#ifndef DOJOBA_COMMON_HPP
#define DOJOBA_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace dojoba {

inline constexpr double kLog2Pi = 1.8378770664093453;

// Raised for unreadable/ill-formed inputs: bad CSV rows, schema mismatches,
// inconsistent dimensions between files. CLI maps this to exit code 3.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised for numerical/model failures: non-PD covariances, singular systems,
// insufficient classes for estimation, size guards. CLI maps this to exit 4.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dojoba

#endif  // DOJOBA_COMMON_HPP
