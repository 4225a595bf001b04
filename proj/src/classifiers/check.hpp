// Copyright 2026 The hopebench Authors
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

// Shared input checks for the classifier fitters.

#include <cmath>
#include <span>
#include <string>

#include "hopebench/classifiers.hpp"

namespace hopebench::classifiers::detail {

inline void check_training_set(const FeatureMatrix& X, std::span<const int> y,
                               std::size_t num_classes, std::string_view who) {
  if (X.size() != y.size()) {
    throw ValidationError(std::string(who) + ": " + std::to_string(X.size()) + " rows but " +
                          std::to_string(y.size()) + " labels");
  }
  for (int label : y) {
    if (label < 0 || static_cast<std::size_t>(label) >= num_classes) {
      throw ValidationError(std::string(who) + ": label " + std::to_string(label) +
                            " outside [0, " + std::to_string(num_classes) + ")");
    }
  }
  check_dimension(X, X.dim);
  for (const auto& row : X.rows) {
    for (double v : row.values) {
      if (!std::isfinite(v)) throw ValidationError(std::string(who) + ": non-finite feature value");
    }
  }
}

}  // namespace hopebench::classifiers::detail
