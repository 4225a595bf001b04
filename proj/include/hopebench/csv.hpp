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

// Minimal RFC 4180 reader/writer. Fields may be quoted, quotes are doubled
// inside quoted fields, and quoted fields may span lines.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace hopebench::csv {

struct Row {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;
};

/// Throws ValidationError on an unterminated quoted field.
std::vector<Row> parse(std::string_view content);

std::string escape_field(std::string_view field);
std::string format_row(const std::vector<std::string>& fields);

}  // namespace hopebench::csv
