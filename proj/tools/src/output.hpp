// Copyright 2026 The limbkin Authors
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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace limbkin::cli {

/// Fixed-point text for CSV and reports. NaN prints as "nan" and negative
/// zero as zero, so identical inputs always give identical bytes.
std::string format_number(double value, int precision = 6);

/// Writes `content` to a temporary sibling file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view content);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> row);
  std::size_t size() const noexcept { return rows_.size(); }

  /// CSV text; a `# manifest: <name>` line comes first when a manifest is given.
  std::string str(const std::optional<std::string>& manifest = std::nullopt) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace limbkin::cli
