// Copyright 2026 The mpent Authors
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

namespace mpent {

/// Column table with a leading "# <schema>" comment line. Numbers are
/// written with %.10g so the output is byte-stable.
class CsvTable {
 public:
  CsvTable(std::string schema, std::vector<std::string> columns);

  /// Empty cells stand for undefined values (e.g. Q at zero mean).
  void add_row(const std::vector<std::optional<double>>& row);

  const std::string& schema() const { return schema_; }
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }

  std::string str() const;

 private:
  std::string schema_;
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

std::string format_number(double value);

/// Writes to a sibling temporary file and renames it over the target.
/// Creates missing parent directories. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace mpent
