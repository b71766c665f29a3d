// Copyright 2026 The adaptfuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ADAPTFUSE_CSV_HPP_
#define ADAPTFUSE_CSV_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace adaptfuse {

// Minimal header-keyed CSV table. Fields never contain commas or quotes in
// any file this project reads or writes, so no quoting is supported.
class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header);

  static CsvTable Read(const std::filesystem::path& path,
                       const std::vector<std::string>& required_columns);
  static CsvTable Parse(std::string_view text, const std::string& source_name,
                        const std::vector<std::string>& required_columns);

  const std::vector<std::string>& header() const { return header_; }
  size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  bool HasColumn(std::string_view column) const;

  // Field access by row index and column name.
  const std::string& At(size_t row, std::string_view column) const;
  double Number(size_t row, std::string_view column) const;
  int64_t Integer(size_t row, std::string_view column) const;
  // 1-based line number in the source file (header is line 1).
  size_t LineOf(size_t row) const { return row + 2; }

  void AddRow(std::vector<std::string> row);
  std::string ToString() const;
  void Write(const std::filesystem::path& path) const;

 private:
  size_t ColumnIndex(std::string_view column) const;

  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Shortest decimal representation that round-trips to the same double.
std::string FormatDouble(double value);
// Fixed-point with `decimals` digits, rounding half away from zero.
std::string FormatFixed(double value, int decimals);

double ParseDouble(std::string_view text, const std::string& context);
int64_t ParseInteger(std::string_view text, const std::string& context);

std::vector<std::string> SplitFields(std::string_view line, char separator);
std::string Trim(std::string_view text);

// Platform-independent 64-bit hash (FNV-1a with a splitmix64 finalizer).
// Used wherever a reproducible pseudo-random choice is keyed by a string.
uint64_t StableHash64(std::string_view text, uint64_t seed);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace adaptfuse

#endif  // ADAPTFUSE_CSV_HPP_
