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

#include "adaptfuse/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "adaptfuse/error.hpp"

namespace adaptfuse {

CsvTable::CsvTable(std::vector<std::string> header)
    : header_(std::move(header)) {}

CsvTable CsvTable::Read(const std::filesystem::path& path,
                        const std::vector<std::string>& required_columns) {
  return Parse(ReadTextFile(path), path.string(), required_columns);
}

CsvTable CsvTable::Parse(std::string_view text, const std::string& source_name,
                         const std::vector<std::string>& required_columns) {
  CsvTable table;
  table.source_ = source_name;
  std::istringstream in{std::string(text)};
  std::string line;
  size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (Trim(line).empty()) {
        Fail(ErrorCode::kParse, source_name + ": missing header line");
      }
      for (auto& field : SplitFields(line, ',')) {
        table.header_.push_back(Trim(field));
      }
      have_header = true;
      continue;
    }
    if (Trim(line).empty()) continue;
    auto fields = SplitFields(line, ',');
    if (fields.size() != table.header_.size()) {
      Fail(ErrorCode::kParse,
           source_name + ":" + std::to_string(line_no) + ": expected " +
               std::to_string(table.header_.size()) + " fields, got " +
               std::to_string(fields.size()));
    }
    for (auto& f : fields) f = Trim(f);
    table.rows_.push_back(std::move(fields));
  }
  if (!have_header) {
    Fail(ErrorCode::kParse, source_name + ": empty file");
  }
  for (const auto& column : required_columns) {
    if (!table.HasColumn(column)) {
      Fail(ErrorCode::kParse,
           source_name + ": missing required column '" + column + "'");
    }
  }
  return table;
}

bool CsvTable::HasColumn(std::string_view column) const {
  for (const auto& h : header_) {
    if (h == column) return true;
  }
  return false;
}

size_t CsvTable::ColumnIndex(std::string_view column) const {
  for (size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == column) return i;
  }
  Fail(ErrorCode::kParse,
       source_ + ": no column named '" + std::string(column) + "'");
}

const std::string& CsvTable::At(size_t row, std::string_view column) const {
  return rows_.at(row)[ColumnIndex(column)];
}

double CsvTable::Number(size_t row, std::string_view column) const {
  return ParseDouble(At(row, column), source_ + ":" +
                                          std::to_string(LineOf(row)) + ":" +
                                          std::string(column));
}

int64_t CsvTable::Integer(size_t row, std::string_view column) const {
  return ParseInteger(At(row, column), source_ + ":" +
                                           std::to_string(LineOf(row)) + ":" +
                                           std::string(column));
}

void CsvTable::AddRow(std::vector<std::string> row) {
  if (row.size() != header_.size()) {
    Fail(ErrorCode::kInternal, "csv row width does not match header");
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::ToString() const {
  std::string out;
  auto append_line = [&out](const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  append_line(header_);
  for (const auto& row : rows_) append_line(row);
  return out;
}

void CsvTable::Write(const std::filesystem::path& path) const {
  WriteTextFile(path, ToString());
}

std::string FormatDouble(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) Fail(ErrorCode::kInternal, "double formatting failed");
  return std::string(buf, end);
}

std::string FormatFixed(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // std::round is half-away-from-zero.
  const double rounded = std::round(value * scale) / scale;
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), rounded,
                                 std::chars_format::fixed, decimals);
  if (ec != std::errc()) Fail(ErrorCode::kInternal, "double formatting failed");
  std::string s(buf, end);
  if (s.starts_with("-") && s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

double ParseDouble(std::string_view text, const std::string& context) {
  std::string trimmed = Trim(text);
  double value = 0.0;
  const char* first = trimmed.data();
  const char* last = first + trimmed.size();
  if (!trimmed.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (trimmed.empty() || ec != std::errc() || ptr != last ||
      !std::isfinite(value)) {
    Fail(ErrorCode::kParse, context + ": not a number: '" + trimmed + "'");
  }
  return value;
}

int64_t ParseInteger(std::string_view text, const std::string& context) {
  std::string trimmed = Trim(text);
  int64_t value = 0;
  const char* first = trimmed.data();
  const char* last = first + trimmed.size();
  if (!trimmed.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (trimmed.empty() || ec != std::errc() || ptr != last) {
    Fail(ErrorCode::kParse, context + ": not an integer: '" + trimmed + "'");
  }
  return value;
}

std::vector<std::string> SplitFields(std::string_view line, char separator) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t pos = line.find(separator, start);
    if (pos == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

std::string Trim(std::string_view text) {
  const char* ws = " \t\r\n";
  size_t b = text.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  size_t e = text.find_last_not_of(ws);
  return std::string(text.substr(b, e - b + 1));
}

uint64_t StableHash64(std::string_view text, uint64_t seed) {
  uint64_t h = 1469598103934665603ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  h ^= h >> 30;
  h *= 0xBF58476D1CE4E5B9ULL;
  h ^= h >> 27;
  h *= 0x94D049BB133111EBULL;
  h ^= h >> 31;
  return h;
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace adaptfuse
