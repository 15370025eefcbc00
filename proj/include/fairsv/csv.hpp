// Copyright (c) 2026 The fairsv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAIRSV_CSV_HPP_
#define FAIRSV_CSV_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fairsv {

// Minimal delimiter-separated text handling. Fields are plain tokens: no
// quoting, so a field may not contain the delimiter or a newline (writers
// reject such fields). Every file carries a header row.

struct DelimitedTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;  // data rows, header excluded

  // Index of a required column, or an error naming it.
  std::size_t column(const std::string& name, const std::string& module) const;
  std::optional<std::size_t> find_column(const std::string& name) const;
};

std::vector<std::string> split_fields(std::string_view line, char delimiter);

DelimitedTable read_delimited_file(const std::filesystem::path& path,
                                   char delimiter, const std::string& module);
DelimitedTable parse_delimited(std::string_view text, char delimiter,
                               const std::string& module);

// Joins fields with the delimiter, rejecting embedded delimiters/newlines.
std::string join_fields(const std::vector<std::string>& fields, char delimiter,
                        const std::string& module);

// Strict numeric parsing: the whole token must be consumed.
std::int64_t parse_int_strict(std::string_view token, const std::string& module,
                              const std::string& what);
double parse_double_strict(std::string_view token, const std::string& module,
                           const std::string& what);

// Fixed-point with `decimals` digits ("%.*f"), used wherever the file
// format pins a precision.
std::string format_fixed(double value, int decimals);
// Compact reproducible float formatting ("%.9g").
std::string format_general(double value);

std::string read_text_file(const std::filesystem::path& path,
                           const std::string& module);
void write_text_file_atomic(const std::filesystem::path& path,
                            std::string_view content,
                            const std::string& module);

}  // namespace fairsv

#endif  // FAIRSV_CSV_HPP_
