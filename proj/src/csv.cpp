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

#include "fairsv/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "fairsv/error.hpp"

namespace fairsv {

std::size_t DelimitedTable::column(const std::string& name,
                                   const std::string& module) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(module, "missing required column '" + name + "'");
}

std::optional<std::size_t> DelimitedTable::find_column(
    const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

DelimitedTable parse_delimited(std::string_view text, char delimiter,
                               const std::string& module) {
  DelimitedTable table;
  std::size_t pos = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    std::string_view line;
    if (end == std::string_view::npos) {
      line = text.substr(pos);
      pos = text.size() + 1;
    } else {
      line = text.substr(pos, end - pos);
      pos = end + 1;
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!saw_header) {
      table.header = split_fields(line, delimiter);
      saw_header = true;
    } else {
      table.rows.push_back(split_fields(line, delimiter));
    }
  }
  if (!saw_header) throw Error(module, "empty file: header row required");
  return table;
}

DelimitedTable read_delimited_file(const std::filesystem::path& path,
                                   char delimiter, const std::string& module) {
  return parse_delimited(read_text_file(path, module), delimiter, module);
}

std::string join_fields(const std::vector<std::string>& fields, char delimiter,
                        const std::string& module) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string& f = fields[i];
    if (f.find(delimiter) != std::string::npos ||
        f.find('\n') != std::string::npos ||
        f.find('\r') != std::string::npos) {
      throw Error(module,
                  "field contains the delimiter or a newline: '" + f + "'");
    }
    if (i) line.push_back(delimiter);
    line += f;
  }
  return line;
}

std::int64_t parse_int_strict(std::string_view token, const std::string& module,
                              const std::string& what) {
  std::string buf(token);
  if (buf.empty()) throw Error(module, "empty " + what);
  errno = 0;
  char* end = nullptr;
  long long value = std::strtoll(buf.c_str(), &end, 10);
  if (errno != 0 || end != buf.c_str() + buf.size()) {
    throw Error(module, "cannot parse " + what + " '" + buf + "' as an integer");
  }
  return value;
}

double parse_double_strict(std::string_view token, const std::string& module,
                           const std::string& what) {
  std::string buf(token);
  if (buf.empty()) throw Error(module, "empty " + what);
  errno = 0;
  char* end = nullptr;
  double value = std::strtod(buf.c_str(), &end);
  if (errno != 0 || end != buf.c_str() + buf.size()) {
    throw Error(module, "cannot parse " + what + " '" + buf + "' as a number");
  }
  return value;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string format_general(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string read_text_file(const std::filesystem::path& path,
                           const std::string& module) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(module, "cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file_atomic(const std::filesystem::path& path,
                            std::string_view content,
                            const std::string& module) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(module, "cannot open file for writing: " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(module, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw Error(module, "cannot rename " + tmp.string() + " to " +
                            path.string() + ": " + ec.message());
  }
}

}  // namespace fairsv
