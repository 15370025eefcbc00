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

#include "fairsv/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fairsv/csv.hpp"
#include "fairsv/error.hpp"

namespace fairsv {

namespace {

constexpr const char* kModule = "report";

double round2(double v) { return std::round(v * 100.0) / 100.0; }

// Lowest rounded DS per test-file block; all rows achieving it are
// flagged.
struct BlockMinima {
  std::map<std::string, double> min_ds_yo;
  std::map<std::string, double> min_ds_mf;
};

BlockMinima block_minima(const std::vector<ResultRow>& rows) {
  BlockMinima m;
  for (const auto& row : rows) {
    const double yo = round2(row.ds_young_old);
    const double mf = round2(row.ds_male_female);
    auto [it_yo, new_yo] = m.min_ds_yo.emplace(row.test_file_id, yo);
    if (!new_yo) it_yo->second = std::min(it_yo->second, yo);
    auto [it_mf, new_mf] = m.min_ds_mf.emplace(row.test_file_id, mf);
    if (!new_mf) it_mf->second = std::min(it_mf->second, mf);
  }
  return m;
}

std::string accuracy_text(const std::optional<double>& acc) {
  return acc ? format_fixed(*acc, 2) : "n/a";
}

}  // namespace

std::string emit_table(const std::vector<ResultRow>& rows, TableFormat format) {
  if (rows.empty()) throw Error(kModule, "no rows to emit");
  const BlockMinima minima = block_minima(rows);

  auto lowest_yo = [&](const ResultRow& r) {
    return round2(r.ds_young_old) == minima.min_ds_yo.at(r.test_file_id);
  };
  auto lowest_mf = [&](const ResultRow& r) {
    return round2(r.ds_male_female) == minima.min_ds_mf.at(r.test_file_id);
  };

  if (format == TableFormat::kCsv) {
    std::string out = join_fields(
        {"train_file", "test_file", "accuracy", "eer", "eer_old", "eer_young",
         "eer_female", "eer_male", "ds_young_old", "ds_male_female",
         "min_ds_young_old", "min_ds_male_female"},
        ',', kModule);
    out.push_back('\n');
    for (const auto& r : rows) {
      out += join_fields(
          {r.train_file_id, r.test_file_id, accuracy_text(r.training_accuracy),
           format_fixed(r.eer, 2), format_fixed(r.eer_old, 2),
           format_fixed(r.eer_young, 2), format_fixed(r.eer_female, 2),
           format_fixed(r.eer_male, 2), format_fixed(r.ds_young_old, 2),
           format_fixed(r.ds_male_female, 2), lowest_yo(r) ? "1" : "0",
           lowest_mf(r) ? "1" : "0"},
          ',', kModule);
      out.push_back('\n');
    }
    return out;
  }

  std::string out =
      "| Train File | Test File | Acc. | EER | EER O | EER Y | EER F | EER M "
      "| DS Y/O | DS M/F |\n"
      "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    auto ds_cell = [](double v, bool flag) {
      std::string text = format_fixed(v, 2);
      return flag ? "**" + text + "**" : text;
    };
    out += "| " + r.train_file_id + " | " + r.test_file_id + " | " +
           accuracy_text(r.training_accuracy) + " | " + format_fixed(r.eer, 2) +
           " | " + format_fixed(r.eer_old, 2) + " | " +
           format_fixed(r.eer_young, 2) + " | " + format_fixed(r.eer_female, 2) +
           " | " + format_fixed(r.eer_male, 2) + " | " +
           ds_cell(r.ds_young_old, lowest_yo(r)) + " | " +
           ds_cell(r.ds_male_female, lowest_mf(r)) + " |\n";
  }
  return out;
}

std::vector<ResultRow> parse_table_csv(const std::string& text) {
  DelimitedTable table = parse_delimited(text, ',', kModule);
  const std::size_t c_train = table.column("train_file", kModule);
  const std::size_t c_test = table.column("test_file", kModule);
  const std::size_t c_acc = table.column("accuracy", kModule);
  const std::size_t c_eer = table.column("eer", kModule);
  const std::size_t c_old = table.column("eer_old", kModule);
  const std::size_t c_young = table.column("eer_young", kModule);
  const std::size_t c_female = table.column("eer_female", kModule);
  const std::size_t c_male = table.column("eer_male", kModule);
  const std::size_t c_yo = table.column("ds_young_old", kModule);
  const std::size_t c_mf = table.column("ds_male_female", kModule);

  std::vector<ResultRow> rows;
  for (const auto& row : table.rows) {
    ResultRow r;
    r.train_file_id = row.at(c_train);
    r.test_file_id = row.at(c_test);
    if (row.at(c_acc) != "n/a") {
      r.training_accuracy =
          parse_double_strict(row.at(c_acc), kModule, "accuracy");
    }
    r.eer = parse_double_strict(row.at(c_eer), kModule, "eer");
    r.eer_old = parse_double_strict(row.at(c_old), kModule, "eer_old");
    r.eer_young = parse_double_strict(row.at(c_young), kModule, "eer_young");
    r.eer_female = parse_double_strict(row.at(c_female), kModule, "eer_female");
    r.eer_male = parse_double_strict(row.at(c_male), kModule, "eer_male");
    r.ds_young_old = parse_double_strict(row.at(c_yo), kModule, "ds_young_old");
    r.ds_male_female =
        parse_double_strict(row.at(c_mf), kModule, "ds_male_female");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string emit_series(const EpochSeries& series) {
  if (series.eer_by_slice.empty()) throw Error(kModule, "empty series");
  std::string out = join_fields({"epoch", "slice", "eer_percent"}, ',', kModule);
  out.push_back('\n');
  // std::map iteration already sorts by (slice, epoch).
  for (const auto& [slice, by_epoch] : series.eer_by_slice) {
    for (const auto& [epoch, eer] : by_epoch) {
      out += join_fields(
          {std::to_string(epoch), slice, format_fixed(eer * 100.0, 4)}, ',',
          kModule);
      out.push_back('\n');
    }
  }
  return out;
}

EpochSeries parse_series(const std::string& text) {
  DelimitedTable table = parse_delimited(text, ',', kModule);
  const std::size_t c_epoch = table.column("epoch", kModule);
  const std::size_t c_slice = table.column("slice", kModule);
  const std::size_t c_eer = table.column("eer_percent", kModule);
  EpochSeries series;
  for (const auto& row : table.rows) {
    const int epoch = static_cast<int>(
        parse_int_strict(row.at(c_epoch), kModule, "epoch"));
    const double eer =
        parse_double_strict(row.at(c_eer), kModule, "eer_percent") / 100.0;
    series.eer_by_slice[row.at(c_slice)][epoch] = eer;
  }
  return series;
}

}  // namespace fairsv
