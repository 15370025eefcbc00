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

#ifndef FAIRSV_REPORT_HPP_
#define FAIRSV_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "fairsv/metrics.hpp"

namespace fairsv {

// One result-table row. All rates are percentages; training accuracy is
// imported from a side file when available, never computed here.
struct ResultRow {
  std::string train_file_id;
  std::string test_file_id;
  std::optional<double> training_accuracy;
  double eer = 0.0;
  double eer_old = 0.0;
  double eer_young = 0.0;
  double eer_female = 0.0;
  double eer_male = 0.0;
  double ds_young_old = 0.0;
  double ds_male_female = 0.0;
};

enum class TableFormat { kCsv, kMarkdown };

// Rows rendered with two decimals, grouped into blocks per test file;
// within each block the lowest DS Y/O and DS M/F are flagged (bold in
// markdown, marker columns in csv). Missing accuracy renders as "n/a".
std::string emit_table(const std::vector<ResultRow>& rows, TableFormat format);

std::vector<ResultRow> parse_table_csv(const std::string& text);

// Long-format epoch series: epoch, slice, eer_percent sorted by
// (slice, epoch), ready for external plotting.
std::string emit_series(const EpochSeries& series);
EpochSeries parse_series(const std::string& text);

}  // namespace fairsv

#endif  // FAIRSV_REPORT_HPP_
