// Copyright 2026 The Smoothmart Authors
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


// Report rows and their two renderings: a comma-separated table and one
// JSON record per line.

#ifndef SMOOTHMART_REPORT_H_
#define SMOOTHMART_REPORT_H_

#include <string>
#include <utility>
#include <vector>

#include "smoothmart/verify.h"

namespace smoothmart {

inline constexpr char kReportSchema[] = "v1";
inline constexpr char kTableHeader[] =
    "suite,param,estimate,ci_upper,bound,verdict,ms";

struct ReportRow {
  std::string suite;
  std::string generator;
  int grid_index = 0;
  // Rendered as key=value pairs joined by ';'.
  std::vector<std::pair<std::string, std::string>> params;
  double estimate = 0.0;
  double ci_upper = 0.0;
  double bound = 0.0;
  Verdict verdict = Verdict::kNotApplicable;
  double ms = 0.0;
  std::string note;

  void Add(const std::string& key, double value);
  void Add(const std::string& key, const std::string& value);
  std::string ParamString() const;
};

// %.12g; "nan", "inf" and "-inf" for non-finite values.
std::string FormatNumber(double value);

std::string RenderTable(const std::vector<ReportRow>& rows);
std::string RenderStructured(const std::vector<ReportRow>& rows);

}  // namespace smoothmart

#endif  // SMOOTHMART_REPORT_H_
