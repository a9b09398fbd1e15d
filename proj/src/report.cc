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


#include "smoothmart/report.h"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace smoothmart {
namespace {

nlohmann::ordered_json JsonNumber(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

}  // namespace

std::string FormatNumber(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void ReportRow::Add(const std::string& key, double value) {
  params.emplace_back(key, FormatNumber(value));
}

void ReportRow::Add(const std::string& key, const std::string& value) {
  params.emplace_back(key, value);
}

std::string ReportRow::ParamString() const {
  std::string out = "gen=" + generator;
  for (const auto& [key, value] : params) {
    out += ";" + key + "=" + value;
  }
  return out;
}

std::string RenderTable(const std::vector<ReportRow>& rows) {
  std::string out = std::string(kTableHeader) + "\n";
  for (const ReportRow& row : rows) {
    out += row.suite + "," + row.ParamString() + "," +
           FormatNumber(row.estimate) + "," + FormatNumber(row.ci_upper) +
           "," + FormatNumber(row.bound) + "," + ToString(row.verdict) + "," +
           FormatNumber(row.ms) + "\n";
  }
  return out;
}

std::string RenderStructured(const std::vector<ReportRow>& rows) {
  std::string out;
  for (const ReportRow& row : rows) {
    nlohmann::ordered_json rec;
    rec["schema"] = kReportSchema;
    rec["suite"] = row.suite;
    rec["generator"] = row.generator;
    rec["grid_index"] = row.grid_index;
    nlohmann::ordered_json params = nlohmann::ordered_json::object();
    for (const auto& [key, value] : row.params) params[key] = value;
    rec["params"] = params;
    rec["estimate"] = JsonNumber(row.estimate);
    rec["ci_upper"] = JsonNumber(row.ci_upper);
    rec["bound"] = JsonNumber(row.bound);
    rec["verdict"] = ToString(row.verdict);
    rec["ms"] = JsonNumber(row.ms);
    if (!row.note.empty()) rec["note"] = row.note;
    out += rec.dump() + "\n";
  }
  return out;
}

}  // namespace smoothmart
