// Copyright 2026 The maidvote Authors
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

#include "report.h"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace maidvote {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string CellText(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return FormatNumber(std::get<double>(c));
}

ordered_json CellJson(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return std::get<double>(c);
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void WriteCsv(std::ostringstream& os, const Table& t) {
  os << "# " << t.title << "\n";
  for (size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << CsvField(t.columns[i]);
  os << "\n";
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << CsvField(CellText(row[i]));
    os << "\n";
  }
}

void WriteAligned(std::ostringstream& os, const Table& t) {
  std::vector<size_t> width(t.columns.size());
  for (size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
  for (const auto& row : t.rows) {
    for (size_t i = 0; i < row.size() && i < width.size(); ++i) {
      width[i] = std::max(width[i], CellText(row[i]).size());
    }
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (size_t i = 0; i < cells.size(); ++i) {
      std::string c = cells[i];
      if (i + 1 < cells.size()) c.resize(width[i], ' ');
      out += (i ? "  " : "") + c;
    }
    os << "  " << out << "\n";
  };
  os << t.title << "\n";
  line(t.columns);
  for (const auto& row : t.rows) {
    std::vector<std::string> cells;
    for (const auto& c : row) cells.push_back(CellText(c));
    line(cells);
  }
}

// Reports flattened into three tables for the text and CSV renderings.
std::vector<Table> ReportTables(const std::vector<VerificationReport>& reports) {
  Table verdicts{"verdicts", {"claim", "verdict", "summary"}, {}};
  Table margins{"margins", {"claim", "name", "value"}, {}};
  Table witness{"witness", {"claim", "variable", "label"}, {}};
  for (const auto& r : reports) {
    verdicts.rows.push_back({r.claim, std::string(VerdictName(r.verdict)), r.summary});
    for (const auto& m : r.margins) margins.rows.push_back({r.claim, m.name, m.value});
    for (const auto& [k, v] : r.witness) witness.rows.push_back({r.claim, k, v});
  }
  std::vector<Table> out;
  if (!reports.empty()) out = {verdicts, margins, witness};
  return out;
}

}  // namespace

ReportDocument::ReportDocument(std::string command, std::vector<std::string> args)
    : command_(std::move(command)), args_(std::move(args)) {}

Table& ReportDocument::AddTable(std::string title, std::vector<std::string> columns) {
  tables_.push_back(Table{std::move(title), std::move(columns), {}});
  return tables_.back();
}

void ReportDocument::AddReport(VerificationReport report) { reports_.push_back(std::move(report)); }

bool ReportDocument::any_violated() const {
  return std::any_of(reports_.begin(), reports_.end(),
                     [](const VerificationReport& r) { return r.verdict == Verdict::kViolated; });
}

std::string ReportDocument::Render(OutputFormat format) const {
  switch (format) {
    case OutputFormat::kTable: return RenderTable();
    case OutputFormat::kJson: return RenderJson();
    case OutputFormat::kCsv: return RenderCsv();
  }
  return {};
}

std::string ReportDocument::RenderTable() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : tables_) {
    if (!first) os << "\n";
    first = false;
    WriteAligned(os, t);
  }
  for (const auto& r : reports_) {
    if (!first) os << "\n";
    first = false;
    os << r.claim << ": " << VerdictName(r.verdict) << " (" << r.summary << ")\n";
    for (const auto& m : r.margins) os << "  " << m.name << " = " << FormatNumber(m.value) << "\n";
    for (const auto& [k, v] : r.witness) os << "  witness " << k << " = " << v << "\n";
  }
  return os.str();
}

std::string ReportDocument::RenderJson() const {
  ordered_json doc;
  doc["command"] = {{"name", command_}, {"args", args_}};
  ordered_json tables = ordered_json::array();
  for (const auto& t : tables_) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
      ordered_json r = ordered_json::array();
      for (const auto& c : row) r.push_back(CellJson(c));
      rows.push_back(std::move(r));
    }
    tables.push_back({{"title", t.title}, {"columns", t.columns}, {"rows", std::move(rows)}});
  }
  doc["tables"] = std::move(tables);
  ordered_json reports = ordered_json::array();
  for (const auto& r : reports_) {
    ordered_json margins = ordered_json::object();
    for (const auto& m : r.margins) margins[m.name] = m.value;
    ordered_json witness = ordered_json::object();
    for (const auto& [k, v] : r.witness) witness[k] = v;
    reports.push_back({{"claim", r.claim},
                       {"verdict", VerdictName(r.verdict)},
                       {"summary", r.summary},
                       {"margins", std::move(margins)},
                       {"witness", std::move(witness)}});
  }
  doc["reports"] = std::move(reports);
  return doc.dump(2) + "\n";
}

std::string ReportDocument::RenderCsv() const {
  std::ostringstream os;
  bool first = true;
  std::vector<Table> all(tables_.begin(), tables_.end());
  for (auto& t : ReportTables(reports_)) all.push_back(std::move(t));
  for (const auto& t : all) {
    if (!first) os << "\n";
    first = false;
    WriteCsv(os, t);
  }
  return os.str();
}

}  // namespace maidvote
