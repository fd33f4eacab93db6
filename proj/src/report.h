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

#ifndef MAIDVOTE_SRC_REPORT_H_
#define MAIDVOTE_SRC_REPORT_H_

// Output document for the command line: named tables plus verification
// reports, rendered as an aligned text table, JSON or CSV.

#include <deque>
#include <string>
#include <variant>
#include <vector>

#include "maidvote/analysis.h"

namespace maidvote {

enum class OutputFormat { kTable, kJson, kCsv };

using Cell = std::variant<std::string, double>;

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

class ReportDocument {
 public:
  ReportDocument(std::string command, std::vector<std::string> args);

  // The returned reference stays valid for the life of the document.
  Table& AddTable(std::string title, std::vector<std::string> columns);
  void AddReport(VerificationReport report);

  const std::deque<Table>& tables() const { return tables_; }
  const std::vector<VerificationReport>& reports() const { return reports_; }
  // True if any report is Violated.
  bool any_violated() const;

  std::string Render(OutputFormat format) const;

 private:
  std::string RenderTable() const;
  std::string RenderJson() const;
  std::string RenderCsv() const;

  std::string command_;
  std::vector<std::string> args_;
  std::deque<Table> tables_;
  std::vector<VerificationReport> reports_;
};

}  // namespace maidvote

#endif  // MAIDVOTE_SRC_REPORT_H_
