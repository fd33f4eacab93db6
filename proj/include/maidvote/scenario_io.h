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

#ifndef MAIDVOTE_SCENARIO_IO_H_
#define MAIDVOTE_SCENARIO_IO_H_

// JSON scenario files.
//
//   {
//     "schema_version": 1,
//     "metadata": {"name": ..., "description": ..., "witness": {"t_i": ..., "b": ...}},
//     "domains": {"positions": [...], "messages": [...],
//                 "similarity": [numbers], "support": [numbers]},
//     "priors": {"T_i": {label: p}, "T_k": {...}, "T_j": {...}},
//     "cpts": {"D_given_T": {t: {d: p}},
//              "S_given_T_T": {t_a: {t_b: {s: p} | {"uniform": [s, ...]}}}},
//     "utility": {s: {y: value}},
//     "reputation": {b: {c: value}},
//     "pundit": {"known_tj": label, "voter_ti": label}
//   }
//
// Missing probabilities are 0. A similarity row may be given for either
// order of its two positions; diagonal reputation entries may be omitted.
// Unknown keys are rejected.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maidvote/models.h"

namespace maidvote {

inline constexpr int kSchemaVersion = 1;

struct ScenarioWitness {
  std::string t_i;
  std::string b;
};

struct ScenarioFile {
  Scenario scenario;
  std::string description;
  PunditContext pundit;
  std::optional<ScenarioWitness> witness;
};

// kParse for malformed documents, kSpecification for scenario invariants.
// Messages start with `origin` and the offending field path.
ScenarioFile ParseScenario(std::string_view text, const std::string& origin);
std::string SerializeScenario(const ScenarioFile& file);

// kInput if the file cannot be read or written.
ScenarioFile LoadScenarioFile(const std::string& path);
void SaveScenarioFile(const std::string& path, const ScenarioFile& file);

std::vector<std::string> BundledScenarioNames();
std::optional<std::string_view> BundledScenarioText(std::string_view name);

// An existing file path wins over a bundled name.
ScenarioFile ResolveScenario(const std::string& name_or_path);

}  // namespace maidvote

#endif  // MAIDVOTE_SCENARIO_IO_H_
