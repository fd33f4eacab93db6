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

#include "maidvote/scenario_io.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "doctest.h"
#include "errors.h"
#include "generators.h"

namespace maidvote {
namespace {

using testing::ErrorOf;

std::string Table2Text() { return std::string(*BundledScenarioText("table2")); }

std::string Replace(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  REQUIRE(at != std::string::npos);
  return text.replace(at, from.size(), to);
}

void CheckSameTables(const ScenarioTables& a, const ScenarioTables& b) {
  CHECK(a.name == b.name);
  CHECK(a.positions == b.positions);
  CHECK(a.messages == b.messages);
  CHECK(a.s_values == b.s_values);
  CHECK(a.y_values == b.y_values);
  CHECK(a.prior_ti == b.prior_ti);
  CHECK(a.prior_tk == b.prior_tk);
  CHECK(a.prior_tj == b.prior_tj);
  CHECK(a.d_given_t == b.d_given_t);
  CHECK(a.s_given_tt == b.s_given_tt);
  CHECK(a.utility == b.utility);
  CHECK(a.reputation == b.reputation);
}

TEST_CASE("bundled table2 priors") {
  const Scenario sc = ResolveScenario("table2").scenario;
  CHECK(sc.prior_ti.probabilities() == std::vector<double>{0.4, 0.4, 0.1, 0.1});
  CHECK(sc.prior_tk.probabilities() == std::vector<double>{0.29, 0.69, 0.01, 0.01});
  CHECK(sc.t_domain->size() == 4);
  CHECK(sc.d_domain->size() == 4);
  CHECK(sc.p_d_given_t(3, 2) == 0.8);
  CHECK(sc.p_d_given_t(3, 3) == 0.2);
}

TEST_CASE("bundled names") {
  const auto names = BundledScenarioNames();
  CHECK(std::find(names.begin(), names.end(), "table2") != names.end());
  CHECK(std::find(names.begin(), names.end(), "anomalous") != names.end());
  CHECK_FALSE(BundledScenarioText("no-such-scenario").has_value());
  for (const auto& n : names) CHECK(ResolveScenario(n).scenario.name == n);

  const auto an = ResolveScenario("anomalous");
  REQUIRE(an.witness.has_value());
  CHECK(an.witness->t_i == "lib");
  CHECK(an.witness->b == "m2");
  CHECK(an.pundit.assumed_ti.has_value());
}

TEST_CASE("serialization round-trips") {
  for (const auto& n : BundledScenarioNames()) {
    const ScenarioFile f = ResolveScenario(n);
    const std::string text = SerializeScenario(f);
    const ScenarioFile g = ParseScenario(text, "round-trip");
    CheckSameTables(ToTables(f.scenario), ToTables(g.scenario));
    CHECK(f.description == g.description);
    CHECK(f.pundit.known_tj == g.pundit.known_tj);
    CHECK(f.pundit.assumed_ti == g.pundit.assumed_ti);
    CHECK(f.witness.has_value() == g.witness.has_value());
    CHECK(SerializeScenario(g) == text);
  }
  testing::Rng rng(83);
  for (int trial = 0; trial < 50; ++trial) {
    ScenarioFile f{testing::RandomScenario(rng), "random", {}, std::nullopt};
    if (rng.chance(0.5)) f.pundit.known_tj = f.scenario.t_domain->label(0).name;
    const ScenarioFile g = ParseScenario(SerializeScenario(f), "random");
    CheckSameTables(ToTables(f.scenario), ToTables(g.scenario));
    CHECK(f.pundit.known_tj == g.pundit.known_tj);
  }
}

TEST_CASE("file save and load") {
  const auto path = std::filesystem::temp_directory_path() / "maidvote_scenario_io_test.json";
  const ScenarioFile f = ResolveScenario("anomalous");
  SaveScenarioFile(path.string(), f);
  CheckSameTables(ToTables(LoadScenarioFile(path.string()).scenario), ToTables(f.scenario));
  // An existing path wins over a bundled name.
  CHECK(ResolveScenario(path.string()).scenario.name == "anomalous");
  std::filesystem::remove(path);

  CHECK(ErrorOf([&] { LoadScenarioFile(path.string()); })->kind == ErrorKind::kInput);
  CHECK(ErrorOf([] { ResolveScenario("no-such-scenario"); }).has_value());
}

TEST_CASE("row that sums to 0.8 is named") {
  const std::string text = Replace(Table2Text(), "\"motherhood\": 0.6", "\"motherhood\": 0.4");
  const auto e = ErrorOf([&] { ParseScenario(text, "edited"); });
  REQUIRE(e.has_value());
  CHECK(e->kind == ErrorKind::kSpecification);
  CHECK(e->message.find("edited") != std::string::npos);
  CHECK(e->message.find("D_given_T[goodLiberal]") != std::string::npos);
  CHECK(e->message.find("0.8") != std::string::npos);
}

TEST_CASE("nonzero diagonal reputation is rejected") {
  ScenarioTables t = ToTables(ResolveScenario("table2").scenario);
  t.reputation[2][2] = 0.1;
  const auto e = ErrorOf([&] { MakeScenario(t); });
  REQUIRE(e.has_value());
  CHECK(e->kind == ErrorKind::kSpecification);
  CHECK(e->message.find("reputation[guns][guns]") != std::string::npos);
  CHECK(e->message.find("must cost 0") != std::string::npos);

  std::ifstream in(std::string(MAIDVOTE_TEST_DATA) + "/bad_reputation.json");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  REQUIRE_FALSE(text.empty());
  CHECK(ErrorOf([&] { ParseScenario(text, "bad"); })->kind == ErrorKind::kSpecification);
}

TEST_CASE("malformed documents") {
  const auto parse_kind = [](const std::string& text) {
    const auto e = ErrorOf([&] { ParseScenario(text, "doc"); });
    return e ? e->kind : ErrorKind::kStructural;
  };
  CHECK(parse_kind("{") == ErrorKind::kParse);
  CHECK(parse_kind("[]") == ErrorKind::kParse);
  CHECK(parse_kind(Replace(Table2Text(), "\"schema_version\": 1", "\"schema_version\": 7")) ==
        ErrorKind::kParse);
  CHECK(parse_kind(Replace(Table2Text(), "\"schema_version\": 1", "\"schema_version\": 1, \"extra\": 0")) ==
        ErrorKind::kParse);
  CHECK(parse_kind(Replace(Table2Text(), "\"goodLiberal\": 0.29", "\"goodLiberal\": \"lots\"")) ==
        ErrorKind::kParse);
  CHECK(parse_kind(Replace(Table2Text(), "\"goodLiberal\": 0.29", "\"nobody\": 0.29")) ==
        ErrorKind::kParse);
}

}  // namespace
}  // namespace maidvote
