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

#include "maidvote/maid.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "errors.h"
#include "generators.h"
#include "maidvote/models.h"
#include "maidvote/scenario_io.h"
#include "oracle.h"

namespace maidvote {
namespace {

using testing::ErrorOf;

const Scenario& Table2() {
  static const Scenario sc = ResolveScenario("table2").scenario;
  return sc;
}

void CheckDistribution(const Categorical& got, const std::vector<double>& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= tol);
}

Maid SingleDecision(const std::vector<double>& utilities) {
  const std::vector<std::string> names = {"a", "b", "c"};
  auto dom = Domain::Named("Y", {names.begin(), names.begin() + utilities.size()});
  Maid m;
  m.decisions.push_back(DecisionNode{"Y", dom, {}, "me"});
  m.utilities.push_back(UtilityNode{"U", "me", {"Y"}, Factor::Signed({{"Y", dom}}, utilities)});
  m.solve_order = {"Y"};
  return m;
}

TEST_CASE("validate: well-formed models have no findings") {
  CHECK(Validate(BuildMaid(Table2(), ModelKind::kTrustingVoter)).empty());
  PunditContext ctx;
  CHECK(Validate(BuildMaid(Table2(), ModelKind::kBiasedPundit, ctx)).empty());
  CHECK(Validate(BuildMaid(Table2(), ModelKind::kSuspiciousVoter, ctx)).empty());
}

TEST_CASE("validate: a cycle gives one finding") {
  const auto t = Table2().t_domain, d = Table2().d_domain;
  Maid m;
  m.chance.push_back(ChanceNode{vars::kTk, t, {vars::kDk},
                                Factor::Constant({{vars::kDk, d}, {vars::kTk, t}}, 0.25), {}});
  m.chance.push_back(ChanceNode{vars::kDk, d, {vars::kTk},
                                Factor::Constant({{vars::kTk, t}, {vars::kDk, d}}, 0.25), {}});
  const auto findings = Validate(m);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].message.find("cycle") != std::string::npos);
}

TEST_CASE("validate: an unnormalized row names node and row") {
  Maid m = BuildMaid(Table2(), ModelKind::kTrustingVoter);
  for (auto& n : m.chance) {
    if (n.id != vars::kDk) continue;
    auto values = n.cpt.values();
    values[1] = 0.5;  // goodLiberal: 0.4 + 0.5
    n.cpt = Factor(n.cpt.scope(), values);
  }
  const auto findings = Validate(m);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].node == vars::kDk);
  CHECK(findings[0].message.find("goodLiberal") != std::string::npos);
  CHECK(findings[0].message.find("0.9") != std::string::npos);
}

TEST_CASE("validate: other structural problems") {
  Maid m = SingleDecision({1, 2});
  m.solve_order.clear();
  CHECK_FALSE(Validate(m).empty());
  m = SingleDecision({1, 2});
  m.decisions[0].info_parents = {"ghost"};
  CHECK_FALSE(Validate(m).empty());
  m = SingleDecision({1, 2});
  m.decisions[0].info_parents = {"Y"};
  CHECK_FALSE(Validate(m).empty());
}

TEST_CASE("solve: s*y gives the sign policy with ties at 0") {
  const PolicyTable p = SolveDecision(BuildMaid(Table2(), ModelKind::kTrustingVoter), vars::kYik);
  const auto& s = *Table2().s_domain;
  REQUIRE(p.rows() == s.size());
  for (size_t r = 0; r < p.rows(); ++r) CHECK(p.choice(r) == (s.value(r) > 0 ? 1u : 0u));
  CHECK(p.choice(s.index_of("-2")) == 0);
  CHECK(p.choice(s.index_of("0")) == 0);
}

TEST_CASE("solve: ties go to the first label") {
  CHECK(SolveDecision(SingleDecision({3.0, 3.0}), "Y").choice(0) == 0);
  CHECK(SolveDecision(SingleDecision({1.0, 3.0, 3.0}), "Y").choice(0) == 1);
}

TEST_CASE("solve: owner without utility is a specification error") {
  Maid m = SingleDecision({1.0, 2.0});
  m.utilities[0].owner = "someone-else";
  const auto e = ErrorOf([&] { SolveDecision(m, "Y"); });
  REQUIRE(e);
  CHECK(e->kind == ErrorKind::kSpecification);
}

TEST_CASE("solve: invariant under positive affine utility maps") {
  testing::Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Scenario sc = testing::RandomScenario(rng);
    const Maid m = BuildMaid(sc, ModelKind::kBiasedPundit, {});
    Maid scaled = m;
    const double a = rng.uniform(0.1, 10.0), b = rng.uniform(-5.0, 5.0);
    for (auto& u : scaled.utilities) {
      auto values = u.table.values();
      for (double& x : values) x = a * x + b;
      u.table = Factor::Signed(u.table.scope(), values);
    }
    CHECK(SolveDecision(m, vars::kBk).choices() == SolveDecision(scaled, vars::kBk).choices());
  }
}

TEST_CASE("compile: deterministic and structurally faithful") {
  const Maid tv = BuildMaid(Table2(), ModelKind::kTrustingVoter);
  const BayesNet bn = Compile(tv);
  const auto ids = bn.ids();
  CHECK(std::set<std::string>(ids.begin(), ids.end()) ==
        std::set<std::string>{vars::kTi, vars::kTk, vars::kDk, vars::kSik, vars::kYik});
  CHECK(bn.node(vars::kYik).decided_by == kVoter);
  const BayesNet again = Compile(tv);
  CHECK(again.node(vars::kYik).cpt.values() == bn.node(vars::kYik).cpt.values());

  Maid chance_only;
  for (const auto& n : bn.nodes()) chance_only.chance.push_back(n);
  const BayesNet same = Compile(chance_only);
  for (const auto& n : bn.nodes()) CHECK(same.node(n.id).cpt.values() == n.cpt.values());

  PunditContext ctx;
  const BayesNet bp = Compile(BuildMaid(Table2(), ModelKind::kBiasedPundit, ctx));
  CHECK(bp.node(vars::kBk).decided_by == kPundit);
  // Rows with P(C_k, S_jk) = 0 have no expected utility to maximize; only
  // the reachable ones must agree with the closed form.
  const Factor& engine = bp.node(vars::kBk).cpt;
  const Factor closed = PunditPolicy(Table2(), ctx);
  const auto reach = testing::PairMarginal(testing::EnumerateJoint(bp), vars::kCk, vars::kSjk);
  const size_t nd = Table2().d_domain->size();
  size_t compared = 0;
  for (size_t row = 0; row < reach.size(); ++row) {
    if (reach[row] <= 0.0) continue;
    ++compared;
    for (size_t b = 0; b < nd; ++b) CHECK(engine[row * nd + b] == closed[row * nd + b]);
  }
  CHECK(compared > 0);
}

TEST_CASE("infer: table2 posteriors") {
  const BayesNet bn = Compile(BuildMaid(Table2(), ModelKind::kTrustingVoter));
  CheckDistribution(Infer(bn, vars::kTk, {{vars::kDk, "chthulu"}}), {0, 0, 1.0 / 3, 2.0 / 3}, 1e-12);
  CheckDistribution(Infer(bn, vars::kTk, {{vars::kDk, "guns"}}),
                    {0, 0.207 / 0.215, 0, 0.008 / 0.215}, 1e-12);
  CheckDistribution(Infer(bn, vars::kTk, {}), Table2().prior_tk.probabilities(), 1e-12);
  CheckDistribution(Infer(bn, vars::kTi, {}), Table2().prior_ti.probabilities(), 1e-12);
  CHECK(ErrorOf([&] { Infer(bn, vars::kTk, {{vars::kTk, "goodLiberal"}}); })->kind ==
        ErrorKind::kInput);
  CHECK(ErrorOf([&] {
          Infer(bn, vars::kDk, {{vars::kTk, "goodLiberal"}, {vars::kYik, "0"}, {vars::kTi, "evilLiberal"},
                                {vars::kSik, "6"}});
        })->kind == ErrorKind::kZeroEvidence);
}

TEST_CASE("brute-force joint") {
  const auto coin = Domain::Named("C", {"h", "t"});
  const auto coin2 = Domain::Named("K", {"h", "t"});
  const BayesNet coins({ChanceNode{"A", coin, {}, Factor({{"A", coin}}, {0.3, 0.7}), {}},
                        ChanceNode{"B", coin2, {}, Factor({{"B", coin2}}, {0.6, 0.4}), {}}});
  const Factor j = BruteForceJoint(coins);
  REQUIRE(j.size() == 4);
  const std::vector<double> want = {0.18, 0.12, 0.42, 0.28};
  for (size_t i = 0; i < 4; ++i) CHECK(std::abs(j[i] - want[i]) <= 1e-15);

  const BayesNet bn = Compile(BuildMaid(Table2(), ModelKind::kTrustingVoter));
  const Factor full = BruteForceJoint(bn);
  CHECK(std::abs(full.total() - 1.0) <= 1e-9);
  const Categorical tk = Normalize(MarginalizeTo(full, std::vector<std::string>{vars::kTk}));
  CheckDistribution(tk, {0.29, 0.69, 0.01, 0.01}, 1e-12);
  CHECK(ErrorOf([&] { BruteForceJoint(bn, 10); })->kind == ErrorKind::kResource);
}

TEST_CASE("brute-force joint agrees with the test enumeration") {
  testing::Rng rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const BayesNet bn = testing::RandomBayesNet(rng, 6, 5);
    const Factor lib = BruteForceJoint(bn);
    const testing::Joint mine = testing::EnumerateJoint(bn);
    REQUIRE(lib.size() == mine.p.size());
    for (size_t i = 0; i < lib.size(); ++i) CHECK(std::abs(lib[i] - mine.p[i]) <= 1e-15);
  }
}

TEST_CASE("infer agrees with enumeration on random networks") {
  testing::Rng rng(29);
  for (int trial = 0; trial < 50; ++trial) {
    const BayesNet bn = testing::RandomBayesNet(rng, 6, 5);
    const testing::Joint j = testing::EnumerateJoint(bn);
    for (const auto& q : j.vars) {
      for (size_t e = 0; e < j.vars.size(); ++e) {
        if (j.vars[e] == q) continue;
        for (size_t l = 0; l < j.sizes[e]; ++l) {
          const Assignment ev{{j.vars[e], j.domains[e]->label(l).name}};
          const auto want = testing::Conditional(j, q, ev);
          if (want.empty()) continue;
          CheckDistribution(Infer(bn, q, ev), want, 1e-9);
        }
      }
    }
  }
}

TEST_CASE("compiled policies are point masses") {
  testing::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Scenario sc = testing::RandomScenario(rng);
    const BayesNet bn = Compile(BuildMaid(sc, ModelKind::kSuspiciousVoter, {}));
    for (const auto& id : {vars::kBk, vars::kYik}) {
      const auto& n = bn.node(id);
      const size_t k = n.domain->size();
      for (size_t r = 0; r < n.cpt.size() / k; ++r) {
        size_t ones = 0;
        for (size_t i = 0; i < k; ++i) {
          const double v = n.cpt[r * k + i];
          CHECK((v == 0.0 || v == 1.0));
          ones += v == 1.0;
        }
        CHECK(ones == 1);
      }
    }
  }
}

}  // namespace
}  // namespace maidvote
