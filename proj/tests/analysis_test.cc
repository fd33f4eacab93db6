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

#include "maidvote/analysis.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "errors.h"
#include "generators.h"
#include "maidvote/scenario_io.h"
#include "oracle.h"

namespace maidvote {
namespace {

using testing::ErrorOf;

const Scenario& Table2() {
  static const Scenario sc = ResolveScenario("table2").scenario;
  return sc;
}

const ScenarioFile& Anomalous() {
  static const ScenarioFile f = ResolveScenario("anomalous");
  return f;
}

Scenario Honest(const Scenario& sc) {
  ScenarioTables t = ToTables(sc);
  for (size_t b = 0; b < t.messages.size(); ++b) {
    for (size_t c = 0; c < t.messages.size(); ++c) t.reputation[b][c] = b == c ? 0.0 : 1e6;
  }
  return MakeScenario(t);
}

PolicyTable Policy(const std::vector<double>& s, const std::vector<size_t>& choices) {
  return PolicyTable(vars::kYik, Domain::Numeric(vars::kYik, {0, 1, 2}),
                     {{vars::kSik, Domain::Numeric(vars::kSik, s)}}, choices);
}

TEST_CASE("shift classification examples") {
  const auto dom = Domain::Numeric("S", {-5, 0, 5});
  CHECK(ClassifyShift(*dom, std::vector<double>{0, 0, 0}).kind == InfoKind::kNeutral);
  CHECK(ClassifyShift(*dom, std::vector<double>{1e-10, 0, -1e-10}).kind == InfoKind::kNeutral);

  const auto neg = ClassifyShift(*dom, std::vector<double>{0.1, 0, -0.1});
  CHECK(neg.kind == InfoKind::kStrictlyNegative);
  REQUIRE(neg.triples.size() == 1);
  CHECK(neg.triples[0].lower == 0);
  CHECK(neg.triples[0].upper == 2);
  CHECK(neg.triples[0].delta == doctest::Approx(0.1));

  CHECK(ClassifyShift(*dom, std::vector<double>{-0.1, 0, 0.1}).kind == InfoKind::kStrictlyPositive);
  CHECK(ClassifyShift(*dom, std::vector<double>{0.1, -0.05, -0.05}).kind == InfoKind::kMixed);
  CHECK(ClassifyShift(*dom, std::vector<double>{0.1, -0.1 + 5e-10, 0}).kind ==
        InfoKind::kStrictlyNegative);
  CHECK(ClassifyShift(*dom, std::vector<double>{0.1, -0.1 + 5e-9, 0}).kind == InfoKind::kMixed);
  CHECK(ErrorOf([&] { ClassifyShift(*dom, std::vector<double>{0, 0}); })->kind == ErrorKind::kInput);
}

TEST_CASE("matching with repeated magnitudes") {
  const auto d = Domain::Numeric("S", {-2, 0, 1, 3});
  CHECK(ClassifyShift(*d, std::vector<double>{0.2, 0.2, -0.2, -0.2}).kind == InfoKind::kStrictlyNegative);
  // Only -2 -> 1 and 0 -> 3 work: a first-fit choice of 1 for 0 would strand -2.
  CHECK(ClassifyShift(*d, std::vector<double>{0.2, 0.1, -0.2, -0.1}).kind == InfoKind::kStrictlyNegative);
  CHECK(ClassifyShift(*d, std::vector<double>{0.2, -0.2, 0.2, -0.2}).kind == InfoKind::kStrictlyNegative);
  CHECK(ClassifyShift(*d, std::vector<double>{-0.2, 0.2, -0.2, 0.2}).kind == InfoKind::kStrictlyPositive);
}

TEST_CASE("classifier agrees with exhaustive pairing search") {
  testing::Rng rng(61);
  for (int trial = 0; trial < 500; ++trial) {
    const auto p = testing::RandomDeltaPattern(rng, 8);
    const auto dom = Domain::Numeric("S", p.values);
    const auto got = ClassifyShift(*dom, p.delta);
    CHECK(got.kind == testing::ExhaustiveClassify(p.values, p.delta));
    if (got.kind == InfoKind::kStrictlyNegative || got.kind == InfoKind::kStrictlyPositive) {
      // Every moved label appears once, and the triples rebuild Δ.
      std::vector<double> rebuilt(p.delta.size(), 0.0);
      const double sign = got.kind == InfoKind::kStrictlyNegative ? 1.0 : -1.0;
      for (const auto& t : got.triples) {
        CHECK(p.values[t.lower] < p.values[t.upper]);
        CHECK(t.delta > 0.0);
        rebuilt[t.lower] += sign * t.delta;
        rebuilt[t.upper] -= sign * t.delta;
      }
      for (size_t s = 0; s < rebuilt.size(); ++s) CHECK(std::abs(rebuilt[s] - p.delta[s]) <= 1e-9);
    }
  }
}

TEST_CASE("classification of messages is sound") {
  testing::Rng rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = testing::MakeTheorem1Instance(rng, rng.chance(0.5));
    const Scenario& sc = inst.scenario;
    const auto c = ClassifyInformation(sc, inst.t_i, inst.d);
    REQUIRE((c.kind == InfoKind::kStrictlyNegative || c.kind == InfoKind::kStrictlyPositive));
    const size_t ti = sc.t_domain->index_of(inst.t_i);
    auto before = SimilarityGivenBelief(sc, ti, sc.prior_tk.probabilities());
    const auto after = SimilarityGivenBelief(sc, ti, PosteriorTkGivenD(sc, inst.d).probabilities());
    const double sign = c.kind == InfoKind::kStrictlyNegative ? 1.0 : -1.0;
    for (const auto& t : c.triples) {
      before[t.lower] += sign * t.delta;
      before[t.upper] -= sign * t.delta;
    }
    for (size_t s = 0; s < before.size(); ++s) CHECK(std::abs(before[s] - after[s]) <= 1e-9);
  }
  CHECK(ErrorOf([] {
          ScenarioTables u = ToTables(Table2());
          u.d_given_t[2] = {1.0, 0.0, 0.0, 0.0};
          u.d_given_t[3] = {0.0, 0.0, 1.0, 0.0};
          ClassifyInformation(MakeScenario(u), "goodLiberal", "chthulu");
        })->kind == ErrorKind::kZeroEvidence);
}

TEST_CASE("monotone policies") {
  const std::vector<double> s = {-2, -1, 0, 1, 2};
  CHECK(CheckMonotonePolicy(Policy(s, {0, 0, 0, 1, 1})));
  CHECK(CheckMonotonePolicy(Policy(s, {0, 0, 0, 0, 0})));
  CHECK_FALSE(CheckMonotonePolicy(Policy(s, {0, 1, 0, 1, 2})));
  CHECK(CheckMonotonePolicy(TrustingPolicy(Table2())));
  const PolicyTable named(vars::kYik, Domain::Named(vars::kYik, {"no", "yes"}),
                          {{vars::kSik, Domain::Numeric(vars::kSik, s)}}, {0, 0, 0, 1, 1});
  CHECK(ErrorOf([&] { CheckMonotonePolicy(named); })->kind == ErrorKind::kInput);
}

TEST_CASE("theorem 1 on table2 and the bundled witness") {
  const auto r = VerifyTheorem1(Table2(), "goodLiberal", "chthulu");
  CHECK(r.verdict == Verdict::kInapplicable);
  CHECK(r.margin("E_before") == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(r.margin("E_before") == doctest::Approx(testing::TrustingSupport(Table2(), "goodLiberal", "")));

  const auto& an = Anomalous().scenario;
  const auto neg = VerifyTheorem1(an, "lib", "m2");
  CHECK(neg.verdict == Verdict::kVerified);
  CHECK(neg.margin("strictness") > 0.0);
  CHECK(std::abs(neg.margin("E_after") - testing::TrustingSupport(an, "lib", "m2")) <= 1e-9);
  const auto pos = VerifyTheorem1(an, "lib", "m1");
  CHECK(pos.verdict == Verdict::kVerified);
  CHECK(pos.summary.find("positive") != std::string::npos);
}

TEST_CASE("theorem 1: constant policy is verified with zero strictness") {
  testing::Rng rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = testing::MakeTheorem1Instance(rng, false);
    ScenarioTables t = ToTables(inst.scenario);
    for (auto& row : t.utility) std::fill(row.begin(), row.end(), 1.0);
    const auto r = VerifyTheorem1(MakeScenario(t), inst.t_i, inst.d);
    CHECK(r.verdict == Verdict::kVerified);
    CHECK(r.margin("strictness") == 0.0);
    CHECK(r.margin("gap") == doctest::Approx(0.0));
  }
}

TEST_CASE("theorem 1: a non-monotone policy is inapplicable") {
  ScenarioTables t = ToTables(Anomalous().scenario);
  for (size_t s = 0; s < t.s_values.size(); ++s) t.utility[s] = {0.0, -t.s_values[s] * (s % 2 ? 1 : -1)};
  const Scenario sc = MakeScenario(t);
  REQUIRE_FALSE(CheckMonotonePolicy(TrustingPolicy(sc)));
  CHECK(VerifyTheorem1(sc, "lib", "m2").verdict == Verdict::kInapplicable);
}

TEST_CASE("theorem 1 property suite against enumeration") {
  testing::Rng rng(73);
  for (bool positive : {false, true}) {
    for (int trial = 0; trial < 100; ++trial) {
      const auto inst = testing::MakeTheorem1Instance(rng, positive);
      const auto r = VerifyTheorem1(inst.scenario, inst.t_i, inst.d);
      REQUIRE(r.verdict == Verdict::kVerified);
      const double before = testing::TrustingSupport(inst.scenario, inst.t_i, "");
      const double after = testing::TrustingSupport(inst.scenario, inst.t_i, inst.d);
      CHECK(std::abs(r.margin("E_before") - before) <= 1e-9);
      CHECK(std::abs(r.margin("E_after") - after) <= 1e-9);
      CHECK((positive ? after - before : before - after) >= -1e-9);
      CHECK(std::abs(r.margin("strictness") - std::abs(after - before)) <= 1e-9);
      CHECK((r.margin("strictness") > 1e-12) == inst.policy_varies);
    }
  }
}

TEST_CASE("prop 1") {
  const Factor flat =
      Factor::Constant({{vars::kCk, Table2().d_domain}, {vars::kBk, Table2().d_domain}}, 0.25);
  CHECK(VerifyProp1(Table2(), flat).verdict == Verdict::kVerified);
  CHECK(VerifyProp1(Honest(Table2()), PunditContext{}).verdict == Verdict::kInapplicable);

  testing::Rng rng(79);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = testing::MakeConstantMarginalInstance(rng);
    const auto r = VerifyProp1(inst.scenario, inst.context);
    INFO(r.summary);
    CHECK(r.verdict == Verdict::kVerified);
    const testing::Joint j = testing::EnumerateJoint(
        Compile(BuildMaid(inst.scenario, ModelKind::kSuspiciousVoter, inst.context)));
    for (const auto& b : inst.scenario.d_domain->labels()) {
      const auto post = testing::Conditional(j, vars::kTk, {{vars::kBk, b.name}});
      if (post.empty()) continue;
      for (size_t t = 0; t < post.size(); ++t) CHECK(std::abs(post[t] - inst.scenario.prior_tk[t]) <= 1e-9);
    }
  }
}

TEST_CASE("prop 2") {
  const auto id = VerifyProp2(Honest(Table2()), PunditContext{});
  CHECK(id.verdict == Verdict::kVerified);
  CHECK(id.margin("alpha") == doctest::Approx(1.0));
  CHECK(id.margin("max_residual") <= 1e-9);

  const Factor flat =
      Factor::Constant({{vars::kCk, Table2().d_domain}, {vars::kBk, Table2().d_domain}}, 0.25);
  const auto c = VerifyProp2(Table2(), flat);
  CHECK(c.verdict == Verdict::kVerified);
  CHECK(c.margin("checked_residual") <= 1e-9);

  // Residual = |w - α| · ‖P(T_k | b) - P(T_k)‖∞ with w = (α-β)P(b) / ((α-β)P(b) + β).
  const testing::Joint tv =
      testing::EnumerateJoint(Compile(BuildMaid(Table2(), ModelKind::kTrustingVoter)));
  const auto prior = testing::Conditional(tv, vars::kTk, {});
  for (double alpha : {0.25, 0.5, 0.75}) {
    const auto r = VerifyProp2(Table2(), testing::UniformOffDiagonalMarginal(Table2(), alpha));
    CHECK(r.verdict != Verdict::kInapplicable);
    const double beta = (1.0 - alpha) / 3.0;
    for (const auto& b : Table2().d_domain->labels()) {
      const auto post = testing::Conditional(tv, vars::kTk, {{vars::kDk, b.name}});
      const double pb = testing::JointWith(tv, vars::kDk, {})[Table2().d_domain->index_of(b.name)];
      const double w = (alpha - beta) * pb / ((alpha - beta) * pb + beta);
      double gap = 0.0;
      for (size_t t = 0; t < post.size(); ++t) gap = std::max(gap, std::abs(post[t] - prior[t]));
      CHECK(std::abs(r.margin("residual[" + b.name + "]") - std::abs(w - alpha) * gap) <= 1e-9);
      CHECK(std::abs(r.margin("weight[" + b.name + "]") - w) <= 1e-9);
    }
  }
}

TEST_CASE("prop 3") {
  const auto id = VerifyProp3(Honest(Table2()), "goodLiberal");
  CHECK(id.verdict == Verdict::kVerified);
  CHECK(id.margin("min_margin") == 0.0);
  CHECK(id.margin("max_margin") == 0.0);

  testing::Rng rng(83);
  bool strict_gain = false;
  for (int trial = 0; trial < 100; ++trial) {
    ScenarioTables t = testing::RandomTables(rng, {});
    for (auto& row : t.reputation) {
      for (double& x : row) x = x > 0 ? 0.01 : 0.0;
    }
    const Scenario sc = MakeScenario(t);
    const size_t pos = rng.below(sc.t_domain->size());
    const auto r = VerifyProp3(sc, sc.t_domain->label(pos).name);
    CHECK(r.verdict == Verdict::kVerified);
    strict_gain = strict_gain || r.margin("max_margin") > 1e-9;

    const testing::Joint tv = testing::EnumerateJoint(Compile(BuildMaid(sc, ModelKind::kTrustingVoter)));
    const size_t nd = sc.d_domain->size();
    for (size_t c = 0; c < nd; ++c) {
      if (MessageProbability(sc, c) <= 1e-12) continue;
      std::vector<double> eu(nd), score(nd);
      for (size_t b = 0; b < nd; ++b) {
        eu[b] = testing::ExpectedUtilityByEnumeration(sc, tv, pos, b, c, pos);
        score[b] = eu[b] - sc.f_r(b, c);
      }
      CHECK(eu[ArgmaxFirst(score)] >= eu[c] - 1e-9);
    }
  }
  CHECK(strict_gain);
}

TEST_CASE("corollary") {
  const auto& an = Anomalous().scenario;
  const auto point = VerifyCorollary(an, "lib", Categorical::PointMass(an.d_domain, 1));
  const auto thm1 = VerifyTheorem1(an, "lib", "m2");
  CHECK(point.verdict == Verdict::kVerified);
  CHECK(point.margin("E_after") == doctest::Approx(thm1.margin("E_after")));
  CHECK(point.margin("gap") == doctest::Approx(thm1.margin("gap")));

  CHECK(VerifyCorollary(Table2(), "goodLiberal", Categorical::PointMass(Table2().d_domain, 3)).verdict ==
        Verdict::kInapplicable);
  CHECK(VerifyCorollary(an, "lib", Categorical::Uniform(an.d_domain)).verdict == Verdict::kInapplicable);

  // Split m2 into two half-probability copies; both stay strictly negative.
  ScenarioTables t = ToTables(an);
  t.messages.push_back("m2b");
  for (auto& row : t.d_given_t) {
    row[1] *= 0.5;
    row.push_back(row[1]);
  }
  for (auto& row : t.reputation) row.push_back(row[1]);
  t.reputation.push_back(t.reputation[1]);
  t.reputation[2][1] = t.reputation[1][2] = 0.01;
  t.reputation[2][2] = 0.0;
  const Scenario split = MakeScenario(t);
  const Categorical h(split.d_domain, {0.0, 0.3, 0.7});
  const auto r = VerifyCorollary(split, "lib", h);
  CHECK(r.verdict == Verdict::kVerified);
  const double mixed = 0.3 * testing::TrustingSupport(split, "lib", "m2") +
                       0.7 * testing::TrustingSupport(split, "lib", "m2b");
  CHECK(std::abs(r.margin("E_after") - mixed) <= 1e-9);
  CHECK(r.margin("gap") > 0.0);
}

TEST_CASE("anomalous update") {
  const auto& f = Anomalous();
  REQUIRE(f.witness);
  const auto r = VerifyAnomalous(f.scenario, f.pundit, f.witness->t_i, f.witness->b);
  CHECK(r.verdict == Verdict::kVerified);
  CHECK(r.margin("trusting_margin") > 1e-6);
  CHECK(r.margin("suspicious_margin") > 1e-6);

  const testing::Joint sv =
      testing::EnumerateJoint(Compile(BuildMaid(f.scenario, ModelKind::kSuspiciousVoter, f.pundit)));
  const Assignment ti{{vars::kTi, f.witness->t_i}};
  Assignment tb = ti;
  tb[vars::kBk] = f.witness->b;
  CHECK(std::abs(r.margin("E_sv") - testing::ConditionalMean(sv, vars::kYik, ti)) <= 1e-9);
  CHECK(std::abs(r.margin("E_sv_given_b") - testing::ConditionalMean(sv, vars::kYik, tb)) <= 1e-9);
  CHECK(std::abs(r.margin("E_tv") - testing::TrustingSupport(f.scenario, f.witness->t_i, "")) <= 1e-9);
  CHECK(std::abs(r.margin("E_tv_given_b") - testing::TrustingSupport(f.scenario, f.witness->t_i, f.witness->b)) <=
        1e-9);

  PunditContext aligned = f.pundit;
  aligned.known_tj = f.witness->t_i;
  const auto a = ErrorOf([&] { VerifyAnomalous(f.scenario, aligned, f.witness->t_i, f.witness->b); });
  if (!a) CHECK(VerifyAnomalous(f.scenario, aligned, f.witness->t_i, f.witness->b).verdict != Verdict::kVerified);

  const Scenario honest = Honest(f.scenario);
  for (const auto& t : honest.t_domain->labels()) {
    for (const auto& b : honest.d_domain->labels()) {
      CHECK(VerifyAnomalous(honest, {}, t.name, b.name).verdict != Verdict::kVerified);
    }
  }
}

TEST_CASE("search") {
  SearchConfig cfg;
  cfg.budget = 0;
  const auto none = FindAnomalousScenario(cfg);
  CHECK_FALSE(none.witness);
  CHECK(none.candidates_tried == 0);

  cfg.budget = 100;
  const auto a = FindAnomalousScenario(cfg);
  const auto b = FindAnomalousScenario(cfg);
  REQUIRE(a.witness);
  REQUIRE(b.witness);
  CHECK(a.witness->index == b.witness->index);
  CHECK(SerializeScenario({a.witness->scenario, "", a.witness->context, std::nullopt}) ==
        SerializeScenario({b.witness->scenario, "", b.witness->context, std::nullopt}));
  CHECK(a.witness->report.verdict == Verdict::kVerified);

  // The bundled witness is candidate 0 of the pinned stream.
  const auto& f = Anomalous();
  CHECK(a.witness->index == 0);
  const ScenarioTables got = ToTables(a.witness->scenario), want = ToTables(f.scenario);
  CHECK(got.prior_tk == want.prior_tk);
  CHECK(got.d_given_t == want.d_given_t);
  CHECK(got.s_given_tt == want.s_given_tt);
  CHECK(got.reputation == want.reputation);
  CHECK(a.witness->t_i == f.witness->t_i);
  CHECK(a.witness->b == f.witness->b);

  cfg.min_messages = 3;
  cfg.max_messages = 2;
  CHECK(ErrorOf([&] { FindAnomalousScenario(cfg); })->kind == ErrorKind::kInput);
  cfg = SearchConfig{};
  cfg.prior_grid.clear();
  CHECK(ErrorOf([&] { FindAnomalousScenario(cfg); })->kind == ErrorKind::kInput);
}

TEST_CASE("verifiers are deterministic") {
  const auto& f = Anomalous();
  for (int k = 0; k < 2; ++k) {
    const auto a = VerifyProp3(f.scenario, "lib");
    const auto b = VerifyProp3(f.scenario, "lib");
    REQUIRE(a.margins.size() == b.margins.size());
    for (size_t i = 0; i < a.margins.size(); ++i) CHECK(a.margins[i].value == b.margins[i].value);
  }
}

}  // namespace
}  // namespace maidvote
