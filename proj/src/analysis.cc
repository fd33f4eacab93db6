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
#include <limits>

namespace maidvote {

const char* InfoKindName(InfoKind k) {
  switch (k) {
    case InfoKind::kStrictlyNegative: return "StrictlyNegative";
    case InfoKind::kStrictlyPositive: return "StrictlyPositive";
    case InfoKind::kNeutral: return "Neutral";
    case InfoKind::kMixed: return "Mixed";
  }
  return "?";
}

const char* VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kVerified: return "Verified";
    case Verdict::kViolated: return "Violated";
    case Verdict::kInapplicable: return "Inapplicable";
  }
  return "?";
}

double VerificationReport::margin(std::string_view name) const {
  for (const auto& m : margins) {
    if (m.name == name) return m.value;
  }
  Fail(ErrorKind::kInput, "report '" + claim + "' has no margin '" + std::string(name) + "'");
}

bool VerificationReport::has_margin(std::string_view name) const {
  return std::any_of(margins.begin(), margins.end(),
                     [&](const Margin& m) { return m.name == name; });
}

namespace {

constexpr double kShiftTolerance = 1e-9;

// Kuhn's augmenting paths over the compatibility relation.
bool Augment(size_t g, const std::vector<std::vector<bool>>& ok, std::vector<bool>* seen,
             std::vector<int>* loser_match) {
  for (size_t l = 0; l < ok[g].size(); ++l) {
    if (!ok[g][l] || (*seen)[l]) continue;
    (*seen)[l] = true;
    if ((*loser_match)[l] < 0 ||
        Augment(static_cast<size_t>((*loser_match)[l]), ok, seen, loser_match)) {
      (*loser_match)[l] = static_cast<int>(g);
      return true;
    }
  }
  return false;
}

// Pairs every gainer with a loser; `below` asks for gainer.value < loser.value.
std::optional<std::vector<MassShift>> PairShifts(const Domain& dom, std::span<const double> delta,
                                                 const std::vector<size_t>& gainers,
                                                 const std::vector<size_t>& losers, bool below) {
  std::vector<std::vector<bool>> ok(gainers.size(), std::vector<bool>(losers.size()));
  for (size_t g = 0; g < gainers.size(); ++g) {
    for (size_t l = 0; l < losers.size(); ++l) {
      const double vg = dom.value(gainers[g]), vl = dom.value(losers[l]);
      ok[g][l] = (below ? vg < vl : vg > vl) &&
                 std::abs(delta[gainers[g]] + delta[losers[l]]) <= kShiftTolerance;
    }
  }
  std::vector<int> loser_match(losers.size(), -1);
  for (size_t g = 0; g < gainers.size(); ++g) {
    std::vector<bool> seen(losers.size(), false);
    if (!Augment(g, ok, &seen, &loser_match)) return std::nullopt;
  }
  std::vector<MassShift> out;
  for (size_t l = 0; l < losers.size(); ++l) {
    const size_t g = gainers[static_cast<size_t>(loser_match[l])];
    const size_t lo = below ? g : losers[l];
    const size_t hi = below ? losers[l] : g;
    out.push_back({lo, hi, delta[g]});
  }
  std::sort(out.begin(), out.end(),
            [](const MassShift& a, const MassShift& b) { return a.lower < b.lower; });
  return out;
}

std::vector<double> SupportValues(const Scenario& sc, const PolicyTable& policy) {
  std::vector<double> f;
  for (size_t c : policy.choices()) f.push_back(sc.y_domain->value(c));
  return f;
}

double Dot(const std::vector<double>& p, const std::vector<double>& f) {
  double e = 0.0;
  for (size_t i = 0; i < p.size(); ++i) e += p[i] * f[i];
  return e;
}

double MaxNorm(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> Posterior(const Scenario& sc, size_t d) {
  return PosteriorTkGivenD(sc, sc.d_domain->label(d).name).probabilities();
}

bool Reachable(const Scenario& sc, size_t d) { return MessageProbability(sc, d) > kZeroEvidence; }

struct Spread {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  bool empty() const { return lo > hi; }
  double width() const { return empty() ? 0.0 : hi - lo; }
};

void CheckMarginalShape(const Scenario& sc, const Factor& m) {
  const size_t nd = sc.d_domain->size();
  if (m.scope().size() != 2 || m.size() != nd * nd) {
    Fail(ErrorKind::kStructural, "pundit marginal must be a (C, B) table over messages");
  }
}

std::optional<SuspiciousPosterior> TrySuspicious(const Scenario& sc, const Factor& m, size_t b) {
  try {
    return SuspiciousPosteriorTk(sc, m, sc.d_domain->label(b).name);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kZeroEvidence) throw;
    return std::nullopt;
  }
}

// Theorem 1 ingredients shared with the corollary.
struct SupportShift {
  InfoClassification info;
  double before = 0.0;
  double after = 0.0;
  double strictness = 0.0;
};

SupportShift ShiftFor(const Scenario& sc, size_t t_i, size_t d, const std::vector<double>& f) {
  SupportShift out;
  const auto before = SimilarityGivenBelief(sc, t_i, sc.prior_tk.probabilities());
  const auto after = SimilarityGivenBelief(sc, t_i, Posterior(sc, d));
  std::vector<double> delta(before.size());
  for (size_t s = 0; s < delta.size(); ++s) delta[s] = after[s] - before[s];
  out.info = ClassifyShift(*sc.s_domain, delta);
  out.before = Dot(before, f);
  out.after = Dot(after, f);
  for (const auto& m : out.info.triples) out.strictness += m.delta * (f[m.upper] - f[m.lower]);
  return out;
}

}  // namespace

InfoClassification ClassifyShift(const Domain& s_domain, std::span<const double> delta) {
  if (!s_domain.ordered_numeric()) {
    Fail(ErrorKind::kInput, "domain '" + s_domain.id() + "' is not numeric");
  }
  if (delta.size() != s_domain.size()) {
    Fail(ErrorKind::kInput, "shift has " + std::to_string(delta.size()) + " entries, domain '" +
                                s_domain.id() + "' has " + std::to_string(s_domain.size()));
  }
  InfoClassification out;
  out.delta.assign(delta.begin(), delta.end());
  std::vector<size_t> gainers, losers;
  for (size_t s = 0; s < delta.size(); ++s) {
    if (delta[s] > kShiftTolerance) gainers.push_back(s);
    if (delta[s] < -kShiftTolerance) losers.push_back(s);
  }
  if (gainers.empty() && losers.empty()) {
    out.kind = InfoKind::kNeutral;
    return out;
  }
  if (gainers.size() != losers.size()) return out;
  if (auto t = PairShifts(s_domain, delta, gainers, losers, /*below=*/true)) {
    out.kind = InfoKind::kStrictlyNegative;
    out.triples = std::move(*t);
  } else if (auto t2 = PairShifts(s_domain, delta, gainers, losers, /*below=*/false)) {
    out.kind = InfoKind::kStrictlyPositive;
    out.triples = std::move(*t2);
  }
  return out;
}

std::vector<double> SimilarityGivenBelief(const Scenario& sc, size_t t_i,
                                          const std::vector<double>& belief) {
  std::vector<double> out(sc.s_domain->size(), 0.0);
  for (size_t t = 0; t < belief.size(); ++t) {
    if (belief[t] == 0.0) continue;
    for (size_t s = 0; s < out.size(); ++s) out[s] += belief[t] * sc.p_s(t_i, t, s);
  }
  return out;
}

InfoClassification ClassifyInformation(const Scenario& sc, const std::string& t_i,
                                       const std::string& d) {
  const size_t ti = sc.t_domain->index_of(t_i);
  const auto before = SimilarityGivenBelief(sc, ti, sc.prior_tk.probabilities());
  const auto after = SimilarityGivenBelief(sc, ti, PosteriorTkGivenD(sc, d).probabilities());
  std::vector<double> delta(before.size());
  for (size_t s = 0; s < delta.size(); ++s) delta[s] = after[s] - before[s];
  return ClassifyShift(*sc.s_domain, delta);
}

bool CheckMonotonePolicy(const PolicyTable& p) {
  if (p.info().size() != 1) {
    Fail(ErrorKind::kInput, "policy for '" + p.decision() + "' must have one information parent");
  }
  if (!p.info()[0].domain->ordered_numeric() || !p.domain()->ordered_numeric()) {
    Fail(ErrorKind::kInput, "policy for '" + p.decision() + "' is not over numeric domains");
  }
  // Numeric domains are stored in increasing order.
  for (size_t r = 1; r < p.rows(); ++r) {
    if (p.choice(r) < p.choice(r - 1)) return false;
  }
  return true;
}

VerificationReport VerifyTheorem1(const Scenario& sc, const std::string& t_i,
                                  const std::string& d) {
  VerificationReport r;
  r.claim = kClaimThm1;
  r.witness = {{vars::kTi, t_i}, {vars::kDk, d}};
  const size_t ti = sc.t_domain->index_of(t_i);
  const size_t di = sc.d_domain->index_of(d);
  const PolicyTable policy = TrustingPolicy(sc);
  if (!CheckMonotonePolicy(policy)) {
    r.summary = "support is not monotone in similarity";
    return r;
  }
  if (!Reachable(sc, di)) {
    r.summary = "message '" + d + "' has probability 0";
    return r;
  }
  const SupportShift sh = ShiftFor(sc, ti, di, SupportValues(sc, policy));
  r.margins = {{"E_before", sh.before}, {"E_after", sh.after}, {"strictness", sh.strictness}};
  const bool negative = sh.info.kind == InfoKind::kStrictlyNegative;
  if (!negative && sh.info.kind != InfoKind::kStrictlyPositive) {
    r.summary = std::string("information is ") + InfoKindName(sh.info.kind);
    return r;
  }
  const double gap = negative ? sh.before - sh.after : sh.after - sh.before;
  r.margins.push_back({"gap", gap});
  r.verdict = gap >= -kNormTolerance ? Verdict::kVerified : Verdict::kViolated;
  r.summary = negative ? "strictly negative: E[Y|d] <= E[Y]" : "strictly positive: E[Y|d] >= E[Y]";
  return r;
}

VerificationReport VerifyProp1(const Scenario& sc, const Factor& m) {
  CheckMarginalShape(sc, m);
  VerificationReport r;
  r.claim = kClaimProp1;
  const size_t nd = sc.d_domain->size();
  Spread spread;
  for (size_t c = 0; c < nd; ++c) {
    if (!Reachable(sc, c)) continue;  // unreachable rows carry no weight
    for (size_t b = 0; b < nd; ++b) spread.add(m[c * nd + b]);
  }
  r.margins.push_back({"spread", spread.width()});
  if (spread.width() > kNormTolerance) {
    r.summary = "pundit marginal is not constant";
    return r;
  }
  const auto& prior = sc.prior_tk.probabilities();
  double worst = 0.0;
  for (size_t b = 0; b < nd; ++b) {
    auto sp = TrySuspicious(sc, m, b);
    if (!sp) continue;
    const double res = MaxNorm(sp->posterior.probabilities(), prior);
    r.margins.push_back({"residual[" + sc.d_domain->label(b).name + "]", res});
    if (res > worst) {
      worst = res;
      r.witness = {{vars::kBk, sc.d_domain->label(b).name}};
    }
  }
  r.margins.push_back({"max_residual", worst});
  r.verdict = worst <= kNormTolerance ? Verdict::kVerified : Verdict::kViolated;
  if (r.verdict == Verdict::kVerified) r.witness.clear();
  r.summary = "suspicious posterior vs prior for every publication";
  return r;
}

VerificationReport VerifyProp1(const Scenario& sc, const PunditContext& ctx) {
  return VerifyProp1(sc, PunditMarginal(sc, ctx));
}

VerificationReport VerifyProp2(const Scenario& sc, const Factor& m) {
  CheckMarginalShape(sc, m);
  VerificationReport r;
  r.claim = kClaimProp2;
  const size_t nd = sc.d_domain->size();
  Spread diag, off;
  for (size_t c = 0; c < nd; ++c) {
    if (!Reachable(sc, c)) continue;
    for (size_t b = 0; b < nd; ++b) (b == c ? diag : off).add(m[c * nd + b]);
  }
  if (diag.empty()) {
    r.summary = "no reachable message";
    return r;
  }
  r.margins = {{"diagonal_spread", diag.width()}, {"off_diagonal_spread", off.width()}};
  if (diag.width() > kNormTolerance || off.width() > kNormTolerance) {
    r.summary = "diagonal or off-diagonal entries of the pundit marginal differ";
    return r;
  }
  const double alpha = diag.lo;
  const double beta = off.empty() ? 0.0 : off.lo;
  r.margins.push_back({"alpha", alpha});
  r.margins.push_back({"beta", beta});
  // With alpha == beta publications are uninformative and the identity
  // reduces to posterior == prior.
  const bool uninformative = std::abs(alpha - beta) <= kNormTolerance;

  const auto& prior = sc.prior_tk.probabilities();
  double worst = 0.0, worst_checked = 0.0;
  for (size_t b = 0; b < nd; ++b) {
    if (!Reachable(sc, b)) continue;
    auto sp = TrySuspicious(sc, m, b);
    if (!sp) continue;
    const auto tv = Posterior(sc, b);
    const auto& sv = sp->posterior.probabilities();
    std::vector<double> mix(tv.size());
    for (size_t t = 0; t < tv.size(); ++t) mix[t] = alpha * tv[t] + (1.0 - alpha) * prior[t];
    const double res = MaxNorm(sv, mix);
    const double weight = (alpha - beta) * MessageProbability(sc, b) / sp->evidence;
    const std::string name = sc.d_domain->label(b).name;
    r.margins.push_back({"residual[" + name + "]", res});
    r.margins.push_back({"weight[" + name + "]", weight});
    worst = std::max(worst, res);
    const double checked = uninformative ? MaxNorm(sv, prior) : res;
    if (uninformative) r.margins.push_back({"prior_residual[" + name + "]", checked});
    if (checked > worst_checked) {
      worst_checked = checked;
      r.witness = {{vars::kBk, name}};
    }
  }
  r.margins.push_back({"max_residual", worst});
  r.margins.push_back({"checked_residual", worst_checked});
  r.verdict = worst_checked <= kNormTolerance ? Verdict::kVerified : Verdict::kViolated;
  if (r.verdict == Verdict::kVerified) r.witness.clear();
  r.summary = uninformative ? "constant marginal: suspicious posterior vs prior"
                            : "suspicious posterior vs alpha-mixture of trusting posterior and prior";
  return r;
}

VerificationReport VerifyProp2(const Scenario& sc, const PunditContext& ctx) {
  return VerifyProp2(sc, PunditMarginal(sc, ctx));
}

VerificationReport VerifyProp3(const Scenario& sc, const std::string& t) {
  VerificationReport r;
  r.claim = kClaimProp3;
  sc.t_domain->index_of(t);
  PunditContext ctx;
  ctx.known_tj = t;
  ctx.assumed_ti = t;
  const size_t nd = sc.d_domain->size(), ns = sc.s_domain->size();
  const size_t tj = sc.t_domain->index_of(t);
  const Factor policy = PunditPolicy(sc, ctx);

  double min_margin = std::numeric_limits<double>::infinity();
  double max_margin = -std::numeric_limits<double>::infinity();
  double per_signal_min = std::numeric_limits<double>::infinity();
  size_t deceptive = 0;
  std::vector<double> eu(nd), scores(nd);
  for (size_t c = 0; c < nd; ++c) {
    if (!Reachable(sc, c)) continue;
    const std::string cn = sc.d_domain->label(c).name;
    for (size_t b = 0; b < nd; ++b) {
      eu[b] = ExpectedUtility(sc, t, sc.d_domain->label(b).name, cn, t);
      scores[b] = eu[b] - sc.f_r(b, c);
    }
    const size_t best = ArgmaxFirst(scores);
    if (best != c) ++deceptive;
    const double margin = eu[best] - eu[c];
    max_margin = std::max(max_margin, margin);
    if (margin < min_margin) {
      min_margin = margin;
      if (margin < -kNormTolerance) {
        r.witness = {{vars::kTi, t}, {vars::kCk, cn}, {vars::kBk, sc.d_domain->label(best).name}};
      }
    }
    const auto ps = PunditSimilarity(sc, c, tj);
    for (size_t s = 0; s < ns; ++s) {
      if (ps[s] == 0.0) continue;
      for (size_t b = 0; b < nd; ++b) {
        if (policy[(c * ns + s) * nd + b] == 1.0) {
          per_signal_min = std::min(per_signal_min, eu[b] - eu[c]);
        }
      }
    }
  }
  if (!std::isfinite(min_margin)) {
    r.summary = "no reachable message";
    return r;
  }
  r.margins = {{"min_margin", min_margin},
               {"max_margin", max_margin},
               {"deceptive_messages", static_cast<double>(deceptive)},
               {"per_signal_min_margin", per_signal_min}};
  r.verdict = min_margin >= -kNormTolerance ? Verdict::kVerified : Verdict::kViolated;
  r.summary = "EU_i(b*|c,t) >= EU_i(c|c,t) for every reachable c";
  return r;
}

VerificationReport VerifyCorollary(const Scenario& sc, const std::string& t_i,
                                   const Categorical& h) {
  VerificationReport r;
  r.claim = kClaimCorollary;
  r.witness = {{vars::kTi, t_i}};
  if (!(*h.domain() == *sc.d_domain)) {
    r.summary = "mixture is not over the message domain";
    return r;
  }
  const size_t ti = sc.t_domain->index_of(t_i);
  const PolicyTable policy = TrustingPolicy(sc);
  if (!CheckMonotonePolicy(policy)) {
    r.summary = "support is not monotone in similarity";
    return r;
  }
  const auto f = SupportValues(sc, policy);
  double before = 0.0, mixed = 0.0, strictness = 0.0;
  bool first = true;
  for (size_t b = 0; b < h.size(); ++b) {
    if (h[b] == 0.0) continue;
    const std::string bn = sc.d_domain->label(b).name;
    if (!Reachable(sc, b)) {
      r.summary = "support point '" + bn + "' has probability 0";
      return r;
    }
    const SupportShift sh = ShiftFor(sc, ti, b, f);
    if (sh.info.kind != InfoKind::kStrictlyNegative) {
      r.summary = "support point '" + bn + "' is " + InfoKindName(sh.info.kind);
      return r;
    }
    if (first) before = sh.before;
    first = false;
    mixed += h[b] * sh.after;
    strictness += h[b] * sh.strictness;
  }
  r.margins = {{"E_before", before},
               {"E_after", mixed},
               {"strictness", strictness},
               {"gap", before - mixed}};
  r.verdict = before - mixed >= -kNormTolerance ? Verdict::kVerified : Verdict::kViolated;
  r.summary = "E[Y|H] <= E[Y]";
  return r;
}

VerificationReport VerifyAnomalous(const Scenario& sc, const PunditContext& ctx,
                                   const std::string& t_i, const std::string& b) {
  VerificationReport r;
  r.claim = kClaimThm2;
  r.witness = {{vars::kTi, t_i}, {vars::kBk, b}};
  const size_t bi = sc.d_domain->index_of(b);
  const Factor m = PunditMarginal(sc, ctx);

  auto support = [&](const Categorical& belief) {
    return Expectation(VoteGivenBelief(sc, t_i, belief));
  };
  const double tv_before = support(sc.prior_tk);
  const double tv_after = support(PosteriorTkGivenD(sc, b));

  double sv_before = 0.0, sv_after = 0.0, p_sv_b = 0.0;
  bool have_b = false;
  for (size_t k = 0; k < sc.d_domain->size(); ++k) {
    auto sp = TrySuspicious(sc, m, k);
    if (!sp) continue;
    const double e = support(sp->posterior);
    sv_before += sp->evidence * e;
    if (k == bi) {
      sv_after = e;
      p_sv_b = sp->evidence;
      have_b = true;
    }
  }
  if (!have_b) {
    Fail(ErrorKind::kZeroEvidence, "publication '" + b + "' has probability 0 under the pundit");
  }
  const double tv_margin = tv_before - tv_after;
  const double sv_margin = sv_after - sv_before;
  r.margins = {{"E_tv_given_b", tv_after},
               {"E_tv", tv_before},
               {"E_sv_given_b", sv_after},
               {"E_sv", sv_before},
               {"trusting_margin", tv_margin},
               {"suspicious_margin", sv_margin},
               {"P_tv_b", MessageProbability(sc, bi)},
               {"P_sv_b", p_sv_b}};
  r.verdict = tv_margin > kNormTolerance && sv_margin > kNormTolerance ? Verdict::kVerified
                                                                       : Verdict::kViolated;
  r.summary = "E_tv[Y|b] < E_tv[Y] and E_sv[Y|b] > E_sv[Y]";
  return r;
}

}  // namespace maidvote
