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

#include "maidvote/models.h"

#include <algorithm>
#include <cmath>
#include <set>

namespace maidvote {

namespace {

std::string Join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
  return out;
}

void CheckDistribution(const std::vector<double>& p, size_t n, const std::string& path,
                       std::vector<std::string>* out) {
  if (p.size() != n) {
    out->push_back(path + ": expected " + std::to_string(n) + " entries, got " +
                   std::to_string(p.size()));
    return;
  }
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0 && x <= 1.0)) {
      out->push_back(path + ": probability " + FormatNumber(x) + " outside [0,1]");
      return;
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    out->push_back(path + ": row sums to " + FormatNumber(sum) + ", not 1");
  }
}

std::vector<std::string> CheckTables(const ScenarioTables& t) {
  std::vector<std::string> out;
  auto unique = [&](const std::vector<std::string>& v, const char* what) {
    if (v.empty()) out.push_back(std::string("domains.") + what + ": empty");
    std::set<std::string> s(v.begin(), v.end());
    if (s.size() != v.size()) out.push_back(std::string("domains.") + what + ": repeated label");
  };
  unique(t.positions, "positions");
  unique(t.messages, "messages");
  auto increasing = [&](const std::vector<double>& v, const char* what) {
    if (v.empty()) out.push_back(std::string("domains.") + what + ": empty");
    for (size_t i = 1; i < v.size(); ++i) {
      if (!(v[i] > v[i - 1])) {
        out.push_back(std::string("domains.") + what + ": values must be strictly increasing");
        break;
      }
    }
  };
  increasing(t.s_values, "similarity");
  increasing(t.y_values, "support");
  if (!out.empty()) return out;

  const size_t nt = t.positions.size(), nd = t.messages.size();
  const size_t ns = t.s_values.size(), ny = t.y_values.size();
  CheckDistribution(t.prior_ti, nt, "priors.T_i", &out);
  CheckDistribution(t.prior_tk, nt, "priors.T_k", &out);
  CheckDistribution(t.prior_tj, nt, "priors.T_j", &out);

  if (t.d_given_t.size() != nt) {
    out.push_back("cpts.D_given_T: expected one row per position");
  } else {
    for (size_t a = 0; a < nt; ++a) {
      CheckDistribution(t.d_given_t[a], nd, "cpts.D_given_T[" + t.positions[a] + "]", &out);
    }
  }

  bool s_shape = t.s_given_tt.size() == nt;
  for (size_t a = 0; s_shape && a < nt; ++a) s_shape = t.s_given_tt[a].size() == nt;
  if (!s_shape) {
    out.push_back("cpts.S_given_T_T: expected a row for every pair of positions");
  } else {
    for (size_t a = 0; a < nt; ++a) {
      for (size_t b = 0; b < nt; ++b) {
        const std::string path =
            "cpts.S_given_T_T[" + t.positions[a] + "][" + t.positions[b] + "]";
        CheckDistribution(t.s_given_tt[a][b], ns, path, &out);
        if (b > a && t.s_given_tt[a][b].size() == ns && t.s_given_tt[b][a].size() == ns) {
          for (size_t s = 0; s < ns; ++s) {
            if (std::abs(t.s_given_tt[a][b][s] - t.s_given_tt[b][a][s]) > kNormTolerance) {
              out.push_back(path + ": similarity must be symmetric in its two positions");
              break;
            }
          }
        }
      }
    }
  }

  bool u_shape = t.utility.size() == ns;
  for (size_t s = 0; u_shape && s < ns; ++s) u_shape = t.utility[s].size() == ny;
  if (!u_shape) {
    out.push_back("utility: expected a value for every (similarity, support) pair");
  } else {
    for (const auto& row : t.utility) {
      for (double x : row) {
        if (!std::isfinite(x)) out.push_back("utility: entries must be finite");
      }
    }
  }

  bool r_shape = t.reputation.size() == nd;
  for (size_t b = 0; r_shape && b < nd; ++b) r_shape = t.reputation[b].size() == nd;
  if (!r_shape) {
    out.push_back("reputation: expected a value for every (published, observed) pair");
  } else {
    for (size_t b = 0; b < nd; ++b) {
      for (size_t c = 0; c < nd; ++c) {
        const double r = t.reputation[b][c];
        const std::string path = "reputation[" + t.messages[b] + "][" + t.messages[c] + "]";
        if (!std::isfinite(r)) {
          out.push_back(path + ": must be finite");
        } else if (b == c && r != 0.0) {
          out.push_back(path + ": reporting the observed message must cost 0, got " +
                        FormatNumber(r));
        } else if (b != c && !(r > 0.0)) {
          out.push_back(path + ": altering a message must cost more than 0, got " +
                        FormatNumber(r));
        }
      }
    }
  }
  return out;
}

std::vector<double> Flatten2(const std::vector<std::vector<double>>& rows) {
  std::vector<double> out;
  for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  return out;
}

const std::vector<size_t>& CachedPolicyChoices(const Scenario& sc, std::vector<size_t>* store) {
  *store = TrustingPolicy(sc).choices();
  return *store;
}

Categorical BeliefAfter(const Scenario& sc, size_t d) {
  if (MessageProbability(sc, d) > kZeroEvidence) {
    return PosteriorTkGivenD(sc, sc.d_domain->label(d).name);
  }
  return sc.prior_tk;
}

// P^tv(Y | T_i = t_i, T_k ~ belief) with a precomputed policy.
std::vector<double> VoteVector(const Scenario& sc, const std::vector<size_t>& policy, size_t t_i,
                               const std::vector<double>& belief) {
  std::vector<double> y(sc.y_domain->size(), 0.0);
  for (size_t t = 0; t < sc.t_domain->size(); ++t) {
    if (belief[t] == 0.0) continue;
    for (size_t s = 0; s < sc.s_domain->size(); ++s) {
      y[policy[s]] += belief[t] * sc.p_s(t_i, t, s);
    }
  }
  return y;
}

Categorical Renormalized(const DomainPtr& domain, std::vector<double> p) {
  double z = 0.0;
  for (double x : p) z += x;
  for (double& x : p) x /= z;
  return Categorical(domain, std::move(p));
}

std::vector<double> TjWeights(const Scenario& sc, const PunditContext& ctx) {
  if (ctx.known_tj) {
    std::vector<double> w(sc.t_domain->size(), 0.0);
    w[sc.t_domain->index_of(*ctx.known_tj)] = 1.0;
    return w;
  }
  return sc.prior_tj.probabilities();
}

}  // namespace

std::vector<std::string> CheckScenario(const Scenario& sc) { return CheckTables(ToTables(sc)); }

Scenario MakeScenario(const ScenarioTables& t) {
  auto problems = CheckTables(t);
  if (!problems.empty()) {
    Fail(ErrorKind::kSpecification, "scenario '" + t.name + "' is invalid: " +
                                        Join(problems, "; "));
  }
  auto tdom = Domain::Named("T", t.positions);
  auto ddom = Domain::Named("D", t.messages);
  auto sdom = Domain::Numeric("S", t.s_values);
  auto ydom = Domain::Numeric("Y", t.y_values);
  std::vector<double> s_flat;
  for (const auto& a : t.s_given_tt) {
    for (const auto& row : a) s_flat.insert(s_flat.end(), row.begin(), row.end());
  }
  return Scenario{
      t.name,
      tdom,
      ddom,
      sdom,
      ydom,
      Categorical(tdom, t.prior_ti),
      Categorical(tdom, t.prior_tk),
      Categorical(tdom, t.prior_tj),
      Factor({{vars::kTk, tdom}, {vars::kDk, ddom}}, Flatten2(t.d_given_t)),
      Factor({{"T_a", tdom}, {"T_b", tdom}, {"S", sdom}}, std::move(s_flat)),
      Factor::Signed({{"S", sdom}, {"Y", ydom}}, Flatten2(t.utility)),
      Factor::Signed({{"B", ddom}, {"C", ddom}}, Flatten2(t.reputation)),
  };
}

ScenarioTables ToTables(const Scenario& sc) {
  ScenarioTables t;
  t.name = sc.name;
  const size_t nt = sc.t_domain->size(), nd = sc.d_domain->size();
  const size_t ns = sc.s_domain->size(), ny = sc.y_domain->size();
  for (const auto& l : sc.t_domain->labels()) t.positions.push_back(l.name);
  for (const auto& l : sc.d_domain->labels()) t.messages.push_back(l.name);
  for (size_t s = 0; s < ns; ++s) t.s_values.push_back(sc.s_domain->value(s));
  for (size_t y = 0; y < ny; ++y) t.y_values.push_back(sc.y_domain->value(y));
  t.prior_ti = sc.prior_ti.probabilities();
  t.prior_tk = sc.prior_tk.probabilities();
  t.prior_tj = sc.prior_tj.probabilities();
  t.d_given_t.assign(nt, std::vector<double>(nd));
  t.s_given_tt.assign(nt, std::vector<std::vector<double>>(nt, std::vector<double>(ns)));
  for (size_t a = 0; a < nt; ++a) {
    for (size_t d = 0; d < nd; ++d) t.d_given_t[a][d] = sc.p_d_given_t(a, d);
    for (size_t b = 0; b < nt; ++b) {
      for (size_t s = 0; s < ns; ++s) t.s_given_tt[a][b][s] = sc.p_s(a, b, s);
    }
  }
  t.utility.assign(ns, std::vector<double>(ny));
  for (size_t s = 0; s < ns; ++s) {
    for (size_t y = 0; y < ny; ++y) t.utility[s][y] = sc.f_u(s, y);
  }
  t.reputation.assign(nd, std::vector<double>(nd));
  for (size_t b = 0; b < nd; ++b) {
    for (size_t c = 0; c < nd; ++c) t.reputation[b][c] = sc.f_r(b, c);
  }
  return t;
}

const char* ModelKindName(ModelKind k) {
  switch (k) {
    case ModelKind::kTrustingVoter: return "trusting";
    case ModelKind::kBiasedPundit: return "pundit";
    case ModelKind::kSuspiciousVoter: return "suspicious";
  }
  return "?";
}

// Closed forms ---------------------------------------------------------------

PolicyTable TrustingPolicy(const Scenario& sc) {
  std::vector<size_t> choices;
  std::vector<double> scores(sc.y_domain->size());
  for (size_t s = 0; s < sc.s_domain->size(); ++s) {
    for (size_t y = 0; y < scores.size(); ++y) scores[y] = sc.f_u(s, y);
    choices.push_back(ArgmaxFirst(scores));
  }
  return PolicyTable(vars::kYik, sc.y_domain, {{vars::kSik, sc.s_domain}}, std::move(choices));
}

double MessageProbability(const Scenario& sc, size_t d) {
  double p = 0.0;
  for (size_t t = 0; t < sc.t_domain->size(); ++t) p += sc.p_d_given_t(t, d) * sc.prior_tk[t];
  return p;
}

Categorical PosteriorTkGivenD(const Scenario& sc, const std::string& d) {
  const size_t di = sc.d_domain->index_of(d);
  const double z = MessageProbability(sc, di);
  if (!(z > kZeroEvidence)) {
    Fail(ErrorKind::kZeroEvidence, "message '" + d + "' has probability " + FormatNumber(z));
  }
  std::vector<double> p(sc.t_domain->size());
  for (size_t t = 0; t < p.size(); ++t) p[t] = sc.p_d_given_t(t, di) * sc.prior_tk[t] / z;
  return Categorical(sc.t_domain, std::move(p));
}

Categorical VoteGivenBelief(const Scenario& sc, const std::string& t_i,
                            const Categorical& belief_tk) {
  std::vector<size_t> policy;
  CachedPolicyChoices(sc, &policy);
  return Renormalized(sc.y_domain, VoteVector(sc, policy, sc.t_domain->index_of(t_i),
                                              belief_tk.probabilities()));
}

Categorical VoteDistTrusting(const Scenario& sc, const std::string& t_i, const std::string& d) {
  return VoteGivenBelief(sc, t_i, PosteriorTkGivenD(sc, d));
}

Categorical PunditViewOfVote(const Scenario& sc, const PunditContext& ctx, size_t d) {
  std::vector<size_t> policy;
  CachedPolicyChoices(sc, &policy);
  const auto belief = BeliefAfter(sc, d).probabilities();
  if (ctx.assumed_ti) {
    return Renormalized(sc.y_domain,
                        VoteVector(sc, policy, sc.t_domain->index_of(*ctx.assumed_ti), belief));
  }
  std::vector<double> y(sc.y_domain->size(), 0.0);
  for (size_t ti = 0; ti < sc.t_domain->size(); ++ti) {
    if (sc.prior_ti[ti] == 0.0) continue;
    auto part = VoteVector(sc, policy, ti, belief);
    for (size_t k = 0; k < y.size(); ++k) y[k] += sc.prior_ti[ti] * part[k];
  }
  return Renormalized(sc.y_domain, std::move(y));
}

Categorical IncrementalUpdate(const Scenario& sc, const Categorical& current,
                              const std::string& d_new) {
  if (!(*current.domain() == *sc.t_domain)) {
    Fail(ErrorKind::kInput, "current belief is not over candidate positions");
  }
  const size_t d = sc.d_domain->index_of(d_new);
  std::vector<double> p(sc.t_domain->size());
  double z = 0.0;
  for (size_t t = 0; t < p.size(); ++t) {
    p[t] = sc.p_d_given_t(t, d) * current[t];
    z += p[t];
  }
  if (!(z > kZeroEvidence)) {
    Fail(ErrorKind::kZeroEvidence,
         "message '" + d_new + "' has probability " + FormatNumber(z) + " under the belief");
  }
  for (double& x : p) x /= z;
  return Categorical(sc.t_domain, std::move(p));
}

std::vector<double> PunditSimilarity(const Scenario& sc, size_t c, size_t t_j) {
  const auto belief = BeliefAfter(sc, c).probabilities();
  std::vector<double> out(sc.s_domain->size(), 0.0);
  for (size_t t = 0; t < belief.size(); ++t) {
    if (belief[t] == 0.0) continue;
    for (size_t s = 0; s < out.size(); ++s) out[s] += sc.p_s(t_j, t, s) * belief[t];
  }
  return out;
}

Factor PunditPolicy(const Scenario& sc, const PunditContext& ctx) {
  const size_t nd = sc.d_domain->size(), ns = sc.s_domain->size(), ny = sc.y_domain->size();
  std::vector<std::vector<double>> view;
  for (size_t b = 0; b < nd; ++b) view.push_back(PunditViewOfVote(sc, ctx, b).probabilities());
  std::vector<double> values(nd * ns * nd, 0.0);
  std::vector<double> scores(nd);
  for (size_t c = 0; c < nd; ++c) {
    for (size_t s = 0; s < ns; ++s) {
      for (size_t b = 0; b < nd; ++b) {
        double eu = 0.0;
        for (size_t y = 0; y < ny; ++y) eu += view[b][y] * sc.f_u(s, y);
        scores[b] = eu - sc.f_r(b, c);
      }
      values[(c * ns + s) * nd + ArgmaxFirst(scores)] = 1.0;
    }
  }
  return Factor({{vars::kCk, sc.d_domain}, {vars::kSjk, sc.s_domain}, {vars::kBk, sc.d_domain}},
                std::move(values));
}

Factor PunditMarginal(const Scenario& sc, const PunditContext& ctx) {
  const size_t nd = sc.d_domain->size(), ns = sc.s_domain->size();
  const Factor policy = PunditPolicy(sc, ctx);
  const auto w = TjWeights(sc, ctx);
  std::vector<double> values(nd * nd, 0.0);
  for (size_t c = 0; c < nd; ++c) {
    for (size_t tj = 0; tj < w.size(); ++tj) {
      if (w[tj] == 0.0) continue;
      const auto ps = PunditSimilarity(sc, c, tj);
      for (size_t s = 0; s < ns; ++s) {
        for (size_t b = 0; b < nd; ++b) {
          values[c * nd + b] += w[tj] * ps[s] * policy[(c * ns + s) * nd + b];
        }
      }
    }
  }
  return Factor({{vars::kCk, sc.d_domain}, {vars::kBk, sc.d_domain}}, std::move(values));
}

Categorical PunditMarginalRow(const Scenario& sc, const PunditContext& ctx,
                              const std::string& c) {
  const size_t ci = sc.d_domain->index_of(c);
  const double pc = MessageProbability(sc, ci);
  if (!(pc > kZeroEvidence)) {
    Fail(ErrorKind::kZeroEvidence, "observed message '" + c + "' has probability " +
                                       FormatNumber(pc));
  }
  const Factor m = PunditMarginal(sc, ctx);
  const size_t nd = sc.d_domain->size();
  return Renormalized(sc.d_domain,
                      std::vector<double>(m.values().begin() + ci * nd,
                                          m.values().begin() + (ci + 1) * nd));
}

SuspiciousPosterior SuspiciousPosteriorTk(const Scenario& sc, const Factor& pundit_marginal,
                                          const std::string& b) {
  const size_t nd = sc.d_domain->size(), nt = sc.t_domain->size();
  if (pundit_marginal.size() != nd * nd) {
    Fail(ErrorKind::kStructural, "pundit marginal must be a (C, B) table over messages");
  }
  const size_t bi = sc.d_domain->index_of(b);
  std::vector<double> acc(nt, 0.0), dec(nt, 0.0);
  double z = 0.0;
  for (size_t t = 0; t < nt; ++t) {
    for (size_t c = 0; c < nd; ++c) {
      // P^tv(T_k = t | c) P^tv(c) = P(c | t) P(t).
      const double joint = sc.p_d_given_t(t, c) * sc.prior_tk[t];
      const double term = joint * pundit_marginal[c * nd + bi];
      (c == bi ? acc : dec)[t] += term;
    }
    z += acc[t] + dec[t];
  }
  if (!(z > kZeroEvidence)) {
    Fail(ErrorKind::kZeroEvidence,
         "publication '" + b + "' has probability " + FormatNumber(z) + " under the pundit model");
  }
  std::vector<double> post(nt);
  for (size_t t = 0; t < nt; ++t) post[t] = (acc[t] + dec[t]) / z;
  return SuspiciousPosterior{Categorical(sc.t_domain, std::move(post)), std::move(acc),
                             std::move(dec), z};
}

SuspiciousPosterior SuspiciousPosteriorTk(const Scenario& sc, const PunditContext& ctx,
                                          const std::string& b) {
  return SuspiciousPosteriorTk(sc, PunditMarginal(sc, ctx), b);
}

Categorical VoteDistSuspicious(const Scenario& sc, const PunditContext& ctx,
                               const std::string& t_i, const std::string& b) {
  return VoteGivenBelief(sc, t_i, SuspiciousPosteriorTk(sc, ctx, b).posterior);
}

double ExpectedUtility(const Scenario& sc, const std::string& agent_t, const std::string& b,
                       const std::string& c, const std::string& t_i) {
  const Categorical truth = PosteriorTkGivenD(sc, c);
  PunditContext view;
  view.assumed_ti = t_i;
  const Categorical vote = PunditViewOfVote(sc, view, sc.d_domain->index_of(b));
  const size_t agent = sc.t_domain->index_of(agent_t);
  double eu = 0.0;
  for (size_t tk = 0; tk < sc.t_domain->size(); ++tk) {
    if (truth[tk] == 0.0) continue;
    for (size_t s = 0; s < sc.s_domain->size(); ++s) {
      const double ps = sc.p_s(agent, tk, s);
      if (ps == 0.0) continue;
      for (size_t y = 0; y < sc.y_domain->size(); ++y) {
        eu += truth[tk] * ps * vote[y] * sc.f_u(s, y);
      }
    }
  }
  return eu;
}

// Networks -------------------------------------------------------------------

namespace {

ChanceNode Root(const std::string& id, const Categorical& prior) {
  return ChanceNode{id, prior.domain(), {}, Factor::FromCategorical(id, prior), {}};
}

// P^tv(Y_ik | D_k = b) for every b, read off the compiled trusting network.
Factor TrustingResponseCpt(const Scenario& sc, const PunditContext& ctx) {
  // Clamp through the prior so an assumed position with prior 0 still works.
  Scenario view = sc;
  if (ctx.assumed_ti) {
    view.prior_ti = Categorical::PointMass(sc.t_domain, sc.t_domain->index_of(*ctx.assumed_ti));
  }
  const BayesNet tv = Compile(BuildMaid(view, ModelKind::kTrustingVoter));
  std::vector<double> values;
  for (size_t b = 0; b < sc.d_domain->size(); ++b) {
    Assignment ev;
    if (MessageProbability(sc, b) > kZeroEvidence) ev[vars::kDk] = sc.d_domain->label(b).name;
    const Categorical y = Infer(tv, vars::kYik, ev);
    values.insert(values.end(), y.probabilities().begin(), y.probabilities().end());
  }
  return Factor({{vars::kBk, sc.d_domain}, {vars::kYtv, sc.y_domain}}, std::move(values));
}

// Nodes shared by the pundit and suspicious-voter networks.
void AddPunditNodes(const Scenario& sc, const PunditContext& ctx, Maid* m) {
  const size_t nt = sc.t_domain->size(), nd = sc.d_domain->size(), ns = sc.s_domain->size();
  m->chance.push_back(Root(vars::kTj, ctx.known_tj
                                          ? Categorical::PointMass(
                                                sc.t_domain, sc.t_domain->index_of(*ctx.known_tj))
                                          : sc.prior_tj));
  m->chance.push_back(Root(vars::kTk, sc.prior_tk));
  m->chance.push_back(ChanceNode{vars::kCk, sc.d_domain, {vars::kTk},
                                 Factor({{vars::kTk, sc.t_domain}, {vars::kCk, sc.d_domain}},
                                        sc.d_given_t.values()),
                                 {}});

  std::vector<double> sjk;
  for (size_t tj = 0; tj < nt; ++tj) {
    for (size_t c = 0; c < nd; ++c) {
      auto row = PunditSimilarity(sc, c, tj);
      sjk.insert(sjk.end(), row.begin(), row.end());
    }
  }
  m->chance.push_back(ChanceNode{
      vars::kSjk, sc.s_domain, {vars::kTj, vars::kCk},
      Factor({{vars::kTj, sc.t_domain}, {vars::kCk, sc.d_domain}, {vars::kSjk, sc.s_domain}},
             std::move(sjk)),
      {}});

  m->decisions.push_back(DecisionNode{vars::kBk, sc.d_domain, {vars::kCk, vars::kSjk}, kPundit});

  // Reputation cost as a deterministic variable over its distinct values.
  std::vector<double> costs;
  for (size_t b = 0; b < nd; ++b) {
    for (size_t c = 0; c < nd; ++c) costs.push_back(sc.f_r(b, c));
  }
  std::sort(costs.begin(), costs.end());
  costs.erase(std::unique(costs.begin(), costs.end()), costs.end());
  auto rdom = Domain::Numeric("R", costs);
  std::vector<double> rcpt;
  for (size_t b = 0; b < nd; ++b) {
    for (size_t c = 0; c < nd; ++c) {
      for (double r : costs) rcpt.push_back(r == sc.f_r(b, c) ? 1.0 : 0.0);
    }
  }
  m->chance.push_back(ChanceNode{
      vars::kRjk, rdom, {vars::kBk, vars::kCk},
      Factor({{vars::kBk, sc.d_domain}, {vars::kCk, sc.d_domain}, {vars::kRjk, rdom}},
             std::move(rcpt)),
      {}});

  m->chance.push_back(
      ChanceNode{vars::kYtv, sc.y_domain, {vars::kBk}, TrustingResponseCpt(sc, ctx), {}});

  std::vector<double> uj;
  for (double r : costs) {
    for (size_t s = 0; s < ns; ++s) {
      for (size_t y = 0; y < sc.y_domain->size(); ++y) uj.push_back(sc.f_u(s, y) - r);
    }
  }
  m->utilities.push_back(UtilityNode{
      vars::kUj, kPundit, {vars::kRjk, vars::kSjk, vars::kYtv},
      Factor::Signed({{vars::kRjk, rdom}, {vars::kSjk, sc.s_domain}, {vars::kYtv, sc.y_domain}},
                     std::move(uj))});
}

void AddVoterNodes(const Scenario& sc, Maid* m, std::vector<std::string> info) {
  m->chance.push_back(Root(vars::kTi, sc.prior_ti));
  m->chance.push_back(ChanceNode{
      vars::kSik, sc.s_domain, {vars::kTi, vars::kTk},
      Factor({{vars::kTi, sc.t_domain}, {vars::kTk, sc.t_domain}, {vars::kSik, sc.s_domain}},
             sc.s_given_tt.values()),
      {}});
  m->decisions.push_back(DecisionNode{vars::kYik, sc.y_domain, std::move(info), kVoter});
  m->utilities.push_back(
      UtilityNode{vars::kUi, kVoter, {vars::kSik, vars::kYik},
                  Factor::Signed({{vars::kSik, sc.s_domain}, {vars::kYik, sc.y_domain}},
                                 sc.utility.values())});
}

}  // namespace

Maid BuildMaid(const Scenario& sc, ModelKind kind, const PunditContext& ctx) {
  auto problems = CheckScenario(sc);
  if (!problems.empty()) {
    Fail(ErrorKind::kSpecification, "scenario '" + sc.name + "' is invalid: " +
                                        Join(problems, "; "));
  }
  if (ctx.known_tj) sc.t_domain->index_of(*ctx.known_tj);
  if (ctx.assumed_ti) sc.t_domain->index_of(*ctx.assumed_ti);

  Maid m;
  switch (kind) {
    case ModelKind::kTrustingVoter:
      m.chance.push_back(Root(vars::kTk, sc.prior_tk));
      m.chance.push_back(ChanceNode{vars::kDk, sc.d_domain, {vars::kTk}, sc.d_given_t, {}});
      AddVoterNodes(sc, &m, {vars::kSik});
      m.solve_order = {vars::kYik};
      break;
    case ModelKind::kBiasedPundit:
      AddPunditNodes(sc, ctx, &m);
      m.solve_order = {vars::kBk};
      break;
    case ModelKind::kSuspiciousVoter:
      AddPunditNodes(sc, ctx, &m);
      AddVoterNodes(sc, &m, {vars::kBk, vars::kSik});
      m.solve_order = {vars::kBk, vars::kYik};
      break;
  }
  return m;
}

}  // namespace maidvote
