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

#ifndef MAIDVOTE_MODELS_H_
#define MAIDVOTE_MODELS_H_

// Voter / pundit models.
//
// A Scenario fixes the background tables: position priors for voter (T_i),
// candidate (T_k) and pundit (T_j), the message distribution P(D|T_k) (also
// used for the pundit's private message C_k), the similarity table
// P(S|T_a,T_b), the voter utility f_U(s,y) and the reputation cost f_R(b,c).
// The pundit's utility is always f_U(s,y) - f_R(b,c).
//
// Three models are built on top of it:
//   trusting voter   - treats a message as a draw from P(D|T_k);
//   biased pundit    - sees C_k and publishes B_k to steer a trusting voter;
//   suspicious voter - conditions on B_k through the pundit model.
//
// Every quantity below is computed by direct summation over the tables.
// The same quantities are available through BuildMaid + Compile + Infer,
// and the two routes are cross-checked in the tests.

#include <optional>
#include <string>
#include <vector>

#include "maidvote/discrete.h"
#include "maidvote/maid.h"

namespace maidvote {

// Variable ids used in the model networks.
namespace vars {
inline constexpr const char* kTi = "T_i";
inline constexpr const char* kTj = "T_j";
inline constexpr const char* kTk = "T_k";
inline constexpr const char* kDk = "D_k";
inline constexpr const char* kCk = "C_k";
inline constexpr const char* kBk = "B_k";
inline constexpr const char* kSik = "S_ik";
inline constexpr const char* kSjk = "S_jk";
inline constexpr const char* kRjk = "R_jk";
inline constexpr const char* kYik = "Y_ik";
// The trusting-voter response the pundit plans against.
inline constexpr const char* kYtv = "Ytv_ik";
inline constexpr const char* kUi = "U_i";
inline constexpr const char* kUj = "U_j";
}  // namespace vars

inline constexpr const char* kVoter = "i";
inline constexpr const char* kPundit = "j";

struct Scenario {
  std::string name;
  DomainPtr t_domain;  // positions
  DomainPtr d_domain;  // messages, shared by D_k, C_k and B_k
  DomainPtr s_domain;  // similarity, numeric
  DomainPtr y_domain;  // support, numeric
  Categorical prior_ti;
  Categorical prior_tk;
  Categorical prior_tj;
  Factor d_given_t;      // scope (T_k, D_k)
  Factor s_given_tt;     // scope (T_a, T_b, S); symmetric in T_a, T_b
  Factor utility;        // scope (S, Y): f_U(s, y)
  Factor reputation;     // scope (B, C): f_R(b, c)

  double p_d_given_t(size_t t, size_t d) const { return d_given_t[t * d_domain->size() + d]; }
  double p_s(size_t ta, size_t tb, size_t s) const {
    return s_given_tt[(ta * t_domain->size() + tb) * s_domain->size() + s];
  }
  double f_u(size_t s, size_t y) const { return utility[s * y_domain->size() + y]; }
  double f_r(size_t b, size_t c) const { return reputation[b * d_domain->size() + c]; }
};

// Plain-number description of a scenario; MakeScenario turns it into the
// checked form. Index order follows the label lists.
struct ScenarioTables {
  std::string name;
  std::vector<std::string> positions;
  std::vector<std::string> messages;
  std::vector<double> s_values;
  std::vector<double> y_values;
  std::vector<double> prior_ti, prior_tk, prior_tj;
  std::vector<std::vector<double>> d_given_t;                // [t][d]
  std::vector<std::vector<std::vector<double>>> s_given_tt;  // [ta][tb][s]
  std::vector<std::vector<double>> utility;                  // [s][y]
  std::vector<std::vector<double>> reputation;               // [b][c]
};

// Violations of the scenario invariants, each prefixed by a field path.
std::vector<std::string> CheckScenario(const Scenario& sc);

// Builds and checks; kSpecification listing every violation.
Scenario MakeScenario(const ScenarioTables& t);
ScenarioTables ToTables(const Scenario& sc);

enum class ModelKind { kTrustingVoter, kBiasedPundit, kSuspiciousVoter };
const char* ModelKindName(ModelKind k);

struct PunditContext {
  // Pundit type known to everyone; otherwise T_j ~ prior_tj.
  std::optional<std::string> known_tj;
  // Voter type the pundit plans against; otherwise T_i ~ prior_ti.
  std::optional<std::string> assumed_ti;
};

Maid BuildMaid(const Scenario& sc, ModelKind kind, const PunditContext& ctx = {});

// f_y(s) = argmax_y f_U(s, y), first label on ties.
PolicyTable TrustingPolicy(const Scenario& sc);

// P(T_k | D_k = d). kZeroEvidence if P(D_k = d) <= 1e-12.
Categorical PosteriorTkGivenD(const Scenario& sc, const std::string& d);

// P(D_k = d) under prior_tk.
double MessageProbability(const Scenario& sc, size_t d);

// P(Y_ik | T_i = t_i, T_k ~ belief) for the trusting policy.
Categorical VoteGivenBelief(const Scenario& sc, const std::string& t_i,
                            const Categorical& belief_tk);

// P^tv(Y_ik | T_i = t_i, D_k = d).
Categorical VoteDistTrusting(const Scenario& sc, const std::string& t_i, const std::string& d);

// P^tv(Y_ik | D_k = d) as the pundit sees it: T_i marginalized under
// prior_ti, or clamped to ctx.assumed_ti. Unreachable d falls back to the
// no-evidence vote distribution.
Categorical PunditViewOfVote(const Scenario& sc, const PunditContext& ctx, size_t d);

// One more independent message: posterior ∝ P(d_new | T_k) current(T_k).
Categorical IncrementalUpdate(const Scenario& sc, const Categorical& current,
                              const std::string& d_new);

// P(S_jk | C_k = c, T_j = t_j) = Σ_t P(s | t_j, t) P(t | c). For an
// unreachable c the candidate prior stands in for P(t | c).
std::vector<double> PunditSimilarity(const Scenario& sc, size_t c, size_t t_j);

// P^bp(B_k | C_k, S_jk): point mass on argmax_b Σ_y P^tv(y | b) f_U(s, y) - f_R(b, c).
Factor PunditPolicy(const Scenario& sc, const PunditContext& ctx);

// P^bp(B_k | C_k), averaging over S_jk and T_j.
Factor PunditMarginal(const Scenario& sc, const PunditContext& ctx);
// One row of the above; kZeroEvidence for an unreachable c.
Categorical PunditMarginalRow(const Scenario& sc, const PunditContext& ctx,
                              const std::string& c);

struct SuspiciousPosterior {
  Categorical posterior;
  // Unnormalized contributions per position: c = b, and c != b.
  std::vector<double> accurate;
  std::vector<double> deceptive;
  // Σ accurate + deceptive = P(B_k = b).
  double evidence = 0.0;
};

// P^sv(T_k | B_k = b) ∝ Σ_c P(T_k | c) P^bp(b | c) P(c).
SuspiciousPosterior SuspiciousPosteriorTk(const Scenario& sc, const PunditContext& ctx,
                                          const std::string& b);
// Same, for an explicit P^bp(B | C) table with scope (C, B).
SuspiciousPosterior SuspiciousPosteriorTk(const Scenario& sc, const Factor& pundit_marginal,
                                          const std::string& b);

Categorical VoteDistSuspicious(const Scenario& sc, const PunditContext& ctx,
                               const std::string& t_i, const std::string& b);

// EU(b | c, t_i) evaluated for an agent with position agent_t.
double ExpectedUtility(const Scenario& sc, const std::string& agent_t, const std::string& b,
                       const std::string& c, const std::string& t_i);

}  // namespace maidvote

#endif  // MAIDVOTE_MODELS_H_
