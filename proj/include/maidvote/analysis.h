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

#ifndef MAIDVOTE_ANALYSIS_H_
#define MAIDVOTE_ANALYSIS_H_

// Checks of the formal claims about the voter/pundit models, and a seeded
// search for messages that lower trusting support but raise suspicious
// support.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "maidvote/discrete.h"
#include "maidvote/maid.h"
#include "maidvote/models.h"

namespace maidvote {

enum class InfoKind { kStrictlyNegative, kStrictlyPositive, kNeutral, kMixed };
const char* InfoKindName(InfoKind k);

// δ of probability moved between two similarity labels. Indices refer to
// the similarity domain; value(lower) < value(upper).
struct MassShift {
  size_t lower;
  size_t upper;
  double delta;
};

struct InfoClassification {
  InfoKind kind = InfoKind::kMixed;
  // Nonempty only for the two strict kinds. Negative information moves each
  // δ from upper to lower; positive information the other way.
  std::vector<MassShift> triples;
  // Δ(s) = P(S | t_i, d) - P(S | t_i), one entry per similarity label.
  std::vector<double> delta;
};

// Classifies a per-label shift over a numeric domain. Labels with
// |Δ| <= 1e-9 are ignored; the rest must pair up exactly.
InfoClassification ClassifyShift(const Domain& s_domain, std::span<const double> delta);

// P(S_ik | T_i = t_i, T_k ~ belief).
std::vector<double> SimilarityGivenBelief(const Scenario& sc, size_t t_i,
                                          const std::vector<double>& belief);

// kZeroEvidence if P(D_k = d) <= 1e-12.
InfoClassification ClassifyInformation(const Scenario& sc, const std::string& t_i,
                                       const std::string& d);

// True iff s1 > s2 implies f_y(s1) >= f_y(s2). kInput on non-numeric domains
// or a policy that is not over a single similarity parent.
bool CheckMonotonePolicy(const PolicyTable& p);

enum class Verdict { kVerified, kViolated, kInapplicable };
const char* VerdictName(Verdict v);

struct Margin {
  std::string name;
  double value;
};

struct VerificationReport {
  std::string claim;
  Verdict verdict = Verdict::kInapplicable;
  std::string summary;
  std::vector<Margin> margins;
  // Labels that locate a violation, or the instance checked.
  Assignment witness;

  // kInput if absent.
  double margin(std::string_view name) const;
  bool has_margin(std::string_view name) const;
};

// Claim ids as accepted by the command line.
inline constexpr const char* kClaimThm1 = "thm1";
inline constexpr const char* kClaimProp1 = "prop1";
inline constexpr const char* kClaimProp2 = "prop2";
inline constexpr const char* kClaimProp3 = "prop3";
inline constexpr const char* kClaimCorollary = "cor";
inline constexpr const char* kClaimThm2 = "thm2";

// Negative information lowers expected support under a monotone policy;
// positive information raises it. The strictness margin is
// Σ δ (f_y(upper) - f_y(lower)).
VerificationReport VerifyTheorem1(const Scenario& sc, const std::string& t_i,
                                  const std::string& d);

// Constant P^bp(b | c) makes publications uninformative.
VerificationReport VerifyProp1(const Scenario& sc, const PunditContext& ctx);
VerificationReport VerifyProp1(const Scenario& sc, const Factor& pundit_marginal);

// Diagonal α and constant off-diagonal: compares P^sv(T_k | b) with
// α P^tv(T_k | b) + (1 - α) P(T_k) and reports the per-b residual.
VerificationReport VerifyProp2(const Scenario& sc, const PunditContext& ctx);
VerificationReport VerifyProp2(const Scenario& sc, const Factor& pundit_marginal);

// Aligned voter and pundit (both at position t): the pundit's choice does
// not lower the voter's expected utility below that of the true message.
VerificationReport VerifyProp3(const Scenario& sc, const std::string& t);

// Mixture h over messages, every support point strictly negative.
VerificationReport VerifyCorollary(const Scenario& sc, const std::string& t_i,
                                   const Categorical& h);

// Verified iff E_tv[Y | b] < E_tv[Y] - 1e-9 and E_sv[Y | b] > E_sv[Y] + 1e-9,
// all conditioned on T_i = t_i.
VerificationReport VerifyAnomalous(const Scenario& sc, const PunditContext& ctx,
                                   const std::string& t_i, const std::string& b);

struct SearchConfig {
  uint64_t seed = 20260917;
  size_t budget = 20000;
  // Number of messages per candidate scenario.
  size_t min_messages = 2;
  size_t max_messages = 2;
  // Voter and pundit share a position instead of opposing ones.
  bool aligned = false;
  // The pundit plans against the actual voter position.
  bool pundit_knows_ti = true;
  // Both margins of an accepted witness must reach this.
  double min_margin = 1e-6;
  std::vector<double> prior_grid = {1, 2, 3, 4, 6, 8};
  std::vector<double> cpt_grid = {0, 1, 2, 3, 5, 8};
  std::vector<double> center_grid = {2, 3, 4, 5};
  std::vector<double> noise_grid = {0, 1};
  std::vector<double> reputation_grid = {0.01, 0.05, 0.1};
};

struct AnomalousWitness {
  Scenario scenario;
  PunditContext context;
  std::string t_i;
  std::string b;
  VerificationReport report;
  // Candidate index in the seeded stream.
  size_t index = 0;
};

struct SearchResult {
  std::optional<AnomalousWitness> witness;
  size_t candidates_tried = 0;
};

// Candidate `index` is a pure function of (cfg, index).
std::optional<Scenario> AnomalousCandidate(const SearchConfig& cfg, size_t index);

// kInput unless the grids are nonempty and the message bounds are sane.
SearchResult FindAnomalousScenario(const SearchConfig& cfg);

}  // namespace maidvote

#endif  // MAIDVOTE_ANALYSIS_H_
