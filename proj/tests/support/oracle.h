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

#ifndef MAIDVOTE_TESTS_SUPPORT_ORACLE_H_
#define MAIDVOTE_TESTS_SUPPORT_ORACLE_H_

// Reference computations for the tests. Everything here works on raw CPT
// entries by direct enumeration and shares no code with the factor
// operations or variable elimination in the library.

#include <string>
#include <vector>

#include "maidvote/analysis.h"
#include "maidvote/maid.h"
#include "maidvote/models.h"

namespace maidvote::testing {

struct Joint {
  std::vector<std::string> vars;
  std::vector<DomainPtr> domains;
  std::vector<size_t> sizes;
  // Row-major over `vars`, last fastest.
  std::vector<double> p;

  size_t var_index(const std::string& id) const;
};

// P(x) = Π_v P(x_v | x_parents(v)) for every joint assignment.
Joint EnumerateJoint(const BayesNet& bn);

// Unnormalized P(query, evidence) per query label.
std::vector<double> JointWith(const Joint& j, const std::string& query, const Assignment& ev);
// Normalized; empty if the evidence mass is <= 1e-12.
std::vector<double> Conditional(const Joint& j, const std::string& query, const Assignment& ev);
// Σ value(label) P(label | ev) for a numeric variable.
double ConditionalMean(const Joint& j, const std::string& query, const Assignment& ev);

// P(a, b) as a |a| x |b| table, row-major.
std::vector<double> PairMarginal(const Joint& j, const std::string& a, const std::string& b);

// Exhaustive classification of a per-label shift: tries every bijection
// between gaining and losing labels.
InfoKind ExhaustiveClassify(const std::vector<double>& values, const std::vector<double>& delta);

// Expected support E[Y | T_i = t_i, D_k = d] (or no message when d is
// empty) read off the compiled trusting network by enumeration.
double TrustingSupport(const Scenario& sc, const std::string& t_i, const std::string& d);

// EU(b | c, t_i) for an agent at position agent_t: P(T_k | c) and the
// voter's response to b both come from the trusting joint. An unreachable b
// falls back to the response without a message.
double ExpectedUtilityByEnumeration(const Scenario& sc, const Joint& trusting, size_t agent_t,
                                    size_t b, size_t c, size_t t_i);

}  // namespace maidvote::testing

#endif  // MAIDVOTE_TESTS_SUPPORT_ORACLE_H_
