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

#ifndef MAIDVOTE_MAID_H_
#define MAIDVOTE_MAID_H_

// Multi-agent influence diagrams with deterministic expected-utility policies.
//
// A Maid holds chance, decision and utility nodes. Decisions are solved one
// at a time in `solve_order`; each solved decision becomes a chance node whose
// CPT is a point-mass policy, so a fully solved Maid is an ordinary Bayes net.

#include <cstddef>
#include <string>
#include <vector>

#include "maidvote/discrete.h"

namespace maidvote {

struct ChanceNode {
  std::string id;
  DomainPtr domain;
  std::vector<std::string> parents;
  // Scope: parents in order, then the node itself.
  Factor cpt;
  // Set when the node is a solved decision; names the deciding agent.
  std::string decided_by;

  Variable variable() const { return {id, domain}; }
};

struct DecisionNode {
  std::string id;
  DomainPtr domain;
  std::vector<std::string> info_parents;
  std::string owner;

  Variable variable() const { return {id, domain}; }
};

struct UtilityNode {
  std::string id;
  std::string owner;
  std::vector<std::string> parents;
  // Scope: parents in order. Entries may be negative.
  Factor table;
};

struct Maid {
  std::vector<ChanceNode> chance;
  std::vector<DecisionNode> decisions;
  std::vector<UtilityNode> utilities;
  std::vector<std::string> solve_order;

  const ChanceNode* find_chance(const std::string& id) const;
  const DecisionNode* find_decision(const std::string& id) const;
};

struct Finding {
  std::string node;
  std::string message;
};

// One finding per violated invariant; empty iff the Maid is well formed.
std::vector<Finding> Validate(const Maid& m);

// Deterministic decision rule stored as a CPT over (info parents..., decision).
class PolicyTable {
 public:
  PolicyTable(std::string decision, DomainPtr domain, std::vector<Variable> info,
              std::vector<size_t> choices);

  const std::string& decision() const { return decision_; }
  const DomainPtr& domain() const { return domain_; }
  const std::vector<Variable>& info() const { return info_; }
  size_t rows() const { return choices_.size(); }
  // Chosen label index for a row (row-major over info parents).
  size_t choice(size_t row) const { return choices_.at(row); }
  const std::vector<size_t>& choices() const { return choices_; }
  Categorical row(size_t r) const { return Categorical::PointMass(domain_, choice(r)); }
  Factor AsCpt() const;

 private:
  std::string decision_;
  DomainPtr domain_;
  std::vector<Variable> info_;
  std::vector<size_t> choices_;
};

class BayesNet {
 public:
  // Sorts nodes topologically; kStructural on cycles or dangling parents,
  // kSpecification on unnormalized CPT rows.
  explicit BayesNet(std::vector<ChanceNode> nodes);

  const std::vector<ChanceNode>& nodes() const { return nodes_; }
  const ChanceNode& node(const std::string& id) const;
  bool has(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  std::vector<ChanceNode> nodes_;
};

// Solves `decision_id`, which must be the first entry of m.solve_order.
// Each row is a point mass on the argmax of the owner's summed expected
// utility; ties go to the first label in domain order.
PolicyTable SolveDecision(const Maid& m, const std::string& decision_id);

// Replaces `decision_id` by its policy as a deterministic chance node.
Maid ApplyPolicy(const Maid& m, const PolicyTable& policy);

// Solves every decision in solve_order and returns the chance network.
BayesNet Compile(const Maid& m);

// Exact P(query | evidence) by variable elimination.
Categorical Infer(const BayesNet& bn, const std::string& query, const Assignment& evidence);

inline constexpr size_t kDefaultJointCap = 10'000'000;

// Full joint by enumerating every assignment; scope is bn.nodes() order.
Factor BruteForceJoint(const BayesNet& bn, size_t cap = kDefaultJointCap);

}  // namespace maidvote

#endif  // MAIDVOTE_MAID_H_
