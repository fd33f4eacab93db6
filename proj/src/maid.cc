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
#include <map>
#include <set>

namespace maidvote {

const ChanceNode* Maid::find_chance(const std::string& id) const {
  for (const auto& n : chance) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const DecisionNode* Maid::find_decision(const std::string& id) const {
  for (const auto& n : decisions) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

namespace {

bool SameScope(const std::vector<Variable>& scope, const std::vector<Variable>& want) {
  if (scope.size() != want.size()) return false;
  for (size_t i = 0; i < scope.size(); ++i) {
    if (scope[i].id != want[i].id || !(*scope[i].domain == *want[i].domain)) return false;
  }
  return true;
}

// Returns the first parent row of `cpt` (last scope variable is the child)
// whose sum is off by more than kNormTolerance, as a readable label list.
std::optional<std::string> BadCptRow(const Factor& cpt, double* sum_out) {
  const size_t k = cpt.scope().back().size();
  const size_t rows = cpt.size() / k;
  std::vector<Variable> parents(cpt.scope().begin(), cpt.scope().end() - 1);
  IndexOdometer odo(parents);
  for (size_t r = 0; r < rows; ++r, odo.next()) {
    double sum = 0.0;
    for (size_t j = 0; j < k; ++j) sum += cpt[r * k + j];
    if (std::abs(sum - 1.0) > kNormTolerance) {
      std::string row = "(";
      for (size_t p = 0; p < parents.size(); ++p) {
        if (p) row += ", ";
        row += parents[p].id + "=" + parents[p].domain->label(odo.indices()[p]).name;
      }
      row += ")";
      if (sum_out) *sum_out = sum;
      return row;
    }
  }
  return std::nullopt;
}

// Kahn's algorithm; nodes become ready in their original order. Returns the
// ids left over when a cycle blocks progress.
template <typename ParentsOf>
std::vector<std::string> TopoOrder(const std::vector<std::string>& ids,
                                   ParentsOf parents_of,
                                   std::vector<std::string>* stuck) {
  std::set<std::string> placed;
  std::vector<std::string> order;
  bool progress = true;
  while (order.size() < ids.size() && progress) {
    progress = false;
    for (const auto& id : ids) {
      if (placed.count(id)) continue;
      bool ready = true;
      for (const auto& p : parents_of(id)) {
        if (!placed.count(p)) {
          ready = false;
          break;
        }
      }
      if (ready) {
        placed.insert(id);
        order.push_back(id);
        progress = true;
      }
    }
  }
  if (stuck) {
    for (const auto& id : ids) {
      if (!placed.count(id)) stuck->push_back(id);
    }
  }
  return order;
}

// Sums out every variable not in `keep`, greedily picking the variable whose
// elimination yields the smallest intermediate table (ties: first in
// `elim_candidates`). Returns the product of the remaining factors.
Factor EliminateAllBut(std::vector<Factor> factors, const std::vector<std::string>& keep,
                       const std::vector<std::string>& elim_candidates) {
  std::vector<std::string> pending;
  for (const auto& id : elim_candidates) {
    if (std::find(keep.begin(), keep.end(), id) == keep.end()) pending.push_back(id);
  }
  while (!pending.empty()) {
    size_t best = 0;
    size_t best_size = SIZE_MAX;
    for (size_t c = 0; c < pending.size(); ++c) {
      std::map<std::string, size_t> vars;
      for (const auto& f : factors) {
        if (!f.has(pending[c])) continue;
        for (const auto& v : f.scope()) vars[v.id] = v.size();
      }
      size_t size = 1;
      for (const auto& [id, n] : vars) size *= n;
      if (size < best_size) {
        best_size = size;
        best = c;
      }
    }
    const std::string var = pending[best];
    pending.erase(pending.begin() + best);
    std::vector<Factor> touching;
    std::vector<Factor> rest;
    for (auto& f : factors) (f.has(var) ? touching : rest).push_back(std::move(f));
    if (!touching.empty()) rest.push_back(Marginalize(Product(touching), var));
    factors = std::move(rest);
  }
  return Product(factors);
}

std::vector<std::string> AncestorClosure(const BayesNet& bn,
                                         const std::vector<std::string>& seeds) {
  std::set<std::string> seen(seeds.begin(), seeds.end());
  std::vector<std::string> stack(seeds.begin(), seeds.end());
  while (!stack.empty()) {
    const std::string id = stack.back();
    stack.pop_back();
    for (const auto& p : bn.node(id).parents) {
      if (seen.insert(p).second) stack.push_back(p);
    }
  }
  std::vector<std::string> out;
  for (const auto& n : bn.nodes()) {
    if (seen.count(n.id)) out.push_back(n.id);
  }
  return out;
}

// Unnormalized P(keep..., evidence) restricted to the ancestors of keep and
// the evidence, with the scope ordered as `keep`.
Factor JointOver(const BayesNet& bn, const std::vector<std::string>& keep,
                 const Assignment& evidence) {
  std::vector<std::string> seeds = keep;
  for (const auto& [id, label] : evidence) {
    if (!bn.has(id)) Fail(ErrorKind::kInput, "evidence names unknown variable '" + id + "'");
    bn.node(id).domain->index_of(label);
    seeds.push_back(id);
  }
  const auto relevant = AncestorClosure(bn, seeds);
  std::vector<Factor> factors;
  for (const auto& id : relevant) {
    const Factor& cpt = bn.node(id).cpt;
    Assignment local;
    for (const auto& [var, label] : evidence) {
      if (cpt.has(var)) local[var] = label;
    }
    factors.push_back(Condition(cpt, local));
  }
  std::vector<std::string> elim;
  for (const auto& id : relevant) {
    if (!evidence.count(id)) elim.push_back(id);
  }
  Factor joint = EliminateAllBut(std::move(factors), keep, elim);
  return MarginalizeTo(joint, keep);
}

}  // namespace

std::vector<Finding> Validate(const Maid& m) {
  std::vector<Finding> out;
  std::map<std::string, DomainPtr> vars;
  for (const auto& n : m.chance) {
    if (!n.domain) {
      out.push_back({n.id, "chance node has no domain"});
      continue;
    }
    if (!vars.emplace(n.id, n.domain).second) out.push_back({n.id, "duplicate node id"});
  }
  for (const auto& n : m.decisions) {
    if (!n.domain) {
      out.push_back({n.id, "decision node has no domain"});
      continue;
    }
    if (!vars.emplace(n.id, n.domain).second) out.push_back({n.id, "duplicate node id"});
  }
  std::set<std::string> utility_ids;
  for (const auto& u : m.utilities) {
    if (!utility_ids.insert(u.id).second || vars.count(u.id)) {
      out.push_back({u.id, "duplicate node id"});
    }
  }

  auto expected_scope = [&](const std::vector<std::string>& parents,
                            const Variable* self, std::vector<Variable>* scope) {
    for (const auto& p : parents) {
      auto it = vars.find(p);
      if (it == vars.end()) return false;
      scope->push_back({p, it->second});
    }
    if (self) scope->push_back(*self);
    return true;
  };

  for (const auto& n : m.chance) {
    if (!n.domain) continue;
    std::vector<Variable> want;
    bool parents_ok = true;
    for (const auto& p : n.parents) {
      if (!vars.count(p)) {
        out.push_back({n.id, "unknown parent '" + p + "'"});
        parents_ok = false;
      }
      if (p == n.id) out.push_back({n.id, "node is its own parent"});
    }
    if (!parents_ok) continue;
    const Variable self = n.variable();
    expected_scope(n.parents, &self, &want);
    if (!SameScope(n.cpt.scope(), want)) {
      out.push_back({n.id, "CPT scope must be parents followed by the node"});
      continue;
    }
    double sum = 0.0;
    if (auto row = BadCptRow(n.cpt, &sum)) {
      out.push_back({n.id, "CPT row " + *row + " sums to " + FormatNumber(sum)});
    }
  }
  for (const auto& n : m.decisions) {
    if (n.owner.empty()) out.push_back({n.id, "decision has no owner"});
    for (const auto& p : n.info_parents) {
      if (p == n.id) {
        out.push_back({n.id, "decision observes itself"});
      } else if (!vars.count(p)) {
        out.push_back({n.id, "unknown information parent '" + p + "'"});
      }
    }
  }
  for (const auto& u : m.utilities) {
    std::vector<Variable> want;
    if (!expected_scope(u.parents, nullptr, &want)) {
      out.push_back({u.id, "utility refers to an unknown variable"});
      continue;
    }
    if (!SameScope(u.table.scope(), want)) {
      out.push_back({u.id, "utility table scope must equal its parents"});
    }
  }

  // Acyclicity over chance + decision nodes.
  std::vector<std::string> ids;
  std::map<std::string, std::vector<std::string>> parents;
  for (const auto& n : m.chance) {
    ids.push_back(n.id);
    parents[n.id] = n.parents;
  }
  for (const auto& n : m.decisions) {
    ids.push_back(n.id);
    parents[n.id] = n.info_parents;
  }
  std::vector<std::string> stuck;
  TopoOrder(
      ids,
      [&](const std::string& id) {
        std::vector<std::string> known;
        for (const auto& p : parents[id]) {
          if (parents.count(p)) known.push_back(p);
        }
        return known;
      },
      &stuck);
  if (!stuck.empty()) {
    std::string list;
    for (const auto& id : stuck) list += (list.empty() ? "" : ", ") + id;
    out.push_back({stuck.front(), "graph has a directed cycle through {" + list + "}"});
  }

  std::vector<std::string> order = m.solve_order;
  std::vector<std::string> decisions;
  for (const auto& d : m.decisions) decisions.push_back(d.id);
  std::sort(order.begin(), order.end());
  std::sort(decisions.begin(), decisions.end());
  if (order != decisions) {
    out.push_back({"solve_order", "solve order is not a permutation of the decisions"});
  }
  return out;
}

// PolicyTable ----------------------------------------------------------------

PolicyTable::PolicyTable(std::string decision, DomainPtr domain, std::vector<Variable> info,
                         std::vector<size_t> choices)
    : decision_(std::move(decision)),
      domain_(std::move(domain)),
      info_(std::move(info)),
      choices_(std::move(choices)) {
  size_t rows = 1;
  for (const auto& v : info_) rows *= v.size();
  if (choices_.size() != rows) {
    Fail(ErrorKind::kStructural, "policy for '" + decision_ + "' needs " +
                                     std::to_string(rows) + " rows");
  }
  for (size_t c : choices_) {
    if (c >= domain_->size()) Fail(ErrorKind::kInput, "policy choice out of range");
  }
}

Factor PolicyTable::AsCpt() const {
  std::vector<Variable> scope = info_;
  scope.push_back({decision_, domain_});
  std::vector<double> values(choices_.size() * domain_->size(), 0.0);
  for (size_t r = 0; r < choices_.size(); ++r) values[r * domain_->size() + choices_[r]] = 1.0;
  return Factor(std::move(scope), std::move(values));
}

// BayesNet -------------------------------------------------------------------

BayesNet::BayesNet(std::vector<ChanceNode> nodes) {
  std::map<std::string, const ChanceNode*> by_id;
  std::vector<std::string> ids;
  for (const auto& n : nodes) {
    if (!by_id.emplace(n.id, &n).second) {
      Fail(ErrorKind::kStructural, "duplicate node '" + n.id + "'");
    }
    ids.push_back(n.id);
  }
  for (const auto& n : nodes) {
    for (const auto& p : n.parents) {
      if (!by_id.count(p)) {
        Fail(ErrorKind::kStructural, "node '" + n.id + "' has unknown parent '" + p + "'");
      }
    }
    std::vector<Variable> want;
    for (const auto& p : n.parents) want.push_back(by_id[p]->variable());
    want.push_back(n.variable());
    if (!SameScope(n.cpt.scope(), want)) {
      Fail(ErrorKind::kStructural, "CPT of '" + n.id + "' does not match its parents");
    }
    double sum = 0.0;
    if (auto row = BadCptRow(n.cpt, &sum)) {
      Fail(ErrorKind::kSpecification,
           "CPT of '" + n.id + "' row " + *row + " sums to " + FormatNumber(sum));
    }
  }
  std::vector<std::string> stuck;
  auto order = TopoOrder(
      ids, [&](const std::string& id) { return by_id[id]->parents; }, &stuck);
  if (!stuck.empty()) Fail(ErrorKind::kStructural, "Bayes net has a cycle at '" + stuck[0] + "'");
  nodes_.reserve(nodes.size());
  for (const auto& id : order) nodes_.push_back(*by_id[id]);
}

const ChanceNode& BayesNet::node(const std::string& id) const {
  for (const auto& n : nodes_) {
    if (n.id == id) return n;
  }
  Fail(ErrorKind::kInput, "unknown variable '" + id + "'");
}

bool BayesNet::has(const std::string& id) const {
  return std::any_of(nodes_.begin(), nodes_.end(),
                     [&](const ChanceNode& n) { return n.id == id; });
}

std::vector<std::string> BayesNet::ids() const {
  std::vector<std::string> out;
  for (const auto& n : nodes_) out.push_back(n.id);
  return out;
}

// Solving --------------------------------------------------------------------

PolicyTable SolveDecision(const Maid& m, const std::string& decision_id) {
  const DecisionNode* d = m.find_decision(decision_id);
  if (!d) Fail(ErrorKind::kInput, "no decision node '" + decision_id + "'");
  if (m.solve_order.empty() || m.solve_order.front() != decision_id) {
    Fail(ErrorKind::kSpecification,
         "'" + decision_id + "' is not next in the solve order");
  }
  std::vector<const UtilityNode*> utilities;
  for (const auto& u : m.utilities) {
    if (u.owner == d->owner) utilities.push_back(&u);
  }
  if (utilities.empty()) {
    Fail(ErrorKind::kSpecification,
         "agent '" + d->owner + "' owning '" + d->id + "' has no utility node");
  }

  std::vector<std::string> observed = d->info_parents;
  observed.push_back(d->id);
  std::vector<std::string> hidden;
  for (const auto* u : utilities) {
    for (const auto& p : u->parents) {
      if (std::find(observed.begin(), observed.end(), p) == observed.end() &&
          std::find(hidden.begin(), hidden.end(), p) == hidden.end()) {
        hidden.push_back(p);
      }
    }
  }

  std::vector<Variable> info;
  for (const auto& p : d->info_parents) {
    if (const auto* c = m.find_chance(p)) {
      info.push_back(c->variable());
    } else if (const auto* o = m.find_decision(p)) {
      info.push_back(o->variable());
    } else {
      Fail(ErrorKind::kStructural, "unknown information parent '" + p + "'");
    }
  }
  const size_t ny = d->domain->size();

  // P(info, decision, hidden) with the decision given a uniform rule. Only
  // needed when some utility depends on unobserved variables.
  std::optional<Factor> joint;
  if (!hidden.empty()) {
    std::vector<ChanceNode> nodes = m.chance;
    ChanceNode self{d->id, d->domain, d->info_parents, {}, d->owner};
    std::vector<Variable> scope = info;
    scope.push_back(d->variable());
    self.cpt = Factor::Constant(scope, 1.0 / static_cast<double>(ny));
    nodes.push_back(self);
    // Other unsolved decisions must not be needed.
    std::set<std::string> needed(observed.begin(), observed.end());
    needed.insert(hidden.begin(), hidden.end());
    std::vector<std::string> stack(needed.begin(), needed.end());
    std::map<std::string, std::vector<std::string>> parents;
    for (const auto& n : nodes) parents[n.id] = n.parents;
    while (!stack.empty()) {
      const std::string id = stack.back();
      stack.pop_back();
      if (id != d->id && m.find_decision(id)) {
        Fail(ErrorKind::kSpecification, "solving '" + d->id +
                                            "' needs the unsolved decision '" + id + "'");
      }
      for (const auto& p : parents[id]) {
        if (needed.insert(p).second) stack.push_back(p);
      }
    }
    std::vector<ChanceNode> relevant;
    for (const auto& n : nodes) {
      if (needed.count(n.id)) relevant.push_back(n);
    }
    BayesNet bn(std::move(relevant));
    std::vector<std::string> keep = observed;
    keep.insert(keep.end(), hidden.begin(), hidden.end());
    joint = JointOver(bn, keep, {});
  }

  size_t hidden_size = 1;
  if (joint) {
    for (size_t i = observed.size(); i < joint->scope().size(); ++i) {
      hidden_size *= joint->scope()[i].size();
    }
  }

  std::vector<Variable> obs_vars = info;
  obs_vars.push_back(d->variable());
  std::vector<size_t> choices;
  IndexOdometer rows(info);
  for (size_t row = 0; !rows.done(); rows.next(), ++row) {
    std::vector<double> scores(ny, 0.0);
    for (size_t y = 0; y < ny; ++y) {
      std::map<std::string, size_t> at;
      for (size_t i = 0; i < info.size(); ++i) at[info[i].id] = rows.indices()[i];
      at[d->id] = y;
      double mass = 0.0;
      const size_t base = (row * ny + y) * hidden_size;
      if (joint) {
        for (size_t h = 0; h < hidden_size; ++h) mass += (*joint)[base + h];
      }
      double eu = 0.0;
      for (const auto* u : utilities) {
        bool direct = std::all_of(u->parents.begin(), u->parents.end(),
                                  [&](const std::string& p) { return at.count(p) > 0; });
        if (direct) {
          std::vector<size_t> idx;
          for (const auto& p : u->parents) idx.push_back(at[p]);
          eu += u->table.at(idx);
          continue;
        }
        // Unreachable (info, decision) rows contribute nothing from
        // unobserved parents.
        if (!(mass > kZeroEvidence)) continue;
        IndexOdometer h_odo(std::vector<Variable>(joint->scope().begin() + observed.size(),
                                                  joint->scope().end()));
        for (size_t h = 0; !h_odo.done(); h_odo.next(), ++h) {
          const double p = (*joint)[base + h] / mass;
          if (p == 0.0) continue;
          std::vector<size_t> idx;
          for (const auto& par : u->parents) {
            auto it = at.find(par);
            if (it != at.end()) {
              idx.push_back(it->second);
            } else {
              auto pos = joint->position(par);
              idx.push_back(h_odo.indices()[*pos - observed.size()]);
            }
          }
          eu += p * u->table.at(idx);
        }
      }
      scores[y] = eu;
    }
    choices.push_back(ArgmaxFirst(scores));
  }
  return PolicyTable(d->id, d->domain, std::move(info), std::move(choices));
}

Maid ApplyPolicy(const Maid& m, const PolicyTable& policy) {
  const DecisionNode* d = m.find_decision(policy.decision());
  if (!d) Fail(ErrorKind::kInput, "no decision node '" + policy.decision() + "'");
  Maid out = m;
  out.chance.push_back(ChanceNode{d->id, d->domain, d->info_parents, policy.AsCpt(), d->owner});
  out.decisions.erase(std::remove_if(out.decisions.begin(), out.decisions.end(),
                                     [&](const DecisionNode& n) { return n.id == d->id; }),
                      out.decisions.end());
  out.solve_order.erase(std::remove(out.solve_order.begin(), out.solve_order.end(), d->id),
                        out.solve_order.end());
  return out;
}

BayesNet Compile(const Maid& m) {
  auto findings = Validate(m);
  if (!findings.empty()) {
    Fail(ErrorKind::kStructural,
         "invalid MAID: " + findings.front().node + ": " + findings.front().message);
  }
  Maid cur = m;
  while (!cur.solve_order.empty()) {
    PolicyTable p = SolveDecision(cur, cur.solve_order.front());
    cur = ApplyPolicy(cur, p);
  }
  return BayesNet(std::move(cur.chance));
}

// Inference ------------------------------------------------------------------

Categorical Infer(const BayesNet& bn, const std::string& query, const Assignment& evidence) {
  if (!bn.has(query)) Fail(ErrorKind::kInput, "unknown query variable '" + query + "'");
  if (evidence.count(query)) {
    Fail(ErrorKind::kInput, "query '" + query + "' is also bound as evidence");
  }
  return Normalize(JointOver(bn, {query}, evidence));
}

Factor BruteForceJoint(const BayesNet& bn, size_t cap) {
  std::vector<Variable> scope;
  double total = 1.0;
  for (const auto& n : bn.nodes()) {
    scope.push_back(n.variable());
    total *= static_cast<double>(n.domain->size());
  }
  if (total > static_cast<double>(cap)) {
    Fail(ErrorKind::kResource, "joint has " + FormatNumber(total) +
                                   " assignments, cap is " + std::to_string(cap));
  }
  // Position of each CPT variable in the global scope.
  std::vector<std::vector<size_t>> where;
  for (const auto& n : bn.nodes()) {
    std::vector<size_t> pos;
    for (const auto& v : n.cpt.scope()) {
      for (size_t g = 0; g < scope.size(); ++g) {
        if (scope[g].id == v.id) pos.push_back(g);
      }
    }
    where.push_back(std::move(pos));
  }
  std::vector<double> values;
  values.reserve(static_cast<size_t>(total));
  std::vector<size_t> local;
  for (IndexOdometer odo(scope); !odo.done(); odo.next()) {
    double p = 1.0;
    for (size_t k = 0; k < where.size() && p != 0.0; ++k) {
      const Factor& cpt = bn.nodes()[k].cpt;
      size_t flat = 0;
      for (size_t j = 0; j < where[k].size(); ++j) {
        flat = flat * cpt.scope()[j].size() + odo.indices()[where[k][j]];
      }
      p *= cpt[flat];
    }
    values.push_back(p);
  }
  return Factor(std::move(scope), std::move(values));
}

}  // namespace maidvote
