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

#ifndef MAIDVOTE_DISCRETE_H_
#define MAIDVOTE_DISCRETE_H_

// Finite labeled domains, categorical distributions and dense factor tables.
// Everything here is immutable after construction.

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace maidvote {

// Rows of a CPT and normalized distributions must sum to 1 within this.
inline constexpr double kNormTolerance = 1e-9;
// Evidence with total mass at or below this is treated as impossible.
inline constexpr double kZeroEvidence = 1e-12;
// Scores this close (relative to max(1, |best|)) count as tied.
inline constexpr double kTieTolerance = 1e-12;

enum class ErrorKind {
  kStructural,     // scopes/graphs that do not fit together
  kInput,          // bad label, bad argument
  kZeroEvidence,   // conditioning on a (numerically) impossible event
  kSpecification,  // model or scenario violates a modelling invariant
  kResource,       // enumeration cap exceeded
  kParse,          // malformed scenario file
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void Fail(ErrorKind kind, const std::string& what);

// Shortest decimal text that parses back to exactly `v`.
std::string FormatNumber(double v);

struct Label {
  std::string name;
  std::optional<double> value;

  friend bool operator==(const Label&, const Label&) = default;
};

class Domain {
 public:
  // Throws kInput unless labels are nonempty, uniquely named, and either all
  // or none numeric; numeric domains must be strictly increasing.
  Domain(std::string id, std::vector<Label> labels);

  // Numeric domain whose label names are FormatNumber(value).
  static std::shared_ptr<const Domain> Numeric(std::string id,
                                               const std::vector<double>& values);
  static std::shared_ptr<const Domain> Named(std::string id,
                                             const std::vector<std::string>& names);

  const std::string& id() const { return id_; }
  size_t size() const { return labels_.size(); }
  const std::vector<Label>& labels() const { return labels_; }
  const Label& label(size_t i) const { return labels_.at(i); }
  bool ordered_numeric() const { return ordered_numeric_; }
  // Numeric value of label i; kInput on non-numeric domains.
  double value(size_t i) const;

  std::optional<size_t> find(std::string_view name) const;
  // Like find, but throws kInput naming the domain.
  size_t index_of(std::string_view name) const;

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.id_ == b.id_ && a.labels_ == b.labels_;
  }

 private:
  std::string id_;
  std::vector<Label> labels_;
  bool ordered_numeric_ = false;
};

using DomainPtr = std::shared_ptr<const Domain>;

// A named random variable: the unit factors are indexed by.
struct Variable {
  std::string id;
  DomainPtr domain;

  size_t size() const { return domain->size(); }
};

class Categorical {
 public:
  // Throws kInput unless probabilities lie in [0,1] and sum to 1 +- 1e-9.
  Categorical(DomainPtr domain, std::vector<double> probabilities);

  static Categorical Uniform(DomainPtr domain);
  static Categorical PointMass(DomainPtr domain, size_t index);

  const DomainPtr& domain() const { return domain_; }
  const std::vector<double>& probabilities() const { return probs_; }
  double operator[](size_t i) const { return probs_[i]; }
  double prob(std::string_view label) const {
    return probs_[domain_->index_of(label)];
  }
  size_t size() const { return probs_.size(); }

 private:
  DomainPtr domain_;
  std::vector<double> probs_;
};

// Mixture weights must be a distribution; used by the pundit marginal and
// by tests of linearity.
Categorical Mix(std::span<const Categorical> parts, std::span<const double> weights);

// Σ value(label) * p(label). kInput on non-numeric domains.
double Expectation(const Categorical& c);

// Maximum absolute per-label difference; kStructural on domain mismatch.
double MaxAbsDiff(const Categorical& a, const Categorical& b);

// Variable bindings: variable id -> label name.
using Assignment = std::map<std::string, std::string>;

// Dense non-negative table over an ordered scope, row-major with the last
// scope variable varying fastest.
class Factor {
 public:
  Factor() = default;
  // kStructural on duplicate ids or a size mismatch; kInput on negative or
  // non-finite entries.
  Factor(std::vector<Variable> scope, std::vector<double> values);
  // Utility tables may be negative.
  static Factor Signed(std::vector<Variable> scope, std::vector<double> values);
  static Factor Constant(std::vector<Variable> scope, double value);
  static Factor FromCategorical(const std::string& var_id, const Categorical& c);

  const std::vector<Variable>& scope() const { return scope_; }
  const std::vector<double>& values() const { return values_; }
  size_t size() const { return values_.size(); }
  double operator[](size_t i) const { return values_[i]; }

  // Position of var_id within the scope, or nullopt.
  std::optional<size_t> position(std::string_view var_id) const;
  bool has(std::string_view var_id) const { return position(var_id).has_value(); }

  // Flat index of a per-variable index tuple (same order as scope).
  size_t flat_index(std::span<const size_t> indices) const;
  double at(std::span<const size_t> indices) const {
    return values_[flat_index(indices)];
  }
  // Looks labels up by name; every scope variable must be bound.
  double at(const Assignment& a) const;

  double total() const;

 private:
  Factor(std::vector<Variable> scope, std::vector<double> values, bool allow_negative);

  std::vector<Variable> scope_;
  std::vector<double> values_;
};

// Pointwise product over the union of scopes (order of first appearance).
// kStructural if a shared id refers to different domains.
Factor Product(std::span<const Factor> factors);
Factor Product(const Factor& a, const Factor& b);

// Sums var_id out. kStructural if var_id is not in scope.
Factor Marginalize(const Factor& f, std::string_view var_id);

// Sums out everything except `keep` (in the order given).
Factor MarginalizeTo(const Factor& f, std::span<const std::string> keep);

// Slice consistent with the bindings; bound variables leave the scope.
// kStructural for a variable outside the scope, kInput for an unknown label.
Factor Condition(const Factor& f, const Assignment& a);

// Single-variable factor -> distribution. kStructural unless the scope has
// exactly one variable; kZeroEvidence if the mass is <= 1e-12.
Categorical Normalize(const Factor& f);

// Index of the first entry within kTieTolerance of the maximum.
size_t ArgmaxFirst(std::span<const double> scores);

// Iterates all joint index tuples of a scope in row-major order.
class IndexOdometer {
 public:
  explicit IndexOdometer(const std::vector<Variable>& scope);
  const std::vector<size_t>& indices() const { return idx_; }
  bool done() const { return done_; }
  void next();

 private:
  std::vector<size_t> sizes_;
  std::vector<size_t> idx_;
  bool done_ = false;
};

}  // namespace maidvote

#endif  // MAIDVOTE_DISCRETE_H_
