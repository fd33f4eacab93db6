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

#include "maidvote/discrete.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace maidvote {

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kStructural: return "structural error";
    case ErrorKind::kInput: return "input error";
    case ErrorKind::kZeroEvidence: return "zero-evidence error";
    case ErrorKind::kSpecification: return "specification error";
    case ErrorKind::kResource: return "resource error";
    case ErrorKind::kParse: return "parse error";
  }
  return "error";
}

void Fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

std::string FormatNumber(double v) {
  if (v == 0.0) return "0";  // drops the sign of -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Domain ---------------------------------------------------------------------

Domain::Domain(std::string id, std::vector<Label> labels)
    : id_(std::move(id)), labels_(std::move(labels)) {
  if (labels_.empty()) Fail(ErrorKind::kInput, "domain '" + id_ + "' is empty");
  std::set<std::string> seen;
  size_t numeric = 0;
  for (const Label& l : labels_) {
    if (!seen.insert(l.name).second) {
      Fail(ErrorKind::kInput, "domain '" + id_ + "' repeats label '" + l.name + "'");
    }
    if (l.value) {
      if (!std::isfinite(*l.value)) {
        Fail(ErrorKind::kInput, "domain '" + id_ + "' has a non-finite value");
      }
      ++numeric;
    }
  }
  if (numeric != 0 && numeric != labels_.size()) {
    Fail(ErrorKind::kInput, "domain '" + id_ + "' mixes numeric and plain labels");
  }
  ordered_numeric_ = numeric == labels_.size();
  if (ordered_numeric_) {
    for (size_t i = 1; i < labels_.size(); ++i) {
      if (!(*labels_[i].value > *labels_[i - 1].value)) {
        Fail(ErrorKind::kInput,
             "numeric domain '" + id_ + "' is not strictly increasing at '" +
                 labels_[i].name + "'");
      }
    }
  }
}

DomainPtr Domain::Numeric(std::string id, const std::vector<double>& values) {
  std::vector<Label> labels;
  labels.reserve(values.size());
  for (double v : values) labels.push_back({FormatNumber(v), v});
  return std::make_shared<const Domain>(std::move(id), std::move(labels));
}

DomainPtr Domain::Named(std::string id, const std::vector<std::string>& names) {
  std::vector<Label> labels;
  labels.reserve(names.size());
  for (const auto& n : names) labels.push_back({n, std::nullopt});
  return std::make_shared<const Domain>(std::move(id), std::move(labels));
}

double Domain::value(size_t i) const {
  if (!ordered_numeric_) {
    Fail(ErrorKind::kInput, "domain '" + id_ + "' is not numeric");
  }
  return *labels_.at(i).value;
}

std::optional<size_t> Domain::find(std::string_view name) const {
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].name == name) return i;
  }
  return std::nullopt;
}

size_t Domain::index_of(std::string_view name) const {
  auto i = find(name);
  if (!i) {
    Fail(ErrorKind::kInput,
         "label '" + std::string(name) + "' is not in domain '" + id_ + "'");
  }
  return *i;
}

// Categorical ----------------------------------------------------------------

Categorical::Categorical(DomainPtr domain, std::vector<double> probabilities)
    : domain_(std::move(domain)), probs_(std::move(probabilities)) {
  if (!domain_) Fail(ErrorKind::kInput, "categorical without a domain");
  if (probs_.size() != domain_->size()) {
    Fail(ErrorKind::kInput, "categorical over '" + domain_->id() + "' has " +
                                std::to_string(probs_.size()) + " entries, expected " +
                                std::to_string(domain_->size()));
  }
  double sum = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      Fail(ErrorKind::kInput, "categorical over '" + domain_->id() +
                                  "' has probability " + FormatNumber(p) +
                                  " outside [0,1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormTolerance) {
    Fail(ErrorKind::kInput, "categorical over '" + domain_->id() + "' sums to " +
                                FormatNumber(sum));
  }
}

Categorical Categorical::Uniform(DomainPtr domain) {
  const size_t n = domain->size();
  return Categorical(std::move(domain), std::vector<double>(n, 1.0 / n));
}

Categorical Categorical::PointMass(DomainPtr domain, size_t index) {
  std::vector<double> p(domain->size(), 0.0);
  p.at(index) = 1.0;
  return Categorical(std::move(domain), std::move(p));
}

Categorical Mix(std::span<const Categorical> parts, std::span<const double> weights) {
  if (parts.empty() || parts.size() != weights.size()) {
    Fail(ErrorKind::kInput, "mixture needs one weight per component");
  }
  std::vector<double> out(parts.front().size(), 0.0);
  for (size_t k = 0; k < parts.size(); ++k) {
    if (!(*parts[k].domain() == *parts.front().domain())) {
      Fail(ErrorKind::kStructural, "mixture components disagree on domain");
    }
    for (size_t i = 0; i < out.size(); ++i) out[i] += weights[k] * parts[k][i];
  }
  return Categorical(parts.front().domain(), std::move(out));
}

double Expectation(const Categorical& c) {
  const Domain& d = *c.domain();
  if (!d.ordered_numeric()) {
    Fail(ErrorKind::kInput, "expectation over non-numeric domain '" + d.id() + "'");
  }
  double e = 0.0;
  for (size_t i = 0; i < d.size(); ++i) e += d.value(i) * c[i];
  return e;
}

double MaxAbsDiff(const Categorical& a, const Categorical& b) {
  if (!(*a.domain() == *b.domain())) {
    Fail(ErrorKind::kStructural, "comparing distributions over different domains");
  }
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Factor ---------------------------------------------------------------------

namespace {

size_t ScopeSize(const std::vector<Variable>& scope) {
  size_t n = 1;
  for (const auto& v : scope) n *= v.size();
  return n;
}

std::vector<size_t> Strides(const std::vector<Variable>& scope) {
  std::vector<size_t> s(scope.size(), 1);
  for (size_t i = scope.size(); i-- > 1;) s[i - 1] = s[i] * scope[i].size();
  return s;
}

}  // namespace

Factor::Factor(std::vector<Variable> scope, std::vector<double> values)
    : Factor(std::move(scope), std::move(values), false) {}

Factor::Factor(std::vector<Variable> scope, std::vector<double> values,
               bool allow_negative)
    : scope_(std::move(scope)), values_(std::move(values)) {
  std::set<std::string> ids;
  for (const auto& v : scope_) {
    if (!v.domain) Fail(ErrorKind::kStructural, "variable '" + v.id + "' has no domain");
    if (!ids.insert(v.id).second) {
      Fail(ErrorKind::kStructural, "variable '" + v.id + "' repeated in factor scope");
    }
  }
  if (values_.size() != ScopeSize(scope_)) {
    Fail(ErrorKind::kStructural, "factor has " + std::to_string(values_.size()) +
                                     " entries, scope needs " +
                                     std::to_string(ScopeSize(scope_)));
  }
  for (double x : values_) {
    if (!std::isfinite(x) || (!allow_negative && x < 0.0)) {
      Fail(ErrorKind::kInput, "factor entry " + FormatNumber(x) + " is not allowed");
    }
  }
}

Factor Factor::Signed(std::vector<Variable> scope, std::vector<double> values) {
  return Factor(std::move(scope), std::move(values), true);
}

Factor Factor::Constant(std::vector<Variable> scope, double value) {
  const size_t n = ScopeSize(scope);
  return Factor(std::move(scope), std::vector<double>(n, value), value < 0.0);
}

Factor Factor::FromCategorical(const std::string& var_id, const Categorical& c) {
  return Factor({Variable{var_id, c.domain()}}, c.probabilities());
}

std::optional<size_t> Factor::position(std::string_view var_id) const {
  for (size_t i = 0; i < scope_.size(); ++i) {
    if (scope_[i].id == var_id) return i;
  }
  return std::nullopt;
}

size_t Factor::flat_index(std::span<const size_t> indices) const {
  if (indices.size() != scope_.size()) {
    Fail(ErrorKind::kStructural, "index tuple does not match factor scope");
  }
  size_t flat = 0;
  for (size_t i = 0; i < scope_.size(); ++i) {
    if (indices[i] >= scope_[i].size()) {
      Fail(ErrorKind::kInput, "index out of range for '" + scope_[i].id + "'");
    }
    flat = flat * scope_[i].size() + indices[i];
  }
  return flat;
}

double Factor::at(const Assignment& a) const {
  std::vector<size_t> idx(scope_.size());
  for (size_t i = 0; i < scope_.size(); ++i) {
    auto it = a.find(scope_[i].id);
    if (it == a.end()) {
      Fail(ErrorKind::kStructural, "assignment does not bind '" + scope_[i].id + "'");
    }
    idx[i] = scope_[i].domain->index_of(it->second);
  }
  return at(idx);
}

double Factor::total() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

size_t ArgmaxFirst(std::span<const double> scores) {
  if (scores.empty()) Fail(ErrorKind::kInput, "argmax of an empty list");
  const double best = *std::max_element(scores.begin(), scores.end());
  const double tol = kTieTolerance * std::max(1.0, std::abs(best));
  for (size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] >= best - tol) return i;
  }
  return 0;
}

IndexOdometer::IndexOdometer(const std::vector<Variable>& scope)
    : idx_(scope.size(), 0) {
  sizes_.reserve(scope.size());
  for (const auto& v : scope) {
    sizes_.push_back(v.size());
    if (v.size() == 0) done_ = true;
  }
}

void IndexOdometer::next() {
  for (size_t i = idx_.size(); i-- > 0;) {
    if (++idx_[i] < sizes_[i]) return;
    idx_[i] = 0;
  }
  done_ = true;
}

Factor Product(std::span<const Factor> factors) {
  if (factors.empty()) return Factor({}, {1.0});
  if (factors.size() == 1) return factors.front();

  std::vector<Variable> scope;
  for (const Factor& f : factors) {
    for (const Variable& v : f.scope()) {
      auto it = std::find_if(scope.begin(), scope.end(),
                             [&](const Variable& w) { return w.id == v.id; });
      if (it == scope.end()) {
        scope.push_back(v);
      } else if (!(*it->domain == *v.domain)) {
        Fail(ErrorKind::kStructural,
             "variable '" + v.id + "' has different domains in product");
      }
    }
  }

  // For each input: stride of every output variable in that input (0 if absent).
  std::vector<std::vector<size_t>> stride_in(factors.size(),
                                             std::vector<size_t>(scope.size(), 0));
  for (size_t k = 0; k < factors.size(); ++k) {
    const auto strides = Strides(factors[k].scope());
    for (size_t j = 0; j < factors[k].scope().size(); ++j) {
      for (size_t o = 0; o < scope.size(); ++o) {
        if (scope[o].id == factors[k].scope()[j].id) stride_in[k][o] = strides[j];
      }
    }
  }

  std::vector<double> out(ScopeSize(scope), 1.0);
  std::vector<size_t> offset(factors.size(), 0);
  IndexOdometer odo(scope);
  for (size_t flat = 0; !odo.done(); odo.next(), ++flat) {
    double v = 1.0;
    for (size_t k = 0; k < factors.size(); ++k) {
      size_t off = 0;
      for (size_t o = 0; o < scope.size(); ++o) off += odo.indices()[o] * stride_in[k][o];
      v *= factors[k][off];
    }
    out[flat] = v;
  }
  return Factor(std::move(scope), std::move(out));
}

Factor Product(const Factor& a, const Factor& b) {
  const Factor pair[] = {a, b};
  return Product(std::span<const Factor>(pair));
}

Factor Marginalize(const Factor& f, std::string_view var_id) {
  auto pos = f.position(var_id);
  if (!pos) {
    Fail(ErrorKind::kStructural,
         "cannot marginalize '" + std::string(var_id) + "': not in scope");
  }
  std::vector<Variable> scope;
  for (size_t i = 0; i < f.scope().size(); ++i) {
    if (i != *pos) scope.push_back(f.scope()[i]);
  }
  const auto strides = Strides(f.scope());
  const size_t n = f.scope()[*pos].size();
  const size_t stride = strides[*pos];
  std::vector<double> out(ScopeSize(scope), 0.0);
  // Flat input index splits as (outer, k, inner) with inner < stride.
  for (size_t in = 0; in < f.size(); ++in) {
    const size_t inner = in % stride;
    const size_t outer = in / (stride * n);
    out[outer * stride + inner] += f[in];
  }
  return Factor(std::move(scope), std::move(out));
}

Factor MarginalizeTo(const Factor& f, std::span<const std::string> keep) {
  Factor g = f;
  for (const Variable& v : f.scope()) {
    if (std::find(keep.begin(), keep.end(), v.id) == keep.end()) g = Marginalize(g, v.id);
  }
  // Reorder to the requested order.
  std::vector<Variable> scope;
  for (const auto& id : keep) {
    auto pos = g.position(id);
    if (!pos) Fail(ErrorKind::kStructural, "cannot keep '" + id + "': not in scope");
    scope.push_back(g.scope()[*pos]);
  }
  const auto strides = Strides(g.scope());
  std::vector<double> out(g.size());
  IndexOdometer odo(scope);
  for (size_t flat = 0; !odo.done(); odo.next(), ++flat) {
    size_t src = 0;
    for (size_t i = 0; i < scope.size(); ++i) {
      src += odo.indices()[i] * strides[*g.position(scope[i].id)];
    }
    out[flat] = g[src];
  }
  return Factor(std::move(scope), std::move(out));
}

Factor Condition(const Factor& f, const Assignment& a) {
  if (a.empty()) return f;
  std::vector<std::optional<size_t>> fixed(f.scope().size());
  for (const auto& [id, label] : a) {
    auto pos = f.position(id);
    if (!pos) {
      Fail(ErrorKind::kStructural, "cannot condition on '" + id + "': not in scope");
    }
    fixed[*pos] = f.scope()[*pos].domain->index_of(label);
  }
  std::vector<Variable> scope;
  for (size_t i = 0; i < f.scope().size(); ++i) {
    if (!fixed[i]) scope.push_back(f.scope()[i]);
  }
  const auto strides = Strides(f.scope());
  size_t base = 0;
  for (size_t i = 0; i < fixed.size(); ++i) {
    if (fixed[i]) base += *fixed[i] * strides[i];
  }
  std::vector<double> out(ScopeSize(scope));
  IndexOdometer odo(scope);
  for (size_t flat = 0; !odo.done(); odo.next(), ++flat) {
    size_t src = base;
    for (size_t i = 0, j = 0; i < fixed.size(); ++i) {
      if (!fixed[i]) src += odo.indices()[j++] * strides[i];
    }
    out[flat] = f[src];
  }
  return Factor(std::move(scope), std::move(out));
}

Categorical Normalize(const Factor& f) {
  if (f.scope().size() != 1) {
    Fail(ErrorKind::kStructural, "normalize needs a single-variable factor, got " +
                                     std::to_string(f.scope().size()));
  }
  const double z = f.total();
  if (!(z > kZeroEvidence)) {
    Fail(ErrorKind::kZeroEvidence,
         "evidence has probability " + FormatNumber(z) + " over '" + f.scope()[0].id + "'");
  }
  std::vector<double> p(f.values());
  for (double& x : p) x /= z;
  return Categorical(f.scope()[0].domain, std::move(p));
}

}  // namespace maidvote
