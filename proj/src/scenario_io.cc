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

#include "maidvote/scenario_io.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "bundled.h"
#include "json.hpp"

namespace maidvote {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void Parse(const std::string& path, const std::string& what) const {
    Fail(ErrorKind::kParse, origin_ + ": " + path + ": " + what);
  }
  [[noreturn]] void Spec(const std::string& path, const std::string& what) const {
    Fail(ErrorKind::kSpecification, origin_ + ": " + path + ": " + what);
  }

  const json& Object(const json& j, const std::string& path,
                     std::initializer_list<const char*> allowed) const {
    if (!j.is_object()) Parse(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
      bool known = allowed.size() == 0;
      for (const char* a : allowed) known = known || key == a;
      if (!known) Parse(path, "unknown key '" + key + "'");
    }
    return j;
  }

  const json& Member(const json& obj, const char* key, const std::string& path) const {
    auto it = obj.find(key);
    if (it == obj.end()) Parse(path, std::string("missing key '") + key + "'");
    return *it;
  }

  double Number(const json& j, const std::string& path) const {
    if (!j.is_number()) Parse(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) Parse(path, "expected a finite number");
    return v;
  }

  std::string String(const json& j, const std::string& path) const {
    if (!j.is_string()) Parse(path, "expected a string");
    return j.get<std::string>();
  }

  std::vector<std::string> Strings(const json& j, const std::string& path) const {
    if (!j.is_array()) Parse(path, "expected an array of strings");
    std::vector<std::string> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(String(j[i], Index(path, i)));
    return out;
  }

  std::vector<double> Numbers(const json& j, const std::string& path) const {
    if (!j.is_array()) Parse(path, "expected an array of numbers");
    std::vector<double> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(Number(j[i], Index(path, i)));
    return out;
  }

  size_t Position(const std::vector<std::string>& labels, const std::string& key,
                  const std::string& path) const {
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == key) return i;
    }
    Parse(path, "unknown label '" + key + "'");
  }

  // Numeric labels are matched by value, so "4" and "4.0" both work.
  size_t Position(const std::vector<double>& values, const std::string& key,
                  const std::string& path) const {
    double v = 0.0;
    const char* end = key.data() + key.size();
    auto res = std::from_chars(key.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) Parse(path, "'" + key + "' is not a number");
    for (size_t i = 0; i < values.size(); ++i) {
      if (values[i] == v) return i;
    }
    Parse(path, "value " + key + " is not in the domain");
  }

  // Label -> probability map; absent labels are 0.
  template <typename Labels>
  std::vector<double> Distribution(const json& j, const Labels& labels,
                                   const std::string& path) const {
    Object(j, path, {});
    std::vector<double> p(labels.size(), 0.0);
    for (const auto& [key, value] : j.items()) {
      const std::string sub = path + "." + key;
      p[Position(labels, key, sub)] = Number(value, sub);
    }
    return p;
  }

  static std::string Index(const std::string& path, size_t i) {
    return path + "[" + std::to_string(i) + "]";
  }

 private:
  std::string origin_;
};

std::vector<double> SimilarityRow(const Reader& rd, const json& j, const std::vector<double>& s,
                                  const std::string& path) {
  if (j.is_object() && j.contains("uniform")) {
    rd.Object(j, path, {"uniform"});
    const auto support = rd.Numbers(j["uniform"], path + ".uniform");
    if (support.empty()) rd.Parse(path + ".uniform", "expected at least one value");
    std::vector<double> p(s.size(), 0.0);
    for (size_t i = 0; i < support.size(); ++i) {
      const std::string key = FormatNumber(support[i]);
      p[rd.Position(s, key, Reader::Index(path + ".uniform", i))] +=
          1.0 / static_cast<double>(support.size());
    }
    return p;
  }
  return rd.Distribution(j, s, path);
}

ScenarioFile Build(const json& root, const std::string& origin) {
  Reader rd(origin);
  rd.Object(root, "$", {"schema_version", "metadata", "domains", "priors", "cpts", "utility",
                        "reputation", "pundit"});
  const json& version = rd.Member(root, "schema_version", "$");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    rd.Parse("schema_version", "expected " + std::to_string(kSchemaVersion));
  }

  struct {
    std::string description;
    PunditContext pundit;
    std::optional<ScenarioWitness> witness;
  } file;
  ScenarioTables t;
  t.name = std::filesystem::path(origin).stem().string();
  if (root.contains("metadata")) {
    const json& meta = rd.Object(root["metadata"], "metadata", {"name", "description", "witness"});
    if (meta.contains("name")) t.name = rd.String(meta["name"], "metadata.name");
    if (meta.contains("description")) {
      file.description = rd.String(meta["description"], "metadata.description");
    }
    if (meta.contains("witness")) {
      const json& w = rd.Object(meta["witness"], "metadata.witness", {"t_i", "b"});
      file.witness = ScenarioWitness{
          rd.String(rd.Member(w, "t_i", "metadata.witness"), "metadata.witness.t_i"),
          rd.String(rd.Member(w, "b", "metadata.witness"), "metadata.witness.b")};
    }
  }

  const json& dom = rd.Object(rd.Member(root, "domains", "$"), "domains",
                              {"positions", "messages", "similarity", "support"});
  t.positions = rd.Strings(rd.Member(dom, "positions", "domains"), "domains.positions");
  t.messages = rd.Strings(rd.Member(dom, "messages", "domains"), "domains.messages");
  t.s_values = rd.Numbers(rd.Member(dom, "similarity", "domains"), "domains.similarity");
  t.y_values = rd.Numbers(rd.Member(dom, "support", "domains"), "domains.support");
  const size_t nt = t.positions.size(), nd = t.messages.size();
  const size_t ns = t.s_values.size(), ny = t.y_values.size();

  const json& pri = rd.Object(rd.Member(root, "priors", "$"), "priors", {"T_i", "T_k", "T_j"});
  t.prior_ti = rd.Distribution(rd.Member(pri, "T_i", "priors"), t.positions, "priors.T_i");
  t.prior_tk = rd.Distribution(rd.Member(pri, "T_k", "priors"), t.positions, "priors.T_k");
  t.prior_tj = rd.Distribution(rd.Member(pri, "T_j", "priors"), t.positions, "priors.T_j");

  const json& cpts = rd.Object(rd.Member(root, "cpts", "$"), "cpts", {"D_given_T", "S_given_T_T"});
  const json& dgt = rd.Object(rd.Member(cpts, "D_given_T", "cpts"), "cpts.D_given_T", {});
  t.d_given_t.assign(nt, {});
  std::vector<bool> seen(nt, false);
  for (const auto& [key, row] : dgt.items()) {
    const std::string path = "cpts.D_given_T." + key;
    const size_t a = rd.Position(t.positions, key, path);
    t.d_given_t[a] = rd.Distribution(row, t.messages, path);
    seen[a] = true;
  }
  for (size_t a = 0; a < nt; ++a) {
    if (!seen[a]) rd.Spec("cpts.D_given_T", "missing row for '" + t.positions[a] + "'");
  }

  const json& sgt = rd.Object(rd.Member(cpts, "S_given_T_T", "cpts"), "cpts.S_given_T_T", {});
  std::vector<std::vector<std::optional<std::vector<double>>>> given(
      nt, std::vector<std::optional<std::vector<double>>>(nt));
  for (const auto& [ka, inner] : sgt.items()) {
    const std::string pa = "cpts.S_given_T_T." + ka;
    const size_t a = rd.Position(t.positions, ka, pa);
    rd.Object(inner, pa, {});
    for (const auto& [kb, row] : inner.items()) {
      const std::string pb = pa + "." + kb;
      given[a][rd.Position(t.positions, kb, pb)] = SimilarityRow(rd, row, t.s_values, pb);
    }
  }
  t.s_given_tt.assign(nt, std::vector<std::vector<double>>(nt));
  for (size_t a = 0; a < nt; ++a) {
    for (size_t b = 0; b < nt; ++b) {
      const std::string path = "cpts.S_given_T_T." + t.positions[a] + "." + t.positions[b];
      const auto& ab = given[a][b];
      const auto& ba = given[b][a];
      if (!ab && !ba) rd.Spec(path, "missing (neither order of the pair is given)");
      if (ab && ba) {
        for (size_t s = 0; s < ns; ++s) {
          if (std::abs((*ab)[s] - (*ba)[s]) > kNormTolerance) {
            rd.Spec(path, "disagrees with the row for the reversed pair");
          }
        }
      }
      t.s_given_tt[a][b] = ab ? *ab : *ba;
    }
  }

  const json& util = rd.Object(rd.Member(root, "utility", "$"), "utility", {});
  t.utility.assign(ns, std::vector<double>(ny, std::nan("")));
  for (const auto& [ks, inner] : util.items()) {
    const std::string ps = "utility." + ks;
    const size_t s = rd.Position(t.s_values, ks, ps);
    rd.Object(inner, ps, {});
    for (const auto& [ky, v] : inner.items()) {
      const std::string py = ps + "." + ky;
      t.utility[s][rd.Position(t.y_values, ky, py)] = rd.Number(v, py);
    }
  }
  for (size_t s = 0; s < ns; ++s) {
    for (size_t y = 0; y < ny; ++y) {
      if (std::isnan(t.utility[s][y])) {
        rd.Spec("utility." + FormatNumber(t.s_values[s]) + "." + FormatNumber(t.y_values[y]),
                "missing entry");
      }
    }
  }

  const json& rep = rd.Object(rd.Member(root, "reputation", "$"), "reputation", {});
  t.reputation.assign(nd, std::vector<double>(nd, std::nan("")));
  for (size_t b = 0; b < nd; ++b) t.reputation[b][b] = 0.0;
  for (const auto& [kb, inner] : rep.items()) {
    const std::string pb = "reputation." + kb;
    const size_t b = rd.Position(t.messages, kb, pb);
    rd.Object(inner, pb, {});
    for (const auto& [kc, v] : inner.items()) {
      const std::string pc = pb + "." + kc;
      t.reputation[b][rd.Position(t.messages, kc, pc)] = rd.Number(v, pc);
    }
  }
  for (size_t b = 0; b < nd; ++b) {
    for (size_t c = 0; c < nd; ++c) {
      if (std::isnan(t.reputation[b][c])) {
        rd.Spec("reputation." + t.messages[b] + "." + t.messages[c], "missing entry");
      }
    }
  }

  if (root.contains("pundit")) {
    const json& p = rd.Object(root["pundit"], "pundit", {"known_tj", "voter_ti"});
    if (p.contains("known_tj")) {
      const std::string v = rd.String(p["known_tj"], "pundit.known_tj");
      rd.Position(t.positions, v, "pundit.known_tj");
      file.pundit.known_tj = v;
    }
    if (p.contains("voter_ti")) {
      const std::string v = rd.String(p["voter_ti"], "pundit.voter_ti");
      rd.Position(t.positions, v, "pundit.voter_ti");
      file.pundit.assumed_ti = v;
    }
  }
  if (file.witness) {
    rd.Position(t.positions, file.witness->t_i, "metadata.witness.t_i");
    rd.Position(t.messages, file.witness->b, "metadata.witness.b");
  }

  try {
    return ScenarioFile{MakeScenario(t), file.description, file.pundit, file.witness};
  } catch (const Error& e) {
    Fail(e.kind(), origin + ": " + e.what());
  }
}

ordered_json Map(const std::vector<std::string>& keys, const std::vector<double>& values,
                 bool skip_zero) {
  ordered_json out = ordered_json::object();
  for (size_t i = 0; i < keys.size(); ++i) {
    if (skip_zero && values[i] == 0.0) continue;
    out[keys[i]] = values[i];
  }
  return out;
}

std::vector<std::string> Names(const Domain& d) {
  std::vector<std::string> out;
  for (const auto& l : d.labels()) out.push_back(l.name);
  return out;
}

}  // namespace

ScenarioFile ParseScenario(std::string_view text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    Fail(ErrorKind::kParse, origin + ": " + e.what());
  }
  return Build(root, origin);
}

std::string SerializeScenario(const ScenarioFile& file) {
  const ScenarioTables t = ToTables(file.scenario);
  const Scenario& sc = file.scenario;
  const auto pos = Names(*sc.t_domain), msg = Names(*sc.d_domain);
  const auto sv = Names(*sc.s_domain), yv = Names(*sc.y_domain);

  ordered_json root;
  root["schema_version"] = kSchemaVersion;
  root["metadata"]["name"] = t.name;
  if (!file.description.empty()) root["metadata"]["description"] = file.description;
  if (file.witness) {
    root["metadata"]["witness"] = {{"t_i", file.witness->t_i}, {"b", file.witness->b}};
  }
  root["domains"] = {{"positions", t.positions},
                     {"messages", t.messages},
                     {"similarity", t.s_values},
                     {"support", t.y_values}};
  root["priors"] = {{"T_i", Map(pos, t.prior_ti, true)},
                    {"T_k", Map(pos, t.prior_tk, true)},
                    {"T_j", Map(pos, t.prior_tj, true)}};
  ordered_json dgt = ordered_json::object(), sgt = ordered_json::object();
  for (size_t a = 0; a < pos.size(); ++a) {
    dgt[pos[a]] = Map(msg, t.d_given_t[a], true);
    for (size_t b = 0; b < pos.size(); ++b) sgt[pos[a]][pos[b]] = Map(sv, t.s_given_tt[a][b], true);
  }
  root["cpts"] = {{"D_given_T", dgt}, {"S_given_T_T", sgt}};
  ordered_json util = ordered_json::object();
  for (size_t s = 0; s < sv.size(); ++s) util[sv[s]] = Map(yv, t.utility[s], false);
  root["utility"] = util;
  ordered_json rep = ordered_json::object();
  for (size_t b = 0; b < msg.size(); ++b) rep[msg[b]] = Map(msg, t.reputation[b], false);
  root["reputation"] = rep;
  if (file.pundit.known_tj || file.pundit.assumed_ti) {
    ordered_json p = ordered_json::object();
    if (file.pundit.known_tj) p["known_tj"] = *file.pundit.known_tj;
    if (file.pundit.assumed_ti) p["voter_ti"] = *file.pundit.assumed_ti;
    root["pundit"] = p;
  }
  return root.dump(2) + "\n";
}

ScenarioFile LoadScenarioFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kInput, "cannot read scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseScenario(buf.str(), path);
}

void SaveScenarioFile(const std::string& path, const ScenarioFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kInput, "cannot write scenario file '" + path + "'");
  out << SerializeScenario(file);
  if (!out) Fail(ErrorKind::kInput, "failed writing scenario file '" + path + "'");
}

std::vector<std::string> BundledScenarioNames() {
  std::vector<std::string> out;
  for (const auto& entry : internal::BundledScenarios()) out.emplace_back(entry.name);
  return out;
}

std::optional<std::string_view> BundledScenarioText(std::string_view name) {
  for (const auto& entry : internal::BundledScenarios()) {
    if (entry.name == name) return entry.text;
  }
  return std::nullopt;
}

ScenarioFile ResolveScenario(const std::string& name_or_path) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(name_or_path, ec)) return LoadScenarioFile(name_or_path);
  if (auto text = BundledScenarioText(name_or_path)) return ParseScenario(*text, name_or_path);
  std::string known;
  for (const auto& n : BundledScenarioNames()) known += (known.empty() ? "" : ", ") + n;
  Fail(ErrorKind::kInput, "no scenario file or bundled scenario named '" + name_or_path +
                              "' (bundled: " + known + ")");
}

}  // namespace maidvote
