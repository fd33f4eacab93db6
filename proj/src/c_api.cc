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

#include "maidvote/maidvote.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "maidvote/analysis.h"
#include "maidvote/scenario_io.h"

struct mv_scenario {
  maidvote::ScenarioFile file;
};

namespace {

thread_local std::string last_error;

mv_status StatusOf(maidvote::ErrorKind k) {
  using maidvote::ErrorKind;
  switch (k) {
    case ErrorKind::kStructural: return MV_ERR_STRUCTURAL;
    case ErrorKind::kInput: return MV_ERR_INPUT;
    case ErrorKind::kZeroEvidence: return MV_ERR_ZERO_EVIDENCE;
    case ErrorKind::kSpecification: return MV_ERR_SPECIFICATION;
    case ErrorKind::kResource: return MV_ERR_RESOURCE;
    case ErrorKind::kParse: return MV_ERR_PARSE;
  }
  return MV_ERR_INTERNAL;
}

template <typename F>
mv_status Guard(F&& f) {
  last_error.clear();
  try {
    f();
    return MV_OK;
  } catch (const maidvote::Error& e) {
    last_error = e.what();
    return StatusOf(e.kind());
  } catch (const std::exception& e) {
    last_error = e.what();
    return MV_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return MV_ERR_INTERNAL;
  }
}

void Require(bool ok, const char* what) {
  if (!ok) maidvote::Fail(maidvote::ErrorKind::kInput, what);
}

char* Duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void CopyOut(const maidvote::Categorical& c, double* out, size_t n) {
  Require(out != nullptr, "output buffer is null");
  if (n != c.size()) {
    maidvote::Fail(maidvote::ErrorKind::kInput, "output buffer has " + std::to_string(n) +
                                                    " entries, expected " +
                                                    std::to_string(c.size()));
  }
  for (size_t i = 0; i < n; ++i) out[i] = c[i];
}

}  // namespace

extern "C" {

const char* mv_version(void) { return "1.0.0"; }

const char* mv_status_name(mv_status status) {
  switch (status) {
    case MV_OK: return "ok";
    case MV_ERR_STRUCTURAL: return "structural";
    case MV_ERR_INPUT: return "input";
    case MV_ERR_ZERO_EVIDENCE: return "zero-evidence";
    case MV_ERR_SPECIFICATION: return "specification";
    case MV_ERR_RESOURCE: return "resource";
    case MV_ERR_PARSE: return "parse";
    case MV_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* mv_last_error(void) { return last_error.c_str(); }

void mv_string_free(char* s) { std::free(s); }

mv_status mv_scenario_load(const char* name_or_path, mv_scenario** out) {
  return Guard([&] {
    Require(name_or_path && out, "null argument");
    *out = nullptr;
    *out = new mv_scenario{maidvote::ResolveScenario(name_or_path)};
  });
}

mv_status mv_scenario_parse(const char* json_text, mv_scenario** out) {
  return Guard([&] {
    Require(json_text && out, "null argument");
    *out = nullptr;
    *out = new mv_scenario{maidvote::ParseScenario(json_text, "<memory>")};
  });
}

void mv_scenario_free(mv_scenario* sc) { delete sc; }

mv_status mv_scenario_to_json(const mv_scenario* sc, char** out) {
  return Guard([&] {
    Require(sc && out, "null argument");
    *out = Duplicate(maidvote::SerializeScenario(sc->file));
  });
}

size_t mv_scenario_position_count(const mv_scenario* sc) {
  return sc ? sc->file.scenario.t_domain->size() : 0;
}

size_t mv_scenario_message_count(const mv_scenario* sc) {
  return sc ? sc->file.scenario.d_domain->size() : 0;
}

size_t mv_scenario_support_count(const mv_scenario* sc) {
  return sc ? sc->file.scenario.y_domain->size() : 0;
}

const char* mv_scenario_position(const mv_scenario* sc, size_t i) {
  if (!sc || i >= sc->file.scenario.t_domain->size()) return nullptr;
  return sc->file.scenario.t_domain->label(i).name.c_str();
}

const char* mv_scenario_message(const mv_scenario* sc, size_t i) {
  if (!sc || i >= sc->file.scenario.d_domain->size()) return nullptr;
  return sc->file.scenario.d_domain->label(i).name.c_str();
}

mv_status mv_posterior_tk(const mv_scenario* sc, const char* d, double* out, size_t n) {
  return Guard([&] {
    Require(sc && d, "null argument");
    CopyOut(maidvote::PosteriorTkGivenD(sc->file.scenario, d), out, n);
  });
}

mv_status mv_vote_trusting(const mv_scenario* sc, const char* t_i, const char* d, double* out,
                           size_t n) {
  return Guard([&] {
    Require(sc && t_i && d, "null argument");
    CopyOut(maidvote::VoteDistTrusting(sc->file.scenario, t_i, d), out, n);
  });
}

mv_status mv_vote_suspicious(const mv_scenario* sc, const char* t_i, const char* b, double* out,
                             size_t n) {
  return Guard([&] {
    Require(sc && t_i && b, "null argument");
    CopyOut(maidvote::VoteDistSuspicious(sc->file.scenario, sc->file.pundit, t_i, b), out, n);
  });
}

mv_status mv_verify_anomalous(const mv_scenario* sc, const char* t_i, const char* b,
                              mv_verdict* verdict, double* trusting_margin,
                              double* suspicious_margin) {
  return Guard([&] {
    Require(sc && t_i && b, "null argument");
    const auto r = maidvote::VerifyAnomalous(sc->file.scenario, sc->file.pundit, t_i, b);
    if (verdict) {
      *verdict = r.verdict == maidvote::Verdict::kVerified   ? MV_VERIFIED
                 : r.verdict == maidvote::Verdict::kViolated ? MV_VIOLATED
                                                             : MV_INAPPLICABLE;
    }
    if (trusting_margin) *trusting_margin = r.margin("trusting_margin");
    if (suspicious_margin) *suspicious_margin = r.margin("suspicious_margin");
  });
}

int mv_cli_run(int argc, const char* const* argv, char** out, char** err) {
  std::vector<std::string> args;
  for (int i = 0; i < argc; ++i) args.emplace_back(argv[i] ? argv[i] : "");
  std::ostringstream o, e;
  int code = maidvote::kExitUsage;
  try {
    code = maidvote::RunCli(args, o, e);
  } catch (const std::exception& ex) {
    e << "error: " << ex.what() << "\n";
  }
  if (out) *out = Duplicate(o.str());
  if (err) *err = Duplicate(e.str());
  return code;
}

}  // extern "C"
