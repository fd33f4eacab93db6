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

#include "cli.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "maidvote/analysis.h"
#include "maidvote/scenario_io.h"
#include "report.h"

namespace maidvote {

namespace {

struct Options {
  std::string scenario;
  std::string format = "table";
  std::string tj;
  std::string pundit_ti;

  std::string model = "trusting";
  std::string query;
  std::vector<std::string> evidence;
  std::string agent = "voter";

  std::string claim;
  std::string ti, d, b, t, h;
  std::optional<double> alpha;

  uint64_t seed = SearchConfig{}.seed;
  size_t budget = SearchConfig{}.budget;
  size_t messages = 0;
  bool aligned = false;
  std::string save;
};

OutputFormat ParseFormat(const std::string& f) {
  if (f == "json") return OutputFormat::kJson;
  if (f == "csv") return OutputFormat::kCsv;
  return OutputFormat::kTable;
}

std::vector<std::string> Labels(const Domain& d) {
  std::vector<std::string> out;
  for (const auto& l : d.labels()) out.push_back(l.name);
  return out;
}

// A single label if given, otherwise every label of the domain.
std::vector<std::string> OneOrAll(const std::string& given, const Domain& d) {
  if (given.empty()) return Labels(d);
  d.index_of(given);
  return {given};
}

PunditContext Context(const ScenarioFile& file, const Options& o) {
  PunditContext ctx = file.pundit;
  if (!o.tj.empty()) ctx.known_tj = o.tj;
  if (!o.pundit_ti.empty()) ctx.assumed_ti = o.pundit_ti;
  if (ctx.known_tj) file.scenario.t_domain->index_of(*ctx.known_tj);
  if (ctx.assumed_ti) file.scenario.t_domain->index_of(*ctx.assumed_ti);
  return ctx;
}

ModelKind ParseModel(const std::string& m) {
  if (m == "pundit") return ModelKind::kBiasedPundit;
  if (m == "suspicious") return ModelKind::kSuspiciousVoter;
  return ModelKind::kTrustingVoter;
}

void AddDistribution(ReportDocument* doc, const std::string& title, const Categorical& c) {
  Table& t = doc->AddTable(title, {"label", "probability"});
  for (size_t i = 0; i < c.size(); ++i) t.rows.push_back({c.domain()->label(i).name, c[i]});
  if (c.domain()->ordered_numeric()) {
    doc->AddTable("expectation", {"quantity", "value"}).rows.push_back({"E", Expectation(c)});
  }
}

void AddPunditTables(ReportDocument* doc, const Scenario& sc, const PunditContext& ctx) {
  const auto msgs = Labels(*sc.d_domain);
  const Factor m = PunditMarginal(sc, ctx);
  std::vector<std::string> cols = {"C_k"};
  cols.insert(cols.end(), msgs.begin(), msgs.end());
  Table& t = doc->AddTable("pundit marginal P(B_k | C_k)", cols);
  for (size_t c = 0; c < msgs.size(); ++c) {
    std::vector<Cell> row = {msgs[c]};
    for (size_t b = 0; b < msgs.size(); ++b) row.push_back(m[c * msgs.size() + b]);
    t.rows.push_back(std::move(row));
  }
}

int CmdValidate(const ScenarioFile& file, const Options& o, ReportDocument* doc) {
  const Scenario& sc = file.scenario;
  Table& info = doc->AddTable("scenario", {"quantity", "value"});
  info.rows.push_back({"name", sc.name});
  info.rows.push_back({"positions", static_cast<double>(sc.t_domain->size())});
  info.rows.push_back({"messages", static_cast<double>(sc.d_domain->size())});
  info.rows.push_back({"similarity labels", static_cast<double>(sc.s_domain->size())});
  info.rows.push_back({"support labels", static_cast<double>(sc.y_domain->size())});
  const PunditContext ctx = Context(file, o);
  Table models{"models", {"model", "chance", "decisions", "utilities", "findings"}, {}};
  Table findings{"findings", {"model", "node", "message"}, {}};
  for (ModelKind k :
       {ModelKind::kTrustingVoter, ModelKind::kBiasedPundit, ModelKind::kSuspiciousVoter}) {
    const Maid m = BuildMaid(sc, k, ctx);
    const auto f = Validate(m);
    models.rows.push_back({ModelKindName(k), static_cast<double>(m.chance.size()),
                           static_cast<double>(m.decisions.size()),
                           static_cast<double>(m.utilities.size()),
                           static_cast<double>(f.size())});
    for (const auto& x : f) findings.rows.push_back({ModelKindName(k), x.node, x.message});
  }
  const bool clean = findings.rows.empty();
  doc->AddTable(models.title, models.columns).rows = models.rows;
  doc->AddTable(findings.title, findings.columns).rows = findings.rows;
  return clean ? kExitOk : kExitViolated;
}

int CmdInfer(const ScenarioFile& file, const Options& o, ReportDocument* doc) {
  const Scenario& sc = file.scenario;
  Assignment ev;
  for (const auto& e : o.evidence) {
    const auto eq = e.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == e.size()) {
      Fail(ErrorKind::kInput, "evidence '" + e + "' is not of the form VAR=LABEL");
    }
    ev[e.substr(0, eq)] = e.substr(eq + 1);
  }
  const BayesNet bn = Compile(BuildMaid(sc, ParseModel(o.model), Context(file, o)));
  for (const auto& [var, label] : ev) {
    if (!bn.has(var)) Fail(ErrorKind::kInput, "unknown evidence variable '" + var + "'");
    bn.node(var).domain->index_of(label);
  }
  AddDistribution(doc, "P(" + o.query + " | evidence)", Infer(bn, o.query, ev));
  return kExitOk;
}

int CmdPolicy(const ScenarioFile& file, const Options& o, ReportDocument* doc) {
  const Scenario& sc = file.scenario;
  if (o.agent == "voter") {
    const PolicyTable p = TrustingPolicy(sc);
    Table& t = doc->AddTable("policy Y_ik | S_ik", {"S_ik", "Y_ik"});
    for (size_t r = 0; r < p.rows(); ++r) {
      t.rows.push_back({sc.s_domain->label(r).name, sc.y_domain->label(p.choice(r)).name});
    }
    doc->AddTable("properties", {"quantity", "value"})
        .rows.push_back({"monotone", std::string(CheckMonotonePolicy(p) ? "true" : "false")});
    return kExitOk;
  }
  const PunditContext ctx = Context(file, o);
  const Factor p = PunditPolicy(sc, ctx);
  const size_t nd = sc.d_domain->size(), ns = sc.s_domain->size();
  Table& t = doc->AddTable("policy B_k | C_k, S_jk", {"C_k", "S_jk", "B_k"});
  for (size_t c = 0; c < nd; ++c) {
    for (size_t s = 0; s < ns; ++s) {
      for (size_t b = 0; b < nd; ++b) {
        if (p[(c * ns + s) * nd + b] == 1.0) {
          t.rows.push_back({sc.d_domain->label(c).name, sc.s_domain->label(s).name,
                            sc.d_domain->label(b).name});
        }
      }
    }
  }
  AddPunditTables(doc, sc, ctx);
  return kExitOk;
}

int CmdClassify(const ScenarioFile& file, const Options& o, ReportDocument* doc) {
  const Scenario& sc = file.scenario;
  Table kinds{"classification", {"T_i", "D_k", "kind"}, {}};
  Table shifts{"shift", {"T_i", "D_k", "S", "delta"}, {}};
  Table triples{"triples", {"T_i", "D_k", "lower", "upper", "delta"}, {}};
  for (const auto& ti : OneOrAll(o.ti, *sc.t_domain)) {
    for (const auto& d : OneOrAll(o.d, *sc.d_domain)) {
      if (o.d.empty() && MessageProbability(sc, sc.d_domain->index_of(d)) <= kZeroEvidence) {
        continue;
      }
      const InfoClassification c = ClassifyInformation(sc, ti, d);
      kinds.rows.push_back({ti, d, std::string(InfoKindName(c.kind))});
      for (size_t s = 0; s < c.delta.size(); ++s) {
        shifts.rows.push_back({ti, d, sc.s_domain->label(s).name, c.delta[s]});
      }
      for (const auto& m : c.triples) {
        triples.rows.push_back({ti, d, sc.s_domain->label(m.lower).name,
                                sc.s_domain->label(m.upper).name, m.delta});
      }
    }
  }
  for (Table* t : {&kinds, &shifts, &triples}) doc->AddTable(t->title, t->columns).rows = t->rows;
  return kExitOk;
}

Categorical ParseMixture(const Scenario& sc, const std::string& text) {
  std::vector<double> p(sc.d_domain->size(), 0.0);
  size_t start = 0;
  while (start <= text.size()) {
    const size_t end = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, end - start);
    const size_t eq = item.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorKind::kInput, "mixture entry '" + item + "' is not of the form LABEL=P");
    }
    try {
      size_t used = 0;
      const std::string num = item.substr(eq + 1);
      p[sc.d_domain->index_of(item.substr(0, eq))] += std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument(num);
    } catch (const std::logic_error&) {
      Fail(ErrorKind::kInput, "mixture entry '" + item + "' has a bad probability");
    }
    start = end + 1;
  }
  return Categorical(sc.d_domain, std::move(p));
}

int CmdVerify(const ScenarioFile& file, const Options& o, ReportDocument* doc) {
  const Scenario& sc = file.scenario;
  const std::string& claim = o.claim;
  if (claim == kClaimThm1) {
    for (const auto& ti : OneOrAll(o.ti, *sc.t_domain)) {
      for (const auto& d : OneOrAll(o.d, *sc.d_domain)) doc->AddReport(VerifyTheorem1(sc, ti, d));
    }
  } else if (claim == kClaimProp1) {
    doc->AddReport(VerifyProp1(sc, Context(file, o)));
  } else if (claim == kClaimProp2) {
    if (o.alpha) {
      const size_t nd = sc.d_domain->size();
      const double a = *o.alpha;
      if (!(a >= 0.0 && a <= 1.0) || nd < 2) {
        Fail(ErrorKind::kInput, "--alpha must lie in [0, 1] and needs two or more messages");
      }
      std::vector<double> m(nd * nd, (1.0 - a) / static_cast<double>(nd - 1));
      for (size_t c = 0; c < nd; ++c) m[c * nd + c] = a;
      doc->AddReport(VerifyProp2(
          sc, Factor({{vars::kCk, sc.d_domain}, {vars::kBk, sc.d_domain}}, std::move(m))));
    } else {
      doc->AddReport(VerifyProp2(sc, Context(file, o)));
    }
  } else if (claim == kClaimProp3) {
    for (const auto& t : OneOrAll(o.t, *sc.t_domain)) doc->AddReport(VerifyProp3(sc, t));
  } else if (claim == kClaimCorollary) {
    if (o.ti.empty() || o.h.empty()) Fail(ErrorKind::kInput, "cor needs --ti and --mixture");
    doc->AddReport(VerifyCorollary(sc, o.ti, ParseMixture(sc, o.h)));
  } else {
    std::string ti = o.ti, b = o.b;
    if (file.witness) {
      if (ti.empty()) ti = file.witness->t_i;
      if (b.empty()) b = file.witness->b;
    }
    if (ti.empty() || b.empty()) {
      Fail(ErrorKind::kInput, "thm2 needs --ti and --b (the scenario names no witness)");
    }
    doc->AddReport(VerifyAnomalous(sc, Context(file, o), ti, b));
  }
  return doc->any_violated() ? kExitViolated : kExitOk;
}

int CmdSearch(const Options& o, ReportDocument* doc) {
  SearchConfig cfg;
  cfg.seed = o.seed;
  cfg.budget = o.budget;
  cfg.aligned = o.aligned;
  if (o.messages) cfg.min_messages = cfg.max_messages = o.messages;
  const SearchResult r = FindAnomalousScenario(cfg);
  Table& t = doc->AddTable("search", {"quantity", "value"});
  t.rows.push_back({"seed", std::to_string(cfg.seed)});
  t.rows.push_back({"budget", static_cast<double>(cfg.budget)});
  t.rows.push_back({"aligned", std::string(cfg.aligned ? "true" : "false")});
  t.rows.push_back({"candidates_tried", static_cast<double>(r.candidates_tried)});
  t.rows.push_back({"found", std::string(r.witness ? "true" : "false")});
  if (!r.witness) return kExitViolated;
  const AnomalousWitness& w = *r.witness;
  t.rows.push_back({"index", static_cast<double>(w.index)});
  t.rows.push_back({"t_i", w.t_i});
  t.rows.push_back({"b", w.b});
  t.rows.push_back({"known_tj", w.context.known_tj.value_or("")});
  doc->AddReport(w.report);
  if (!o.save.empty()) {
    Scenario sc = w.scenario;
    sc.name = std::filesystem::path(o.save).stem().string();
    ScenarioFile file{std::move(sc),
                      "Anomalous-update witness from search-anomalous --seed " +
                          std::to_string(cfg.seed) + ", candidate " + std::to_string(w.index) +
                          ". The voter and pundit hold opposed positions and utility is s*y.",
                      w.context, ScenarioWitness{w.t_i, w.b}};
    SaveScenarioFile(o.save, file);
    t.rows.push_back({"saved", o.save});
  }
  return kExitOk;
}

int CmdDemo(const Options& o, ReportDocument* doc) {
  std::vector<std::string> names = BundledScenarioNames();
  if (!o.scenario.empty()) names = {o.scenario};
  for (const auto& name : names) {
    const ScenarioFile file = ResolveScenario(name);
    const Scenario& sc = file.scenario;
    const auto pos = Labels(*sc.t_domain), msgs = Labels(*sc.d_domain);
    std::vector<std::string> cols = {"D_k"};
    cols.insert(cols.end(), pos.begin(), pos.end());
    Table& post = doc->AddTable(sc.name + ": P(T_k | D_k)", cols);
    post.rows.push_back({std::string("(prior)")});
    for (double p : sc.prior_tk.probabilities()) post.rows.back().push_back(p);
    for (size_t d = 0; d < msgs.size(); ++d) {
      if (MessageProbability(sc, d) <= kZeroEvidence) continue;
      std::vector<Cell> row = {msgs[d]};
      const Categorical p_tk = PosteriorTkGivenD(sc, msgs[d]);
      for (double p : p_tk.probabilities()) row.push_back(p);
      post.rows.push_back(std::move(row));
    }

    std::vector<std::string> vcols = {"T_i", "(no message)"};
    std::vector<size_t> reach;
    for (size_t d = 0; d < msgs.size(); ++d) {
      if (MessageProbability(sc, d) > kZeroEvidence) {
        reach.push_back(d);
        vcols.push_back(msgs[d]);
      }
    }
    Table& vote = doc->AddTable(sc.name + ": trusting E[Y_ik | T_i, D_k]", vcols);
    Table& kind = doc->AddTable(sc.name + ": information kind", vcols);
    for (const auto& ti : pos) {
      std::vector<Cell> vr = {ti, Expectation(VoteGivenBelief(sc, ti, sc.prior_tk))};
      std::vector<Cell> kr = {ti, std::string("-")};
      for (size_t d : reach) {
        vr.push_back(Expectation(VoteDistTrusting(sc, ti, msgs[d])));
        kr.push_back(std::string(InfoKindName(ClassifyInformation(sc, ti, msgs[d]).kind)));
      }
      vote.rows.push_back(std::move(vr));
      kind.rows.push_back(std::move(kr));
    }
    AddPunditTables(doc, sc, file.pundit);
    if (file.witness) {
      doc->AddReport(VerifyAnomalous(sc, file.pundit, file.witness->t_i, file.witness->b));
    }
  }
  return kExitOk;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact inference and claim checks for voter/pundit influence diagrams", "maidvote"};
  app.require_subcommand(1);
  Options o;
  const auto formats = CLI::IsMember({"table", "json", "csv"});

  auto common = [&](CLI::App* sub, bool need_scenario) {
    auto* opt = sub->add_option("--scenario", o.scenario, "Scenario file or bundled name");
    if (need_scenario) opt->required();
    sub->add_option("--format", o.format, "Output format")->check(formats);
  };
  auto pundit = [&](CLI::App* sub) {
    sub->add_option("--tj", o.tj, "Pundit position known to everyone");
    sub->add_option("--pundit-ti", o.pundit_ti, "Voter position the pundit plans against");
  };

  auto* validate = app.add_subcommand("validate", "Load a scenario and check its networks");
  common(validate, true);
  pundit(validate);

  auto* infer = app.add_subcommand("infer", "Exact posterior of one variable");
  common(infer, true);
  pundit(infer);
  infer->add_option("--model", o.model, "Network to compile")
      ->check(CLI::IsMember({"trusting", "pundit", "suspicious"}));
  infer->add_option("--query", o.query, "Variable to query")->required();
  infer->add_option("--evidence", o.evidence, "Observed value, VAR=LABEL (repeatable)");

  auto* policy = app.add_subcommand("policy", "Solved decision rule of one agent");
  common(policy, true);
  pundit(policy);
  policy->add_option("--agent", o.agent, "Agent")->check(CLI::IsMember({"voter", "pundit"}));

  auto* classify = app.add_subcommand("classify", "Classify messages as negative or positive");
  common(classify, true);
  classify->add_option("--ti", o.ti, "Voter position (default: all)");
  classify->add_option("--d", o.d, "Message (default: all reachable)");

  auto* verify = app.add_subcommand("verify", "Check one claim on a scenario");
  common(verify, true);
  pundit(verify);
  verify->add_option("--claim", o.claim, "Claim to check")
      ->required()
      ->check(CLI::IsMember({kClaimThm1, kClaimProp1, kClaimProp2, kClaimProp3, kClaimCorollary,
                             kClaimThm2}));
  verify->add_option("--ti", o.ti, "Voter position");
  verify->add_option("--d", o.d, "Message (thm1)");
  verify->add_option("--b", o.b, "Publication (thm2)");
  verify->add_option("--t", o.t, "Shared position (prop3)");
  verify->add_option("--mixture", o.h, "Mixture over messages, LABEL=P,... (cor)");
  verify->add_option("--alpha", o.alpha, "Use a constructed pundit marginal with this diagonal (prop2)");

  auto* search = app.add_subcommand("search-anomalous", "Seeded search for an anomalous update");
  search->add_option("--format", o.format, "Output format")->check(formats);
  search->add_option("--seed", o.seed, "Random seed");
  search->add_option("--budget", o.budget, "Number of candidates to try");
  search->add_option("--messages", o.messages, "Messages per candidate")
      ->check(CLI::Range(2, 16));
  search->add_flag("--aligned", o.aligned, "Voter and pundit share a position");
  search->add_option("--save", o.save, "Write the witness scenario to this path");

  auto* demo = app.add_subcommand("demo", "Walk through the bundled scenarios");
  common(demo, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  ReportDocument doc(chosen->get_name(), args);
  int code = kExitOk;
  try {
    if (chosen == search) {
      code = CmdSearch(o, &doc);
    } else if (chosen == demo) {
      code = CmdDemo(o, &doc);
    } else {
      const ScenarioFile file = ResolveScenario(o.scenario);
      if (chosen == validate) code = CmdValidate(file, o, &doc);
      if (chosen == infer) code = CmdInfer(file, o, &doc);
      if (chosen == policy) code = CmdPolicy(file, o, &doc);
      if (chosen == classify) code = CmdClassify(file, o, &doc);
      if (chosen == verify) code = CmdVerify(file, o, &doc);
    }
  } catch (const Error& e) {
    err << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  out << doc.Render(ParseFormat(o.format));
  return code;
}

}  // namespace maidvote
