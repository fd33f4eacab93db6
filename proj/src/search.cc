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

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "maidvote/analysis.h"

namespace maidvote {

namespace {

constexpr const char* kLib = "lib";
constexpr const char* kCon = "con";

class Draw {
 public:
  Draw(uint64_t seed, uint64_t index) {
    std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                      static_cast<uint32_t>(index), static_cast<uint32_t>(index >> 32)};
    rng_.seed(seq);
  }

  size_t below(size_t n) { return static_cast<size_t>(rng_() % n); }
  double pick(const std::vector<double>& grid) { return grid[below(grid.size())]; }

  // Weights drawn from `grid`, rescaled to a distribution.
  std::vector<double> distribution(const std::vector<double>& grid, size_t n) {
    std::vector<double> w(n);
    for (double& x : w) x = pick(grid);
    double z = std::accumulate(w.begin(), w.end(), 0.0);
    if (z <= 0.0) {
      w[below(n)] = 1.0;
      z = 1.0;
    }
    for (double& x : w) x /= z;
    return w;
  }

 private:
  std::mt19937_64 rng_;
};

std::vector<double> NoiseBand(double center, double width) {
  std::vector<double> out;
  for (double e = -width; e <= width; e += 1.0) out.push_back(center + e);
  return out;
}

void CheckConfig(const SearchConfig& cfg) {
  if (cfg.prior_grid.empty() || cfg.cpt_grid.empty() || cfg.center_grid.empty() ||
      cfg.noise_grid.empty() || cfg.reputation_grid.empty()) {
    Fail(ErrorKind::kInput, "search grids must be nonempty");
  }
  if (cfg.min_messages < 2 || cfg.max_messages < cfg.min_messages) {
    Fail(ErrorKind::kInput, "search needs 2 <= min_messages <= max_messages");
  }
  for (double r : cfg.reputation_grid) {
    if (!(r > 0.0)) Fail(ErrorKind::kInput, "reputation costs must be positive");
  }
  for (double n : cfg.noise_grid) {
    if (n < 0.0 || n != static_cast<double>(static_cast<int>(n))) {
      Fail(ErrorKind::kInput, "noise widths must be non-negative integers");
    }
  }
}

}  // namespace

std::optional<Scenario> AnomalousCandidate(const SearchConfig& cfg, size_t index) {
  CheckConfig(cfg);
  Draw draw(cfg.seed, index);
  ScenarioTables t;
  t.name = "anomalous-" + std::to_string(cfg.seed) + "-" + std::to_string(index);
  t.positions = {kLib, kCon};
  const size_t nd = cfg.min_messages + draw.below(cfg.max_messages - cfg.min_messages + 1);
  for (size_t d = 0; d < nd; ++d) t.messages.push_back("m" + std::to_string(d + 1));

  t.prior_ti = draw.distribution(cfg.prior_grid, 2);
  t.prior_tk = draw.distribution(cfg.prior_grid, 2);
  t.prior_tj = draw.distribution(cfg.prior_grid, 2);
  for (size_t a = 0; a < 2; ++a) t.d_given_t.push_back(draw.distribution(cfg.cpt_grid, nd));

  // Same-position pairs are similar, mixed pairs dissimilar, so every
  // message informative for one position cuts the other way for the other.
  const double same_lib = draw.pick(cfg.center_grid);
  const double same_con = draw.pick(cfg.center_grid);
  const double cross = -draw.pick(cfg.center_grid);
  const double width = draw.pick(cfg.noise_grid);
  const std::vector<std::vector<double>> bands = {
      NoiseBand(same_lib, width), NoiseBand(cross, width), NoiseBand(same_con, width)};
  std::set<double> values;
  for (const auto& band : bands) values.insert(band.begin(), band.end());
  t.s_values.assign(values.begin(), values.end());
  auto row = [&](const std::vector<double>& band) {
    std::vector<double> p(t.s_values.size(), 0.0);
    for (double v : band) {
      const auto it = std::lower_bound(t.s_values.begin(), t.s_values.end(), v);
      p[static_cast<size_t>(it - t.s_values.begin())] += 1.0 / static_cast<double>(band.size());
    }
    return p;
  };
  t.s_given_tt = {{row(bands[0]), row(bands[1])}, {row(bands[1]), row(bands[2])}};

  t.y_values = {0, 1};
  for (double s : t.s_values) t.utility.push_back({0.0, s});
  t.reputation.assign(nd, std::vector<double>(nd, 0.0));
  for (size_t b = 0; b < nd; ++b) {
    for (size_t c = 0; c < nd; ++c) {
      if (b != c) t.reputation[b][c] = draw.pick(cfg.reputation_grid);
    }
  }
  try {
    return MakeScenario(t);
  } catch (const Error&) {
    return std::nullopt;
  }
}

SearchResult FindAnomalousScenario(const SearchConfig& cfg) {
  CheckConfig(cfg);
  SearchResult result;
  for (size_t index = 0; index < cfg.budget; ++index) {
    ++result.candidates_tried;
    auto sc = AnomalousCandidate(cfg, index);
    if (!sc) continue;
    PunditContext ctx;
    ctx.known_tj = cfg.aligned ? kLib : kCon;
    if (cfg.pundit_knows_ti) ctx.assumed_ti = kLib;

    // Rare messages first.
    std::vector<size_t> order(sc->d_domain->size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return MessageProbability(*sc, a) < MessageProbability(*sc, b);
    });
    for (size_t b : order) {
      if (MessageProbability(*sc, b) <= kZeroEvidence) continue;
      const std::string bn = sc->d_domain->label(b).name;
      VerificationReport rep;
      try {
        rep = VerifyAnomalous(*sc, ctx, kLib, bn);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kZeroEvidence) throw;
        continue;
      }
      if (rep.verdict == Verdict::kVerified && rep.margin("trusting_margin") >= cfg.min_margin &&
          rep.margin("suspicious_margin") >= cfg.min_margin) {
        result.witness = AnomalousWitness{std::move(*sc), ctx, kLib, bn, std::move(rep), index};
        return result;
      }
    }
  }
  return result;
}

}  // namespace maidvote
