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

#ifndef MAIDVOTE_SRC_BUNDLED_H_
#define MAIDVOTE_SRC_BUNDLED_H_

#include <span>
#include <string_view>

namespace maidvote::internal {

struct BundledScenario {
  std::string_view name;
  std::string_view text;
};

// Scenario files compiled in from data/scenarios, sorted by name.
std::span<const BundledScenario> BundledScenarios();

}  // namespace maidvote::internal

#endif  // MAIDVOTE_SRC_BUNDLED_H_
