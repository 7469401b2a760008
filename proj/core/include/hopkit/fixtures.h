// Copyright 2026 The hopkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bundled self-check fixtures: hand-traced shortcut verdicts, metric values
// and reduction recomputations, each with its expected result.

#ifndef HOPKIT_FIXTURES_H_
#define HOPKIT_FIXTURES_H_

#include <string>
#include <string_view>
#include <vector>

#include "hopkit/text.h"

namespace hopkit::fixtures {

struct FixtureResult {
  std::string group;  // shortcut, shortcut_rule, answer, joint, drop, aggregate
  std::string name;
  bool passed = false;
  std::string detail;  // what differed, empty on success
};

std::string_view BundledFixtures();

// Runs every fixture of a fixture document. Throws hopkit::Error for a
// malformed document; mismatches are reported as failed results.
std::vector<FixtureResult> RunFixtures(std::string_view json_text,
                                       const WordSet& stopwords = DefaultStopwords());

}  // namespace hopkit::fixtures

#endif  // HOPKIT_FIXTURES_H_
