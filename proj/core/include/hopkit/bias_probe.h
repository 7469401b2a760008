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

// Position-bias measurement, the word-overlap shortcut heuristic, and two
// non-neural baselines that exploit those shortcuts.

#ifndef HOPKIT_BIAS_PROBE_H_
#define HOPKIT_BIAS_PROBE_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hopkit/text.h"
#include "hopkit/types.h"

namespace hopkit::probe {

struct PositionCounts {
  std::size_t position0 = 0;
  std::size_t position_other = 0;

  std::size_t total() const { return position0 + position_other; }
  // Both fractions are 0 when there are no supporting facts.
  double fraction_position0() const;
  double fraction_other() const;
};

struct PositionBiasReport {
  PositionCounts overall;
  std::map<CoarseType, PositionCounts> by_type;
};

// Each supporting fact counts once: position0 if it is the paragraph's first
// sentence, position_other otherwise.
PositionBiasReport PositionHistogram(std::span<const QaExample> examples);

// Window width on each side of the answer span.
inline constexpr std::size_t kWindowWidth = 5;
// |O| >= kMinOverlap and |O|/|S| >= kMinOverlapRatio flags a shortcut.
inline constexpr std::size_t kMinOverlap = 2;
inline constexpr double kMinOverlapRatio = 0.65;

struct SurroundingWords {
  WordSet words;
  bool answer_found = false;
};

// Up to five tokens either side of the first answer occurrence, stopwords
// removed. The window stays inside the paragraph holding the answer but may
// cross its sentence boundaries.
SurroundingWords SurroundingWindow(const QaExample& example,
                                   const WordSet& stopwords);

struct ShortcutVerdict {
  std::string example_id;
  WordSet surrounding;  // S
  WordSet overlap;      // O
  std::optional<double> ratio;  // absent when S is empty
  bool answer_found = false;
  bool is_shortcut = false;
};

// The threshold rule on its own: |O| >= 2, |S| > 0 and |O|/|S| >= 0.65.
bool IsOverlapShortcut(std::size_t overlap_size, std::size_t surrounding_size);

ShortcutVerdict DetectOverlapShortcut(const QaExample& example,
                                      const WordSet& stopwords);

struct OverlapReport {
  std::size_t examined = 0;
  std::size_t flagged = 0;
  std::size_t answer_not_found = 0;
  std::vector<ShortcutVerdict> verdicts;
};

// Runs the detector over bridge questions (all questions when
// `bridge_only` is false).
OverlapReport ProbeOverlap(std::span<const QaExample> examples,
                           const WordSet& stopwords, bool bridge_only = true);

struct BaselinePrediction {
  std::vector<SupportingFact> sentences;
  bool hit = false;
};

// Predicts the first sentence of every gold paragraph.
BaselinePrediction BaselinePosition0(const QaExample& example);

// Predicts the context sentence with the largest token overlap with the
// question; ties go to the earlier paragraph, then the lower index.
BaselinePrediction BaselineOverlap(const QaExample& example,
                                   const WordSet& stopwords);

// A hit: the normalized answer occurs in one of the predicted sentences.
bool AnswerInSentences(const QaExample& example,
                       std::span<const SupportingFact> sentences);

struct BaselineRates {
  std::size_t examples = 0;
  std::size_t hits = 0;
  double hit_rate() const;
};

enum class BaselineKind { kPosition0, kOverlap };

BaselineRates RunBaseline(std::span<const QaExample> examples,
                          BaselineKind kind, const WordSet& stopwords);

}  // namespace hopkit::probe

#endif  // HOPKIT_BIAS_PROBE_H_
