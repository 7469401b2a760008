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

// Adversarial questions for 2Wiki-style data. Comparison questions have
// their operation inverted ("born first" -> "born later") with the gold
// answer flipped; bridge questions are pruned to their first-hop
// sub-question.

#ifndef HOPKIT_ADVERSARIAL_H_
#define HOPKIT_ADVERSARIAL_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hopkit/types.h"

namespace hopkit::adversarial {

enum class AnswerRule { kFlipCandidate, kFlipYesNo };

std::string_view ToString(AnswerRule rule);

struct LexiconEntry {
  std::string pattern;
  std::string replacement;
  AnswerRule rule = AnswerRule::kFlipCandidate;

  bool operator==(const LexiconEntry&) const = default;
};

// Phrase substitutions for comparison operations. The entry list is closed
// under inversion: for every pattern -> replacement there is exactly one
// replacement -> pattern, which makes inversion an involution.
class InversionLexicon {
 public:
  // Entries given in one direction only get their inverse added. Throws when
  // two entries disagree about a phrase's partner.
  explicit InversionLexicon(std::vector<LexiconEntry> entries);

  // {"entries": [{"pattern": "...", "replacement": "...",
  //               "rule": "flip_candidate"|"flip_yesno"}, ...]}
  static InversionLexicon Parse(std::string_view json_text);
  std::string Serialize() const;

  const std::vector<LexiconEntry>& entries() const { return entries_; }

 private:
  std::vector<LexiconEntry> entries_;
};

const InversionLexicon& DefaultLexicon();

// relation -> "Who is the father of #Subject?".
class RelationQuestionTemplates {
 public:
  static constexpr std::string_view kPlaceholder = "#Subject";

  explicit RelationQuestionTemplates(std::map<std::string, std::string> by_relation);

  static RelationQuestionTemplates Parse(std::string_view json_text);
  std::string Serialize() const;

  // Rendered question; `generic` reports use of "What is the <relation> of
  // #Subject?".
  std::string Render(std::string_view relation, std::string_view subject,
                     bool* generic = nullptr) const;
  bool Has(std::string_view relation) const;

 private:
  std::map<std::string, std::string> by_relation_;
};

const RelationQuestionTemplates& DefaultRelationTemplates();

// Why an example produced no adversarial counterpart.
enum class SkipReason {
  kNoLexiconMatch,
  kCandidatesNotRecovered,
  kGoldNotCandidate,
  kRuleMismatch,
  kNotInvolutive,
  kTripleVerificationFailed,
  kNoEvidence,
  kMultipleEvidenceSets,
  kNoSubjectInQuestion,
  kRuleNotSelected,
};

std::string_view ToString(SkipReason reason);

struct Skip {
  std::string example_id;
  SkipReason reason;
};

template <typename T>
using Outcome = std::variant<T, SkipReason>;

// Returns the candidate pair of a "..., A or B?" question, matched against
// the gold answer when the tail has several " or " splits; falls back to
// evidence-triple subjects mentioned in the question.
std::optional<std::pair<std::string, std::string>> RecoverCandidates(
    const QaExample& example);

struct InvertOptions {
  // Cross-check yes/no flips against the evidence triples.
  bool verify_with_triples = false;
};

Outcome<QaExample> InvertComparison(const QaExample& example,
                                    const InversionLexicon& lexicon,
                                    const InvertOptions& options = {});

// Prunes a bridge question to the sub-question of its first hop.
Outcome<QaExample> PruneBridge(const QaExample& example,
                               const RelationQuestionTemplates& templates);

enum class RuleSelection { kInvert, kPrune, kBoth };

std::optional<RuleSelection> ParseRuleSelection(std::string_view name);

struct AdversarialSet {
  std::vector<QaExample> examples;
  std::vector<Skip> skips;
  std::map<SkipReason, std::size_t> SkipCounts() const;
};

// Comparison questions go to InvertComparison, bridge questions to
// PruneBridge. Output keeps input order; emitted + skipped = input size.
AdversarialSet BuildAdversarialSet(std::span<const QaExample> dataset,
                                   const InversionLexicon& lexicon,
                                   const RelationQuestionTemplates& templates,
                                   RuleSelection rules = RuleSelection::kBoth,
                                   const InvertOptions& options = {});

// Keeps released adversarial examples whose id, or id prefix up to a '_' or
// '-' separator, names an example of `base`.
std::vector<QaExample> RestrictToBase(std::span<const QaExample> adversarial,
                                      std::span<const QaExample> base);

}  // namespace hopkit::adversarial

#endif  // HOPKIT_ADVERSARIAL_H_
