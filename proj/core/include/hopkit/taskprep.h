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

// Entity-level task preparation: grouping of free-text relation phrases and
// export of labeled ordered entity pairs for relation classification.

#ifndef HOPKIT_TASKPREP_H_
#define HOPKIT_TASKPREP_H_

#include <map>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopkit/types.h"

namespace hopkit::taskprep {

inline constexpr std::string_view kNoRelation = "NO_RELATION";

// An ordered list of rewrite rules for relation phrases. Text format, one
// rule per line:
//
//   lowercase
//   regex <name> <ECMAScript pattern> => <replacement>
//   strip-trailing <word> <word> ...
//   collapse-whitespace
//
// Apply() repeats the whole list until the phrase stops changing.
class RelationRules {
 public:
  enum class Kind { kLowercase, kRegex, kStripTrailing, kCollapseWhitespace };

  struct Rule {
    Kind kind = Kind::kLowercase;
    std::string name;
    std::string pattern;
    std::string replacement;
    std::vector<std::string> words;
    std::regex compiled;
  };

  struct Result {
    std::string canonical;
    std::vector<std::string> trace;  // names of rules that fired, in order
  };

  static RelationRules Parse(std::string_view text);
  static const RelationRules& Default();
  static std::string_view DefaultText();

  Result Apply(std::string_view raw) const;
  const std::vector<Rule>& rules() const { return rules_; }

 private:
  std::vector<Rule> rules_;
};

std::string NormalizeRelation(std::string_view raw,
                              const RelationRules& rules = RelationRules::Default());

// raw relation -> canonical relation, with the rule trace for each mapping.
// Relations not seen at build time are normalized on lookup.
class RelationGroupMap {
 public:
  struct Entry {
    std::string canonical;
    std::vector<std::string> trace;
  };

  explicit RelationGroupMap(RelationRules rules = RelationRules::Default());

  const Entry& Add(std::string_view raw);
  std::string Canonical(std::string_view raw) const;
  const std::map<std::string, Entry>& entries() const { return entries_; }

  // raw \t canonical \t comma-separated trace
  std::string SerializeTsv() const;

 private:
  RelationRules rules_;
  std::map<std::string, Entry> entries_;
};

struct RelationInventory {
  std::map<std::string, std::size_t> raw_counts;
  std::map<std::string, std::size_t> canonical_counts;

  std::size_t raw_size() const { return raw_counts.size(); }
  std::size_t grouped_size() const { return canonical_counts.size(); }
  // Classifier label count: grouped relations plus NO_RELATION, or zero for
  // an empty inventory.
  std::size_t label_count() const;
  bool Contains(std::string_view label) const;
};

// Counts every triple of every evidence set. Fills `map` when given.
RelationInventory BuildRelationInventory(std::span<const QaExample> training,
                                         RelationGroupMap& map);

struct CharSpan {
  std::size_t sentence_index = 0;
  std::size_t begin = 0;  // byte offsets into the sentence
  std::size_t end = 0;

  auto operator<=>(const CharSpan&) const = default;
};

struct EntityMention {
  std::string text;
  std::string title;              // empty when unlocated
  std::optional<CharSpan> span;   // absent when the text was not found

  auto operator<=>(const EntityMention&) const = default;
};

struct EntityPairInstance {
  std::string example_id;
  EntityMention subject;
  EntityMention object;
  std::string label = std::string(kNoRelation);
};

// Subjects and objects of the example's evidence triples, located at their
// first occurrence in the context (exact, then case-insensitive).
std::vector<EntityMention> MentionsFromTriples(const QaExample& example);

// Keeps the first mention for each (text, title, span).
std::vector<EntityMention> DeduplicateMentions(std::vector<EntityMention> mentions);

// {"<id>": [{"text": ..., "title": ..., "sentence": i, "begin": b,
//            "end": e}, ...]}
std::map<std::string, std::vector<EntityMention>> ParseSpanFile(std::string_view text);

// All N*(N-1) ordered pairs of distinct mentions, labeled NO_RELATION.
// Throws if `mentions` holds duplicates.
std::vector<EntityPairInstance> GenerateEntityPairs(
    std::string_view example_id, std::span<const EntityMention> mentions);

// A pair (a, b) takes relation r when a gold triple (a, r, b) matches by
// normalized text. Each triple labels at most one pair, the first in pair
// order; a pair takes the first matching triple. Labels outside
// `inventory`, when one is given, stay NO_RELATION.
void LabelPairs(std::vector<EntityPairInstance>& pairs,
                std::span<const EvidenceTriple> gold,
                const RelationGroupMap& map,
                const RelationInventory* inventory = nullptr);

std::string PairToJsonLine(const EntityPairInstance& pair);

}  // namespace hopkit::taskprep

#endif  // HOPKIT_TASKPREP_H_
