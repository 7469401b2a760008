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

#include "hopkit/adversarial.h"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

#include "hopkit/text.h"
#include "json.hpp"

namespace hopkit::adversarial {

using ordered_json = nlohmann::ordered_json;

namespace {

bool IsWordChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 ||
         static_cast<unsigned char>(c) >= 0x80;
}

struct Match {
  std::size_t position = 0;
  const LexiconEntry* entry = nullptr;
};

// Earliest whole-phrase match inside text[0, limit); longest pattern wins a
// tie, then lexicon order.
std::optional<Match> FindOperation(std::string_view text, std::size_t limit,
                                   const InversionLexicon& lexicon) {
  std::optional<Match> best;
  for (const LexiconEntry& e : lexicon.entries()) {
    std::size_t from = 0;
    while (true) {
      std::size_t pos = text.find(e.pattern, from);
      if (pos == std::string_view::npos) break;
      const std::size_t end = pos + e.pattern.size();
      if (end > limit) break;
      const bool left_ok = pos == 0 || !IsWordChar(text[pos - 1]);
      const bool right_ok = end == text.size() || !IsWordChar(text[end]);
      if (left_ok && right_ok) {
        if (!best || pos < best->position ||
            (pos == best->position &&
             e.pattern.size() > best->entry->pattern.size())) {
          best = Match{pos, &e};
        }
        break;
      }
      from = pos + 1;
    }
  }
  return best;
}

struct CandidateTail {
  std::size_t comma = 0;  // start of ", A or B?"
  std::vector<std::pair<std::string, std::string>> splits;
};

std::optional<CandidateTail> ParseTail(std::string_view question) {
  std::string_view q = question;
  while (!q.empty() && (q.back() == '?' || q.back() == ' ')) q.remove_suffix(1);
  const std::size_t comma = q.rfind(", ");
  if (comma == std::string_view::npos) return std::nullopt;
  std::string_view tail = q.substr(comma + 2);
  CandidateTail out;
  out.comma = comma;
  std::size_t from = 0;
  while (true) {
    std::size_t pos = tail.find(" or ", from);
    if (pos == std::string_view::npos) break;
    std::string a = Trim(tail.substr(0, pos));
    std::string b = Trim(tail.substr(pos + 4));
    if (!a.empty() && !b.empty()) out.splits.emplace_back(a, b);
    from = pos + 1;
  }
  if (out.splits.empty()) return std::nullopt;
  return out;
}

std::size_t SearchLimit(std::string_view question) {
  if (std::optional<CandidateTail> tail = ParseTail(question)) return tail->comma;
  return question.size();
}

bool IsYesNo(std::string_view answer) {
  const std::string n = NormalizeAnswer(answer);
  return n == "yes" || n == "no";
}

std::string FlipYesNo(std::string_view answer) {
  const bool upper = !answer.empty() &&
                     std::isupper(static_cast<unsigned char>(answer.front()));
  const bool yes = NormalizeAnswer(answer) == "yes";
  if (yes) return upper ? "No" : "no";
  return upper ? "Yes" : "yes";
}

std::optional<std::string> ApplyInversion(std::string_view question,
                                          std::size_t limit,
                                          const InversionLexicon& lexicon,
                                          const LexiconEntry** used) {
  std::optional<Match> m = FindOperation(question, limit, lexicon);
  if (!m) return std::nullopt;
  if (used) *used = m->entry;
  std::string out(question.substr(0, m->position));
  out += m->entry->replacement;
  out += question.substr(m->position + m->entry->pattern.size());
  return out;
}

// Evidence subjects mentioned in the question, ordered by first mention.
std::vector<std::string> SubjectsInQuestion(const QaExample& example) {
  const std::string lowered = ToLower(example.question);
  std::vector<std::pair<std::size_t, std::string>> found;
  std::set<std::string> seen;
  for (const EvidenceSet& set : example.evidence_sets) {
    for (const EvidenceTriple& t : set) {
      if (seen.contains(t.subject)) continue;
      if (!ContainsNormalized(example.question, t.subject)) continue;
      seen.insert(t.subject);
      std::size_t pos = lowered.find(ToLower(t.subject));
      found.emplace_back(pos == std::string::npos ? lowered.size() : pos,
                         t.subject);
    }
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  for (auto& [pos, s] : found) out.push_back(std::move(s));
  return out;
}

// relation -> normalized leaf objects reachable from `start`.
std::map<std::string, std::set<std::string>> LeafAttributes(
    const EvidenceSet& triples, const std::string& start) {
  std::set<std::string> subjects;
  for (const EvidenceTriple& t : triples) subjects.insert(NormalizeAnswer(t.subject));
  std::map<std::string, std::set<std::string>> out;
  std::set<std::string> visited;
  std::deque<std::string> queue = {NormalizeAnswer(start)};
  while (!queue.empty()) {
    std::string node = queue.front();
    queue.pop_front();
    if (!visited.insert(node).second) continue;
    for (const EvidenceTriple& t : triples) {
      if (NormalizeAnswer(t.subject) != node) continue;
      const std::string object = NormalizeAnswer(t.object);
      if (subjects.contains(object)) {
        queue.push_back(object);
      } else {
        out[NormalizeAnswer(t.relation)].insert(object);
      }
    }
  }
  return out;
}

// nullopt: the triples cannot decide; otherwise whether the two compared
// entities share an attribute value.
std::optional<bool> TriplesSayEqual(const QaExample& example) {
  std::vector<std::string> subjects = SubjectsInQuestion(example);
  if (subjects.size() != 2 || example.evidence_sets.empty()) return std::nullopt;
  EvidenceSet all;
  for (const EvidenceSet& set : example.evidence_sets) {
    all.insert(all.end(), set.begin(), set.end());
  }
  auto a = LeafAttributes(all, subjects[0]);
  auto b = LeafAttributes(all, subjects[1]);
  std::optional<bool> equal;
  for (const auto& [relation, objects] : a) {
    auto it = b.find(relation);
    if (it == b.end()) continue;
    bool shared = std::any_of(objects.begin(), objects.end(), [&](const auto& o) {
      return it->second.contains(o);
    });
    equal = equal.value_or(false) || shared;
  }
  return equal;
}

}  // namespace

std::string_view ToString(AnswerRule rule) {
  return rule == AnswerRule::kFlipYesNo ? "flip_yesno" : "flip_candidate";
}

std::string_view ToString(SkipReason reason) {
  switch (reason) {
    case SkipReason::kNoLexiconMatch: return "no-lexicon-match";
    case SkipReason::kCandidatesNotRecovered: return "candidates-not-recovered";
    case SkipReason::kGoldNotCandidate: return "gold-not-candidate";
    case SkipReason::kRuleMismatch: return "rule-mismatch";
    case SkipReason::kNotInvolutive: return "not-involutive";
    case SkipReason::kTripleVerificationFailed: return "triple-verification-failed";
    case SkipReason::kNoEvidence: return "no-evidence";
    case SkipReason::kMultipleEvidenceSets: return "multiple-evidence-sets";
    case SkipReason::kNoSubjectInQuestion: return "no-subject-in-question";
    case SkipReason::kRuleNotSelected: return "rule-not-selected";
  }
  return "unknown";
}

InversionLexicon::InversionLexicon(std::vector<LexiconEntry> entries) {
  std::map<std::string, std::pair<std::string, AnswerRule>> partner;
  auto bind = [&](const std::string& from, const std::string& to,
                  AnswerRule rule) {
    auto [it, inserted] = partner.try_emplace(from, to, rule);
    if (!inserted && it->second.first != to) {
      throw Error("lexicon phrase '" + from + "' maps to both '" +
                  it->second.first + "' and '" + to + "'");
    }
    if (inserted) entries_.push_back({from, to, rule});
  };
  for (const LexiconEntry& e : entries) {
    if (e.pattern.empty() || e.replacement.empty() ||
        e.pattern == e.replacement) {
      throw Error("invalid lexicon entry '" + e.pattern + "' -> '" +
                  e.replacement + "'");
    }
    bind(e.pattern, e.replacement, e.rule);
    bind(e.replacement, e.pattern, e.rule);
  }
}

InversionLexicon InversionLexicon::Parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed lexicon: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    throw Error("lexicon must be {\"entries\": [...]}");
  }
  std::vector<LexiconEntry> entries;
  for (const auto& e : doc["entries"]) {
    LexiconEntry entry;
    try {
      entry.pattern = e.at("pattern").get<std::string>();
      entry.replacement = e.at("replacement").get<std::string>();
      const std::string rule = e.value("rule", std::string("flip_candidate"));
      if (rule == "flip_yesno") {
        entry.rule = AnswerRule::kFlipYesNo;
      } else if (rule != "flip_candidate") {
        throw Error("unknown answer rule '" + rule + "'");
      }
    } catch (const nlohmann::json::exception& ex) {
      throw Error(std::string("bad lexicon entry: ") + ex.what());
    }
    entries.push_back(std::move(entry));
  }
  return InversionLexicon(std::move(entries));
}

std::string InversionLexicon::Serialize() const {
  ordered_json list = ordered_json::array();
  for (const LexiconEntry& e : entries_) {
    list.push_back({{"pattern", e.pattern},
                    {"replacement", e.replacement},
                    {"rule", std::string(ToString(e.rule))}});
  }
  ordered_json doc;
  doc["entries"] = std::move(list);
  return doc.dump(2) + "\n";
}

RelationQuestionTemplates::RelationQuestionTemplates(
    std::map<std::string, std::string> by_relation) {
  for (auto& [relation, tmpl] : by_relation) {
    if (tmpl.find(kPlaceholder) == std::string::npos) {
      throw Error("relation template for '" + relation + "' lacks #Subject");
    }
    by_relation_[ToLower(Trim(relation))] = std::move(tmpl);
  }
}

RelationQuestionTemplates RelationQuestionTemplates::Parse(
    std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed relation templates: ") + e.what());
  }
  if (!doc.is_object()) throw Error("relation templates must be an object");
  std::map<std::string, std::string> by_relation;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it->is_string()) {
      throw Error("template for relation '" + it.key() + "' is not a string");
    }
    by_relation[it.key()] = it->get<std::string>();
  }
  return RelationQuestionTemplates(std::move(by_relation));
}

std::string RelationQuestionTemplates::Serialize() const {
  ordered_json doc = ordered_json::object();
  for (const auto& [relation, tmpl] : by_relation_) doc[relation] = tmpl;
  return doc.dump(2) + "\n";
}

bool RelationQuestionTemplates::Has(std::string_view relation) const {
  return by_relation_.contains(ToLower(Trim(relation)));
}

std::string RelationQuestionTemplates::Render(std::string_view relation,
                                              std::string_view subject,
                                              bool* generic) const {
  std::string tmpl;
  auto it = by_relation_.find(ToLower(Trim(relation)));
  if (it != by_relation_.end()) {
    tmpl = it->second;
    if (generic) *generic = false;
  } else {
    tmpl = "What is the " + Trim(relation) + " of #Subject?";
    if (generic) *generic = true;
  }
  const std::size_t pos = tmpl.find(kPlaceholder);
  return tmpl.substr(0, pos) + std::string(subject) +
         tmpl.substr(pos + kPlaceholder.size());
}

std::optional<std::pair<std::string, std::string>> RecoverCandidates(
    const QaExample& example) {
  if (std::optional<CandidateTail> tail = ParseTail(example.question)) {
    const std::string gold = NormalizeAnswer(example.answer);
    std::vector<std::pair<std::string, std::string>> matching;
    for (const auto& split : tail->splits) {
      if (NormalizeAnswer(split.first) == gold ||
          NormalizeAnswer(split.second) == gold) {
        matching.push_back(split);
      }
    }
    if (matching.size() == 1) return matching.front();
    if (matching.empty() && tail->splits.size() == 1) return tail->splits.front();
  }
  std::vector<std::string> subjects = SubjectsInQuestion(example);
  if (subjects.size() == 2) return std::make_pair(subjects[0], subjects[1]);
  return std::nullopt;
}

Outcome<QaExample> InvertComparison(const QaExample& example,
                                    const InversionLexicon& lexicon,
                                    const InvertOptions& options) {
  if (Coarsen(example.type) != CoarseType::kComparison) {
    return SkipReason::kRuleMismatch;
  }
  const bool yes_no = IsYesNo(example.answer);

  // The operation is searched before the "..., A or B?" tail so entity
  // names are never rewritten.
  const LexiconEntry* entry = nullptr;
  std::optional<std::string> question = ApplyInversion(
      example.question, SearchLimit(example.question), lexicon, &entry);
  if (!question) return SkipReason::kNoLexiconMatch;
  std::optional<std::string> back =
      ApplyInversion(*question, SearchLimit(*question), lexicon, nullptr);
  if (!back || *back != example.question) return SkipReason::kNotInvolutive;

  QaExample out = example;
  out.question = *question;
  if (yes_no) {
    out.answer = FlipYesNo(example.answer);
  } else {
    if (entry->rule == AnswerRule::kFlipYesNo) return SkipReason::kRuleMismatch;
    std::optional<std::pair<std::string, std::string>> candidates =
        RecoverCandidates(example);
    if (!candidates) return SkipReason::kCandidatesNotRecovered;
    const std::string gold = NormalizeAnswer(example.answer);
    if (NormalizeAnswer(candidates->first) == gold) {
      out.answer = candidates->second;
    } else if (NormalizeAnswer(candidates->second) == gold) {
      out.answer = candidates->first;
    } else {
      return SkipReason::kGoldNotCandidate;
    }
  }

  if (yes_no && options.verify_with_triples) {
    std::optional<bool> equal = TriplesSayEqual(out);
    const std::vector<std::string> words = ProbeTokens(out.question);
    const bool asks_same =
        std::find(words.begin(), words.end(), "same") != words.end();
    const bool asks_different =
        std::find(words.begin(), words.end(), "different") != words.end();
    if (equal && (asks_same || asks_different)) {
      const bool expect_yes = asks_same ? *equal : !*equal;
      if ((NormalizeAnswer(out.answer) == "yes") != expect_yes) {
        return SkipReason::kTripleVerificationFailed;
      }
      out.metadata["adversarial.verified"] = "yes";
    } else {
      out.metadata["adversarial.verified"] = "unverifiable";
    }
  }

  out.provenance = Provenance::kAdversarial;
  out.metadata["adversarial.rule"] = "invert";
  out.metadata["adversarial.operation"] = entry->pattern + " -> " + entry->replacement;
  return out;
}

Outcome<QaExample> PruneBridge(const QaExample& example,
                               const RelationQuestionTemplates& templates) {
  if (Coarsen(example.type) != CoarseType::kBridge) {
    return SkipReason::kRuleMismatch;
  }
  if (example.evidence_sets.empty() || example.evidence_sets.front().empty()) {
    return SkipReason::kNoEvidence;
  }
  if (example.evidence_sets.size() > 1) return SkipReason::kMultipleEvidenceSets;

  const EvidenceSet& triples = example.evidence_sets.front();
  const EvidenceTriple* first_hop = nullptr;
  for (const EvidenceTriple& t : triples) {
    if (!ContainsNormalized(example.question, t.subject)) continue;
    if (first_hop == nullptr || t.subject.size() > first_hop->subject.size()) {
      first_hop = &t;
    }
  }
  if (first_hop == nullptr) return SkipReason::kNoSubjectInQuestion;

  QaExample out = example;
  bool generic = false;
  out.question = templates.Render(first_hop->relation, first_hop->subject, &generic);
  out.answer = first_hop->object;
  out.evidence_sets = {{*first_hop}};

  // Supporting facts: the gold paragraph whose gold sentences mention the
  // object, preferring the subject's own paragraph.
  std::vector<std::string> holders;
  for (const Paragraph& p : example.context) {
    for (const SupportingFact& sf : example.supporting_facts) {
      if (sf.title != p.title || sf.sentence_index >= p.sentences.size()) continue;
      if (ContainsNormalized(p.sentences[sf.sentence_index], first_hop->object)) {
        holders.push_back(p.title);
        break;
      }
    }
  }
  std::string restriction = "unchanged";
  if (!holders.empty()) {
    std::string chosen = holders.front();
    for (const std::string& title : holders) {
      if (NormalizeAnswer(title) == NormalizeAnswer(first_hop->subject)) {
        chosen = title;
        break;
      }
    }
    std::erase_if(out.supporting_facts, [&](const SupportingFact& sf) {
      return sf.title != chosen;
    });
    restriction = chosen;
  }

  out.provenance = Provenance::kAdversarial;
  out.metadata["adversarial.rule"] = "prune";
  out.metadata["adversarial.template"] = generic ? "generic" : "relation";
  out.metadata["adversarial.sf_paragraph"] = restriction;
  out.metadata["adversarial.original_question"] = example.question;
  return out;
}

std::optional<RuleSelection> ParseRuleSelection(std::string_view name) {
  if (name == "invert") return RuleSelection::kInvert;
  if (name == "prune") return RuleSelection::kPrune;
  if (name == "both") return RuleSelection::kBoth;
  return std::nullopt;
}

std::map<SkipReason, std::size_t> AdversarialSet::SkipCounts() const {
  std::map<SkipReason, std::size_t> counts;
  for (const Skip& s : skips) ++counts[s.reason];
  return counts;
}

AdversarialSet BuildAdversarialSet(std::span<const QaExample> dataset,
                                   const InversionLexicon& lexicon,
                                   const RelationQuestionTemplates& templates,
                                   RuleSelection rules,
                                   const InvertOptions& options) {
  AdversarialSet result;
  for (const QaExample& ex : dataset) {
    const bool comparison = Coarsen(ex.type) == CoarseType::kComparison;
    if ((comparison && rules == RuleSelection::kPrune) ||
        (!comparison && rules == RuleSelection::kInvert)) {
      result.skips.push_back({ex.id, SkipReason::kRuleNotSelected});
      continue;
    }
    Outcome<QaExample> outcome = comparison
                                     ? InvertComparison(ex, lexicon, options)
                                     : PruneBridge(ex, templates);
    if (auto* emitted = std::get_if<QaExample>(&outcome)) {
      result.examples.push_back(std::move(*emitted));
    } else {
      result.skips.push_back({ex.id, std::get<SkipReason>(outcome)});
    }
  }
  return result;
}

std::vector<QaExample> RestrictToBase(std::span<const QaExample> adversarial,
                                      std::span<const QaExample> base) {
  std::set<std::string_view> ids;
  for (const QaExample& ex : base) ids.insert(ex.id);
  std::vector<QaExample> kept;
  for (const QaExample& ex : adversarial) {
    std::string_view id = ex.id;
    bool keep = ids.contains(id);
    if (!keep) {
      const std::size_t sep = id.find_first_of("_-");
      keep = sep != std::string_view::npos && ids.contains(id.substr(0, sep));
    }
    if (keep) kept.push_back(ex);
  }
  return kept;
}

}  // namespace hopkit::adversarial
