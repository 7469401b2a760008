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

#include "hopkit/taskprep.h"

#include <algorithm>
#include <set>

#include "hopkit/text.h"
#include "json.hpp"

namespace hopkit::taskprep {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kMaxPasses = 16;

constexpr std::string_view kDefaultRules = R"(# Relation grouping rules, applied in order and repeated to a fixed point.
lowercase
regex ordinal-with-article \b(the|a|an) (first|second|third|fourth|fifth|sixth|seventh|eighth|ninth|tenth|\d+(st|nd|rd|th))\b => a
regex ordinal \b(first|second|third|fourth|fifth|sixth|seventh|eighth|ninth|tenth|\d+(st|nd|rd|th))\b =>
regex year \b(1[0-9]{3}|20[0-9]{2})\b =>
regex copula-located \b(is|was|are|were) located (in|at|on)\b => $1 $2
strip-trailing the a an
collapse-whitespace
)";

std::string CollapseWhitespace(std::string_view text) {
  std::string out;
  for (const std::string& token : SplitWhitespace(text)) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

std::string StripTrailing(std::string_view text,
                          const std::vector<std::string>& words) {
  std::vector<std::string> tokens = SplitWhitespace(text);
  const std::size_t before = tokens.size();
  while (tokens.size() > 1 &&
         std::find(words.begin(), words.end(), tokens.back()) != words.end()) {
    tokens.pop_back();
  }
  if (tokens.size() == before) return std::string(text);
  std::string out;
  for (const std::string& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::optional<CharSpan> Locate(const QaExample& example, std::string_view text,
                               std::string* title) {
  if (text.empty()) return std::nullopt;
  for (int pass = 0; pass < 2; ++pass) {
    const std::string needle = pass == 0 ? std::string(text) : ToLower(text);
    for (const Paragraph& p : example.context) {
      for (std::size_t i = 0; i < p.sentences.size(); ++i) {
        const std::string hay = pass == 0 ? p.sentences[i] : ToLower(p.sentences[i]);
        std::size_t pos = hay.find(needle);
        if (pos == std::string::npos) continue;
        *title = p.title;
        return CharSpan{i, pos, pos + needle.size()};
      }
    }
  }
  return std::nullopt;
}

ordered_json MentionJson(const EntityMention& m) {
  ordered_json out;
  out["text"] = m.text;
  if (m.span) {
    out["title"] = m.title;
    out["sentence"] = m.span->sentence_index;
    out["begin"] = m.span->begin;
    out["end"] = m.span->end;
  } else {
    out["span"] = nullptr;
    out["unlocated"] = true;
  }
  return out;
}

}  // namespace

RelationRules RelationRules::Parse(std::string_view text) {
  RelationRules rules;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string line = Trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> tokens = SplitWhitespace(line);
    Rule rule;
    rule.name = tokens[0];
    if (tokens[0] == "lowercase") {
      rule.kind = Kind::kLowercase;
    } else if (tokens[0] == "collapse-whitespace") {
      rule.kind = Kind::kCollapseWhitespace;
    } else if (tokens[0] == "strip-trailing") {
      rule.kind = Kind::kStripTrailing;
      rule.words.assign(tokens.begin() + 1, tokens.end());
    } else if (tokens[0] == "regex") {
      if (tokens.size() < 3) {
        throw Error("rule line " + std::to_string(line_no) + ": regex needs a name and pattern");
      }
      rule.kind = Kind::kRegex;
      rule.name = tokens[1];
      const std::size_t name_at = line.find(tokens[1], 5);
      std::string rest = line.substr(name_at + tokens[1].size());
      const std::size_t arrow = rest.find(" =>");
      if (arrow == std::string::npos) {
        throw Error("rule line " + std::to_string(line_no) + ": regex needs '=> replacement'");
      }
      rule.pattern = Trim(rest.substr(0, arrow));
      rule.replacement = Trim(rest.substr(arrow + 3));
      try {
        rule.compiled = std::regex(rule.pattern, std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        throw Error("rule line " + std::to_string(line_no) + ": bad regex: " + e.what());
      }
    } else {
      throw Error("rule line " + std::to_string(line_no) + ": unknown rule '" +
                  tokens[0] + "'");
    }
    rules.rules_.push_back(std::move(rule));
  }
  return rules;
}

std::string_view RelationRules::DefaultText() { return kDefaultRules; }

const RelationRules& RelationRules::Default() {
  static const RelationRules* rules = new RelationRules(Parse(kDefaultRules));
  return *rules;
}

RelationRules::Result RelationRules::Apply(std::string_view raw) const {
  Result result;
  std::string current = Trim(raw);
  for (int pass = 0; pass < kMaxPasses; ++pass) {
    const std::string before = current;
    for (const Rule& rule : rules_) {
      std::string next;
      switch (rule.kind) {
        case Kind::kLowercase: next = ToLower(current); break;
        case Kind::kCollapseWhitespace: next = CollapseWhitespace(current); break;
        case Kind::kStripTrailing: next = StripTrailing(current, rule.words); break;
        case Kind::kRegex:
          next = std::regex_replace(current, rule.compiled, rule.replacement);
          break;
      }
      if (next != current) {
        result.trace.push_back(rule.name);
        current = std::move(next);
      }
    }
    if (current == before) break;
  }
  // Rules that erase everything (a bare year, say) leave the cleaned raw.
  result.canonical = current.empty() ? CollapseWhitespace(ToLower(raw)) : current;
  return result;
}

std::string NormalizeRelation(std::string_view raw, const RelationRules& rules) {
  return rules.Apply(raw).canonical;
}

RelationGroupMap::RelationGroupMap(RelationRules rules) : rules_(std::move(rules)) {}

const RelationGroupMap::Entry& RelationGroupMap::Add(std::string_view raw) {
  auto it = entries_.find(std::string(raw));
  if (it != entries_.end()) return it->second;
  RelationRules::Result r = rules_.Apply(raw);
  return entries_.emplace(std::string(raw), Entry{std::move(r.canonical), std::move(r.trace)})
      .first->second;
}

std::string RelationGroupMap::Canonical(std::string_view raw) const {
  auto it = entries_.find(std::string(raw));
  if (it != entries_.end()) return it->second.canonical;
  return rules_.Apply(raw).canonical;
}

std::string RelationGroupMap::SerializeTsv() const {
  std::string out = "raw\tcanonical\trules\n";
  for (const auto& [raw, entry] : entries_) {
    out += raw + "\t" + entry.canonical + "\t";
    for (std::size_t i = 0; i < entry.trace.size(); ++i) {
      if (i) out += ",";
      out += entry.trace[i];
    }
    out += "\n";
  }
  return out;
}

std::size_t RelationInventory::label_count() const {
  return canonical_counts.empty() ? 0 : canonical_counts.size() + 1;
}

bool RelationInventory::Contains(std::string_view label) const {
  return label == kNoRelation || canonical_counts.contains(std::string(label));
}

RelationInventory BuildRelationInventory(std::span<const QaExample> training,
                                         RelationGroupMap& map) {
  RelationInventory inventory;
  for (const QaExample& ex : training) {
    for (const EvidenceSet& set : ex.evidence_sets) {
      for (const EvidenceTriple& t : set) {
        ++inventory.raw_counts[t.relation];
        ++inventory.canonical_counts[map.Add(t.relation).canonical];
      }
    }
  }
  return inventory;
}

std::vector<EntityMention> MentionsFromTriples(const QaExample& example) {
  std::vector<EntityMention> mentions;
  for (const EvidenceSet& set : example.evidence_sets) {
    for (const EvidenceTriple& t : set) {
      for (const std::string* text : {&t.subject, &t.object}) {
        EntityMention m;
        m.text = *text;
        m.span = Locate(example, *text, &m.title);
        mentions.push_back(std::move(m));
      }
    }
  }
  return DeduplicateMentions(std::move(mentions));
}

std::vector<EntityMention> DeduplicateMentions(std::vector<EntityMention> mentions) {
  std::set<EntityMention> seen;
  std::vector<EntityMention> out;
  for (EntityMention& m : mentions) {
    if (seen.insert(m).second) out.push_back(std::move(m));
  }
  return out;
}

std::map<std::string, std::vector<EntityMention>> ParseSpanFile(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed span file: ") + e.what());
  }
  if (!doc.is_object()) throw Error("span file must be an object keyed by id");
  std::map<std::string, std::vector<EntityMention>> out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it->is_array()) throw Error("spans for '" + it.key() + "' must be an array");
    for (const auto& item : *it) {
      try {
        EntityMention m;
        m.text = item.at("text").get<std::string>();
        if (item.contains("begin") && item.contains("end")) {
          m.title = item.at("title").get<std::string>();
          m.span = CharSpan{item.value("sentence", std::size_t{0}),
                            item.at("begin").get<std::size_t>(),
                            item.at("end").get<std::size_t>()};
        }
        out[it.key()].push_back(std::move(m));
      } catch (const nlohmann::json::exception& e) {
        throw Error("bad span for '" + it.key() + "': " + e.what());
      }
    }
  }
  return out;
}

std::vector<EntityPairInstance> GenerateEntityPairs(
    std::string_view example_id, std::span<const EntityMention> mentions) {
  std::set<EntityMention> distinct(mentions.begin(), mentions.end());
  if (distinct.size() != mentions.size()) {
    throw Error("entity mentions for '" + std::string(example_id) +
                "' contain duplicates");
  }
  std::vector<EntityPairInstance> pairs;
  pairs.reserve(mentions.size() * (mentions.size() > 0 ? mentions.size() - 1 : 0));
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    for (std::size_t j = 0; j < mentions.size(); ++j) {
      if (i == j) continue;
      pairs.push_back({std::string(example_id), mentions[i], mentions[j],
                       std::string(kNoRelation)});
    }
  }
  return pairs;
}

void LabelPairs(std::vector<EntityPairInstance>& pairs,
                std::span<const EvidenceTriple> gold,
                const RelationGroupMap& map,
                const RelationInventory* inventory) {
  struct Key {
    std::string subject, object;
  };
  std::vector<Key> keys;
  keys.reserve(gold.size());
  for (const EvidenceTriple& t : gold) {
    keys.push_back({NormalizeAnswer(t.subject), NormalizeAnswer(t.object)});
  }
  std::vector<bool> used(gold.size(), false);
  for (EntityPairInstance& pair : pairs) {
    pair.label = std::string(kNoRelation);
    const std::string s = NormalizeAnswer(pair.subject.text);
    const std::string o = NormalizeAnswer(pair.object.text);
    for (std::size_t k = 0; k < gold.size(); ++k) {
      if (used[k] || keys[k].subject != s || keys[k].object != o) continue;
      used[k] = true;
      std::string label = map.Canonical(gold[k].relation);
      if (inventory == nullptr || inventory->Contains(label)) {
        pair.label = std::move(label);
      }
      break;
    }
  }
}

std::string PairToJsonLine(const EntityPairInstance& pair) {
  ordered_json out;
  out["id"] = pair.example_id;
  out["subject"] = MentionJson(pair.subject);
  out["object"] = MentionJson(pair.object);
  out["label"] = pair.label;
  return out.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

}  // namespace hopkit::taskprep
