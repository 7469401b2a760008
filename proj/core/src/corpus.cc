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

#include "hopkit/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hopkit/io.h"
#include "hopkit/text.h"
#include "json.hpp"

namespace hopkit::corpus {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

// Thrown while decoding a single record; converted into a RecordIssue.
struct FieldError {
  std::string path;
  std::string message;
};

std::string Join(const std::string& base, const std::string& child) {
  if (base.empty()) return child;
  if (!child.empty() && child[0] == '[') return base + child;
  return base + "." + child;
}

std::string Index(std::size_t i) { return "[" + std::to_string(i) + "]"; }

const std::string& AsString(const json& value, const std::string& path) {
  if (!value.is_string()) throw FieldError{path, "expected a string"};
  return value.get_ref<const std::string&>();
}

const json& Member(const json& object, const char* key,
                   const std::string& path) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw FieldError{Join(path, key), "missing field"};
  }
  return *it;
}

EvidenceTriple DecodeTriple(const json& value, const std::string& path) {
  if (!value.is_array() || value.size() != 3) {
    throw FieldError{path, "expected [subject, relation, object]"};
  }
  return EvidenceTriple{AsString(value[0], path + "[0]"),
                        AsString(value[1], path + "[1]"),
                        AsString(value[2], path + "[2]")};
}

EvidenceSet DecodeTriples(const json& value, const std::string& path) {
  if (!value.is_array()) throw FieldError{path, "expected an array"};
  EvidenceSet set;
  for (std::size_t i = 0; i < value.size(); ++i) {
    set.push_back(DecodeTriple(value[i], path + Index(i)));
  }
  return set;
}

std::map<std::string, std::string> DecodeStringMap(const json& value,
                                                   const std::string& path) {
  if (!value.is_object()) throw FieldError{path, "expected an object"};
  std::map<std::string, std::string> out;
  for (auto it = value.begin(); it != value.end(); ++it) {
    out[it.key()] = AsString(it.value(), Join(path, it.key()));
  }
  return out;
}

QaExample DecodeRecord(const json& record, DatasetFormat format) {
  if (!record.is_object()) throw FieldError{"", "record is not an object"};
  QaExample ex;
  if (record.contains("_id")) {
    ex.id = AsString(record["_id"], "_id");
  } else {
    ex.id = AsString(Member(record, "id", ""), "id");
  }
  ex.question = AsString(Member(record, "question", ""), "question");
  ex.answer = AsString(Member(record, "answer", ""), "answer");
  const std::string& type = AsString(Member(record, "type", ""), "type");
  std::optional<QuestionType> qtype = ParseQuestionType(type);
  if (!qtype) throw FieldError{"type", "unknown question type '" + type + "'"};
  ex.type = *qtype;

  const json& context = Member(record, "context", "");
  if (!context.is_array()) throw FieldError{"context", "expected an array"};
  for (std::size_t i = 0; i < context.size(); ++i) {
    const std::string path = "context" + Index(i);
    const json& entry = context[i];
    if (!entry.is_array() || entry.size() != 2) {
      throw FieldError{path, "expected [title, [sentences]]"};
    }
    Paragraph p;
    p.title = AsString(entry[0], path + "[0]");
    if (!entry[1].is_array()) {
      throw FieldError{path + "[1]", "expected an array of sentences"};
    }
    for (std::size_t j = 0; j < entry[1].size(); ++j) {
      p.sentences.push_back(
          AsString(entry[1][j], path + "[1]" + Index(j)));
    }
    ex.context.push_back(std::move(p));
  }

  const json& sfs = Member(record, "supporting_facts", "");
  if (!sfs.is_array()) {
    throw FieldError{"supporting_facts", "expected an array"};
  }
  for (std::size_t i = 0; i < sfs.size(); ++i) {
    const std::string path = "supporting_facts" + Index(i);
    const json& entry = sfs[i];
    if (!entry.is_array() || entry.size() != 2) {
      throw FieldError{path, "expected [title, sentence_index]"};
    }
    SupportingFact sf;
    sf.title = AsString(entry[0], path + "[0]");
    if (!entry[1].is_number_integer() || entry[1].get<long long>() < 0) {
      throw FieldError{path + "[1]", "expected a non-negative integer"};
    }
    sf.sentence_index = entry[1].get<std::size_t>();
    ex.supporting_facts.push_back(std::move(sf));
  }

  if (record.contains("evidence_sets")) {
    const json& sets = record["evidence_sets"];
    if (!sets.is_array()) throw FieldError{"evidence_sets", "expected an array"};
    for (std::size_t i = 0; i < sets.size(); ++i) {
      ex.evidence_sets.push_back(
          DecodeTriples(sets[i], "evidence_sets" + Index(i)));
    }
  } else if (record.contains("evidences")) {
    ex.evidence_sets.push_back(DecodeTriples(record["evidences"], "evidences"));
  } else if (format == DatasetFormat::kTwoWiki) {
    throw FieldError{"evidences", "missing field"};
  }

  if (record.contains("provenance")) {
    const std::string& text = AsString(record["provenance"], "provenance");
    std::optional<Provenance> provenance = ParseProvenance(text);
    if (!provenance) {
      throw FieldError{"provenance", "unknown provenance '" + text + "'"};
    }
    ex.provenance = *provenance;
  }
  if (record.contains("entity_types")) {
    ex.entity_types = DecodeStringMap(record["entity_types"], "entity_types");
  }
  if (record.contains("meta")) {
    ex.metadata = DecodeStringMap(record["meta"], "meta");
  }
  return ex;
}

std::string RecordId(const json& record) {
  if (!record.is_object()) return "";
  for (const char* key : {"_id", "id"}) {
    auto it = record.find(key);
    if (it != record.end() && it->is_string()) return it->get<std::string>();
  }
  return "";
}

std::vector<json> SplitRecords(std::string_view text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  std::vector<json> records;
  if (text[first] == '[') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(std::string("malformed JSON: ") + e.what());
    }
    for (json& r : doc) records.push_back(std::move(r));
    return records;
  }
  // Newline-delimited records.
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      records.push_back(json::parse(line));
    } catch (const json::parse_error& e) {
      throw Error("malformed JSON on line " + std::to_string(line_no) + ": " +
                  e.what());
    }
  }
  return records;
}

ordered_json EncodeTriples(const EvidenceSet& set) {
  ordered_json out = ordered_json::array();
  for (const EvidenceTriple& t : set) {
    out.push_back({t.subject, t.relation, t.object});
  }
  return out;
}

ordered_json EncodeExample(const QaExample& ex) {
  ordered_json out;
  out["_id"] = ex.id;
  out["type"] = std::string(ToString(ex.type));
  out["question"] = ex.question;
  out["answer"] = ex.answer;
  ordered_json context = ordered_json::array();
  for (const Paragraph& p : ex.context) {
    context.push_back({p.title, p.sentences});
  }
  out["context"] = std::move(context);
  ordered_json sfs = ordered_json::array();
  for (const SupportingFact& sf : ex.supporting_facts) {
    sfs.push_back({sf.title, sf.sentence_index});
  }
  out["supporting_facts"] = std::move(sfs);
  if (ex.evidence_sets.size() == 1) {
    out["evidences"] = EncodeTriples(ex.evidence_sets.front());
  } else if (ex.evidence_sets.size() > 1) {
    ordered_json sets = ordered_json::array();
    for (const EvidenceSet& set : ex.evidence_sets) {
      sets.push_back(EncodeTriples(set));
    }
    out["evidence_sets"] = std::move(sets);
  }
  if (!ex.entity_types.empty()) out["entity_types"] = ex.entity_types;
  if (ex.provenance != Provenance::kOriginal) {
    out["provenance"] = std::string(ToString(ex.provenance));
  }
  if (!ex.metadata.empty()) out["meta"] = ex.metadata;
  return out;
}

// Collects every [string, string, string] array nested inside `value`.
void CollectTriples(const json& value, EvidenceSet& out) {
  if (value.is_object()) {
    auto get = [&](std::initializer_list<const char*> keys) -> const json* {
      for (const char* k : keys) {
        auto it = value.find(k);
        if (it != value.end() && it->is_string()) return &*it;
      }
      return nullptr;
    };
    const json* head = get({"head", "subject"});
    const json* rel = get({"relation", "rel"});
    const json* tail = get({"tail", "object"});
    if (head && rel && tail) {
      out.push_back({Trim(head->get<std::string>()),
                     Trim(rel->get<std::string>()),
                     Trim(tail->get<std::string>())});
      return;
    }
    for (const auto& item : value.items()) CollectTriples(item.value(), out);
    return;
  }
  if (!value.is_array()) return;
  if (value.size() == 3 && value[0].is_string() && value[1].is_string() &&
      value[2].is_string()) {
    out.push_back({Trim(value[0].get<std::string>()),
                   Trim(value[1].get<std::string>()),
                   Trim(value[2].get<std::string>())});
    return;
  }
  for (const json& item : value) CollectTriples(item, out);
}

bool LooksLikeTriple(const json& value) {
  return value.is_array() && value.size() == 3 && value[0].is_string() &&
         value[1].is_string() && value[2].is_string();
}

}  // namespace

std::optional<DatasetFormat> ParseDatasetFormat(std::string_view name) {
  if (name == "hotpotqa") return DatasetFormat::kHotpotQa;
  if (name == "2wiki") return DatasetFormat::kTwoWiki;
  return std::nullopt;
}

std::string_view ToString(DatasetFormat format) {
  return format == DatasetFormat::kTwoWiki ? "2wiki" : "hotpotqa";
}

std::string RecordIssue::ToString() const {
  std::string out = "record " + std::to_string(record_index);
  if (!id.empty()) out += " (" + id + ")";
  if (!field_path.empty()) out += " at " + field_path;
  return out + ": " + message;
}

ValidationError::ValidationError(std::vector<RecordIssue> issues)
    : Error([&] {
        std::string msg = std::to_string(issues.size()) + " invalid record(s)";
        if (!issues.empty()) msg += "; first: " + issues.front().ToString();
        return msg;
      }()),
      issues_(std::move(issues)) {}

OrphanIdsError::OrphanIdsError(std::vector<std::string> ids)
    : Error([&] {
        std::string msg = "overlay ids without a base example:";
        for (const std::string& id : ids) msg += " " + id;
        return msg;
      }()),
      ids_(std::move(ids)) {}

std::optional<RecordIssue> ValidateExample(const QaExample& ex,
                                           std::size_t record_index) {
  auto issue = [&](std::string path, std::string message) {
    return RecordIssue{record_index, ex.id, std::move(path),
                       std::move(message)};
  };
  if (ex.id.empty()) return issue("_id", "empty id");
  if (Trim(ex.answer).empty()) return issue("answer", "empty answer");

  std::set<std::string_view> titles;
  for (std::size_t i = 0; i < ex.context.size(); ++i) {
    const Paragraph& p = ex.context[i];
    if (Trim(p.title).empty()) {
      return issue("context" + Index(i) + "[0]", "empty paragraph title");
    }
    if (!titles.insert(p.title).second) {
      return issue("context" + Index(i) + "[0]",
                   "duplicate paragraph title '" + p.title + "'");
    }
  }
  for (std::size_t i = 0; i < ex.supporting_facts.size(); ++i) {
    const SupportingFact& sf = ex.supporting_facts[i];
    const Paragraph* p = ex.FindParagraph(sf.title);
    if (p == nullptr) {
      return issue("supporting_facts" + Index(i) + "[0]",
                   "no context paragraph titled '" + sf.title + "'");
    }
    if (p->sentences.empty()) {
      return issue("supporting_facts" + Index(i) + "[0]",
                   "gold paragraph '" + sf.title + "' has no sentences");
    }
    if (sf.sentence_index >= p->sentences.size()) {
      return issue("supporting_facts" + Index(i) + "[1]",
                   "sentence index " + std::to_string(sf.sentence_index) +
                       " out of range for '" + sf.title + "' (" +
                       std::to_string(p->sentences.size()) + " sentences)");
    }
  }
  for (std::size_t s = 0; s < ex.evidence_sets.size(); ++s) {
    const EvidenceSet& set = ex.evidence_sets[s];
    for (std::size_t i = 0; i < set.size(); ++i) {
      const EvidenceTriple& t = set[i];
      if (Trim(t.subject).empty() || Trim(t.relation).empty() ||
          Trim(t.object).empty()) {
        std::string path = ex.evidence_sets.size() == 1
                               ? "evidences" + Index(i)
                               : "evidence_sets" + Index(s) + Index(i);
        return issue(path, "evidence triple has an empty field");
      }
    }
  }
  return std::nullopt;
}

LoadResult ParseDataset(std::string_view text, const LoadOptions& options) {
  std::vector<json> records = SplitRecords(text);
  LoadResult result;
  for (std::size_t i = 0; i < records.size(); ++i) {
    try {
      QaExample ex = DecodeRecord(records[i], options.format);
      if (std::optional<RecordIssue> issue = ValidateExample(ex, i)) {
        result.issues.push_back(std::move(*issue));
        continue;
      }
      result.examples.push_back(std::move(ex));
    } catch (const FieldError& e) {
      result.issues.push_back(
          RecordIssue{i, RecordId(records[i]), e.path, e.message});
    }
  }
  if (!options.lenient && !result.issues.empty()) {
    throw ValidationError(std::move(result.issues));
  }
  return result;
}

LoadResult LoadDataset(const std::filesystem::path& path,
                       const LoadOptions& options) {
  return ParseDataset(ReadFile(path), options);
}

std::string SerializeExample(const QaExample& example) {
  return EncodeExample(example).dump(-1, ' ', false,
                                     ordered_json::error_handler_t::replace);
}

std::string SerializeDataset(std::span<const QaExample> examples) {
  std::string out = "[";
  for (std::size_t i = 0; i < examples.size(); ++i) {
    out += i == 0 ? "\n" : ",\n";
    out += SerializeExample(examples[i]);
  }
  out += examples.empty() ? "]\n" : "\n]\n";
  return out;
}

void WriteDataset(const std::filesystem::path& path,
                  std::span<const QaExample> examples) {
  WriteFile(path, SerializeDataset(examples));
}

R4cOverlay ParseR4cOverlay(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("malformed R4C overlay: ") + e.what());
  }
  if (!doc.is_object()) throw Error("R4C overlay must be an object keyed by id");
  R4cOverlay overlay;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const json& value = it.value();
    if (!value.is_array()) {
      throw Error("R4C overlay entry '" + it.key() + "' is not an array");
    }
    std::vector<EvidenceSet> annotations;
    // A bare list of triples is a single annotation.
    if (!value.empty() && LooksLikeTriple(value.front())) {
      EvidenceSet set;
      CollectTriples(value, set);
      annotations.push_back(std::move(set));
    } else {
      for (const json& annotation : value) {
        EvidenceSet set;
        CollectTriples(annotation, set);
        annotations.push_back(std::move(set));
      }
    }
    overlay[it.key()] = std::move(annotations);
  }
  return overlay;
}

R4cOverlay LoadR4cOverlay(const std::filesystem::path& path) {
  return ParseR4cOverlay(ReadFile(path));
}

void ApplyR4cOverlay(std::vector<QaExample>& base, const R4cOverlay& overlay) {
  std::map<std::string_view, QaExample*> by_id;
  for (QaExample& ex : base) by_id[ex.id] = &ex;
  std::vector<std::string> orphans;
  for (const auto& [id, sets] : overlay) {
    if (!by_id.contains(id)) orphans.push_back(id);
  }
  if (!orphans.empty()) throw OrphanIdsError(std::move(orphans));
  for (const auto& [id, sets] : overlay) by_id[id]->evidence_sets = sets;
}

std::vector<QaExample> KeepAnnotated(std::vector<QaExample> examples) {
  std::erase_if(examples,
                [](const QaExample& ex) { return ex.evidence_sets.empty(); });
  return examples;
}

}  // namespace hopkit::corpus
