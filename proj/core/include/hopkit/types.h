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

#ifndef HOPKIT_TYPES_H_
#define HOPKIT_TYPES_H_

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hopkit {

// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Question types found in HotpotQA and 2Wiki. For analysis they coarsen to
// two classes, see Coarsen().
enum class QuestionType {
  kComparison,
  kBridge,
  kInference,
  kCompositional,
  kBridgeComparison,
};

enum class CoarseType { kComparison, kBridge };

CoarseType Coarsen(QuestionType type);
std::string_view ToString(QuestionType type);
std::string_view ToString(CoarseType type);
std::optional<QuestionType> ParseQuestionType(std::string_view text);

enum class Provenance { kOriginal, kDebiased, kAdversarial };

std::string_view ToString(Provenance provenance);
std::optional<Provenance> ParseProvenance(std::string_view text);

struct Paragraph {
  std::string title;
  std::vector<std::string> sentences;

  bool operator==(const Paragraph&) const = default;
};

struct SupportingFact {
  std::string title;
  std::size_t sentence_index = 0;

  auto operator<=>(const SupportingFact&) const = default;
};

struct EvidenceTriple {
  std::string subject;
  std::string relation;
  std::string object;

  auto operator<=>(const EvidenceTriple&) const = default;
};

using EvidenceSet = std::vector<EvidenceTriple>;

struct QaExample {
  std::string id;
  std::string question;
  std::string answer;
  QuestionType type = QuestionType::kBridge;
  std::vector<Paragraph> context;
  std::vector<SupportingFact> supporting_facts;
  // One set for 2Wiki, up to three for raw R4C annotations.
  std::vector<EvidenceSet> evidence_sets;
  Provenance provenance = Provenance::kOriginal;
  // Optional paragraph title -> entity type (e.g. from an NER pass).
  std::map<std::string, std::string> entity_types;
  // Free-form key/value flags written by generators ("meta" in JSON).
  std::map<std::string, std::string> metadata;

  bool operator==(const QaExample&) const = default;

  // Returns the paragraph with this title, or nullptr.
  const Paragraph* FindParagraph(std::string_view title) const;
  Paragraph* FindParagraph(std::string_view title);

  // True when at least one supporting fact points into the paragraph.
  bool IsGoldParagraph(std::string_view title) const;
};

}  // namespace hopkit

#endif  // HOPKIT_TYPES_H_
