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

#include "hopkit/types.h"

#include <algorithm>

namespace hopkit {

CoarseType Coarsen(QuestionType type) {
  switch (type) {
    case QuestionType::kComparison:
    case QuestionType::kBridgeComparison:
      return CoarseType::kComparison;
    case QuestionType::kBridge:
    case QuestionType::kInference:
    case QuestionType::kCompositional:
      return CoarseType::kBridge;
  }
  return CoarseType::kBridge;
}

std::string_view ToString(QuestionType type) {
  switch (type) {
    case QuestionType::kComparison: return "comparison";
    case QuestionType::kBridge: return "bridge";
    case QuestionType::kInference: return "inference";
    case QuestionType::kCompositional: return "compositional";
    // 2Wiki spells it with an underscore; keep that for drop-in output.
    case QuestionType::kBridgeComparison: return "bridge_comparison";
  }
  return "bridge";
}

std::string_view ToString(CoarseType type) {
  return type == CoarseType::kComparison ? "comparison" : "bridge";
}

std::optional<QuestionType> ParseQuestionType(std::string_view text) {
  if (text == "comparison") return QuestionType::kComparison;
  if (text == "bridge") return QuestionType::kBridge;
  if (text == "inference") return QuestionType::kInference;
  if (text == "compositional") return QuestionType::kCompositional;
  if (text == "bridge_comparison" || text == "bridge-comparison") {
    return QuestionType::kBridgeComparison;
  }
  return std::nullopt;
}

std::string_view ToString(Provenance provenance) {
  switch (provenance) {
    case Provenance::kOriginal: return "original";
    case Provenance::kDebiased: return "debiased";
    case Provenance::kAdversarial: return "adversarial";
  }
  return "original";
}

std::optional<Provenance> ParseProvenance(std::string_view text) {
  if (text == "original") return Provenance::kOriginal;
  if (text == "debiased") return Provenance::kDebiased;
  if (text == "adversarial") return Provenance::kAdversarial;
  return std::nullopt;
}

const Paragraph* QaExample::FindParagraph(std::string_view title) const {
  for (const Paragraph& p : context) {
    if (p.title == title) return &p;
  }
  return nullptr;
}

Paragraph* QaExample::FindParagraph(std::string_view title) {
  for (Paragraph& p : context) {
    if (p.title == title) return &p;
  }
  return nullptr;
}

bool QaExample::IsGoldParagraph(std::string_view title) const {
  return std::any_of(supporting_facts.begin(), supporting_facts.end(),
                     [&](const SupportingFact& sf) { return sf.title == title; });
}

}  // namespace hopkit
