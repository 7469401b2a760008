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

#include "hopkit/bias_probe.h"

#include <algorithm>
#include <iterator>

namespace hopkit::probe {

namespace {

double Fraction(std::size_t part, std::size_t total) {
  return total == 0 ? 0.0
                    : static_cast<double>(part) / static_cast<double>(total);
}

WordSet ContentWords(std::string_view text, const WordSet& stopwords) {
  WordSet words;
  for (std::string& token : ProbeTokens(text)) {
    if (!stopwords.contains(token)) words.insert(std::move(token));
  }
  return words;
}

}  // namespace

double PositionCounts::fraction_position0() const {
  return Fraction(position0, total());
}

double PositionCounts::fraction_other() const {
  return Fraction(position_other, total());
}

PositionBiasReport PositionHistogram(std::span<const QaExample> examples) {
  PositionBiasReport report;
  for (const QaExample& ex : examples) {
    PositionCounts& by_type = report.by_type[Coarsen(ex.type)];
    for (const SupportingFact& sf : ex.supporting_facts) {
      if (sf.sentence_index == 0) {
        ++report.overall.position0;
        ++by_type.position0;
      } else {
        ++report.overall.position_other;
        ++by_type.position_other;
      }
    }
  }
  return report;
}

SurroundingWords SurroundingWindow(const QaExample& example,
                                   const WordSet& stopwords) {
  SurroundingWords result;
  const std::vector<std::string> answer = ProbeTokens(example.answer);
  if (answer.empty()) return result;
  for (const Paragraph& p : example.context) {
    std::vector<std::string> tokens;
    for (const std::string& sentence : p.sentences) {
      std::vector<std::string> t = ProbeTokens(sentence);
      tokens.insert(tokens.end(), std::make_move_iterator(t.begin()),
                    std::make_move_iterator(t.end()));
    }
    std::optional<std::size_t> start = FindTokenRun(tokens, answer);
    if (!start) continue;
    result.answer_found = true;
    const std::size_t left = *start >= kWindowWidth ? *start - kWindowWidth : 0;
    const std::size_t end = *start + answer.size();
    const std::size_t right = std::min(tokens.size(), end + kWindowWidth);
    for (std::size_t i = left; i < *start; ++i) {
      if (!stopwords.contains(tokens[i])) result.words.insert(tokens[i]);
    }
    for (std::size_t i = end; i < right; ++i) {
      if (!stopwords.contains(tokens[i])) result.words.insert(tokens[i]);
    }
    return result;
  }
  return result;
}

bool IsOverlapShortcut(std::size_t overlap_size, std::size_t surrounding_size) {
  // |O|/|S| >= 0.65 evaluated in integers so the boundary is exact.
  return surrounding_size > 0 && overlap_size >= kMinOverlap &&
         overlap_size * 100 >= surrounding_size * 65;
}

ShortcutVerdict DetectOverlapShortcut(const QaExample& example,
                                      const WordSet& stopwords) {
  ShortcutVerdict verdict;
  verdict.example_id = example.id;
  SurroundingWords window = SurroundingWindow(example, stopwords);
  verdict.answer_found = window.answer_found;
  verdict.surrounding = std::move(window.words);
  const std::vector<std::string> question = ProbeTokens(example.question);
  const WordSet question_words(question.begin(), question.end());
  std::set_intersection(verdict.surrounding.begin(), verdict.surrounding.end(),
                        question_words.begin(), question_words.end(),
                        std::inserter(verdict.overlap, verdict.overlap.end()));
  if (!verdict.surrounding.empty()) {
    verdict.ratio = static_cast<double>(verdict.overlap.size()) /
                    static_cast<double>(verdict.surrounding.size());
  }
  verdict.is_shortcut =
      IsOverlapShortcut(verdict.overlap.size(), verdict.surrounding.size());
  return verdict;
}

OverlapReport ProbeOverlap(std::span<const QaExample> examples,
                           const WordSet& stopwords, bool bridge_only) {
  OverlapReport report;
  for (const QaExample& ex : examples) {
    if (bridge_only && Coarsen(ex.type) != CoarseType::kBridge) continue;
    ShortcutVerdict verdict = DetectOverlapShortcut(ex, stopwords);
    ++report.examined;
    if (verdict.is_shortcut) ++report.flagged;
    if (!verdict.answer_found) ++report.answer_not_found;
    report.verdicts.push_back(std::move(verdict));
  }
  return report;
}

bool AnswerInSentences(const QaExample& example,
                       std::span<const SupportingFact> sentences) {
  for (const SupportingFact& s : sentences) {
    const Paragraph* p = example.FindParagraph(s.title);
    if (p == nullptr || s.sentence_index >= p->sentences.size()) continue;
    if (ContainsNormalized(p->sentences[s.sentence_index], example.answer)) {
      return true;
    }
  }
  return false;
}

BaselinePrediction BaselinePosition0(const QaExample& example) {
  BaselinePrediction prediction;
  for (const Paragraph& p : example.context) {
    if (p.sentences.empty() || !example.IsGoldParagraph(p.title)) continue;
    prediction.sentences.push_back({p.title, 0});
  }
  prediction.hit = AnswerInSentences(example, prediction.sentences);
  return prediction;
}

BaselinePrediction BaselineOverlap(const QaExample& example,
                                   const WordSet& stopwords) {
  BaselinePrediction prediction;
  const WordSet question = ContentWords(example.question, stopwords);
  std::optional<SupportingFact> best;
  std::size_t best_overlap = 0;
  for (const Paragraph& p : example.context) {
    for (std::size_t i = 0; i < p.sentences.size(); ++i) {
      const WordSet words = ContentWords(p.sentences[i], stopwords);
      std::size_t overlap = 0;
      for (const std::string& w : words) overlap += question.contains(w);
      // Strict '>' keeps the earliest sentence on ties.
      if (!best || overlap > best_overlap) {
        best = SupportingFact{p.title, i};
        best_overlap = overlap;
      }
    }
  }
  if (best) prediction.sentences.push_back(*best);
  prediction.hit = AnswerInSentences(example, prediction.sentences);
  return prediction;
}

double BaselineRates::hit_rate() const { return Fraction(hits, examples); }

BaselineRates RunBaseline(std::span<const QaExample> examples,
                          BaselineKind kind, const WordSet& stopwords) {
  BaselineRates rates;
  for (const QaExample& ex : examples) {
    const BaselinePrediction prediction =
        kind == BaselineKind::kPosition0 ? BaselinePosition0(ex)
                                         : BaselineOverlap(ex, stopwords);
    ++rates.examples;
    if (prediction.hit) ++rates.hits;
  }
  return rates;
}

}  // namespace hopkit::probe
