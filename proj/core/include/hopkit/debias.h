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

// Debiased evaluation sets: every paragraph receives one or two inserted
// sentences (unrelated filler, a related template, or both), and gold
// sentence indices are remapped to follow the original sentences.

#ifndef HOPKIT_DEBIAS_H_
#define HOPKIT_DEBIAS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopkit/random.h"
#include "hopkit/types.h"

namespace hopkit::debias {

enum class Variant { kAddUnrelated, kAddRelated, kAdd2, kAdd2Swap };

inline constexpr std::array<Variant, 4> kAllVariants = {
    Variant::kAddUnrelated, Variant::kAddRelated, Variant::kAdd2,
    Variant::kAdd2Swap};

std::string_view ToString(Variant variant);  // "add-unrelated", ...
std::optional<Variant> ParseVariant(std::string_view name);

// Number of sentences a variant inserts into each perturbed paragraph.
std::size_t InsertionsPerParagraph(Variant variant);

enum class InsertAt { kFront, kRandom, kBack };

std::string_view ToString(InsertAt where);
std::optional<InsertAt> ParseInsertAt(std::string_view name);

enum class SentenceKind { kRelated, kUnrelated };

std::string_view ToString(SentenceKind kind);

// Filler sentences with 12..20 whitespace tokens. Sentences outside that
// range are dropped on construction and counted.
class SentencePool {
 public:
  static constexpr std::size_t kMinTokens = 12;
  static constexpr std::size_t kMaxTokens = 20;

  SentencePool(std::vector<std::string> sentences, std::string source_tag);

  // One sentence per line; blank lines and '#' comment lines are skipped.
  static SentencePool Parse(std::string_view text, std::string source_tag);

  static std::size_t TokenCount(std::string_view sentence);
  static bool Admissible(std::string_view sentence);

  const std::vector<std::string>& sentences() const { return sentences_; }
  const std::string& source_tag() const { return source_tag_; }
  std::size_t dropped() const { return dropped_; }
  bool empty() const { return sentences_.empty(); }

 private:
  std::vector<std::string> sentences_;
  std::string source_tag_;
  std::size_t dropped_ = 0;
};

// Bundled neutral-domain pool.
const SentencePool& DefaultSentencePool();

// Entity type -> templates holding the "#Name" placeholder. The "generic"
// type is mandatory and serves as the fallback.
class TemplateSet {
 public:
  using Map = std::map<std::string, std::vector<std::string>>;

  static constexpr std::string_view kPlaceholder = "#Name";
  static constexpr std::string_view kGenericType = "generic";

  explicit TemplateSet(Map by_type);

  // JSON object: {"film": ["#Name is a nice film.", ...], ...}.
  static TemplateSet Parse(std::string_view json_text);
  std::string Serialize() const;

  bool Has(std::string_view type) const;
  const std::vector<std::string>& Templates(std::string_view type) const;
  const Map& by_type() const {
    return by_type_;
  }

 private:
  Map by_type_;
};

const TemplateSet& DefaultTemplates();

std::string RenderTemplate(std::string_view tmpl, std::string_view name);

// Uniform draw from the pool.
std::string SampleUnrelated(const SentencePool& pool, Rng& rng);

// Entity type of a paragraph from annotations, question type and question
// keywords (who / film / magazine / album). Falls back to "generic".
std::string DetectEntityType(const Paragraph& paragraph,
                             const QaExample& example,
                             const TemplateSet& templates);

// One template of the detected type with #Name set to the paragraph title.
// A rendering that contains the gold answer is redrawn; after bounded
// retries the generic type is tried, then the same templates with a neutral
// referent in place of the title. Throws when everything collides.
std::string RenderRelated(const Paragraph& paragraph, const QaExample& example,
                          const TemplateSet& templates, Rng& rng);

struct Insertion {
  std::string title;
  std::size_t position = 0;
  std::string text;
  SentenceKind kind = SentenceKind::kUnrelated;

  bool operator==(const Insertion&) const = default;
};

struct PerturbationRecord {
  std::string example_id;
  Variant variant = Variant::kAddUnrelated;
  std::vector<Insertion> insertions;
  // Per paragraph title: old sentence index -> new sentence index.
  std::map<std::string, std::vector<std::size_t>> index_remap;
  std::uint64_t seed = 0;
  int run_id = 1;
  InsertAt insert_at = InsertAt::kFront;
  bool gold_only = false;
};

struct PerturbOptions {
  InsertAt insert_at = InsertAt::kFront;
  // Perturb only paragraphs that hold a supporting fact.
  bool gold_only = false;
};

struct Perturbed {
  QaExample example;
  PerturbationRecord record;
};

// Per-example randomness is derived from (seed, example id), so the result
// does not depend on which other examples are processed or in what order.
// Add2 and Add2Swap draw the same related/unrelated pair for a given seed.
Perturbed Perturb(const QaExample& example, Variant variant,
                  const SentencePool& pool, const TemplateSet& templates,
                  std::uint64_t seed, int run_id = 1,
                  const PerturbOptions& options = {});

struct DebiasRun {
  int run_id = 1;
  std::uint64_t seed = 0;
  Variant variant = Variant::kAddUnrelated;
  std::vector<QaExample> examples;
  std::vector<PerturbationRecord> records;
};

inline constexpr std::size_t kMaxRuns = 5;

// One run per seed (1..5 distinct seeds) times each requested variant.
std::vector<DebiasRun> GenerateDebiasedSuite(
    std::span<const QaExample> dataset, std::span<const std::uint64_t> seeds,
    const SentencePool& pool, const TemplateSet& templates,
    const PerturbOptions& options = {},
    std::span<const Variant> variants = kAllVariants);

// Sidecar manifest: every (run, variant, seed) with its records.
std::string SerializeManifest(std::span<const DebiasRun> runs,
                              const PerturbOptions& options,
                              std::string_view pool_tag,
                              const std::map<std::string, std::string>& files);

}  // namespace hopkit::debias

#endif  // HOPKIT_DEBIAS_H_
