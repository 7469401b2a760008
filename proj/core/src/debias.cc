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

#include "hopkit/debias.h"

#include <algorithm>
#include <set>

#include "hopkit/text.h"
#include "json.hpp"

namespace hopkit::debias {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr int kMaxRedraws = 16;

// A candidate insertion must not mention the gold answer and must not
// duplicate a sentence already in the paragraph.
bool Collides(std::string_view sentence, const Paragraph& paragraph,
              const QaExample& example) {
  if (ContainsNormalized(sentence, example.answer)) return true;
  return std::find(paragraph.sentences.begin(), paragraph.sentences.end(),
                   sentence) != paragraph.sentences.end();
}

std::string GuardedUnrelated(const SentencePool& pool, Rng& rng,
                             const Paragraph& paragraph,
                             const QaExample& example) {
  if (pool.empty()) throw Error("unrelated-sentence pool is empty");
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    std::string s = SampleUnrelated(pool, rng);
    if (!Collides(s, paragraph, example)) return s;
  }
  // Rejection kept failing: draw among the admissible sentences directly.
  std::vector<const std::string*> ok;
  for (const std::string& s : pool.sentences()) {
    if (!Collides(s, paragraph, example)) ok.push_back(&s);
  }
  if (ok.empty()) {
    throw Error("example '" + example.id +
                "': every pooled sentence collides with the answer");
  }
  return *ok[rng.Uniform(ok.size())];
}

std::string NeutralRender(std::string_view tmpl) {
  const std::size_t pos = tmpl.find(TemplateSet::kPlaceholder);
  return RenderTemplate(tmpl, pos == 0 ? "This" : "this");
}

std::optional<std::string> DrawTemplate(
    const std::vector<std::string>& templates, const Paragraph& paragraph,
    const QaExample& example, Rng& rng, bool neutral) {
  if (templates.empty()) return std::nullopt;
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    const std::string& tmpl = templates[rng.Uniform(templates.size())];
    std::string s =
        neutral ? NeutralRender(tmpl) : RenderTemplate(tmpl, paragraph.title);
    if (!Collides(s, paragraph, example)) return s;
  }
  return std::nullopt;
}

std::string MapAnnotatedType(std::string type) {
  type = ToLower(type);
  if (type == "per" || type == "people") return "person";
  if (type == "movie" || type == "work_of_art") return "film";
  return type;
}

}  // namespace

std::string_view ToString(Variant variant) {
  switch (variant) {
    case Variant::kAddUnrelated: return "add-unrelated";
    case Variant::kAddRelated: return "add-related";
    case Variant::kAdd2: return "add2";
    case Variant::kAdd2Swap: return "add2swap";
  }
  return "add-unrelated";
}

std::optional<Variant> ParseVariant(std::string_view name) {
  for (Variant v : kAllVariants) {
    if (ToString(v) == name) return v;
  }
  return std::nullopt;
}

std::size_t InsertionsPerParagraph(Variant variant) {
  return variant == Variant::kAdd2 || variant == Variant::kAdd2Swap ? 2 : 1;
}

std::string_view ToString(InsertAt where) {
  switch (where) {
    case InsertAt::kFront: return "front";
    case InsertAt::kRandom: return "random";
    case InsertAt::kBack: return "back";
  }
  return "front";
}

std::optional<InsertAt> ParseInsertAt(std::string_view name) {
  if (name == "front") return InsertAt::kFront;
  if (name == "random") return InsertAt::kRandom;
  if (name == "back") return InsertAt::kBack;
  return std::nullopt;
}

std::string_view ToString(SentenceKind kind) {
  return kind == SentenceKind::kRelated ? "related" : "unrelated";
}

SentencePool::SentencePool(std::vector<std::string> sentences,
                           std::string source_tag)
    : source_tag_(std::move(source_tag)) {
  for (std::string& s : sentences) {
    if (Admissible(s)) {
      sentences_.push_back(std::move(s));
    } else {
      ++dropped_;
    }
  }
}

SentencePool SentencePool::Parse(std::string_view text,
                                 std::string source_tag) {
  std::vector<std::string> sentences;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line = Trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty() || line[0] == '#') continue;
    sentences.push_back(std::move(line));
  }
  return SentencePool(std::move(sentences), std::move(source_tag));
}

std::size_t SentencePool::TokenCount(std::string_view sentence) {
  return SplitWhitespace(sentence).size();
}

bool SentencePool::Admissible(std::string_view sentence) {
  const std::size_t n = TokenCount(sentence);
  return n >= kMinTokens && n <= kMaxTokens;
}

TemplateSet::TemplateSet(std::map<std::string, std::vector<std::string>> by_type)
    : by_type_(std::move(by_type)) {
  auto generic = by_type_.find(std::string(kGenericType));
  if (generic == by_type_.end() || generic->second.empty()) {
    throw Error("template set needs at least one 'generic' template");
  }
  for (const auto& [type, templates] : by_type_) {
    for (const std::string& t : templates) {
      if (t.find(kPlaceholder) == std::string::npos) {
        throw Error("template for '" + type + "' lacks #Name: " + t);
      }
    }
  }
}

TemplateSet TemplateSet::Parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed template file: ") + e.what());
  }
  if (!doc.is_object()) throw Error("template file must be a JSON object");
  std::map<std::string, std::vector<std::string>> by_type;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it->is_array()) {
      throw Error("templates for '" + it.key() + "' must be an array");
    }
    for (const auto& t : *it) {
      if (!t.is_string()) {
        throw Error("template for '" + it.key() + "' is not a string");
      }
      by_type[it.key()].push_back(t.get<std::string>());
    }
  }
  return TemplateSet(std::move(by_type));
}

std::string TemplateSet::Serialize() const {
  ordered_json out = ordered_json::object();
  for (const auto& [type, templates] : by_type_) out[type] = templates;
  return out.dump(2) + "\n";
}

bool TemplateSet::Has(std::string_view type) const {
  auto it = by_type_.find(std::string(type));
  return it != by_type_.end() && !it->second.empty();
}

const std::vector<std::string>& TemplateSet::Templates(
    std::string_view type) const {
  auto it = by_type_.find(std::string(type));
  if (it == by_type_.end() || it->second.empty()) {
    return by_type_.at(std::string(kGenericType));
  }
  return it->second;
}

std::string RenderTemplate(std::string_view tmpl, std::string_view name) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    std::size_t hit = tmpl.find(TemplateSet::kPlaceholder, pos);
    if (hit == std::string_view::npos) break;
    out.append(tmpl.substr(pos, hit - pos));
    out.append(name);
    pos = hit + TemplateSet::kPlaceholder.size();
  }
  out.append(tmpl.substr(pos));
  return out;
}

std::string SampleUnrelated(const SentencePool& pool, Rng& rng) {
  if (pool.empty()) throw Error("unrelated-sentence pool is empty");
  return pool.sentences()[rng.Uniform(pool.sentences().size())];
}

std::string DetectEntityType(const Paragraph& paragraph,
                             const QaExample& example,
                             const TemplateSet& templates) {
  auto usable = [&](const std::string& type) { return templates.Has(type); };
  if (auto it = example.entity_types.find(paragraph.title);
      it != example.entity_types.end()) {
    std::string type = MapAnnotatedType(it->second);
    if (usable(type)) return type;
  }

  // First noun cue in question order; "movie" counts as film.
  std::string noun;
  bool person_cue = false;
  for (const std::string& token : ProbeTokens(example.question)) {
    if (noun.empty()) {
      if (token == "film" || token == "films" || token == "movie") {
        noun = "film";
      } else if (token == "magazine" || token == "magazines") {
        noun = "magazine";
      } else if (token == "album" || token == "albums") {
        noun = "album";
      }
    }
    if (token == "who" || token == "whom" || token == "whose") {
      person_cue = true;
    }
  }

  std::string type;
  if (Coarsen(example.type) == CoarseType::kComparison) {
    // Both compared paragraphs share the type the question asks about.
    type = !noun.empty() ? noun : (person_cue ? "person" : "");
  } else if (ContainsNormalized(example.question, paragraph.title)) {
    // The entity named in a bridge question is the one the noun describes.
    type = noun;
  } else {
    type = person_cue ? "person" : noun;
  }
  if (!type.empty() && usable(type)) return type;
  return std::string(TemplateSet::kGenericType);
}

std::string RenderRelated(const Paragraph& paragraph, const QaExample& example,
                          const TemplateSet& templates, Rng& rng) {
  const std::string type = DetectEntityType(paragraph, example, templates);
  const auto& typed = templates.Templates(type);
  const auto& generic = templates.Templates(TemplateSet::kGenericType);
  if (auto s = DrawTemplate(typed, paragraph, example, rng, false)) return *s;
  if (auto s = DrawTemplate(generic, paragraph, example, rng, false)) return *s;
  // The title itself carries the answer (common for bridge answers): refer
  // to the paragraph without naming it.
  if (auto s = DrawTemplate(typed, paragraph, example, rng, true)) return *s;
  if (auto s = DrawTemplate(generic, paragraph, example, rng, true)) return *s;
  throw Error("example '" + example.id + "': every template for paragraph '" +
              paragraph.title + "' collides with the answer");
}

Perturbed Perturb(const QaExample& example, Variant variant,
                  const SentencePool& pool, const TemplateSet& templates,
                  std::uint64_t seed, int run_id,
                  const PerturbOptions& options) {
  Rng related_rng(DeriveSeed(seed, example.id, "related"));
  Rng unrelated_rng(DeriveSeed(seed, example.id, "unrelated"));
  Rng position_rng(DeriveSeed(seed, example.id, "position"));

  const bool wants_related = variant != Variant::kAddUnrelated;
  const bool wants_unrelated = variant != Variant::kAddRelated;

  Perturbed out{example, {}};
  PerturbationRecord& record = out.record;
  record.example_id = example.id;
  record.variant = variant;
  record.seed = seed;
  record.run_id = run_id;
  record.insert_at = options.insert_at;
  record.gold_only = options.gold_only;

  for (Paragraph& p : out.example.context) {
    if (options.gold_only && !example.IsGoldParagraph(p.title)) continue;

    std::optional<std::string> related;
    std::optional<std::string> unrelated;
    if (wants_related) {
      related = RenderRelated(p, example, templates, related_rng);
    }
    if (wants_unrelated) {
      unrelated = GuardedUnrelated(pool, unrelated_rng, p, example);
    }

    std::vector<std::pair<std::string, SentenceKind>> block;
    if (variant == Variant::kAdd2Swap) {
      block.emplace_back(*unrelated, SentenceKind::kUnrelated);
      block.emplace_back(*related, SentenceKind::kRelated);
    } else {
      if (related) block.emplace_back(*related, SentenceKind::kRelated);
      if (unrelated) block.emplace_back(*unrelated, SentenceKind::kUnrelated);
    }

    const std::size_t n = p.sentences.size();
    std::size_t at = 0;
    switch (options.insert_at) {
      case InsertAt::kFront: at = 0; break;
      case InsertAt::kBack: at = n; break;
      case InsertAt::kRandom: at = position_rng.Uniform(n + 1); break;
    }

    std::vector<std::size_t> remap(n);
    for (std::size_t i = 0; i < n; ++i) {
      remap[i] = i < at ? i : i + block.size();
    }
    for (std::size_t k = 0; k < block.size(); ++k) {
      p.sentences.insert(p.sentences.begin() + at + k, block[k].first);
      record.insertions.push_back({p.title, at + k, block[k].first,
                                   block[k].second});
    }
    record.index_remap[p.title] = std::move(remap);
  }

  for (SupportingFact& sf : out.example.supporting_facts) {
    auto it = record.index_remap.find(sf.title);
    if (it != record.index_remap.end()) {
      sf.sentence_index = it->second.at(sf.sentence_index);
    }
  }
  out.example.provenance = Provenance::kDebiased;
  out.example.metadata["debias.variant"] = std::string(ToString(variant));
  out.example.metadata["debias.run"] = std::to_string(run_id);
  out.example.metadata["debias.insert_at"] =
      std::string(ToString(options.insert_at));
  return out;
}

std::vector<DebiasRun> GenerateDebiasedSuite(
    std::span<const QaExample> dataset, std::span<const std::uint64_t> seeds,
    const SentencePool& pool, const TemplateSet& templates,
    const PerturbOptions& options, std::span<const Variant> variants) {
  if (seeds.empty() || seeds.size() > kMaxRuns) {
    throw Error("debias suite needs between 1 and 5 seeds, got " +
                std::to_string(seeds.size()));
  }
  std::set<std::uint64_t> distinct(seeds.begin(), seeds.end());
  if (distinct.size() != seeds.size()) {
    throw Error("debias suite seeds must be distinct");
  }
  std::vector<DebiasRun> runs;
  for (std::size_t r = 0; r < seeds.size(); ++r) {
    for (Variant variant : variants) {
      DebiasRun run;
      run.run_id = static_cast<int>(r + 1);
      run.seed = seeds[r];
      run.variant = variant;
      run.examples.reserve(dataset.size());
      run.records.reserve(dataset.size());
      for (const QaExample& ex : dataset) {
        Perturbed p = Perturb(ex, variant, pool, templates, run.seed,
                              run.run_id, options);
        run.examples.push_back(std::move(p.example));
        run.records.push_back(std::move(p.record));
      }
      runs.push_back(std::move(run));
    }
  }
  return runs;
}

std::string SerializeManifest(std::span<const DebiasRun> runs,
                              const PerturbOptions& options,
                              std::string_view pool_tag,
                              const std::map<std::string, std::string>& files) {
  ordered_json doc;
  doc["insert_at"] = std::string(ToString(options.insert_at));
  // Where the original work placed its sentences is not documented; front
  // insertion is this toolkit's default and every manifest says so.
  doc["insert_at_assumed"] = options.insert_at == InsertAt::kFront;
  doc["gold_only"] = options.gold_only;
  doc["pool"] = std::string(pool_tag);
  ordered_json list = ordered_json::array();
  for (const DebiasRun& run : runs) {
    ordered_json entry;
    entry["run"] = run.run_id;
    entry["variant"] = std::string(ToString(run.variant));
    entry["seed"] = run.seed;
    const std::string key =
        "run" + std::to_string(run.run_id) + "/" + std::string(ToString(run.variant));
    if (auto it = files.find(key); it != files.end()) entry["file"] = it->second;
    entry["examples"] = run.examples.size();
    ordered_json records = ordered_json::array();
    for (const PerturbationRecord& rec : run.records) {
      ordered_json r;
      r["id"] = rec.example_id;
      ordered_json ins = ordered_json::array();
      for (const Insertion& i : rec.insertions) {
        ins.push_back({{"title", i.title},
                       {"position", i.position},
                       {"kind", std::string(ToString(i.kind))},
                       {"text", i.text}});
      }
      r["insertions"] = std::move(ins);
      ordered_json remap = ordered_json::object();
      for (const auto& [title, indices] : rec.index_remap) remap[title] = indices;
      r["index_remap"] = std::move(remap);
      records.push_back(std::move(r));
    }
    entry["records"] = std::move(records);
    list.push_back(std::move(entry));
  }
  doc["runs"] = std::move(list);
  return doc.dump(1, ' ', false, ordered_json::error_handler_t::replace) + "\n";
}

}  // namespace hopkit::debias
