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

// Loading, validating, writing and re-splitting multi-hop QA corpora in the
// HotpotQA layout, with 2Wiki's `evidences` field and R4C derivation overlays.

#ifndef HOPKIT_CORPUS_H_
#define HOPKIT_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopkit/types.h"

namespace hopkit::corpus {

enum class DatasetFormat { kHotpotQa, kTwoWiki };

std::optional<DatasetFormat> ParseDatasetFormat(std::string_view name);
std::string_view ToString(DatasetFormat format);

// A record that failed parsing or validation. Each bad record is reported
// exactly once, with the first failing field.
struct RecordIssue {
  std::size_t record_index = 0;
  std::string id;          // empty when the id itself could not be read
  std::string field_path;  // e.g. "supporting_facts[1][0]"
  std::string message;

  std::string ToString() const;
};

struct LoadOptions {
  DatasetFormat format = DatasetFormat::kHotpotQa;
  // Strict mode throws ValidationError on any bad record; lenient mode drops
  // bad records and returns them in LoadResult::issues.
  bool lenient = false;
};

struct LoadResult {
  std::vector<QaExample> examples;
  std::vector<RecordIssue> issues;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<RecordIssue> issues);
  const std::vector<RecordIssue>& issues() const { return issues_; }

 private:
  std::vector<RecordIssue> issues_;
};

class OrphanIdsError : public Error {
 public:
  explicit OrphanIdsError(std::vector<std::string> ids);
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  std::vector<std::string> ids_;
};

// Accepts either a JSON array of records or newline-delimited records.
LoadResult ParseDataset(std::string_view text, const LoadOptions& options);
LoadResult LoadDataset(const std::filesystem::path& path,
                       const LoadOptions& options);

// Checks every type invariant. Returns the first violation, if any.
std::optional<RecordIssue> ValidateExample(const QaExample& example,
                                           std::size_t record_index);

// One record per line inside a JSON array; byte-stable for equal input.
std::string SerializeDataset(std::span<const QaExample> examples);
std::string SerializeExample(const QaExample& example);
void WriteDataset(const std::filesystem::path& path,
                  std::span<const QaExample> examples);

// R4C derivations keyed by example id; each id carries its annotations, each
// annotation a list of (head, relation, tail) triples.
using R4cOverlay = std::map<std::string, std::vector<EvidenceSet>>;

R4cOverlay ParseR4cOverlay(std::string_view text);
R4cOverlay LoadR4cOverlay(const std::filesystem::path& path);

// Replaces evidence_sets of the matching base examples. Throws
// OrphanIdsError (listing every orphan) when an overlay id has no base.
void ApplyR4cOverlay(std::vector<QaExample>& base, const R4cOverlay& overlay);

// Drops examples that carry no evidence set.
std::vector<QaExample> KeepAnnotated(std::vector<QaExample> examples);

struct SplitOptions {
  std::size_t train_size = 0;
  std::size_t dev_size = 0;
  std::uint64_t seed = 0;
  // Allocate both splits proportionally per coarse question type.
  bool stratified = false;
};

struct Split {
  std::vector<QaExample> train;
  std::vector<QaExample> dev;
};

// Disjoint train/dev of exactly the requested sizes. Input is ordered by id
// before the seeded shuffle, so input file order does not matter.
Split BuildSmallSplit(std::span<const QaExample> examples,
                      const SplitOptions& options);

// Keeps one evidence set chosen uniformly, deterministic per (id, seed).
QaExample SelectAnnotation(QaExample example, std::uint64_t seed);

}  // namespace hopkit::corpus

#endif  // HOPKIT_CORPUS_H_
