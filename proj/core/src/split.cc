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

#include <algorithm>
#include <numeric>

#include "hopkit/corpus.h"
#include "hopkit/random.h"

namespace hopkit::corpus {

namespace {

// Largest-remainder apportionment of `total` over groups of the given sizes,
// never exceeding a group's capacity.
std::vector<std::size_t> Apportion(std::size_t total,
                                   const std::vector<std::size_t>& capacity) {
  const std::size_t population =
      std::accumulate(capacity.begin(), capacity.end(), std::size_t{0});
  std::vector<std::size_t> quota(capacity.size(), 0);
  if (population == 0 || total == 0) return quota;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t g = 0; g < capacity.size(); ++g) {
    const double exact = static_cast<double>(total) *
                         static_cast<double>(capacity[g]) /
                         static_cast<double>(population);
    quota[g] = std::min(capacity[g], static_cast<std::size_t>(exact));
    assigned += quota[g];
    remainders.emplace_back(exact - static_cast<double>(quota[g]), g);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  while (assigned < total) {
    bool progressed = false;
    for (const auto& [rem, g] : remainders) {
      if (assigned == total) break;
      if (quota[g] < capacity[g]) {
        ++quota[g];
        ++assigned;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  return quota;
}

}  // namespace

Split BuildSmallSplit(std::span<const QaExample> examples,
                      const SplitOptions& options) {
  const std::size_t wanted = options.train_size + options.dev_size;
  if (wanted > examples.size()) {
    throw Error("insufficient examples for split: requested " +
                std::to_string(wanted) + ", have " +
                std::to_string(examples.size()) + " (short by " +
                std::to_string(wanted - examples.size()) + ")");
  }
  for (const QaExample& ex : examples) {
    if (ex.evidence_sets.empty()) {
      throw Error("example '" + ex.id + "' has no evidence set");
    }
  }

  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return examples[a].id < examples[b].id;
  });

  Rng rng(options.seed);
  Split split;
  if (!options.stratified) {
    rng.Shuffle(order);
    for (std::size_t i = 0; i < options.train_size; ++i) {
      split.train.push_back(examples[order[i]]);
    }
    for (std::size_t i = options.train_size; i < wanted; ++i) {
      split.dev.push_back(examples[order[i]]);
    }
    return split;
  }

  // Stratified: comparison group first, then bridge, each shuffled in turn.
  std::vector<std::vector<std::size_t>> groups(2);
  for (std::size_t idx : order) {
    groups[Coarsen(examples[idx].type) == CoarseType::kComparison ? 0 : 1]
        .push_back(idx);
  }
  for (auto& group : groups) rng.Shuffle(group);
  std::vector<std::size_t> sizes = {groups[0].size(), groups[1].size()};
  std::vector<std::size_t> train_quota = Apportion(options.train_size, sizes);
  std::vector<std::size_t> left = {sizes[0] - train_quota[0],
                                   sizes[1] - train_quota[1]};
  std::vector<std::size_t> dev_quota = Apportion(options.dev_size, left);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t i = 0; i < train_quota[g]; ++i) {
      split.train.push_back(examples[groups[g][i]]);
    }
    for (std::size_t i = 0; i < dev_quota[g]; ++i) {
      split.dev.push_back(examples[groups[g][train_quota[g] + i]]);
    }
  }
  return split;
}

QaExample SelectAnnotation(QaExample example, std::uint64_t seed) {
  if (example.evidence_sets.empty()) {
    throw Error("example '" + example.id + "' has no evidence set to select");
  }
  if (example.evidence_sets.size() == 1) return example;
  Rng rng(DeriveSeed(seed, example.id, "annotation"));
  const std::size_t pick =
      static_cast<std::size_t>(rng.Uniform(example.evidence_sets.size()));
  EvidenceSet chosen = std::move(example.evidence_sets[pick]);
  example.evidence_sets.clear();
  example.evidence_sets.push_back(std::move(chosen));
  return example;
}

}  // namespace hopkit::corpus
