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

#include <gtest/gtest.h>

#include <filesystem>
#include <set>

#include "hopkit/io.h"
#include "support/synthetic.h"

namespace hopkit::corpus {
namespace {

constexpr char kRecord[] = R"({"_id": "q1", "type": "comparison",
  "question": "Who was born first, Ann Lee or Bo Ray?", "answer": "Ann Lee",
  "context": [["Ann Lee", ["Ann Lee was born in 1900.", "She sang."]],
              ["Bo Ray", ["Bo Ray was born in 1910."]]],
  "supporting_facts": [["Ann Lee", 0], ["Bo Ray", 0]],
  "evidences": [["Ann Lee", "date of birth", "1900"], ["Bo Ray", "date of birth", "1910"]]})";

std::string Replace(std::string s, const std::string& from, const std::string& to) {
  s.replace(s.find(from), from.size(), to);
  return s;
}

LoadOptions TwoWiki(bool lenient = false) {
  return LoadOptions{DatasetFormat::kTwoWiki, lenient};
}

TEST(ParseDatasetTest, ArrayAndJsonl) {
  const std::string array = std::string("[") + kRecord + "]";
  LoadResult a = ParseDataset(array, TwoWiki());
  ASSERT_EQ(a.examples.size(), 1u);
  const QaExample& ex = a.examples[0];
  EXPECT_EQ(ex.id, "q1");
  EXPECT_EQ(ex.type, QuestionType::kComparison);
  EXPECT_EQ(ex.context[0].sentences[1], "She sang.");
  EXPECT_EQ(ex.supporting_facts[1], (SupportingFact{"Bo Ray", 0}));
  ASSERT_EQ(ex.evidence_sets.size(), 1u);
  EXPECT_EQ(ex.evidence_sets[0][1].object, "1910");

  std::string jsonl = kRecord;
  std::erase(jsonl, '\n');
  LoadResult b = ParseDataset(jsonl + "\n\n" + jsonl, LoadOptions{});
  ASSERT_EQ(b.examples.size(), 2u);
  EXPECT_EQ(b.examples[0], ex);
}

TEST(ParseDatasetTest, EmptyInput) {
  EXPECT_TRUE(ParseDataset("[]", TwoWiki()).examples.empty());
  EXPECT_TRUE(ParseDataset("", TwoWiki()).issues.empty());
}

TEST(ParseDatasetTest, AbsentSupportingTitleNamesTitle) {
  std::string bad = Replace(kRecord, "[\"Bo Ray\", 0]]", "[\"Cy Dow\", 0]]");
  try {
    ParseDataset("[" + bad + "]", TwoWiki());
    FAIL();
  } catch (const ValidationError& e) {
    ASSERT_EQ(e.issues().size(), 1u);
    EXPECT_EQ(e.issues()[0].record_index, 0u);
    EXPECT_EQ(e.issues()[0].field_path, "supporting_facts[1][0]");
    EXPECT_NE(e.issues()[0].message.find("Cy Dow"), std::string::npos);
  }
}

TEST(ParseDatasetTest, LenientReportsEachBadRecordOnce) {
  std::string out_of_range = kRecord;
  out_of_range = Replace(out_of_range, "[\"Bo Ray\", 0]]", "[\"Bo Ray\", 4]]");
  std::string no_answer = kRecord;
  no_answer = Replace(no_answer, "\"answer\": \"Ann Lee\"", "\"answer\": \" \"");
  const std::string text = "[" + std::string(kRecord) + "," + out_of_range + "," +
                           no_answer + ", 7]";
  LoadResult r = ParseDataset(text, TwoWiki(true));
  EXPECT_EQ(r.examples.size(), 1u);
  ASSERT_EQ(r.issues.size(), 3u);
  EXPECT_EQ(r.issues[0].record_index, 1u);
  EXPECT_EQ(r.issues[0].field_path, "supporting_facts[1][1]");
  EXPECT_EQ(r.issues[1].field_path, "answer");
  EXPECT_EQ(r.issues[2].record_index, 3u);
  EXPECT_THROW(ParseDataset(text, TwoWiki()), ValidationError);
}

TEST(ParseDatasetTest, FieldErrors) {
  auto first_issue = [](std::string rec, DatasetFormat f) {
    LoadResult r = ParseDataset("[" + rec + "]", LoadOptions{f, true});
    return r.issues.empty() ? std::string() : r.issues[0].field_path;
  };
  std::string no_ev = kRecord;
  no_ev = no_ev.substr(0, no_ev.find(",\n  \"evidences\"")) + "}";
  EXPECT_EQ(first_issue(no_ev, DatasetFormat::kTwoWiki), "evidences");
  EXPECT_EQ(first_issue(no_ev, DatasetFormat::kHotpotQa), "");
  std::string bad_type = kRecord;
  bad_type = Replace(bad_type, "comparison", "multihop");
  EXPECT_EQ(first_issue(bad_type, DatasetFormat::kTwoWiki), "type");
  std::string negative = kRecord;
  negative = Replace(negative, "[\"Bo Ray\", 0]]", "[\"Bo Ray\", -1]]");
  EXPECT_EQ(first_issue(negative, DatasetFormat::kTwoWiki), "supporting_facts[1][1]");
  std::string dup = kRecord;
  dup = Replace(dup, "[\"Bo Ray\", [\"Bo", "[\"Ann Lee\", [\"Bo");
  EXPECT_EQ(first_issue(dup, DatasetFormat::kTwoWiki), "context[1][0]");
  std::string blank_triple = kRecord;
  blank_triple = Replace(blank_triple, "\"1910\"]]", "\"  \"]]");
  EXPECT_EQ(first_issue(blank_triple, DatasetFormat::kTwoWiki), "evidences[1]");
  EXPECT_THROW(ParseDataset("[{", TwoWiki()), Error);
}

TEST(SerializeTest, RoundTripIsStructurallyEqualAndStable) {
  std::vector<QaExample> toy = testing::ToyCorpus(20, 3);
  toy[0].provenance = Provenance::kDebiased;
  toy[0].metadata["debias.variant"] = "add2";
  toy[1].entity_types["x"] = "per";
  toy[2].evidence_sets.push_back({{"a", "b", "c"}});
  const std::string text = SerializeDataset(toy);
  LoadResult back = ParseDataset(text, TwoWiki());
  EXPECT_EQ(back.examples, toy);
  EXPECT_EQ(SerializeDataset(back.examples), text);
  EXPECT_EQ(SerializeDataset({}), "[]\n");
}

TEST(SerializeTest, WriteAndLoadFile) {
  const auto path = std::filesystem::temp_directory_path() / "hopkit_corpus_test.json";
  std::vector<QaExample> toy = testing::ToyCorpus(4, 1);
  WriteDataset(path, toy);
  EXPECT_EQ(LoadDataset(path, TwoWiki()).examples, toy);
  std::filesystem::remove(path);
  EXPECT_THROW(LoadDataset(path, TwoWiki()), Error);
}

TEST(R4cOverlayTest, ParsesShapesAndTrims) {
  R4cOverlay o = ParseR4cOverlay(R"({
    "a": [[[" X ", "born in", "Y"]], [["X", "is", "Z"], ["Z", "in", "W"]]],
    "b": [["P", "r", "Q"]],
    "c": [[{"head": "H", "relation": "rel", "tail": "T"}]],
    "d": [{"derivation": [["M", "n", "O"]]}]
  })");
  ASSERT_EQ(o["a"].size(), 2u);
  EXPECT_EQ(o["a"][0][0], (EvidenceTriple{"X", "born in", "Y"}));
  EXPECT_EQ(o["a"][1].size(), 2u);
  ASSERT_EQ(o["b"].size(), 1u);
  EXPECT_EQ(o["b"][0][0].object, "Q");
  EXPECT_EQ(o["c"][0][0], (EvidenceTriple{"H", "rel", "T"}));
  EXPECT_EQ(o["d"][0][0].subject, "M");
  EXPECT_THROW(ParseR4cOverlay("[]"), Error);
  EXPECT_THROW(ParseR4cOverlay(R"({"a": 3})"), Error);
}

TEST(R4cOverlayTest, ApplyListsEveryOrphan) {
  std::vector<QaExample> base = testing::Position0Corpus(3, 1);
  R4cOverlay o;
  o[base[1].id] = {{{"a", "r", "b"}}, {{"c", "r", "d"}}};
  o["zz-orphan"] = {{{"a", "r", "b"}}};
  o["aa-orphan"] = {{{"a", "r", "b"}}};
  try {
    ApplyR4cOverlay(base, o);
    FAIL();
  } catch (const OrphanIdsError& e) {
    EXPECT_EQ(e.ids(), (std::vector<std::string>{"aa-orphan", "zz-orphan"}));
  }
  o.erase("zz-orphan");
  o.erase("aa-orphan");
  ApplyR4cOverlay(base, o);
  EXPECT_EQ(base[1].evidence_sets.size(), 2u);
}

TEST(KeepAnnotatedTest, DropsUnannotated) {
  std::vector<QaExample> ex = testing::Position0Corpus(4, 2);
  ex[2].evidence_sets.clear();
  std::vector<QaExample> kept = KeepAnnotated(ex);
  ASSERT_EQ(kept.size(), 3u);
  EXPECT_EQ(kept[2].id, ex[3].id);
}

std::vector<std::string> Ids(const std::vector<QaExample>& v) {
  std::vector<std::string> ids;
  for (const QaExample& e : v) ids.push_back(e.id);
  return ids;
}

TEST(SplitTest, ExactSizesDisjointDeterministic) {
  std::vector<QaExample> pool = testing::ToyCorpus(120, 9);
  Split a = BuildSmallSplit(pool, {70, 30, 7, false});
  EXPECT_EQ(a.train.size(), 70u);
  EXPECT_EQ(a.dev.size(), 30u);
  std::set<std::string> train_ids;
  for (const auto& id : Ids(a.train)) train_ids.insert(id);
  for (const auto& id : Ids(a.dev)) EXPECT_FALSE(train_ids.contains(id));
  Split b = BuildSmallSplit(pool, {70, 30, 7, false});
  EXPECT_EQ(Ids(a.train), Ids(b.train));
  EXPECT_EQ(Ids(a.dev), Ids(b.dev));
  // Input order does not matter.
  std::vector<QaExample> reversed(pool.rbegin(), pool.rend());
  EXPECT_EQ(Ids(BuildSmallSplit(reversed, {70, 30, 7, false}).dev), Ids(a.dev));
  EXPECT_NE(Ids(BuildSmallSplit(pool, {70, 30, 8, false}).dev), Ids(a.dev));
}

TEST(SplitTest, EmptyAndShortfall) {
  std::vector<QaExample> pool = testing::ToyCorpus(10, 1);
  Split s = BuildSmallSplit(pool, {0, 0, 1, false});
  EXPECT_TRUE(s.train.empty());
  EXPECT_TRUE(s.dev.empty());
  try {
    BuildSmallSplit(pool, {8, 5, 1, false});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("short by 3"), std::string::npos);
  }
  pool[4].evidence_sets.clear();
  EXPECT_THROW(BuildSmallSplit(pool, {1, 1, 1, false}), Error);
}

TEST(SplitTest, StratifiedKeepsTypeProportions) {
  std::vector<QaExample> pool = testing::ToyCorpus(200, 4);  // 100 / 100
  Split s = BuildSmallSplit(pool, {100, 40, 3, true});
  auto comparisons = [](const std::vector<QaExample>& v) {
    std::size_t n = 0;
    for (const auto& e : v) n += Coarsen(e.type) == CoarseType::kComparison;
    return n;
  };
  EXPECT_EQ(s.train.size(), 100u);
  EXPECT_EQ(s.dev.size(), 40u);
  EXPECT_EQ(comparisons(s.train), 50u);
  EXPECT_EQ(comparisons(s.dev), 20u);
}

TEST(SelectAnnotationTest, SingletonAndMembership) {
  QaExample ex = testing::Position0Corpus(1, 5)[0];
  EXPECT_EQ(SelectAnnotation(ex, 1), ex);
  ex.evidence_sets = {{{"a", "r", "1"}}, {{"a", "r", "2"}}, {{"a", "r", "3"}}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    QaExample picked = SelectAnnotation(ex, seed);
    ASSERT_EQ(picked.evidence_sets.size(), 1u);
    EXPECT_NE(std::find(ex.evidence_sets.begin(), ex.evidence_sets.end(),
                        picked.evidence_sets[0]),
              ex.evidence_sets.end());
    EXPECT_EQ(SelectAnnotation(ex, seed), picked);
    picked.evidence_sets = ex.evidence_sets;
    EXPECT_EQ(picked, ex);
  }
  ex.evidence_sets.clear();
  EXPECT_THROW(SelectAnnotation(ex, 1), Error);
}

TEST(SelectAnnotationTest, UniformOverThreeSets) {
  int counts[3] = {};
  for (int i = 0; i < 1000; ++i) {
    QaExample ex;
    ex.id = "ex" + std::to_string(i);
    ex.evidence_sets = {{{"a", "r", "0"}}, {{"a", "r", "1"}}, {{"a", "r", "2"}}};
    ++counts[std::stoi(SelectAnnotation(ex, 11).evidence_sets[0][0].object)];
  }
  double chi2 = 0;
  for (int c : counts) {
    EXPECT_NEAR(c / 1000.0, 1.0 / 3.0, 0.05);
    chi2 += (c - 1000.0 / 3) * (c - 1000.0 / 3) / (1000.0 / 3);
  }
  EXPECT_LT(chi2, 13.82);  // two degrees of freedom, p = 0.001
}

}  // namespace
}  // namespace hopkit::corpus
