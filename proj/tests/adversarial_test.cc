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

#include "hopkit/adversarial.h"

#include <gtest/gtest.h>

#include "support/synthetic.h"

namespace hopkit::adversarial {
namespace {

QaExample Comparison(std::string id, std::string question, std::string answer,
                     EvidenceSet evidence = {}) {
  QaExample ex;
  ex.id = std::move(id);
  ex.type = QuestionType::kComparison;
  ex.question = std::move(question);
  ex.answer = std::move(answer);
  if (!evidence.empty()) ex.evidence_sets.push_back(std::move(evidence));
  return ex;
}

QaExample Bridge(std::string id, std::string question, std::string answer,
                 EvidenceSet evidence) {
  QaExample ex;
  ex.id = std::move(id);
  ex.type = QuestionType::kCompositional;
  ex.question = std::move(question);
  ex.answer = std::move(answer);
  ex.evidence_sets.push_back(std::move(evidence));
  return ex;
}

QaExample Emitted(const Outcome<QaExample>& o) {
  if (const auto* s = std::get_if<SkipReason>(&o)) {
    ADD_FAILURE() << "skipped: " << ToString(*s);
    return {};
  }
  return std::get<QaExample>(o);
}

SkipReason Skipped(const Outcome<QaExample>& o) {
  if (!std::holds_alternative<SkipReason>(o)) {
    ADD_FAILURE() << "emitted: " << std::get<QaExample>(o).question;
    return SkipReason::kRuleNotSelected;
  }
  return std::get<SkipReason>(o);
}

TEST(LexiconTest, ClosedUnderInversion) {
  const InversionLexicon& lex = DefaultLexicon();
  for (const LexiconEntry& e : lex.entries()) {
    int inverses = 0;
    for (const LexiconEntry& f : lex.entries()) {
      if (f.pattern == e.replacement) {
        ++inverses;
        EXPECT_EQ(f.replacement, e.pattern);
        EXPECT_EQ(f.rule, e.rule);
      }
    }
    EXPECT_EQ(inverses, 1) << e.pattern;
  }
  EXPECT_THROW(InversionLexicon({{"first", "later", AnswerRule::kFlipCandidate},
                                 {"first", "last", AnswerRule::kFlipCandidate}}),
               Error);
  EXPECT_THROW(InversionLexicon({{"x", "x", AnswerRule::kFlipCandidate}}), Error);
  EXPECT_EQ(InversionLexicon::Parse(lex.Serialize()).entries(), lex.entries());
  EXPECT_THROW(InversionLexicon::Parse(R"({"entries": [{"pattern": "a"}]})"), Error);
  EXPECT_THROW(InversionLexicon::Parse(
                   R"({"entries": [{"pattern": "a", "replacement": "b", "rule": "x"}]})"),
               Error);
}

TEST(InvertComparisonTest, BornFirstBecomesBornLater) {
  QaExample ex = Comparison("c1", "Who was born first, Ann Lee or Bo Ray?", "Ann Lee");
  const QaExample out = Emitted(InvertComparison(ex, DefaultLexicon()));
  EXPECT_EQ(out.question, "Who was born later, Ann Lee or Bo Ray?");
  EXPECT_EQ(out.answer, "Bo Ray");
  EXPECT_EQ(out.provenance, Provenance::kAdversarial);
  EXPECT_EQ(out.metadata.at("adversarial.rule"), "invert");
  const QaExample back = Emitted(InvertComparison(out, DefaultLexicon()));
  EXPECT_EQ(back.question, ex.question);
  EXPECT_EQ(back.answer, ex.answer);
}

TEST(InvertComparisonTest, DifferentCountriesYesNoVerified) {
  QaExample ex = Comparison("c2", "Are Lyon and Graz located in different countries?", "no",
                            {{"Lyon", "country", "France"}, {"Graz", "country", "France"}});
  const QaExample& out =
      Emitted(InvertComparison(ex, DefaultLexicon(), InvertOptions{true}));
  EXPECT_EQ(out.question, "Are Lyon and Graz located in the same country?");
  EXPECT_EQ(out.answer, "yes");
  EXPECT_EQ(out.metadata.at("adversarial.verified"), "yes");

  // Gold that contradicts the triples is caught after the flip.
  QaExample wrong_gold = Comparison(
      "c2b", "Are Lyon and Graz located in the same country?", "yes",
      {{"Lyon", "country", "France"}, {"Graz", "country", "Austria"}});
  EXPECT_EQ(Skipped(InvertComparison(wrong_gold, DefaultLexicon(), InvertOptions{true})),
            SkipReason::kTripleVerificationFailed);
}

TEST(InvertComparisonTest, KeepsAnswerCase) {
  QaExample ex = Comparison("c3", "Are both from the same country?", "Yes");
  EXPECT_EQ(Emitted(InvertComparison(ex, DefaultLexicon())).answer, "No");
}

TEST(InvertComparisonTest, OperationIsNeverSearchedInsideTheTail) {
  QaExample ex = Comparison("c4", "Which film came out earlier, First Love or Later Life?",
                            "Later Life");
  const QaExample out = Emitted(InvertComparison(ex, DefaultLexicon()));
  EXPECT_EQ(out.question, "Which film came out more recently, First Love or Later Life?");
  EXPECT_EQ(out.answer, "First Love");
}

TEST(InvertComparisonTest, CandidateTailWithOrInsideName) {
  QaExample ex = Comparison("c5", "Which was released first, War or Peace or Hope?", "Hope");
  const QaExample out = Emitted(InvertComparison(ex, DefaultLexicon()));
  EXPECT_EQ(out.answer, "War or Peace");
}

TEST(InvertComparisonTest, SkipReasons) {
  EXPECT_EQ(Skipped(InvertComparison(Comparison("s1", "Who is taller, A1 or B1?", "A1"),
                                     DefaultLexicon())),
            SkipReason::kNoLexiconMatch);
  EXPECT_EQ(Skipped(InvertComparison(Comparison("s2", "Who was born first?", "Zed"),
                                     DefaultLexicon())),
            SkipReason::kCandidatesNotRecovered);
  EXPECT_EQ(Skipped(InvertComparison(Comparison("s3", "Who was born first, A1 or B1?", "C1"),
                                     DefaultLexicon())),
            SkipReason::kGoldNotCandidate);
  EXPECT_EQ(Skipped(InvertComparison(
                Comparison("s4", "Who has the same name, A1 or B1?", "A1"), DefaultLexicon())),
            SkipReason::kRuleMismatch);
  QaExample bridge = Comparison("s5", "Who was born first, A1 or B1?", "A1");
  bridge.type = QuestionType::kInference;
  EXPECT_EQ(Skipped(InvertComparison(bridge, DefaultLexicon())), SkipReason::kRuleMismatch);
  // The way back prefers a longer phrase, so the rewrite does not undo.
  InversionLexicon broken({{"first", "later", AnswerRule::kFlipCandidate},
                           {"later on", "sooner", AnswerRule::kFlipCandidate}});
  EXPECT_EQ(Skipped(InvertComparison(
                Comparison("s6", "Who came first on the list, A1 or B1?", "A1"), broken)),
            SkipReason::kNotInvolutive);
}

TEST(InvertComparisonTest, FallbackToEvidenceSubjects) {
  QaExample ex = Comparison("c6", "Was Ann Lee born first compared with Bo Ray?", "Bo Ray",
                            {{"Ann Lee", "date of birth", "1900"},
                             {"Bo Ray", "date of birth", "1890"}});
  EXPECT_EQ(Emitted(InvertComparison(ex, DefaultLexicon())).answer, "Ann Lee");
}

TEST(RecoverCandidatesTest, Shapes) {
  auto pair = RecoverCandidates(Comparison("r", "Who died first, A B or C D?", "C D"));
  ASSERT_TRUE(pair);
  EXPECT_EQ(pair->first, "A B");
  EXPECT_EQ(pair->second, "C D");
  EXPECT_FALSE(RecoverCandidates(Comparison("r", "Who died first?", "C D")));
}

TEST(RelationTemplatesTest, RenderAndGenericFallback) {
  const RelationQuestionTemplates& t = DefaultRelationTemplates();
  bool generic = true;
  EXPECT_EQ(t.Render("father", "Joan of Valois", &generic),
            "Who is the father of Joan of Valois?");
  EXPECT_FALSE(generic);
  EXPECT_EQ(t.Render(" Father ", "X", &generic), "Who is the father of X?");
  EXPECT_EQ(t.Render("record label", "X", &generic), "What is the record label of X?");
  EXPECT_TRUE(generic);
  EXPECT_THROW(RelationQuestionTemplates(std::map<std::string, std::string>{{"father", "Who is it?"}}), Error);
  RelationQuestionTemplates back = RelationQuestionTemplates::Parse(t.Serialize());
  EXPECT_EQ(back.Render("director", "Y"), t.Render("director", "Y"));
}

TEST(PruneBridgeTest, JoanOfValois) {
  QaExample ex = Bridge("b1", "Who is the paternal grandfather of Joan of Valois?",
                        "Philip III of France",
                        {{"Joan of Valois", "father", "Charles of Valois"},
                         {"Charles of Valois", "father", "Philip III of France"}});
  ex.context = {{"Joan of Valois", {"Joan of Valois was a French princess.",
                                    "She was a daughter of Charles of Valois."}},
                {"Charles of Valois", {"Charles of Valois was a son of Philip III of France."}}};
  ex.supporting_facts = {{"Joan of Valois", 1}, {"Charles of Valois", 0}};
  const QaExample out = Emitted(PruneBridge(ex, DefaultRelationTemplates()));
  EXPECT_EQ(out.question, "Who is the father of Joan of Valois?");
  EXPECT_EQ(out.answer, "Charles of Valois");
  EXPECT_EQ(out.supporting_facts, (std::vector<SupportingFact>{{"Joan of Valois", 1}}));
  EXPECT_EQ(out.context, ex.context);
  EXPECT_EQ(out.metadata.at("adversarial.template"), "relation");
  EXPECT_EQ(out.metadata.at("adversarial.sf_paragraph"), "Joan of Valois");
}

TEST(PruneBridgeTest, SingleTripleLongestSubjectAndSkips) {
  QaExample one = Bridge("b2", "Where was Ann Lee born?", "Paris",
                         {{"Ann Lee", "place of birth", "Paris"}});
  EXPECT_EQ(Emitted(PruneBridge(one, DefaultRelationTemplates())).question,
            "Where was Ann Lee born?");

  QaExample longest = Bridge("b3", "Who is the mother of the star of Ann Lee Story?", "X",
                             {{"Ann Lee", "father", "Y"},
                              {"Ann Lee Story", "cast member", "Z"},
                              {"Z", "mother", "X"}});
  const QaExample out = Emitted(PruneBridge(longest, DefaultRelationTemplates()));
  EXPECT_EQ(out.answer, "Z");

  QaExample none = Bridge("b4", "Who is it?", "X", {{"Ann Lee", "father", "X"}});
  EXPECT_EQ(Skipped(PruneBridge(none, DefaultRelationTemplates())),
            SkipReason::kNoSubjectInQuestion);
  QaExample two = one;
  two.evidence_sets.push_back(one.evidence_sets[0]);
  EXPECT_EQ(Skipped(PruneBridge(two, DefaultRelationTemplates())),
            SkipReason::kMultipleEvidenceSets);
  QaExample empty = one;
  empty.evidence_sets.clear();
  EXPECT_EQ(Skipped(PruneBridge(empty, DefaultRelationTemplates())), SkipReason::kNoEvidence);
}

TEST(BuildAdversarialSetTest, HandBuiltMixedSet) {
  struct Expected {
    std::string id, question, answer;
  };
  std::vector<QaExample> input = {
      Comparison("m01", "Who was born first, Ann Lee or Bo Ray?", "Bo Ray"),
      Comparison("m02", "Which film came out earlier, Rivers or Lakes?", "Lakes"),
      Comparison("m03", "Who is older, Ann Lee or Bo Ray?", "Ann Lee"),
      Comparison("m04", "Which river is longer, Nile or Volga?", "Nile"),
      Comparison("m05", "Are Ann Lee and Bo Ray of the same nationality?", "yes"),
      Comparison("m06", "Who is taller, Ann Lee or Bo Ray?", "Ann Lee"),
      Bridge("m07", "Who is the mother of the director of Rivers?", "Cy Dow",
             {{"Rivers", "director", "Bo Ray"}, {"Bo Ray", "mother", "Cy Dow"}}),
      Bridge("m08", "Where was the director of Lakes born?", "Lyon",
             {{"Lakes", "director", "Ann Lee"}, {"Ann Lee", "place of birth", "Lyon"}}),
      Bridge("m09", "When did the composer of Hills die?", "1950",
             {{"Hills", "composer", "Ed Fox"}, {"Ed Fox", "date of death", "1950"}}),
      Bridge("m10", "Who is the spouse of Ed Fox's teacher?", "Di Ash",
             {{"Ann Lee", "spouse", "Di Ash"}}),
  };
  input[3].type = QuestionType::kBridgeComparison;
  const std::vector<Expected> want = {
      {"m01", "Who was born later, Ann Lee or Bo Ray?", "Ann Lee"},
      {"m02", "Which film came out more recently, Rivers or Lakes?", "Rivers"},
      {"m03", "Who is younger, Ann Lee or Bo Ray?", "Bo Ray"},
      {"m04", "Which river is shorter, Nile or Volga?", "Volga"},
      {"m05", "Are Ann Lee and Bo Ray of different nationalities?", "no"},
      {"m07", "Who is the director of Rivers?", "Bo Ray"},
      {"m08", "Who is the director of Lakes?", "Ann Lee"},
      {"m09", "Who is the composer of Hills?", "Ed Fox"},
  };
  AdversarialSet set = BuildAdversarialSet(input, DefaultLexicon(), DefaultRelationTemplates());
  ASSERT_EQ(set.examples.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_EQ(set.examples[i].id, want[i].id);
    EXPECT_EQ(set.examples[i].question, want[i].question);
    EXPECT_EQ(set.examples[i].answer, want[i].answer);
  }
  ASSERT_EQ(set.skips.size(), 2u);
  EXPECT_EQ(set.skips[0].example_id, "m06");
  EXPECT_EQ(set.skips[0].reason, SkipReason::kNoLexiconMatch);
  EXPECT_EQ(set.skips[1].reason, SkipReason::kNoSubjectInQuestion);
  EXPECT_EQ(set.examples.size() + set.skips.size(), input.size());
}

TEST(BuildAdversarialSetTest, UnmatchedOnlyAndRuleSelection) {
  std::vector<QaExample> input = {Comparison("u1", "Who is taller, A1 or B1?", "A1"),
                                  Comparison("u2", "Who is heavier, A1 or B1?", "B1")};
  AdversarialSet set = BuildAdversarialSet(input, DefaultLexicon(), DefaultRelationTemplates());
  EXPECT_TRUE(set.examples.empty());
  EXPECT_EQ(set.SkipCounts().at(SkipReason::kNoLexiconMatch), 2u);

  std::vector<QaExample> toy = testing::ToyCorpus(20, 2);
  AdversarialSet invert_only = BuildAdversarialSet(toy, DefaultLexicon(),
                                                   DefaultRelationTemplates(),
                                                   RuleSelection::kInvert);
  EXPECT_EQ(invert_only.SkipCounts().at(SkipReason::kRuleNotSelected), 10u);
  EXPECT_EQ(ParseRuleSelection("both"), RuleSelection::kBoth);
  EXPECT_FALSE(ParseRuleSelection("all"));
}

TEST(BuildAdversarialSetTest, SyntheticSuitesProperties) {
  for (const auto& p : testing::ComparisonSuite(50, 21)) {
    const QaExample out = Emitted(InvertComparison(p.example, DefaultLexicon()));
    EXPECT_EQ(out.answer, p.complement) << p.example.question;
    const QaExample back = Emitted(InvertComparison(out, DefaultLexicon()));
    EXPECT_EQ(back.question, p.example.question);
    EXPECT_EQ(back.answer, p.example.answer);
  }
  for (const auto& p : testing::BridgeSuite(50, 21)) {
    const QaExample out = Emitted(PruneBridge(p.example, DefaultRelationTemplates()));
    EXPECT_EQ(out.answer, p.first_hop_object);
    EXPECT_EQ(out.answer, out.evidence_sets[0][0].object);
  }
}

TEST(RestrictToBaseTest, ExactAndPrefixIds) {
  std::vector<QaExample> base = {Comparison("5a8b", "q", "a"), Comparison("77", "q", "a")};
  std::vector<QaExample> adv = {Comparison("5a8b", "q", "a"), Comparison("5a8b_1", "q", "a"),
                                Comparison("77-x", "q", "a"), Comparison("78", "q", "a"),
                                Comparison("5a8bc", "q", "a")};
  std::vector<QaExample> kept = RestrictToBase(adv, base);
  ASSERT_EQ(kept.size(), 3u);
  EXPECT_EQ(kept[2].id, "77-x");
}

}  // namespace
}  // namespace hopkit::adversarial
