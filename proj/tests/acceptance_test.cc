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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails. Tolerances are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hopkit/adversarial.h"
#include "hopkit/bias_probe.h"
#include "hopkit/corpus.h"
#include "hopkit/debias.h"
#include "hopkit/fixtures.h"
#include "hopkit/io.h"
#include "hopkit/metrics.h"
#include "hopkit/random.h"
#include "hopkit/taskprep.h"
#include "hopkit/text.h"
#include "json.hpp"
#include "support/cli_harness.h"
#include "support/synthetic.h"

namespace hopkit {
namespace {

constexpr double kF1Tolerance = 1e-12;
constexpr double kPublishedTolerance = 0.01;
constexpr double kMetricSeconds = 5.0;
constexpr double kDebiasSeconds = 10.0;
constexpr double kRealDataRelTolerance = 0.15;
constexpr double kPerturbedHitRateCeiling = 0.05;

struct Verdict {
  bool passed = true;
  std::string detail;

  void Fail(const std::string& why) {
    if (passed) detail.clear();
    passed = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void Note(const std::string& text) {
    if (!passed) return;
    if (!detail.empty()) detail += "; ";
    detail += text;
  }
};

std::string Num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1. Token F1 against a brute-force multiset intersection.
double OracleF1(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  std::vector<std::string> pool = gold;
  std::size_t common = 0;
  for (const std::string& t : pred) {
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (pool[i] == t) {
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(i));
        ++common;
        break;
      }
    }
  }
  if (common == 0) return 0.0;
  const double p = static_cast<double>(common) / pred.size();
  const double r = static_cast<double>(common) / gold.size();
  return 2 * p * r / (p + r);
}

Verdict MetricOracle() {
  Verdict v;
  const std::vector<std::string> vocab = {
      "river", "stone", "north", "film", "album", "king",  "queen", "city",
      "paris", "john",  "smith", "music", "band", "novel", "war",   "peace",
      "red",   "blue",  "green", "house", "lake", "hill",  "road",  "bridge",
      "star",  "moon",  "sun",   "tree",  "gold", "silver"};
  Rng rng(20260101);
  auto draw = [&]() {
    std::vector<std::string> tokens(1 + rng.Uniform(8));
    for (std::string& t : tokens) t = vocab[rng.Uniform(vocab.size())];
    return tokens;
  };
  auto join = [](const std::vector<std::string>& tokens) {
    std::string s;
    for (const std::string& t : tokens) s += (s.empty() ? "" : " ") + t;
    return s;
  };
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const std::vector<std::string> pred = draw();
    const std::vector<std::string> gold = draw();
    const double got = metrics::AnswerScores(join(pred), join(gold)).f1;
    worst = std::max(worst, std::abs(got - OracleF1(pred, gold)));
  }
  const double secs = Seconds(start);
  if (worst >= kF1Tolerance) v.Fail("max |F1 - oracle| = " + std::to_string(worst));
  if (secs >= kMetricSeconds) v.Fail("runtime " + Num(secs, 2) + " s");
  v.Note("10000 pairs, max diff " + std::to_string(worst) + ", " + Num(secs, 2) + " s");
  return v;
}

// 2. Joint metrics over the exhaustive grid.
Verdict JointContract() {
  Verdict v;
  const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::size_t checked = 0;
  std::size_t bad = 0;
  for (double p0 : grid) for (double r0 : grid) for (double p1 : grid)
  for (double r1 : grid) for (double p2 : grid) for (double r2 : grid) {
    for (int ems = 0; ems < 8; ++ems) {
      metrics::TaskScores t[3];
      const double ps[3] = {p0, p1, p2};
      const double rs[3] = {r0, r1, r2};
      for (int k = 0; k < 3; ++k) {
        t[k].precision = ps[k];
        t[k].recall = rs[k];
        t[k].f1 = metrics::HarmonicF1(ps[k], rs[k]);
        t[k].em = (ems >> k) & 1;
      }
      const metrics::JointScores j = metrics::Joint(t[0], t[1], t[2]);
      const double p = p0 * p1 * p2;
      const double r = r0 * r1 * r2;
      const double em = ems == 7 ? 1.0 : 0.0;
      const double f1 = p + r == 0 ? 0.0 : 2 * p * r / (p + r);
      if (j.precision != p || j.recall != r || j.em != em || j.f1 != f1) ++bad;
      ++checked;
    }
  }
  if (bad) v.Fail(std::to_string(bad) + " of " + std::to_string(checked) + " grid points differ");
  v.Note(std::to_string(checked) + " grid points exact");
  return v;
}

// 3. Published reductions.
Verdict PublishedNumbers() {
  Verdict v;
  struct Drop { double base, pert, want; };
  for (const Drop& d : {Drop{52.89, 40.36, 23.69}, Drop{72.03, 37.09, 48.51}}) {
    const std::optional<double> got = metrics::PerformanceDrop(d.base, d.pert);
    if (!got || std::abs(*got - d.want) > kPublishedTolerance) {
      v.Fail("drop(" + Num(d.base, 2) + ", " + Num(d.pert, 2) + ") = " +
             (got ? Num(*got) : std::string("undefined")) + ", want " + Num(d.want, 2));
    } else {
      v.Note("drop " + Num(*got));
    }
  }
  const std::vector<double> runs = {13.26, 13.06, 13.59, 13.31, 13.79};
  const metrics::RunStats s = metrics::AggregateValues(runs);
  if (std::abs(s.mean - 13.40) > kPublishedTolerance) {
    v.Fail("aggregate mean " + Num(s.mean) + ", want 13.40");
  } else {
    v.Note("mean " + Num(s.mean) + " +/- " + Num(s.stddev));
  }
  return v;
}

// 4. Debias generator invariants.
Verdict DebiasInvariants() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<QaExample> corpus = testing::Position0Corpus(200, 404);
  const std::uint64_t seed = 17;
  std::map<debias::Variant, std::vector<QaExample>> outputs;
  for (debias::Variant variant : debias::kAllVariants) {
    std::vector<QaExample>& out = outputs[variant];
    std::size_t lost = 0;
    for (const QaExample& ex : corpus) {
      debias::Perturbed p = debias::Perturb(ex, variant, debias::DefaultSentencePool(),
                                            debias::DefaultTemplates(), seed);
      for (std::size_t i = 0; i < ex.supporting_facts.size(); ++i) {
        const SupportingFact& a = ex.supporting_facts[i];
        const SupportingFact& b = p.example.supporting_facts[i];
        const Paragraph* pa = ex.FindParagraph(a.title);
        const Paragraph* pb = p.example.FindParagraph(b.title);
        if (pb == nullptr || b.sentence_index >= pb->sentences.size() ||
            pb->sentences[b.sentence_index] != pa->sentences[a.sentence_index]) {
          ++lost;
        }
      }
      out.push_back(std::move(p.example));
    }
    const double f0 = probe::PositionHistogram(out).overall.fraction_position0();
    const std::string name(debias::ToString(variant));
    if (f0 != 0.0) v.Fail(name + " position0 fraction " + Num(f0));
    if (lost) v.Fail(name + ": " + std::to_string(lost) + " SF strings changed");
  }
  std::size_t unreversed = 0;
  const auto& two = outputs[debias::Variant::kAdd2];
  const auto& swap = outputs[debias::Variant::kAdd2Swap];
  for (std::size_t e = 0; e < corpus.size(); ++e) {
    for (std::size_t p = 0; p < corpus[e].context.size(); ++p) {
      const auto& a = two[e].context[p].sentences;
      const auto& b = swap[e].context[p].sentences;
      if (a[0] != b[1] || a[1] != b[0] || a[0] == a[1]) ++unreversed;
    }
  }
  if (unreversed) v.Fail(std::to_string(unreversed) + " paragraphs without a reversed pair");
  const double secs = Seconds(start);
  if (secs >= kDebiasSeconds) v.Fail("runtime " + Num(secs, 2) + " s");
  v.Note("200 examples x 4 variants, " + Num(secs, 2) + " s");
  return v;
}

// 5. Shortcut detector fixtures, plus the optional real-data check.
void RealDataCheck(Verdict& v, const char* env, corpus::DatasetFormat format,
                   std::size_t published, std::size_t published_total) {
  const char* path = std::getenv(env);
  if (path == nullptr || *path == '\0') {
    v.Note(std::string(env) + " unset, real-data check skipped");
    return;
  }
  corpus::LoadOptions options;
  options.format = format;
  options.lenient = true;
  const std::vector<QaExample> dev = corpus::LoadDataset(path, options).examples;
  const probe::OverlapReport r = probe::ProbeOverlap(dev, DefaultStopwords());
  const double rel = std::abs(static_cast<double>(r.flagged) - published) / published;
  const std::string line = std::string(env) + ": flagged " + std::to_string(r.flagged) + "/" +
                           std::to_string(r.examined) + " vs " + std::to_string(published) +
                           "/" + std::to_string(published_total);
  if (rel > kRealDataRelTolerance) {
    v.Fail(line + " (" + Num(100 * rel, 1) + "% off)");
  } else {
    v.Note(line);
  }
}

Verdict ShortcutFixtures() {
  Verdict v;
  const std::vector<fixtures::FixtureResult> results =
      fixtures::RunFixtures(fixtures::BundledFixtures());
  std::size_t cases = 0;
  std::set<std::string> names;
  for (const fixtures::FixtureResult& r : results) {
    if (r.group != "shortcut" && r.group != "shortcut_rule") continue;
    ++cases;
    names.insert(r.name);
    if (!r.passed) v.Fail(r.group + "/" + r.name + ": " + r.detail);
  }
  if (cases < 12) v.Fail("only " + std::to_string(cases) + " shortcut cases");
  for (const char* required : {"cameron-titanic", "empty-window", "single-overlap",
                               "ratio-exactly-0.65", "two-of-four", "empty"}) {
    if (!names.contains(required)) v.Fail(std::string("missing case ") + required);
  }
  if (!probe::IsOverlapShortcut(13, 20) || probe::IsOverlapShortcut(2, 4)) {
    v.Fail("threshold rule at 13/20 or 2/4");
  }
  v.Note(std::to_string(cases) + " hand-traced cases");
  RealDataCheck(v, "HOPKIT_2WIKI_DEV", corpus::DatasetFormat::kTwoWiki, 56, 5791);
  RealDataCheck(v, "HOPKIT_HOTPOTQA_SMALL_DEV", corpus::DatasetFormat::kHotpotQa, 151, 715);
  return v;
}

// 6. Adversarial properties.
Verdict AdversarialProperties() {
  Verdict v;
  std::size_t emitted = 0, flipped = 0, restored = 0, skipped = 0;
  std::vector<QaExample> comparison;
  for (const testing::PlantedComparison& p : testing::ComparisonSuite(50, 606)) {
    comparison.push_back(p.example);
    auto out = adversarial::InvertComparison(p.example, adversarial::DefaultLexicon());
    const QaExample* ex = std::get_if<QaExample>(&out);
    if (ex == nullptr) { ++skipped; continue; }
    ++emitted;
    flipped += NormalizeAnswer(ex->answer) == NormalizeAnswer(p.complement);
    auto back = adversarial::InvertComparison(*ex, adversarial::DefaultLexicon());
    const QaExample* twice = std::get_if<QaExample>(&back);
    restored += twice != nullptr && twice->question == p.example.question &&
                twice->answer == p.example.answer;
  }
  if (emitted == 0) v.Fail("no comparison question emitted");
  if (flipped != emitted) v.Fail("flip " + std::to_string(flipped) + "/" + std::to_string(emitted));
  if (restored != emitted) {
    v.Fail("involution " + std::to_string(restored) + "/" + std::to_string(emitted));
  }
  adversarial::AdversarialSet cset = adversarial::BuildAdversarialSet(
      comparison, adversarial::DefaultLexicon(), adversarial::DefaultRelationTemplates());
  if (cset.examples.size() + cset.skips.size() != comparison.size()) {
    v.Fail("comparison emitted + skipped != input");
  }

  std::size_t pruned = 0, first_hop = 0;
  std::vector<QaExample> bridge;
  for (const testing::PlantedBridge& p : testing::BridgeSuite(50, 606)) {
    bridge.push_back(p.example);
    auto out = adversarial::PruneBridge(p.example, adversarial::DefaultRelationTemplates());
    if (const QaExample* ex = std::get_if<QaExample>(&out)) {
      ++pruned;
      first_hop += ex->answer == p.first_hop_object;
    }
  }
  adversarial::AdversarialSet bset = adversarial::BuildAdversarialSet(
      bridge, adversarial::DefaultLexicon(), adversarial::DefaultRelationTemplates());
  if (pruned == 0) v.Fail("no bridge question emitted");
  if (first_hop != pruned) {
    v.Fail("first-hop answers " + std::to_string(first_hop) + "/" + std::to_string(pruned));
  }
  if (bset.examples.size() + bset.skips.size() != bridge.size()) {
    v.Fail("bridge emitted + skipped != input");
  }
  v.Note("comparison " + std::to_string(emitted) + " emitted/" + std::to_string(skipped) +
         " skipped, bridge " + std::to_string(bset.examples.size()) + " emitted/" +
         std::to_string(bset.skips.size()) + " skipped");
  return v;
}

// 7. Pair export counts and labels.
Verdict PairExport() {
  Verdict v;
  for (std::size_t n : {1u, 2u, 3u, 10u, 50u}) {
    std::vector<taskprep::EntityMention> m;
    for (std::size_t i = 0; i < n; ++i) m.push_back({"E" + std::to_string(i), "", std::nullopt});
    const std::size_t got = taskprep::GenerateEntityPairs("n", m).size();
    if (got != n * (n - 1)) v.Fail("N=" + std::to_string(n) + " gave " + std::to_string(got));
  }
  const std::vector<std::string> relations = {"director", "father", "is located in the",
                                              "spouse", "is the second book by"};
  Rng rng(707);
  std::size_t mismatches = 0, labeled_total = 0;
  for (int round = 0; round < 1000; ++round) {
    const std::size_t n = 2 + rng.Uniform(9);
    const std::vector<std::string> names = testing::InventNames(n, 1000 + round);
    std::vector<taskprep::EntityMention> mentions;
    for (const std::string& name : names) mentions.push_back({name, "", std::nullopt});
    EvidenceSet gold;
    const std::size_t k = rng.Uniform(2 * n);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t a = rng.Uniform(n);
      const std::size_t b = rng.Uniform(n);
      gold.push_back({names[a], relations[rng.Uniform(relations.size())], names[b]});
    }
    std::vector<taskprep::EntityPairInstance> pairs =
        taskprep::GenerateEntityPairs("r", mentions);
    taskprep::LabelPairs(pairs, gold, taskprep::RelationGroupMap());
    // Brute force: the first triple naming (subject, object) labels the pair.
    for (const auto& p : pairs) {
      std::string want(taskprep::kNoRelation);
      for (const EvidenceTriple& t : gold) {
        if (t.subject == p.subject.text && t.object == p.object.text) {
          want = taskprep::NormalizeRelation(t.relation);
          break;
        }
      }
      mismatches += p.label != want;
      labeled_total += want != taskprep::kNoRelation;
    }
  }
  if (mismatches) v.Fail(std::to_string(mismatches) + " labels differ from the oracle");
  v.Note("1000 plantings, " + std::to_string(labeled_total) + " labeled pairs");
  return v;
}

// 8. Position-0 baseline before and after AddUnrelated.
Verdict BaselineExploitability() {
  Verdict v;
  const std::vector<QaExample> corpus = testing::Position0Corpus(200, 808);
  const double before =
      probe::RunBaseline(corpus, probe::BaselineKind::kPosition0, DefaultStopwords()).hit_rate();
  std::vector<QaExample> perturbed;
  for (const QaExample& ex : corpus) {
    perturbed.push_back(debias::Perturb(ex, debias::Variant::kAddUnrelated,
                                        debias::DefaultSentencePool(),
                                        debias::DefaultTemplates(), 23)
                            .example);
  }
  const double after =
      probe::RunBaseline(perturbed, probe::BaselineKind::kPosition0, DefaultStopwords())
          .hit_rate();
  if (before != 1.0) v.Fail("hit rate before " + Num(before));
  if (after >= kPerturbedHitRateCeiling) v.Fail("hit rate after " + Num(after));
  v.Note("hit rate " + Num(before) + " -> " + Num(after));
  return v;
}

// 9. Byte-identical toy pipeline across two runs.
std::map<std::string, std::string> Snapshot(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) {
      files[std::filesystem::relative(entry.path(), dir).string()] = ReadFile(entry.path());
    }
  }
  return files;
}

bool RunPipeline(const testing::ScratchDir& dir, std::string* failure) {
  std::vector<std::vector<std::string>> steps = {
      {"ingest", "--input", dir / "raw.json", "--out", dir / "out/corpus.json"},
      {"gen", "debias", "--input", dir / "out/corpus.json", "--variant", "add-unrelated",
       "--seed", "13", "--runs", "5", "--out", dir / "out/debiased.json"},
  };
  std::vector<std::string> aggregate = {"report", "aggregate"};
  for (int r = 1; r <= 5; ++r) {
    const std::string report = dir / ("out/eval" + std::to_string(r) + ".json");
    steps.push_back({"eval", "--pred", dir / "pred.json", "--gold",
                     dir / ("out/debiased.add-unrelated.run" + std::to_string(r) + ".json"),
                     "--out", report});
    aggregate.push_back(report);
  }
  aggregate.insert(aggregate.end(), {"--out", dir / "out/aggregate.json"});
  steps.push_back(aggregate);
  for (std::vector<std::string>& step : steps) {
    step.insert(step.begin(), "--quiet");
    testing::CliResult r = testing::RunCli(step);
    if (r.code != 0) {
      *failure = step[1] + " exited " + std::to_string(r.code) + ": " + r.err;
      return false;
    }
  }
  return true;
}

Verdict EndToEndDeterminism() {
  Verdict v;
  testing::ScratchDir dir("acceptance_pipeline");
  const std::vector<QaExample> toy = testing::ToyCorpus(50, 909);
  corpus::WriteDataset(dir / "raw.json", toy);
  nlohmann::json preds = nlohmann::json::object();
  for (const QaExample& ex : toy) {
    nlohmann::json sp = nlohmann::json::array();
    for (const Paragraph& p : ex.context) {
      if (ex.IsGoldParagraph(p.title)) sp.push_back({p.title, 0});
    }
    nlohmann::json evidence = nlohmann::json::array();
    for (const EvidenceTriple& t : ex.evidence_sets.front()) {
      evidence.push_back({t.subject, t.relation, t.object});
    }
    preds[ex.id] = {{"answer", ex.answer}, {"sp", sp}, {"evidence", evidence}};
  }
  WriteFile(dir / "pred.json", preds.dump(1));

  std::string failure;
  if (!RunPipeline(dir, &failure)) {
    v.Fail("first run: " + failure);
    return v;
  }
  const auto first = Snapshot(dir.path() / "out");
  std::filesystem::remove_all(dir.path() / "out");
  if (!RunPipeline(dir, &failure)) {
    v.Fail("second run: " + failure);
    return v;
  }
  const auto second = Snapshot(dir.path() / "out");
  if (first.size() < 20) v.Fail("only " + std::to_string(first.size()) + " artifacts");
  if (first != second) {
    for (const auto& [name, bytes] : first) {
      auto it = second.find(name);
      if (it == second.end() || it->second != bytes) v.Fail(name + " differs");
    }
  }
  v.Note(std::to_string(first.size()) + " artifacts byte-identical");
  return v;
}

}  // namespace
}  // namespace hopkit

int main() {
  using hopkit::Verdict;
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"metric oracle equivalence", hopkit::MetricOracle},
      {"joint-metric contract", hopkit::JointContract},
      {"published-number recomputation", hopkit::PublishedNumbers},
      {"debias generator invariants", hopkit::DebiasInvariants},
      {"shortcut detector fixtures", hopkit::ShortcutFixtures},
      {"adversarial properties", hopkit::AdversarialProperties},
      {"pair-export counting", hopkit::PairExport},
      {"baseline exploitability", hopkit::BaselineExploitability},
      {"end-to-end determinism", hopkit::EndToEndDeterminism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.Fail(std::string("exception: ") + e.what());
    }
    failed += !v.passed;
    std::printf("criterion %zu: %s %s (%s)\n", i + 1, v.passed ? "PASS" : "FAIL",
                criteria[i].first, v.detail.c_str());
  }
  return failed == 0 ? 0 : 1;
}
