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

#include "hopkit/fixtures.h"

#include <cmath>
#include <set>
#include <sstream>

#include "hopkit/bias_probe.h"
#include "hopkit/metrics.h"
#include "hopkit/types.h"
#include "json.hpp"

namespace hopkit::fixtures {

using json = nlohmann::json;

namespace {

constexpr double kExact = 1e-9;

// Shortcut cases are traced by hand against the bundled stopword list.
constexpr std::string_view kBundled = R"json({
  "shortcut": [
    {"name": "cameron-titanic",
     "question": "Who directed the film Titanic released in 1997?",
     "answer": "James Cameron",
     "context": [["James Cameron", ["James Cameron directed the film Titanic in 1997."]]],
     "expect": {"found": true, "surrounding": ["directed", "film", "titanic"],
                "overlap": ["directed", "film", "titanic"], "shortcut": true}},
    {"name": "cameron-himself-two-of-four",
     "question": "Who directed Titanic?",
     "answer": "James Cameron",
     "context": [["James Cameron", ["James Cameron directed the film Titanic himself."]]],
     "expect": {"found": true, "surrounding": ["directed", "film", "himself", "titanic"],
                "overlap": ["directed", "titanic"], "shortcut": false}},
    {"name": "empty-window",
     "question": "Where is it?",
     "answer": "Paris",
     "context": [["Paris", ["It is in Paris and it was there."]]],
     "expect": {"found": true, "surrounding": [], "overlap": [], "shortcut": false}},
    {"name": "answer-not-found",
     "question": "Which city hosted the fair?",
     "answer": "London",
     "context": [["Fair", ["The fair was held in Paris in 1900."]]],
     "expect": {"found": false, "surrounding": [], "overlap": [], "shortcut": false}},
    {"name": "single-overlap",
     "question": "Who won two awards?",
     "answer": "Marie Curie",
     "context": [["Marie Curie", ["Marie Curie won the Nobel Prize twice."]]],
     "expect": {"found": true, "surrounding": ["nobel", "prize", "twice", "won"],
                "overlap": ["won"], "shortcut": false}},
    {"name": "two-of-three",
     "question": "Who founded computer theory?",
     "answer": "Alan Turing",
     "context": [["Alan Turing", ["Alan Turing founded computer science."]]],
     "expect": {"found": true, "surrounding": ["computer", "founded", "science"],
                "overlap": ["computer", "founded"], "shortcut": true}},
    {"name": "two-of-two",
     "question": "Who wrote programs first?",
     "answer": "Ada Lovelace",
     "context": [["Ada Lovelace", ["Ada Lovelace wrote programs."]]],
     "expect": {"found": true, "surrounding": ["programs", "wrote"],
                "overlap": ["programs", "wrote"], "shortcut": true}},
    {"name": "three-of-five",
     "question": "Who described gravity using apples?",
     "answer": "Isaac Newton",
     "context": [["Isaac Newton", ["Isaac Newton described gravity using careful mathematical reasoning."]]],
     "expect": {"found": true,
                "surrounding": ["careful", "described", "gravity", "mathematical", "using"],
                "overlap": ["described", "gravity", "using"], "shortcut": false}},
    {"name": "both-sides-five-of-nine",
     "question": "Which German physicist proposed special relativity?",
     "answer": "Albert Einstein",
     "context": [["Albert Einstein", ["Famous German theoretical physicist named Albert Einstein proposed special relativity in Bern."]]],
     "expect": {"found": true,
                "surrounding": ["bern", "famous", "german", "named", "physicist",
                                "proposed", "relativity", "special", "theoretical"],
                "overlap": ["german", "physicist", "proposed", "relativity", "special"],
                "shortcut": false}},
    {"name": "window-truncated-at-five",
     "question": "Who wrote novels about London orphans?",
     "answer": "Charles Dickens",
     "context": [["Charles Dickens", ["Charles Dickens wrote novels about poverty and London orphans."]]],
     "expect": {"found": true, "surrounding": ["novels", "poverty", "wrote"],
                "overlap": ["novels", "wrote"], "shortcut": true}},
    {"name": "first-occurrence-wins",
     "question": "Who composed many symphonies?",
     "answer": "Mozart",
     "context": [["Mozart", ["Mozart was born in Salzburg."]],
                 ["Vienna", ["Mozart composed many symphonies in Vienna."]]],
     "expect": {"found": true, "surrounding": ["born", "salzburg"],
                "overlap": [], "shortcut": false}},
    {"name": "punctuation-and-case",
     "question": "Which novelist received the Nobel Prize in 1993?",
     "answer": "Toni Morrison",
     "context": [["Toni Morrison", ["Toni Morrison, the novelist, received the Nobel Prize."]]],
     "expect": {"found": true, "surrounding": ["nobel", "novelist", "received"],
                "overlap": ["nobel", "novelist", "received"], "shortcut": true}},
    {"name": "window-crosses-sentences",
     "question": "Whose portraits hang in museums and who painted them?",
     "answer": "Frida Kahlo",
     "context": [["Frida Kahlo", ["Frida Kahlo painted.", "Her portraits hang in Mexico City museums."]]],
     "expect": {"found": true, "surrounding": ["hang", "painted", "portraits"],
                "overlap": ["hang", "painted", "portraits"], "shortcut": true}}
  ],
  "shortcut_rule": [
    {"name": "ratio-exactly-0.65", "overlap": 13, "surrounding": 20, "shortcut": true},
    {"name": "ratio-0.6316", "overlap": 12, "surrounding": 19, "shortcut": false},
    {"name": "two-of-three", "overlap": 2, "surrounding": 3, "shortcut": true},
    {"name": "two-of-four", "overlap": 2, "surrounding": 4, "shortcut": false},
    {"name": "one-of-one", "overlap": 1, "surrounding": 1, "shortcut": false},
    {"name": "empty", "overlap": 0, "surrounding": 0, "shortcut": false}
  ],
  "answer": [
    {"name": "partial-name", "pred": "Obama", "gold": "Barack Obama",
     "em": 0, "f1": 0.6666666666666666, "precision": 1, "recall": 0.5},
    {"name": "normalized-match", "pred": "The Beatles!", "gold": "beatles",
     "em": 1, "f1": 1, "precision": 1, "recall": 1},
    {"name": "yes-no-mismatch", "pred": "yes", "gold": "no",
     "em": 0, "f1": 0, "precision": 0, "recall": 0},
    {"name": "yes-against-span", "pred": "yes", "gold": "yes it is",
     "em": 0, "f1": 0, "precision": 0, "recall": 0}
  ],
  "joint": [
    {"name": "half-precision", "precision": [1, 0.5, 1], "recall": [1, 1, 1],
     "em": [1, 0, 1],
     "expect": {"precision": 0.5, "recall": 1, "f1": 0.6666666666666666, "em": 0}},
    {"name": "zero-task", "precision": [1, 0, 1], "recall": [1, 0, 1],
     "em": [1, 0, 1],
     "expect": {"precision": 0, "recall": 0, "f1": 0, "em": 0}},
    {"name": "all-perfect", "precision": [1, 1, 1], "recall": [1, 1, 1],
     "em": [1, 1, 1],
     "expect": {"precision": 1, "recall": 1, "f1": 1, "em": 1}}
  ],
  "drop": [
    {"name": "hotpotqa-small-adversarial-ans-em", "base": 52.89, "perturbed": 40.36,
     "expected": 23.69, "tolerance": 0.01},
    {"name": "2wiki-adversarial-ans-em", "base": 72.03, "perturbed": 37.09,
     "expected": 48.51, "tolerance": 0.01},
    {"name": "no-change", "base": 61.5, "perturbed": 61.5,
     "expected": 0.0, "tolerance": 0.01},
    {"name": "improvement", "base": 50.0, "perturbed": 50.255,
     "expected": -0.51, "tolerance": 0.01}
  ],
  "aggregate": [
    {"name": "add-unrelated-ans-five-runs",
     "values": [13.26, 13.06, 13.59, 13.31, 13.79], "expected": 13.40,
     "tolerance": 0.01}
  ]
}
)json";

std::string Join(const WordSet& words) {
  std::string out = "{";
  for (const std::string& w : words) {
    if (out.size() > 1) out += ", ";
    out += w;
  }
  return out + "}";
}

bool Near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string Num(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

FixtureResult Shortcut(const json& f, const WordSet& stopwords) {
  FixtureResult r{"shortcut", f.at("name").get<std::string>(), true, ""};
  QaExample ex;
  ex.id = r.name;
  ex.type = QuestionType::kBridge;
  ex.question = f.at("question").get<std::string>();
  ex.answer = f.at("answer").get<std::string>();
  for (const auto& p : f.at("context")) {
    ex.context.push_back({p.at(0).get<std::string>(),
                          p.at(1).get<std::vector<std::string>>()});
  }
  const json& want = f.at("expect");
  const auto want_s = want.at("surrounding").get<std::vector<std::string>>();
  const auto want_o = want.at("overlap").get<std::vector<std::string>>();
  const WordSet s(want_s.begin(), want_s.end());
  const WordSet o(want_o.begin(), want_o.end());
  const probe::ShortcutVerdict v = probe::DetectOverlapShortcut(ex, stopwords);
  std::string detail;
  if (v.answer_found != want.at("found").get<bool>()) {
    detail += "found=" + std::string(v.answer_found ? "true" : "false") + "; ";
  }
  if (v.surrounding != s) detail += "S=" + Join(v.surrounding) + " want " + Join(s) + "; ";
  if (v.overlap != o) detail += "O=" + Join(v.overlap) + " want " + Join(o) + "; ";
  if (v.is_shortcut != want.at("shortcut").get<bool>()) {
    detail += "shortcut=" + std::string(v.is_shortcut ? "true" : "false") + "; ";
  }
  r.passed = detail.empty();
  r.detail = detail;
  return r;
}

FixtureResult ShortcutRule(const json& f) {
  FixtureResult r{"shortcut_rule", f.at("name").get<std::string>(), true, ""};
  const bool got = probe::IsOverlapShortcut(f.at("overlap").get<std::size_t>(),
                                            f.at("surrounding").get<std::size_t>());
  if (got != f.at("shortcut").get<bool>()) {
    r.passed = false;
    r.detail = std::string("shortcut=") + (got ? "true" : "false");
  }
  return r;
}

void Compare(FixtureResult& r, const char* field, double got, double want, double tol) {
  if (Near(got, want, tol)) return;
  r.passed = false;
  r.detail += std::string(field) + "=" + Num(got) + " want " + Num(want) + "; ";
}

FixtureResult Answer(const json& f) {
  FixtureResult r{"answer", f.at("name").get<std::string>(), true, ""};
  const metrics::TaskScores s = metrics::AnswerScores(f.at("pred").get<std::string>(),
                                                      f.at("gold").get<std::string>());
  Compare(r, "em", s.em, f.at("em").get<double>(), kExact);
  Compare(r, "f1", s.f1, f.at("f1").get<double>(), kExact);
  Compare(r, "precision", s.precision, f.at("precision").get<double>(), kExact);
  Compare(r, "recall", s.recall, f.at("recall").get<double>(), kExact);
  return r;
}

FixtureResult Joint(const json& f) {
  FixtureResult r{"joint", f.at("name").get<std::string>(), true, ""};
  metrics::TaskScores t[3];
  for (int i = 0; i < 3; ++i) {
    t[i].precision = f.at("precision").at(i).get<double>();
    t[i].recall = f.at("recall").at(i).get<double>();
    t[i].em = f.at("em").at(i).get<double>();
    t[i].f1 = metrics::HarmonicF1(t[i].precision, t[i].recall);
  }
  const metrics::JointScores j = metrics::Joint(t[0], t[1], t[2]);
  const json& want = f.at("expect");
  Compare(r, "precision", j.precision, want.at("precision").get<double>(), kExact);
  Compare(r, "recall", j.recall, want.at("recall").get<double>(), kExact);
  Compare(r, "f1", j.f1, want.at("f1").get<double>(), kExact);
  Compare(r, "em", j.em, want.at("em").get<double>(), kExact);
  return r;
}

FixtureResult Drop(const json& f) {
  FixtureResult r{"drop", f.at("name").get<std::string>(), true, ""};
  const std::optional<double> d = metrics::PerformanceDrop(
      f.at("base").get<double>(), f.at("perturbed").get<double>());
  if (!d) {
    r.passed = false;
    r.detail = "drop undefined";
    return r;
  }
  Compare(r, "drop", *d, f.at("expected").get<double>(), f.at("tolerance").get<double>());
  return r;
}

FixtureResult AggregateFixture(const json& f) {
  FixtureResult r{"aggregate", f.at("name").get<std::string>(), true, ""};
  const auto values = f.at("values").get<std::vector<double>>();
  const metrics::RunStats s = metrics::AggregateValues(values);
  Compare(r, "mean", s.mean, f.at("expected").get<double>(), f.at("tolerance").get<double>());
  return r;
}

}  // namespace

std::string_view BundledFixtures() { return kBundled; }

std::vector<FixtureResult> RunFixtures(std::string_view json_text,
                                       const WordSet& stopwords) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed fixture file: ") + e.what());
  }
  if (!doc.is_object()) throw Error("fixture file must be a JSON object");
  static const std::set<std::string> kGroups = {
      "shortcut", "shortcut_rule", "answer", "joint", "drop", "aggregate"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!kGroups.contains(it.key())) throw Error("unknown fixture group '" + it.key() + "'");
    if (!it->is_array()) throw Error("fixture group '" + it.key() + "' must be an array");
  }
  std::vector<FixtureResult> results;
  auto run = [&](const char* group, auto fn) {
    if (!doc.contains(group)) return;
    for (const json& f : doc[group]) {
      try {
        results.push_back(fn(f));
      } catch (const json::exception& e) {
        throw Error(std::string("malformed ") + group + " fixture: " + e.what());
      }
    }
  };
  run("shortcut", [&](const json& f) { return Shortcut(f, stopwords); });
  run("shortcut_rule", ShortcutRule);
  run("answer", Answer);
  run("joint", Joint);
  run("drop", Drop);
  run("aggregate", AggregateFixture);
  return results;
}

}  // namespace hopkit::fixtures
