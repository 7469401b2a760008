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

// Answer, supporting-sentence and evidence-triple scoring, joint metrics,
// performance drops and multi-run aggregation.

#ifndef HOPKIT_METRICS_H_
#define HOPKIT_METRICS_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopkit/text.h"
#include "hopkit/types.h"

namespace hopkit::metrics {

using ::hopkit::NormalizeAnswer;

// Answers that take no partial credit: a mismatch on either side scores 0.
inline constexpr std::string_view kNoAnswer = "noanswer";

struct TaskScores {
  double em = 0.0;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;

  static TaskScores Perfect() { return {1.0, 1.0, 1.0, 1.0}; }
  bool operator==(const TaskScores&) const = default;
};

// 2pr/(p+r), or 0 when p + r = 0.
double HarmonicF1(double precision, double recall);

TaskScores AnswerScores(std::string_view pred, std::string_view gold);

// Set scores. Duplicates are ignored. Two empty sets score 1 everywhere.
TaskScores SentScores(std::span<const SupportingFact> pred,
                      std::span<const SupportingFact> gold);
// Triples match when all three elements agree after NormalizeAnswer.
TaskScores EntScores(std::span<const EvidenceTriple> pred,
                     std::span<const EvidenceTriple> gold);

struct JointScores {
  double em = 0.0;
  double f1 = 0.0;
  double precision = 0.0;
  double recall = 0.0;
};

// Products of precisions and of recalls. Pass TaskScores::Perfect() for a
// task that is not evaluated.
JointScores Joint(const TaskScores& ans, const TaskScores& sent,
                  const TaskScores& ent);

struct TaskSelection {
  bool ans = true;
  bool sent = true;
  bool ent = true;

  bool operator==(const TaskSelection&) const = default;
};

// "ans,sent,ent" in any order; at least one task.
TaskSelection ParseTasks(std::string_view spec);
std::string ToString(const TaskSelection& tasks);

struct Prediction {
  std::string answer;
  std::vector<SupportingFact> sp;
  std::vector<EvidenceTriple> evidence;
};

// {"<id>": {"answer": "...", "sp": [[title, idx]], "evidence": [[s, r, o]]}}
std::map<std::string, Prediction> ParsePredictions(std::string_view json_text);
std::map<std::string, Prediction> LoadPredictions(const std::string& path);

struct ExampleScores {
  std::string id;
  bool predicted = false;
  TaskScores ans, sent, ent;
  JointScores joint;
};

struct JointReport {
  TaskSelection tasks;
  std::size_t examples = 0;
  std::size_t missing_predictions = 0;
  TaskScores ans, sent, ent;  // unweighted means over examples
  double joint_em = 0.0;
  double joint_f1 = 0.0;
  std::vector<ExampleScores> per_example;
};

// Scores each gold example against its prediction; a missing prediction
// scores 0 on every task. Against several gold evidence sets the best
// scoring set counts.
JointReport Evaluate(std::span<const QaExample> gold,
                     const std::map<std::string, Prediction>& predictions,
                     const TaskSelection& tasks = {});

// Rows by columns of optional numbers. Empty cells (std::nullopt) come from
// undefined results such as a drop against a zero base.
struct Table {
  std::string kind;  // "scores", "drop" or "aggregate"
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  std::vector<std::vector<std::optional<double>>> cells;
  std::size_t runs = 1;

  std::optional<double> at(std::string_view row, std::string_view col) const;
  bool operator==(const Table&) const = default;
};

// Scores in percent: rows ans/sent/ent (selected tasks) and joint, columns
// em/f1/precision/recall (joint has em/f1 only).
Table ScoreTable(const JointReport& report);

// 100 * (base - perturbed) / base; nullopt when base <= 0.
std::optional<double> PerformanceDrop(double base, double perturbed);

// Cell-wise drop between two score tables of the same shape.
Table DropTable(const Table& base, const Table& perturbed);

struct RunStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single run
  std::size_t runs = 0;
};

RunStats AggregateValues(std::span<const double> values);

struct Aggregate {
  Table mean;
  Table stddev;
};

// Cell-wise mean and standard deviation. Throws when the tables disagree on
// shape, naming the first offending row, column or cell.
Aggregate AggregateRuns(std::span<const Table> tables);

// Two decimals, "n/a" for an empty cell.
std::string FormatCell(const std::optional<double>& value);
std::string ToTsv(const Table& table);
std::string ToMarkdown(const Table& table);

std::string SerializeTable(const Table& table);
Table ParseTable(std::string_view json_text);

// Report document: examples, missing predictions, tasks, triple-matching
// note and the score table; with per-example rows when asked.
std::string SerializeReport(const JointReport& report, bool per_example = false);
// Extracts the table of an eval, drop or aggregate document.
Table TableFromDocument(std::string_view json_text);

}  // namespace hopkit::metrics

#endif  // HOPKIT_METRICS_H_
