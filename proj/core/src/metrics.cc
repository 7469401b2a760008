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

#include "hopkit/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

#include "hopkit/io.h"
#include "json.hpp"

namespace hopkit::metrics {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

bool IsClosedClass(const std::string& normalized) {
  return normalized == "yes" || normalized == "no" || normalized == kNoAnswer;
}

template <typename T>
TaskScores SetScores(const std::set<T>& pred, const std::set<T>& gold) {
  if (pred.empty() && gold.empty()) return TaskScores::Perfect();
  std::size_t hits = 0;
  for (const T& p : pred) hits += gold.contains(p) ? 1 : 0;
  TaskScores s;
  s.precision = pred.empty() ? 0.0 : static_cast<double>(hits) / pred.size();
  s.recall = gold.empty() ? 0.0 : static_cast<double>(hits) / gold.size();
  s.f1 = HarmonicF1(s.precision, s.recall);
  s.em = pred == gold ? 1.0 : 0.0;
  return s;
}

using NormTriple = std::tuple<std::string, std::string, std::string>;

std::set<NormTriple> NormalizeTriples(std::span<const EvidenceTriple> triples) {
  std::set<NormTriple> out;
  for (const EvidenceTriple& t : triples) {
    out.emplace(NormalizeAnswer(t.subject), NormalizeAnswer(t.relation),
                NormalizeAnswer(t.object));
  }
  return out;
}

bool Better(const TaskScores& a, const TaskScores& b) {
  return std::tie(a.f1, a.em, a.precision) > std::tie(b.f1, b.em, b.precision);
}

ordered_json TableJson(const Table& t) {
  ordered_json out;
  out["kind"] = t.kind;
  out["runs"] = t.runs;
  out["rows"] = t.rows;
  out["cols"] = t.cols;
  ordered_json cells = ordered_json::array();
  for (const auto& row : t.cells) {
    ordered_json r = ordered_json::array();
    for (const auto& c : row) {
      if (c) {
        r.push_back(*c);
      } else {
        r.push_back(nullptr);
      }
    }
    cells.push_back(std::move(r));
  }
  out["cells"] = std::move(cells);
  return out;
}

Table TableFromJson(const json& j) {
  Table t;
  try {
    t.kind = j.at("kind").get<std::string>();
    t.runs = j.value("runs", std::size_t{1});
    t.rows = j.at("rows").get<std::vector<std::string>>();
    t.cols = j.at("cols").get<std::vector<std::string>>();
    for (const auto& row : j.at("cells")) {
      std::vector<std::optional<double>> r;
      for (const auto& c : row) {
        if (c.is_null()) {
          r.push_back(std::nullopt);
        } else {
          r.push_back(c.get<double>());
        }
      }
      t.cells.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed table: ") + e.what());
  }
  if (t.cells.size() != t.rows.size()) throw Error("table row count mismatch");
  for (const auto& r : t.cells) {
    if (r.size() != t.cols.size()) throw Error("table column count mismatch");
  }
  return t;
}

void CheckSameShape(const Table& first, const Table& other, std::size_t index) {
  const std::string which = "report " + std::to_string(index + 1);
  for (std::size_t i = 0; i < std::max(first.rows.size(), other.rows.size()); ++i) {
    if (i >= first.rows.size() || i >= other.rows.size() ||
        first.rows[i] != other.rows[i]) {
      const std::string name = i < other.rows.size() ? other.rows[i]
                                                      : first.rows[i];
      throw Error("shape mismatch in " + which + ": row '" + name + "'");
    }
  }
  for (std::size_t j = 0; j < std::max(first.cols.size(), other.cols.size()); ++j) {
    if (j >= first.cols.size() || j >= other.cols.size() ||
        first.cols[j] != other.cols[j]) {
      const std::string name = j < other.cols.size() ? other.cols[j]
                                                      : first.cols[j];
      throw Error("shape mismatch in " + which + ": column '" + name + "'");
    }
  }
  for (std::size_t i = 0; i < first.rows.size(); ++i) {
    for (std::size_t j = 0; j < first.cols.size(); ++j) {
      if (first.cells[i][j].has_value() != other.cells[i][j].has_value()) {
        throw Error("shape mismatch in " + which + ": cell " + first.rows[i] +
                    "/" + first.cols[j] + " is empty in one report only");
      }
    }
  }
}

}  // namespace

double HarmonicF1(double precision, double recall) {
  if (precision + recall <= 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

TaskScores AnswerScores(std::string_view pred, std::string_view gold) {
  const std::string np = NormalizeAnswer(pred);
  const std::string ng = NormalizeAnswer(gold);
  if (np == ng) return TaskScores::Perfect();
  if (IsClosedClass(np) || IsClosedClass(ng)) return {};
  const std::vector<std::string> pt = SplitWhitespace(np);
  const std::vector<std::string> gt = SplitWhitespace(ng);
  if (pt.empty() || gt.empty()) return {};
  std::map<std::string, int> counts;
  for (const std::string& t : gt) ++counts[t];
  std::size_t common = 0;
  for (const std::string& t : pt) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  TaskScores s;
  s.precision = static_cast<double>(common) / pt.size();
  s.recall = static_cast<double>(common) / gt.size();
  s.f1 = HarmonicF1(s.precision, s.recall);
  return s;
}

TaskScores SentScores(std::span<const SupportingFact> pred,
                      std::span<const SupportingFact> gold) {
  return SetScores(std::set<SupportingFact>(pred.begin(), pred.end()),
                   std::set<SupportingFact>(gold.begin(), gold.end()));
}

TaskScores EntScores(std::span<const EvidenceTriple> pred,
                     std::span<const EvidenceTriple> gold) {
  return SetScores(NormalizeTriples(pred), NormalizeTriples(gold));
}

JointScores Joint(const TaskScores& ans, const TaskScores& sent,
                  const TaskScores& ent) {
  JointScores j;
  j.precision = ans.precision * sent.precision * ent.precision;
  j.recall = ans.recall * sent.recall * ent.recall;
  j.f1 = HarmonicF1(j.precision, j.recall);
  j.em = (ans.em == 1.0 && sent.em == 1.0 && ent.em == 1.0) ? 1.0 : 0.0;
  return j;
}

TaskSelection ParseTasks(std::string_view spec) {
  TaskSelection t{false, false, false};
  std::string item;
  auto flush = [&] {
    const std::string name = Trim(item);
    item.clear();
    if (name.empty()) return;
    if (name == "ans") {
      t.ans = true;
    } else if (name == "sent") {
      t.sent = true;
    } else if (name == "ent") {
      t.ent = true;
    } else {
      throw Error("unknown task '" + name + "' (expected ans, sent, ent)");
    }
  };
  for (char c : spec) {
    if (c == ',') {
      flush();
    } else {
      item.push_back(c);
    }
  }
  flush();
  if (!t.ans && !t.sent && !t.ent) throw Error("no tasks selected");
  return t;
}

std::string ToString(const TaskSelection& tasks) {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ",";
    out += name;
  };
  add(tasks.ans, "ans");
  add(tasks.sent, "sent");
  add(tasks.ent, "ent");
  return out;
}

std::map<std::string, Prediction> ParsePredictions(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed predictions: ") + e.what());
  }
  if (!doc.is_object()) throw Error("predictions must be an object keyed by id");
  std::map<std::string, Prediction> out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const json& v = *it;
    Prediction p;
    try {
      if (v.contains("answer")) p.answer = v.at("answer").get<std::string>();
      if (v.contains("sp")) {
        for (const auto& sf : v.at("sp")) {
          p.sp.push_back({sf.at(0).get<std::string>(), sf.at(1).get<std::size_t>()});
        }
      }
      if (v.contains("evidence")) {
        for (const auto& t : v.at("evidence")) {
          p.evidence.push_back({t.at(0).get<std::string>(), t.at(1).get<std::string>(),
                                t.at(2).get<std::string>()});
        }
      }
    } catch (const json::exception& e) {
      throw Error("bad prediction for '" + it.key() + "': " + e.what());
    }
    out.emplace(it.key(), std::move(p));
  }
  return out;
}

std::map<std::string, Prediction> LoadPredictions(const std::string& path) {
  return ParsePredictions(ReadFile(path));
}

JointReport Evaluate(std::span<const QaExample> gold,
                     const std::map<std::string, Prediction>& predictions,
                     const TaskSelection& tasks) {
  JointReport report;
  report.tasks = tasks;
  report.examples = gold.size();
  double sum_joint_em = 0.0, sum_joint_f1 = 0.0;
  TaskScores sum_ans, sum_sent, sum_ent;
  auto accumulate = [](TaskScores& sum, const TaskScores& s) {
    sum.em += s.em;
    sum.f1 += s.f1;
    sum.precision += s.precision;
    sum.recall += s.recall;
  };
  for (const QaExample& ex : gold) {
    ExampleScores es;
    es.id = ex.id;
    auto it = predictions.find(ex.id);
    es.predicted = it != predictions.end();
    if (es.predicted) {
      const Prediction& p = it->second;
      es.ans = tasks.ans ? AnswerScores(p.answer, ex.answer) : TaskScores::Perfect();
      es.sent = tasks.sent ? SentScores(p.sp, ex.supporting_facts) : TaskScores::Perfect();
      if (!tasks.ent) {
        es.ent = TaskScores::Perfect();
      } else if (ex.evidence_sets.empty()) {
        es.ent = EntScores(p.evidence, {});
      } else {
        es.ent = EntScores(p.evidence, ex.evidence_sets.front());
        for (std::size_t k = 1; k < ex.evidence_sets.size(); ++k) {
          TaskScores s = EntScores(p.evidence, ex.evidence_sets[k]);
          if (Better(s, es.ent)) es.ent = s;
        }
      }
      es.joint = Joint(es.ans, es.sent, es.ent);
    } else {
      ++report.missing_predictions;
    }
    accumulate(sum_ans, es.ans);
    accumulate(sum_sent, es.sent);
    accumulate(sum_ent, es.ent);
    sum_joint_em += es.joint.em;
    sum_joint_f1 += es.joint.f1;
    report.per_example.push_back(std::move(es));
  }
  if (!gold.empty()) {
    const double n = static_cast<double>(gold.size());
    auto mean = [n](const TaskScores& s) {
      return TaskScores{s.em / n, s.f1 / n, s.precision / n, s.recall / n};
    };
    report.ans = mean(sum_ans);
    report.sent = mean(sum_sent);
    report.ent = mean(sum_ent);
    report.joint_em = sum_joint_em / n;
    report.joint_f1 = sum_joint_f1 / n;
  }
  return report;
}

std::optional<double> Table::at(std::string_view row, std::string_view col) const {
  auto r = std::find(rows.begin(), rows.end(), row);
  auto c = std::find(cols.begin(), cols.end(), col);
  if (r == rows.end() || c == cols.end()) return std::nullopt;
  return cells[r - rows.begin()][c - cols.begin()];
}

Table ScoreTable(const JointReport& report) {
  Table t;
  t.kind = "scores";
  t.cols = {"em", "f1", "precision", "recall"};
  auto add = [&t](const char* name, const TaskScores& s) {
    t.rows.push_back(name);
    t.cells.push_back({s.em * 100.0, s.f1 * 100.0, s.precision * 100.0,
                       s.recall * 100.0});
  };
  if (report.tasks.ans) add("ans", report.ans);
  if (report.tasks.sent) add("sent", report.sent);
  if (report.tasks.ent) add("ent", report.ent);
  t.rows.push_back("joint");
  t.cells.push_back({report.joint_em * 100.0, report.joint_f1 * 100.0,
                     std::nullopt, std::nullopt});
  return t;
}

std::optional<double> PerformanceDrop(double base, double perturbed) {
  if (!(base > 0.0)) return std::nullopt;
  return 100.0 * (base - perturbed) / base;
}

Table DropTable(const Table& base, const Table& perturbed) {
  CheckSameShape(base, perturbed, 1);
  Table t = base;
  t.kind = "drop";
  t.runs = 1;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < t.cols.size(); ++j) {
      const auto& b = base.cells[i][j];
      const auto& p = perturbed.cells[i][j];
      t.cells[i][j] = (b && p) ? PerformanceDrop(*b, *p) : std::nullopt;
    }
  }
  return t;
}

RunStats AggregateValues(std::span<const double> values) {
  if (values.empty()) throw Error("aggregate needs at least one run");
  RunStats s;
  s.runs = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
  }
  return s;
}

Aggregate AggregateRuns(std::span<const Table> tables) {
  if (tables.empty()) throw Error("aggregate needs at least one report");
  for (std::size_t k = 1; k < tables.size(); ++k) {
    CheckSameShape(tables[0], tables[k], k);
  }
  Aggregate agg{tables[0], tables[0]};
  agg.mean.kind = "aggregate";
  agg.stddev.kind = "aggregate-std";
  agg.mean.runs = agg.stddev.runs = tables.size();
  std::vector<double> values(tables.size());
  for (std::size_t i = 0; i < agg.mean.rows.size(); ++i) {
    for (std::size_t j = 0; j < agg.mean.cols.size(); ++j) {
      if (!tables[0].cells[i][j]) continue;
      for (std::size_t k = 0; k < tables.size(); ++k) values[k] = *tables[k].cells[i][j];
      RunStats s = AggregateValues(values);
      agg.mean.cells[i][j] = s.mean;
      agg.stddev.cells[i][j] = s.stddev;
    }
  }
  return agg;
}

std::string FormatCell(const std::optional<double>& value) {
  if (!value) return "n/a";
  char buf[64];
  double v = *value;
  if (std::abs(v) < 0.005) v = 0.0;  // no "-0.00"
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string ToTsv(const Table& table) {
  std::string out = table.kind;
  for (const std::string& c : table.cols) out += "\t" + c;
  out += "\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    out += table.rows[i];
    for (const auto& cell : table.cells[i]) out += "\t" + FormatCell(cell);
    out += "\n";
  }
  return out;
}

std::string ToMarkdown(const Table& table) {
  std::vector<std::vector<std::string>> grid;
  grid.push_back({table.kind});
  for (const std::string& c : table.cols) grid.back().push_back(c);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    grid.push_back({table.rows[i]});
    for (const auto& cell : table.cells[i]) grid.back().push_back(FormatCell(cell));
  }
  std::vector<std::size_t> width(grid[0].size(), 3);
  for (const auto& row : grid) {
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
  }
  auto line = [&](const std::vector<std::string>& row) {
    std::string out = "|";
    for (std::size_t j = 0; j < row.size(); ++j) {
      std::string cell = row[j];
      if (j == 0) {
        cell.append(width[j] - cell.size(), ' ');
      } else {
        cell.insert(0, width[j] - cell.size(), ' ');
      }
      out += " " + cell + " |";
    }
    return out + "\n";
  };
  std::string out = line(grid[0]);
  out += "|";
  for (std::size_t j = 0; j < width.size(); ++j) {
    out += j == 0 ? " " + std::string(width[j], '-') + " |"
                  : " " + std::string(width[j] - 1, '-') + ": |";
  }
  out += "\n";
  for (std::size_t i = 1; i < grid.size(); ++i) out += line(grid[i]);
  return out;
}

std::string SerializeTable(const Table& table) {
  return TableJson(table).dump(2) + "\n";
}

Table ParseTable(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed table: ") + e.what());
  }
  return TableFromJson(doc);
}

std::string SerializeReport(const JointReport& report, bool per_example) {
  ordered_json out;
  out["kind"] = "eval";
  out["tasks"] = ToString(report.tasks);
  out["examples"] = report.examples;
  out["missing_predictions"] = report.missing_predictions;
  out["triple_matching"] = "element-wise normalize_answer";
  out["table"] = TableJson(ScoreTable(report));
  if (per_example) {
    ordered_json rows = ordered_json::array();
    for (const ExampleScores& es : report.per_example) {
      ordered_json r;
      r["id"] = es.id;
      r["predicted"] = es.predicted;
      auto put = [&r](const char* name, const TaskScores& s) {
        r[name] = {{"em", s.em}, {"f1", s.f1}, {"precision", s.precision},
                   {"recall", s.recall}};
      };
      if (report.tasks.ans) put("ans", es.ans);
      if (report.tasks.sent) put("sent", es.sent);
      if (report.tasks.ent) put("ent", es.ent);
      r["joint"] = {{"em", es.joint.em}, {"f1", es.joint.f1},
                    {"precision", es.joint.precision}, {"recall", es.joint.recall}};
      rows.push_back(std::move(r));
    }
    out["per_example"] = std::move(rows);
  }
  return out.dump(2) + "\n";
}

Table TableFromDocument(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  if (doc.is_object() && doc.contains("table")) return TableFromJson(doc["table"]);
  if (doc.is_object() && doc.contains("mean")) return TableFromJson(doc["mean"]);
  return TableFromJson(doc);
}

}  // namespace hopkit::metrics
