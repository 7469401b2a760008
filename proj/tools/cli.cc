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

#include "hopkit/cli.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hopkit/adversarial.h"
#include "hopkit/bias_probe.h"
#include "hopkit/corpus.h"
#include "hopkit/debias.h"
#include "hopkit/fixtures.h"
#include "hopkit/io.h"
#include "hopkit/metrics.h"
#include "hopkit/run_config.h"
#include "hopkit/taskprep.h"
#include "hopkit/text.h"
#include "json.hpp"

namespace hopkit::cli {
namespace {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

// Raised for bad flag values that CLI11 cannot check on its own.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  bool quiet = false;
  bool json = false;

  std::string input;
  std::string out;
  std::string format = "hotpotqa";
  std::string stopwords;

  // ingest
  std::string r4c;
  bool annotated_only = false;
  bool lenient = false;

  // split small
  std::size_t train = 0;
  std::size_t dev = 0;
  std::uint64_t seed = 0;
  bool stratified = false;
  bool select_annotation = false;
  std::string out_dir;

  // probe
  bool by_qtype = false;
  bool all_types = false;
  std::string dump_verdicts;
  std::string baseline_kind = "both";

  // gen debias
  std::string variant;
  std::size_t runs = 1;
  std::string pool;
  std::string templates;
  std::string insert_at = "front";
  bool gold_only = false;

  // gen adversarial / restrict
  std::string rule = "both";
  std::string lexicon;
  std::string skip_report;
  bool verify_triples = false;
  std::string base;

  // prep
  std::string rules;
  std::string spans;
  std::string train_input;

  // eval
  std::string pred;
  std::string gold;
  std::string tasks = "ans,sent,ent";
  bool per_example = false;

  // report
  std::string pert;
  std::vector<std::string> reports;

  // verify
  std::string fixtures;
  bool dump_fixtures = false;
};

struct Session {
  const Options& opt;
  const std::vector<std::string>& args;
  std::ostream& out;
  std::ostream& err;

  void Say(const std::string& text) const {
    if (!opt.quiet && !opt.json) out << text << "\n";
  }
  void Emit(const ordered_json& doc) const {
    if (opt.json && !opt.quiet) out << doc.dump(2) << "\n";
  }
};

fs::path ResolveInput(const std::string& name) {
  fs::path path(name);
  if (path.is_absolute() || fs::exists(path)) return path;
  if (const char* dir = std::getenv(kDataDirEnv); dir != nullptr && *dir != '\0') {
    fs::path candidate = fs::path(dir) / path;
    if (fs::exists(candidate)) return candidate;
  }
  return path;
}

bool SameFile(const fs::path& a, const fs::path& b) {
  std::error_code ec;
  if (fs::exists(a, ec) && fs::exists(b, ec)) return fs::equivalent(a, b, ec);
  return fs::weakly_canonical(a, ec) == fs::weakly_canonical(b, ec);
}

// Refuses to write over any input.
void GuardOutputs(const std::vector<fs::path>& outputs, const RunConfig& cfg) {
  for (const fs::path& o : outputs) {
    for (const FileDigest& in : cfg.inputs) {
      if (in.source.rfind("builtin:", 0) == 0) continue;
      if (SameFile(o, in.source)) {
        throw UsageError("output '" + o.string() + "' would overwrite input '" +
                         in.source + "'");
      }
    }
  }
}

fs::path Sibling(const fs::path& artifact, const std::string& suffix) {
  fs::path p = artifact;
  p.replace_extension();
  return fs::path(p.string() + suffix);
}

void WriteRunConfig(const fs::path& path, RunConfig cfg, const std::vector<fs::path>& outputs) {
  for (const fs::path& o : outputs) cfg.outputs.push_back(o.string());
  WriteFile(path, cfg.Serialize());
}

RunConfig NewConfig(const Session& s, std::string command) {
  RunConfig cfg;
  cfg.command = std::move(command);
  cfg.args = s.args;
  return cfg;
}

corpus::DatasetFormat Format(const std::string& name) {
  std::optional<corpus::DatasetFormat> f = corpus::ParseDatasetFormat(name);
  if (!f) throw UsageError("unknown --format '" + name + "'");
  return *f;
}

std::vector<QaExample> LoadInput(const std::string& name, const std::string& format,
                                 RunConfig& cfg, const std::string& role = "input") {
  const fs::path path = ResolveInput(name);
  cfg.AddInputFile(role, path.string());
  corpus::LoadOptions options;
  options.format = Format(format);
  return corpus::LoadDataset(path, options).examples;
}

std::string LoadText(const std::string& name, const std::string& role, RunConfig& cfg) {
  const fs::path path = ResolveInput(name);
  cfg.AddInputFile(role, path.string());
  return ReadFile(path);
}

WordSet Stopwords(const Options& opt, RunConfig& cfg) {
  if (opt.stopwords.empty()) {
    std::string joined;
    for (const std::string& w : DefaultStopwords()) joined += w + "\n";
    cfg.AddBuiltin("stopwords", DefaultStopwordsName(), joined);
    return DefaultStopwords();
  }
  return ParseStopwords(LoadText(opt.stopwords, "stopwords", cfg));
}

// A small string table rendered as TSV or markdown.
struct TextTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string Tsv() const {
    std::string out;
    auto line = [&out](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += '\t';
        out += cells[i];
      }
      out += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
  }

  std::string Markdown() const {
    std::vector<std::size_t> width(header.size(), 3);
    for (std::size_t c = 0; c < header.size(); ++c) {
      width[c] = std::max(width[c], header[c].size());
      for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
    }
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      out += '|';
      for (std::size_t c = 0; c < cells.size(); ++c) {
        const std::string pad(width[c] - cells[c].size(), ' ');
        out += ' ';
        out += c == 0 ? cells[c] + pad : pad + cells[c];
        out += " |";
      }
      out += '\n';
    };
    line(header);
    out += '|';
    for (std::size_t c = 0; c < header.size(); ++c) {
      out += c == 0 ? " :" + std::string(width[c] - 1, '-') + " |"
                    : " " + std::string(width[c] - 1, '-') + ": |";
    }
    out += '\n';
    for (const auto& r : rows) line(r);
    return out;
  }
};

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Writes a report as X.json plus X.tsv and X.md, with its run manifest.
void WriteReport(const Session& s, const fs::path& out, const ordered_json& doc,
                 const std::string& tsv, const std::string& markdown, RunConfig cfg) {
  const fs::path tsv_path = Sibling(out, ".tsv");
  const fs::path md_path = Sibling(out, ".md");
  const fs::path run_path = Sibling(out, ".run.json");
  const std::vector<fs::path> outputs = {out, tsv_path, md_path};
  GuardOutputs(outputs, cfg);
  WriteFile(out, doc.dump(2) + "\n");
  WriteFile(tsv_path, tsv);
  WriteFile(md_path, markdown);
  WriteRunConfig(run_path, std::move(cfg), outputs);
  if (!s.opt.quiet && !s.opt.json) s.err << "wrote " << out.string() << "\n";
}

void ShowReport(const Session& s, const ordered_json& doc, const std::string& tsv) {
  if (s.opt.quiet) return;
  if (s.opt.json) {
    s.out << doc.dump(2) << "\n";
  } else {
    s.out << tsv;
  }
}

int Ingest(const Session& s) {
  const Options& o = s.opt;
  RunConfig cfg = NewConfig(s, "ingest");
  const fs::path path = ResolveInput(o.input);
  cfg.AddInputFile("input", path.string());
  corpus::LoadOptions options;
  options.format = Format(o.format);
  options.lenient = o.lenient;
  corpus::LoadResult loaded = corpus::LoadDataset(path, options);
  std::vector<QaExample> examples = std::move(loaded.examples);
  if (!o.r4c.empty()) {
    const fs::path overlay = ResolveInput(o.r4c);
    cfg.AddInputFile("r4c", overlay.string());
    corpus::ApplyR4cOverlay(examples, corpus::LoadR4cOverlay(overlay));
  }
  const std::size_t before = examples.size();
  if (o.annotated_only) examples = corpus::KeepAnnotated(std::move(examples));
  cfg.settings["format"] = o.format;
  cfg.settings["lenient"] = o.lenient ? "true" : "false";
  cfg.settings["annotated_only"] = o.annotated_only ? "true" : "false";

  const fs::path out(o.out);
  GuardOutputs({out}, cfg);
  corpus::WriteDataset(out, examples);
  WriteRunConfig(Sibling(out, ".run.json"), std::move(cfg), {out});
  if (!o.quiet) {
    for (const corpus::RecordIssue& issue : loaded.issues) s.err << issue.ToString() << "\n";
  }
  ordered_json doc = {{"examples", examples.size()},
                      {"invalid_records", loaded.issues.size()},
                      {"unannotated_dropped", before - examples.size()},
                      {"out", out.string()}};
  s.Emit(doc);
  s.Say("ingested " + std::to_string(examples.size()) + " examples (" +
        std::to_string(loaded.issues.size()) + " invalid, " +
        std::to_string(before - examples.size()) + " unannotated dropped) -> " +
        out.string());
  return kExitOk;
}

int SplitSmall(const Session& s) {
  const Options& o = s.opt;
  RunConfig cfg = NewConfig(s, "split small");
  std::vector<QaExample> examples = LoadInput(o.input, o.format, cfg);
  corpus::SplitOptions options;
  options.train_size = o.train;
  options.dev_size = o.dev;
  options.seed = o.seed;
  options.stratified = o.stratified;
  corpus::Split split = corpus::BuildSmallSplit(examples, options);
  if (o.select_annotation) {
    for (auto* part : {&split.train, &split.dev}) {
      for (QaExample& ex : *part) ex = corpus::SelectAnnotation(std::move(ex), o.seed);
    }
  }
  cfg.seeds = {o.seed};
  cfg.settings["train"] = std::to_string(o.train);
  cfg.settings["dev"] = std::to_string(o.dev);
  cfg.settings["stratified"] = o.stratified ? "true" : "false";
  cfg.settings["select_annotation"] = o.select_annotation ? "true" : "false";

  const fs::path dir(o.out_dir);
  const fs::path train = dir / "train.json";
  const fs::path dev = dir / "dev.json";
  GuardOutputs({train, dev}, cfg);
  corpus::WriteDataset(train, split.train);
  corpus::WriteDataset(dev, split.dev);
  WriteRunConfig(dir / "split.run.json", std::move(cfg), {train, dev});
  s.Emit({{"train", split.train.size()}, {"dev", split.dev.size()},
          {"train_file", train.string()}, {"dev_file", dev.string()}});
  s.Say("train " + std::to_string(split.train.size()) + " -> " + train.string());
  s.Say("dev " + std::to_string(split.dev.size()) + " -> " + dev.string());
  return kExitOk;
}

ordered_json CountsJson(const probe::PositionCounts& c) {
  return {{"position0", c.position0},
          {"position_other", c.position_other},
          {"total", c.total()},
          {"fraction_position0", c.fraction_position0()},
          {"fraction_other", c.fraction_other()}};
}

std::vector<std::string> CountsRow(const std::string& name, const probe::PositionCounts& c) {
  return {name,
          std::to_string(c.position0),
          std::to_string(c.position_other),
          std::to_string(c.total()),
          Fixed(c.fraction_position0(), 4),
          Fixed(c.fraction_other(), 4)};
}

int ProbePositionBias(const Session& s) {
  const Options& o = s.opt;
  RunConfig cfg = NewConfig(s, "probe position-bias");
  std::vector<QaExample> examples = LoadInput(o.input, o.format, cfg);
  probe::PositionBiasReport report = probe::PositionHistogram(examples);
  TextTable table{{"scope", "position0", "position_other", "total", "fraction_position0",
                   "fraction_other"},
                  {CountsRow("overall", report.overall)}};
  ordered_json doc;
  doc["kind"] = "position-bias";
  doc["examples"] = examples.size();
  doc["overall"] = CountsJson(report.overall);
  if (o.by_qtype) {
    ordered_json by_type = ordered_json::object();
    for (const auto& [type, counts] : report.by_type) {
      by_type[std::string(ToString(type))] = CountsJson(counts);
      table.rows.push_back(CountsRow(std::string(ToString(type)), counts));
    }
    doc["by_type"] = std::move(by_type);
  }
  if (!o.out.empty()) {
    cfg.settings["by_qtype"] = o.by_qtype ? "true" : "false";
    WriteReport(s, o.out, doc, table.Tsv(), table.Markdown(), std::move(cfg));
  }
  ShowReport(s, doc, table.Tsv());
  return kExitOk;
}

ordered_json VerdictJson(const probe::ShortcutVerdict& v) {
  ordered_json j;
  j["id"] = v.example_id;
  j["answer_found"] = v.answer_found;
  j["surrounding"] = v.surrounding;
  j["overlap"] = v.overlap;
  j["ratio"] = v.ratio ? ordered_json(*v.ratio) : ordered_json(nullptr);
  j["shortcut"] = v.is_shortcut;
  return j;
}

int ProbeOverlap(const Session& s) {
  const Options& o = s.opt;
  RunConfig cfg = NewConfig(s, "probe overlap");
  std::vector<QaExample> examples = LoadInput(o.input, o.format, cfg);
  const WordSet stopwords = Stopwords(o, cfg);
  probe::OverlapReport report = probe::ProbeOverlap(examples, stopwords, !o.all_types);
  const double fraction =
      report.examined == 0 ? 0.0 : static_cast<double>(report.flagged) / report.examined;
  ordered_json doc = {{"kind", "overlap"},
                      {"scope", o.all_types ? "all" : "bridge"},
                      {"examined", report.examined},
                      {"flagged", report.flagged},
                      {"answer_not_found", report.answer_not_found},
                      {"flagged_fraction", fraction}};
  TextTable table{{"scope", "examined", "flagged", "answer_not_found", "flagged_fraction"},
                  {{o.all_types ? "all" : "bridge", std::to_string(report.examined),
                    std::to_string(report.flagged), std::to_string(report.answer_not_found),
                    Fixed(fraction, 4)}}};
  cfg.settings["scope"] = o.all_types ? "all" : "bridge";
  if (!o.dump_verdicts.empty()) {
    std::string lines;
    for (const probe::ShortcutVerdict& v : report.verdicts) {
      lines += VerdictJson(v).dump() + "\n";
    }
    GuardOutputs({o.dump_verdicts}, cfg);
    WriteFile(o.dump_verdicts, lines);
  }
  if (!o.out.empty()) WriteReport(s, o.out, doc, table.Tsv(), table.Markdown(), cfg);
  ShowReport(s, doc, table.Tsv());
  return kExitOk;
}

int ProbeBaseline(const Session& s) {
  const Options& o = s.opt;
  RunConfig cfg = NewConfig(s, "probe baseline");
  std::vector<QaExample> examples = LoadInput(o.input, o.format, cfg);
  const WordSet stopwords = Stopwords(o, cfg);
  std::vector<std::pair<std::string, probe::BaselineKind>> kinds;
  if (o.baseline_kind == "position0" || o.baseline_kind == "both") {
    kinds.emplace_back("position0", probe::BaselineKind::kPosition0);
  }
  if (o.baseline_kind == "overlap" || o.baseline_kind == "both") {
    kinds.emplace_back("overlap", probe::BaselineKind::kOverlap);
  }
  if (kinds.empty()) throw UsageError("unknown --kind '" + o.baseline_kind + "'");
  ordered_json doc = {{"kind", "baseline"}};
  TextTable table{{"baseline", "examples", "hits", "hit_rate"}, {}};
  for (const auto& [name, kind] : kinds) {
    probe::BaselineRates r = probe::RunBaseline(examples, kind, stopwords);
    doc[name] = {{"examples", r.examples}, {"hits", r.hits}, {"hit_rate", r.hit_rate()}};
    table.rows.push_back({name, std::to_string(r.examples), std::to_string(r.hits),
                          Fixed(r.hit_rate(), 4)});
  }
  cfg.settings["kind"] = o.baseline_kind;
  if (!o.out.empty()) WriteReport(s, o.out, doc, table.Tsv(), table.Markdown(), cfg);
  ShowReport(s, doc, table.Tsv());
  return kExitOk;
}

std::vector<debias::Variant> Variants(const std::string& spec) {
  if (spec == "all") {
    return {debias::kAllVariants.begin(), debias::kAllVariants.end()};
  }
  std::vector<debias::Variant> out;
  std::stringstream ss(spec);
  std::string name;
  while (std::getline(ss, name, ',')) {
    std::optional<debias::Variant> v = debias::ParseVariant(Trim(name));
    if (!v) throw UsageError("unknown --variant '" + name + "'");
    if (std::find(out.begin(), out.end(), *v) == out.end()) out.push_back(*v);
  }
  if (out.empty()) throw UsageError("--variant names no variant");
  return out;
}

int GenDebias(const Session& s) {
  const Options& o = s.opt;
  RunConfig cfg = NewConfig(s, "gen debias");
  std::vector<QaExample> examples = LoadInput(o.input, o.format, cfg);
  const std::vector<debias::Variant> variants = Variants(o.variant);
  if (o.runs < 1 || o.runs > debias::kMaxRuns) {
    throw UsageError("--runs must be between 1 and " + std::to_string(debias::kMaxRuns));
  }
  std::optional<debias::InsertAt> insert_at = debias::ParseInsertAt(o.insert_at);
  if (!insert_at) throw UsageError("unknown --insert-at '" + o.insert_at + "'");

  std::optional<debias::SentencePool> file_pool;
  if (!o.pool.empty()) {
    const std::string text = LoadText(o.pool, "pool", cfg);
    file_pool = debias::SentencePool::Parse(text, "file:" + fs::path(o.pool).filename().string());
    if (file_pool->empty()) throw Error("sentence pool '" + o.pool + "' has no usable sentence");
  } else {
    std::string joined;
    for (const std::string& line : debias::DefaultSentencePool().sentences()) joined += line + "\n";
    cfg.AddBuiltin("pool", debias::DefaultSentencePool().source_tag(), joined);
  }
  const debias::SentencePool& pool = file_pool ? *file_pool : debias::DefaultSentencePool();

  std::optional<debias::TemplateSet> file_templates;
  if (!o.templates.empty()) {
    file_templates = debias::TemplateSet::Parse(LoadText(o.templates, "templates", cfg));
  } else {
    cfg.AddBuiltin("templates", "hopkit-templates-v1",
                   debias::DefaultTemplates().Serialize());
  }
  const debias::TemplateSet& templates =
      file_templates ? *file_templates : debias::DefaultTemplates();

  std::vector<std::uint64_t> seeds;
  for (std::size_t r = 0; r < o.runs; ++r) seeds.push_back(o.seed + r);
  debias::PerturbOptions options;
  options.insert_at = *insert_at;
  options.gold_only = o.gold_only;
  std::vector<debias::DebiasRun> suite =
      debias::GenerateDebiasedSuite(examples, seeds, pool, templates, options, variants);

  const fs::path out(o.out);
  const bool single = suite.size() == 1;
  std::map<std::string, std::string> files;
  std::vector<fs::path> outputs;
  for (const debias::DebiasRun& run : suite) {
    const std::string variant(debias::ToString(run.variant));
    fs::path path = single ? out
                           : Sibling(out, "." + variant + ".run" + std::to_string(run.run_id) +
                                              out.extension().string());
    files["run" + std::to_string(run.run_id) + "/" + variant] = path.string();
    outputs.push_back(path);
  }
  const fs::path manifest = Sibling(out, ".manifest.json");
  outputs.push_back(manifest);
  GuardOutputs(outputs, cfg);

  for (std::size_t i = 0; i < suite.size(); ++i) corpus::WriteDataset(outputs[i], suite[i].examples);
  WriteFile(manifest, debias::SerializeManifest(suite, options, pool.source_tag(), files));

  cfg.seeds = seeds;
  std::string names;
  for (debias::Variant v : variants) {
    if (!names.empty()) names += ",";
    names += debias::ToString(v);
  }
  cfg.settings["variants"] = names;
  cfg.settings["runs"] = std::to_string(o.runs);
  cfg.settings["insert_at"] = std::string(debias::ToString(*insert_at));
  cfg.settings["gold_only"] = o.gold_only ? "true" : "false";
  cfg.settings["pool"] = pool.source_tag();
  WriteRunConfig(Sibling(out, ".run.json"), std::move(cfg), outputs);

  ordered_json listing = ordered_json::array();
  for (const auto& [key, file] : files) listing.push_back({{"run", key}, {"file", file}});
  s.Emit({{"examples", examples.size()}, {"files", listing}, {"manifest", manifest.string()}});
  for (const auto& [key, file] : files) s.Say(key + " -> " + file);
  s.Say("manifest -> " + manifest.string());
  return kExitOk;
}

int GenAdversarial(const Session& s) {
  const Options& o = s.opt;
  RunConfig cfg = NewConfig(s, "gen adversarial");
  std::vector<QaExample> examples = LoadInput(o.input, o.format, cfg);
  std::optional<adversarial::RuleSelection> rule = adversarial::ParseRuleSelection(o.rule);
  if (!rule) throw UsageError("unknown --rule '" + o.rule + "'");

  std::optional<adversarial::InversionLexicon> file_lexicon;
  if (!o.lexicon.empty()) {
    file_lexicon = adversarial::InversionLexicon::Parse(LoadText(o.lexicon, "lexicon", cfg));
  } else {
    cfg.AddBuiltin("lexicon", "hopkit-lexicon-v1", adversarial::DefaultLexicon().Serialize());
  }
  std::optional<adversarial::RelationQuestionTemplates> file_templates;
  if (!o.templates.empty()) {
    file_templates =
        adversarial::RelationQuestionTemplates::Parse(LoadText(o.templates, "templates", cfg));
  } else {
    cfg.AddBuiltin("templates", "hopkit-relation-templates-v1",
                   adversarial::DefaultRelationTemplates().Serialize());
  }
  adversarial::InvertOptions options;
  options.verify_with_triples = o.verify_triples;
  adversarial::AdversarialSet set = adversarial::BuildAdversarialSet(
      examples, file_lexicon ? *file_lexicon : adversarial::DefaultLexicon(),
      file_templates ? *file_templates : adversarial::DefaultRelationTemplates(), *rule,
      options);

  const fs::path out(o.out);
  const fs::path skips = o.skip_report.empty() ? Sibling(out, ".skips.tsv")
                                               : fs::path(o.skip_report);
  GuardOutputs({out, skips}, cfg);
  corpus::WriteDataset(out, set.examples);
  std::string tsv = "id\treason\n";
  for (const adversarial::Skip& skip : set.skips) {
    tsv += skip.example_id + "\t" + std::string(adversarial::ToString(skip.reason)) + "\n";
  }
  WriteFile(skips, tsv);
  cfg.settings["rule"] = o.rule;
  cfg.settings["verify_triples"] = o.verify_triples ? "true" : "false";
  WriteRunConfig(Sibling(out, ".run.json"), std::move(cfg), {out, skips});

  ordered_json by_reason = ordered_json::object();
  for (const auto& [reason, count] : set.SkipCounts()) {
    by_reason[std::string(adversarial::ToString(reason))] = count;
  }
  s.Emit({{"input", examples.size()},
          {"emitted", set.examples.size()},
          {"skipped", set.skips.size()},
          {"skips_by_reason", by_reason}});
  s.Say("emitted " + std::to_string(set.examples.size()) + ", skipped " +
        std::to_string(set.skips.size()) + " of " + std::to_string(examples.size()) + " -> " +
        out.string());
  for (const auto& [reason, count] : set.SkipCounts()) {
    s.Say("  " + std::string(adversarial::ToString(reason)) + "\t" + std::to_string(count));
  }
  return kExitOk;
}

int GenRestrict(const Session& s) {
  const Options& o = s.opt;
  RunConfig cfg = NewConfig(s, "gen restrict");
  std::vector<QaExample> released = LoadInput(o.input, o.format, cfg);
  std::vector<QaExample> base = LoadInput(o.base, o.format, cfg, "base");
  std::vector<QaExample> kept = adversarial::RestrictToBase(released, base);
  const fs::path out(o.out);
  GuardOutputs({out}, cfg);
  corpus::WriteDataset(out, kept);
  WriteRunConfig(Sibling(out, ".run.json"), std::move(cfg), {out});
  s.Emit({{"input", released.size()}, {"kept", kept.size()}});
  s.Say("kept " + std::to_string(kept.size()) + " of " + std::to_string(released.size()) +
        " -> " + out.string());
  return kExitOk;
}

taskprep::RelationRules Rules(const Options& o, RunConfig& cfg) {
  if (o.rules.empty()) {
    cfg.AddBuiltin("rules", "hopkit-relation-rules-v1", taskprep::RelationRules::DefaultText());
    return taskprep::RelationRules::Default();
  }
  return taskprep::RelationRules::Parse(LoadText(o.rules, "rules", cfg));
}

int PrepGroupRelations(const Session& s) {
  const Options& o = s.opt;
  RunConfig cfg = NewConfig(s, "prep group-relations");
  std::vector<QaExample> training = LoadInput(o.input, o.format, cfg);
  taskprep::RelationGroupMap map(Rules(o, cfg));
  taskprep::RelationInventory inventory = taskprep::BuildRelationInventory(training, map);
  const fs::path out(o.out);
  GuardOutputs({out}, cfg);
  WriteFile(out, map.SerializeTsv());
  WriteRunConfig(Sibling(out, ".run.json"), std::move(cfg), {out});
  s.Emit({{"raw_relations", inventory.raw_size()},
          {"grouped_relations", inventory.grouped_size()},
          {"labels", inventory.label_count()}});
  s.Say("relations: " + std::to_string(inventory.raw_size()) + " raw, " +
        std::to_string(inventory.grouped_size()) + " grouped, " +
        std::to_string(inventory.label_count()) + " labels with NO_RELATION -> " +
        out.string());
  return kExitOk;
}

int PrepExportPairs(const Session& s) {
  const Options& o = s.opt;
  RunConfig cfg = NewConfig(s, "prep export-pairs");
  std::vector<QaExample> examples = LoadInput(o.input, o.format, cfg);
  taskprep::RelationGroupMap map(Rules(o, cfg));
  std::optional<taskprep::RelationInventory> inventory;
  if (!o.train_input.empty()) {
    std::vector<QaExample> training = LoadInput(o.train_input, o.format, cfg, "train");
    inventory = taskprep::BuildRelationInventory(training, map);
  }
  std::map<std::string, std::vector<taskprep::EntityMention>> spans;
  if (!o.spans.empty()) spans = taskprep::ParseSpanFile(LoadText(o.spans, "spans", cfg));

  std::string lines;
  std::size_t pairs_total = 0, labeled = 0, unlocated = 0, duplicate_spans = 0;
  for (const QaExample& ex : examples) {
    std::vector<taskprep::EntityMention> mentions;
    if (auto it = spans.find(ex.id); it != spans.end()) {
      mentions = taskprep::DeduplicateMentions(it->second);
      duplicate_spans += it->second.size() - mentions.size();
    } else {
      mentions = taskprep::MentionsFromTriples(ex);
    }
    for (const auto& m : mentions) unlocated += !m.span.has_value();
    std::vector<taskprep::EntityPairInstance> pairs =
        taskprep::GenerateEntityPairs(ex.id, mentions);
    if (!ex.evidence_sets.empty()) {
      taskprep::LabelPairs(pairs, ex.evidence_sets.front(), map,
                           inventory ? &*inventory : nullptr);
    }
    for (const auto& p : pairs) {
      lines += taskprep::PairToJsonLine(p) + "\n";
      labeled += p.label != taskprep::kNoRelation;
    }
    pairs_total += pairs.size();
  }
  const fs::path out(o.out);
  GuardOutputs({out}, cfg);
  WriteFile(out, lines);
  cfg.settings["inventory"] = inventory ? "train" : "none";
  WriteRunConfig(Sibling(out, ".run.json"), std::move(cfg), {out});
  s.Emit({{"examples", examples.size()},
          {"pairs", pairs_total},
          {"labeled", labeled},
          {"unlocated_mentions", unlocated},
          {"duplicate_spans_dropped", duplicate_spans}});
  s.Say("pairs " + std::to_string(pairs_total) + " (" + std::to_string(labeled) +
        " labeled, " + std::to_string(unlocated) + " unlocated mentions) -> " + out.string());
  return kExitOk;
}

int Eval(const Session& s) {
  const Options& o = s.opt;
  RunConfig cfg = NewConfig(s, "eval");
  std::vector<QaExample> gold = LoadInput(o.gold, o.format, cfg, "gold");
  const fs::path pred_path = ResolveInput(o.pred);
  cfg.AddInputFile("pred", pred_path.string());
  std::map<std::string, metrics::Prediction> preds =
      metrics::LoadPredictions(pred_path.string());
  const metrics::TaskSelection tasks = metrics::ParseTasks(o.tasks);
  metrics::JointReport report = metrics::Evaluate(gold, preds, tasks);
  const metrics::Table table = metrics::ScoreTable(report);
  const ordered_json doc = ordered_json::parse(metrics::SerializeReport(report, o.per_example));
  cfg.settings["tasks"] = metrics::ToString(tasks);
  if (!o.out.empty()) {
    WriteReport(s, o.out, doc, metrics::ToTsv(table), metrics::ToMarkdown(table), std::move(cfg));
  }
  if (!o.quiet && !o.json && report.missing_predictions > 0) {
    s.err << report.missing_predictions << " gold examples have no prediction\n";
  }
  ShowReport(s, doc, metrics::ToTsv(table));
  return kExitOk;
}

metrics::Table LoadTable(const std::string& name, const std::string& role, RunConfig& cfg) {
  return metrics::TableFromDocument(LoadText(name, role, cfg));
}

int ReportDrop(const Session& s) {
  const Options& o = s.opt;
  RunConfig cfg = NewConfig(s, "report drop");
  const metrics::Table base = LoadTable(o.base, "base", cfg);
  const metrics::Table pert = LoadTable(o.pert, "perturbed", cfg);
  const metrics::Table drop = metrics::DropTable(base, pert);
  const ordered_json doc = ordered_json::parse(metrics::SerializeTable(drop));
  if (!o.out.empty()) {
    WriteReport(s, o.out, doc, metrics::ToTsv(drop), metrics::ToMarkdown(drop), std::move(cfg));
  }
  ShowReport(s, doc, metrics::ToTsv(drop));
  return kExitOk;
}

int ReportAggregate(const Session& s) {
  const Options& o = s.opt;
  RunConfig cfg = NewConfig(s, "report aggregate");
  std::vector<metrics::Table> tables;
  for (std::size_t i = 0; i < o.reports.size(); ++i) {
    tables.push_back(LoadTable(o.reports[i], "run" + std::to_string(i + 1), cfg));
  }
  const metrics::Aggregate agg = metrics::AggregateRuns(tables);
  ordered_json doc;
  doc["kind"] = "aggregate";
  doc["runs"] = tables.size();
  doc["mean"] = ordered_json::parse(metrics::SerializeTable(agg.mean));
  doc["stddev"] = ordered_json::parse(metrics::SerializeTable(agg.stddev));
  const std::string tsv = metrics::ToTsv(agg.mean) + "\n" + metrics::ToTsv(agg.stddev);
  const std::string md = "Mean over " + std::to_string(tables.size()) + " runs\n\n" +
                         metrics::ToMarkdown(agg.mean) + "\nStandard deviation\n\n" +
                         metrics::ToMarkdown(agg.stddev);
  if (!o.out.empty()) WriteReport(s, o.out, doc, tsv, md, std::move(cfg));
  ShowReport(s, doc, tsv);
  return kExitOk;
}

int Verify(const Session& s) {
  const Options& o = s.opt;
  if (o.dump_fixtures) {
    s.out << fixtures::BundledFixtures();
    return kExitOk;
  }
  RunConfig cfg = NewConfig(s, "verify");
  const std::string text =
      o.fixtures.empty() ? std::string(fixtures::BundledFixtures())
                         : LoadText(o.fixtures, "fixtures", cfg);
  const WordSet stopwords = Stopwords(o, cfg);
  std::vector<fixtures::FixtureResult> results = fixtures::RunFixtures(text, stopwords);
  std::size_t failed = 0;
  ordered_json rows = ordered_json::array();
  for (const fixtures::FixtureResult& r : results) {
    failed += !r.passed;
    rows.push_back({{"group", r.group}, {"name", r.name}, {"passed", r.passed},
                    {"detail", r.detail}});
    if (!o.quiet && !o.json) {
      s.out << r.group << "\t" << r.name << "\t" << (r.passed ? "PASS" : "FAIL");
      if (!r.passed) s.out << "\t" << r.detail;
      s.out << "\n";
    }
  }
  s.Emit({{"fixtures", results.size()}, {"failed", failed}, {"results", rows}});
  s.Say(std::to_string(results.size() - failed) + "/" + std::to_string(results.size()) +
        " fixtures passed");
  if (failed > 0) {
    for (const fixtures::FixtureResult& r : results) {
      if (!r.passed) s.err << "FAIL " << r.group << "/" << r.name << ": " << r.detail << "\n";
    }
    return kExitError;
  }
  return kExitOk;
}

void ReportError(std::ostream& err, bool json, const std::string& kind,
                 const std::string& message, const std::vector<std::string>& details) {
  if (json) {
    ordered_json doc = {{"error", kind}, {"message", message}, {"details", details}};
    err << doc.dump(2) << "\n";
    return;
  }
  err << "error: " << message << "\n";
  for (const std::string& d : details) err << "  " << d << "\n";
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"hopkit: multi-hop QA corpus probing, perturbation and evaluation", "hopkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--quiet", o.quiet, "Print nothing on success");
  app.add_flag("--json", o.json, "Print machine-readable JSON");
  app.set_version_flag("--version", std::string(Version()));

  auto input = [&](CLI::App* c, std::string* field = nullptr, const char* flag = "--input") {
    c->add_option(flag, field ? *field : o.input, "Dataset file")->required();
  };
  auto format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "hotpotqa or 2wiki")->capture_default_str();
  };

  CLI::App* ingest = app.add_subcommand("ingest", "Validate a corpus and write it normalized");
  input(ingest);
  format(ingest);
  ingest->add_option("--r4c", o.r4c, "R4C derivation overlay keyed by id");
  ingest->add_flag("--annotated-only", o.annotated_only, "Drop examples without evidence");
  ingest->add_flag("--lenient", o.lenient, "Drop invalid records instead of failing");
  ingest->add_option("--out", o.out, "Output dataset")->required();

  CLI::App* split = app.add_subcommand("split", "Re-split a corpus");
  split->require_subcommand(1);
  CLI::App* small = split->add_subcommand("small", "Disjoint train/dev of fixed sizes");
  input(small);
  format(small);
  small->add_option("--train", o.train, "Train size")->required();
  small->add_option("--dev", o.dev, "Dev size")->required();
  small->add_option("--seed", o.seed, "Shuffle seed")->required();
  small->add_flag("--stratified", o.stratified, "Keep question-type proportions");
  small->add_flag("--select-annotation", o.select_annotation,
                  "Keep one evidence set per example");
  small->add_option("--out-dir", o.out_dir, "Directory for train.json and dev.json")
      ->required();

  CLI::App* probe = app.add_subcommand("probe", "Measure dataset biases");
  probe->require_subcommand(1);
  CLI::App* position = probe->add_subcommand("position-bias", "Supporting-fact positions");
  input(position);
  format(position);
  position->add_flag("--by-qtype", o.by_qtype, "Break down by coarse question type");
  position->add_option("--out", o.out, "Report JSON; .tsv and .md are written beside it");
  CLI::App* overlap = probe->add_subcommand("overlap", "Word-overlap shortcut detector");
  input(overlap);
  format(overlap);
  overlap->add_option("--stopwords", o.stopwords, "Stopword list, one word per line");
  overlap->add_flag("--all-types", o.all_types, "Probe every question, not only bridge");
  overlap->add_option("--dump-verdicts", o.dump_verdicts, "Per-example verdicts as JSON lines");
  overlap->add_option("--out", o.out, "Report JSON; .tsv and .md are written beside it");
  CLI::App* baseline = probe->add_subcommand("baseline", "Non-neural shortcut baselines");
  input(baseline);
  format(baseline);
  baseline->add_option("--kind", o.baseline_kind, "position0, overlap or both")
      ->capture_default_str();
  baseline->add_option("--stopwords", o.stopwords, "Stopword list, one word per line");
  baseline->add_option("--out", o.out, "Report JSON; .tsv and .md are written beside it");

  CLI::App* gen = app.add_subcommand("gen", "Generate perturbed evaluation sets");
  gen->require_subcommand(1);
  CLI::App* debias_cmd = gen->add_subcommand("debias", "Insert sentences into paragraphs");
  input(debias_cmd);
  format(debias_cmd);
  debias_cmd
      ->add_option("--variant", o.variant,
                   "add-unrelated, add-related, add2, add2swap, a comma list, or all")
      ->required();
  debias_cmd->add_option("--seed", o.seed, "Seed of run 1; run r uses seed + r - 1")
      ->required();
  debias_cmd->add_option("--runs", o.runs, "Number of runs, 1 to 5")->capture_default_str();
  debias_cmd->add_option("--out", o.out, "Output dataset")->required();
  debias_cmd->add_option("--pool", o.pool, "Unrelated sentence pool, one per line");
  debias_cmd->add_option("--templates", o.templates, "Related-sentence templates JSON");
  debias_cmd->add_option("--insert-at", o.insert_at, "front, random or back")
      ->capture_default_str();
  debias_cmd->add_flag("--gold-only", o.gold_only, "Perturb only gold paragraphs");
  CLI::App* adv = gen->add_subcommand("adversarial", "Invert comparisons, prune bridges");
  input(adv);
  format(adv);
  adv->add_option("--rule", o.rule, "invert, prune or both")->capture_default_str();
  adv->add_option("--lexicon", o.lexicon, "Inversion lexicon JSON");
  adv->add_option("--templates", o.templates, "Relation question templates JSON");
  adv->add_flag("--verify-with-triples", o.verify_triples, "Check yes/no flips against triples");
  adv->add_option("--out", o.out, "Output dataset")->required();
  adv->add_option("--skip-report", o.skip_report, "Skip report TSV");
  CLI::App* restrict_cmd =
      gen->add_subcommand("restrict", "Keep released examples whose id is in a base set");
  input(restrict_cmd);
  format(restrict_cmd);
  restrict_cmd->add_option("--base", o.base, "Base dataset")->required();
  restrict_cmd->add_option("--out", o.out, "Output dataset")->required();

  CLI::App* prep = app.add_subcommand("prep", "Entity-level task preparation");
  prep->require_subcommand(1);
  CLI::App* group = prep->add_subcommand("group-relations", "Map raw relations to groups");
  input(group);
  format(group);
  group->add_option("--rules", o.rules, "Relation grouping rules");
  group->add_option("--out", o.out, "Mapping TSV")->required();
  CLI::App* pairs = prep->add_subcommand("export-pairs", "Labeled ordered entity pairs");
  input(pairs);
  format(pairs);
  pairs->add_option("--spans", o.spans, "Entity spans keyed by example id");
  pairs->add_option("--train", o.train_input, "Training set defining the label inventory");
  pairs->add_option("--rules", o.rules, "Relation grouping rules");
  pairs->add_option("--out", o.out, "Pairs as JSON lines")->required();

  CLI::App* eval = app.add_subcommand("eval", "Score predictions");
  input(eval, &o.pred, "--pred");
  input(eval, &o.gold, "--gold");
  format(eval);
  eval->add_option("--tasks", o.tasks, "Comma list of ans, sent, ent")->capture_default_str();
  eval->add_option("--out", o.out, "Report JSON; .tsv and .md are written beside it");
  eval->add_flag("--per-example", o.per_example, "Include per-example scores");

  CLI::App* report = app.add_subcommand("report", "Derived tables");
  report->require_subcommand(1);
  CLI::App* drop = report->add_subcommand("drop", "Performance drop between two reports");
  drop->add_option("--base", o.base, "Report on the original set")->required();
  drop->add_option("--pert", o.pert, "Report on the perturbed set")->required();
  drop->add_option("--out", o.out, "Report JSON; .tsv and .md are written beside it");
  CLI::App* aggregate = report->add_subcommand("aggregate", "Mean and deviation over runs");
  aggregate->add_option("reports", o.reports, "Run reports")->required();
  aggregate->add_option("--out", o.out, "Report JSON; .tsv and .md are written beside it");

  CLI::App* verify = app.add_subcommand("verify", "Run the bundled self-check fixtures");
  verify->add_option("--fixtures", o.fixtures, "Fixture file instead of the bundled one");
  verify->add_option("--stopwords", o.stopwords, "Stopword list, one word per line");
  verify->add_flag("--dump-fixtures", o.dump_fixtures, "Print the bundled fixtures");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << Version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  const Session session{o, args, out, err};
  try {
    if (ingest->parsed()) return Ingest(session);
    if (small->parsed()) return SplitSmall(session);
    if (position->parsed()) return ProbePositionBias(session);
    if (overlap->parsed()) return ProbeOverlap(session);
    if (baseline->parsed()) return ProbeBaseline(session);
    if (debias_cmd->parsed()) return GenDebias(session);
    if (adv->parsed()) return GenAdversarial(session);
    if (restrict_cmd->parsed()) return GenRestrict(session);
    if (group->parsed()) return PrepGroupRelations(session);
    if (pairs->parsed()) return PrepExportPairs(session);
    if (eval->parsed()) return Eval(session);
    if (drop->parsed()) return ReportDrop(session);
    if (aggregate->parsed()) return ReportAggregate(session);
    if (verify->parsed()) return Verify(session);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const corpus::ValidationError& e) {
    std::vector<std::string> details;
    for (const corpus::RecordIssue& issue : e.issues()) details.push_back(issue.ToString());
    ReportError(err, o.json, "validation", e.what(), details);
    return kExitError;
  } catch (const corpus::OrphanIdsError& e) {
    ReportError(err, o.json, "orphan-ids", e.what(), e.ids());
    return kExitError;
  } catch (const Error& e) {
    ReportError(err, o.json, "hopkit", e.what(), {});
    return kExitError;
  } catch (const std::exception& e) {
    ReportError(err, o.json, "system", e.what(), {});
    return kExitError;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace hopkit::cli
