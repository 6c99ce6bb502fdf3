// Copyright 2026 The odsel Authors.
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

#include "cli.h"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "odsel/corpus.h"
#include "odsel/evaluation.h"
#include "odsel/rules.h"
#include "odsel/synth.h"

namespace odsel::cli {

namespace {

// Thrown for bad flag combinations detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string corpus;
  std::string dataset;
  std::string groups = "all";
  std::string focus;
  int k = 25;
  uint64_t seed = 1;
  std::string out;
  std::string rules;
  bool noise_correction = false;
  int min_coverage = 1;
  std::vector<std::string> configs;
  std::string format = "text";
  // synth
  int dialogues = 13;
  double noise = 0;
  std::string policy;
  int min_utterances = 40;
  int max_utterances = 60;
  // metrics
  std::string predictions;
  std::string confusion;
};

void Emit(const Options& o, const std::string& file, const std::string& content,
          std::ostream& out) {
  if (o.out.empty()) {
    out << content;
    return;
  }
  std::filesystem::create_directories(o.out);
  WriteTextFile((std::filesystem::path(o.out) / file).string(), content);
}

ReportFormat Format(const Options& o) {
  if (o.format == "text") return ReportFormat::kText;
  if (o.format == "csv") return ReportFormat::kCsv;
  throw UsageError("--format must be text or csv");
}

std::optional<FocusModel> FocusFlag(const Options& o) {
  if (o.focus.empty()) return std::nullopt;
  auto f = ParseFocusModel(o.focus);
  if (!f) throw UsageError("unknown focus model '" + o.focus + "' (seg, 1utt, 5utt)");
  return f;
}

GroupSet GroupsFlag(const Options& o) {
  try {
    return ParseGroupSet(o.groups);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// Focus for a group selection: required whenever CONTRAST is active.
FocusModel RequireFocus(GroupSet groups, std::optional<FocusModel> focus) {
  if (focus) return *focus;
  if (groups.Contains(FeatureGroup::kContrast)) {
    throw UsageError("the contrast group needs --focus seg|1utt|5utt");
  }
  return FocusModel::kSegment;
}

LearnerParams Learner(const Options& o) {
  LearnerParams p;
  p.noise_correction = o.noise_correction;
  p.min_coverage = o.min_coverage;
  p.rng_seed = o.seed;
  return p;
}

Dataset FromParsed(const ParsedDataset& parsed, GroupSet groups) {
  Dataset ds;
  ds.groups = groups;
  for (size_t i = 0; i < parsed.vectors.size(); ++i) {
    Example ex;
    ex.vector = parsed.vectors[i];
    if (parsed.has_gold) ex.label = parsed.labels[i];
    ex.utterance = static_cast<int>(i);
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

// Dataset from --dataset or --corpus; `has_gold` reports whether labels are
// real.
Dataset LoadDataset(const Options& o, bool* has_gold) {
  const GroupSet groups = GroupsFlag(o);
  if (!o.dataset.empty() && !o.corpus.empty()) {
    throw UsageError("give either --dataset or --corpus, not both");
  }
  if (!o.dataset.empty()) {
    ParsedDataset parsed = ParseDatasetCsv(ReadTextFile(o.dataset));
    if (has_gold) *has_gold = parsed.has_gold;
    return FromParsed(parsed, groups);
  }
  if (o.corpus.empty()) throw UsageError("--corpus or --dataset is required");
  if (has_gold) *has_gold = true;
  Corpus c = ParseCorpus(ReadTextFile(o.corpus));
  return ExtractExamples(c, groups, RequireFocus(groups, FocusFlag(o)));
}

int CmdValidate(const Options& o, std::ostream& out) {
  if (o.corpus.empty()) throw UsageError("--corpus is required");
  Corpus c = ParseCorpusUnchecked(ReadTextFile(o.corpus));
  std::vector<Violation> violations = Validate(c);
  for (const Violation& v : violations) out << FormatViolation(v) << '\n';
  if (!violations.empty()) return kViolations;
  out << "ok: " << c.dialogues.size() << " dialogues, " << c.MentionCount()
      << " mentions\n";
  return kOk;
}

int CmdExtract(const Options& o, std::ostream& out) {
  if (o.corpus.empty()) throw UsageError("--corpus is required");
  Dataset ds = LoadDataset(o, nullptr);
  Emit(o, "dataset.csv", FormatDatasetCsv(ds), out);
  return kOk;
}

int CmdTrain(const Options& o, std::ostream& out) {
  bool has_gold = false;
  Dataset ds = LoadDataset(o, &has_gold);
  if (!has_gold) throw UsageError("training data needs a class column");
  if (ds.examples.empty()) throw UsageError("training data is empty");
  Emit(o, "model.rules", FormatRuleList(Train(ds, Learner(o))), out);
  return kOk;
}

int CmdPredict(const Options& o, std::ostream& out) {
  if (o.rules.empty()) throw UsageError("--rules is required");
  RuleList rl = LoadRules(o.rules);
  bool has_gold = false;
  Dataset ds = LoadDataset(o, &has_gold);
  if (ds.examples.empty()) {
    Emit(o, "predictions.csv", "", out);
    return kOk;
  }
  std::ostringstream preds;
  preds << (has_gold ? "row,predicted,gold\n" : "row,predicted\n");
  ConfusionMatrix m;
  for (size_t i = 0; i < ds.examples.size(); ++i) {
    const Example& ex = ds.examples[i];
    ClassLabel p = Classify(rl, ex.vector);
    preds << i << ',' << p.name();
    if (has_gold) {
      preds << ',' << ex.label.name();
      m.Add(ex.label, p);
    }
    preds << '\n';
  }
  Emit(o, "predictions.csv", preds.str(), out);
  if (has_gold) {
    const ReportFormat fmt = Format(o);
    std::ostringstream report;
    report << (o.out.empty() ? "\n" : "") << "accuracy " << m.Trace() << "/" << m.Total()
           << "\n\n"
           << FormatClassMetrics(PerClassMetrics(m), fmt) << '\n'
           << FormatConfusion(m, m.UsedLabels(), fmt);
    Emit(o, "metrics.txt", report.str(), out);
  }
  return kOk;
}

int CmdExperiment(const Options& o, std::ostream& out) {
  if (o.corpus.empty()) throw UsageError("--corpus is required");
  std::vector<ExperimentConfig> configs;
  const std::vector<std::string> texts = o.configs.empty() ? DefaultExperimentConfigs()
                                                           : o.configs;
  for (const std::string& t : texts) {
    try {
      configs.push_back(ParseExperimentConfig(t, FocusFlag(o)));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  Corpus c = ParseCorpus(ReadTextFile(o.corpus));

  // All configurations share one dataset order and one fold plan.
  std::map<FocusModel, Dataset> by_focus;
  auto dataset_for = [&](FocusModel f) -> const Dataset& {
    auto it = by_focus.find(f);
    if (it == by_focus.end()) it = by_focus.emplace(f, ExtractExamples(c, GroupSet::All(), f)).first;
    return it->second;
  };
  const Dataset& base = dataset_for(FocusModel::kSegment);
  if (base.examples.empty()) throw UsageError("corpus has no mentions");
  if (static_cast<size_t>(o.k) > base.examples.size() || o.k < 2) {
    throw UsageError("--k must lie in [2, number of examples]");
  }
  const FoldPlan plan = FoldPlan::Make(base.examples.size(), o.k, o.seed);

  std::vector<ExperimentRow> rows;
  for (const ExperimentConfig& cfg : configs) {
    ExperimentRow row;
    row.name = cfg.name;
    if (cfg.majority) {
      row.result = CrossValidate(base, plan, MajorityFactory());
    } else {
      Dataset ds = dataset_for(cfg.focus.value_or(FocusModel::kSegment));
      ds.groups = cfg.groups;
      row.result = CrossValidate(ds, plan, RuleLearnerFactory(Learner(o)));
    }
    rows.push_back(std::move(row));
  }

  const MajorityResult majority = MajorityBaseline(base.Labels());
  std::ostringstream text;
  text << "examples " << base.examples.size() << ", folds " << o.k << ", seed " << o.seed
       << "\nmajority class " << majority.label.name() << " ("
       << std::fixed << std::setprecision(1) << majority.fraction * 100
       << "% of examples)\n\n"
       << FormatAccuracyTable(rows, ReportFormat::kText);
  if (rows.size() > 1) text << '\n' << FormatPairedTMatrix(rows, ReportFormat::kText);
  if (o.out.empty()) {
    out << text.str();
  } else {
    Emit(o, "experiment.txt", text.str(), out);
    Emit(o, "accuracy.csv", FormatAccuracyTable(rows, ReportFormat::kCsv), out);
    if (rows.size() > 1) Emit(o, "ttest.csv", FormatPairedTMatrix(rows, ReportFormat::kCsv), out);
  }
  return kOk;
}

int CmdSynth(const Options& o, std::ostream& out) {
  SynthParams p;
  p.seed = o.seed;
  p.n_dialogues = o.dialogues;
  p.label_noise = o.noise;
  p.min_utterances = o.min_utterances;
  p.max_utterances = o.max_utterances;
  if (!o.policy.empty() && o.policy != "@default") p.policy = LoadRules(o.policy);
  if (auto f = FocusFlag(o)) p.focus = *f;
  try {
    CheckSynthParams(p);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Emit(o, "corpus.tsv", SerializeCorpus(Generate(p)), out);
  return kOk;
}

int CmdMetrics(const Options& o, std::ostream& out) {
  if (o.predictions.empty() == o.confusion.empty()) {
    throw UsageError("give exactly one of --predictions or --confusion");
  }
  ConfusionMatrix m;
  std::vector<ClassLabel> labels;
  if (!o.confusion.empty()) {
    ParsedConfusion parsed = ParseConfusionCsv(ReadTextFile(o.confusion));
    m = parsed.matrix;
    labels = parsed.labels;
  } else {
    std::istringstream in(ReadTextFile(o.predictions));
    std::string line;
    int line_no = 0;
    int predicted_col = -1, gold_col = -1;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::stringstream ss(line);
      for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
      if (predicted_col < 0) {
        for (size_t i = 0; i < cells.size(); ++i) {
          if (cells[i] == "predicted") predicted_col = static_cast<int>(i);
          if (cells[i] == "gold") gold_col = static_cast<int>(i);
        }
        if (predicted_col < 0 || gold_col < 0) {
          throw std::runtime_error("predictions file needs 'predicted' and 'gold' columns");
        }
        continue;
      }
      const size_t need = static_cast<size_t>(std::max(predicted_col, gold_col)) + 1;
      auto p = cells.size() >= need ? ParseClassLabel(cells[predicted_col]) : std::nullopt;
      auto g = cells.size() >= need ? ParseClassLabel(cells[gold_col]) : std::nullopt;
      if (!p || !g) {
        throw std::runtime_error("predictions line " + std::to_string(line_no) +
                                 ": bad class label");
      }
      m.Add(*g, *p);
    }
    labels = m.UsedLabels();
  }
  const ReportFormat fmt = Format(o);
  std::ostringstream report;
  report << FormatClassMetrics(PerClassMetrics(m, labels), fmt) << '\n'
         << FormatConfusion(m, labels, fmt);
  Emit(o, "metrics.txt", report.str(), out);
  return kOk;
}

}  // namespace

std::vector<std::string> DefaultExperimentConfigs() {
  return {"baseline=majority",
          "familiarity=fam",
          "conceptual-pact=cp",
          "contrast-seg=contrast:seg",
          "contrast-1utt=contrast:1utt",
          "contrast-5utt=contrast:5utt",
          "intentional=iinf",
          "intentional+familiarity=iinf,fam",
          "all-seg=all:seg"};
}

ExperimentConfig ParseExperimentConfig(std::string_view text,
                                       std::optional<FocusModel> default_focus) {
  ExperimentConfig cfg;
  std::string_view spec = text;
  const size_t eq = text.find('=');
  if (eq != std::string_view::npos) {
    cfg.name = std::string(text.substr(0, eq));
    spec = text.substr(eq + 1);
    if (cfg.name.empty()) throw std::invalid_argument("empty experiment name in '" +
                                                      std::string(text) + "'");
  } else {
    cfg.name = std::string(text);
  }
  if (spec == "majority") {
    cfg.majority = true;
    return cfg;
  }
  std::string_view groups = spec;
  const size_t colon = spec.find(':');
  if (colon != std::string_view::npos) {
    groups = spec.substr(0, colon);
    auto f = ParseFocusModel(spec.substr(colon + 1));
    if (!f) {
      throw std::invalid_argument("unknown focus model in '" + std::string(text) + "'");
    }
    cfg.focus = f;
  } else {
    cfg.focus = default_focus;
  }
  cfg.groups = ParseGroupSet(groups);
  if (cfg.groups.Contains(FeatureGroup::kContrast) && !cfg.focus) {
    throw std::invalid_argument("experiment '" + cfg.name +
                                "' uses the contrast group but names no focus model");
  }
  return cfg;
}

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Content selection for object descriptions in dialogue", "odsel"};
  app.require_subcommand(1);
  Options o;

  auto corpus = [&](CLI::App* c) { c->add_option("--corpus", o.corpus, "Annotated corpus file"); };
  auto features = [&](CLI::App* c) {
    c->add_option("--groups", o.groups, "Feature groups: fam,inh,cp,contrast,iinf or all")
        ->capture_default_str();
    c->add_option("--focus", o.focus, "Focus model for contrast features: seg, 1utt, 5utt");
  };
  auto learner = [&](CLI::App* c) {
    c->add_flag("--noise-correction", o.noise_correction, "Grow/prune rules on split data");
    c->add_option("--min-coverage", o.min_coverage, "Minimum positives per rule")
        ->capture_default_str();
    c->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  };
  auto output = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Output directory (default: standard output)");
  };
  auto format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "Report format: text or csv")->capture_default_str();
  };

  CLI::App* validate = app.add_subcommand("validate", "Check a corpus file");
  corpus(validate);

  CLI::App* extract = app.add_subcommand("extract", "Write the feature dataset of a corpus");
  corpus(extract);
  features(extract);
  output(extract);

  CLI::App* train = app.add_subcommand("train", "Learn a rule list");
  corpus(train);
  train->add_option("--dataset", o.dataset, "Dataset file instead of a corpus");
  features(train);
  learner(train);
  output(train);

  CLI::App* predict = app.add_subcommand("predict", "Classify with a rule list");
  predict->add_option("--rules", o.rules, "Rule file, or @fig14 / @fig16")->required();
  corpus(predict);
  predict->add_option("--dataset", o.dataset, "Dataset file instead of a corpus");
  features(predict);
  output(predict);
  format(predict);

  CLI::App* experiment = app.add_subcommand("experiment", "Cross-validated comparison");
  corpus(experiment);
  experiment->add_option("--config", o.configs,
                         "name=groups[:focus] or name=majority; repeatable");
  experiment->add_option("--focus", o.focus, "Default focus model for contrast configs");
  experiment->add_option("--k", o.k, "Number of folds")->capture_default_str();
  learner(experiment);
  output(experiment);

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  synth->add_option("--dialogues", o.dialogues, "Number of dialogues")->capture_default_str();
  synth->add_option("--noise", o.noise, "Fraction of flipped labels")->capture_default_str();
  synth->add_option("--policy", o.policy, "Planted rule list, a file or @fig14 / @fig16");
  synth->add_option("--min-utterances", o.min_utterances)->capture_default_str();
  synth->add_option("--max-utterances", o.max_utterances)->capture_default_str();
  synth->add_option("--focus", o.focus, "Focus model the policy sees");
  output(synth);

  CLI::App* metrics = app.add_subcommand("metrics", "Per-class metrics and confusion grid");
  metrics->add_option("--predictions", o.predictions, "CSV with predicted and gold columns");
  metrics->add_option("--confusion", o.confusion, "Confusion grid CSV");
  output(metrics);
  format(metrics);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    if (validate->parsed()) return CmdValidate(o, out);
    if (extract->parsed()) return CmdExtract(o, out);
    if (train->parsed()) return CmdTrain(o, out);
    if (predict->parsed()) return CmdPredict(o, out);
    if (experiment->parsed()) return CmdExperiment(o, out);
    if (synth->parsed()) return CmdSynth(o, out);
    if (metrics->parsed()) return CmdMetrics(o, out);
  } catch (const CorpusInvariantError& e) {
    err << "error: " << e.what() << '\n';
    for (const Violation& v : e.violations()) err << "  " << FormatViolation(v) << '\n';
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}

}  // namespace odsel::cli
