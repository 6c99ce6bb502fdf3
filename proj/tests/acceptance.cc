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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "odsel/corpus.h"
#include "odsel/evaluation.h"
#include "odsel/features.h"
#include "odsel/rules.h"
#include "odsel/synth.h"

namespace {

using odsel::ClassLabel;
using odsel::FeatureValue;

// A failed check; the message ends up on the criterion's line.
struct CheckFailure {
  std::string what;
};

void Require(bool ok, const std::string& what) {
  if (!ok) throw CheckFailure{what};
}

ClassLabel L(std::string_view name) { return *odsel::ParseClassLabel(name); }

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string Fixed(double x, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << x;
  return out.str();
}

std::string PublishedMetrics() {
  const auto start = std::chrono::steady_clock::now();
  odsel::ParsedConfusion grid = odsel::ParseConfusionCsv(
      odsel::ReadTextFile(std::string(ODSEL_TESTDATA_DIR) + "/published_confusion.csv"));
  struct Row {
    const char* label;
    double recall, precision, fallout, f;
  };
  const Row rows[] = {
      {"CPQ", 100, 63.64, 12.12, .78}, {"CPO", 66.67, 100, 0, .80}, {"CPOQ", 100, 100, 0, 1.00},
      {"T", 50, 100, 0, .67},          {"CP", 100, 100, 0, 1.00},   {"O", 100, 60, 5.41, .75},
      {"CO", 66.67, 100, 0, .80},      {"C", 0, 0, 5.13, 0},        {"CQ", 0, 100, 0, 0},
      {"COQ", 100, 100, 0, 1.00},      {"PO", 50, 100, 0, .67},     {"OQ", 66.67, 50, 5.41, .57},
      {"Q", 0, 0, 2.50, 0},            {"POQ", 0, 100, 0, 0},       {"PQ", 0, 100, 0, 0},
  };
  int cells = 0;
  for (const Row& r : rows) {
    odsel::ClassMetrics m = odsel::MetricsFor(grid.matrix, L(r.label));
    const double got[] = {100 * m.recall, 100 * m.precision, 100 * m.fallout, m.f1};
    const double want[] = {r.recall, r.precision, r.fallout, r.f};
    for (int i = 0; i < 4; ++i, ++cells) {
      Require(std::abs(got[i] - want[i]) <= 0.005,
              std::string(r.label) + " cell " + std::to_string(i) + ": " + Fixed(got[i], 4));
    }
  }
  const double elapsed = Seconds(start);
  Require(elapsed < 1.0, "took " + Fixed(elapsed, 3) + " s");
  return std::to_string(cells) + " cells within 0.005";
}

std::string RegistryAudit() {
  const odsel::FeatureRegistry& r = odsel::FeatureRegistry::Get();
  Require(r.size() == 82, "size " + std::to_string(r.size()));
  const std::pair<odsel::FeatureGroup, size_t> sizes[] = {
      {odsel::FeatureGroup::kFamiliarity, 6}, {odsel::FeatureGroup::kInherent, 9},
      {odsel::FeatureGroup::kConceptualPact, 23}, {odsel::FeatureGroup::kContrast, 15},
      {odsel::FeatureGroup::kIntentional, 29}};
  for (const auto& [g, n] : sizes) {
    Require(r.GroupSize(g) == n, std::string(odsel::ToString(g)) + " has " +
                                     std::to_string(r.GroupSize(g)));
  }
  // Spot checks across groups; the full token list lives in the unit tests.
  const char* names[] = {"reference-relation", "problem-number", "distance-last-ref-in-turns",
                         "cp-given-last-3", "majority-quantity-freq",
                         "priceupperlimit-constraintpresence", "prev-ref-state",
                         "price-contrast"};
  for (const char* n : names) Require(r.IndexOf(n).has_value(), std::string("missing ") + n);
  return "82 features, 6/9/23/15/29";
}

std::string ClassBijection() {
  const odsel::Attribute content[] = {odsel::Attribute::kColor, odsel::Attribute::kPrice,
                                      odsel::Attribute::kOwner, odsel::Attribute::kQuantity};
  std::set<std::string> reference;
  for (const odsel::LabelFrequency& f : odsel::ReferenceLabelOrder()) {
    reference.insert(std::string(f.label));
  }
  std::set<std::string> images;
  for (unsigned bits = 0; bits < 16; ++bits) {
    odsel::AttributeSet s{odsel::Attribute::kType};
    for (unsigned i = 0; i < 4; ++i) {
      if (bits & (1u << i)) s.Insert(content[i]);
    }
    const std::string name = odsel::EncodeClass(s).name();
    Require(reference.count(name) == 1, "unexpected label " + name);
    images.insert(name);
  }
  Require(images.size() == 16, std::to_string(images.size()) + " distinct labels");
  const std::string row37 =
      odsel::EncodeClass({odsel::Attribute::kType, odsel::Attribute::kColor,
                          odsel::Attribute::kPrice, odsel::Attribute::kOwner})
          .name();
  Require(row37 == "CPO", "utterance 37 encodes as " + row37);
  return "16 subsets onto 16 labels; {type,color,price,owner} -> CPO";
}

std::string MajorityOracle() {
  std::vector<ClassLabel> labels;
  for (const odsel::LabelFrequency& f : odsel::ReferenceLabelOrder()) {
    labels.insert(labels.end(), f.count, L(f.label));
  }
  odsel::MajorityResult m = odsel::MajorityBaseline(labels);
  Require(m.label == L("CPQ"), "label " + m.label.name());
  Require(m.fraction == 64.0 / 393.0, "fraction " + Fixed(m.fraction, 6));
  return "(CPQ, 64/393)";
}

std::string PlantedRecovery() {
  const auto start = std::chrono::steady_clock::now();
  odsel::SynthParams p;
  p.seed = 1;
  odsel::Corpus corpus = odsel::Generate(p);
  Require(odsel::Validate(corpus).empty(), "generated corpus is invalid");
  odsel::Dataset ds = odsel::ExtractExamples(corpus, odsel::GroupSet::All(), p.focus);
  Require(ds.examples.size() >= 300 && ds.examples.size() <= 500,
          std::to_string(ds.examples.size()) + " mentions");
  Require(p.policy.rules.size() <= 5, "policy too large");

  odsel::RuleList learned = odsel::Train(ds, odsel::LearnerParams{});
  size_t correct = 0;
  for (const odsel::Example& ex : ds.examples) {
    correct += odsel::Classify(learned, ex.vector) == ex.label;
  }
  Require(correct == ds.examples.size(), "training accuracy " + std::to_string(correct) + "/" +
                                             std::to_string(ds.examples.size()));

  odsel::FoldPlan plan = odsel::FoldPlan::Make(ds.examples.size(), 25, 1);
  odsel::CVResult learner =
      odsel::CrossValidate(ds, plan, odsel::RuleLearnerFactory(odsel::LearnerParams{}));
  odsel::CVResult majority = odsel::CrossValidate(ds, plan, odsel::MajorityFactory());
  Require(learner.mean >= 0.95, "cv accuracy " + Fixed(learner.mean, 4));
  odsel::PairedTResult t = odsel::PairedT(learner.per_fold_accuracy, majority.per_fold_accuracy);
  Require(t.df == 24, "df " + std::to_string(t.df));
  Require(t.t > 0 && t.significant_01, "t " + Fixed(t.t, 2));
  const double elapsed = Seconds(start);
  Require(elapsed < 60, "took " + Fixed(elapsed, 1) + " s");
  return std::to_string(ds.examples.size()) + " examples, train 100%, cv " +
         Fixed(100 * learner.mean, 1) + "% vs majority " + Fixed(100 * majority.mean, 1) +
         "%, t(24) = " + Fixed(t.t, 2);
}

std::string AssetSemantics() {
  int cases = 0;
  for (const std::string& name : odsel::BuiltinRuleNames()) {
    odsel::RuleList rl = odsel::BuiltinRules(name);
    Require(odsel::Classify(rl, odsel::FeatureVector{}) == rl.default_label,
            name + ": empty vector misses the default");
    ++cases;
    for (size_t i = 0; i < rl.rules.size(); ++i) {
      odsel::FeatureVector v;
      for (const odsel::Condition& c : rl.rules[i].conditions) {
        if (c.index()) v.Set(*c.index(), c.value());
      }
      if (!rl.rules[i].Fires(v)) continue;
      std::optional<size_t> fired = odsel::FiringRule(rl, v);
      Require(fired && *fired <= i, name + " rule " + std::to_string(i) + " shadowed wrongly");
      for (size_t j = 0; j < *fired; ++j) {
        Require(!rl.rules[j].Fires(v), name + " rule " + std::to_string(j) + " skipped");
      }
      ++cases;
    }
  }
  odsel::RuleList fig14 = odsel::BuiltinRules("fig14");
  odsel::FeatureVector v;
  v.Set("prev-solution-size", FeatureValue::Symbol("determinate"));
  v.Set("colormatch-constraintpresence", FeatureValue::Symbol("explicit"));
  Require(odsel::Classify(fig14, v) == L("T"), "type-only rule case gives " +
                                                   odsel::Classify(fig14, v).name());
  ++cases;
  return std::to_string(cases) + " hand-built vectors; @fig14 type-only rule -> T";
}

std::string ProtocolInvariants() {
  odsel::FoldPlan plan = odsel::FoldPlan::Make(393, 25, 1);
  std::vector<size_t> sizes = plan.FoldSizes();
  Require(std::count(sizes.begin(), sizes.end(), 16u) == 18 &&
              std::count(sizes.begin(), sizes.end(), 15u) == 7,
          "fold sizes");
  std::vector<int> tested(393, 0);
  for (int f = 0; f < plan.k(); ++f) {
    for (size_t r : plan.TestRows(f)) ++tested[r];
  }
  for (int n : tested) Require(n == 1, "an example is tested " + std::to_string(n) + " times");

  const std::vector<double> series = {0.61, 0.58, 0.64, 0.70, 0.55};
  Require(odsel::PairedT(series, series).t == 0, "self-paired t is nonzero");

  std::mt19937 rng(7);
  std::uniform_int_distribution<int> count(0, 50);
  for (int i = 0; i < 20; ++i) {
    const int p0 = 1 + count(rng), n0 = count(rng);
    const int p1 = std::uniform_int_distribution<int>(1, p0)(rng);
    const int n1 = std::uniform_int_distribution<int>(0, n0)(rng);
    const double oracle =
        p1 * (std::log(static_cast<double>(p1) / (p1 + n1)) -
              std::log(static_cast<double>(p0) / (p0 + n0))) /
        std::log(2.0);
    Require(std::abs(odsel::FoilGain(p0, n0, p1, n1) - oracle) <= 1e-9,
            "foil gain differs at tuple " + std::to_string(i));
  }
  return "18x16 + 7x15 folds, t(a,a) = 0, 20 gain tuples";
}

std::string SyntheticReport() {
  odsel::SynthParams p;
  p.seed = 2;
  odsel::Corpus corpus = odsel::Generate(p);
  const std::vector<std::pair<std::string, std::string>> configs = {
      {"baseline", ""},           {"familiarity", "fam"},
      {"conceptual-pact", "cp"},  {"contrast-seg", "contrast"},
      {"contrast-1utt", "contrast"}, {"contrast-5utt", "contrast"},
      {"intentional", "iinf"},    {"intentional+familiarity", "iinf,fam"},
      {"all-seg", "all"}};
  const odsel::FocusModel focus[] = {
      odsel::FocusModel::kSegment,      odsel::FocusModel::kSegment,
      odsel::FocusModel::kSegment,      odsel::FocusModel::kSegment,
      odsel::FocusModel::kOneUtterance, odsel::FocusModel::kFiveUtterance,
      odsel::FocusModel::kSegment,      odsel::FocusModel::kSegment,
      odsel::FocusModel::kSegment};
  std::vector<odsel::ExperimentRow> rows;
  std::optional<odsel::FoldPlan> plan;
  for (size_t i = 0; i < configs.size(); ++i) {
    odsel::Dataset ds = odsel::ExtractExamples(corpus, odsel::GroupSet::All(), focus[i]);
    if (!plan) plan = odsel::FoldPlan::Make(ds.examples.size(), 25, 1);
    odsel::ExperimentRow row{configs[i].first, {}};
    if (configs[i].second.empty()) {
      row.result = odsel::CrossValidate(ds, *plan, odsel::MajorityFactory());
    } else {
      ds.groups = odsel::ParseGroupSet(configs[i].second);
      row.result =
          odsel::CrossValidate(ds, *plan, odsel::RuleLearnerFactory(odsel::LearnerParams{}));
    }
    rows.push_back(std::move(row));
  }
  const std::string table = odsel::FormatAccuracyTable(rows, odsel::ReportFormat::kText);
  const std::string ttest = odsel::FormatPairedTMatrix(rows, odsel::ReportFormat::kCsv);
  for (const auto& [name, groups] : configs) {
    Require(table.find(name) != std::string::npos, "report lacks " + name);
  }
  Require(std::count(ttest.begin(), ttest.end(), '\n') == 1 + 9 * 8, "t-matrix shape");
  return "corpus-level accuracies are not reproducible without the original corpus; "
         "9-row accuracy table and 9x9 paired-t matrix regenerated on synthetic data";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<std::string()> check;
  };
  const Criterion criteria[] = {
      {"published-metrics-reproduction", PublishedMetrics},
      {"feature-registry-audit", RegistryAudit},
      {"class-encoding-bijection", ClassBijection},
      {"majority-oracle", MajorityOracle},
      {"planted-policy-recovery", PlantedRecovery},
      {"rule-asset-semantics", AssetSemantics},
      {"protocol-invariants", ProtocolInvariants},
      {"synthetic-report-substitution", SyntheticReport},
  };
  int failed = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    std::string detail;
    bool ok = false;
    try {
      detail = c.check();
      ok = true;
    } catch (const CheckFailure& f) {
      detail = f.what;
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!ok) ++failed;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << index << " " << c.name << ": " << detail
              << '\n';
  }
  std::cout << (std::size(criteria) - failed) << "/" << std::size(criteria)
            << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
