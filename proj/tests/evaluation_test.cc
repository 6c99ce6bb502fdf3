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

#include "odsel/evaluation.h"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.h"

namespace odsel {
namespace {

ClassLabel L(std::string_view name) { return *ParseClassLabel(name); }

TEST(FoldPlanTest, SizesFor393Into25) {
  FoldPlan plan = FoldPlan::Make(393, 25, 7);
  std::vector<size_t> sizes = plan.FoldSizes();
  ASSERT_EQ(sizes.size(), 25u);
  EXPECT_EQ(std::count(sizes.begin(), sizes.end(), 16u), 18);
  EXPECT_EQ(std::count(sizes.begin(), sizes.end(), 15u), 7);

  std::vector<int> tested(393, 0);
  for (int f = 0; f < 25; ++f) {
    std::vector<size_t> test = plan.TestRows(f);
    std::vector<size_t> train = plan.TrainRows(f);
    EXPECT_EQ(test.size() + train.size(), 393u);
    std::set<size_t> in_test(test.begin(), test.end());
    for (size_t r : train) EXPECT_FALSE(in_test.count(r));
    for (size_t r : test) ++tested[r];
  }
  for (int t : tested) EXPECT_EQ(t, 1);
}

TEST(FoldPlanTest, DeterministicPerSeed) {
  EXPECT_EQ(FoldPlan::Make(100, 10, 3), FoldPlan::Make(100, 10, 3));
  EXPECT_NE(FoldPlan::Make(100, 10, 3).assignment(), FoldPlan::Make(100, 10, 4).assignment());
  EXPECT_THROW(FoldPlan::Make(5, 6, 1), std::invalid_argument);
  EXPECT_THROW(FoldPlan::Make(5, 0, 1), std::invalid_argument);
}

double OracleT(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  std::vector<double> d(n);
  for (size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / n;
  double ss = 0;
  for (double x : d) ss += (x - mean) * (x - mean);
  return mean / (std::sqrt(ss / (n - 1)) / std::sqrt(static_cast<double>(n)));
}

TEST(PairedTTest, MatchesOracle) {
  const std::vector<double> a = {0.9, 0.8, 0.85, 0.95, 0.7};
  const std::vector<double> b = {0.6, 0.7, 0.80, 0.60, 0.7};
  PairedTResult r = PairedT(a, b);
  EXPECT_NEAR(r.t, OracleT(a, b), 1e-12);
  EXPECT_EQ(r.df, 4);
  EXPECT_NEAR(r.mean_difference, 0.16, 1e-12);
  // t = 2.30 with df 4 lies below 2.776.
  EXPECT_FALSE(r.significant_05);
}

TEST(PairedTTest, WorkedDifferences) {
  // Differences 1..4: mean 2.5, sd sqrt(5/3), t = 2.5 / (sd / 2).
  const std::vector<double> a = {1, 2, 3, 4};
  const std::vector<double> b = {0, 0, 0, 0};
  PairedTResult r = PairedT(a, b);
  EXPECT_NEAR(r.mean_difference, 2.5, 1e-12);
  EXPECT_NEAR(r.t, 2.5 / (std::sqrt(5.0 / 3.0) / 2.0), 1e-12);
  EXPECT_TRUE(r.significant_05);
  EXPECT_FALSE(r.significant_01);
}

TEST(PairedTTest, SeriesAgainstItself) {
  const std::vector<double> a = {0.5, 0.6, 0.7};
  PairedTResult r = PairedT(a, a);
  EXPECT_EQ(r.t, 0);
  EXPECT_FALSE(r.significant_05);
}

TEST(PairedTTest, ConstantNonzeroDifference) {
  const std::vector<double> a = {1, 1, 1};
  const std::vector<double> b = {0, 0, 0};
  PairedTResult r = PairedT(a, b);
  EXPECT_EQ(r.t, std::numeric_limits<double>::infinity());
  EXPECT_TRUE(r.significant_01);
  EXPECT_EQ(PairedT(b, a).t, -std::numeric_limits<double>::infinity());
}

TEST(PairedTTest, RejectsBadInput) {
  const std::vector<double> one = {1};
  const std::vector<double> two = {1, 2};
  const std::vector<double> three = {1, 2, 3};
  EXPECT_THROW(PairedT(one, one), std::invalid_argument);
  EXPECT_THROW(PairedT(two, three), std::invalid_argument);
}

TEST(CriticalTTest, TableValues) {
  EXPECT_NEAR(CriticalT(1, 0.05), 12.706, 1e-3);
  EXPECT_NEAR(CriticalT(24, 0.05), 2.064, 1e-3);
  EXPECT_NEAR(CriticalT(24, 0.01), 2.797, 1e-3);
  EXPECT_NEAR(CriticalT(100, 0.05), 1.984, 1e-3);
  EXPECT_NEAR(CriticalT(1000, 0.05), 1.960, 1e-3);
  EXPECT_NEAR(CriticalT(1000, 0.01), 2.576, 1e-3);
  EXPECT_THROW(CriticalT(0, 0.05), std::invalid_argument);
  EXPECT_THROW(CriticalT(10, 0.1), std::invalid_argument);
}

TEST(MeanTest, StandardError) {
  const std::vector<double> xs = {2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(Mean(xs), 5.0);
  // Sample sd = sqrt(32 / 7).
  EXPECT_NEAR(StandardError(xs), std::sqrt(32.0 / 7.0) / std::sqrt(8.0), 1e-12);
  const std::vector<double> one = {3};
  EXPECT_EQ(StandardError(one), 0);
}

TEST(KappaTest, Oracle) {
  // Observed agreement .8, chance agreement .5.
  const std::vector<std::string> a = {"x", "x", "x", "x", "x", "y", "y", "y", "y", "y"};
  const std::vector<std::string> b = {"x", "x", "x", "x", "y", "y", "y", "y", "y", "x"};
  EXPECT_NEAR(Kappa(a, b), 0.6, 1e-12);
  EXPECT_NEAR(Kappa(a, a), 1.0, 1e-12);
  const std::vector<std::string> same = {"x", "x"};
  EXPECT_EQ(Kappa(same, same), 1.0);
  EXPECT_THROW(Kappa(a, same), std::invalid_argument);
}

TEST(MajorityTest, ReferenceDistribution) {
  std::vector<ClassLabel> labels;
  for (const LabelFrequency& f : ReferenceLabelOrder()) {
    for (int i = 0; i < f.count; ++i) labels.push_back(L(f.label));
  }
  ASSERT_EQ(labels.size(), 393u);
  MajorityResult m = MajorityBaseline(labels);
  EXPECT_EQ(m.label, L("CPQ"));
  EXPECT_EQ(m.fraction, 64.0 / 393.0);
}

TEST(MajorityTest, TiesFollowReferenceOrder) {
  const std::vector<ClassLabel> labels = {L("Q"), L("CPO"), L("Q"), L("CPO")};
  EXPECT_EQ(MajorityBaseline(labels).label, L("CPO"));
  EXPECT_THROW(MajorityBaseline(std::vector<ClassLabel>{}), std::invalid_argument);
}

// Percent recall, precision, fallout and F as printed in the per-class
// metrics table.
struct PublishedMetricsRow {
  const char* label;
  double recall, precision, fallout, f;
};

const PublishedMetricsRow kPublishedMetrics[] = {
    {"CPQ", 100, 63.64, 12.12, .78}, {"CPO", 66.67, 100, 0, .80},
    {"CPOQ", 100, 100, 0, 1.00},     {"T", 50, 100, 0, .67},
    {"CP", 100, 100, 0, 1.00},       {"O", 100, 60, 5.41, .75},
    {"CO", 66.67, 100, 0, .80},      {"C", 0, 0, 5.13, 0},
    {"CQ", 0, 100, 0, 0},            {"COQ", 100, 100, 0, 1.00},
    {"PO", 50, 100, 0, .67},         {"OQ", 66.67, 50, 5.41, .57},
    {"Q", 0, 0, 2.50, 0},            {"POQ", 0, 100, 0, 0},
    {"PQ", 0, 100, 0, 0},
};

TEST(ClassMetricsTest, ConfusionGridReproducesPublishedTable) {
  ParsedConfusion grid =
      ParseConfusionCsv(ReadTextFile(testing::TestDataPath("published_confusion.csv")));
  EXPECT_EQ(grid.matrix.Total(), 40);
  EXPECT_EQ(grid.labels.size(), 15u);
  for (const PublishedMetricsRow& row : kPublishedMetrics) {
    ClassMetrics m = MetricsFor(grid.matrix, L(row.label));
    EXPECT_NEAR(100 * m.recall, row.recall, 0.005) << row.label;
    EXPECT_NEAR(100 * m.precision, row.precision, 0.005) << row.label;
    EXPECT_NEAR(100 * m.fallout, row.fallout, 0.005) << row.label;
    EXPECT_NEAR(m.f1, row.f, 0.005) << row.label;
  }
}

TEST(ClassMetricsTest, Conventions) {
  ConfusionMatrix m;
  m.Add(L("C"), L("C"), 3);
  m.Add(L("C"), L("T"), 1);
  m.Add(L("T"), L("T"), 2);
  ClassMetrics c = MetricsFor(m, L("C"));
  EXPECT_DOUBLE_EQ(c.recall, 0.75);
  EXPECT_DOUBLE_EQ(c.precision, 1.0);
  EXPECT_DOUBLE_EQ(c.fallout, 0.0);
  EXPECT_NEAR(c.f1, 2 * 0.75 / 1.75, 1e-12);
  ClassMetrics t = MetricsFor(m, L("T"));
  EXPECT_NEAR(t.precision, 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(t.fallout, 0.25);
  // A label nobody used: empty row and column.
  ClassMetrics q = MetricsFor(m, L("Q"));
  EXPECT_EQ(q.recall, 0);
  EXPECT_EQ(q.precision, 1);
  EXPECT_EQ(q.f1, 0);
  EXPECT_EQ(m.Trace(), 5);
  EXPECT_DOUBLE_EQ(m.Accuracy(), 5.0 / 6.0);
  EXPECT_EQ(m.UsedLabels(), (std::vector<ClassLabel>{L("T"), L("C")}));
}

TEST(ConfusionCsvTest, RoundTripAndErrors) {
  ConfusionMatrix m;
  m.Add(L("CPQ"), L("CPQ"), 4);
  m.Add(L("O"), L("CPQ"), 2);
  m.Add(L("O"), L("O"), 1);
  std::vector<ClassLabel> labels = m.UsedLabels();
  ParsedConfusion back = ParseConfusionCsv(FormatConfusion(m, labels, ReportFormat::kCsv));
  EXPECT_EQ(back.matrix, m);
  EXPECT_EQ(back.labels, labels);
  EXPECT_THROW(ParseConfusionCsv("gold,C,T\nC,1\n"), std::runtime_error);
  EXPECT_THROW(ParseConfusionCsv("gold,C,ZZ\nC,1,0\n"), std::runtime_error);
}

Dataset ToyDataset(int n) {
  Dataset ds;
  for (int i = 0; i < n; ++i) {
    Example ex;
    ex.vector.Set("price", FeatureValue::Number(50 * (i % 12)));
    ex.label = L(i % 12 >= 6 ? "CPO" : (i % 12 == 0 ? "C" : "T"));
    ds.examples.push_back(ex);
  }
  return ds;
}

TEST(CrossValidateTest, PredictionsCoverEveryExample) {
  Dataset ds = ToyDataset(120);
  FoldPlan plan = FoldPlan::Make(ds.examples.size(), 10, 1);
  CVResult learner = CrossValidate(ds, plan, RuleLearnerFactory(LearnerParams{}));
  EXPECT_EQ(learner.per_fold_accuracy.size(), 10u);
  EXPECT_EQ(learner.predictions.size(), 120u);
  EXPECT_EQ(learner.confusion.Total(), 120);
  EXPECT_DOUBLE_EQ(learner.mean, Mean(learner.per_fold_accuracy));
  EXPECT_DOUBLE_EQ(learner.mean, 1.0);

  CVResult majority = CrossValidate(ds, plan, MajorityFactory());
  for (ClassLabel p : majority.predictions) EXPECT_EQ(p, L("CPO"));
  EXPECT_NEAR(majority.mean, 0.5, 0.1);
  EXPECT_TRUE(PairedT(learner.per_fold_accuracy, majority.per_fold_accuracy).significant_01);
  EXPECT_THROW(CrossValidate(ds, FoldPlan::Make(10, 2, 1), MajorityFactory()),
               std::invalid_argument);
}

TEST(ReportTest, Shapes) {
  Dataset ds = ToyDataset(40);
  FoldPlan plan = FoldPlan::Make(40, 5, 1);
  std::vector<ExperimentRow> rows = {
      {"baseline", CrossValidate(ds, plan, MajorityFactory())},
      {"learner", CrossValidate(ds, plan, RuleLearnerFactory(LearnerParams{}))},
      {"learner-again", CrossValidate(ds, plan, RuleLearnerFactory(LearnerParams{}))}};
  const std::string table = FormatAccuracyTable(rows, ReportFormat::kText);
  EXPECT_NE(table.find("baseline"), std::string::npos);
  EXPECT_NE(table.find("100.0%"), std::string::npos);
  const std::string csv = FormatPairedTMatrix(rows, ReportFormat::kCsv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "row,column,t,df,p05,p01");
  EXPECT_NE(csv.find("learner,learner-again,0"), std::string::npos);
  const std::string text = FormatPairedTMatrix(rows, ReportFormat::kText);
  EXPECT_NE(text.find("**"), std::string::npos);
}

}  // namespace
}  // namespace odsel
