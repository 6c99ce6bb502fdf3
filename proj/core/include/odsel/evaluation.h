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

// Evaluation protocol: exact-match accuracy, majority baseline, k-fold
// cross-validation with standard errors, paired t-tests, confusion matrices,
// per-class metrics and Cohen's kappa.

#ifndef ODSEL_EVALUATION_H_
#define ODSEL_EVALUATION_H_

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odsel/features.h"
#include "odsel/rules.h"

namespace odsel {

// Assignment of n examples to k folds: indices are shuffled with a seeded
// mt19937_64 (Fisher-Yates) and dealt round-robin, so fold sizes differ by
// at most one.
class FoldPlan {
 public:
  // Throws std::invalid_argument unless 1 <= k <= n.
  static FoldPlan Make(size_t n, int k, uint64_t seed);

  int k() const { return k_; }
  uint64_t seed() const { return seed_; }
  size_t size() const { return assignment_.size(); }
  int FoldOf(size_t example) const { return assignment_[example]; }
  const std::vector<int>& assignment() const { return assignment_; }

  std::vector<size_t> TestRows(int fold) const;
  std::vector<size_t> TrainRows(int fold) const;
  std::vector<size_t> FoldSizes() const;

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;

 private:
  int k_ = 0;
  uint64_t seed_ = 0;
  std::vector<int> assignment_;
};

// Gold rows by predicted columns over the 16 class labels.
class ConfusionMatrix {
 public:
  void Add(ClassLabel gold, ClassLabel predicted, int count = 1);
  int at(ClassLabel gold, ClassLabel predicted) const {
    return counts_[gold.mask()][predicted.mask()];
  }

  int Total() const;
  int RowTotal(ClassLabel gold) const;
  int ColumnTotal(ClassLabel predicted) const;
  int Trace() const;
  double Accuracy() const;

  // Labels with a nonzero row or column, in reference order.
  std::vector<ClassLabel> UsedLabels() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::array<std::array<int, 16>, 16> counts_{};
};

struct ClassMetrics {
  ClassLabel label;
  double recall = 0;     // 0 when the row is empty
  double precision = 0;  // 1 when the column is empty
  double fallout = 0;    // FP / (total - row total); 0 when that is empty
  double f1 = 0;         // 0 when precision + recall is 0
};

ClassMetrics MetricsFor(const ConfusionMatrix& m, ClassLabel label);
// One entry per label in `labels`.
std::vector<ClassMetrics> PerClassMetrics(const ConfusionMatrix& m,
                                          std::span<const ClassLabel> labels);
// One entry per UsedLabels() label.
std::vector<ClassMetrics> PerClassMetrics(const ConfusionMatrix& m);

struct MajorityResult {
  ClassLabel label;
  double fraction = 0;
};

// Most frequent label and its share; ties go to the label earlier in the
// reference order. Throws std::invalid_argument on empty input.
MajorityResult MajorityBaseline(std::span<const ClassLabel> labels);

// A trained model, and a factory that fits one to a training view.
using Classifier = std::function<ClassLabel(const FeatureVector&)>;
using ModelFactory = std::function<Classifier(const TrainingView&)>;

ModelFactory RuleLearnerFactory(const LearnerParams& params);
ModelFactory MajorityFactory();

struct CVResult {
  std::vector<double> per_fold_accuracy;
  double mean = 0;
  double standard_error = 0;
  std::vector<ClassLabel> predictions;  // out-of-fold prediction per example
  ConfusionMatrix confusion;
};

// Trains on each fold's complement and scores exact-match accuracy on the
// fold.
CVResult CrossValidate(const Dataset& ds, const FoldPlan& plan, const ModelFactory& factory);

double Mean(std::span<const double> xs);
// Sample standard deviation over sqrt(n); 0 for fewer than two values.
double StandardError(std::span<const double> xs);

struct PairedTResult {
  double t = 0;
  int df = 0;
  double mean_difference = 0;
  bool significant_05 = false;
  bool significant_01 = false;
};

// Two-tailed paired t-test on per-fold differences a - b. Throws
// std::invalid_argument when lengths differ or are below 2.
PairedTResult PairedT(std::span<const double> a, std::span<const double> b);

// Two-tailed critical value of Student's t. Tabulated for df 1..200;
// larger df use the normal values. alpha must be 0.05 or 0.01.
double CriticalT(int df, double alpha);

// Cohen's kappa between two parallel codings. Throws std::invalid_argument
// when lengths differ or are zero. Returns 1 when chance agreement is 1 and
// the codings agree.
double Kappa(std::span<const std::string> a, std::span<const std::string> b);

// Parses a square confusion grid in the FormatConfusion CSV layout: a
// header "gold,<label>,..." and one row per gold label. Returns the matrix
// and the header's label order. Throws std::runtime_error.
struct ParsedConfusion {
  ConfusionMatrix matrix;
  std::vector<ClassLabel> labels;
};
ParsedConfusion ParseConfusionCsv(std::string_view text);

// Reports.

struct ExperimentRow {
  std::string name;
  CVResult result;
};

enum class ReportFormat { kText, kCsv };

// Model, accuracy % and SE, one row per experiment.
std::string FormatAccuracyTable(std::span<const ExperimentRow> rows, ReportFormat fmt);
// Pairwise t statistics (row minus column) with significance marks.
std::string FormatPairedTMatrix(std::span<const ExperimentRow> rows, ReportFormat fmt);
// Recall, precision, fallout (percent) and F per class.
std::string FormatClassMetrics(std::span<const ClassMetrics> metrics, ReportFormat fmt);
// Confusion grid with the given label order on both axes.
std::string FormatConfusion(const ConfusionMatrix& m, std::span<const ClassLabel> labels,
                            ReportFormat fmt);

}  // namespace odsel

#endif  // ODSEL_EVALUATION_H_
