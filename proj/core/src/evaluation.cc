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

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "random_util.h"
#include "text_util.h"

namespace odsel {

// ---------------------------------------------------------------------------
// Folds.

FoldPlan FoldPlan::Make(size_t n, int k, uint64_t seed) {
  if (k < 1 || static_cast<size_t>(k) > n) {
    throw std::invalid_argument("fold count " + std::to_string(k) + " must lie in [1, " +
                                std::to_string(n) + "]");
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  Shuffle(order, rng);
  FoldPlan plan;
  plan.k_ = k;
  plan.seed_ = seed;
  plan.assignment_.resize(n);
  for (size_t i = 0; i < n; ++i) plan.assignment_[order[i]] = static_cast<int>(i % k);
  return plan;
}

std::vector<size_t> FoldPlan::TestRows(int fold) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<size_t> FoldPlan::TrainRows(int fold) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < assignment_.size(); ++i) {
    if (assignment_[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<size_t> FoldPlan::FoldSizes() const {
  std::vector<size_t> sizes(k_);
  for (int f : assignment_) sizes[f]++;
  return sizes;
}

// ---------------------------------------------------------------------------
// Confusion matrix and per-class metrics.

void ConfusionMatrix::Add(ClassLabel gold, ClassLabel predicted, int count) {
  if (count < 0) throw std::invalid_argument("negative confusion count");
  counts_[gold.mask()][predicted.mask()] += count;
}

int ConfusionMatrix::Total() const {
  int t = 0;
  for (const auto& row : counts_) t += std::accumulate(row.begin(), row.end(), 0);
  return t;
}

int ConfusionMatrix::RowTotal(ClassLabel gold) const {
  const auto& row = counts_[gold.mask()];
  return std::accumulate(row.begin(), row.end(), 0);
}

int ConfusionMatrix::ColumnTotal(ClassLabel predicted) const {
  int t = 0;
  for (const auto& row : counts_) t += row[predicted.mask()];
  return t;
}

int ConfusionMatrix::Trace() const {
  int t = 0;
  for (unsigned i = 0; i < 16; ++i) t += counts_[i][i];
  return t;
}

double ConfusionMatrix::Accuracy() const {
  const int total = Total();
  return total == 0 ? 0.0 : static_cast<double>(Trace()) / total;
}

std::vector<ClassLabel> ConfusionMatrix::UsedLabels() const {
  std::vector<ClassLabel> out;
  for (const LabelFrequency& lf : ReferenceLabelOrder()) {
    ClassLabel l = *ParseClassLabel(lf.label);
    if (RowTotal(l) > 0 || ColumnTotal(l) > 0) out.push_back(l);
  }
  return out;
}

ClassMetrics MetricsFor(const ConfusionMatrix& m, ClassLabel label) {
  ClassMetrics out;
  out.label = label;
  const double tp = m.at(label, label);
  const double row = m.RowTotal(label);
  const double col = m.ColumnTotal(label);
  const double negatives = m.Total() - row;
  out.recall = row == 0 ? 0.0 : tp / row;
  out.precision = col == 0 ? 1.0 : tp / col;
  out.fallout = negatives == 0 ? 0.0 : (col - tp) / negatives;
  const double pr = out.precision + out.recall;
  out.f1 = pr == 0 ? 0.0 : 2 * out.precision * out.recall / pr;
  return out;
}

std::vector<ClassMetrics> PerClassMetrics(const ConfusionMatrix& m,
                                          std::span<const ClassLabel> labels) {
  std::vector<ClassMetrics> out;
  for (ClassLabel l : labels) out.push_back(MetricsFor(m, l));
  return out;
}

std::vector<ClassMetrics> PerClassMetrics(const ConfusionMatrix& m) {
  std::vector<ClassLabel> labels = m.UsedLabels();
  return PerClassMetrics(m, labels);
}

// ---------------------------------------------------------------------------
// Baseline and cross-validation.

MajorityResult MajorityBaseline(std::span<const ClassLabel> labels) {
  if (labels.empty()) throw std::invalid_argument("majority baseline of an empty label list");
  std::map<ClassLabel, int> counts;
  for (ClassLabel l : labels) counts[l]++;
  ClassLabel best = counts.begin()->first;
  int best_count = -1;
  for (const auto& [l, c] : counts) {
    if (c > best_count || (c == best_count && ReferenceRank(l) < ReferenceRank(best))) {
      best = l;
      best_count = c;
    }
  }
  return {best, static_cast<double>(best_count) / labels.size()};
}

ModelFactory RuleLearnerFactory(const LearnerParams& params) {
  return [params](const TrainingView& view) -> Classifier {
    RuleList rl = Train(view, params);
    return [rl = std::move(rl)](const FeatureVector& v) { return Classify(rl, v); };
  };
}

ModelFactory MajorityFactory() {
  return [](const TrainingView& view) -> Classifier {
    ClassLabel label = MajorityBaseline(view.labels).label;
    return [label](const FeatureVector&) { return label; };
  };
}

CVResult CrossValidate(const Dataset& ds, const FoldPlan& plan, const ModelFactory& factory) {
  if (plan.size() != ds.examples.size()) {
    throw std::invalid_argument("fold plan covers " + std::to_string(plan.size()) +
                                " examples but the dataset has " +
                                std::to_string(ds.examples.size()));
  }
  CVResult out;
  out.predictions.resize(ds.examples.size());
  for (int fold = 0; fold < plan.k(); ++fold) {
    const std::vector<size_t> train_rows = plan.TrainRows(fold);
    const std::vector<size_t> test_rows = plan.TestRows(fold);
    Classifier model = factory(TrainingView::Of(ds, train_rows));
    int correct = 0;
    for (size_t r : test_rows) {
      const Example& ex = ds.examples[r];
      ClassLabel predicted = model(ex.vector);
      out.predictions[r] = predicted;
      out.confusion.Add(ex.label, predicted);
      correct += predicted == ex.label ? 1 : 0;
    }
    out.per_fold_accuracy.push_back(test_rows.empty()
                                        ? 0.0
                                        : static_cast<double>(correct) / test_rows.size());
  }
  out.mean = Mean(out.per_fold_accuracy);
  out.standard_error = StandardError(out.per_fold_accuracy);
  return out;
}

double Mean(std::span<const double> xs) {
  if (xs.empty()) return 0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

namespace {

double SampleStdDev(std::span<const double> xs) {
  if (xs.size() < 2) return 0;
  const double m = Mean(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (xs.size() - 1));
}

}  // namespace

double StandardError(std::span<const double> xs) {
  if (xs.size() < 2) return 0;
  return SampleStdDev(xs) / std::sqrt(static_cast<double>(xs.size()));
}

// ---------------------------------------------------------------------------
// Paired t-test.

namespace {

// Two-tailed critical values of Student's t for df = 1..200.
constexpr double kT05[200] = {
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
    2.201, 2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
    2.080, 2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042,
    2.040, 2.037, 2.035, 2.032, 2.030, 2.028, 2.026, 2.024, 2.023, 2.021,
    2.020, 2.018, 2.017, 2.015, 2.014, 2.013, 2.012, 2.011, 2.010, 2.009,
    2.008, 2.007, 2.006, 2.005, 2.004, 2.003, 2.002, 2.002, 2.001, 2.000,
    2.000, 1.999, 1.998, 1.998, 1.997, 1.997, 1.996, 1.995, 1.995, 1.994,
    1.994, 1.993, 1.993, 1.993, 1.992, 1.992, 1.991, 1.991, 1.990, 1.990,
    1.990, 1.989, 1.989, 1.989, 1.988, 1.988, 1.988, 1.987, 1.987, 1.987,
    1.986, 1.986, 1.986, 1.986, 1.985, 1.985, 1.985, 1.984, 1.984, 1.984,
    1.984, 1.983, 1.983, 1.983, 1.983, 1.983, 1.982, 1.982, 1.982, 1.982,
    1.982, 1.981, 1.981, 1.981, 1.981, 1.981, 1.980, 1.980, 1.980, 1.980,
    1.980, 1.980, 1.979, 1.979, 1.979, 1.979, 1.979, 1.979, 1.979, 1.978,
    1.978, 1.978, 1.978, 1.978, 1.978, 1.978, 1.977, 1.977, 1.977, 1.977,
    1.977, 1.977, 1.977, 1.977, 1.976, 1.976, 1.976, 1.976, 1.976, 1.976,
    1.976, 1.976, 1.976, 1.975, 1.975, 1.975, 1.975, 1.975, 1.975, 1.975,
    1.975, 1.975, 1.975, 1.975, 1.974, 1.974, 1.974, 1.974, 1.974, 1.974,
    1.974, 1.974, 1.974, 1.974, 1.974, 1.974, 1.973, 1.973, 1.973, 1.973,
    1.973, 1.973, 1.973, 1.973, 1.973, 1.973, 1.973, 1.973, 1.973, 1.973,
    1.972, 1.972, 1.972, 1.972, 1.972, 1.972, 1.972, 1.972, 1.972, 1.972,
};
constexpr double kT01[200] = {
    63.657, 9.925, 5.841, 4.604, 4.032, 3.707, 3.499, 3.355, 3.250, 3.169,
    3.106, 3.055, 3.012, 2.977, 2.947, 2.921, 2.898, 2.878, 2.861, 2.845,
    2.831, 2.819, 2.807, 2.797, 2.787, 2.779, 2.771, 2.763, 2.756, 2.750,
    2.744, 2.738, 2.733, 2.728, 2.724, 2.719, 2.715, 2.712, 2.708, 2.704,
    2.701, 2.698, 2.695, 2.692, 2.690, 2.687, 2.685, 2.682, 2.680, 2.678,
    2.676, 2.674, 2.672, 2.670, 2.668, 2.667, 2.665, 2.663, 2.662, 2.660,
    2.659, 2.657, 2.656, 2.655, 2.654, 2.652, 2.651, 2.650, 2.649, 2.648,
    2.647, 2.646, 2.645, 2.644, 2.643, 2.642, 2.641, 2.640, 2.640, 2.639,
    2.638, 2.637, 2.636, 2.636, 2.635, 2.634, 2.634, 2.633, 2.632, 2.632,
    2.631, 2.630, 2.630, 2.629, 2.629, 2.628, 2.627, 2.627, 2.626, 2.626,
    2.625, 2.625, 2.624, 2.624, 2.623, 2.623, 2.623, 2.622, 2.622, 2.621,
    2.621, 2.620, 2.620, 2.620, 2.619, 2.619, 2.619, 2.618, 2.618, 2.617,
    2.617, 2.617, 2.616, 2.616, 2.616, 2.615, 2.615, 2.615, 2.614, 2.614,
    2.614, 2.614, 2.613, 2.613, 2.613, 2.612, 2.612, 2.612, 2.612, 2.611,
    2.611, 2.611, 2.611, 2.610, 2.610, 2.610, 2.610, 2.609, 2.609, 2.609,
    2.609, 2.609, 2.608, 2.608, 2.608, 2.608, 2.608, 2.607, 2.607, 2.607,
    2.607, 2.607, 2.606, 2.606, 2.606, 2.606, 2.606, 2.605, 2.605, 2.605,
    2.605, 2.605, 2.605, 2.604, 2.604, 2.604, 2.604, 2.604, 2.604, 2.603,
    2.603, 2.603, 2.603, 2.603, 2.603, 2.603, 2.602, 2.602, 2.602, 2.602,
    2.602, 2.602, 2.602, 2.601, 2.601, 2.601, 2.601, 2.601, 2.601, 2.601,
};

}  // namespace

double CriticalT(int df, double alpha) {
  if (df < 1) throw std::invalid_argument("degrees of freedom must be positive");
  const bool five = std::abs(alpha - 0.05) < 1e-12;
  const bool one = std::abs(alpha - 0.01) < 1e-12;
  if (!five && !one) throw std::invalid_argument("alpha must be 0.05 or 0.01");
  if (df > 200) return five ? 1.960 : 2.576;
  return five ? kT05[df - 1] : kT01[df - 1];
}

PairedTResult PairedT(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired series differ in length");
  if (a.size() < 2) throw std::invalid_argument("paired t-test needs at least two pairs");
  std::vector<double> d(a.size());
  for (size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  PairedTResult out;
  out.df = static_cast<int>(d.size()) - 1;
  out.mean_difference = Mean(d);
  const double sd = SampleStdDev(d);
  constexpr double kTiny = 1e-12;
  if (sd <= kTiny) {
    if (std::abs(out.mean_difference) <= kTiny) return out;
    out.t = out.mean_difference > 0 ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
  } else {
    out.t = out.mean_difference / (sd / std::sqrt(static_cast<double>(d.size())));
  }
  out.significant_05 = std::abs(out.t) >= CriticalT(out.df, 0.05);
  out.significant_01 = std::abs(out.t) >= CriticalT(out.df, 0.01);
  return out;
}

// ---------------------------------------------------------------------------
// Kappa.

double Kappa(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() != b.size()) throw std::invalid_argument("codings differ in length");
  if (a.empty()) throw std::invalid_argument("kappa of empty codings");
  const double n = static_cast<double>(a.size());
  std::map<std::string, double> ma, mb;
  double agree = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    ma[a[i]] += 1;
    mb[b[i]] += 1;
    agree += a[i] == b[i] ? 1 : 0;
  }
  const double po = agree / n;
  double pe = 0;
  for (const auto& [c, count] : ma) {
    auto it = mb.find(c);
    if (it != mb.end()) pe += (count / n) * (it->second / n);
  }
  if (std::abs(1 - pe) < 1e-12) return po >= 1 - 1e-12 ? 1.0 : 0.0;
  return (po - pe) / (1 - pe);
}

// ---------------------------------------------------------------------------
// Reports.

namespace {

std::string Fixed(double x, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

std::string Pad(std::string s, size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string FormatT(const PairedTResult& r) {
  if (std::isinf(r.t)) return r.t > 0 ? "inf" : "-inf";
  return Fixed(r.t, 2);
}

std::string Marks(const PairedTResult& r) {
  if (r.significant_01) return "**";
  if (r.significant_05) return "*";
  return "";
}

}  // namespace

std::string FormatAccuracyTable(std::span<const ExperimentRow> rows, ReportFormat fmt) {
  std::ostringstream out;
  if (fmt == ReportFormat::kCsv) {
    out << "model,accuracy_percent,se_percent,folds\n";
    for (const ExperimentRow& r : rows) {
      out << r.name << ',' << Fixed(100 * r.result.mean, 1) << ','
          << Fixed(100 * r.result.standard_error, 1) << ','
          << r.result.per_fold_accuracy.size() << '\n';
    }
    return out.str();
  }
  size_t width = 5;
  for (const ExperimentRow& r : rows) width = std::max(width, r.name.size());
  out << Pad("model", width + 2) << "accuracy  (SE)\n";
  for (const ExperimentRow& r : rows) {
    out << Pad(r.name, width + 2) << Pad(Fixed(100 * r.result.mean, 1) + "%", 10) << '('
        << Fixed(100 * r.result.standard_error, 1) << ")\n";
  }
  return out.str();
}

std::string FormatPairedTMatrix(std::span<const ExperimentRow> rows, ReportFormat fmt) {
  std::ostringstream out;
  if (fmt == ReportFormat::kCsv) {
    out << "row,column,t,df,p05,p01\n";
    for (size_t i = 0; i < rows.size(); ++i) {
      for (size_t j = 0; j < rows.size(); ++j) {
        if (i == j) continue;
        PairedTResult t = PairedT(rows[i].result.per_fold_accuracy,
                                  rows[j].result.per_fold_accuracy);
        out << rows[i].name << ',' << rows[j].name << ',' << FormatT(t) << ',' << t.df << ','
            << (t.significant_05 ? "yes" : "no") << ',' << (t.significant_01 ? "yes" : "no")
            << '\n';
      }
    }
    return out.str();
  }
  size_t width = 5;
  for (const ExperimentRow& r : rows) width = std::max(width, r.name.size());
  const size_t cell = std::max<size_t>(width, 10) + 2;
  out << Pad("", width + 2);
  for (const ExperimentRow& r : rows) out << Pad(r.name, cell);
  out << '\n';
  for (size_t i = 0; i < rows.size(); ++i) {
    out << Pad(rows[i].name, width + 2);
    for (size_t j = 0; j < rows.size(); ++j) {
      if (i == j) {
        out << Pad("-", cell);
        continue;
      }
      PairedTResult t =
          PairedT(rows[i].result.per_fold_accuracy, rows[j].result.per_fold_accuracy);
      out << Pad(FormatT(t) + Marks(t), cell);
    }
    out << '\n';
  }
  out << "t = row minus column; * p<.05, ** p<.01 (two-tailed)\n";
  return out.str();
}

std::string FormatClassMetrics(std::span<const ClassMetrics> metrics, ReportFormat fmt) {
  std::ostringstream out;
  if (fmt == ReportFormat::kCsv) {
    out << "class,recall,precision,fallout,f\n";
    for (const ClassMetrics& m : metrics) {
      out << m.label.name() << ',' << Fixed(100 * m.recall, 2) << ','
          << Fixed(100 * m.precision, 2) << ',' << Fixed(100 * m.fallout, 2) << ','
          << Fixed(m.f1, 2) << '\n';
    }
    return out.str();
  }
  out << Pad("class", 7) << Pad("recall", 9) << Pad("precision", 11) << Pad("fallout", 9)
      << "F\n";
  for (const ClassMetrics& m : metrics) {
    out << Pad(m.label.name(), 7) << Pad(Fixed(100 * m.recall, 2), 9)
        << Pad(Fixed(100 * m.precision, 2), 11) << Pad(Fixed(100 * m.fallout, 2), 9)
        << Fixed(m.f1, 2) << '\n';
  }
  return out.str();
}

std::string FormatConfusion(const ConfusionMatrix& m, std::span<const ClassLabel> labels,
                            ReportFormat fmt) {
  std::ostringstream out;
  const char sep = fmt == ReportFormat::kCsv ? ',' : ' ';
  auto cell = [&](const std::string& s) {
    return fmt == ReportFormat::kCsv ? s : Pad(s, 6);
  };
  out << cell("gold");
  for (ClassLabel l : labels) out << sep << cell(l.name());
  out << '\n';
  for (ClassLabel g : labels) {
    out << cell(g.name());
    for (ClassLabel p : labels) out << sep << cell(std::to_string(m.at(g, p)));
    out << '\n';
  }
  return out.str();
}

ParsedConfusion ParseConfusionCsv(std::string_view text) {
  ParsedConfusion out;
  int line_no = 0;
  bool header = false;
  std::vector<bool> seen_rows(16, false);
  size_t rows = 0;
  for (std::string_view raw : SplitString(text, '\n')) {
    ++line_no;
    std::string_view line = StripWhitespace(raw);
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw std::runtime_error("confusion line " + std::to_string(line_no) + ": " + msg);
    };
    auto cells = SplitString(line, ',');
    auto label_of = [&](std::string_view s) {
      auto l = ParseClassLabel(StripWhitespace(s));
      if (!l) fail("unknown class label '" + std::string(s) + "'");
      return *l;
    };
    if (!header) {
      if (cells.size() < 2 || StripWhitespace(cells[0]) != "gold") {
        fail("header must start with 'gold'");
      }
      for (size_t i = 1; i < cells.size(); ++i) out.labels.push_back(label_of(cells[i]));
      header = true;
      continue;
    }
    if (cells.size() != out.labels.size() + 1) fail("row width differs from header");
    ClassLabel gold = label_of(cells[0]);
    if (seen_rows[gold.mask()]) fail("duplicate row " + gold.name());
    seen_rows[gold.mask()] = true;
    ++rows;
    for (size_t i = 1; i < cells.size(); ++i) {
      auto n = ParseInt(StripWhitespace(cells[i]));
      if (!n || *n < 0) fail("cell must be a non-negative integer");
      out.matrix.Add(gold, out.labels[i - 1], *n);
    }
  }
  if (!header) throw std::runtime_error("confusion grid has no header");
  return out;
}

}  // namespace odsel
