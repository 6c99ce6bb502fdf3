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

// Ordered conjunctive rule lists and a separate-and-conquer learner that
// induces them with FOIL information gain.
//
// Rule text, one rule per line:
//
//   IF goal = SELECTCHAIRS AND distance-of-last-state-in-utterances >= 3 THEN COQ
//   DEFAULT CPQ
//
// Blank lines and lines starting with '#' are ignored.

#ifndef ODSEL_RULES_H_
#define ODSEL_RULES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "odsel/feature_value.h"
#include "odsel/features.h"

namespace odsel {

enum class ConditionOp { kEq, kLe, kGe };

// "=", "<=", ">=".
std::string_view ToString(ConditionOp op);

class Condition {
 public:
  // `feature` is kept as written; it resolves against the registry, with
  // "problem" accepted for problem-number. Unresolved features read as na.
  Condition(std::string feature, ConditionOp op, FeatureValue value);

  const std::string& feature() const { return feature_; }
  ConditionOp op() const { return op_; }
  const FeatureValue& value() const { return value_; }
  std::optional<size_t> index() const { return index_; }

  // Equality on symbols ignores ASCII case. Ordered comparisons are false
  // unless both sides are numbers.
  bool Holds(const FeatureVector& v) const;

  std::string ToString() const;

  friend bool operator==(const Condition& a, const Condition& b) {
    return a.feature_ == b.feature_ && a.op_ == b.op_ && a.value_ == b.value_;
  }

 private:
  std::string feature_;
  ConditionOp op_;
  FeatureValue value_;
  std::optional<size_t> index_;
};

struct Rule {
  std::vector<Condition> conditions;
  ClassLabel label;

  bool Fires(const FeatureVector& v) const;
  friend bool operator==(const Rule&, const Rule&) = default;
};

struct RuleList {
  std::vector<Rule> rules;
  ClassLabel default_label;

  friend bool operator==(const RuleList&, const RuleList&) = default;
};

// Label of the first rule whose conditions all hold, else the default.
ClassLabel Classify(const RuleList& rl, const FeatureVector& v);

// Index of the first firing rule, or nullopt when the default applies.
std::optional<size_t> FiringRule(const RuleList& rl, const FeatureVector& v);

class RuleSyntaxError : public std::runtime_error {
 public:
  RuleSyntaxError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

RuleList ParseRuleList(std::string_view text);
std::string FormatRuleList(const RuleList& rl);

// Names of the rule sets compiled into the library ("fig14", "fig16").
std::vector<std::string> BuiltinRuleNames();
// Throws std::invalid_argument for an unknown name.
RuleList BuiltinRules(std::string_view name);
std::string_view BuiltinRuleText(std::string_view name);
// "@name" selects a built-in rule set; anything else is a file path.
RuleList LoadRules(std::string_view spec);

// FOIL information gain of specializing a rule that covers p0 positives and
// n0 negatives into one covering p1 and n1:
//   p1 * (log2(p1 / (p1 + n1)) - log2(p0 / (p0 + n0)))
// Zero when p1 or p0 is zero.
double FoilGain(double p0, double n0, double p1, double n1);

struct LearnerParams {
  bool noise_correction = false;
  int min_coverage = 1;
  uint64_t rng_seed = 1;
  // Fraction of the remaining examples used to grow a rule when
  // noise_correction is on; the rest is used for pruning.
  double grow_ratio = 2.0 / 3.0;
};

// Validates params; throws std::invalid_argument.
void CheckLearnerParams(const LearnerParams& p);

// A training set: vectors (not owned), parallel labels, and the feature
// indices the learner may test.
struct TrainingView {
  std::vector<const FeatureVector*> vectors;
  std::vector<ClassLabel> labels;
  std::vector<size_t> features;

  static TrainingView Of(const Dataset& ds);
  static TrainingView Of(const Dataset& ds, std::span<const size_t> rows);
};

// Separate-and-conquer training. Classes are learned from least to most
// frequent; the most frequent class becomes the default. Throws
// std::invalid_argument on an empty training set.
RuleList Train(const TrainingView& data, const LearnerParams& params);
RuleList Train(const Dataset& ds, const LearnerParams& params);

}  // namespace odsel

#endif  // ODSEL_RULES_H_
