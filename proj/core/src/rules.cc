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

#include "odsel/rules.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "odsel/corpus.h"
#include "random_util.h"
#include "text_util.h"

namespace odsel {

namespace internal {
std::optional<std::string_view> BuiltinAsset(std::string_view name);
}  // namespace internal

std::string_view ToString(ConditionOp op) {
  switch (op) {
    case ConditionOp::kEq: return "=";
    case ConditionOp::kLe: return "<=";
    case ConditionOp::kGe: return ">=";
  }
  return "?";
}

namespace {

std::optional<size_t> ResolveFeature(std::string_view name) {
  const auto& reg = FeatureRegistry::Get();
  if (auto i = reg.IndexOf(name)) return i;
  if (name == "problem") return reg.IndexOf("problem-number");
  return std::nullopt;
}

}  // namespace

Condition::Condition(std::string feature, ConditionOp op, FeatureValue value)
    : feature_(std::move(feature)),
      op_(op),
      value_(std::move(value)),
      index_(ResolveFeature(feature_)) {}

bool Condition::Holds(const FeatureVector& v) const {
  static const FeatureValue kNa;
  const FeatureValue& x = index_ ? v.at(*index_) : kNa;
  switch (op_) {
    case ConditionOp::kEq:
      if (x.is_symbol() && value_.is_symbol()) {
        return EqualsIgnoreCase(x.as_symbol(), value_.as_symbol());
      }
      return x == value_;
    case ConditionOp::kLe:
      return x.is_number() && value_.is_number() && x.as_number() <= value_.as_number();
    case ConditionOp::kGe:
      return x.is_number() && value_.is_number() && x.as_number() >= value_.as_number();
  }
  return false;
}

std::string Condition::ToString() const {
  return feature_ + " " + std::string(odsel::ToString(op_)) + " " + value_.ToString();
}

bool Rule::Fires(const FeatureVector& v) const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [&](const Condition& c) { return c.Holds(v); });
}

std::optional<size_t> FiringRule(const RuleList& rl, const FeatureVector& v) {
  for (size_t i = 0; i < rl.rules.size(); ++i) {
    if (rl.rules[i].Fires(v)) return i;
  }
  return std::nullopt;
}

ClassLabel Classify(const RuleList& rl, const FeatureVector& v) {
  auto i = FiringRule(rl, v);
  return i ? rl.rules[*i].label : rl.default_label;
}

// ---------------------------------------------------------------------------
// Text form.

RuleSyntaxError::RuleSyntaxError(int line, const std::string& message)
    : std::runtime_error("rules line " + std::to_string(line) + ": " + message),
      line_(line) {}

namespace {

FeatureValue ParseConditionValue(std::optional<size_t> index, std::string_view text) {
  if (text == "na") return FeatureValue::Na();
  std::optional<FeatureType> type;
  if (index) type = FeatureRegistry::Get().at(*index).type;
  if (type == FeatureType::kBoolean || !type) {
    if (text == "yes") return FeatureValue::Bool(true);
    if (text == "no") return FeatureValue::Bool(false);
  }
  if (type == FeatureType::kNumeric || !type) {
    if (auto x = ParseDouble(text)) return FeatureValue::Number(*x);
  }
  return FeatureValue::Symbol(std::string(text));
}

std::vector<std::string_view> Tokens(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

ClassLabel ParseLabelOrThrow(int line, std::string_view text) {
  auto label = ParseClassLabel(text);
  if (!label) throw RuleSyntaxError(line, "unknown class label '" + std::string(text) + "'");
  return *label;
}

}  // namespace

RuleList ParseRuleList(std::string_view text) {
  RuleList rl;
  bool have_default = false;
  int line_no = 0;
  for (std::string_view raw : SplitString(text, '\n')) {
    ++line_no;
    std::string_view line = StripWhitespace(raw);
    if (line.empty() || line.front() == '#') continue;
    if (have_default) throw RuleSyntaxError(line_no, "text after DEFAULT");
    auto tok = Tokens(line);
    if (tok[0] == "DEFAULT") {
      if (tok.size() != 2) throw RuleSyntaxError(line_no, "expected 'DEFAULT <label>'");
      rl.default_label = ParseLabelOrThrow(line_no, tok[1]);
      have_default = true;
      continue;
    }
    if (tok[0] != "IF") throw RuleSyntaxError(line_no, "expected IF or DEFAULT");
    Rule rule;
    size_t i = 1;
    while (true) {
      if (i + 3 > tok.size()) throw RuleSyntaxError(line_no, "incomplete condition");
      ConditionOp op;
      if (tok[i + 1] == "=") {
        op = ConditionOp::kEq;
      } else if (tok[i + 1] == "<=") {
        op = ConditionOp::kLe;
      } else if (tok[i + 1] == ">=") {
        op = ConditionOp::kGe;
      } else {
        throw RuleSyntaxError(line_no, "unknown operator '" + std::string(tok[i + 1]) + "'");
      }
      std::string feature(tok[i]);
      auto index = ResolveFeature(feature);
      FeatureValue value = ParseConditionValue(index, tok[i + 2]);
      if (op != ConditionOp::kEq && !value.is_number()) {
        throw RuleSyntaxError(line_no, "ordered comparison needs a number");
      }
      rule.conditions.emplace_back(std::move(feature), op, std::move(value));
      i += 3;
      if (i < tok.size() && tok[i] == "AND") {
        ++i;
        continue;
      }
      break;
    }
    if (i + 2 != tok.size() || tok[i] != "THEN") {
      throw RuleSyntaxError(line_no, "expected 'THEN <label>' at end of rule");
    }
    rule.label = ParseLabelOrThrow(line_no, tok[i + 1]);
    rl.rules.push_back(std::move(rule));
  }
  if (!have_default) throw RuleSyntaxError(line_no, "missing DEFAULT line");
  return rl;
}

std::string FormatRuleList(const RuleList& rl) {
  std::string out;
  for (const Rule& r : rl.rules) {
    out += "IF ";
    for (size_t i = 0; i < r.conditions.size(); ++i) {
      if (i > 0) out += " AND ";
      out += r.conditions[i].ToString();
    }
    out += " THEN " + r.label.name() + "\n";
  }
  out += "DEFAULT " + rl.default_label.name() + "\n";
  return out;
}

std::vector<std::string> BuiltinRuleNames() { return {"fig14", "fig16"}; }

std::string_view BuiltinRuleText(std::string_view name) {
  auto text = internal::BuiltinAsset(name);
  if (!text) throw std::invalid_argument("no built-in rule set '" + std::string(name) + "'");
  return *text;
}

RuleList BuiltinRules(std::string_view name) { return ParseRuleList(BuiltinRuleText(name)); }

RuleList LoadRules(std::string_view spec) {
  if (!spec.empty() && spec.front() == '@') return BuiltinRules(spec.substr(1));
  return ParseRuleList(ReadTextFile(std::string(spec)));
}

// ---------------------------------------------------------------------------
// Learning.

double FoilGain(double p0, double n0, double p1, double n1) {
  if (p0 <= 0 || p1 <= 0) return 0;
  return p1 * (std::log2(p1 / (p1 + n1)) - std::log2(p0 / (p0 + n0)));
}

void CheckLearnerParams(const LearnerParams& p) {
  if (p.min_coverage < 1) throw std::invalid_argument("min_coverage must be at least 1");
  if (!(p.grow_ratio > 0 && p.grow_ratio < 1)) {
    throw std::invalid_argument("grow_ratio must lie in (0, 1)");
  }
}

TrainingView TrainingView::Of(const Dataset& ds) {
  std::vector<size_t> rows(ds.examples.size());
  std::iota(rows.begin(), rows.end(), 0);
  return Of(ds, rows);
}

TrainingView TrainingView::Of(const Dataset& ds, std::span<const size_t> rows) {
  TrainingView v;
  v.features = ds.ActiveFeatures();
  for (size_t r : rows) {
    v.vectors.push_back(&ds.examples.at(r).vector);
    v.labels.push_back(ds.examples[r].label);
  }
  return v;
}

namespace {

// Column-wise encoding of the training vectors. Non-numeric values become
// category ids; numbers keep their value with category -1.
struct Column {
  size_t feature = 0;
  std::string_view name;
  std::vector<int> category;
  std::vector<double> number;
  std::vector<FeatureValue> categories;
  bool has_numbers = false;
};

struct Candidate {
  size_t column = 0;
  ConditionOp op = ConditionOp::kEq;
  int category = 0;
  double threshold = 0;
  double gain = 0;
};

class Learner {
 public:
  Learner(const TrainingView& data, const LearnerParams& params)
      : data_(data), params_(params), rng_(params.rng_seed) {
    const auto& reg = FeatureRegistry::Get();
    std::vector<size_t> features = data.features;
    std::sort(features.begin(), features.end(), [&](size_t a, size_t b) {
      return reg.at(a).name < reg.at(b).name;
    });
    for (size_t f : features) {
      Column c;
      c.feature = f;
      c.name = reg.at(f).name;
      std::map<FeatureValue, int> ids;
      for (const FeatureVector* v : data.vectors) {
        const FeatureValue& x = v->at(f);
        if (x.is_number()) {
          c.category.push_back(-1);
          c.number.push_back(x.as_number());
          c.has_numbers = true;
          continue;
        }
        auto [it, fresh] = ids.emplace(x, static_cast<int>(c.categories.size()));
        if (fresh) c.categories.push_back(x);
        c.category.push_back(it->second);
        c.number.push_back(0);
      }
      columns_.push_back(std::move(c));
    }
  }

  RuleList Run() {
    const size_t n = data_.labels.size();
    std::map<ClassLabel, int> counts;
    for (ClassLabel l : data_.labels) counts[l]++;
    std::vector<ClassLabel> order;
    for (const auto& [l, c] : counts) order.push_back(l);
    // Rare to frequent; among equal counts the label later in the reference
    // order goes first.
    std::sort(order.begin(), order.end(), [&](ClassLabel a, ClassLabel b) {
      if (counts[a] != counts[b]) return counts[a] < counts[b];
      return ReferenceRank(a) > ReferenceRank(b);
    });

    RuleList rl;
    rl.default_label = order.back();
    std::vector<size_t> remaining(n);
    std::iota(remaining.begin(), remaining.end(), 0);

    for (size_t k = 0; k + 1 < order.size(); ++k) {
      const ClassLabel target = order[k];
      while (true) {
        const size_t pos = std::count_if(remaining.begin(), remaining.end(),
                                         [&](size_t r) { return data_.labels[r] == target; });
        if (pos == 0) break;
        std::optional<std::vector<Candidate>> rule =
            params_.noise_correction ? GrowAndPrune(remaining, target)
                                     : Accept(Grow(remaining, target), remaining, target);
        if (!rule) break;
        Rule out = ToRule(*rule, target);
        std::vector<size_t> kept;
        for (size_t r : remaining) {
          if (!Covers(*rule, r)) kept.push_back(r);
        }
        remaining = std::move(kept);
        rl.rules.push_back(std::move(out));
      }
    }
    return rl;
  }

 private:
  bool Holds(const Candidate& c, size_t row) const {
    const Column& col = columns_[c.column];
    const int cat = col.category[row];
    switch (c.op) {
      case ConditionOp::kEq: return cat == c.category;
      case ConditionOp::kLe: return cat < 0 && col.number[row] <= c.threshold;
      case ConditionOp::kGe: return cat < 0 && col.number[row] >= c.threshold;
    }
    return false;
  }

  bool Covers(const std::vector<Candidate>& rule, size_t row) const {
    return std::all_of(rule.begin(), rule.end(),
                       [&](const Candidate& c) { return Holds(c, row); });
  }

  FeatureValue ValueOf(const Candidate& c) const {
    if (c.op == ConditionOp::kEq) return columns_[c.column].categories[c.category];
    return FeatureValue::Number(c.threshold);
  }

  Rule ToRule(const std::vector<Candidate>& cands, ClassLabel label) const {
    Rule r;
    r.label = label;
    for (const Candidate& c : cands) {
      r.conditions.emplace_back(std::string(columns_[c.column].name), c.op, ValueOf(c));
    }
    return r;
  }

  // True when a should be preferred over b.
  bool Better(const Candidate& a, const Candidate& b) const {
    constexpr double kEps = 1e-9;
    if (a.gain > b.gain + kEps) return true;
    if (b.gain > a.gain + kEps) return false;
    if (a.column != b.column) return a.column < b.column;  // columns sorted by name
    if (a.op != b.op) return a.op < b.op;
    if (a.op == ConditionOp::kEq) {
      const auto& cats = columns_[a.column].categories;
      return cats[a.category] < cats[b.category];
    }
    return a.threshold < b.threshold;
  }

  // Best single condition to add, or nullopt when no condition has positive
  // gain.
  std::optional<Candidate> BestCandidate(const std::vector<size_t>& rows, ClassLabel target,
                                         const std::vector<Candidate>& rule) const {
    double p0 = 0, n0 = 0;
    for (size_t r : rows) (data_.labels[r] == target ? p0 : n0) += 1;
    std::optional<Candidate> best;
    auto offer = [&](Candidate c) {
      if (c.gain <= 1e-12) return;
      if (!best || Better(c, *best)) best = c;
    };
    auto used = [&](size_t column, ConditionOp op) {
      return std::any_of(rule.begin(), rule.end(), [&](const Candidate& c) {
        return c.column == column && c.op == op;
      });
    };

    for (size_t ci = 0; ci < columns_.size(); ++ci) {
      const Column& col = columns_[ci];
      if (!used(ci, ConditionOp::kEq) && !col.categories.empty()) {
        std::vector<double> pos(col.categories.size()), neg(col.categories.size());
        for (size_t r : rows) {
          int cat = col.category[r];
          if (cat < 0) continue;
          (data_.labels[r] == target ? pos : neg)[cat] += 1;
        }
        for (size_t k = 0; k < pos.size(); ++k) {
          if (pos[k] + neg[k] == 0) continue;
          offer({ci, ConditionOp::kEq, static_cast<int>(k), 0,
                 FoilGain(p0, n0, pos[k], neg[k])});
        }
      }
      if (!col.has_numbers) continue;
      std::vector<std::pair<double, bool>> values;
      for (size_t r : rows) {
        if (col.category[r] < 0) values.push_back({col.number[r], data_.labels[r] == target});
      }
      if (values.size() < 2) continue;
      std::sort(values.begin(), values.end());
      double total_pos = 0, total_neg = 0;
      for (const auto& [x, p] : values) (p ? total_pos : total_neg) += 1;
      double below_pos = 0, below_neg = 0;
      for (size_t i = 0; i + 1 < values.size(); ++i) {
        (values[i].second ? below_pos : below_neg) += 1;
        if (values[i].first == values[i + 1].first) continue;
        const double t = (values[i].first + values[i + 1].first) / 2;
        if (!used(ci, ConditionOp::kLe)) {
          offer({ci, ConditionOp::kLe, 0, t, FoilGain(p0, n0, below_pos, below_neg)});
        }
        if (!used(ci, ConditionOp::kGe)) {
          offer({ci, ConditionOp::kGe, 0, t,
                 FoilGain(p0, n0, total_pos - below_pos, total_neg - below_neg)});
        }
      }
    }
    return best;
  }

  std::vector<Candidate> Grow(const std::vector<size_t>& rows, ClassLabel target) const {
    std::vector<Candidate> rule;
    std::vector<size_t> covered = rows;
    while (true) {
      const bool has_neg = std::any_of(covered.begin(), covered.end(),
                                       [&](size_t r) { return data_.labels[r] != target; });
      if (!has_neg) break;
      auto c = BestCandidate(covered, target, rule);
      if (!c) break;
      rule.push_back(*c);
      std::vector<size_t> next;
      for (size_t r : covered) {
        if (Holds(*c, r)) next.push_back(r);
      }
      covered = std::move(next);
    }
    return rule;
  }

  std::pair<int, int> Count(const std::vector<Candidate>& rule, const std::vector<size_t>& rows,
                            ClassLabel target) const {
    int p = 0, n = 0;
    for (size_t r : rows) {
      if (!Covers(rule, r)) continue;
      (data_.labels[r] == target ? p : n)++;
    }
    return {p, n};
  }

  std::optional<std::vector<Candidate>> Accept(std::vector<Candidate> rule,
                                               const std::vector<size_t>& rows,
                                               ClassLabel target) const {
    if (rule.empty()) return std::nullopt;
    auto [p, n] = Count(rule, rows, target);
    if (p < params_.min_coverage || p <= n) return std::nullopt;
    return rule;
  }

  std::optional<std::vector<Candidate>> GrowAndPrune(const std::vector<size_t>& rows,
                                                     ClassLabel target) {
    std::vector<size_t> pos, neg;
    for (size_t r : rows) (data_.labels[r] == target ? pos : neg).push_back(r);
    Shuffle(pos, rng_);
    Shuffle(neg, rng_);
    std::vector<size_t> grow, prune;
    auto split = [&](const std::vector<size_t>& v) {
      const size_t g = static_cast<size_t>(std::ceil(params_.grow_ratio * v.size()));
      grow.insert(grow.end(), v.begin(), v.begin() + g);
      prune.insert(prune.end(), v.begin() + g, v.end());
    };
    split(pos);
    split(neg);
    std::sort(grow.begin(), grow.end());
    std::sort(prune.begin(), prune.end());

    std::vector<Candidate> rule = Grow(grow, target);
    if (rule.empty()) return std::nullopt;

    // Keep the prefix with the best (p - n) / (p + n) on the prune split;
    // ties go to the shorter rule.
    size_t best_len = rule.size();
    double best_worth = -2;
    bool any_coverage = false;
    for (size_t len = 1; len <= rule.size(); ++len) {
      std::vector<Candidate> prefix(rule.begin(), rule.begin() + len);
      auto [p, n] = Count(prefix, prune, target);
      if (p + n == 0) continue;
      any_coverage = true;
      const double worth = static_cast<double>(p - n) / (p + n);
      if (worth > best_worth + 1e-12) {
        best_worth = worth;
        best_len = len;
      }
    }
    if (any_coverage) {
      rule.resize(best_len);
      auto [p, n] = Count(rule, prune, target);
      if (p + n > 0 && p <= n) return std::nullopt;
    }
    return Accept(std::move(rule), rows, target);
  }

  const TrainingView& data_;
  LearnerParams params_;
  Rng rng_;
  std::vector<Column> columns_;
};

}  // namespace

RuleList Train(const TrainingView& data, const LearnerParams& params) {
  CheckLearnerParams(params);
  if (data.labels.empty()) throw std::invalid_argument("cannot train on an empty dataset");
  if (data.vectors.size() != data.labels.size()) {
    throw std::invalid_argument("vectors and labels differ in length");
  }
  return Learner(data, params).Run();
}

RuleList Train(const Dataset& ds, const LearnerParams& params) {
  return Train(TrainingView::Of(ds), params);
}

}  // namespace odsel
