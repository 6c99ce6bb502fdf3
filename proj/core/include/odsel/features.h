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

// The 82-feature representation of an object description and its 16-way
// class label.
//
// Features are grouped by the content-selection account that motivates them:
//   FAMILIARITY (6)  what is already mutually known about the entity
//   INHERENT    (9)  speaker, task and attribute values
//   CP         (23)  conceptual-pact history of earlier descriptions
//   CONTRAST   (15)  distractor counts and majority values in focus
//   IINF       (29)  task situation, agreement state, solution contrasts

#ifndef ODSEL_FEATURES_H_
#define ODSEL_FEATURES_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odsel/attributes.h"
#include "odsel/corpus.h"
#include "odsel/discourse.h"
#include "odsel/feature_value.h"
#include "odsel/focus.h"

namespace odsel {

enum class FeatureGroup { kFamiliarity, kInherent, kConceptualPact, kContrast, kIntentional };
enum class FeatureType { kBoolean, kSymbolic, kNumeric };

inline constexpr std::array<FeatureGroup, 5> kAllGroups = {
    FeatureGroup::kFamiliarity, FeatureGroup::kInherent, FeatureGroup::kConceptualPact,
    FeatureGroup::kContrast, FeatureGroup::kIntentional};

// Short CLI names: fam, inh, cp, contrast, iinf.
std::string_view ToString(FeatureGroup g);
std::optional<FeatureGroup> ParseFeatureGroup(std::string_view s);

class GroupSet {
 public:
  GroupSet() = default;
  GroupSet(std::initializer_list<FeatureGroup> groups) {
    for (FeatureGroup g : groups) Insert(g);
  }
  static GroupSet All() {
    GroupSet s;
    for (FeatureGroup g : kAllGroups) s.Insert(g);
    return s;
  }
  void Insert(FeatureGroup g) { bits_ |= 1u << static_cast<unsigned>(g); }
  bool Contains(FeatureGroup g) const { return bits_ & (1u << static_cast<unsigned>(g)); }
  bool empty() const { return bits_ == 0; }
  friend bool operator==(GroupSet, GroupSet) = default;

 private:
  unsigned bits_ = 0;
};

// Comma-separated group names, or "all". Throws std::invalid_argument.
GroupSet ParseGroupSet(std::string_view text);
std::string FormatGroupSet(GroupSet g);

struct FeatureSpec {
  std::string_view name;
  FeatureGroup group;
  FeatureType type;
};

// Immutable, process-wide table of the 82 features in export order.
class FeatureRegistry {
 public:
  static const FeatureRegistry& Get();

  std::span<const FeatureSpec> entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  const FeatureSpec& at(size_t i) const { return entries_[i]; }
  std::optional<size_t> IndexOf(std::string_view name) const;
  size_t GroupSize(FeatureGroup g) const;

 private:
  FeatureRegistry();
  std::vector<FeatureSpec> entries_;
};

inline constexpr size_t kFeatureCount = 82;

// Values for every registry feature, in registry order.
class FeatureVector {
 public:
  FeatureVector() : values_(kFeatureCount) {}

  const FeatureValue& at(size_t i) const { return values_[i]; }
  void Set(size_t i, FeatureValue v) { values_[i] = std::move(v); }
  // Throws std::out_of_range for a name outside the registry.
  const FeatureValue& Get(std::string_view name) const;
  void Set(std::string_view name, FeatureValue v);

  std::span<const FeatureValue> values() const { return values_; }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  std::vector<FeatureValue> values_;
};

// One of the 16 subsets of {Color, Price, Owner, Quantity}; the empty
// subset is "T" (type only). Letters appear in the fixed order C, P, O, Q.
class ClassLabel {
 public:
  ClassLabel() = default;
  static ClassLabel FromMask(unsigned mask) { return ClassLabel(mask & 0xf); }

  unsigned mask() const { return mask_; }
  AttributeSet attributes() const;
  std::string name() const;

  friend bool operator==(ClassLabel, ClassLabel) = default;
  friend auto operator<=>(ClassLabel, ClassLabel) = default;

 private:
  explicit ClassLabel(unsigned mask) : mask_(mask) {}
  unsigned mask_ = 0;  // bit 0 C, 1 P, 2 O, 3 Q
};

std::optional<ClassLabel> ParseClassLabel(std::string_view name);

// Explicit attributes minus type, as a class label.
ClassLabel EncodeClass(AttributeSet explicit_attrs);

// The 16 labels ordered by corpus frequency, most frequent first, with the
// reference corpus counts (393 descriptions in total).
struct LabelFrequency {
  std::string_view label;
  int count;
};
std::span<const LabelFrequency> ReferenceLabelOrder();
// Position of a label in ReferenceLabelOrder().
int ReferenceRank(ClassLabel label);

enum class AgreementState {
  kPropose,
  kPartnerDecidableOption,
  kUnconditionalCommit,
  kUnendorsedOption,
  kStatement,
};
std::string_view ToString(AgreementState s);

AgreementState DeriveAgreementState(const DURecord& du, SolutionSize size);

// A labelled feature vector with its source location.
struct Example {
  FeatureVector vector;
  ClassLabel label;
  std::string dialogue_id;
  int utterance = 0;
  std::string mention_id;
};

// Examples plus the feature groups that are active. Features outside the
// active groups are na in every vector and are ignored by the learner.
struct Dataset {
  GroupSet groups = GroupSet::All();
  std::vector<Example> examples;

  std::vector<size_t> ActiveFeatures() const;
  std::vector<ClassLabel> Labels() const;
};

// Per-dialogue feature computation. Holds the discourse model, segment
// structure and agreement-state history of one dialogue, which must outlive
// the featurizer.
class DialogueFeaturizer {
 public:
  explicit DialogueFeaturizer(const Dialogue& d);

  const DiscourseModel& model() const { return model_; }
  const SegmentStructure& segments() const { return segments_; }

  FeatureVector Featurize(const ModelEntry& e, FocusModel focus) const;

  std::vector<FeatureValue> Familiarity(const ModelEntry& e) const;
  std::vector<FeatureValue> Inherent(const ModelEntry& e) const;
  std::vector<FeatureValue> ConceptualPact(const ModelEntry& e) const;
  std::vector<FeatureValue> Contrast(const ModelEntry& e, FocusModel focus) const;
  std::vector<FeatureValue> Intentional(const ModelEntry& e) const;

  // Known values of the target entity at this mention: what was known
  // before plus the mention's own values. Owner in absolute form.
  AttributeValues TargetValues(const ModelEntry& e) const;

  // Agreement state derived for an utterance index.
  AgreementState StateAt(size_t utterance_index) const { return states_[utterance_index]; }

 private:
  struct PartialSolution {
    std::vector<std::string> agreed;
    std::vector<std::string> alternatives;
  };
  PartialSolution SolutionBefore(size_t utterance_index) const;
  std::optional<SolutionSize> GoalSolutionSize(size_t utterance_index,
                                               std::string_view goal) const;

  const Dialogue* dialogue_;
  DiscourseModel model_;
  SegmentStructure segments_;
  std::vector<std::optional<SolutionSize>> solution_sizes_;
  std::vector<AgreementState> states_;
};

// Contrast features for a target against a distractor set. Exposed for
// direct testing; DialogueFeaturizer::Contrast delegates here.
std::vector<FeatureValue> ContrastFeatures(const Dialogue& d, std::string_view speaker,
                                           const AttributeValues& target,
                                           const DistractorSet& distractors);

// One example per mention, in document order.
Dataset ExtractExamples(const Corpus& c, GroupSet groups, FocusModel focus);

// Comma-separated export: header of feature names plus "class", one row per
// example, "na" for missing values.
std::string FormatDatasetCsv(const Dataset& ds);

// Parses a dataset file. The "class" column is optional; rows without it get
// `has_gold = false`. Throws std::runtime_error with a line number.
struct ParsedDataset {
  std::vector<FeatureVector> vectors;
  std::vector<ClassLabel> labels;  // empty when the file has no class column
  bool has_gold = false;
};
ParsedDataset ParseDatasetCsv(std::string_view text);

}  // namespace odsel

#endif  // ODSEL_FEATURES_H_
