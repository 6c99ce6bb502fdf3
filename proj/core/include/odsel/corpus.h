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

// Annotated dialogue corpus: in-memory representation, a line-oriented
// tab-separated text format, and invariant checking.
//
// File grammar (one record per line, fields separated by TAB, lines starting
// with '#' are comments, blank lines are ignored). Within an utterance the
// record order is U, PS*, DU?, DE*.
//
//   DIALOGUE <id> PAIR <spkA>-<spkB> PROBLEM <n> [BUDGET <dollars>]
//   U  <utt> <speaker> <free text>
//   PS <utt> <goal-label> <introduce|continue> <goal-id>
//      <change[:implicit|:explicit][,change...]|none> <determinate|indeterminate>
//   DU <utt> <action-directive|open-option|info-request|na> <offer|commit|na>
//   DE <utt> <mention-id> <relation> <entity-id> LINK=<id,...|->
//      ATTRS=<attr=val,...|-> EXPL=<attr,...|-> INFR=<attr,...|->
//      ACT=<goal-id> "<surface>"

#ifndef ODSEL_CORPUS_H_
#define ODSEL_CORPUS_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "odsel/attributes.h"

namespace odsel {

enum class GoalLabel {
  kSelectSofa,
  kSelectTable,
  kSelectChairs,
  kSelectOptionalItem,
  kSelectOptionalItemLR,
  kSelectOptionalItemDR,
};

enum class GoalMode { kIntroduce, kContinue };

enum class ConstraintKind {
  kDropColorMatch,
  kColorLimit,
  kPriceLimit,
  kPriceUpperLimit,
  kPriceEvaluator,
};

enum class Presence { kImplicit, kExplicit };

enum class SolutionSize { kDeterminate, kIndeterminate };

enum class ListenerInfluence { kActionDirective, kOpenOption, kInfoRequest, kNa };

enum class SpeakerInfluence { kOffer, kCommit, kNa };

enum class ReferenceRelation {
  kInitial,
  kCoref,
  kSet,
  kClass,
  kCnAnaphora,
  kPredicative,
};

std::string_view ToString(GoalLabel v);
std::string_view ToString(GoalMode v);
std::string_view ToString(ConstraintKind v);
std::string_view ToString(Presence v);
std::string_view ToString(SolutionSize v);
std::string_view ToString(ListenerInfluence v);
std::string_view ToString(SpeakerInfluence v);
std::string_view ToString(ReferenceRelation v);

std::optional<GoalLabel> ParseGoalLabel(std::string_view s);
std::optional<ReferenceRelation> ParseReferenceRelation(std::string_view s);

struct ConstraintChange {
  ConstraintKind kind = ConstraintKind::kDropColorMatch;
  std::optional<Presence> presence;

  friend bool operator==(const ConstraintChange&, const ConstraintChange&) = default;
};

// Problem-solving layer: one record per goal/action touched by an utterance.
struct PSRecord {
  GoalLabel goal_label = GoalLabel::kSelectSofa;
  GoalMode mode = GoalMode::kIntroduce;
  std::string goal_id;
  std::vector<ConstraintChange> constraint_changes;  // empty means "none"
  SolutionSize solution_size = SolutionSize::kIndeterminate;

  friend bool operator==(const PSRecord&, const PSRecord&) = default;
};

// Dialogue-act layer. A missing record reads as na/na.
struct DURecord {
  ListenerInfluence influence_on_listener = ListenerInfluence::kNa;
  SpeakerInfluence influence_on_speaker = SpeakerInfluence::kNa;

  friend bool operator==(const DURecord&, const DURecord&) = default;
};

// Discourse-entity layer: one object description.
struct MentionRecord {
  std::string mention_id;
  ReferenceRelation relation = ReferenceRelation::kInitial;
  std::string entity_id;
  std::vector<std::string> linked_entities;
  AttributeValues attribute_values;
  AttributeSet explicit_attrs;
  AttributeSet inferred_attrs;
  std::string goal_id;
  std::string surface;

  friend bool operator==(const MentionRecord&, const MentionRecord&) = default;
};

struct Utterance {
  int number = 0;
  std::string speaker;
  std::string text;
  std::vector<PSRecord> ps;
  std::optional<DURecord> du;
  std::vector<MentionRecord> mentions;

  // The DU record, or na/na when the utterance carries none.
  DURecord EffectiveDU() const { return du.value_or(DURecord{}); }

  friend bool operator==(const Utterance&, const Utterance&) = default;
};

struct Dialogue {
  std::string id;
  std::string speaker_a;
  std::string speaker_b;
  int problem_number = 1;
  std::optional<int> budget;
  std::vector<Utterance> utterances;

  // Both speaker tokens in lexicographic order joined by '-'.
  std::string SpeakerPairKey() const;
  // The other member of the pair; empty if `speaker` is not in the pair.
  std::string OtherSpeaker(std::string_view speaker) const;
  // Index into `utterances`, or nullopt.
  std::optional<size_t> FindUtterance(int number) const;
  size_t MentionCount() const;

  friend bool operator==(const Dialogue&, const Dialogue&) = default;
};

struct Corpus {
  std::vector<Dialogue> dialogues;

  size_t MentionCount() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// One broken invariant. `record_id` names the offending record: a mention id,
// a goal id, or the utterance number rendered as text.
struct Violation {
  std::string dialogue_id;
  int utterance = 0;
  std::string record_id;
  std::string rule;
  std::string message;
};

std::string FormatViolation(const Violation& v);

class CorpusSyntaxError : public std::runtime_error {
 public:
  CorpusSyntaxError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class CorpusInvariantError : public std::runtime_error {
 public:
  explicit CorpusInvariantError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// Parses and validates. Throws CorpusSyntaxError or CorpusInvariantError.
Corpus ParseCorpus(std::string_view text);

// Syntax-only parse; invariants are left to Validate().
Corpus ParseCorpusUnchecked(std::string_view text);

std::string SerializeCorpus(const Corpus& corpus);

std::vector<Violation> Validate(const Corpus& corpus);

// File helpers. Throw std::runtime_error on I/O failure.
std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, std::string_view contents);

}  // namespace odsel

#endif  // ODSEL_CORPUS_H_
