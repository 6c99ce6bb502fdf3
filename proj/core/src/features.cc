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

#include "odsel/features.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "text_util.h"

namespace odsel {

std::string FeatureValue::ToString() const {
  if (is_na()) return "na";
  if (is_bool()) return as_bool() ? "yes" : "no";
  if (is_symbol()) return as_symbol();
  return FormatNumber(as_number());
}

// ---------------------------------------------------------------------------
// Groups and registry.

std::string_view ToString(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::kFamiliarity: return "fam";
    case FeatureGroup::kInherent: return "inh";
    case FeatureGroup::kConceptualPact: return "cp";
    case FeatureGroup::kContrast: return "contrast";
    case FeatureGroup::kIntentional: return "iinf";
  }
  return "?";
}

std::optional<FeatureGroup> ParseFeatureGroup(std::string_view s) {
  for (FeatureGroup g : kAllGroups) {
    if (ToString(g) == s) return g;
  }
  return std::nullopt;
}

GroupSet ParseGroupSet(std::string_view text) {
  if (text == "all") return GroupSet::All();
  GroupSet out;
  for (std::string_view part : SplitString(text, ',')) {
    auto g = ParseFeatureGroup(StripWhitespace(part));
    if (!g) throw std::invalid_argument("unknown feature group '" + std::string(part) + "'");
    out.Insert(*g);
  }
  if (out.empty()) throw std::invalid_argument("empty feature group list");
  return out;
}

std::string FormatGroupSet(GroupSet g) {
  std::string out;
  for (FeatureGroup x : kAllGroups) {
    if (!g.Contains(x)) continue;
    if (!out.empty()) out += ',';
    out += ToString(x);
  }
  return out;
}

namespace {

constexpr FeatureType B = FeatureType::kBoolean;
constexpr FeatureType S = FeatureType::kSymbolic;
constexpr FeatureType N = FeatureType::kNumeric;

struct RegistryRow {
  std::string_view name;
  FeatureType type;
};

constexpr RegistryRow kFamiliarityRows[] = {
    {"type-mk", B}, {"color-mk", B}, {"owner-mk", B}, {"price-mk", B},
    {"quantity-mk", B}, {"reference-relation", S},
};

constexpr RegistryRow kInherentRows[] = {
    {"utterance-number", N}, {"speaker-pair", S}, {"speaker", S},
    {"problem-number", N},   {"type", S},         {"color", S},
    {"owner", S},            {"price", N},        {"quantity", N},
};

constexpr RegistryRow kPactRows[] = {
    {"distance-last-ref", N},     {"distance-last-ref-in-turns", N},
    {"number-prev-mentions", N},  {"speaker-of-last-ref", S},
    {"distance-last-related", N}, {"color-in-last-exp", B},
    {"type-in-last-exp", B},      {"owner-in-last-exp", B},
    {"price-in-last-exp", B},     {"quantity-in-last-exp", B},
    {"type-in-last-turn", B},     {"color-in-last-turn", B},
    {"owner-in-last-turn", B},    {"price-in-last-turn", B},
    {"quantity-in-last-turn", B}, {"initial-in-last-turn", B},
    {"freq-type-expressed", N},   {"freq-color-expressed", N},
    {"freq-price-expressed", N},  {"freq-owner-expressed", N},
    {"freq-quantity-expressed", N}, {"cp-given-last-2", S},
    {"cp-given-last-3", S},
};

constexpr RegistryRow kContrastRows[] = {
    {"type-distractors", N},  {"color-distractors", N},   {"owner-distractors", N},
    {"price-distractors", N}, {"quantity-distractors", N}, {"majority-type", S},
    {"majority-type-freq", N}, {"majority-color", S},     {"majority-color-freq", N},
    {"majority-price", N},    {"majority-price-freq", N}, {"majority-owner", S},
    {"majority-owner-freq", N}, {"majority-quantity", N}, {"majority-quantity-freq", N},
};

constexpr RegistryRow kIntentionalRows[] = {
    {"goal", S},
    {"colormatch", B},
    {"colormatch-constraintpresence", S},
    {"pricelimit", B},
    {"pricelimit-constraintpresence", S},
    {"priceevaluator", B},
    {"priceevaluator-constraintpresence", S},
    {"colorlimit", B},
    {"colorlimit-constraintpresence", S},
    {"priceupperlimit", B},
    {"priceupperlimit-constraintpresence", S},
    {"influence-on-listener", S},
    {"commit-speaker", S},
    {"solution-size", S},
    {"prev-influence-on-listener", S},
    {"prev-commit-speaker", S},
    {"prev-solution-size", S},
    {"distance-of-last-state-in-utterances", N},
    {"distance-of-last-state-in-turns", N},
    {"ref-made-in-prev-action-state", B},
    {"speaker-of-last-state", S},
    {"prev-ref-state", S},
    {"prev-state-type-expressed", B},
    {"prev-state-color-expressed", B},
    {"prev-state-owner-expressed", B},
    {"prev-state-price-expressed", B},
    {"prev-state-quantity-expressed", B},
    {"color-contrast", B},
    {"price-contrast", B},
};

}  // namespace

FeatureRegistry::FeatureRegistry() {
  auto add = [&](FeatureGroup g, std::span<const RegistryRow> rows) {
    for (const RegistryRow& r : rows) entries_.push_back({r.name, g, r.type});
  };
  add(FeatureGroup::kFamiliarity, kFamiliarityRows);
  add(FeatureGroup::kInherent, kInherentRows);
  add(FeatureGroup::kConceptualPact, kPactRows);
  add(FeatureGroup::kContrast, kContrastRows);
  add(FeatureGroup::kIntentional, kIntentionalRows);
  if (entries_.size() != kFeatureCount) {
    throw std::logic_error("feature registry must hold 82 entries");
  }
}

const FeatureRegistry& FeatureRegistry::Get() {
  static const FeatureRegistry* registry = new FeatureRegistry();
  return *registry;
}

std::optional<size_t> FeatureRegistry::IndexOf(std::string_view name) const {
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  return std::nullopt;
}

size_t FeatureRegistry::GroupSize(FeatureGroup g) const {
  return static_cast<size_t>(std::count_if(entries_.begin(), entries_.end(),
                                           [g](const FeatureSpec& s) { return s.group == g; }));
}

const FeatureValue& FeatureVector::Get(std::string_view name) const {
  auto i = FeatureRegistry::Get().IndexOf(name);
  if (!i) throw std::out_of_range("unknown feature '" + std::string(name) + "'");
  return values_[*i];
}

void FeatureVector::Set(std::string_view name, FeatureValue v) {
  auto i = FeatureRegistry::Get().IndexOf(name);
  if (!i) throw std::out_of_range("unknown feature '" + std::string(name) + "'");
  values_[*i] = std::move(v);
}

// ---------------------------------------------------------------------------
// Class labels.

namespace {

constexpr std::pair<Attribute, char> kLabelLetters[] = {
    {Attribute::kColor, 'C'},
    {Attribute::kPrice, 'P'},
    {Attribute::kOwner, 'O'},
    {Attribute::kQuantity, 'Q'},
};

constexpr LabelFrequency kReferenceOrder[] = {
    {"CPQ", 64}, {"CPO", 56}, {"CPOQ", 46}, {"T", 42}, {"CP", 41}, {"O", 32},
    {"CO", 31},  {"C", 18},   {"CQ", 14},   {"COQ", 13}, {"OQ", 12}, {"PO", 11},
    {"Q", 5},    {"P", 4},    {"PQ", 2},    {"POQ", 2},
};

}  // namespace

AttributeSet ClassLabel::attributes() const {
  AttributeSet s;
  for (size_t i = 0; i < 4; ++i) {
    if (mask_ & (1u << i)) s.Insert(kLabelLetters[i].first);
  }
  return s;
}

std::string ClassLabel::name() const {
  if (mask_ == 0) return "T";
  std::string out;
  for (size_t i = 0; i < 4; ++i) {
    if (mask_ & (1u << i)) out += kLabelLetters[i].second;
  }
  return out;
}

std::optional<ClassLabel> ParseClassLabel(std::string_view name) {
  for (unsigned mask = 0; mask < 16; ++mask) {
    ClassLabel l = ClassLabel::FromMask(mask);
    if (l.name() == name) return l;
  }
  return std::nullopt;
}

ClassLabel EncodeClass(AttributeSet explicit_attrs) {
  unsigned mask = 0;
  for (size_t i = 0; i < 4; ++i) {
    if (explicit_attrs.Contains(kLabelLetters[i].first)) mask |= 1u << i;
  }
  return ClassLabel::FromMask(mask);
}

std::span<const LabelFrequency> ReferenceLabelOrder() { return kReferenceOrder; }

int ReferenceRank(ClassLabel label) {
  const std::string n = label.name();
  for (size_t i = 0; i < std::size(kReferenceOrder); ++i) {
    if (kReferenceOrder[i].label == n) return static_cast<int>(i);
  }
  return static_cast<int>(std::size(kReferenceOrder));
}

// ---------------------------------------------------------------------------
// Agreement states.

std::string_view ToString(AgreementState s) {
  switch (s) {
    case AgreementState::kPropose: return "propose";
    case AgreementState::kPartnerDecidableOption: return "partner-decidable-option";
    case AgreementState::kUnconditionalCommit: return "unconditional-commit";
    case AgreementState::kUnendorsedOption: return "unendorsed-option";
    case AgreementState::kStatement: return "statement";
  }
  return "?";
}

AgreementState DeriveAgreementState(const DURecord& du, SolutionSize size) {
  if (du.influence_on_speaker == SpeakerInfluence::kOffer) {
    return size == SolutionSize::kDeterminate ? AgreementState::kPropose
                                              : AgreementState::kPartnerDecidableOption;
  }
  if (du.influence_on_speaker == SpeakerInfluence::kCommit) {
    return AgreementState::kUnconditionalCommit;
  }
  if (du.influence_on_listener == ListenerInfluence::kOpenOption &&
      size == SolutionSize::kDeterminate) {
    return AgreementState::kUnendorsedOption;
  }
  return AgreementState::kStatement;
}

// ---------------------------------------------------------------------------
// Dataset helpers.

std::vector<size_t> Dataset::ActiveFeatures() const {
  std::vector<size_t> out;
  const auto& reg = FeatureRegistry::Get();
  for (size_t i = 0; i < reg.size(); ++i) {
    if (groups.Contains(reg.at(i).group)) out.push_back(i);
  }
  return out;
}

std::vector<ClassLabel> Dataset::Labels() const {
  std::vector<ClassLabel> out;
  out.reserve(examples.size());
  for (const Example& e : examples) out.push_back(e.label);
  return out;
}

// ---------------------------------------------------------------------------
// Feature computation.

namespace {

// Collects one group's values by name and returns them in registry order.
class GroupBuilder {
 public:
  explicit GroupBuilder(FeatureGroup g) : group_(g) {
    const auto& reg = FeatureRegistry::Get();
    for (size_t i = 0; i < reg.size(); ++i) {
      if (reg.at(i).group == g) indices_.push_back(i);
    }
    values_.resize(indices_.size());
    set_.resize(indices_.size(), false);
  }

  void Set(std::string_view name, FeatureValue v) {
    const auto& reg = FeatureRegistry::Get();
    for (size_t k = 0; k < indices_.size(); ++k) {
      if (reg.at(indices_[k]).name == name) {
        values_[k] = std::move(v);
        set_[k] = true;
        return;
      }
    }
    throw std::logic_error("feature '" + std::string(name) + "' not in group " +
                           std::string(ToString(group_)));
  }

  std::vector<FeatureValue> Finish() {
    for (size_t k = 0; k < set_.size(); ++k) {
      if (!set_[k]) {
        throw std::logic_error("feature '" +
                               std::string(FeatureRegistry::Get().at(indices_[k]).name) +
                               "' left unset");
      }
    }
    return std::move(values_);
  }

 private:
  FeatureGroup group_;
  std::vector<size_t> indices_;
  std::vector<FeatureValue> values_;
  std::vector<bool> set_;
};

FeatureValue Num(double x) { return FeatureValue::Number(x); }
FeatureValue Yes(bool b) { return FeatureValue::Bool(b); }
FeatureValue Sym(std::string_view s) { return FeatureValue::Symbol(std::string(s)); }
FeatureValue Na() { return FeatureValue::Na(); }

bool IsNumericAttribute(Attribute a) {
  return a == Attribute::kPrice || a == Attribute::kQuantity;
}

// Unknown numeric attribute values are encoded as -1.
constexpr double kUnknownNumber = -1;

std::string SelfOrOther(std::string_view speaker, std::string_view current) {
  return speaker == current ? "self" : "other";
}

}  // namespace

DialogueFeaturizer::DialogueFeaturizer(const Dialogue& d)
    : dialogue_(&d), model_(DiscourseModel::Build(d)), segments_(BuildSegments(d)) {
  std::optional<SolutionSize> current;
  for (const Utterance& u : d.utterances) {
    if (!u.ps.empty()) current = u.ps.front().solution_size;
    solution_sizes_.push_back(u.ps.empty() ? std::nullopt
                                           : std::optional(u.ps.front().solution_size));
    states_.push_back(DeriveAgreementState(
        u.EffectiveDU(), current.value_or(SolutionSize::kIndeterminate)));
  }
}

AttributeValues DialogueFeaturizer::TargetValues(const ModelEntry& e) const {
  AttributeValues v = e.snapshot.known_before;
  const MentionRecord& m = model_.mention(e);
  const Utterance& u = model_.utterance(e);
  for (Attribute a : kAllAttributes) {
    if (!m.attribute_values.Known(a)) continue;
    std::string value = *m.attribute_values.Get(a);
    if (a == Attribute::kOwner) value = AbsoluteOwner(*dialogue_, u.speaker, value);
    v.Set(a, std::move(value));
  }
  return v;
}

std::vector<FeatureValue> DialogueFeaturizer::Familiarity(const ModelEntry& e) const {
  GroupBuilder b(FeatureGroup::kFamiliarity);
  for (Attribute a : kAllAttributes) {
    b.Set(std::string(AttributeName(a)) + "-mk", Yes(e.snapshot.MutuallyKnown(a)));
  }
  b.Set("reference-relation", Sym(ToString(model_.mention(e).relation)));
  return b.Finish();
}

std::vector<FeatureValue> DialogueFeaturizer::Inherent(const ModelEntry& e) const {
  GroupBuilder b(FeatureGroup::kInherent);
  const Utterance& u = model_.utterance(e);
  b.Set("utterance-number", Num(u.number));
  b.Set("speaker-pair", Sym(dialogue_->SpeakerPairKey()));
  b.Set("speaker", Sym(u.speaker));
  b.Set("problem-number", Num(dialogue_->problem_number));
  AttributeValues v = TargetValues(e);
  for (Attribute a : kAllAttributes) {
    const std::string name(AttributeName(a));
    if (IsNumericAttribute(a)) {
      b.Set(name, Num(v.Known(a) ? *ParseInt(*v.Get(a)) : kUnknownNumber));
    } else if (!v.Known(a)) {
      b.Set(name, Sym(kUnknownValue));
    } else if (a == Attribute::kOwner) {
      b.Set(name, Sym(RelativeOwner(*dialogue_, u.speaker, *v.Get(a))));
    } else {
      b.Set(name, Sym(*v.Get(a)));
    }
  }
  return b.Finish();
}

std::vector<FeatureValue> DialogueFeaturizer::ConceptualPact(const ModelEntry& e) const {
  GroupBuilder b(FeatureGroup::kConceptualPact);
  const EntitySnapshot& s = e.snapshot;
  const Utterance& u = model_.utterance(e);
  const MentionRecord& m = model_.mention(e);
  const int turn = model_.TurnOf(u.number);

  b.Set("number-prev-mentions", Num(s.prior_mentions));

  // Last mention of any linked entity.
  std::optional<int> related_utt;
  if (!m.linked_entities.empty()) {
    for (const ModelEntry& other : model_.entries()) {
      if (other.position >= e.position) break;
      const std::string& id = model_.mention(other).entity_id;
      if (std::find(m.linked_entities.begin(), m.linked_entities.end(), id) !=
          m.linked_entities.end()) {
        related_utt = model_.utterance(other).number;
      }
    }
  }
  b.Set("distance-last-related", related_utt ? Num(u.number - *related_utt) : Na());

  for (Attribute a : kAllAttributes) {
    int freq = 0;
    for (const MentionEvent& ev : s.history) freq += ev.explicit_attrs.Contains(a) ? 1 : 0;
    b.Set("freq-" + std::string(AttributeName(a)) + "-expressed", Num(freq));
  }

  if (!s.last_mention) {
    b.Set("distance-last-ref", Na());
    b.Set("distance-last-ref-in-turns", Na());
    b.Set("speaker-of-last-ref", Na());
    for (Attribute a : kAllAttributes) {
      b.Set(std::string(AttributeName(a)) + "-in-last-exp", Na());
      b.Set(std::string(AttributeName(a)) + "-in-last-turn", Na());
    }
    b.Set("initial-in-last-turn", Na());
  } else {
    const MentionEvent& last = *s.last_mention;
    b.Set("distance-last-ref", Num(u.number - last.utterance));
    b.Set("distance-last-ref-in-turns", Num(turn - last.turn));
    b.Set("speaker-of-last-ref", Sym(SelfOrOther(last.speaker, u.speaker)));
    AttributeSet in_turn;
    bool initial_in_turn = false;
    for (const MentionEvent& ev : s.history) {
      if (ev.turn != last.turn) continue;
      in_turn = in_turn.Union(ev.explicit_attrs);
      initial_in_turn |= ev.relation == ReferenceRelation::kInitial;
    }
    for (Attribute a : kAllAttributes) {
      b.Set(std::string(AttributeName(a)) + "-in-last-exp",
            Yes(last.explicit_attrs.Contains(a)));
      b.Set(std::string(AttributeName(a)) + "-in-last-turn", Yes(in_turn.Contains(a)));
    }
    b.Set("initial-in-last-turn", Yes(initial_in_turn));
  }

  auto stable_code = [&](size_t n) -> FeatureValue {
    if (s.history.size() < n) return Sym("none");
    const AttributeSet ref = s.history.back().explicit_attrs;
    for (size_t k = s.history.size() - n; k < s.history.size(); ++k) {
      if (!(s.history[k].explicit_attrs == ref)) return Sym("none");
    }
    return Sym(EncodeClass(ref).name());
  };
  b.Set("cp-given-last-2", stable_code(2));
  b.Set("cp-given-last-3", stable_code(3));
  return b.Finish();
}

std::vector<FeatureValue> ContrastFeatures(const Dialogue& d, std::string_view speaker,
                                           const AttributeValues& target,
                                           const DistractorSet& distractors) {
  GroupBuilder b(FeatureGroup::kContrast);
  for (Attribute a : kAllAttributes) {
    const std::string name(AttributeName(a));
    int differing = 0;
    std::map<std::string, int> counts;
    for (const Distractor& x : distractors.members) {
      if (!x.known.Known(a)) continue;
      const std::string& value = *x.known.Get(a);
      if (!target.Known(a) || *target.Get(a) != value) ++differing;
      counts[a == Attribute::kOwner ? RelativeOwner(d, speaker, value) : value]++;
    }
    b.Set(name + "-distractors", Num(differing));

    // Modal value; ties go to the smallest value (numeric order for
    // price/quantity, lexicographic otherwise).
    std::optional<std::string> best;
    int best_count = 0;
    for (const auto& [value, count] : counts) {
      bool better = count > best_count;
      if (!better && count == best_count && best) {
        better = IsNumericAttribute(a) ? *ParseInt(value) < *ParseInt(*best)
                                       : value < *best;
      }
      if (better) {
        best = value;
        best_count = count;
      }
    }
    if (!best) {
      b.Set("majority-" + name, Na());
    } else if (IsNumericAttribute(a)) {
      b.Set("majority-" + name, Num(*ParseInt(*best)));
    } else {
      b.Set("majority-" + name, Sym(*best));
    }
    b.Set("majority-" + name + "-freq", Num(best_count));
  }
  return b.Finish();
}

std::vector<FeatureValue> DialogueFeaturizer::Contrast(const ModelEntry& e,
                                                       FocusModel focus) const {
  DistractorSet ds = ComputeDistractors(model_, segments_, e, focus);
  return ContrastFeatures(*dialogue_, model_.utterance(e).speaker, TargetValues(e), ds);
}

std::optional<SolutionSize> DialogueFeaturizer::GoalSolutionSize(
    size_t utterance_index, std::string_view goal) const {
  for (size_t i = utterance_index + 1; i-- > 0;) {
    for (const PSRecord& ps : dialogue_->utterances[i].ps) {
      if (ps.goal_id == goal) return ps.solution_size;
    }
  }
  return std::nullopt;
}

DialogueFeaturizer::PartialSolution DialogueFeaturizer::SolutionBefore(
    size_t utterance_index) const {
  PartialSolution sol;
  auto add_unique = [](std::vector<std::string>& v, const std::string& id) {
    if (std::find(v.begin(), v.end(), id) == v.end()) v.push_back(id);
  };
  for (size_t i = 0; i < utterance_index; ++i) {
    const auto& mentions = dialogue_->utterances[i].mentions;
    switch (states_[i]) {
      case AgreementState::kUnconditionalCommit:
        for (const MentionRecord& m : mentions) add_unique(sol.agreed, m.entity_id);
        sol.alternatives.clear();
        break;
      case AgreementState::kPropose:
      case AgreementState::kPartnerDecidableOption:
        for (const MentionRecord& m : mentions) {
          if (std::find(sol.agreed.begin(), sol.agreed.end(), m.entity_id) ==
              sol.agreed.end()) {
            add_unique(sol.alternatives, m.entity_id);
          }
        }
        break;
      default:
        break;
    }
  }
  return sol;
}

std::vector<FeatureValue> DialogueFeaturizer::Intentional(const ModelEntry& e) const {
  GroupBuilder b(FeatureGroup::kIntentional);
  const size_t ui = e.utterance_index;
  const Utterance& u = model_.utterance(e);
  const MentionRecord& m = model_.mention(e);

  // Task situation.
  std::optional<GoalLabel> goal;
  for (size_t i = ui + 1; i-- > 0 && !goal;) {
    for (const PSRecord& ps : dialogue_->utterances[i].ps) {
      if (ps.goal_id == m.goal_id) {
        goal = ps.goal_label;
        break;
      }
    }
  }
  b.Set("goal", goal ? Sym(ToString(*goal)) : Na());

  constexpr std::pair<ConstraintKind, std::string_view> kConstraintFeatures[] = {
      {ConstraintKind::kDropColorMatch, "colormatch"},
      {ConstraintKind::kPriceLimit, "pricelimit"},
      {ConstraintKind::kPriceEvaluator, "priceevaluator"},
      {ConstraintKind::kColorLimit, "colorlimit"},
      {ConstraintKind::kPriceUpperLimit, "priceupperlimit"},
  };
  for (const auto& [kind, name] : kConstraintFeatures) {
    bool present = false;
    std::optional<Presence> presence;
    for (const PSRecord& ps : u.ps) {
      for (const ConstraintChange& cc : ps.constraint_changes) {
        if (cc.kind != kind) continue;
        present = true;
        if (cc.presence) presence = cc.presence;
      }
    }
    b.Set(name, Yes(present));
    b.Set(std::string(name) + "-constraintpresence",
          presence ? Sym(ToString(*presence)) : Na());
  }

  // Agreement state.
  auto listener = [](const DURecord& du) {
    return du.influence_on_listener == ListenerInfluence::kNa
               ? Na()
               : Sym(ToString(du.influence_on_listener));
  };
  auto commit = [](const DURecord& du) {
    return du.influence_on_speaker == SpeakerInfluence::kNa
               ? Na()
               : Sym(ToString(du.influence_on_speaker));
  };
  const DURecord du = u.EffectiveDU();
  b.Set("influence-on-listener", listener(du));
  b.Set("commit-speaker", commit(du));
  auto size = GoalSolutionSize(ui, m.goal_id);
  b.Set("solution-size", size ? Sym(ToString(*size)) : Na());

  std::optional<size_t> prev_state;
  for (size_t i = ui; i-- > 0;) {
    if (states_[i] != AgreementState::kStatement) {
      prev_state = i;
      break;
    }
  }
  if (prev_state) {
    const Utterance& p = dialogue_->utterances[*prev_state];
    const DURecord pdu = p.EffectiveDU();
    b.Set("prev-influence-on-listener", listener(pdu));
    b.Set("prev-commit-speaker", commit(pdu));
    auto psize = GoalSolutionSize(*prev_state, m.goal_id);
    if (!psize) psize = solution_sizes_[*prev_state];
    b.Set("prev-solution-size", psize ? Sym(ToString(*psize)) : Na());
    b.Set("distance-of-last-state-in-utterances", Num(u.number - p.number));
    b.Set("distance-of-last-state-in-turns",
          Num(model_.TurnOf(u.number) - model_.TurnOf(p.number)));
    bool referenced = std::any_of(p.mentions.begin(), p.mentions.end(),
                                  [&](const MentionRecord& x) {
                                    return x.entity_id == m.entity_id;
                                  });
    b.Set("ref-made-in-prev-action-state", Yes(referenced));
    b.Set("speaker-of-last-state", Sym(SelfOrOther(p.speaker, u.speaker)));
  } else {
    for (std::string_view name :
         {"prev-influence-on-listener", "prev-commit-speaker", "prev-solution-size",
          "distance-of-last-state-in-utterances", "distance-of-last-state-in-turns",
          "ref-made-in-prev-action-state", "speaker-of-last-state"}) {
      b.Set(name, Na());
    }
  }

  const EntitySnapshot& s = e.snapshot;
  if (s.last_mention) {
    auto idx = dialogue_->FindUtterance(s.last_mention->utterance);
    b.Set("prev-ref-state", Sym(ToString(states_[*idx])));
  } else {
    b.Set("prev-ref-state", Na());
  }

  // Description at the entity's most recent agreement state.
  std::optional<AttributeSet> state_desc;
  for (size_t k = s.history.size(); k-- > 0;) {
    auto idx = dialogue_->FindUtterance(s.history[k].utterance);
    if (states_[*idx] == AgreementState::kStatement) continue;
    AttributeSet desc;
    for (const MentionEvent& ev : s.history) {
      if (ev.utterance == s.history[k].utterance) desc = desc.Union(ev.explicit_attrs);
    }
    state_desc = desc;
    break;
  }
  for (Attribute a : kAllAttributes) {
    b.Set("prev-state-" + std::string(AttributeName(a)) + "-expressed",
          state_desc ? Yes(state_desc->Contains(a)) : Na());
  }

  // Solution interactions.
  PartialSolution sol = SolutionBefore(ui);
  const AttributeValues target = TargetValues(e);
  std::vector<AttributeValues> agreed;
  std::vector<AttributeValues> alternatives;
  for (const std::string& id : sol.agreed) {
    if (id != m.entity_id) agreed.push_back(model_.KnownBefore(id, e.position));
  }
  for (const std::string& id : sol.alternatives) {
    if (id != m.entity_id) alternatives.push_back(model_.KnownBefore(id, e.position));
  }

  bool color_contrast = false;
  if (target.Known(Attribute::kColor)) {
    const std::string& c = *target.Get(Attribute::kColor);
    bool matches_agreed = std::any_of(agreed.begin(), agreed.end(), [&](const auto& v) {
      return v.Known(Attribute::kColor) && *v.Get(Attribute::kColor) == c;
    });
    int alt_colors = 0;
    bool differs_from_all = true;
    for (const auto& v : alternatives) {
      if (!v.Known(Attribute::kColor)) continue;
      ++alt_colors;
      if (*v.Get(Attribute::kColor) == c) differs_from_all = false;
    }
    color_contrast = matches_agreed && alt_colors > 0 && differs_from_all;
  }
  b.Set("color-contrast", Yes(color_contrast));

  bool price_contrast = false;
  if (target.Known(Attribute::kPrice)) {
    const int price = *ParseInt(*target.Get(Attribute::kPrice));
    std::vector<int> alt_prices;
    for (const auto& v : alternatives) {
      if (v.Known(Attribute::kPrice)) alt_prices.push_back(*ParseInt(*v.Get(Attribute::kPrice)));
    }
    if (!alt_prices.empty()) {
      const int lo = *std::min_element(alt_prices.begin(), alt_prices.end());
      const int hi = *std::max_element(alt_prices.begin(), alt_prices.end());
      bool nearly_complete = false;
      if (dialogue_->budget) {
        int spent = 0;
        for (const auto& v : agreed) {
          if (v.Known(Attribute::kPrice)) spent += *ParseInt(*v.Get(Attribute::kPrice));
        }
        nearly_complete = *dialogue_->budget - spent <= lo;
      }
      price_contrast = price < lo || (nearly_complete && price > hi);
    }
  }
  b.Set("price-contrast", Yes(price_contrast));
  return b.Finish();
}

FeatureVector DialogueFeaturizer::Featurize(const ModelEntry& e, FocusModel focus) const {
  FeatureVector v;
  size_t i = 0;
  for (auto group : {Familiarity(e), Inherent(e), ConceptualPact(e), Contrast(e, focus),
                     Intentional(e)}) {
    for (FeatureValue& x : group) v.Set(i++, std::move(x));
  }
  return v;
}

Dataset ExtractExamples(const Corpus& c, GroupSet groups, FocusModel focus) {
  Dataset ds;
  ds.groups = groups;
  const auto& reg = FeatureRegistry::Get();
  for (const Dialogue& d : c.dialogues) {
    DialogueFeaturizer f(d);
    for (const ModelEntry& e : f.model().entries()) {
      Example ex;
      ex.vector = f.Featurize(e, focus);
      for (size_t i = 0; i < reg.size(); ++i) {
        if (!groups.Contains(reg.at(i).group)) ex.vector.Set(i, FeatureValue::Na());
      }
      const MentionRecord& m = f.model().mention(e);
      ex.label = EncodeClass(m.explicit_attrs);
      ex.dialogue_id = d.id;
      ex.utterance = f.model().utterance(e).number;
      ex.mention_id = m.mention_id;
      ds.examples.push_back(std::move(ex));
    }
  }
  return ds;
}

// ---------------------------------------------------------------------------
// CSV.

std::string FormatDatasetCsv(const Dataset& ds) {
  std::ostringstream out;
  const auto& reg = FeatureRegistry::Get();
  for (size_t i = 0; i < reg.size(); ++i) out << reg.at(i).name << ',';
  out << "class\n";
  for (const Example& ex : ds.examples) {
    for (size_t i = 0; i < reg.size(); ++i) out << ex.vector.at(i).ToString() << ',';
    out << ex.label.name() << '\n';
  }
  return out.str();
}

ParsedDataset ParseDatasetCsv(std::string_view text) {
  ParsedDataset out;
  const auto& reg = FeatureRegistry::Get();
  auto lines = SplitString(text, '\n');
  int line_no = 0;
  bool header_seen = false;
  for (std::string_view raw : lines) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (StripWhitespace(line).empty()) continue;
    auto cells = SplitString(line, ',');
    auto fail = [&](const std::string& msg) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) + ": " + msg);
    };
    if (!header_seen) {
      if (cells.size() != reg.size() && cells.size() != reg.size() + 1) {
        fail("header must list the 82 features, optionally followed by class");
      }
      for (size_t i = 0; i < reg.size(); ++i) {
        if (cells[i] != reg.at(i).name) {
          fail("column " + std::to_string(i + 1) + " is '" + std::string(cells[i]) +
               "', expected '" + std::string(reg.at(i).name) + "'");
        }
      }
      if (cells.size() == reg.size() + 1) {
        if (cells.back() != "class") fail("last column must be 'class'");
        out.has_gold = true;
      }
      header_seen = true;
      continue;
    }
    const size_t want = reg.size() + (out.has_gold ? 1 : 0);
    if (cells.size() != want) {
      fail("expected " + std::to_string(want) + " cells, got " + std::to_string(cells.size()));
    }
    FeatureVector v;
    for (size_t i = 0; i < reg.size(); ++i) {
      std::string_view cell = cells[i];
      if (cell == "na") continue;
      switch (reg.at(i).type) {
        case FeatureType::kBoolean:
          if (cell == "yes") {
            v.Set(i, FeatureValue::Bool(true));
          } else if (cell == "no") {
            v.Set(i, FeatureValue::Bool(false));
          } else {
            fail("feature " + std::string(reg.at(i).name) + " expects yes/no/na");
          }
          break;
        case FeatureType::kNumeric: {
          auto x = ParseDouble(cell);
          if (!x) fail("feature " + std::string(reg.at(i).name) + " expects a number");
          v.Set(i, FeatureValue::Number(*x));
          break;
        }
        case FeatureType::kSymbolic:
          v.Set(i, FeatureValue::Symbol(std::string(cell)));
          break;
      }
    }
    if (out.has_gold) {
      auto label = ParseClassLabel(cells.back());
      if (!label) fail("unknown class label '" + std::string(cells.back()) + "'");
      out.labels.push_back(*label);
    }
    out.vectors.push_back(std::move(v));
  }
  if (!header_seen) throw std::runtime_error("dataset has no header line");
  return out;
}

}  // namespace odsel
