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

#include "odsel/synth.h"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "odsel/discourse.h"
#include "odsel/features.h"
#include "random_util.h"

namespace odsel {

namespace {

constexpr std::string_view kDefaultPolicy =
    "IF number-prev-mentions >= 3 THEN T\n"
    "IF influence-on-listener = action-directive AND commit-speaker = commit THEN CP\n"
    "IF reference-relation = initial AND solution-size = indeterminate THEN CPO\n"
    "IF color-distractors >= 2 THEN C\n"
    "DEFAULT CPQ\n";

const std::vector<std::string> kSpeakers = {"GARRETT", "STEVE", "JULIE", "JON",   "DAVE",
                                            "GREG",    "JILL",  "PENNY", "KATHY", "MARK"};
const std::vector<std::string> kColors = {"red", "blue", "green", "yellow"};
const std::vector<std::string> kFillers = {"okay", "what do you have", "sounds good",
                                           "let me check", "hmm", "go ahead"};

struct EntityTruth {
  std::string id;
  std::string goal_id;
  std::string type;
  std::string color;
  std::string owner;  // absolute: a speaker token
  int price = 0;
  int quantity = 1;
};

struct GoalPlan {
  GoalLabel label;
  std::string id;
  int touches = 0;
};

std::string TypeForGoal(GoalLabel g, Rng& rng) {
  if (Bernoulli(rng, 0.1)) return "superordinate";
  switch (g) {
    case GoalLabel::kSelectSofa: return "sofa";
    case GoalLabel::kSelectTable: return "table";
    case GoalLabel::kSelectChairs: return "chair";
    default: return Bernoulli(rng, 0.5) ? "rug" : "lamp";
  }
}

std::string Surface(const MentionRecord& m) {
  std::string out;
  auto value = [&](Attribute a) -> std::string {
    const auto& v = m.attribute_values.Get(a);
    return v ? *v : std::string(kUnknownValue);
  };
  if (m.explicit_attrs.Contains(Attribute::kOwner)) {
    const std::string o = value(Attribute::kOwner);
    out += o == "self" ? "my " : o == "other" ? "your " : o == "ours" ? "our " : "a ";
  } else if (m.explicit_attrs.Contains(Attribute::kQuantity)) {
    out += value(Attribute::kQuantity) + " ";
  } else {
    out += "the ";
  }
  if (m.explicit_attrs.Contains(Attribute::kColor)) out += value(Attribute::kColor) + " ";
  out += value(Attribute::kType);
  if (m.explicit_attrs.Contains(Attribute::kPrice)) {
    out += " for " + value(Attribute::kPrice) + " dollars";
  }
  return out;
}

class DialogueBuilder {
 public:
  DialogueBuilder(const SynthParams& p, int index, Rng& rng)
      : params_(p), rng_(rng) {
    d_.id = "synth-" + std::to_string(index + 1);
    std::vector<std::string> names = kSpeakers;
    Shuffle(names, rng_);
    d_.speaker_a = names[0];
    d_.speaker_b = names[1];
    d_.problem_number = UniformInt(rng_, 1, 3);
    d_.budget = UniformInt(rng_, 16, 36) * 25;
    entity_cap_ = UniformInt(rng_, p.min_entities, p.max_entities);

    std::vector<GoalLabel> goals = {GoalLabel::kSelectSofa, GoalLabel::kSelectTable,
                                    GoalLabel::kSelectChairs};
    Shuffle(goals, rng_);
    const std::vector<GoalLabel> optional = {GoalLabel::kSelectOptionalItem,
                                             GoalLabel::kSelectOptionalItemLR,
                                             GoalLabel::kSelectOptionalItemDR};
    const int extra = UniformInt(rng_, 0, 2);
    for (int i = 0; i < extra; ++i) goals.push_back(Choose(optional, rng_));
    for (size_t i = 0; i < goals.size(); ++i) {
      goals_.push_back({goals[i], "act" + std::to_string(i + 1), 0});
    }
  }

  Dialogue Build() {
    const int n = UniformInt(rng_, params_.min_utterances, params_.max_utterances);
    std::string speaker = Bernoulli(rng_, 0.5) ? d_.speaker_a : d_.speaker_b;
    for (int number = 1; number <= n; ++number) {
      if (number > 1 && Bernoulli(rng_, 0.7)) speaker = d_.OtherSpeaker(speaker);
      Utterance u;
      u.number = number;
      u.speaker = speaker;
      AddProblemSolving(u);
      AddDialogueAct(u);
      AddMentions(u);
      d_.utterances.push_back(std::move(u));
    }
    Label();
    return std::move(d_);
  }

 private:
  PSRecord MakePS(size_t goal, GoalMode mode) {
    GoalPlan& g = goals_[goal];
    PSRecord ps;
    ps.goal_label = g.label;
    ps.mode = mode;
    ps.goal_id = g.id;
    const double determinate = std::min(0.8, 0.2 + 0.1 * g.touches);
    ps.solution_size =
        Bernoulli(rng_, determinate) ? SolutionSize::kDeterminate : SolutionSize::kIndeterminate;
    if (Bernoulli(rng_, 0.15)) {
      ConstraintChange cc;
      cc.kind = static_cast<ConstraintKind>(UniformInt(rng_, 0, 4));
      if (!Bernoulli(rng_, 0.2)) {
        cc.presence = Bernoulli(rng_, 0.5) ? Presence::kImplicit : Presence::kExplicit;
      }
      ps.constraint_changes.push_back(cc);
    }
    ++g.touches;
    return ps;
  }

  void AddProblemSolving(Utterance& u) {
    if (!current_) {
      current_ = 0;
      introduced_ = 1;
      u.ps.push_back(MakePS(0, GoalMode::kIntroduce));
      return;
    }
    if (introduced_ < goals_.size() && Bernoulli(rng_, 0.12)) {
      current_ = introduced_++;
      u.ps.push_back(MakePS(*current_, GoalMode::kIntroduce));
    } else if (introduced_ > 1 && Bernoulli(rng_, 0.1)) {
      current_ = UniformIndex(rng_, introduced_);
      u.ps.push_back(MakePS(*current_, GoalMode::kContinue));
    } else if (Bernoulli(rng_, 0.55)) {
      u.ps.push_back(MakePS(*current_, GoalMode::kContinue));
    }
    if (introduced_ > 1 && Bernoulli(rng_, 0.05)) {
      size_t other = UniformIndex(rng_, introduced_);
      if (other != *current_) u.ps.push_back(MakePS(other, GoalMode::kContinue));
    }
  }

  void AddDialogueAct(Utterance& u) {
    if (!Bernoulli(rng_, 0.8)) return;
    DURecord du;
    const double l = UniformUnit(rng_);
    du.influence_on_listener = l < 0.5   ? ListenerInfluence::kActionDirective
                               : l < 0.7 ? ListenerInfluence::kOpenOption
                               : l < 0.8 ? ListenerInfluence::kInfoRequest
                                         : ListenerInfluence::kNa;
    const double s = UniformUnit(rng_);
    du.influence_on_speaker = s < 0.35   ? SpeakerInfluence::kOffer
                              : s < 0.65 ? SpeakerInfluence::kCommit
                                         : SpeakerInfluence::kNa;
    u.du = du;
  }

  EntityTruth& NewEntity(const GoalPlan& g) {
    EntityTruth e;
    e.id = "ent-" + std::to_string(entities_.size() + 1);
    e.goal_id = g.id;
    e.type = TypeForGoal(g.label, rng_);
    e.color = Choose(kColors, rng_);
    e.owner = Bernoulli(rng_, 0.5) ? d_.speaker_a : d_.speaker_b;
    e.price = UniformInt(rng_, 2, 24) * 25;
    e.quantity = g.label == GoalLabel::kSelectChairs ? UniformInt(rng_, 1, 4) : 1;
    entities_.push_back(std::move(e));
    return entities_.back();
  }

  void AddMentions(Utterance& u) {
    const double r = UniformUnit(rng_);
    const int count = r < 0.40 ? 0 : r < 0.85 ? 1 : 2;
    const GoalPlan& g = goals_[*current_];
    for (int k = 0; k < count; ++k) {
      std::vector<size_t> pool;
      for (size_t i = 0; i < entities_.size(); ++i) {
        if (entities_[i].goal_id != g.id) continue;
        bool in_utt = std::any_of(u.mentions.begin(), u.mentions.end(),
                                  [&](const MentionRecord& m) {
                                    return m.entity_id == entities_[i].id;
                                  });
        if (!in_utt) pool.push_back(i);
      }
      const bool room = static_cast<int>(entities_.size()) < entity_cap_;
      MentionRecord m;
      m.mention_id = "m-" + std::to_string(++mention_count_);
      m.goal_id = g.id;
      size_t entity;
      if (pool.empty() || (room && Bernoulli(rng_, 0.35))) {
        if (!room && pool.empty()) continue;
        std::vector<std::string> linkable;
        for (const EntityTruth& e : entities_) linkable.push_back(e.id);
        NewEntity(g);
        entity = entities_.size() - 1;
        if (!linkable.empty() && Bernoulli(rng_, 0.2)) {
          const double rel = UniformUnit(rng_);
          m.relation = rel < 0.4   ? ReferenceRelation::kSet
                       : rel < 0.8 ? ReferenceRelation::kClass
                                   : ReferenceRelation::kCnAnaphora;
          Shuffle(linkable, rng_);
          const size_t links = std::min<size_t>(linkable.size(), UniformInt(rng_, 1, 2));
          m.linked_entities.assign(linkable.begin(), linkable.begin() + links);
          std::sort(m.linked_entities.begin(), m.linked_entities.end());
        } else {
          m.relation = ReferenceRelation::kInitial;
        }
      } else {
        entity = Choose(pool, rng_);
        m.relation = ReferenceRelation::kCoref;
      }
      const EntityTruth& e = entities_[entity];
      m.entity_id = e.id;
      m.attribute_values.Set(Attribute::kType, e.type);
      if (Bernoulli(rng_, 0.65)) {
        m.attribute_values.Set(Attribute::kColor,
                               Bernoulli(rng_, 0.05) ? std::string(kUnknownValue) : e.color);
      }
      if (Bernoulli(rng_, 0.65)) {
        m.attribute_values.Set(Attribute::kOwner, e.owner == u.speaker ? "self" : "other");
      }
      if (Bernoulli(rng_, 0.65)) {
        m.attribute_values.Set(Attribute::kPrice, std::to_string(e.price));
      }
      if (Bernoulli(rng_, 0.65)) {
        m.attribute_values.Set(Attribute::kQuantity, std::to_string(e.quantity));
      }
      u.mentions.push_back(std::move(m));
    }
  }

  ClassLabel NoisyLabel(ClassLabel label) {
    if (params_.label_noise <= 0 || !Bernoulli(rng_, params_.label_noise)) return label;
    const unsigned shift = static_cast<unsigned>(UniformInt(rng_, 1, 15));
    return ClassLabel::FromMask((label.mask() + shift) % 16);
  }

  // Labels mentions in document order with the planted policy.
  void Label() {
    size_t position = 0;
    for (size_t ui = 0; ui < d_.utterances.size(); ++ui) {
      for (size_t mi = 0; mi < d_.utterances[ui].mentions.size(); ++mi, ++position) {
        ClassLabel label;
        {
          DialogueFeaturizer f(d_);
          const ModelEntry& e = f.model().entries().at(position);
          label = Classify(params_.policy, f.Featurize(e, params_.focus));
        }
        label = NoisyLabel(label);
        MentionRecord& m = d_.utterances[ui].mentions[mi];
        AttributeSet expl = label.attributes();
        expl.Insert(Attribute::kType);
        for (Attribute a : kAllAttributes) {
          if (expl.Contains(a) && !m.attribute_values.Has(a)) {
            m.attribute_values.Set(a, std::string(kUnknownValue));
          }
        }
        AttributeSet infr;
        for (Attribute a : kAllAttributes) {
          if (!expl.Contains(a) && m.attribute_values.Has(a)) infr.Insert(a);
        }
        m.explicit_attrs = expl;
        m.inferred_attrs = infr;
        m.surface = Surface(m);
      }
      Utterance& u = d_.utterances[ui];
      if (u.mentions.empty()) {
        u.text = Choose(kFillers, rng_);
      } else {
        u.text.clear();
        for (const MentionRecord& m : u.mentions) {
          if (!u.text.empty()) u.text += " and ";
          u.text += m.surface;
        }
      }
    }
  }

  const SynthParams& params_;
  Rng& rng_;
  Dialogue d_;
  std::vector<GoalPlan> goals_;
  std::vector<EntityTruth> entities_;
  std::optional<size_t> current_;
  size_t introduced_ = 0;
  int entity_cap_ = 0;
  int mention_count_ = 0;
};

}  // namespace

SynthParams::SynthParams() : policy(DefaultPlantedPolicy()) {}

RuleList DefaultPlantedPolicy() { return ParseRuleList(kDefaultPolicy); }

void CheckSynthParams(const SynthParams& p) {
  if (p.n_dialogues < 0) throw std::invalid_argument("n_dialogues must be non-negative");
  if (p.min_utterances < 1 || p.max_utterances < p.min_utterances) {
    throw std::invalid_argument("utterance range must satisfy 1 <= min <= max");
  }
  if (p.min_entities < 1 || p.max_entities < p.min_entities) {
    throw std::invalid_argument("entity range must satisfy 1 <= min <= max");
  }
  if (!(p.label_noise >= 0 && p.label_noise < 1)) {
    throw std::invalid_argument("label_noise must lie in [0, 1)");
  }
  for (const Rule& r : p.policy.rules) {
    for (const Condition& c : r.conditions) {
      if (!c.index()) {
        throw std::invalid_argument("policy tests unknown feature '" + c.feature() + "'");
      }
    }
  }
}

Corpus Generate(const SynthParams& p) {
  CheckSynthParams(p);
  Rng rng(p.seed);
  Corpus c;
  for (int i = 0; i < p.n_dialogues; ++i) {
    c.dialogues.push_back(DialogueBuilder(p, i, rng).Build());
  }
  return c;
}

}  // namespace odsel
