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

#include "odsel/discourse.h"

#include <algorithm>
#include <set>

namespace odsel {

std::string AbsoluteOwner(const Dialogue& d, std::string_view speaker,
                          std::string_view relative) {
  if (relative == "self") return std::string(speaker);
  if (relative == "other") return d.OtherSpeaker(speaker);
  return std::string(relative);  // "ours" and "unk" are perspective-free
}

std::string RelativeOwner(const Dialogue& d, std::string_view speaker,
                          std::string_view absolute) {
  if (absolute == "ours" || absolute == kUnknownValue) return std::string(absolute);
  if (absolute == speaker) return "self";
  if (absolute == d.OtherSpeaker(speaker)) return "other";
  return std::string(kUnknownValue);
}

std::vector<Turn> ComputeTurns(const Dialogue& d) {
  std::vector<Turn> turns;
  for (const Utterance& u : d.utterances) {
    if (turns.empty() || turns.back().speaker != u.speaker) {
      Turn t;
      t.index = static_cast<int>(turns.size());
      t.speaker = u.speaker;
      turns.push_back(std::move(t));
    }
    turns.back().utterances.push_back(u.number);
  }
  return turns;
}

Turn TurnIndex(const Dialogue& d, int utterance) {
  for (Turn& t : ComputeTurns(d)) {
    if (std::find(t.utterances.begin(), t.utterances.end(), utterance) !=
        t.utterances.end()) {
      return std::move(t);
    }
  }
  throw std::out_of_range("unknown utterance " + std::to_string(utterance) +
                          " in dialogue " + d.id);
}

namespace {

bool InheritsFromLinks(ReferenceRelation r) {
  return r == ReferenceRelation::kSet || r == ReferenceRelation::kClass ||
         r == ReferenceRelation::kCnAnaphora ||
         r == ReferenceRelation::kPredicative;
}

}  // namespace

DiscourseModel DiscourseModel::Build(const Dialogue& d) {
  DiscourseModel model;
  model.dialogue_ = &d;
  model.turns_ = ComputeTurns(d);
  for (const Turn& t : model.turns_) {
    for (int u : t.utterances) model.turn_of_[u] = t.index;
  }

  std::map<std::string, std::vector<MentionEvent>, std::less<>> history;
  size_t position = 0;
  for (size_t ui = 0; ui < d.utterances.size(); ++ui) {
    const Utterance& u = d.utterances[ui];
    for (size_t mi = 0; mi < u.mentions.size(); ++mi, ++position) {
      const MentionRecord& m = u.mentions[mi];
      auto state_it = model.entities_.find(m.entity_id);
      const bool seen = state_it != model.entities_.end();
      if (m.relation == ReferenceRelation::kCoref && !seen) {
        throw UnknownEntityError("mention " + m.mention_id + " corefers with unseen entity " +
                                 m.entity_id + " in dialogue " + d.id);
      }

      ModelEntry entry;
      entry.position = position;
      entry.utterance_index = ui;
      entry.mention_index = mi;
      EntitySnapshot& snap = entry.snapshot;
      snap.entity_id = m.entity_id;
      if (seen) snap.known_before = state_it->second.after.back();

      if (InheritsFromLinks(m.relation) && !m.linked_entities.empty()) {
        std::vector<AttributeValues> linked;
        for (const std::string& id : m.linked_entities) {
          auto it = model.entities_.find(id);
          if (it != model.entities_.end()) linked.push_back(it->second.after.back());
        }
        if (!linked.empty()) {
          for (Attribute a : kAllAttributes) {
            if (snap.known_before.Known(a)) continue;
            const auto& first = linked.front().Get(a);
            if (!linked.front().Known(a)) continue;
            bool shared = std::all_of(linked.begin(), linked.end(),
                                      [&](const AttributeValues& v) {
                                        return v.Known(a) && v.Get(a) == first;
                                      });
            if (shared) snap.known_before.Set(a, *first);
          }
        }
      }
      for (Attribute a : kAllAttributes) {
        snap.mutually_known[static_cast<size_t>(a)] = snap.known_before.Known(a);
      }
      auto& hist = history[m.entity_id];
      snap.history = hist;
      snap.prior_mentions = static_cast<int>(hist.size());
      if (!hist.empty()) snap.last_mention = hist.back();
      model.entries_.push_back(std::move(entry));

      // Absorb this mention's values.
      EntityState& state = model.entities_[m.entity_id];
      AttributeValues known = state.after.empty() ? AttributeValues{} : state.after.back();
      for (Attribute a : kAllAttributes) {
        if (!m.attribute_values.Known(a)) continue;
        std::string value = *m.attribute_values.Get(a);
        if (a == Attribute::kOwner) value = AbsoluteOwner(d, u.speaker, value);
        if (known.Known(a) && *known.Get(a) != value) {
          model.warnings_.push_back(
              "dialogue " + d.id + ", mention " + m.mention_id + ": " +
              std::string(AttributeName(a)) + " of " + m.entity_id + " changes from " +
              *known.Get(a) + " to " + value);
        }
        known.Set(a, std::move(value));
      }
      state.positions.push_back(position);
      state.after.push_back(std::move(known));

      MentionEvent ev;
      ev.position = position;
      ev.utterance = u.number;
      ev.turn = model.turn_of_.at(u.number);
      ev.speaker = u.speaker;
      ev.explicit_attrs = m.explicit_attrs;
      ev.inferred_attrs = m.inferred_attrs;
      ev.relation = m.relation;
      hist.push_back(std::move(ev));
    }
  }
  return model;
}

int DiscourseModel::TurnOf(int utterance_number) const {
  auto it = turn_of_.find(utterance_number);
  if (it == turn_of_.end()) {
    throw std::out_of_range("unknown utterance " + std::to_string(utterance_number));
  }
  return it->second;
}

AttributeValues DiscourseModel::KnownBefore(std::string_view entity,
                                            size_t position) const {
  auto it = entities_.find(entity);
  if (it == entities_.end()) return {};
  const EntityState& s = it->second;
  auto upper = std::lower_bound(s.positions.begin(), s.positions.end(), position);
  if (upper == s.positions.begin()) return {};
  return s.after[static_cast<size_t>(upper - s.positions.begin()) - 1];
}

std::vector<std::string> DiscourseModel::EntitiesBefore(size_t position) const {
  std::vector<std::string> out;
  for (const auto& [id, state] : entities_) {
    if (!state.positions.empty() && state.positions.front() < position) {
      out.push_back(id);
    }
  }
  return out;
}

}  // namespace odsel
