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

#include "odsel/focus.h"

#include <algorithm>
#include <map>

namespace odsel {

std::string_view ToString(FocusModel m) {
  switch (m) {
    case FocusModel::kSegment: return "seg";
    case FocusModel::kOneUtterance: return "1utt";
    case FocusModel::kFiveUtterance: return "5utt";
  }
  return "?";
}

std::optional<FocusModel> ParseFocusModel(std::string_view s) {
  if (s == "seg" || s == "SEGMENT") return FocusModel::kSegment;
  if (s == "1utt" || s == "ONE_UTTERANCE") return FocusModel::kOneUtterance;
  if (s == "5utt" || s == "FIVE_UTTERANCE") return FocusModel::kFiveUtterance;
  return std::nullopt;
}

SegmentStructure BuildSegments(const Dialogue& d) {
  SegmentStructure out;
  std::vector<size_t> stack;
  std::set<std::string> introduced;

  auto push = [&](std::set<std::string> goals, int utt) {
    Segment s;
    s.goal_ids = std::move(goals);
    s.start_utt = utt;
    s.end_utt = utt;
    if (!stack.empty()) s.parent = stack.back();
    out.segments.push_back(std::move(s));
    stack.push_back(out.segments.size() - 1);
  };

  for (const Utterance& u : d.utterances) {
    std::set<std::string> continued;
    std::set<std::string> fresh;
    for (const PSRecord& ps : u.ps) {
      if (ps.mode == GoalMode::kIntroduce) {
        fresh.insert(ps.goal_id);
      } else {
        if (!introduced.count(ps.goal_id) && !fresh.count(ps.goal_id)) {
          throw SegmentationError("dialogue " + d.id + ", utterance " +
                                  std::to_string(u.number) + ": goal " + ps.goal_id +
                                  " continued before being introduced");
        }
        continued.insert(ps.goal_id);
      }
    }

    if (!continued.empty()) {
      // Pop to the topmost segment holding any continued goal.
      std::optional<size_t> keep;
      for (size_t i = stack.size(); i-- > 0;) {
        const auto& goals = out.segments[stack[i]].goal_ids;
        if (std::any_of(continued.begin(), continued.end(),
                        [&](const std::string& g) { return goals.count(g) > 0; })) {
          keep = i;
          break;
        }
      }
      if (keep) stack.resize(*keep + 1);
      std::set<std::string> resumed;
      for (const std::string& g : continued) {
        bool on_stack = std::any_of(stack.begin(), stack.end(), [&](size_t s) {
          return out.segments[s].goal_ids.count(g) > 0;
        });
        if (!on_stack) resumed.insert(g);
      }
      if (!resumed.empty()) push(std::move(resumed), u.number);
    }
    if (!fresh.empty()) {
      introduced.insert(fresh.begin(), fresh.end());
      push(std::move(fresh), u.number);
    }

    for (size_t s : stack) out.segments[s].end_utt = u.number;
    out.innermost.push_back(stack.empty() ? std::nullopt
                                          : std::optional<size_t>(stack.back()));
    out.stacks.push_back(stack);
  }
  return out;
}

bool DistractorSet::Contains(std::string_view entity) const {
  return std::any_of(members.begin(), members.end(),
                     [&](const Distractor& d) { return d.entity_id == entity; });
}

DistractorSet ComputeDistractors(const DiscourseModel& model,
                                 const SegmentStructure& segments,
                                 const ModelEntry& target, FocusModel focus) {
  const Dialogue& d = model.dialogue();
  const std::string& target_entity = model.mention(target).entity_id;
  std::set<std::string> ids;

  if (focus == FocusModel::kSegment) {
    const auto& stack = segments.stacks.at(target.utterance_index);
    for (const ModelEntry& e : model.entries()) {
      if (e.position >= target.position) break;
      const MentionRecord& m = model.mention(e);
      const int utt = d.utterances[e.utterance_index].number;
      bool active = std::any_of(stack.begin(), stack.end(), [&](size_t s) {
        const Segment& seg = segments.segments[s];
        return seg.goal_ids.count(m.goal_id) > 0 && utt >= seg.start_utt;
      });
      if (active) ids.insert(m.entity_id);
    }
  } else {
    const size_t window = focus == FocusModel::kOneUtterance ? 1 : 5;
    const size_t first =
        target.utterance_index >= window ? target.utterance_index - window : 0;
    for (size_t ui = first; ui < target.utterance_index; ++ui) {
      for (const MentionRecord& m : d.utterances[ui].mentions) ids.insert(m.entity_id);
    }
  }

  ids.erase(target_entity);
  DistractorSet out;
  for (const std::string& id : ids) {
    out.members.push_back({id, model.KnownBefore(id, target.position)});
  }
  return out;
}

}  // namespace odsel
