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

// Focus spaces: which discourse entities are salient when a target mention
// is produced. Three definitions are supported: the goal-derived segment
// stack, the single preceding utterance, and the five preceding utterances.

#ifndef ODSEL_FOCUS_H_
#define ODSEL_FOCUS_H_

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "odsel/discourse.h"

namespace odsel {

enum class FocusModel { kSegment, kOneUtterance, kFiveUtterance };

// "seg", "1utt", "5utt".
std::string_view ToString(FocusModel m);
std::optional<FocusModel> ParseFocusModel(std::string_view s);

struct Segment {
  std::set<std::string> goal_ids;
  int start_utt = 0;
  int end_utt = 0;
  std::optional<size_t> parent;
};

struct SegmentStructure {
  std::vector<Segment> segments;
  // Indexed like Dialogue::utterances. Innermost segment after the
  // utterance is processed; nullopt before the first PS record.
  std::vector<std::optional<size_t>> innermost;
  // Active focus stack (bottom first) after each utterance.
  std::vector<std::vector<size_t>> stacks;
};

class SegmentationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Stack discipline over PS records: `introduce` pushes one segment holding
// the utterance's newly introduced goals; `continue` pops back to the
// topmost segment holding a continued goal, or pushes a resumption segment
// when that goal's segment was already popped. Utterances without PS
// records stay in the current segment.
// Throws SegmentationError on a continue of a goal never introduced.
SegmentStructure BuildSegments(const Dialogue& d);

struct Distractor {
  std::string entity_id;
  AttributeValues known;  // as of the target mention; owner absolute
};

struct DistractorSet {
  std::vector<Distractor> members;  // sorted by entity id

  size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
  bool Contains(std::string_view entity) const;
};

DistractorSet ComputeDistractors(const DiscourseModel& model,
                                 const SegmentStructure& segments,
                                 const ModelEntry& target, FocusModel focus);

}  // namespace odsel

#endif  // ODSEL_FOCUS_H_
