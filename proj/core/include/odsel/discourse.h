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

#ifndef ODSEL_DISCOURSE_H_
#define ODSEL_DISCOURSE_H_

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "odsel/attributes.h"
#include "odsel/corpus.h"

namespace odsel {

// Owner values in corpus files are relative to the describing speaker
// (self/other/ours). Inside the discourse model they are stored in absolute
// form: the owning speaker's token, or "ours".
std::string AbsoluteOwner(const Dialogue& d, std::string_view speaker,
                          std::string_view relative);
std::string RelativeOwner(const Dialogue& d, std::string_view speaker,
                          std::string_view absolute);

// A maximal run of consecutive utterances by one speaker.
struct Turn {
  int index = 0;
  std::string speaker;
  std::vector<int> utterances;
};

std::vector<Turn> ComputeTurns(const Dialogue& d);

// Throws std::out_of_range for an utterance number not in `d`.
Turn TurnIndex(const Dialogue& d, int utterance);

// One earlier description of an entity.
struct MentionEvent {
  size_t position = 0;  // document-order mention index within the dialogue
  int utterance = 0;
  int turn = 0;
  std::string speaker;
  AttributeSet explicit_attrs;
  AttributeSet inferred_attrs;
  ReferenceRelation relation = ReferenceRelation::kInitial;
};

// What was known about an entity just before one of its mentions.
struct EntitySnapshot {
  std::string entity_id;
  AttributeValues known_before;  // owner in absolute form
  std::array<bool, 5> mutually_known{};
  int prior_mentions = 0;
  std::optional<MentionEvent> last_mention;
  std::vector<MentionEvent> history;  // every earlier mention, oldest first

  bool MutuallyKnown(Attribute a) const {
    return mutually_known[static_cast<size_t>(a)];
  }
};

// A mention together with the snapshot of its entity.
struct ModelEntry {
  size_t position = 0;
  size_t utterance_index = 0;
  size_t mention_index = 0;
  EntitySnapshot snapshot;
};

class UnknownEntityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Left fold of a dialogue's mentions into per-entity knowledge. The model
// refers to the dialogue it was built from, which must outlive it.
class DiscourseModel {
 public:
  // Throws UnknownEntityError on a coref mention of an unseen entity.
  static DiscourseModel Build(const Dialogue& d);

  const Dialogue& dialogue() const { return *dialogue_; }
  const std::vector<ModelEntry>& entries() const { return entries_; }
  const std::vector<Turn>& turns() const { return turns_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  const MentionRecord& mention(const ModelEntry& e) const {
    return dialogue_->utterances[e.utterance_index].mentions[e.mention_index];
  }
  const Utterance& utterance(const ModelEntry& e) const {
    return dialogue_->utterances[e.utterance_index];
  }

  // Turn index of an utterance number. Throws std::out_of_range.
  int TurnOf(int utterance_number) const;

  // Accumulated values of `entity` from mentions strictly before `position`
  // (no linked-entity inheritance). Empty map for an entity not yet seen.
  AttributeValues KnownBefore(std::string_view entity, size_t position) const;

  // Entities mentioned strictly before `position`, sorted by id.
  std::vector<std::string> EntitiesBefore(size_t position) const;

 private:
  struct EntityState {
    std::vector<size_t> positions;          // mention positions
    std::vector<AttributeValues> after;     // known map after each mention
  };

  const Dialogue* dialogue_ = nullptr;
  std::vector<ModelEntry> entries_;
  std::vector<Turn> turns_;
  std::map<int, int> turn_of_;
  std::map<std::string, EntityState, std::less<>> entities_;
  std::vector<std::string> warnings_;
};

}  // namespace odsel

#endif  // ODSEL_DISCOURSE_H_
