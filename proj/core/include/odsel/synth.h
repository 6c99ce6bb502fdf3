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

// Synthetic annotated corpora with a planted attribute-selection policy.
//
// Each dialogue skeleton (speakers, goals, agreement moves, entities and
// attribute values of every mention) is drawn first. Mentions are then
// labelled in document order: the policy classifies the mention's feature
// vector, and the chosen attributes become its explicit set. Features never
// depend on a mention's own explicit set, so re-extracting the corpus
// reproduces the policy's decisions exactly when label_noise is 0.

#ifndef ODSEL_SYNTH_H_
#define ODSEL_SYNTH_H_

#include <cstdint>

#include "odsel/corpus.h"
#include "odsel/focus.h"
#include "odsel/rules.h"

namespace odsel {

struct SynthParams {
  uint64_t seed = 1;
  int n_dialogues = 13;
  int min_utterances = 40;
  int max_utterances = 60;
  int min_entities = 6;
  int max_entities = 12;
  RuleList policy;
  double label_noise = 0;
  // Focus model used to compute the features the policy sees.
  FocusModel focus = FocusModel::kSegment;

  SynthParams();
};

// Throws std::invalid_argument for infeasible or malformed parameters,
// including policy conditions on names outside the feature registry.
void CheckSynthParams(const SynthParams& p);

// A four-rule policy over dialogue-structure features, default CPQ.
RuleList DefaultPlantedPolicy();

// Deterministic given the parameters; the result passes Validate().
Corpus Generate(const SynthParams& p);

}  // namespace odsel

#endif  // ODSEL_SYNTH_H_
