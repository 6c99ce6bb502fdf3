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

#include <map>
#include <string>

#include <gtest/gtest.h>

#include "odsel/evaluation.h"
#include "odsel/features.h"

namespace odsel {
namespace {

TEST(SynthTest, DeterministicPerSeed) {
  SynthParams p;
  p.seed = 11;
  const Corpus a = Generate(p);
  EXPECT_EQ(Generate(p), a);
  EXPECT_EQ(SerializeCorpus(Generate(p)), SerializeCorpus(a));
  p.seed = 12;
  EXPECT_NE(Generate(p), a);
}

TEST(SynthTest, DefaultCorpusIsValidAndSized) {
  for (uint64_t seed : {1u, 2u, 3u}) {
    SynthParams p;
    p.seed = seed;
    Corpus c = Generate(p);
    EXPECT_TRUE(Validate(c).empty()) << "seed " << seed;
    EXPECT_EQ(c.dialogues.size(), 13u);
    EXPECT_GE(c.MentionCount(), 300u) << "seed " << seed;
    EXPECT_LE(c.MentionCount(), 500u) << "seed " << seed;
    for (const Dialogue& d : c.dialogues) {
      EXPECT_GE(d.utterances.size(), 40u);
      EXPECT_LE(d.utterances.size(), 60u);
    }
    // The serialized form parses back unchanged.
    EXPECT_EQ(ParseCorpus(SerializeCorpus(c)), c);
  }
}

TEST(SynthTest, LabelsFollowThePlantedPolicy) {
  SynthParams p;
  p.seed = 5;
  Corpus c = Generate(p);
  Dataset ds = ExtractExamples(c, GroupSet::All(), p.focus);
  ASSERT_FALSE(ds.examples.empty());
  std::map<std::string, int> seen;
  for (const Example& ex : ds.examples) {
    EXPECT_EQ(Classify(p.policy, ex.vector), ex.label) << ex.mention_id;
    seen[ex.label.name()]++;
  }
  // Every rule of the default policy and its default are exercised.
  EXPECT_EQ(seen.size(), p.policy.rules.size() + 1);
}

TEST(SynthTest, LabelNoiseFlipsSomeLabels) {
  SynthParams p;
  p.seed = 5;
  p.label_noise = 0.2;
  Corpus c = Generate(p);
  EXPECT_TRUE(Validate(c).empty());
  Dataset ds = ExtractExamples(c, GroupSet::All(), p.focus);
  int disagree = 0;
  for (const Example& ex : ds.examples) disagree += Classify(p.policy, ex.vector) != ex.label;
  const double rate = static_cast<double>(disagree) / ds.examples.size();
  EXPECT_GT(rate, 0.1);
  EXPECT_LT(rate, 0.3);
}

TEST(SynthTest, PlantedPolicyIsRecovered) {
  SynthParams p;
  p.seed = 1;
  Dataset ds = ExtractExamples(Generate(p), GroupSet::All(), p.focus);
  RuleList learned = Train(ds, LearnerParams{});
  int correct = 0;
  for (const Example& ex : ds.examples) correct += Classify(learned, ex.vector) == ex.label;
  EXPECT_EQ(correct, static_cast<int>(ds.examples.size()));

  FoldPlan plan = FoldPlan::Make(ds.examples.size(), 25, 1);
  CVResult learner = CrossValidate(ds, plan, RuleLearnerFactory(LearnerParams{}));
  CVResult majority = CrossValidate(ds, plan, MajorityFactory());
  EXPECT_GE(learner.mean, 0.95);
  PairedTResult t = PairedT(learner.per_fold_accuracy, majority.per_fold_accuracy);
  EXPECT_EQ(t.df, 24);
  EXPECT_TRUE(t.significant_01);
}

TEST(SynthTest, RejectsBadParams) {
  SynthParams p;
  p.min_utterances = 50;
  p.max_utterances = 40;
  EXPECT_THROW(CheckSynthParams(p), std::invalid_argument);
  EXPECT_THROW(Generate(p), std::invalid_argument);

  SynthParams noisy;
  noisy.label_noise = 1.5;
  EXPECT_THROW(CheckSynthParams(noisy), std::invalid_argument);

  SynthParams unknown;
  unknown.policy = ParseRuleList("IF prev-state-expressed = yes THEN C\nDEFAULT T\n");
  EXPECT_THROW(CheckSynthParams(unknown), std::invalid_argument);

  SynthParams none;
  none.n_dialogues = -1;
  EXPECT_THROW(CheckSynthParams(none), std::invalid_argument);
}

TEST(SynthTest, CustomPolicy) {
  SynthParams p;
  p.seed = 9;
  p.n_dialogues = 3;
  p.policy = ParseRuleList("IF reference-relation = initial THEN CPOQ\nDEFAULT O\n");
  Corpus c = Generate(p);
  EXPECT_TRUE(Validate(c).empty());
  for (const Example& ex : ExtractExamples(c, GroupSet::All(), p.focus).examples) {
    EXPECT_EQ(ex.label.name(),
              ex.vector.Get("reference-relation") == FeatureValue::Symbol("initial") ? "CPOQ"
                                                                                      : "O");
  }
}

}  // namespace
}  // namespace odsel
