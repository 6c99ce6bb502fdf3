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

#include "odsel/corpus.h"

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.h"

namespace odsel {
namespace {

using testing::ExcerptCorpus;
using testing::ExcerptText;
using testing::ReplaceOnce;

std::vector<std::string> RulesOf(const std::vector<Violation>& vs) {
  std::vector<std::string> out;
  for (const Violation& v : vs) out.push_back(v.rule);
  return out;
}

TEST(CorpusTest, ParsesExcerpt) {
  Corpus c = ExcerptCorpus();
  ASSERT_EQ(c.dialogues.size(), 1u);
  const Dialogue& d = c.dialogues[0];
  EXPECT_EQ(d.id, "coconut-excerpt");
  EXPECT_EQ(d.speaker_a, "G");
  EXPECT_EQ(d.speaker_b, "S");
  EXPECT_EQ(d.problem_number, 1);
  EXPECT_EQ(d.budget, 250);
  EXPECT_EQ(d.utterances.size(), 20u);
  EXPECT_EQ(d.utterances.front().number, 36);
  EXPECT_EQ(d.utterances.back().number, 55);
  EXPECT_EQ(c.MentionCount(), 13u);
}

TEST(CorpusTest, ExcerptRecordsCarryAnnotatedFields) {
  const Dialogue d = ExcerptCorpus().dialogues[0];
  const Utterance& u37 = d.utterances[*d.FindUtterance(37)];
  ASSERT_EQ(u37.ps.size(), 1u);
  EXPECT_EQ(u37.ps[0].goal_label, GoalLabel::kSelectOptionalItemLR);
  EXPECT_EQ(u37.ps[0].mode, GoalMode::kIntroduce);
  ASSERT_EQ(u37.ps[0].constraint_changes.size(), 1u);
  EXPECT_EQ(u37.ps[0].constraint_changes[0].kind, ConstraintKind::kDropColorMatch);
  EXPECT_EQ(u37.ps[0].constraint_changes[0].presence, Presence::kImplicit);
  ASSERT_TRUE(u37.du.has_value());
  EXPECT_EQ(u37.du->influence_on_listener, ListenerInfluence::kActionDirective);
  EXPECT_EQ(u37.du->influence_on_speaker, SpeakerInfluence::kOffer);

  const MentionRecord& m = u37.mentions.at(0);
  EXPECT_EQ(m.mention_id, "m37a");
  EXPECT_EQ(m.entity_id, "ref-1");
  EXPECT_EQ(m.explicit_attrs, (AttributeSet{Attribute::kType, Attribute::kColor,
                                            Attribute::kOwner, Attribute::kPrice}));
  EXPECT_EQ(m.inferred_attrs, AttributeSet{Attribute::kQuantity});
  EXPECT_EQ(m.attribute_values.Get(Attribute::kPrice), "150");
  EXPECT_EQ(m.surface, "a yellow rug for 150 dollars");

  const Utterance& u51 = d.utterances[*d.FindUtterance(51)];
  ASSERT_EQ(u51.mentions.size(), 2u);
  EXPECT_EQ(u51.mentions[1].relation, ReferenceRelation::kSet);
  EXPECT_EQ(u51.mentions[1].linked_entities, (std::vector<std::string>{"ref-12", "ref-16"}));
  EXPECT_EQ(u51.mentions[1].attribute_values.Get(Attribute::kQuantity), "unk");

  const Utterance& u41 = d.utterances[*d.FindUtterance(41)];
  EXPECT_FALSE(u41.du.has_value());
  EXPECT_EQ(u41.EffectiveDU().influence_on_listener, ListenerInfluence::kNa);
}

TEST(CorpusTest, RoundTripsExcerpt) {
  Corpus c = ExcerptCorpus();
  const std::string once = SerializeCorpus(c);
  Corpus again = ParseCorpus(once);
  EXPECT_EQ(again, c);
  EXPECT_EQ(SerializeCorpus(again), once);
}

TEST(CorpusTest, ExcerptIsValid) {
  EXPECT_TRUE(Validate(ExcerptCorpus()).empty());
}

TEST(CorpusTest, SpeakerHelpers) {
  const Dialogue d = ExcerptCorpus().dialogues[0];
  EXPECT_EQ(d.SpeakerPairKey(), "G-S");
  EXPECT_EQ(d.OtherSpeaker("G"), "S");
  EXPECT_EQ(d.OtherSpeaker("X"), "");
  EXPECT_FALSE(d.FindUtterance(12).has_value());
}

struct SeededViolation {
  const char* from;
  const char* to;
  const char* rule;
};

void PrintTo(const SeededViolation& s, std::ostream* os) { *os << s.rule; }

class SeededViolationTest : public ::testing::TestWithParam<SeededViolation> {};

TEST_P(SeededViolationTest, ReportsExactlyTheSeededRule) {
  const SeededViolation& s = GetParam();
  Corpus c = ParseCorpusUnchecked(ReplaceOnce(ExcerptText(), s.from, s.to));
  std::vector<Violation> vs = Validate(c);
  ASSERT_FALSE(vs.empty());
  std::vector<std::string> rules = RulesOf(vs);
  EXPECT_NE(std::find(rules.begin(), rules.end(), s.rule), rules.end())
      << FormatViolation(vs.front());
  EXPECT_THROW(ParseCorpus(ReplaceOnce(ExcerptText(), s.from, s.to)), CorpusInvariantError);
}

INSTANTIATE_TEST_SUITE_P(
    Excerpt, SeededViolationTest,
    ::testing::Values(
        SeededViolation{"PAIR\tG-S", "PAIR\tG-G", "two-speakers"},
        SeededViolation{"U\t39\tS", "U\t39\tK", "speaker-in-pair"},
        SeededViolation{"PS\t39\tSelectOptionalItem\tcontinue\tact5",
                        "PS\t39\tSelectOptionalItem\tcontinue\tact9", "continue-after-introduce"},
        SeededViolation{"m38a", "m37a", "unique-mention-id"},
        SeededViolation{"m43a\tinitial\tref-4", "m43a\tinitial\tref-1", "initial-is-fresh"},
        SeededViolation{"m40a\tcoref\tref-1", "m40a\tcoref\tref-9", "coref-is-seen"},
        SeededViolation{"INFR=quantity\tACT=act4\t\"a yellow", "INFR=price\tACT=act4\t\"a yellow",
                        "explicit-inferred-disjoint"},
        SeededViolation{"ATTRS=type=rug,color=yellow,owner=self,price=150,quantity=1",
                        "ATTRS=type=rug,owner=self,price=150,quantity=1",
                        "listed-attribute-has-value"},
        SeededViolation{"ACT=act4\t\"a yellow", "ACT=act3\t\"a yellow", "goal-precedes-mention"}),
    [](const ::testing::TestParamInfo<SeededViolation>& info) {
      std::string name = info.param.rule;
      std::replace(name.begin(), name.end(), '-', '_');
      return name;
    });

TEST(CorpusTest, DecreasingUtteranceNumbers) {
  std::string text = ExcerptText();
  for (size_t at = text.find("\t39\t"); at != std::string::npos; at = text.find("\t39\t")) {
    text.replace(at, 4, "\t35\t");
  }
  std::vector<std::string> rules = RulesOf(Validate(ParseCorpusUnchecked(text)));
  EXPECT_EQ(rules, std::vector<std::string>{"increasing-utterance-numbers"});
}

TEST(CorpusTest, DuplicateDialogueId) {
  std::string text = ExcerptText();
  Corpus c = ParseCorpus(text);
  c.dialogues.push_back(c.dialogues[0]);
  std::vector<std::string> rules = RulesOf(Validate(c));
  EXPECT_NE(std::find(rules.begin(), rules.end(), "unique-dialogue-id"), rules.end());
}

TEST(CorpusTest, ViolationNamesRecord) {
  Corpus c = ParseCorpusUnchecked(ReplaceOnce(ExcerptText(), "m40a\tcoref\tref-1",
                                              "m40a\tcoref\tref-9"));
  std::vector<Violation> vs = Validate(c);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].dialogue_id, "coconut-excerpt");
  EXPECT_EQ(vs[0].utterance, 40);
  EXPECT_EQ(vs[0].record_id, "m40a");
}

TEST(CorpusTest, SyntaxErrorCarriesLine) {
  const std::string bad = "DIALOGUE\td1\tPAIR\tA-B\tPROBLEM\t1\nU\t1\tA\thello\nXX\t1\n";
  try {
    ParseCorpus(bad);
    FAIL() << "expected a syntax error";
  } catch (const CorpusSyntaxError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(CorpusTest, RejectsRecordBeforeDialogue) {
  EXPECT_THROW(ParseCorpus("U\t1\tA\thello\n"), CorpusSyntaxError);
}

TEST(CorpusTest, RejectsUnknownEnumValue) {
  EXPECT_THROW(ParseCorpus(ReplaceOnce(ExcerptText(), "DU\t37\taction-directive",
                                       "DU\t37\tshouting")),
               CorpusSyntaxError);
}

TEST(CorpusTest, EmptyInputIsEmptyCorpus) {
  EXPECT_TRUE(ParseCorpus("").dialogues.empty());
  EXPECT_TRUE(ParseCorpus("# only a comment\n\n").dialogues.empty());
}

TEST(CorpusTest, MissingFileIsError) {
  EXPECT_THROW(ReadTextFile("/nonexistent/odsel/corpus.tsv"), std::runtime_error);
}

}  // namespace
}  // namespace odsel
