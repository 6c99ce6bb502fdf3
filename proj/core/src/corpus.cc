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
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "text_util.h"

namespace odsel {
namespace {

template <typename E, size_t N>
std::optional<E> Lookup(const std::pair<E, std::string_view> (&table)[N],
                        std::string_view s) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  return std::nullopt;
}

template <typename E, size_t N>
std::string_view NameOf(const std::pair<E, std::string_view> (&table)[N], E v) {
  for (const auto& [value, name] : table) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::pair<GoalLabel, std::string_view> kGoalLabels[] = {
    {GoalLabel::kSelectSofa, "SelectSofa"},
    {GoalLabel::kSelectTable, "SelectTable"},
    {GoalLabel::kSelectChairs, "SelectChairs"},
    {GoalLabel::kSelectOptionalItem, "SelectOptionalItem"},
    {GoalLabel::kSelectOptionalItemLR, "SelectOptionalItemLR"},
    {GoalLabel::kSelectOptionalItemDR, "SelectOptionalItemDR"},
};
constexpr std::pair<GoalMode, std::string_view> kGoalModes[] = {
    {GoalMode::kIntroduce, "introduce"},
    {GoalMode::kContinue, "continue"},
};
constexpr std::pair<ConstraintKind, std::string_view> kConstraintKinds[] = {
    {ConstraintKind::kDropColorMatch, "dropcolormatch"},
    {ConstraintKind::kColorLimit, "colorlimit"},
    {ConstraintKind::kPriceLimit, "pricelimit"},
    {ConstraintKind::kPriceUpperLimit, "priceupperlimit"},
    {ConstraintKind::kPriceEvaluator, "priceevaluator"},
};
constexpr std::pair<Presence, std::string_view> kPresences[] = {
    {Presence::kImplicit, "implicit"},
    {Presence::kExplicit, "explicit"},
};
constexpr std::pair<SolutionSize, std::string_view> kSolutionSizes[] = {
    {SolutionSize::kDeterminate, "determinate"},
    {SolutionSize::kIndeterminate, "indeterminate"},
};
constexpr std::pair<ListenerInfluence, std::string_view> kListenerInfluences[] = {
    {ListenerInfluence::kActionDirective, "action-directive"},
    {ListenerInfluence::kOpenOption, "open-option"},
    {ListenerInfluence::kInfoRequest, "info-request"},
    {ListenerInfluence::kNa, "na"},
};
constexpr std::pair<SpeakerInfluence, std::string_view> kSpeakerInfluences[] = {
    {SpeakerInfluence::kOffer, "offer"},
    {SpeakerInfluence::kCommit, "commit"},
    {SpeakerInfluence::kNa, "na"},
};
constexpr std::pair<ReferenceRelation, std::string_view> kRelations[] = {
    {ReferenceRelation::kInitial, "initial"},
    {ReferenceRelation::kCoref, "coref"},
    {ReferenceRelation::kSet, "set"},
    {ReferenceRelation::kClass, "class"},
    {ReferenceRelation::kCnAnaphora, "cnanaphora"},
    {ReferenceRelation::kPredicative, "predicative"},
};

bool IsToken(std::string_view s) {
  if (s.empty()) return false;
  return std::none_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ',' ||
           c == '"';
  });
}

struct Field {
  std::string_view text;
  int column;  // 1-based
};

std::vector<Field> SplitFields(std::string_view line) {
  std::vector<Field> fields;
  size_t start = 0;
  for (std::string_view part : SplitString(line, '\t')) {
    fields.push_back({part, static_cast<int>(start) + 1});
    start += part.size() + 1;
  }
  return fields;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Corpus Run() {
    size_t pos = 0;
    int line_no = 0;
    while (pos <= text_.size()) {
      size_t nl = text_.find('\n', pos);
      std::string_view line = text_.substr(
          pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      line_ = line_no;
      ParseLine(line);
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
    return std::move(corpus_);
  }

 private:
  enum class Stage { kNone, kAfterU, kAfterPS, kAfterDU, kAfterDE };

  [[noreturn]] void Fail(int column, const std::string& message) const {
    throw CorpusSyntaxError(line_, column, message);
  }

  void ExpectCount(const std::vector<Field>& f, size_t n, std::string_view kind) {
    if (f.size() != n) {
      std::ostringstream msg;
      msg << kind << " record expects " << n << " tab-separated fields, got "
          << f.size();
      Fail(1, msg.str());
    }
  }

  int ParseNumber(const Field& f, std::string_view what) {
    auto n = ParseInt(f.text);
    if (!n) Fail(f.column, "expected integer " + std::string(what) + ", got '" +
                               std::string(f.text) + "'");
    return *n;
  }

  std::string ParseTokenField(const Field& f, std::string_view what) {
    if (!IsToken(f.text)) {
      Fail(f.column, "expected " + std::string(what) + " token, got '" +
                         std::string(f.text) + "'");
    }
    return std::string(f.text);
  }

  template <typename E, size_t N>
  E ParseEnum(const std::pair<E, std::string_view> (&table)[N], const Field& f,
              std::string_view what) {
    auto v = Lookup(table, f.text);
    if (!v) {
      Fail(f.column, "unknown " + std::string(what) + " '" + std::string(f.text) + "'");
    }
    return *v;
  }

  Utterance& CurrentUtterance(const Field& utt_field, std::string_view kind) {
    if (dialogue_ == nullptr || dialogue_->utterances.empty() ||
        stage_ == Stage::kNone) {
      Fail(1, std::string(kind) + " record before any U record");
    }
    int n = ParseNumber(utt_field, "utterance number");
    Utterance& u = dialogue_->utterances.back();
    if (n != u.number) {
      Fail(utt_field.column, std::string(kind) + " record for utterance " +
                                 std::to_string(n) + " follows U record " +
                                 std::to_string(u.number));
    }
    return u;
  }

  void ParseLine(std::string_view line) {
    std::string_view stripped = StripWhitespace(line);
    if (stripped.empty() || stripped.front() == '#') return;
    std::vector<Field> f = SplitFields(line);
    std::string_view kind = f[0].text;
    if (kind == "DIALOGUE") {
      ParseDialogue(f);
    } else if (kind == "U") {
      ParseU(f);
    } else if (kind == "PS") {
      ParsePS(f);
    } else if (kind == "DU") {
      ParseDU(f);
    } else if (kind == "DE") {
      ParseDE(f);
    } else {
      Fail(1, "unknown record kind '" + std::string(kind) + "'");
    }
  }

  void ParseDialogue(const std::vector<Field>& f) {
    if (f.size() != 6 && f.size() != 8) {
      Fail(1, "DIALOGUE record expects 6 or 8 tab-separated fields");
    }
    if (f[2].text != "PAIR") Fail(f[2].column, "expected PAIR");
    if (f[4].text != "PROBLEM") Fail(f[4].column, "expected PROBLEM");
    Dialogue d;
    d.id = ParseTokenField(f[1], "dialogue id");
    auto parts = SplitString(f[3].text, '-');
    if (parts.size() != 2 || !IsToken(parts[0]) || !IsToken(parts[1])) {
      Fail(f[3].column, "speaker pair must be <spkA>-<spkB>");
    }
    d.speaker_a = std::string(parts[0]);
    d.speaker_b = std::string(parts[1]);
    d.problem_number = ParseNumber(f[5], "problem number");
    if (d.problem_number < 1) Fail(f[5].column, "problem number must be >= 1");
    if (f.size() == 8) {
      if (f[6].text != "BUDGET") Fail(f[6].column, "expected BUDGET");
      d.budget = ParseNumber(f[7], "budget");
    }
    corpus_.dialogues.push_back(std::move(d));
    dialogue_ = &corpus_.dialogues.back();
    stage_ = Stage::kNone;
  }

  void ParseU(const std::vector<Field>& f) {
    if (dialogue_ == nullptr) Fail(1, "U record before any DIALOGUE record");
    if (f.size() < 3 || f.size() > 4) Fail(1, "U record expects 3 or 4 fields");
    Utterance u;
    u.number = ParseNumber(f[1], "utterance number");
    u.speaker = ParseTokenField(f[2], "speaker");
    if (f.size() == 4) u.text = std::string(f[3].text);
    dialogue_->utterances.push_back(std::move(u));
    stage_ = Stage::kAfterU;
  }

  void ParsePS(const std::vector<Field>& f) {
    ExpectCount(f, 7, "PS");
    Utterance& u = CurrentUtterance(f[1], "PS");
    if (stage_ != Stage::kAfterU && stage_ != Stage::kAfterPS) {
      Fail(1, "PS record must precede DU and DE records of its utterance");
    }
    PSRecord ps;
    ps.goal_label = ParseEnum(kGoalLabels, f[2], "goal label");
    ps.mode = ParseEnum(kGoalModes, f[3], "goal mode");
    ps.goal_id = ParseTokenField(f[4], "goal id");
    if (f[5].text != "none") {
      for (std::string_view item : SplitString(f[5].text, ',')) {
        ConstraintChange cc;
        auto colon = item.find(':');
        std::string_view name = item.substr(0, colon);
        auto kind = Lookup(kConstraintKinds, name);
        if (!kind) {
          Fail(f[5].column, "unknown constraint change '" + std::string(name) + "'");
        }
        cc.kind = *kind;
        if (colon != std::string_view::npos) {
          auto p = Lookup(kPresences, item.substr(colon + 1));
          if (!p) Fail(f[5].column, "constraint presence must be implicit or explicit");
          cc.presence = *p;
        }
        ps.constraint_changes.push_back(cc);
      }
    }
    ps.solution_size = ParseEnum(kSolutionSizes, f[6], "solution size");
    u.ps.push_back(std::move(ps));
    stage_ = Stage::kAfterPS;
  }

  void ParseDU(const std::vector<Field>& f) {
    ExpectCount(f, 4, "DU");
    Utterance& u = CurrentUtterance(f[1], "DU");
    if (stage_ != Stage::kAfterU && stage_ != Stage::kAfterPS) {
      Fail(1, "at most one DU record per utterance, before its DE records");
    }
    DURecord du;
    du.influence_on_listener =
        ParseEnum(kListenerInfluences, f[2], "influence on listener");
    du.influence_on_speaker =
        ParseEnum(kSpeakerInfluences, f[3], "influence on speaker");
    u.du = du;
    stage_ = Stage::kAfterDU;
  }

  std::string_view KeyedValue(const Field& f, std::string_view key) {
    if (f.text.substr(0, key.size()) != key) {
      Fail(f.column, "expected " + std::string(key) + "...");
    }
    return f.text.substr(key.size());
  }

  AttributeSet ParseAttrList(const Field& f, std::string_view key) {
    auto s = ParseAttributeSet(KeyedValue(f, key));
    if (!s) Fail(f.column, "bad attribute list in " + std::string(f.text));
    return *s;
  }

  void ParseDE(const std::vector<Field>& f) {
    ExpectCount(f, 11, "DE");
    Utterance& u = CurrentUtterance(f[1], "DE");
    MentionRecord m;
    m.mention_id = ParseTokenField(f[2], "mention id");
    m.relation = ParseEnum(kRelations, f[3], "reference relation");
    m.entity_id = ParseTokenField(f[4], "entity id");

    std::string_view links = KeyedValue(f[5], "LINK=");
    if (links != "-") {
      for (std::string_view id : SplitString(links, ',')) {
        if (!IsToken(id)) Fail(f[5].column, "bad linked entity id");
        m.linked_entities.emplace_back(id);
      }
    }

    std::string_view attrs = KeyedValue(f[6], "ATTRS=");
    if (attrs != "-") {
      for (std::string_view item : SplitString(attrs, ',')) {
        auto eq = item.find('=');
        if (eq == std::string_view::npos) Fail(f[6].column, "expected attr=value");
        auto a = ParseAttribute(item.substr(0, eq));
        if (!a) Fail(f[6].column, "unknown attribute '" + std::string(item.substr(0, eq)) + "'");
        std::string_view value = item.substr(eq + 1);
        if (!IsValidAttributeValue(*a, value)) {
          Fail(f[6].column, "value '" + std::string(value) + "' not in the " +
                                std::string(AttributeName(*a)) + " vocabulary");
        }
        if (m.attribute_values.Has(*a)) {
          Fail(f[6].column, "duplicate attribute " + std::string(AttributeName(*a)));
        }
        m.attribute_values.Set(*a, std::string(value));
      }
    }
    m.explicit_attrs = ParseAttrList(f[7], "EXPL=");
    m.inferred_attrs = ParseAttrList(f[8], "INFR=");
    std::string_view act = KeyedValue(f[9], "ACT=");
    if (!IsToken(act)) Fail(f[9].column, "bad goal id in ACT=");
    m.goal_id = std::string(act);
    m.surface = ParseQuoted(f[10]);
    u.mentions.push_back(std::move(m));
    stage_ = Stage::kAfterDE;
  }

  std::string ParseQuoted(const Field& f) {
    std::string_view s = f.text;
    if (s.size() < 2 || s.front() != '"' || s.back() != '"') {
      Fail(f.column, "surface string must be double-quoted");
    }
    std::string out;
    for (size_t i = 1; i + 1 < s.size(); ++i) {
      char c = s[i];
      if (c == '\\') {
        if (i + 2 >= s.size()) Fail(f.column + static_cast<int>(i), "dangling escape");
        out += s[++i];
      } else if (c == '"') {
        Fail(f.column + static_cast<int>(i), "unescaped quote in surface string");
      } else {
        out += c;
      }
    }
    return out;
  }

  std::string_view text_;
  Corpus corpus_;
  Dialogue* dialogue_ = nullptr;
  Stage stage_ = Stage::kNone;
  int line_ = 0;
};

std::string QuoteSurface(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string Join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string_view ToString(GoalLabel v) { return NameOf(kGoalLabels, v); }
std::string_view ToString(GoalMode v) { return NameOf(kGoalModes, v); }
std::string_view ToString(ConstraintKind v) { return NameOf(kConstraintKinds, v); }
std::string_view ToString(Presence v) { return NameOf(kPresences, v); }
std::string_view ToString(SolutionSize v) { return NameOf(kSolutionSizes, v); }
std::string_view ToString(ListenerInfluence v) { return NameOf(kListenerInfluences, v); }
std::string_view ToString(SpeakerInfluence v) { return NameOf(kSpeakerInfluences, v); }
std::string_view ToString(ReferenceRelation v) { return NameOf(kRelations, v); }

std::optional<GoalLabel> ParseGoalLabel(std::string_view s) {
  return Lookup(kGoalLabels, s);
}
std::optional<ReferenceRelation> ParseReferenceRelation(std::string_view s) {
  return Lookup(kRelations, s);
}

std::string Dialogue::SpeakerPairKey() const {
  return speaker_a < speaker_b ? speaker_a + "-" + speaker_b
                               : speaker_b + "-" + speaker_a;
}

std::string Dialogue::OtherSpeaker(std::string_view speaker) const {
  if (speaker == speaker_a) return speaker_b;
  if (speaker == speaker_b) return speaker_a;
  return {};
}

std::optional<size_t> Dialogue::FindUtterance(int number) const {
  for (size_t i = 0; i < utterances.size(); ++i) {
    if (utterances[i].number == number) return i;
  }
  return std::nullopt;
}

size_t Dialogue::MentionCount() const {
  size_t n = 0;
  for (const auto& u : utterances) n += u.mentions.size();
  return n;
}

size_t Corpus::MentionCount() const {
  size_t n = 0;
  for (const auto& d : dialogues) n += d.MentionCount();
  return n;
}

CorpusSyntaxError::CorpusSyntaxError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {
std::string ViolationSummary(const std::vector<Violation>& v) {
  std::string out = std::to_string(v.size()) + " invariant violation(s)";
  if (!v.empty()) out += "; first: " + FormatViolation(v.front());
  return out;
}
}  // namespace

CorpusInvariantError::CorpusInvariantError(std::vector<Violation> violations)
    : std::runtime_error(ViolationSummary(violations)),
      violations_(std::move(violations)) {}

std::string FormatViolation(const Violation& v) {
  std::ostringstream out;
  out << v.dialogue_id << ":" << v.utterance << ":" << v.record_id << ": ["
      << v.rule << "] " << v.message;
  return out.str();
}

Corpus ParseCorpusUnchecked(std::string_view text) { return Parser(text).Run(); }

Corpus ParseCorpus(std::string_view text) {
  Corpus c = ParseCorpusUnchecked(text);
  auto violations = Validate(c);
  if (!violations.empty()) throw CorpusInvariantError(std::move(violations));
  return c;
}

std::string SerializeCorpus(const Corpus& corpus) {
  std::ostringstream out;
  out << "# odsel annotated dialogue corpus\n";
  for (const Dialogue& d : corpus.dialogues) {
    out << "\nDIALOGUE\t" << d.id << "\tPAIR\t" << d.speaker_a << '-' << d.speaker_b
        << "\tPROBLEM\t" << d.problem_number;
    if (d.budget) out << "\tBUDGET\t" << *d.budget;
    out << '\n';
    for (const Utterance& u : d.utterances) {
      out << "U\t" << u.number << '\t' << u.speaker << '\t' << u.text << '\n';
      for (const PSRecord& ps : u.ps) {
        out << "PS\t" << u.number << '\t' << ToString(ps.goal_label) << '\t'
            << ToString(ps.mode) << '\t' << ps.goal_id << '\t';
        if (ps.constraint_changes.empty()) {
          out << "none";
        } else {
          std::vector<std::string> items;
          for (const auto& cc : ps.constraint_changes) {
            std::string item(ToString(cc.kind));
            if (cc.presence) item += ":" + std::string(ToString(*cc.presence));
            items.push_back(std::move(item));
          }
          out << Join(items, ',');
        }
        out << '\t' << ToString(ps.solution_size) << '\n';
      }
      if (u.du) {
        out << "DU\t" << u.number << '\t' << ToString(u.du->influence_on_listener)
            << '\t' << ToString(u.du->influence_on_speaker) << '\n';
      }
      for (const MentionRecord& m : u.mentions) {
        std::vector<std::string> attrs;
        for (Attribute a : kAllAttributes) {
          if (const auto& v = m.attribute_values.Get(a)) {
            attrs.push_back(std::string(AttributeName(a)) + "=" + *v);
          }
        }
        out << "DE\t" << u.number << '\t' << m.mention_id << '\t'
            << ToString(m.relation) << '\t' << m.entity_id << "\tLINK="
            << (m.linked_entities.empty() ? "-" : Join(m.linked_entities, ','))
            << "\tATTRS=" << (attrs.empty() ? "-" : Join(attrs, ','))
            << "\tEXPL=" << FormatAttributeSet(m.explicit_attrs)
            << "\tINFR=" << FormatAttributeSet(m.inferred_attrs)
            << "\tACT=" << m.goal_id << '\t' << QuoteSurface(m.surface) << '\n';
      }
    }
  }
  return out.str();
}

std::vector<Violation> Validate(const Corpus& corpus) {
  std::vector<Violation> out;
  std::set<std::string> dialogue_ids;
  for (const Dialogue& d : corpus.dialogues) {
    auto add = [&](int utt, std::string record, std::string rule, std::string msg) {
      out.push_back({d.id, utt, std::move(record), std::move(rule), std::move(msg)});
    };
    if (!dialogue_ids.insert(d.id).second) {
      add(0, d.id, "unique-dialogue-id", "dialogue id appears more than once");
    }
    if (d.speaker_a == d.speaker_b) {
      add(0, d.id, "two-speakers", "speaker pair must name two distinct speakers");
    }

    std::set<std::string> introduced_goals;
    std::set<std::string> ps_goals;
    std::set<std::string> seen_entities;
    std::set<std::string> mention_ids;
    std::optional<int> prev_number;
    for (const Utterance& u : d.utterances) {
      const std::string utt_id = std::to_string(u.number);
      if (prev_number && u.number <= *prev_number) {
        add(u.number, utt_id, "increasing-utterance-numbers",
            "utterance " + utt_id + " does not follow " + std::to_string(*prev_number));
      }
      prev_number = u.number;
      if (u.speaker != d.speaker_a && u.speaker != d.speaker_b) {
        add(u.number, utt_id, "speaker-in-pair",
            "speaker " + u.speaker + " is not in pair " + d.speaker_a + "-" + d.speaker_b);
      }
      for (const PSRecord& ps : u.ps) {
        ps_goals.insert(ps.goal_id);
        if (ps.mode == GoalMode::kIntroduce) {
          introduced_goals.insert(ps.goal_id);
        } else if (!introduced_goals.count(ps.goal_id)) {
          add(u.number, ps.goal_id, "continue-after-introduce",
              "goal " + ps.goal_id + " is continued but was never introduced");
        }
      }
      for (const MentionRecord& m : u.mentions) {
        if (!mention_ids.insert(m.mention_id).second) {
          add(u.number, m.mention_id, "unique-mention-id", "mention id reused");
        }
        const bool seen = seen_entities.count(m.entity_id) > 0;
        if (m.relation == ReferenceRelation::kInitial && seen) {
          add(u.number, m.mention_id, "initial-is-fresh",
              "initial mention of already seen entity " + m.entity_id);
        }
        if (m.relation == ReferenceRelation::kCoref && !seen) {
          add(u.number, m.mention_id, "coref-is-seen",
              "coref mention of unseen entity " + m.entity_id);
        }
        AttributeSet overlap = m.explicit_attrs.Intersect(m.inferred_attrs);
        if (!overlap.empty()) {
          add(u.number, m.mention_id, "explicit-inferred-disjoint",
              "attributes both explicit and inferred: " + FormatAttributeSet(overlap));
        }
        for (Attribute a : kAllAttributes) {
          const bool listed =
              m.explicit_attrs.Contains(a) || m.inferred_attrs.Contains(a);
          if (listed && !m.attribute_values.Has(a)) {
            add(u.number, m.mention_id, "listed-attribute-has-value",
                std::string(AttributeName(a)) + " is listed but has no value");
          }
        }
        // Goals introduced earlier in this same utterance count.
        if (!ps_goals.count(m.goal_id)) {
          add(u.number, m.mention_id, "goal-precedes-mention",
              "goal " + m.goal_id + " has no PS record at or before this utterance");
        }
        seen_entities.insert(m.entity_id);
      }
    }
  }
  return out;
}

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace odsel
