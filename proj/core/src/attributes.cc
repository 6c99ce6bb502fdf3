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

#include "odsel/attributes.h"

#include <algorithm>
#include <charconv>

#include "text_util.h"

namespace odsel {

std::string_view AttributeName(Attribute a) {
  switch (a) {
    case Attribute::kType: return "type";
    case Attribute::kColor: return "color";
    case Attribute::kOwner: return "owner";
    case Attribute::kPrice: return "price";
    case Attribute::kQuantity: return "quantity";
  }
  return "?";
}

std::optional<Attribute> ParseAttribute(std::string_view name) {
  for (Attribute a : kAllAttributes) {
    if (AttributeName(a) == name) return a;
  }
  return std::nullopt;
}

std::string FormatAttributeSet(AttributeSet s) {
  if (s.empty()) return "-";
  std::string out;
  for (Attribute a : kAllAttributes) {
    if (!s.Contains(a)) continue;
    if (!out.empty()) out += ',';
    out += AttributeName(a);
  }
  return out;
}

std::optional<AttributeSet> ParseAttributeSet(std::string_view text) {
  AttributeSet s;
  if (text == "-") return s;
  for (std::string_view part : SplitString(text, ',')) {
    auto a = ParseAttribute(part);
    if (!a) return std::nullopt;
    s.Insert(*a);
  }
  return s;
}

bool IsValidAttributeValue(Attribute a, std::string_view value) {
  if (value == kUnknownValue) return true;
  static constexpr std::string_view kTypes[] = {"sofa", "chair", "table",
                                                "rug",  "lamp",  "superordinate"};
  static constexpr std::string_view kColors[] = {"red", "blue", "green", "yellow"};
  static constexpr std::string_view kOwners[] = {"self", "other", "ours"};
  switch (a) {
    case Attribute::kType:
      return std::find(std::begin(kTypes), std::end(kTypes), value) != std::end(kTypes);
    case Attribute::kColor:
      return std::find(std::begin(kColors), std::end(kColors), value) != std::end(kColors);
    case Attribute::kOwner:
      return std::find(std::begin(kOwners), std::end(kOwners), value) != std::end(kOwners);
    case Attribute::kPrice: {
      auto n = ParseInt(value);
      return n.has_value() && *n >= 0;
    }
    case Attribute::kQuantity: {
      auto n = ParseInt(value);
      return n.has_value() && *n >= 0 && *n <= 4;
    }
  }
  return false;
}

}  // namespace odsel
