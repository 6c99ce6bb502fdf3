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

#ifndef ODSEL_ATTRIBUTES_H_
#define ODSEL_ATTRIBUTES_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace odsel {

// The five attributes a furniture discourse entity can carry.
enum class Attribute : uint8_t { kType, kColor, kOwner, kPrice, kQuantity };

inline constexpr std::array<Attribute, 5> kAllAttributes = {
    Attribute::kType, Attribute::kColor, Attribute::kOwner, Attribute::kPrice,
    Attribute::kQuantity};

std::string_view AttributeName(Attribute a);
std::optional<Attribute> ParseAttribute(std::string_view name);

// Distinguished token for an attribute value that is present but unknown.
inline constexpr std::string_view kUnknownValue = "unk";

// A small bitset over Attribute.
class AttributeSet {
 public:
  constexpr AttributeSet() = default;
  constexpr AttributeSet(std::initializer_list<Attribute> attrs) {
    for (Attribute a : attrs) Insert(a);
  }

  constexpr void Insert(Attribute a) { bits_ |= Bit(a); }
  constexpr void Erase(Attribute a) { bits_ &= static_cast<uint8_t>(~Bit(a)); }
  constexpr bool Contains(Attribute a) const { return (bits_ & Bit(a)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const {
    int n = 0;
    for (uint8_t b = bits_; b != 0; b &= static_cast<uint8_t>(b - 1)) ++n;
    return n;
  }
  constexpr uint8_t bits() const { return bits_; }

  constexpr AttributeSet Union(AttributeSet o) const {
    return FromBits(bits_ | o.bits_);
  }
  constexpr AttributeSet Intersect(AttributeSet o) const {
    return FromBits(bits_ & o.bits_);
  }
  constexpr AttributeSet Minus(AttributeSet o) const {
    return FromBits(bits_ & static_cast<uint8_t>(~o.bits_));
  }
  static constexpr AttributeSet FromBits(unsigned bits) {
    AttributeSet s;
    s.bits_ = static_cast<uint8_t>(bits & 0x1f);
    return s;
  }

  friend constexpr bool operator==(AttributeSet, AttributeSet) = default;

 private:
  static constexpr uint8_t Bit(Attribute a) {
    return static_cast<uint8_t>(1u << static_cast<unsigned>(a));
  }
  uint8_t bits_ = 0;
};

// "type,color" style rendering in canonical attribute order; "-" when empty.
std::string FormatAttributeSet(AttributeSet s);
// Inverse of FormatAttributeSet. Returns nullopt on an unknown name.
std::optional<AttributeSet> ParseAttributeSet(std::string_view text);

// Partial map from attribute to value token. Values are kept as the tokens
// that appear in corpus files ("yellow", "150", "self", "unk").
class AttributeValues {
 public:
  const std::optional<std::string>& Get(Attribute a) const {
    return values_[Index(a)];
  }
  void Set(Attribute a, std::string value) { values_[Index(a)] = std::move(value); }
  void Clear(Attribute a) { values_[Index(a)].reset(); }
  bool Has(Attribute a) const { return values_[Index(a)].has_value(); }
  // True when a value is present and is not the unknown token.
  bool Known(Attribute a) const {
    return Has(a) && *values_[Index(a)] != kUnknownValue;
  }
  bool empty() const {
    for (const auto& v : values_)
      if (v) return false;
    return true;
  }

  friend bool operator==(const AttributeValues&, const AttributeValues&) = default;

 private:
  static size_t Index(Attribute a) { return static_cast<size_t>(a); }
  std::array<std::optional<std::string>, 5> values_;
};

// Value vocabularies for the symbolic attributes.
bool IsValidAttributeValue(Attribute a, std::string_view value);

}  // namespace odsel

#endif  // ODSEL_ATTRIBUTES_H_
