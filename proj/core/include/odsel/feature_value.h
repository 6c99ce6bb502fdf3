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

#ifndef ODSEL_FEATURE_VALUE_H_
#define ODSEL_FEATURE_VALUE_H_

#include <string>
#include <string_view>
#include <variant>

namespace odsel {

// A single feature value: na, a boolean (yes/no), a symbol, or a number.
class FeatureValue {
 public:
  FeatureValue() = default;

  static FeatureValue Na() { return FeatureValue(); }
  static FeatureValue Bool(bool b) { return FeatureValue(Rep(b)); }
  static FeatureValue Symbol(std::string s) { return FeatureValue(Rep(std::move(s))); }
  static FeatureValue Number(double x) { return FeatureValue(Rep(x)); }

  bool is_na() const { return std::holds_alternative<std::monostate>(rep_); }
  bool is_bool() const { return std::holds_alternative<bool>(rep_); }
  bool is_symbol() const { return std::holds_alternative<std::string>(rep_); }
  bool is_number() const { return std::holds_alternative<double>(rep_); }

  bool as_bool() const { return std::get<bool>(rep_); }
  const std::string& as_symbol() const { return std::get<std::string>(rep_); }
  double as_number() const { return std::get<double>(rep_); }

  // "na", "yes"/"no", the symbol, or the shortest decimal for numbers.
  std::string ToString() const;

  friend bool operator==(const FeatureValue&, const FeatureValue&) = default;
  // Total order used for deterministic candidate enumeration.
  friend bool operator<(const FeatureValue& a, const FeatureValue& b) {
    return a.rep_ < b.rep_;
  }

 private:
  using Rep = std::variant<std::monostate, bool, std::string, double>;
  explicit FeatureValue(Rep r) : rep_(std::move(r)) {}
  Rep rep_;
};

}  // namespace odsel

#endif  // ODSEL_FEATURE_VALUE_H_
