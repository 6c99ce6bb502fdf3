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

// The odsel command line: validate, extract, train, predict, experiment,
// synth and metrics.

#ifndef ODSEL_TOOLS_CLI_H_
#define ODSEL_TOOLS_CLI_H_

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "odsel/features.h"
#include "odsel/focus.h"

namespace odsel::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kViolations = 1;
inline constexpr int kError = 2;

// One experiment row: a feature-group selection with its focus model, or
// the majority baseline.
struct ExperimentConfig {
  std::string name;
  bool majority = false;
  GroupSet groups;
  std::optional<FocusModel> focus;
};

// "majority", "<name>=majority" or "<name>=<groups>[:<focus>]". Throws
// std::invalid_argument, including when CONTRAST is selected without a
// focus model and `default_focus` is empty.
ExperimentConfig ParseExperimentConfig(std::string_view text,
                                       std::optional<FocusModel> default_focus);

// Rows used when `experiment` gets no --config.
std::vector<std::string> DefaultExperimentConfigs();

// Runs one command line (args exclude the program name). Output goes to
// `out`, diagnostics to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace odsel::cli

#endif  // ODSEL_TOOLS_CLI_H_
