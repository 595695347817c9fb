//
// Copyright 2026 The gunlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "gunlearn/errors.h"

namespace gunlearn {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
      line_(line) {}

TrainingError::TrainingError(const std::string& what, double gradient_norm)
    : Error(what + " (final gradient norm " + std::to_string(gradient_norm) +
            ")"),
      gradient_norm_(gradient_norm) {}

ShortfallError::ShortfallError(const std::string& what, std::size_t achievable)
    : Error(what + " (achievable: " + std::to_string(achievable) + ")"),
      achievable_(achievable) {}

}  // namespace gunlearn
