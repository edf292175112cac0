// Copyright 2026 The Anaphor Authors.
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

#ifndef ANAPHOR_ERRORS_H_
#define ANAPHOR_ERRORS_H_

#include <stdexcept>

namespace anaphor {

// Malformed corpus, sidecar or feature-line input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed embedding text.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable, foreign or wrong-version model files.
class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Degenerate training data or diverging optimization.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace anaphor

#endif  // ANAPHOR_ERRORS_H_
