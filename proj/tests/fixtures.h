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

// Small CoNLL-2012 documents shared by the tests.

#ifndef ANAPHOR_TESTS_FIXTURES_H_
#define ANAPHOR_TESTS_FIXTURES_H_

#include <sstream>
#include <string>
#include <vector>

#include "anaphor/corpus.h"

namespace anaphor::fixtures {

// "Plato was a philosopher in Classical Greece. This philosopher is the
// founder of the Academy in Athens. Plato died at the age of 81."
inline const char kPlato[] =
    "#begin document (plato); part 000\n"
    "plato 0 0 Plato NNP (1)\n"
    "plato 0 1 was VBD -\n"
    "plato 0 2 a DT -\n"
    "plato 0 3 philosopher NN -\n"
    "plato 0 4 in IN -\n"
    "plato 0 5 Classical NNP -\n"
    "plato 0 6 Greece NNP -\n"
    "plato 0 7 . . -\n"
    "\n"
    "plato 0 0 This DT (1\n"
    "plato 0 1 philosopher NN 1)\n"
    "plato 0 2 is VBZ -\n"
    "plato 0 3 the DT -\n"
    "plato 0 4 founder NN -\n"
    "plato 0 5 of IN -\n"
    "plato 0 6 the DT -\n"
    "plato 0 7 Academy NNP -\n"
    "plato 0 8 in IN -\n"
    "plato 0 9 Athens NNP -\n"
    "plato 0 10 . . -\n"
    "\n"
    "plato 0 0 Plato NNP (1)\n"
    "plato 0 1 died VBD -\n"
    "plato 0 2 at IN -\n"
    "plato 0 3 the DT -\n"
    "plato 0 4 age NN -\n"
    "plato 0 5 of IN -\n"
    "plato 0 6 81 CD -\n"
    "plato 0 7 . . -\n"
    "\n"
    "#end document\n";

// "I walked into the room. The windows were all open."
inline const char kWindows[] =
    "#begin document (windows); part 000\n"
    "windows 0 0 I PRP (1)\n"
    "windows 0 1 walked VBD -\n"
    "windows 0 2 into IN -\n"
    "windows 0 3 the DT (2\n"
    "windows 0 4 room NN 2)\n"
    "windows 0 5 . . -\n"
    "\n"
    "windows 0 0 The DT (3\n"
    "windows 0 1 windows NNS 3)\n"
    "windows 0 2 were VBD -\n"
    "windows 0 3 all DT -\n"
    "windows 0 4 open JJ -\n"
    "windows 0 5 . . -\n"
    "\n"
    "#end document\n";

// "[the [Academy] in [Athens]] was founded ."
inline const char kNested[] =
    "#begin document (nested); part 000\n"
    "nested 0 0 the DT (4\n"
    "nested 0 1 Academy NNP (5)\n"
    "nested 0 2 in IN -\n"
    "nested 0 3 Athens NNP 4)|(6)\n"
    "nested 0 4 was VBD -\n"
    "nested 0 5 founded VBN -\n"
    "nested 0 6 . . -\n"
    "\n"
    "#end document\n";

inline std::vector<Document> Parse(const std::string &text) {
  std::istringstream in(text);
  return ParseConll(in);
}

}  // namespace anaphor::fixtures

#endif  // ANAPHOR_TESTS_FIXTURES_H_
