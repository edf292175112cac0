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

// Generator for small synthetic coreference corpora.
//
// Every entity has a head word of its own within a document and pronouns
// only ever re-mention an entity, so the gold label of a mention is exactly
//
//   Anaphoric  <=>  mention is a pronoun  or  head_match_prev
//
// which makes the corpus separable by the surface features.

#ifndef ANAPHOR_SYNTHETIC_H_
#define ANAPHOR_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "anaphor/corpus.h"
#include "anaphor/features.h"

namespace anaphor {

struct SyntheticOptions {
  std::size_t documents = 200;
  std::size_t sentences = 20;  // per document
  std::size_t entities = 12;   // candidate entities per document
  std::uint64_t seed = 2017;
};

std::vector<Document> GenerateSyntheticCorpus(const SyntheticOptions &options = {});

// The labelling rule the generator guarantees.
Label SyntheticRule(const Mention &mention, const MatchFlags &flags);

}  // namespace anaphor

#endif  // ANAPHOR_SYNTHETIC_H_
