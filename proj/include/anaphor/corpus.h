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

// Documents, mentions and coreference chains read from CoNLL-2012 column
// files, together with the gold discourse-old (anaphoric) labels derived from
// the chains.

#ifndef ANAPHOR_CORPUS_H_
#define ANAPHOR_CORPUS_H_

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "anaphor/errors.h"

namespace anaphor {

struct Token {
  std::string surface;
  std::string lemma;  // lowercased
  std::string pos;
  std::size_t sentence_index = 0;
  std::size_t index_in_sentence = 0;
  std::size_t doc_index = 0;

  bool operator==(const Token &) const = default;
};

// Token range [start, end) in document coordinates. All tokens of a span
// belong to one sentence.
struct MentionSpan {
  std::size_t sentence_index = 0;
  std::size_t start = 0;
  std::size_t end = 0;
  std::size_t head = 0;

  std::size_t size() const { return end - start; }
  bool operator==(const MentionSpan &) const = default;
};

enum class MentionKind {
  kProper,
  kNominalDefinite,
  kNominalIndefinite,
  kPronoun,
  kList,
  kOther,
};

// Fine-grained mention type. For pronouns, `word` holds the lowercased
// surface form; it is empty otherwise.
struct MentionType {
  MentionKind kind = MentionKind::kOther;
  std::string word;

  bool operator==(const MentionType &) const = default;
};

enum class Label { kNonAnaphoric, kAnaphoric };

struct Mention {
  MentionSpan span;
  std::optional<int> chain_id;
  MentionType type;
  Label gold_label = Label::kNonAnaphoric;

  bool operator==(const Mention &) const = default;
};

struct Document {
  std::string doc_id;
  std::string part;
  std::vector<Token> tokens;
  // Sorted by (span.start, span.end).
  std::vector<Mention> mentions;
  // chain id -> mention indices in document order.
  std::map<int, std::vector<std::size_t>> chains;

  std::size_t num_sentences() const {
    return tokens.empty() ? 0 : tokens.back().sentence_index + 1;
  }
};

// Canonical mention order: ascending start, then shorter span first.
bool MentionPrecedes(const MentionSpan &a, const MentionSpan &b);

std::string Lowercase(std::string_view s);

// The closed inventory of pronoun forms recognized by ClassifyMentionType.
bool IsPronounWord(std::string_view lowercased);

// Reads every document in a CoNLL-2012 column stream. Mentions come from the
// coreference column; heads, types and labels are filled in.
std::vector<Document> ParseConll(std::istream &in);

// Writes documents back in CoNLL-2012 columns. Parsing the output yields the
// same tokens, spans and chain ids.
void WriteConll(const std::vector<Document> &docs, std::ostream &out);

// Rightmost nominal (POS NN* or PRP*) before the first IN/TO token of the
// span; else the rightmost nominal overall; else the last token.
std::size_t AssignHead(const MentionSpan &span, const Document &doc);

MentionType ClassifyMentionType(const MentionSpan &span, const Document &doc);

// Marks each chain's first member (in document order) NonAnaphoric and every
// other chain member Anaphoric. Chainless mentions are NonAnaphoric.
void DeriveLabels(Document &doc);

// Sorts mentions, rebuilds chains and recomputes types and labels. Heads are
// kept; callers set them with AssignHead or from a sidecar before calling.
void FinalizeDocument(Document &doc);

// Extra candidate mentions from a sidecar TSV (doc_id, part, sentence_index,
// start, end, head; document-level token indices, `#` comments allowed).
// Spans already present keep their chain and adopt the sidecar head; new
// spans are added as chainless candidates.
void MergeSidecarMentions(std::vector<Document> &docs, std::istream &in);

}  // namespace anaphor

#endif  // ANAPHOR_CORPUS_H_
