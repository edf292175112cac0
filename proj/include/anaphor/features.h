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

// Surface features of mentions: the sparse string indicators used by the
// kernel SVM, the 20 binary features fed to the LSTM, and the generalized
// context sequence the LSTM reads.

#ifndef ANAPHOR_FEATURES_H_
#define ANAPHOR_FEATURES_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "anaphor/corpus.h"

namespace anaphor {

// String, head and containment relations between a mention and the other
// mentions of its document. Strings are lowercased. "prev" variants only
// consider mentions that precede this one in document order.
struct MatchFlags {
  bool string_match_text = false;
  bool string_match_prev = false;
  bool head_match_text = false;
  bool head_match_prev = false;
  // Another mention's token string occurs contiguously inside this one.
  bool contains_other = false;
  bool contains_prev = false;
  // This mention's token string occurs contiguously inside another one.
  bool contained_in_other = false;
  bool contained_in_prev = false;
  // Another mention's span strictly covers this span.
  bool embedded_in_other = false;

  bool operator==(const MatchFlags &) const = default;
};

// Flags for every mention of `doc`, indexed like doc.mentions. Uses hashing
// over token substrings, so it is linear in the total number of mention
// substrings rather than quadratic in the number of mentions.
std::vector<MatchFlags> ComputeMatchFlags(const Document &doc);

// Set of binary indicator features (`name=value` or bare `name`), kept
// sorted and free of duplicates.
class SparseFeatureVector {
 public:
  SparseFeatureVector() = default;
  SparseFeatureVector(std::initializer_list<std::string> features);

  void Add(std::string feature);
  bool Has(std::string_view feature) const;

  const std::vector<std::string> &entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  bool operator==(const SparseFeatureVector &) const = default;

 private:
  std::vector<std::string> entries_;
};

// Bare flag names emitted by ExtractSvmFeatures.
inline constexpr std::string_view kStringMatch = "str_match";
inline constexpr std::string_view kStringMatchPrev = "str_match_prev";
inline constexpr std::string_view kHeadMatch = "head_match";
inline constexpr std::string_view kHeadMatchPrev = "head_match_prev";
inline constexpr std::string_view kContainsOther = "contains_other";
inline constexpr std::string_view kContainsPrev = "contains_prev";
inline constexpr std::string_view kContainedInOther = "contained_in_other";
inline constexpr std::string_view kContainedInPrev = "contained_in_prev";

SparseFeatureVector ExtractSvmFeatures(const Document &doc,
                                       std::size_t mention,
                                       const MatchFlags &flags);

// Feature vectors for all mentions of `doc`.
std::vector<SparseFeatureVector> ExtractSvmFeatures(const Document &doc);

inline constexpr std::size_t kSurfaceDim = 20;
inline constexpr std::size_t kSurfaceTypeSlots = 11;

// Slots 0-10: one-hot mention type (proper, nominal-definite,
// nominal-indefinite, he, i, it, she, they, we, you, other). Slots 11-19: the
// nine MatchFlags in declaration order.
struct SurfaceFeatures {
  std::array<std::uint8_t, kSurfaceDim> values{};

  bool operator==(const SurfaceFeatures &) const = default;
};

std::size_t SurfaceTypeSlot(const MentionType &type);

SurfaceFeatures ExtractSurfaceFeatures(const Document &doc,
                                       std::size_t mention,
                                       const MatchFlags &flags);

inline constexpr std::string_view kMentionPlaceholder = "<MENTION>";
inline constexpr std::string_view kMentionSeparator = "<SEP_MENTION>";
inline constexpr std::string_view kHeadSeparator = "<SEP_HEAD>";
inline constexpr std::size_t kContextWindow = 10;

// [window before] <MENTION> [window after] <SEP_MENTION> [mention tokens]
// <SEP_HEAD> [head]. Lowercased surfaces; windows cross sentence boundaries
// but stop at the document edges.
using ContextSequence = std::vector<std::string>;

ContextSequence BuildContextSequence(const Document &doc, std::size_t mention,
                                     std::size_t window = kContextWindow);

// Line format for offline inspection: `label<TAB>feat1<TAB>feat2...`, label
// being +1 (anaphoric) or -1.
void WriteFeatureLine(std::ostream &out, Label label,
                      const SparseFeatureVector &features);
bool ReadFeatureLine(std::istream &in, Label &label,
                     SparseFeatureVector &features);

}  // namespace anaphor

#endif  // ANAPHOR_FEATURES_H_
