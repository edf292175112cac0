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

// Recall / precision / F1 per class and per mention-type bucket.

#ifndef ANAPHOR_EVALUATION_H_
#define ANAPHOR_EVALUATION_H_

#include <array>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "anaphor/corpus.h"

namespace anaphor {

// Confusion counts for one class. Percentages use 0/0 -> 0 and F1 = 0 when
// P + R = 0.
struct ClassCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  double Recall() const;
  double Precision() const;
  double F1() const;

  ClassCounts &operator+=(const ClassCounts &o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const ClassCounts &) const = default;
};

// Percentage numerator/denominator rounded half-up to two decimals, computed
// exactly in integers. E.g. FormatPercent(2, 3) == "66.67".
std::string FormatPercent(std::size_t numerator, std::size_t denominator);

std::string FormatRecall(const ClassCounts &c);
std::string FormatPrecision(const ClassCounts &c);
std::string FormatF1(const ClassCounts &c);

enum class TypeBucket { kProperName, kCommonNoun, kPronoun, kOther };
inline constexpr std::size_t kNumBuckets = 4;

TypeBucket BucketOf(MentionKind kind);
std::string_view BucketName(TypeBucket bucket);
TypeBucket ParseBucket(std::string_view name);

struct EvalReport {
  ClassCounts non_anaphoric;
  ClassCounts anaphoric;
  // Anaphoric-class counts per bucket, indexed by TypeBucket.
  std::array<ClassCounts, kNumBuckets> by_bucket{};

  bool operator==(const EvalReport &) const = default;
};

struct ClassScores {
  ClassCounts non_anaphoric;
  ClassCounts anaphoric;
};

// Throws std::invalid_argument when the lists differ in length.
ClassScores Score(std::span<const Label> gold, std::span<const Label> predicted);

// Buckets come from `buckets`, aligned with gold and predicted.
EvalReport ScoreByType(std::span<const Label> gold,
                       std::span<const Label> predicted,
                       std::span<const TypeBucket> buckets);

// Two aligned plain-text tables: the two-class table and the per-bucket
// anaphoric table.
void WriteReportText(const EvalReport &report, std::ostream &out);

// Rows `name tp fp fn R P F1`, tab separated, with a header line.
void WriteReportTsv(const EvalReport &report, std::ostream &out);
EvalReport ReadReportTsv(std::istream &in);

}  // namespace anaphor

#endif  // ANAPHOR_EVALUATION_H_
