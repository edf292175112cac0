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

#include "anaphor/evaluation.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <stdexcept>

#include "fixtures.h"

namespace anaphor {
namespace {

constexpr Label A = Label::kAnaphoric;
constexpr Label N = Label::kNonAnaphoric;

TEST(Score, PerfectPredictions) {
  const std::vector<Label> gold = {A, N, N, A, N};
  const ClassScores s = Score(gold, gold);
  for (const ClassCounts &c : {s.anaphoric, s.non_anaphoric}) {
    EXPECT_EQ(FormatRecall(c), "100.00");
    EXPECT_EQ(FormatPrecision(c), "100.00");
    EXPECT_EQ(FormatF1(c), "100.00");
  }
}

TEST(Score, ArithmeticFixture) {
  // Anaphoric tp=3, fp=1, fn=2, plus two true negatives.
  const std::vector<Label> gold = {A, A, A, N, A, A, N, N};
  const std::vector<Label> pred = {A, A, A, A, N, N, N, N};
  const ClassScores s = Score(gold, pred);
  EXPECT_EQ(s.anaphoric, (ClassCounts{3, 1, 2}));
  EXPECT_EQ(FormatPrecision(s.anaphoric), "75.00");
  EXPECT_EQ(FormatRecall(s.anaphoric), "60.00");
  EXPECT_EQ(FormatF1(s.anaphoric), "66.67");
  EXPECT_NEAR(s.anaphoric.F1(), 200.0 / 3.0, 1e-12);
  EXPECT_EQ(s.non_anaphoric, (ClassCounts{2, 2, 1}));
}

TEST(Score, MatchesBruteForceTally) {
  std::mt19937_64 rng(200);
  std::bernoulli_distribution coin(0.4);
  std::vector<Label> gold, pred;
  for (int i = 0; i < 200; ++i) {
    gold.push_back(coin(rng) ? A : N);
    pred.push_back(coin(rng) ? A : N);
  }
  std::size_t table[2][2] = {};  // [gold][pred], 1 = anaphoric
  for (std::size_t i = 0; i < gold.size(); ++i) ++table[gold[i] == A][pred[i] == A];
  const ClassScores s = Score(gold, pred);
  EXPECT_EQ(s.anaphoric, (ClassCounts{table[1][1], table[0][1], table[1][0]}));
  EXPECT_EQ(s.non_anaphoric, (ClassCounts{table[0][0], table[1][0], table[0][1]}));
  const double p = 100.0 * table[1][1] / (table[1][1] + table[0][1]);
  const double r = 100.0 * table[1][1] / (table[1][1] + table[1][0]);
  EXPECT_NEAR(s.anaphoric.Precision(), p, 1e-9);
  EXPECT_NEAR(s.anaphoric.Recall(), r, 1e-9);
  EXPECT_NEAR(s.anaphoric.F1(), 2 * p * r / (p + r), 1e-9);
}

TEST(Score, LengthMismatchIsAnError) {
  const std::vector<Label> gold = {A, N};
  const std::vector<Label> pred = {A};
  EXPECT_THROW(Score(gold, pred), std::invalid_argument);
}

TEST(Score, ZeroDenominators) {
  const ClassCounts empty;
  EXPECT_EQ(empty.Recall(), 0.0);
  EXPECT_EQ(empty.Precision(), 0.0);
  EXPECT_EQ(empty.F1(), 0.0);
  EXPECT_EQ(FormatF1(empty), "0.00");
  EXPECT_EQ(FormatF1(ClassCounts{0, 3, 4}), "0.00");
}

TEST(Score, Invariants) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> count(0, 40);
  for (int i = 0; i < 200; ++i) {
    const ClassCounts c{count(rng), count(rng), count(rng)};
    const ClassCounts swapped{c.tp, c.fn, c.fp};
    EXPECT_EQ(c.F1(), swapped.F1());
    EXPECT_EQ(c.Precision(), swapped.Recall());
  }
}

TEST(FormatPercent, RoundsHalfUp) {
  EXPECT_EQ(FormatPercent(2, 3), "66.67");
  EXPECT_EQ(FormatPercent(1, 3), "33.33");
  EXPECT_EQ(FormatPercent(1, 8), "12.50");
  // 1/16 = 6.25% exactly; 1/1600 = 0.0625% rounds up to 0.06.
  EXPECT_EQ(FormatPercent(1, 16), "6.25");
  EXPECT_EQ(FormatPercent(1, 1600), "0.06");
  // 1/800 = 0.125% is an exact half and rounds up.
  EXPECT_EQ(FormatPercent(1, 800), "0.13");
  EXPECT_EQ(FormatPercent(0, 5), "0.00");
  EXPECT_EQ(FormatPercent(5, 5), "100.00");
}

TEST(BucketOf, MapsEveryKind) {
  EXPECT_EQ(BucketOf(MentionKind::kProper), TypeBucket::kProperName);
  EXPECT_EQ(BucketOf(MentionKind::kNominalDefinite), TypeBucket::kCommonNoun);
  EXPECT_EQ(BucketOf(MentionKind::kNominalIndefinite), TypeBucket::kCommonNoun);
  EXPECT_EQ(BucketOf(MentionKind::kPronoun), TypeBucket::kPronoun);
  EXPECT_EQ(BucketOf(MentionKind::kList), TypeBucket::kOther);
  EXPECT_EQ(BucketOf(MentionKind::kOther), TypeBucket::kOther);
  for (std::size_t k = 0; k < kNumBuckets; ++k) {
    const auto b = static_cast<TypeBucket>(k);
    EXPECT_EQ(ParseBucket(BucketName(b)), b);
  }
  EXPECT_THROW(ParseBucket("Nominal"), std::invalid_argument);
}

TEST(BucketOf, FixtureCountsMatchHandTally) {
  // Plato, This philosopher, Plato; I, the room, The windows; the Academy in
  // Athens, Academy, Athens.
  std::array<std::size_t, kNumBuckets> counts{};
  for (const char *text : {fixtures::kPlato, fixtures::kWindows, fixtures::kNested})
    for (const Mention &m : fixtures::Parse(text)[0].mentions)
      ++counts[static_cast<std::size_t>(BucketOf(m.type.kind))];
  EXPECT_EQ(counts, (std::array<std::size_t, kNumBuckets>{5, 3, 1, 0}));
}

TEST(ScoreByType, PronounOnlyCorpus) {
  const std::vector<Label> gold = {A, N, A};
  const std::vector<Label> pred = {A, A, N};
  const std::vector<TypeBucket> buckets(3, TypeBucket::kPronoun);
  const EvalReport r = ScoreByType(gold, pred, buckets);
  EXPECT_EQ(r.by_bucket[2], (ClassCounts{1, 1, 1}));
  for (std::size_t k : {0u, 1u, 3u}) {
    EXPECT_EQ(r.by_bucket[k], ClassCounts{});
    EXPECT_EQ(FormatRecall(r.by_bucket[k]), "0.00");
    EXPECT_EQ(FormatPrecision(r.by_bucket[k]), "0.00");
    EXPECT_EQ(FormatF1(r.by_bucket[k]), "0.00");
  }
}

TEST(ScoreByType, TwoBucketHandComputation) {
  const std::vector<Label> gold = {A, A, N, A, N, A, A, N};
  const std::vector<Label> pred = {A, N, A, A, N, A, N, A};
  const std::vector<TypeBucket> buckets = {
      TypeBucket::kProperName, TypeBucket::kProperName, TypeBucket::kProperName,
      TypeBucket::kProperName, TypeBucket::kCommonNoun, TypeBucket::kCommonNoun,
      TypeBucket::kCommonNoun, TypeBucket::kCommonNoun};
  const EvalReport r = ScoreByType(gold, pred, buckets);
  // Proper: tp at 0 and 3, fn at 1, fp at 2. Common: tp at 5, fn at 6, fp at 7.
  EXPECT_EQ(r.by_bucket[0], (ClassCounts{2, 1, 1}));
  EXPECT_EQ(r.by_bucket[1], (ClassCounts{1, 1, 1}));
  EXPECT_EQ(FormatF1(r.by_bucket[0]), "66.67");
  EXPECT_EQ(FormatF1(r.by_bucket[1]), "50.00");
  EXPECT_EQ(r.anaphoric, (ClassCounts{3, 2, 2}));
}

TEST(ScoreByType, BucketsPartitionTheMentions) {
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> bucket(0, 3);
  std::vector<Label> gold, pred;
  std::vector<TypeBucket> buckets;
  for (int i = 0; i < 500; ++i) {
    gold.push_back(coin(rng) ? A : N);
    pred.push_back(coin(rng) ? A : N);
    buckets.push_back(static_cast<TypeBucket>(bucket(rng)));
  }
  const EvalReport r = ScoreByType(gold, pred, buckets);
  ClassCounts sum;
  for (const ClassCounts &c : r.by_bucket) sum += c;
  EXPECT_EQ(sum, r.anaphoric);
  EXPECT_EQ(r.anaphoric.fp, r.non_anaphoric.fn);
  EXPECT_EQ(r.anaphoric.fn, r.non_anaphoric.fp);
  std::size_t gold_anaphoric = 0;
  for (Label l : gold) gold_anaphoric += l == A;
  EXPECT_EQ(r.anaphoric.tp + r.anaphoric.fn, gold_anaphoric);
  EXPECT_EQ(r.non_anaphoric.tp + r.non_anaphoric.fn, gold.size() - gold_anaphoric);
  EXPECT_THROW(ScoreByType(gold, pred, std::span(buckets).first(3)), std::invalid_argument);
}

TEST(Report, TsvRoundTrip) {
  EvalReport r;
  r.non_anaphoric = {10, 2, 3};
  r.anaphoric = {7, 3, 2};
  r.by_bucket = {ClassCounts{1, 1, 0}, ClassCounts{2, 0, 1}, ClassCounts{4, 2, 1},
                 ClassCounts{0, 0, 0}};
  std::stringstream io;
  WriteReportTsv(r, io);
  EXPECT_EQ(ReadReportTsv(io), r);
  std::istringstream bad("tp\tfp\n");
  EXPECT_THROW(ReadReportTsv(bad), std::invalid_argument);
}

TEST(Report, TextHasBothTables) {
  EvalReport r;
  r.anaphoric = {3, 1, 2};
  std::ostringstream out;
  WriteReportText(r, out);
  const std::string text = out.str();
  for (const char *s : {"Non-Anaphoric", "Anaphoric", "ProperName", "CommonNoun",
                        "Pronoun", "Other", "66.67", "75.00", "60.00"})
    EXPECT_NE(text.find(s), std::string::npos) << s;
}

}  // namespace
}  // namespace anaphor
