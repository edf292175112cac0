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

#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace anaphor {

namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

constexpr std::array<std::string_view, kNumBuckets> kBucketNames = {
    "ProperName", "CommonNoun", "Pronoun", "Other"};

}  // namespace

double ClassCounts::Recall() const { return Ratio(tp, tp + fn); }
double ClassCounts::Precision() const { return Ratio(tp, tp + fp); }
// 2PR / (P + R) reduces to 2tp / (2tp + fp + fn).
double ClassCounts::F1() const { return Ratio(2 * tp, 2 * tp + fp + fn); }

std::string FormatPercent(std::size_t numerator, std::size_t denominator) {
  if (denominator == 0) return "0.00";
  // hundredths of a percent, rounded half up
  const unsigned long long scaled =
      (2ULL * 10000ULL * numerator + denominator) / (2ULL * denominator);
  std::ostringstream os;
  os << scaled / 100 << '.' << std::setw(2) << std::setfill('0') << scaled % 100;
  return os.str();
}

std::string FormatRecall(const ClassCounts &c) {
  return FormatPercent(c.tp, c.tp + c.fn);
}
std::string FormatPrecision(const ClassCounts &c) {
  return FormatPercent(c.tp, c.tp + c.fp);
}
std::string FormatF1(const ClassCounts &c) {
  return FormatPercent(2 * c.tp, 2 * c.tp + c.fp + c.fn);
}

TypeBucket BucketOf(MentionKind kind) {
  switch (kind) {
    case MentionKind::kProper:
      return TypeBucket::kProperName;
    case MentionKind::kNominalDefinite:
    case MentionKind::kNominalIndefinite:
      return TypeBucket::kCommonNoun;
    case MentionKind::kPronoun:
      return TypeBucket::kPronoun;
    default:
      return TypeBucket::kOther;
  }
}

std::string_view BucketName(TypeBucket bucket) {
  return kBucketNames[static_cast<std::size_t>(bucket)];
}

TypeBucket ParseBucket(std::string_view name) {
  for (std::size_t k = 0; k < kNumBuckets; ++k) {
    if (kBucketNames[k] == name) return static_cast<TypeBucket>(k);
  }
  throw std::invalid_argument("unknown mention-type bucket '" +
                              std::string(name) + "'");
}

ClassScores Score(std::span<const Label> gold, std::span<const Label> predicted) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("score: " + std::to_string(gold.size()) +
                                " gold labels but " +
                                std::to_string(predicted.size()) + " predictions");
  }
  ClassScores s;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool g = gold[i] == Label::kAnaphoric;
    const bool p = predicted[i] == Label::kAnaphoric;
    if (g && p) {
      ++s.anaphoric.tp;
    } else if (!g && !p) {
      ++s.non_anaphoric.tp;
    } else if (p) {
      ++s.anaphoric.fp;
      ++s.non_anaphoric.fn;
    } else {
      ++s.anaphoric.fn;
      ++s.non_anaphoric.fp;
    }
  }
  return s;
}

EvalReport ScoreByType(std::span<const Label> gold,
                       std::span<const Label> predicted,
                       std::span<const TypeBucket> buckets) {
  const ClassScores global = Score(gold, predicted);
  if (buckets.size() != gold.size()) {
    throw std::invalid_argument("score_by_type: bucket list is not aligned");
  }
  EvalReport r;
  r.non_anaphoric = global.non_anaphoric;
  r.anaphoric = global.anaphoric;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ClassCounts &c = r.by_bucket[static_cast<std::size_t>(buckets[i])];
    const bool g = gold[i] == Label::kAnaphoric;
    const bool p = predicted[i] == Label::kAnaphoric;
    if (g && p) ++c.tp;
    if (!g && p) ++c.fp;
    if (g && !p) ++c.fn;
  }
  return r;
}

void WriteReportText(const EvalReport &report, std::ostream &out) {
  auto cells = [&out](const ClassCounts &c) {
    out << std::setw(8) << FormatRecall(c) << std::setw(8) << FormatPrecision(c)
        << std::setw(8) << FormatF1(c);
  };
  out << std::left << std::setw(14) << "" << std::right << std::setw(24)
      << "Non-Anaphoric" << std::setw(24) << "Anaphoric" << '\n';
  out << std::left << std::setw(14) << "" << std::right;
  for (int k = 0; k < 2; ++k)
    out << std::setw(8) << "R" << std::setw(8) << "P" << std::setw(8) << "F1";
  out << '\n';
  out << std::left << std::setw(14) << "all" << std::right;
  cells(report.non_anaphoric);
  cells(report.anaphoric);
  out << "\n\n";

  out << std::left << std::setw(14) << "Anaphoric" << std::right << std::setw(8)
      << "R" << std::setw(8) << "P" << std::setw(8) << "F1" << std::setw(8)
      << "tp" << std::setw(8) << "fp" << std::setw(8) << "fn" << '\n';
  for (std::size_t k = 0; k < kNumBuckets; ++k) {
    const ClassCounts &c = report.by_bucket[k];
    out << std::left << std::setw(14) << BucketName(static_cast<TypeBucket>(k))
        << std::right;
    cells(c);
    out << std::setw(8) << c.tp << std::setw(8) << c.fp << std::setw(8) << c.fn
        << '\n';
  }
}

void WriteReportTsv(const EvalReport &report, std::ostream &out) {
  auto row = [&out](std::string_view name, const ClassCounts &c) {
    out << name << '\t' << c.tp << '\t' << c.fp << '\t' << c.fn << '\t'
        << FormatRecall(c) << '\t' << FormatPrecision(c) << '\t' << FormatF1(c)
        << '\n';
  };
  out << "name\ttp\tfp\tfn\tR\tP\tF1\n";
  row("NonAnaphoric", report.non_anaphoric);
  row("Anaphoric", report.anaphoric);
  for (std::size_t k = 0; k < kNumBuckets; ++k)
    row(BucketName(static_cast<TypeBucket>(k)), report.by_bucket[k]);
}

EvalReport ReadReportTsv(std::istream &in) {
  EvalReport r;
  std::string line;
  if (!std::getline(in, line) || line.rfind("name\t", 0) != 0)
    throw std::invalid_argument("report: missing header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream s(line);
    std::string name;
    ClassCounts c;
    if (!std::getline(s, name, '\t') || !(s >> c.tp >> c.fp >> c.fn))
      throw std::invalid_argument("report: bad row '" + line + "'");
    if (name == "NonAnaphoric") {
      r.non_anaphoric = c;
    } else if (name == "Anaphoric") {
      r.anaphoric = c;
    } else {
      r.by_bucket[static_cast<std::size_t>(ParseBucket(name))] = c;
    }
  }
  return r;
}

}  // namespace anaphor
