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

#include "anaphor/features.h"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace anaphor {

namespace {

using OrderKey = std::pair<std::size_t, std::size_t>;

constexpr OrderKey kNoKey = {std::numeric_limits<std::size_t>::max(),
                             std::numeric_limits<std::size_t>::max()};

OrderKey KeyOf(const MentionSpan &span) { return {span.start, span.end}; }

// Number of distinct mentions carrying some string, and the earliest of them.
struct Occurrences {
  std::size_t count = 0;
  OrderKey first = kNoKey;

  void Add(const OrderKey &key) {
    ++count;
    first = std::min(first, key);
  }
};

std::string JoinLower(const Document &doc, std::size_t start, std::size_t end) {
  std::string out;
  for (std::size_t i = start; i < end; ++i) {
    if (i > start) out += ' ';
    out += Lowercase(doc.tokens[i].surface);
  }
  return out;
}

// All distinct contiguous token substrings of a mention.
std::unordered_set<std::string> Substrings(const Document &doc,
                                           const MentionSpan &span) {
  std::unordered_set<std::string> out;
  for (std::size_t b = span.start; b < span.end; ++b) {
    std::string s;
    for (std::size_t e = b; e < span.end; ++e) {
      if (e > b) s += ' ';
      s += Lowercase(doc.tokens[e].surface);
      out.insert(s);
    }
  }
  return out;
}

const char *CoarseType(MentionKind kind) {
  switch (kind) {
    case MentionKind::kProper:
      return "proper";
    case MentionKind::kPronoun:
      return "pronoun";
    case MentionKind::kList:
      return "list";
    default:
      return "nominal";
  }
}

}  // namespace

std::vector<MatchFlags> ComputeMatchFlags(const Document &doc) {
  const std::size_t n = doc.mentions.size();
  std::vector<std::string> strings(n), heads(n);
  std::vector<std::unordered_set<std::string>> substrings(n);
  std::unordered_map<std::string, Occurrences> by_string, by_head, containers;
  for (std::size_t i = 0; i < n; ++i) {
    const MentionSpan &span = doc.mentions[i].span;
    strings[i] = JoinLower(doc, span.start, span.end);
    heads[i] = Lowercase(doc.tokens[span.head].surface);
    substrings[i] = Substrings(doc, span);
    by_string[strings[i]].Add(KeyOf(span));
    by_head[heads[i]].Add(KeyOf(span));
    for (const std::string &s : substrings[i]) containers[s].Add(KeyOf(span));
  }

  std::vector<MatchFlags> flags(n);
  for (std::size_t i = 0; i < n; ++i) {
    const OrderKey key = KeyOf(doc.mentions[i].span);
    MatchFlags &f = flags[i];

    const Occurrences &same = by_string.at(strings[i]);
    f.string_match_text = same.count > 1;
    f.string_match_prev = same.first < key;

    const Occurrences &head = by_head.at(heads[i]);
    f.head_match_text = head.count > 1;
    f.head_match_prev = head.first < key;

    for (const std::string &s : substrings[i]) {
      auto it = by_string.find(s);
      if (it == by_string.end()) continue;
      const std::size_t self = (s == strings[i]) ? 1 : 0;
      if (it->second.count > self) f.contains_other = true;
      if (it->second.first < key) f.contains_prev = true;
    }

    // Every mention is a container of its own string.
    const Occurrences &outer = containers.at(strings[i]);
    f.contained_in_other = outer.count > 1;
    f.contained_in_prev = outer.first < key;
  }

  // Embedding: sweep in (start asc, end desc) order tracking the furthest end
  // among mentions that start strictly earlier.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const MentionSpan &x = doc.mentions[a].span;
    const MentionSpan &y = doc.mentions[b].span;
    if (x.start != y.start) return x.start < y.start;
    return x.end > y.end;
  });
  std::size_t reach_before = 0;  // max end over mentions with smaller start
  std::size_t k = 0;
  while (k < n) {
    const std::size_t start = doc.mentions[order[k]].span.start;
    const std::size_t group_end = doc.mentions[order[k]].span.end;  // longest
    std::size_t g = k;
    while (g < n && doc.mentions[order[g]].span.start == start) {
      const MentionSpan &span = doc.mentions[order[g]].span;
      flags[order[g]].embedded_in_other =
          reach_before >= span.end || group_end > span.end;
      ++g;
    }
    reach_before = std::max(reach_before, group_end);
    k = g;
  }
  return flags;
}

SparseFeatureVector::SparseFeatureVector(
    std::initializer_list<std::string> features) {
  for (const std::string &f : features) Add(f);
}

void SparseFeatureVector::Add(std::string feature) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), feature);
  if (it == entries_.end() || *it != feature) {
    entries_.insert(it, std::move(feature));
  }
}

bool SparseFeatureVector::Has(std::string_view feature) const {
  return std::binary_search(entries_.begin(), entries_.end(), feature);
}

SparseFeatureVector ExtractSvmFeatures(const Document &doc,
                                       std::size_t mention,
                                       const MatchFlags &flags) {
  const Mention &m = doc.mentions[mention];
  const MentionSpan &span = m.span;
  SparseFeatureVector v;
  for (std::size_t i = span.start; i < span.end; ++i) {
    v.Add("m_lem=" + doc.tokens[i].lemma);
    v.Add("m_pos=" + doc.tokens[i].pos);
  }

  auto context = [&](const char *name, long long position) {
    if (position < 0 || position >= static_cast<long long>(doc.tokens.size()))
      return;
    const Token &t = doc.tokens[static_cast<std::size_t>(position)];
    v.Add(std::string(name) + "_lem=" + t.lemma);
    v.Add(std::string(name) + "_pos=" + t.pos);
  };
  const auto start = static_cast<long long>(span.start);
  const auto end = static_cast<long long>(span.end);
  context("prev1", start - 1);
  context("prev2", start - 2);
  context("next1", end);
  context("next2", end + 1);

  v.Add("m_str=" + JoinLower(doc, span.start, span.end));
  v.Add(span.size() > 20 ? std::string("m_len=20+")
                         : "m_len=" + std::to_string(span.size()));
  v.Add(std::string("m_type=") + CoarseType(m.type.kind));

  auto flag = [&v](bool on, std::string_view name) {
    if (on) v.Add(std::string(name));
  };
  flag(flags.string_match_text, kStringMatch);
  flag(flags.string_match_prev, kStringMatchPrev);
  flag(flags.head_match_text, kHeadMatch);
  flag(flags.head_match_prev, kHeadMatchPrev);
  flag(flags.contains_other, kContainsOther);
  flag(flags.contains_prev, kContainsPrev);
  flag(flags.contained_in_other, kContainedInOther);
  flag(flags.contained_in_prev, kContainedInPrev);
  return v;
}

std::vector<SparseFeatureVector> ExtractSvmFeatures(const Document &doc) {
  const auto flags = ComputeMatchFlags(doc);
  std::vector<SparseFeatureVector> out;
  out.reserve(doc.mentions.size());
  for (std::size_t i = 0; i < doc.mentions.size(); ++i)
    out.push_back(ExtractSvmFeatures(doc, i, flags[i]));
  return out;
}

std::size_t SurfaceTypeSlot(const MentionType &type) {
  switch (type.kind) {
    case MentionKind::kProper:
      return 0;
    case MentionKind::kNominalDefinite:
      return 1;
    case MentionKind::kNominalIndefinite:
      return 2;
    case MentionKind::kPronoun: {
      static constexpr std::array<std::string_view, 7> kSlots = {
          "he", "i", "it", "she", "they", "we", "you"};
      for (std::size_t k = 0; k < kSlots.size(); ++k) {
        if (type.word == kSlots[k]) return 3 + k;
      }
      return 10;
    }
    default:
      return 10;
  }
}

SurfaceFeatures ExtractSurfaceFeatures(const Document &doc,
                                       std::size_t mention,
                                       const MatchFlags &flags) {
  SurfaceFeatures s;
  s.values[SurfaceTypeSlot(doc.mentions[mention].type)] = 1;
  const std::array<bool, 9> bits = {
      flags.string_match_text,  flags.string_match_prev,
      flags.head_match_text,    flags.head_match_prev,
      flags.contains_other,     flags.contains_prev,
      flags.contained_in_other, flags.contained_in_prev,
      flags.embedded_in_other};
  for (std::size_t k = 0; k < bits.size(); ++k)
    s.values[kSurfaceTypeSlots + k] = bits[k] ? 1 : 0;
  return s;
}

ContextSequence BuildContextSequence(const Document &doc, std::size_t mention,
                                     std::size_t window) {
  const MentionSpan &span = doc.mentions[mention].span;
  const std::size_t before = span.start >= window ? span.start - window : 0;
  const std::size_t after = std::min(doc.tokens.size(), span.end + window);
  ContextSequence seq;
  seq.reserve((span.start - before) + (after - span.end) + span.size() + 4);
  auto word = [&doc](std::size_t i) { return Lowercase(doc.tokens[i].surface); };
  for (std::size_t i = before; i < span.start; ++i) seq.push_back(word(i));
  seq.emplace_back(kMentionPlaceholder);
  for (std::size_t i = span.end; i < after; ++i) seq.push_back(word(i));
  seq.emplace_back(kMentionSeparator);
  for (std::size_t i = span.start; i < span.end; ++i) seq.push_back(word(i));
  seq.emplace_back(kHeadSeparator);
  seq.push_back(word(span.head));
  return seq;
}

void WriteFeatureLine(std::ostream &out, Label label,
                      const SparseFeatureVector &features) {
  out << (label == Label::kAnaphoric ? "+1" : "-1");
  for (const std::string &f : features.entries()) out << '\t' << f;
  out << '\n';
}

bool ReadFeatureLine(std::istream &in, Label &label,
                     SparseFeatureVector &features) {
  std::string line;
  if (!std::getline(in, line)) return false;
  std::istringstream fields(line);
  std::string field;
  std::getline(fields, field, '\t');
  if (field == "+1") {
    label = Label::kAnaphoric;
  } else if (field == "-1") {
    label = Label::kNonAnaphoric;
  } else {
    throw ParseError("feature line: bad label '" + field + "'");
  }
  features = SparseFeatureVector();
  while (std::getline(fields, field, '\t')) {
    if (!field.empty()) features.Add(field);
  }
  return true;
}

}  // namespace anaphor
