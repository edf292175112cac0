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

#include "anaphor/corpus.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <unordered_map>

namespace anaphor {

namespace {

constexpr std::array<std::string_view, 29> kPronouns = {
    "he",     "i",      "it",      "she",     "they",       "we",
    "you",    "him",    "her",     "his",     "hers",       "its",
    "their",  "them",   "theirs",  "us",      "our",        "ours",
    "my",     "mine",   "your",    "yours",   "himself",    "herself",
    "itself", "themselves", "ourselves", "myself", "yourself"};

constexpr std::array<std::string_view, 5> kDefiniteDeterminers = {
    "the", "this", "that", "these", "those"};

constexpr std::array<std::string_view, 7> kPossessivePronouns = {
    "my", "your", "his", "her", "its", "our", "their"};

template <std::size_t N>
bool Contains(const std::array<std::string_view, N> &set,
              std::string_view word) {
  return std::find(set.begin(), set.end(), word) != set.end();
}

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

bool IsNominalPos(std::string_view pos) {
  return StartsWith(pos, "NN") || StartsWith(pos, "PRP");
}

std::vector<std::string> SplitWhitespace(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) fields.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

std::optional<long long> ParseInteger(std::string_view s) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// State for the document currently being read.
struct DocumentBuilder {
  Document doc;
  std::size_t begin_line = 0;
  std::size_t sentence = 0;
  std::size_t in_sentence = 0;
  // chain id -> stack of open bracket start positions.
  std::map<int, std::vector<std::size_t>> open;

  std::string Where(std::size_t line) const {
    std::ostringstream os;
    os << "document '" << doc.doc_id << "' part " << doc.part << ", sentence "
       << sentence << " (line " << line << ")";
    return os.str();
  }

  void EndSentence(std::size_t line) {
    for (const auto &[chain, starts] : open) {
      if (!starts.empty()) {
        throw ParseError(Where(line) +
                         ": unbalanced coreference bracket for chain " +
                         std::to_string(chain));
      }
    }
    if (in_sentence > 0) {
      ++sentence;
      in_sentence = 0;
    }
  }

  void AddMention(std::size_t start, std::size_t end, int chain) {
    Mention m;
    m.span.sentence_index = doc.tokens[start].sentence_index;
    m.span.start = start;
    m.span.end = end;
    m.chain_id = chain;
    doc.mentions.push_back(std::move(m));
  }

  void ReadCorefColumn(std::string_view column, std::size_t line) {
    if (column == "-") return;
    const std::size_t position = doc.tokens.size() - 1;
    std::size_t i = 0;
    while (i <= column.size()) {
      std::size_t bar = column.find('|', i);
      if (bar == std::string_view::npos) bar = column.size();
      std::string_view item = column.substr(i, bar - i);
      i = bar + 1;
      if (item.empty()) continue;
      const bool opens = item.front() == '(';
      const bool closes = item.back() == ')';
      std::string_view digits = item;
      if (opens) digits.remove_prefix(1);
      if (closes && !digits.empty()) digits.remove_suffix(1);
      auto id = ParseInteger(digits);
      if (!id || (!opens && !closes)) {
        throw ParseError(Where(line) + ": non-numeric chain id '" +
                         std::string(item) + "'");
      }
      const int chain = static_cast<int>(*id);
      if (opens && closes) {
        AddMention(position, position + 1, chain);
      } else if (opens) {
        open[chain].push_back(position);
      } else {
        auto it = open.find(chain);
        if (it == open.end() || it->second.empty()) {
          throw ParseError(Where(line) +
                           ": unbalanced coreference bracket for chain " +
                           std::to_string(chain));
        }
        AddMention(it->second.back(), position + 1, chain);
        it->second.pop_back();
      }
    }
  }

  void AddToken(const std::vector<std::string> &fields, std::size_t line) {
    if (fields.size() < 6) {
      throw ParseError(Where(line) + ": expected at least 6 columns, found " +
                       std::to_string(fields.size()));
    }
    Token t;
    t.surface = fields[3];
    t.pos = fields[4];
    // Full CoNLL-2012 rows carry the predicted lemma in column 7.
    if (fields.size() >= 12 && fields[6] != "-") {
      t.lemma = Lowercase(fields[6]);
    } else {
      t.lemma = Lowercase(t.surface);
    }
    t.sentence_index = sentence;
    t.index_in_sentence = in_sentence++;
    t.doc_index = doc.tokens.size();
    doc.tokens.push_back(std::move(t));
    ReadCorefColumn(fields.back(), line);
  }
};

void ParseBeginLine(std::string_view rest, Document &doc) {
  // "#begin document (<id>); part <nnn>"
  auto open = rest.find('(');
  auto close = rest.rfind(')');
  if (open != std::string_view::npos && close != std::string_view::npos &&
      close > open) {
    doc.doc_id = std::string(rest.substr(open + 1, close - open - 1));
  } else {
    auto fields = SplitWhitespace(rest);
    doc.doc_id = fields.empty() ? std::string() : fields.front();
    if (!doc.doc_id.empty() && doc.doc_id.back() == ';') doc.doc_id.pop_back();
  }
  auto part = rest.find("part");
  if (part != std::string_view::npos) {
    auto fields = SplitWhitespace(rest.substr(part + 4));
    if (!fields.empty()) doc.part = fields.front();
  }
  if (doc.part.empty()) doc.part = "000";
}

}  // namespace

bool MentionPrecedes(const MentionSpan &a, const MentionSpan &b) {
  if (a.start != b.start) return a.start < b.start;
  return a.end < b.end;
}

std::string Lowercase(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool IsPronounWord(std::string_view lowercased) {
  return Contains(kPronouns, lowercased);
}

std::vector<Document> ParseConll(std::istream &in) {
  std::vector<Document> docs;
  std::optional<DocumentBuilder> current;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
      line.remove_suffix(1);

    if (StartsWith(line, "#begin document")) {
      if (current) {
        throw ParseError(current->Where(line_no) +
                         ": truncated document (missing #end document)");
      }
      current.emplace();
      current->begin_line = line_no;
      ParseBeginLine(line.substr(15), current->doc);
      continue;
    }
    if (StartsWith(line, "#end document")) {
      if (!current) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": #end document without #begin document");
      }
      current->EndSentence(line_no);
      Document doc = std::move(current->doc);
      current.reset();
      for (Mention &m : doc.mentions) m.span.head = AssignHead(m.span, doc);
      FinalizeDocument(doc);
      docs.push_back(std::move(doc));
      continue;
    }
    if (!line.empty() && line.front() == '#') continue;

    auto fields = SplitWhitespace(line);
    if (fields.empty()) {
      if (current) current->EndSentence(line_no);
      continue;
    }
    if (!current) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": token outside of a #begin/#end document block");
    }
    current->AddToken(fields, line_no);
  }
  if (current) {
    throw ParseError(current->Where(line_no) +
                     ": truncated document (missing #end document)");
  }
  return docs;
}

void WriteConll(const std::vector<Document> &docs, std::ostream &out) {
  for (const Document &doc : docs) {
    // Per token: closing brackets, single-token mentions, then openings with
    // the longest span first so that same-chain nesting re-parses correctly.
    std::vector<std::vector<std::string>> closes(doc.tokens.size());
    std::vector<std::vector<std::string>> singles(doc.tokens.size());
    std::vector<std::vector<std::pair<std::size_t, std::string>>> opens(
        doc.tokens.size());
    for (const Mention &m : doc.mentions) {
      if (!m.chain_id) continue;
      const std::string id = std::to_string(*m.chain_id);
      if (m.span.size() == 1) {
        singles[m.span.start].push_back("(" + id + ")");
      } else {
        opens[m.span.start].emplace_back(m.span.end, "(" + id);
        closes[m.span.end - 1].push_back(id + ")");
      }
    }

    out << "#begin document (" << doc.doc_id << "); part " << doc.part << "\n";
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      const Token &t = doc.tokens[i];
      if (i > 0 && t.sentence_index != doc.tokens[i - 1].sentence_index)
        out << "\n";
      std::stable_sort(opens[i].begin(), opens[i].end(),
                       [](const auto &a, const auto &b) { return a.first > b.first; });
      std::string coref;
      auto append = [&coref](const std::string &item) {
        if (!coref.empty()) coref += '|';
        coref += item;
      };
      for (const auto &c : closes[i]) append(c);
      for (const auto &s : singles[i]) append(s);
      for (const auto &o : opens[i]) append(o.second);
      if (coref.empty()) coref = "-";
      out << doc.doc_id << ' ' << doc.part << ' ' << t.index_in_sentence << ' '
          << t.surface << ' ' << t.pos << " - " << t.lemma << " - - - * "
          << coref << "\n";
    }
    if (!doc.tokens.empty()) out << "\n";
    out << "#end document\n";
  }
}

std::size_t AssignHead(const MentionSpan &span, const Document &doc) {
  std::size_t limit = span.end;
  for (std::size_t i = span.start; i < span.end; ++i) {
    const std::string &pos = doc.tokens[i].pos;
    if (pos == "IN" || pos == "TO") {
      limit = i;
      break;
    }
  }
  auto rightmost_nominal = [&](std::size_t end) -> std::optional<std::size_t> {
    for (std::size_t i = end; i > span.start; --i) {
      if (IsNominalPos(doc.tokens[i - 1].pos)) return i - 1;
    }
    return std::nullopt;
  };
  if (auto head = rightmost_nominal(limit)) return *head;
  if (auto head = rightmost_nominal(span.end)) return *head;
  return span.end - 1;
}

MentionType ClassifyMentionType(const MentionSpan &span, const Document &doc) {
  const Token &first = doc.tokens[span.start];
  const std::string first_lower = Lowercase(first.surface);
  if (span.size() == 1 && (IsPronounWord(first_lower) || first.pos == "PRP" ||
                           first.pos == "PRP$")) {
    return {MentionKind::kPronoun, first_lower};
  }

  const std::string &head_pos = doc.tokens[span.head].pos;
  if (head_pos == "NNP" || head_pos == "NNPS") return {MentionKind::kProper, {}};

  int depth = 0;
  bool seen_nominal = false;
  for (std::size_t i = span.start; i < span.end; ++i) {
    const Token &t = doc.tokens[i];
    if (t.pos == "CC") return {MentionKind::kList, {}};
    if (t.pos == "-LRB-" || t.surface == "(") ++depth;
    if ((t.pos == "-RRB-" || t.surface == ")") && depth > 0) --depth;
    if (depth == 0 && t.surface == "," && seen_nominal) {
      for (std::size_t j = i + 1; j < span.end; ++j) {
        if (IsNominalPos(doc.tokens[j].pos)) return {MentionKind::kList, {}};
      }
    }
    if (IsNominalPos(t.pos)) seen_nominal = true;
  }

  if (Contains(kDefiniteDeterminers, first_lower) ||
      Contains(kPossessivePronouns, first_lower) || first.pos == "PRP$" ||
      first.pos == "POS") {
    return {MentionKind::kNominalDefinite, {}};
  }
  if (head_pos == "NN" || head_pos == "NNS") {
    return {MentionKind::kNominalIndefinite, {}};
  }
  return {MentionKind::kOther, {}};
}

void DeriveLabels(Document &doc) {
  // chain id -> index of its first member in document order.
  std::unordered_map<int, std::size_t> first;
  for (std::size_t i = 0; i < doc.mentions.size(); ++i) {
    const Mention &m = doc.mentions[i];
    if (!m.chain_id) continue;
    auto [it, inserted] = first.emplace(*m.chain_id, i);
    if (!inserted) {
      const MentionSpan &best = doc.mentions[it->second].span;
      if (MentionPrecedes(m.span, best) ||
          (m.span.start == best.start && m.span.end == best.end &&
           i < it->second)) {
        it->second = i;
      }
    }
  }
  for (std::size_t i = 0; i < doc.mentions.size(); ++i) {
    Mention &m = doc.mentions[i];
    m.gold_label = (m.chain_id && first.at(*m.chain_id) != i)
                       ? Label::kAnaphoric
                       : Label::kNonAnaphoric;
  }
}

void FinalizeDocument(Document &doc) {
  std::stable_sort(doc.mentions.begin(), doc.mentions.end(),
                   [](const Mention &a, const Mention &b) {
                     return MentionPrecedes(a.span, b.span);
                   });
  doc.chains.clear();
  for (std::size_t i = 0; i < doc.mentions.size(); ++i) {
    Mention &m = doc.mentions[i];
    m.type = ClassifyMentionType(m.span, doc);
    if (m.chain_id) doc.chains[*m.chain_id].push_back(i);
  }
  DeriveLabels(doc);
}

void MergeSidecarMentions(std::vector<Document> &docs, std::istream &in) {
  std::map<std::pair<std::string, std::string>, Document *> by_key;
  for (Document &doc : docs) by_key[{doc.doc_id, doc.part}] = &doc;

  std::set<Document *> touched;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto fields = SplitWhitespace(raw);
    if (fields.empty() || fields.front().front() == '#') continue;
    const std::string where = "mention file line " + std::to_string(line_no);
    if (fields.size() != 6) {
      throw ParseError(where + ": expected 6 columns, found " +
                       std::to_string(fields.size()));
    }
    auto it = by_key.find({fields[0], fields[1]});
    if (it == by_key.end()) {
      throw ParseError(where + ": unknown document '" + fields[0] + "' part " +
                       fields[1]);
    }
    Document &doc = *it->second;
    std::array<std::size_t, 4> values{};
    for (std::size_t k = 0; k < 4; ++k) {
      auto v = ParseInteger(fields[k + 2]);
      if (!v || *v < 0) {
        throw ParseError(where + ": expected a non-negative integer, found '" +
                         fields[k + 2] + "'");
      }
      values[k] = static_cast<std::size_t>(*v);
    }
    MentionSpan span{values[0], values[1], values[2], values[3]};
    const bool valid = span.start < span.end && span.end <= doc.tokens.size() &&
                       span.start <= span.head && span.head < span.end &&
                       doc.tokens[span.start].sentence_index == span.sentence_index &&
                       doc.tokens[span.end - 1].sentence_index == span.sentence_index;
    if (!valid) throw ParseError(where + ": invalid mention span");

    bool merged = false;
    for (Mention &m : doc.mentions) {
      if (m.span.start == span.start && m.span.end == span.end) {
        m.span.head = span.head;
        merged = true;
      }
    }
    if (!merged) {
      Mention m;
      m.span = span;
      doc.mentions.push_back(std::move(m));
    }
    touched.insert(&doc);
  }
  for (Document *doc : touched) FinalizeDocument(*doc);
}

}  // namespace anaphor
