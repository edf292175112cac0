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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "fixtures.h"
#include "oracles.h"

namespace anaphor {
namespace {

using fixtures::Parse;

// Builds a document from "word/POS" items; sentences split on "|".
Document MakeDoc(const std::string &text) {
  Document doc;
  doc.doc_id = "d";
  doc.part = "000";
  std::istringstream in(text);
  std::string item;
  std::size_t sentence = 0, position = 0;
  while (in >> item) {
    if (item == "|") {
      ++sentence;
      position = 0;
      continue;
    }
    const auto slash = item.rfind('/');
    Token t;
    t.surface = item.substr(0, slash);
    t.pos = item.substr(slash + 1);
    t.lemma = Lowercase(t.surface);
    t.sentence_index = sentence;
    t.index_in_sentence = position++;
    t.doc_index = doc.tokens.size();
    doc.tokens.push_back(t);
  }
  return doc;
}

MentionSpan Span(const Document &doc, std::size_t start, std::size_t end) {
  MentionSpan s{doc.tokens[start].sentence_index, start, end, start};
  s.head = AssignHead(s, doc);
  return s;
}

TEST(ParseConll, PlatoExample) {
  const auto docs = Parse(fixtures::kPlato);
  ASSERT_EQ(docs.size(), 1u);
  const Document &doc = docs[0];
  EXPECT_EQ(doc.doc_id, "plato");
  EXPECT_EQ(doc.part, "000");
  EXPECT_EQ(doc.num_sentences(), 3u);
  ASSERT_EQ(doc.mentions.size(), 3u);
  ASSERT_EQ(doc.chains.size(), 1u);
  EXPECT_EQ(doc.chains.at(1).size(), 3u);
  for (const Mention &m : doc.mentions) EXPECT_EQ(m.chain_id, 1);

  EXPECT_EQ(doc.mentions[0].gold_label, Label::kNonAnaphoric);
  EXPECT_EQ(doc.mentions[1].gold_label, Label::kAnaphoric);
  EXPECT_EQ(doc.mentions[2].gold_label, Label::kAnaphoric);
  EXPECT_EQ(doc.mentions[1].span.start, 8u);
  EXPECT_EQ(doc.mentions[1].span.end, 10u);
  EXPECT_EQ(doc.mentions[1].span.head, 9u);
  EXPECT_EQ(doc.mentions[1].type.kind, MentionKind::kNominalDefinite);
  EXPECT_EQ(doc.mentions[0].type.kind, MentionKind::kProper);
}

TEST(ParseConll, EmptyStream) {
  EXPECT_TRUE(Parse("").empty());
}

TEST(ParseConll, SingleTokenMentionMatchesHandParse) {
  const char text[] =
      "#begin document (five); part 001\n"
      "five 1 0 Yesterday NN -\n"
      "five 1 1 Anna NNP -\n"
      "five 1 2 met VBD -\n"
      "five 1 3 him PRP (3)\n"
      "five 1 4 . . -\n"
      "#end document\n";
  const auto docs = Parse(text);
  ASSERT_EQ(docs.size(), 1u);
  const Document &doc = docs[0];
  EXPECT_EQ(doc.part, "001");
  ASSERT_EQ(doc.tokens.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(doc.tokens[i].doc_index, i);
    EXPECT_EQ(doc.tokens[i].index_in_sentence, i);
    EXPECT_EQ(doc.tokens[i].sentence_index, 0u);
  }
  EXPECT_EQ(doc.tokens[1].lemma, "anna");
  ASSERT_EQ(doc.mentions.size(), 1u);
  const Mention &m = doc.mentions[0];
  EXPECT_EQ(m.span.start, 3u);
  EXPECT_EQ(m.span.end, 4u);
  EXPECT_EQ(m.span.head, 3u);
  EXPECT_EQ(m.chain_id, 3);
  EXPECT_EQ(m.type.kind, MentionKind::kPronoun);
  EXPECT_EQ(m.type.word, "him");
  EXPECT_EQ(m.gold_label, Label::kNonAnaphoric);
}

TEST(ParseConll, LemmaColumnUsedWhenPresent) {
  const char text[] =
      "#begin document (lem); part 000\n"
      "lem 0 0 Dogs NNS * dog - - - * * (1)\n"
      "lem 0 1 ran VBD * - - - - * * -\n"
      "#end document\n";
  const auto docs = Parse(text);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].tokens[0].lemma, "dog");
  EXPECT_EQ(docs[0].tokens[1].lemma, "ran");
}

TEST(ParseConll, UnbalancedBracketNamesDocumentSentenceAndChain) {
  const char text[] =
      "#begin document (bad); part 000\n"
      "bad 0 0 The DT (7\n"
      "bad 0 1 cat NN -\n"
      "\n"
      "#end document\n";
  try {
    Parse(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("'bad'"), std::string::npos) << what;
    EXPECT_NE(what.find("sentence 0"), std::string::npos) << what;
    EXPECT_NE(what.find("chain 7"), std::string::npos) << what;
  }
}

TEST(ParseConll, CloseWithoutOpenIsAnError) {
  const char text[] =
      "#begin document (bad); part 000\n"
      "bad 0 0 cat NN 2)\n"
      "#end document\n";
  EXPECT_THROW(Parse(text), ParseError);
}

TEST(ParseConll, NonNumericChainId) {
  const char text[] =
      "#begin document (bad); part 000\n"
      "bad 0 0 cat NN (x)\n"
      "#end document\n";
  try {
    Parse(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_NE(std::string(e.what()).find("non-numeric chain id"), std::string::npos);
  }
}

TEST(ParseConll, TruncatedDocument) {
  const char text[] =
      "#begin document (cut); part 000\n"
      "cut 0 0 cat NN (1)\n";
  try {
    Parse(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError &e) {
    EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos);
  }
  const char nested[] =
      "#begin document (cut); part 000\n"
      "cut 0 0 cat NN (1)\n"
      "#begin document (next); part 000\n"
      "next 0 0 dog NN (1)\n"
      "#end document\n";
  EXPECT_THROW(Parse(nested), ParseError);
}

TEST(ParseConll, TooFewColumns) {
  const char text[] =
      "#begin document (short); part 000\n"
      "short 0 0 cat NN\n"
      "#end document\n";
  EXPECT_THROW(Parse(text), ParseError);
}

TEST(ParseConll, MultipleDocumentsAndBarSeparatedItems) {
  const std::string text = std::string(fixtures::kNested) + fixtures::kWindows;
  const auto docs = Parse(text);
  ASSERT_EQ(docs.size(), 2u);
  const Document &nested = docs[0];
  ASSERT_EQ(nested.mentions.size(), 3u);
  // Sorted by (start, end): [0,4), [1,2), [3,4).
  EXPECT_EQ(nested.mentions[0].span.start, 0u);
  EXPECT_EQ(nested.mentions[0].span.end, 4u);
  EXPECT_EQ(nested.mentions[0].chain_id, 4);
  EXPECT_EQ(nested.mentions[1].chain_id, 5);
  EXPECT_EQ(nested.mentions[2].chain_id, 6);
  EXPECT_EQ(docs[1].doc_id, "windows");
}

TEST(WriteConll, RoundTripOnRandomDocuments) {
  std::mt19937_64 rng(11);
  std::vector<Document> docs;
  for (int i = 0; i < 30; ++i) docs.push_back(oracle::RandomDocument(rng));
  std::ostringstream out;
  WriteConll(docs, out);
  const auto again = Parse(out.str());
  ASSERT_EQ(again.size(), docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    EXPECT_EQ(again[d].doc_id, docs[d].doc_id);
    EXPECT_EQ(again[d].tokens, docs[d].tokens);
    std::vector<const Mention *> chained;
    for (const Mention &m : docs[d].mentions)
      if (m.chain_id) chained.push_back(&m);  // chainless spans are not representable
    ASSERT_EQ(again[d].mentions.size(), chained.size()) << "doc " << d;
    for (std::size_t m = 0; m < chained.size(); ++m) {
      const Mention &a = again[d].mentions[m];
      const Mention &b = *chained[m];
      EXPECT_EQ(a.span, b.span);
      EXPECT_EQ(a.chain_id, b.chain_id);
    }
  }
}

TEST(WriteConll, RoundTripFixtures) {
  for (const char *text : {fixtures::kPlato, fixtures::kWindows, fixtures::kNested}) {
    const auto docs = Parse(text);
    std::ostringstream out;
    WriteConll(docs, out);
    const auto again = Parse(out.str());
    ASSERT_EQ(again.size(), 1u);
    EXPECT_EQ(again[0].tokens, docs[0].tokens);
    EXPECT_EQ(again[0].mentions, docs[0].mentions);
    EXPECT_EQ(again[0].chains, docs[0].chains);
  }
}

TEST(DeriveLabels, SingletonChainsAreNonAnaphoric) {
  const char text[] =
      "#begin document (s); part 000\n"
      "s 0 0 Anna NNP (1)\n"
      "s 0 1 saw VBD -\n"
      "s 0 2 Bob NNP (2)\n"
      "#end document\n";
  for (const Mention &m : Parse(text)[0].mentions)
    EXPECT_EQ(m.gold_label, Label::kNonAnaphoric);
}

TEST(DeriveLabels, RandomDocumentsMatchChainCounts) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    Document doc = oracle::RandomDocument(rng, 4, 20, 4);
    // Brute force: a mention is anaphoric iff some other mention of its
    // chain precedes it.
    std::map<int, std::size_t> sizes;
    std::size_t expected = 0;
    for (const Mention &m : doc.mentions) {
      if (m.chain_id) ++sizes[*m.chain_id];
    }
    for (const auto &[chain, size] : sizes) expected += size - 1;
    std::size_t anaphoric = 0;
    for (std::size_t i = 0; i < doc.mentions.size(); ++i) {
      const Mention &m = doc.mentions[i];
      bool earlier = false;
      for (const Mention &o : doc.mentions) {
        if (&o != &m && o.chain_id && m.chain_id && *o.chain_id == *m.chain_id &&
            MentionPrecedes(o.span, m.span))
          earlier = true;
      }
      EXPECT_EQ(m.gold_label == Label::kAnaphoric, earlier);
      if (m.gold_label == Label::kAnaphoric) ++anaphoric;
    }
    EXPECT_EQ(anaphoric, expected);
  }
}

TEST(DeriveLabels, IdempotentAndOrderIndependent) {
  std::mt19937_64 rng(8);
  Document doc = oracle::RandomDocument(rng, 3, 15, 3);
  const std::vector<Mention> before = doc.mentions;
  DeriveLabels(doc);
  EXPECT_EQ(doc.mentions, before);

  // Relabel after shuffling the list; each mention keeps its label.
  Document shuffled = doc;
  std::shuffle(shuffled.mentions.begin(), shuffled.mentions.end(), rng);
  shuffled.chains.clear();
  for (std::size_t i = 0; i < shuffled.mentions.size(); ++i) {
    if (shuffled.mentions[i].chain_id)
      shuffled.chains[*shuffled.mentions[i].chain_id].push_back(i);
  }
  for (Mention &m : shuffled.mentions) m.gold_label = Label::kNonAnaphoric;
  DeriveLabels(shuffled);
  for (const Mention &m : shuffled.mentions) {
    auto it = std::find_if(before.begin(), before.end(),
                           [&](const Mention &o) { return o.span == m.span; });
    ASSERT_NE(it, before.end());
    EXPECT_EQ(m.gold_label, it->gold_label);
  }
}

TEST(AssignHead, Rules) {
  const Document windows = Parse(fixtures::kWindows)[0];
  EXPECT_EQ(AssignHead(Span(windows, 6, 8), windows), 7u);
  EXPECT_EQ(AssignHead(Span(windows, 0, 1), windows), 0u);

  const Document doc = MakeDoc("the/DT founder/NN of/IN the/DT Academy/NNP in/IN Athens/NNP");
  EXPECT_EQ(AssignHead(Span(doc, 0, 7), doc), 1u);
  // No nominal before the preposition: rightmost nominal overall.
  const Document late = MakeDoc("of/IN the/DT Academy/NNP");
  EXPECT_EQ(AssignHead(Span(late, 0, 3), late), 2u);
  // No nominal at all: last token.
  const Document none = MakeDoc("very/RB quickly/RB");
  EXPECT_EQ(AssignHead(Span(none, 0, 2), none), 1u);
}

TEST(ClassifyMentionType, Rules) {
  const Document doc = MakeDoc(
      "it/PRP Plato/NNP the/DT founder/NN of/IN the/DT Academy/NNP "
      "a/DT cat/NN and/CC a/DT dog/NN her/PRP$ book/NN very/RB "
      "cats/NNS ,/, dogs/NNS");
  auto type = [&](std::size_t s, std::size_t e) { return ClassifyMentionType(Span(doc, s, e), doc); };
  EXPECT_EQ(type(0, 1), (MentionType{MentionKind::kPronoun, "it"}));
  EXPECT_EQ(type(1, 2).kind, MentionKind::kProper);
  // Head "founder" is NN and the first token is "the".
  EXPECT_EQ(type(2, 7).kind, MentionKind::kNominalDefinite);
  EXPECT_EQ(type(7, 9).kind, MentionKind::kNominalIndefinite);
  EXPECT_EQ(type(7, 12).kind, MentionKind::kList);
  EXPECT_EQ(type(12, 14).kind, MentionKind::kNominalDefinite);
  EXPECT_EQ(type(14, 15).kind, MentionKind::kOther);
  EXPECT_EQ(type(15, 18).kind, MentionKind::kList);
  // A lone possessive pronoun is a pronoun, not a definite nominal.
  EXPECT_EQ(type(12, 13), (MentionType{MentionKind::kPronoun, "her"}));
}

TEST(MergeSidecarMentions, AddsCandidatesAndAdoptsHeads) {
  auto docs = Parse(fixtures::kWindows);
  std::istringstream sidecar(
      "# doc_id part sentence start end head\n"
      "windows\t000\t1\t9\t11\t10\n"
      "windows\t000\t0\t3\t5\t3\n");
  MergeSidecarMentions(docs, sidecar);
  const Document &doc = docs[0];
  ASSERT_EQ(doc.mentions.size(), 4u);
  EXPECT_EQ(doc.mentions[1].span.head, 3u);  // adopted from the sidecar
  EXPECT_EQ(doc.mentions[1].chain_id, 2);
  const Mention &added = doc.mentions[3];
  EXPECT_EQ(added.span.start, 9u);
  EXPECT_FALSE(added.chain_id.has_value());
  EXPECT_EQ(added.gold_label, Label::kNonAnaphoric);
}

TEST(MergeSidecarMentions, Errors) {
  auto docs = Parse(fixtures::kWindows);
  std::istringstream unknown("other\t000\t0\t0\t1\t0\n");
  EXPECT_THROW(MergeSidecarMentions(docs, unknown), ParseError);
  std::istringstream crossing("windows\t000\t0\t4\t7\t4\n");
  EXPECT_THROW(MergeSidecarMentions(docs, crossing), ParseError);
  std::istringstream fields("windows\t000\t0\t0\n");
  EXPECT_THROW(MergeSidecarMentions(docs, fields), ParseError);
}

}  // namespace
}  // namespace anaphor
