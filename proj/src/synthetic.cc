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

#include "anaphor/synthetic.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <random>
#include <string>
#include <string_view>

namespace anaphor {

namespace {

constexpr std::array<std::string_view, 24> kFemaleNames = {
    "Alice", "Beatrice", "Clara", "Diana",  "Elena",  "Fiona",
    "Grace", "Helen",    "Irene", "Julia",  "Karen",  "Laura",
    "Maria", "Nora",     "Olga",  "Paula",  "Rita",   "Sara",
    "Tina",  "Ursula",   "Vera",  "Wendy",  "Yvonne", "Zoe"};

constexpr std::array<std::string_view, 24> kMaleNames = {
    "Adam",  "Boris",  "Carl",   "David", "Edward", "Frank",
    "Georg", "Henry",  "Ivan",   "James", "Kevin",  "Louis",
    "Mark",  "Nathan", "Oscar",  "Peter", "Quentin", "Robert",
    "Simon", "Thomas", "Victor", "Walter", "Xavier", "Yusuf"};

constexpr std::array<std::string_view, 48> kSurnames = {
    "Abbott",  "Baker",    "Carter",  "Dawson",  "Ellis",    "Fischer",
    "Garcia",  "Hughes",   "Ingram",  "Jensen",  "Keller",   "Lambert",
    "Moreno",  "Nolan",    "Owens",   "Parker",  "Quinn",    "Russo",
    "Sato",    "Turner",   "Umeda",   "Vargas",  "Walsh",    "Young",
    "Zimmer",  "Almeida",  "Brennan", "Castro",  "Dubois",   "Eriksen",
    "Ferrara", "Gallagher", "Horvat", "Iqbal",   "Jovanovic", "Kowalski",
    "Lindqvist", "Mendes", "Novak",   "Ortega",  "Petrov",   "Rahman",
    "Schmidt", "Tanaka",   "Ueda",    "Varga",   "Weber",    "Yilmaz"};

constexpr std::array<std::string_view, 48> kThings = {
    "car",      "house",    "letter",   "bridge",   "garden",  "contract",
    "painting", "violin",   "laptop",   "report",   "ticket",  "bicycle",
    "camera",   "lamp",     "boat",     "museum",   "engine",  "package",
    "map",      "key",      "clock",    "window",   "piano",   "statue",
    "umbrella", "wallet",   "tractor",  "kettle",   "printer", "telescope",
    "guitar",   "notebook", "sculpture", "fountain", "ladder",  "helmet",
    "carpet",   "mirror",   "anchor",   "invoice",  "harbor",  "orchard",
    "satchel",  "lantern",  "compass",  "trophy",   "blanket", "airplane"};

constexpr std::array<std::string_view, 18> kGroups = {
    "committee", "team",    "board",    "jury",     "crew",    "band",
    "council",   "family",  "audience", "platoon",  "choir",   "union",
    "panel",     "company", "faculty",  "staff",    "cabinet", "orchestra"};

constexpr std::array<std::string_view, 20> kAdjectives = {
    "old",   "new",    "red",   "large", "small", "broken", "famous",
    "green", "heavy",  "quiet", "shiny", "cheap", "rusty",  "modern",
    "tiny",  "bright", "dusty", "fancy", "plain", "wooden"};

constexpr std::array<std::string_view, 28> kVerbs = {
    "saw",      "bought",    "visited",  "found",   "praised", "moved",
    "repaired", "described", "watched",  "sold",    "painted", "ignored",
    "noticed",  "borrowed",  "admired",  "checked", "cleaned", "opened",
    "mentioned", "inspected", "approved", "carried", "studied", "lost",
    "replaced", "examined",  "liked",    "recommended"};

constexpr std::array<std::string_view, 8> kOpeners = {
    "Later", "Then", "Yesterday", "Afterwards", "Meanwhile", "Eventually",
    "Finally", "Today"};

constexpr std::array<std::string_view, 8> kClosers = {
    "again", "quickly", "carefully", "twice", "today", "early", "later",
    "anyway"};

enum class EntityKind { kFemale, kMale, kThing, kGroup };

struct Entity {
  EntityKind kind;
  std::string first;  // given name for people
  std::string head;   // surname or noun
  std::string adjective;
  int chain = 0;
  bool introduced = false;
};

struct Piece {
  std::string word;
  std::string pos;
};

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  Document Make(std::size_t number, const SyntheticOptions &options) {
    Document doc;
    char id[32];
    std::snprintf(id, sizeof id, "synth/doc%04zu", number);
    doc.doc_id = id;
    doc.part = "000";

    std::vector<Entity> entities = MakeEntities(options.entities);
    for (std::size_t s = 0; s < options.sentences; ++s) {
      sentence_.clear();
      pending_.clear();
      if (Chance(0.3)) {
        Push(Pick(kOpeners), "RB");
        Push(",", ",");
      }
      const std::size_t subject = Choose(entities, entities.size());
      Mention(entities[subject], /*subject=*/true);
      Push(Pick(kVerbs), "VBD");
      const std::size_t object = Choose(entities, subject);
      Mention(entities[object], /*subject=*/false);
      if (Chance(0.3)) Push(Pick(kClosers), "RB");
      Push(".", ".");
      Emit(doc, s);
    }
    for (anaphor::Mention &m : doc.mentions) m.span.head = AssignHead(m.span, doc);
    FinalizeDocument(doc);
    return doc;
  }

 private:
  bool Chance(double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p;
  }

  std::size_t Below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  template <std::size_t N>
  std::string Pick(const std::array<std::string_view, N> &words) {
    return std::string(words[Below(N)]);
  }

  // Draws `count` distinct heads across people, things and groups so that no
  // two entities of a document share a head word.
  std::vector<Entity> MakeEntities(std::size_t count) {
    std::vector<std::size_t> surnames(kSurnames.size()), things(kThings.size()),
        groups(kGroups.size());
    for (std::size_t i = 0; i < surnames.size(); ++i) surnames[i] = i;
    for (std::size_t i = 0; i < things.size(); ++i) things[i] = i;
    for (std::size_t i = 0; i < groups.size(); ++i) groups[i] = i;
    std::shuffle(surnames.begin(), surnames.end(), rng_);
    std::shuffle(things.begin(), things.end(), rng_);
    std::shuffle(groups.begin(), groups.end(), rng_);

    std::vector<Entity> out;
    for (std::size_t i = 0; i < count; ++i) {
      Entity e;
      const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
      if (r < 0.45 && !surnames.empty()) {
        e.kind = Chance(0.5) ? EntityKind::kFemale : EntityKind::kMale;
        e.first = e.kind == EntityKind::kFemale ? Pick(kFemaleNames) : Pick(kMaleNames);
        e.head = std::string(kSurnames[surnames.back()]);
        surnames.pop_back();
      } else if (r < 0.85 || groups.empty()) {
        e.kind = EntityKind::kThing;
        e.head = std::string(kThings[things.back()]);
        things.pop_back();
      } else {
        e.kind = EntityKind::kGroup;
        e.head = std::string(kGroups[groups.back()]);
        groups.pop_back();
      }
      e.adjective = Pick(kAdjectives);
      e.chain = static_cast<int>(i);
      out.push_back(std::move(e));
    }
    return out;
  }

  // Picks an entity other than `exclude`, preferring to introduce new ones
  // early and to revisit recently mentioned ones.
  std::size_t Choose(const std::vector<Entity> &entities, std::size_t exclude) {
    std::vector<std::size_t> fresh, known;
    for (std::size_t i = 0; i < entities.size(); ++i) {
      if (i == exclude) continue;
      (entities[i].introduced ? known : fresh).push_back(i);
    }
    if (!fresh.empty() && (known.empty() || Chance(0.35))) return fresh[Below(fresh.size())];
    if (!recent_.empty() && Chance(0.5)) {
      for (auto it = recent_.rbegin(); it != recent_.rend(); ++it) {
        if (*it != exclude) return *it;
      }
    }
    return known[Below(known.size())];
  }

  void Push(std::string word, std::string pos) {
    sentence_.push_back({std::move(word), std::move(pos)});
  }

  void Mention(Entity &e, bool subject) {
    const std::size_t start = sentence_.size();
    const bool first = !e.introduced;
    const bool capital = sentence_.empty();
    auto article = [&](std::string_view word) {
      std::string a(word);
      if (capital) a[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(a[0])));
      Push(a, "DT");
    };
    const bool person = e.kind == EntityKind::kFemale || e.kind == EntityKind::kMale;
    if (first) {
      if (person) {
        Push(e.first, "NNP");
        Push(e.head, "NNP");
      } else if (Chance(0.15)) {
        article("the");
        Push(e.head, "NN");
      } else {
        const bool adjective = Chance(0.4);
        const char lead = adjective ? e.adjective[0] : e.head[0];
        article(std::string_view("aeiou").find(lead) != std::string_view::npos ? "an" : "a");
        if (adjective) Push(e.adjective, "JJ");
        Push(e.head, "NN");
      }
    } else if (subject && Chance(0.4)) {
      std::string p = e.kind == EntityKind::kFemale ? "she"
                      : e.kind == EntityKind::kMale ? "he"
                      : e.kind == EntityKind::kGroup ? "they"
                                                     : "it";
      if (capital) p[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(p[0])));
      Push(p, "PRP");
    } else if (person) {
      if (Chance(0.5)) Push(e.first, "NNP");
      Push(e.head, "NNP");
    } else {
      article(Chance(0.8) ? "the" : "this");
      if (Chance(0.3)) Push(e.adjective, "JJ");
      Push(e.head, "NN");
    }
    e.introduced = true;
    pending_.push_back({start, sentence_.size(), e.chain});
    recent_.push_back(static_cast<std::size_t>(e.chain));
    if (recent_.size() > 3) recent_.erase(recent_.begin());
  }

  void Emit(Document &doc, std::size_t sentence_index) {
    const std::size_t base = doc.tokens.size();
    for (std::size_t i = 0; i < sentence_.size(); ++i) {
      Token t;
      t.surface = sentence_[i].word;
      t.lemma = Lowercase(t.surface);
      t.pos = sentence_[i].pos;
      t.sentence_index = sentence_index;
      t.index_in_sentence = i;
      t.doc_index = base + i;
      doc.tokens.push_back(std::move(t));
    }
    for (const PendingMention &p : pending_) {
      anaphor::Mention m;
      m.span.sentence_index = sentence_index;
      m.span.start = base + p.start;
      m.span.end = base + p.end;
      m.chain_id = p.chain;
      doc.mentions.push_back(std::move(m));
    }
  }

  struct PendingMention {
    std::size_t start, end;
    int chain;
  };

  std::mt19937_64 rng_;
  std::vector<Piece> sentence_;
  std::vector<PendingMention> pending_;
  std::vector<std::size_t> recent_;
};

}  // namespace

std::vector<Document> GenerateSyntheticCorpus(const SyntheticOptions &options) {
  std::vector<Document> docs;
  docs.reserve(options.documents);
  for (std::size_t d = 0; d < options.documents; ++d) {
    Generator g(options.seed * 1000003ULL + d);
    docs.push_back(g.Make(d, options));
  }
  return docs;
}

Label SyntheticRule(const anaphor::Mention &mention, const MatchFlags &flags) {
  return mention.type.kind == MentionKind::kPronoun || flags.head_match_prev
             ? Label::kAnaphoric
             : Label::kNonAnaphoric;
}

}  // namespace anaphor
