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

#include "commands.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "anaphor/evaluation.h"
#include "anaphor/features.h"
#include "anaphor/neural.h"
#include "anaphor/svm.h"
#include "anaphor/synthetic.h"
#include "json.hpp"

namespace anaphor::cli {

namespace {

std::ifstream OpenIn(const std::string &path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::in | std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream OpenOut(const std::string &path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::out | std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void Require(const std::string &value, const char *flag, const char *command) {
  if (value.empty())
    throw std::invalid_argument(std::string(command) + " requires " + flag);
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

const char *LabelName(Label label) {
  return label == Label::kAnaphoric ? "anaphoric" : "non-anaphoric";
}

Label ParseLabel(const std::string &s, std::size_t line) {
  if (s == "anaphoric") return Label::kAnaphoric;
  if (s == "non-anaphoric") return Label::kNonAnaphoric;
  throw FormatError("predictions line " + std::to_string(line) + ": bad label '" +
                    s + "'");
}

// Embedding dimension from the first non-empty line, or 300 for an empty
// stream.
std::size_t SniffDimension(const std::string &path) {
  std::ifstream in = OpenIn(path);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string word, value;
    if (!(fields >> word)) continue;
    std::size_t n = 0;
    while (fields >> value) ++n;
    if (n == 0) throw FormatError("embeddings '" + path + "': first line has no values");
    return n;
  }
  return 300;
}

ModelKind SniffModelKind(const std::string &path) {
  std::ifstream in = OpenIn(path, true);
  std::string head(std::max(kNeuralModelMagic.size(), kSvmModelMagic.size()), '\0');
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  if (head.starts_with(kNeuralModelMagic)) return ModelKind::kLstm;
  if (head.starts_with(kSvmModelMagic)) return ModelKind::kSvm;
  throw ModelFormatError("'" + path + "' is neither an svm nor an lstm model");
}

void TrainSvm(const RunConfig &config, const std::vector<Document> &docs,
              std::ostream *log, std::ostream &info) {
  std::vector<SparseFeatureVector> vectors;
  std::vector<int> labels;
  for (const Document &doc : docs) {
    for (SparseFeatureVector &v : ExtractSvmFeatures(doc)) vectors.push_back(std::move(v));
    for (const Mention &m : doc.mentions)
      labels.push_back(m.gold_label == Label::kAnaphoric ? 1 : -1);
  }
  FeatureDictionary dictionary = FeatureDictionary::Build(vectors, config.min_count);
  std::vector<SvmInstance> instances;
  instances.reserve(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i)
    instances.push_back({dictionary.Encode(vectors[i]), labels[i]});

  SmoOptions options;
  options.c = config.c;
  options.tol = config.tol;
  options.max_passes = config.max_passes;
  options.positive_weight = config.positive_weight;
  options.seed = config.seed;
  SvmModel model = TrainSmo(instances, options, [&](const SmoSweep &s) {
    if (!log) return;
    nlohmann::json j = {{"sweep", s.sweep},
                        {"full", s.full},
                        {"violators", s.violators},
                        {"changed", s.changed}};
    *log << j.dump() << '\n';
  });
  model.dictionary = std::move(dictionary);
  info << "svm: " << instances.size() << " instances, " << model.dictionary.size()
       << " features, " << model.support_vectors.size() << " support vectors\n";
  std::ofstream out = OpenOut(config.model_path);
  SaveSvmModel(model, out);
}

void TrainLstm(const RunConfig &config, const std::vector<Document> &docs,
               std::ostream *log, std::ostream &info) {
  Require(config.embeddings_path, "--embeddings", "train --model-kind lstm");
  std::vector<NeuralInstance> instances;
  for (const Document &doc : docs) {
    for (NeuralInstance &inst : BuildNeuralInstances(doc))
      instances.push_back(std::move(inst));
  }
  TrainConfig tc;
  tc.batch_size = config.batch_size;
  tc.dropout = config.dropout;
  tc.epochs = config.epochs;
  tc.learning_rate = config.learning_rate;
  tc.seed = config.seed;
  tc.use_surface = config.use_surface;
  tc.dims.embedding = SniffDimension(config.embeddings_path);

  std::vector<std::string> warnings;
  std::ifstream emb = OpenIn(config.embeddings_path);
  EmbeddingTable table = LoadEmbeddings(emb, SequenceVocabulary(instances),
                                        tc.dims.embedding, config.seed, &warnings);
  for (const std::string &w : warnings) info << "warning: " << w << '\n';

  NeuralModel model = TrainNeural(instances, tc, std::move(table), [&](const BatchLog &b) {
    if (!log) return;
    nlohmann::json j = {{"epoch", b.epoch}, {"batch", b.batch}, {"size", b.size},
                        {"loss", b.loss}};
    *log << j.dump() << '\n';
  });
  info << "lstm: " << instances.size() << " instances, vocabulary "
       << model.table.size() << '\n';
  std::ofstream out = OpenOut(config.model_path, true);
  SaveNeuralModel(model, out);
}

struct PredictionRow {
  const Document *doc;
  std::size_t mention;
  Label predicted;
  double score;
};

}  // namespace

ModelKind ParseModelKind(const std::string &name) {
  if (name == "svm") return ModelKind::kSvm;
  if (name == "lstm") return ModelKind::kLstm;
  throw std::invalid_argument("unknown model kind '" + name + "' (svm or lstm)");
}

const char *ModelKindName(ModelKind kind) {
  return kind == ModelKind::kSvm ? "svm" : "lstm";
}

DocRange ParseDocRange(const std::string &text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("document range '" + text + "' is not BEGIN:END");
  auto number = [&](std::string_view s, std::size_t fallback) {
    if (s.empty()) return fallback;
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw std::invalid_argument("document range '" + text + "' is not BEGIN:END");
    return v;
  };
  const std::string_view view = text;
  DocRange r{number(view.substr(0, colon), 0),
             number(view.substr(colon + 1), static_cast<std::size_t>(-1))};
  if (r.begin > r.end) throw std::invalid_argument("document range '" + text + "' is empty");
  return r;
}

std::vector<Document> LoadCorpus(const RunConfig &config) {
  std::vector<Document> docs;
  for (const std::string &path : config.corpus_paths) {
    std::ifstream in = OpenIn(path);
    try {
      for (Document &d : ParseConll(in)) docs.push_back(std::move(d));
    } catch (const ParseError &e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  if (!config.mentions_path.empty()) {
    std::ifstream in = OpenIn(config.mentions_path);
    try {
      MergeSidecarMentions(docs, in);
    } catch (const ParseError &e) {
      throw ParseError(config.mentions_path + ": " + e.what());
    }
  }
  const std::size_t begin = std::min(config.docs.begin, docs.size());
  const std::size_t end = std::min(config.docs.end, docs.size());
  return std::vector<Document>(std::make_move_iterator(docs.begin() + begin),
                               std::make_move_iterator(docs.begin() + end));
}

void RunTrain(const RunConfig &config, std::ostream &info) {
  if (!config.model_kind) throw std::invalid_argument("train requires --model-kind");
  if (config.corpus_paths.empty()) throw std::invalid_argument("train requires --corpus");
  Require(config.model_path, "--model", "train");
  const std::vector<Document> docs = LoadCorpus(config);

  std::ofstream log_file;
  if (!config.log_path.empty()) log_file = OpenOut(config.log_path);
  std::ostream *log = config.log_path.empty() ? nullptr : &log_file;
  if (*config.model_kind == ModelKind::kSvm) {
    TrainSvm(config, docs, log, info);
  } else {
    TrainLstm(config, docs, log, info);
  }
}

void RunPredict(const RunConfig &config, std::ostream &info) {
  Require(config.model_path, "--model", "predict");
  Require(config.out_path, "--out", "predict");
  if (config.corpus_paths.empty()) throw std::invalid_argument("predict requires --corpus");
  const ModelKind kind = SniffModelKind(config.model_path);
  if (config.model_kind && *config.model_kind != kind) {
    throw ModelFormatError("'" + config.model_path + "' holds an " +
                           ModelKindName(kind) + " model, not " +
                           ModelKindName(*config.model_kind));
  }
  const std::vector<Document> docs = LoadCorpus(config);

  std::vector<PredictionRow> rows;
  if (kind == ModelKind::kSvm) {
    std::ifstream in = OpenIn(config.model_path);
    const SvmModel model = LoadSvmModel(in);
    for (const Document &doc : docs) {
      const std::vector<SparseFeatureVector> vectors = ExtractSvmFeatures(doc);
      for (std::size_t i = 0; i < vectors.size(); ++i) {
        const SvmPrediction p = Predict(model, vectors[i]);
        rows.push_back({&doc, i, p.label, p.margin});
      }
    }
  } else {
    std::ifstream in = OpenIn(config.model_path, true);
    NeuralModel model = LoadNeuralModel(in);
    std::vector<std::vector<NeuralInstance>> per_doc;
    for (const Document &doc : docs) per_doc.push_back(BuildNeuralInstances(doc));
    if (config.extend_vocab) {
      Require(config.embeddings_path, "--embeddings", "predict --extend-vocab");
      std::set<std::string> vocab;
      for (const auto &instances : per_doc) {
        auto v = SequenceVocabulary(instances);
        vocab.insert(v.begin(), v.end());
      }
      std::vector<std::string> warnings;
      std::ifstream emb = OpenIn(config.embeddings_path);
      model.table = ExtendVocabulary(model.table, vocab, emb, config.seed, &warnings);
      for (const std::string &w : warnings) info << "warning: " << w << '\n';
    }
    for (std::size_t d = 0; d < docs.size(); ++d) {
      for (std::size_t i = 0; i < per_doc[d].size(); ++i) {
        const NeuralInstance &inst = per_doc[d][i];
        const NeuralPrediction p = PredictNeural(model, inst.sequence, inst.surface);
        rows.push_back({&docs[d], i, p.label, p.anaphoric_probability});
      }
    }
  }

  std::ofstream out = OpenOut(config.out_path);
  out << kPredictionsHeader << '\n';
  for (const PredictionRow &r : rows) {
    const Mention &m = r.doc->mentions[r.mention];
    out << r.doc->doc_id << '\t' << r.doc->part << '\t' << m.span.sentence_index
        << '\t' << m.span.start << '\t' << m.span.end << '\t'
        << BucketName(BucketOf(m.type.kind)) << '\t' << LabelName(m.gold_label)
        << '\t' << LabelName(r.predicted) << '\t' << FormatDouble(r.score) << '\n';
  }
  info << "predicted " << rows.size() << " mentions in " << docs.size()
       << " documents\n";
}

void RunEvaluate(const RunConfig &config, std::ostream &out) {
  Require(config.predictions_path, "--predictions", "evaluate");
  const std::string &path = config.predictions_path;
  std::ifstream in = OpenIn(path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty predictions file");

  std::map<std::string, std::size_t> columns;
  {
    std::istringstream header(line);
    std::string name;
    for (std::size_t k = 0; std::getline(header, name, '\t'); ++k) columns[name] = k;
  }
  auto column = [&](const char *name) {
    auto it = columns.find(name);
    if (it == columns.end())
      throw FormatError(path + ": missing '" + name + "' column");
    return it->second;
  };
  const std::size_t gold_col = column("gold");
  const std::size_t pred_col = column("predicted");
  const std::size_t type_col = column("type");

  std::vector<Label> gold, predicted;
  std::vector<TypeBucket> buckets;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string f;
    while (std::getline(row, f, '\t')) fields.push_back(f);
    if (fields.size() != columns.size()) {
      throw FormatError(path + ": line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(columns.size()));
    }
    gold.push_back(ParseLabel(fields[gold_col], line_no));
    predicted.push_back(ParseLabel(fields[pred_col], line_no));
    buckets.push_back(ParseBucket(fields[type_col]));
  }

  const EvalReport report = ScoreByType(gold, predicted, buckets);
  if (config.out_path.empty()) {
    WriteReportText(report, out);
  } else {
    std::ofstream text = OpenOut(config.out_path);
    WriteReportText(report, text);
  }
  if (!config.report_path.empty()) {
    std::ofstream tsv = OpenOut(config.report_path);
    WriteReportTsv(report, tsv);
  }
}

void RunSynth(const SynthConfig &config, std::ostream &info) {
  Require(config.out_path, "--out", "synth");
  SyntheticOptions options;
  options.documents = config.documents;
  options.sentences = config.sentences;
  options.seed = config.seed;
  const std::vector<Document> docs = GenerateSyntheticCorpus(options);
  std::ofstream out = OpenOut(config.out_path);
  WriteConll(docs, out);
  std::size_t mentions = 0;
  for (const Document &d : docs) mentions += d.mentions.size();
  info << "wrote " << docs.size() << " documents, " << mentions << " mentions\n";
}

}  // namespace anaphor::cli
