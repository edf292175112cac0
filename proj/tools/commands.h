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

// Subcommands of the anaphor tool. Each one reads its inputs from files,
// writes its outputs to files (or the given stream) and throws on error.

#ifndef ANAPHOR_TOOLS_COMMANDS_H_
#define ANAPHOR_TOOLS_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "anaphor/corpus.h"

namespace anaphor::cli {

enum class ModelKind { kSvm, kLstm };

ModelKind ParseModelKind(const std::string &name);
const char *ModelKindName(ModelKind kind);

// Half-open document range of a corpus; `end` past the corpus size is
// clamped.
struct DocRange {
  std::size_t begin = 0;
  std::size_t end = static_cast<std::size_t>(-1);
};

// Parses "BEGIN:END", "BEGIN:" or ":END".
DocRange ParseDocRange(const std::string &text);

struct RunConfig {
  // Required for train; for predict it only cross-checks the model file.
  std::optional<ModelKind> model_kind;
  std::vector<std::string> corpus_paths;
  std::string mentions_path;
  std::string embeddings_path;
  std::string model_path;
  std::string predictions_path;
  std::string out_path;
  std::string log_path;
  std::string report_path;
  DocRange docs;
  std::uint64_t seed = 1;

  // svm
  double c = 1.0;
  std::size_t min_count = 10;
  double tol = 1e-3;
  int max_passes = 10;
  double positive_weight = 1.0;

  // lstm
  std::size_t batch_size = 50;
  double dropout = 0.3;
  double learning_rate = 0.001;
  std::size_t epochs = 1;
  bool use_surface = true;
  bool extend_vocab = false;
};

// Reads every corpus path, merges the sidecar and keeps `config.docs`.
std::vector<Document> LoadCorpus(const RunConfig &config);

void RunTrain(const RunConfig &config, std::ostream &info);
void RunPredict(const RunConfig &config, std::ostream &info);
void RunEvaluate(const RunConfig &config, std::ostream &out);

struct SynthConfig {
  std::string out_path;
  std::size_t documents = 200;
  std::size_t sentences = 20;
  std::uint64_t seed = 2017;
};

void RunSynth(const SynthConfig &config, std::ostream &info);

inline constexpr const char *kPredictionsHeader =
    "doc_id\tpart\tsentence_index\tstart\tend\ttype\tgold\tpredicted\tscore";

}  // namespace anaphor::cli

#endif  // ANAPHOR_TOOLS_COMMANDS_H_
