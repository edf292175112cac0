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

// anaphor: train, apply and score anaphoricity classifiers.
//
//   anaphor train --model-kind svm --corpus train.conll --model svm.model
//   anaphor train --model-kind lstm --corpus train.conll \
//       --embeddings glove.txt --model lstm.model --log train.jsonl
//   anaphor predict --model svm.model --corpus test.conll --out pred.tsv
//   anaphor evaluate --predictions pred.tsv --report report.tsv
//   anaphor synth --out synthetic.conll

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.h"

namespace {

using anaphor::cli::RunConfig;

void AddInputs(CLI::App *cmd, RunConfig &cfg, std::string &docs) {
  cmd->add_option("--corpus", cfg.corpus_paths, "CoNLL-2012 file(s)")->required();
  cmd->add_option("--mentions", cfg.mentions_path, "extra candidate mentions (TSV)");
  cmd->add_option("--docs", docs, "document range BEGIN:END of the corpus");
  cmd->add_option("--embeddings", cfg.embeddings_path, "word vectors (text)");
  cmd->add_option("--model", cfg.model_path, "model file")->required();
  cmd->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Anaphoricity detection"};
  app.require_subcommand(1);

  RunConfig cfg;
  anaphor::cli::SynthConfig synth;
  std::string kind, docs;

  CLI::App *train = app.add_subcommand("train", "train an svm or lstm model");
  AddInputs(train, cfg, docs);
  train->add_option("--model-kind", kind, "svm or lstm")->required();
  train->add_option("--log", cfg.log_path, "JSON-lines training log");
  train->add_option("--C", cfg.c, "svm cost")->capture_default_str();
  train->add_option("--min-count", cfg.min_count, "svm feature pruning threshold")
      ->capture_default_str();
  train->add_option("--tol", cfg.tol, "svm KKT tolerance")->capture_default_str();
  train->add_option("--max-passes", cfg.max_passes, "svm quiet sweeps before stopping")
      ->capture_default_str();
  train->add_option("--positive-weight", cfg.positive_weight,
                    "svm cost multiplier for anaphoric instances")
      ->capture_default_str();
  train->add_option("--batch-size", cfg.batch_size, "lstm minibatch size")
      ->capture_default_str();
  train->add_option("--dropout", cfg.dropout, "lstm dropout rate")->capture_default_str();
  train->add_option("--lr", cfg.learning_rate, "lstm Adam learning rate")
      ->capture_default_str();
  train->add_option("--epochs", cfg.epochs, "lstm epochs")->capture_default_str();
  train->add_flag("--no-surface{false}", cfg.use_surface,
                  "lstm without the surface features");

  CLI::App *predict = app.add_subcommand("predict", "label the mentions of a corpus");
  AddInputs(predict, cfg, docs);
  predict->add_option("--model-kind", kind, "expected model kind");
  predict->add_option("--out", cfg.out_path, "predictions TSV")->required();
  predict->add_flag("--extend-vocab", cfg.extend_vocab,
                    "add corpus words found in --embeddings to an lstm vocabulary");

  CLI::App *evaluate = app.add_subcommand("evaluate", "score a predictions TSV");
  evaluate->add_option("--predictions", cfg.predictions_path, "predictions TSV")
      ->required();
  evaluate->add_option("--out", cfg.out_path, "text report (default stdout)");
  evaluate->add_option("--report", cfg.report_path, "TSV report");

  CLI::App *gen = app.add_subcommand("synth", "write the synthetic corpus");
  gen->add_option("--out", synth.out_path, "CoNLL output")->required();
  gen->add_option("--documents", synth.documents)->capture_default_str();
  gen->add_option("--sentences", synth.sentences, "sentences per document")
      ->capture_default_str();
  gen->add_option("--seed", synth.seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!kind.empty()) cfg.model_kind = anaphor::cli::ParseModelKind(kind);
    if (!docs.empty()) cfg.docs = anaphor::cli::ParseDocRange(docs);
    if (train->parsed()) {
      anaphor::cli::RunTrain(cfg, std::cerr);
    } else if (predict->parsed()) {
      anaphor::cli::RunPredict(cfg, std::cerr);
    } else if (evaluate->parsed()) {
      anaphor::cli::RunEvaluate(cfg, std::cout);
    } else {
      anaphor::cli::RunSynth(synth, std::cerr);
    }
  } catch (const std::exception &e) {
    std::cerr << "anaphor: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
