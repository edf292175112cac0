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

// Bidirectional LSTM anaphoricity classifier.
//
// The generalized context sequence of a mention is embedded and read by one
// LSTM in each direction. The final hidden states of both directions (after
// dropout during training) are concatenated with the 20 surface features
// and mapped by a single affine layer to softmax probabilities over
// {NonAnaphoric, Anaphoric}. Training minimizes the mean cross-entropy of
// each minibatch with Adam; embeddings are fine-tuned with the rest.
//
// All arithmetic is double precision.

#ifndef ANAPHOR_NEURAL_H_
#define ANAPHOR_NEURAL_H_

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "anaphor/corpus.h"
#include "anaphor/features.h"

namespace anaphor {

inline constexpr std::string_view kOovSymbol = "<OOV>";

// Word vectors, one row per vocabulary symbol. The placeholders of
// ContextSequence and <OOV> always have rows.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 300) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return symbols_.size(); }

  std::optional<std::size_t> Find(std::string_view symbol) const;
  // Row of `symbol`, or of <OOV> when absent.
  std::size_t Lookup(std::string_view symbol) const;
  bool Contains(std::string_view symbol) const { return Find(symbol).has_value(); }

  // Appends a row; an existing symbol keeps its row and values.
  std::size_t Add(const std::string &symbol, std::span<const double> values);

  std::span<const double> Row(std::size_t row) const {
    return {data_.data() + row * dim_, dim_};
  }
  const std::vector<std::string> &symbols() const { return symbols_; }

  // dim x size, column r is the vector of row r.
  Eigen::Map<Eigen::MatrixXd> Matrix() {
    return {data_.data(), static_cast<Eigen::Index>(dim_),
            static_cast<Eigen::Index>(size())};
  }
  Eigen::Map<const Eigen::MatrixXd> Matrix() const {
    return {data_.data(), static_cast<Eigen::Index>(dim_),
            static_cast<Eigen::Index>(size())};
  }
  std::vector<double> &data() { return data_; }
  const std::vector<double> &data() const { return data_; }

 private:
  std::size_t dim_;
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> data_;
};

// Reads `word v1 ... v<dim>` lines. With a restriction, only the restricted
// symbols get rows (pretrained when found, random otherwise); without one,
// every word in the stream is loaded. The four special symbols always get
// random rows first. Random rows are uniform in [-0.5/dim, 0.5/dim].
EmbeddingTable LoadEmbeddings(std::istream &in,
                              const std::optional<std::set<std::string>> &restriction,
                              std::size_t dim = 300, std::uint64_t seed = 1,
                              std::vector<std::string> *warnings = nullptr);

// Adds rows for `symbols` not yet in the table, pretrained when the stream
// has them; existing rows are left untouched.
EmbeddingTable ExtendVocabulary(const EmbeddingTable &table,
                                const std::set<std::string> &symbols,
                                std::istream &in, std::uint64_t seed = 2,
                                std::vector<std::string> *warnings = nullptr);

// Fraction of `tokens` without a row of their own.
double OovRate(const EmbeddingTable &table, std::span<const std::string> tokens);

struct NeuralDims {
  std::size_t embedding = 300;
  std::size_t hidden = 128;
  std::size_t surface = kSurfaceDim;

  bool operator==(const NeuralDims &) const = default;
};

// Contiguous parameter storage with typed views. Each direction has stacked
// gate matrices (rows ordered input, forget, output, candidate).
class LstmParams {
 public:
  enum Direction { kForward = 0, kBackward = 1 };

  explicit LstmParams(NeuralDims dims = {});

  // Weights uniform in [-0.08, 0.08]; biases zero except forget gates (1.0).
  static LstmParams Random(NeuralDims dims, std::uint64_t seed);

  const NeuralDims &dims() const { return dims_; }

  Eigen::Map<Eigen::MatrixXd> InputWeights(Direction d);       // 4H x E
  Eigen::Map<Eigen::MatrixXd> RecurrentWeights(Direction d);   // 4H x H
  Eigen::Map<Eigen::VectorXd> Bias(Direction d);               // 4H
  Eigen::Map<Eigen::MatrixXd> OutputWeights();                 // 2 x (2H + S)
  Eigen::Map<Eigen::VectorXd> OutputBias();                    // 2
  Eigen::Map<const Eigen::MatrixXd> InputWeights(Direction d) const;
  Eigen::Map<const Eigen::MatrixXd> RecurrentWeights(Direction d) const;
  Eigen::Map<const Eigen::VectorXd> Bias(Direction d) const;
  Eigen::Map<const Eigen::MatrixXd> OutputWeights() const;
  Eigen::Map<const Eigen::VectorXd> OutputBias() const;

  Eigen::VectorXd &flat() { return flat_; }
  const Eigen::VectorXd &flat() const { return flat_; }

  // Named parameter blocks: per direction and gate the input, recurrent and
  // bias parts, plus the output weights and bias. Values are flat indices.
  struct Block {
    std::string name;
    std::vector<std::size_t> indices;
  };
  std::vector<Block> Blocks() const;

 private:
  struct Layout {
    std::size_t w[2], u[2], b[2], out_w, out_b, total;
  };
  static Layout MakeLayout(const NeuralDims &dims);

  NeuralDims dims_;
  Layout layout_;
  Eigen::VectorXd flat_;
};

struct TrainConfig {
  std::size_t batch_size = 50;
  double dropout = 0.3;
  std::size_t epochs = 1;
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 1;
  // False zeroes the surface features (the ablation without them).
  bool use_surface = true;
  NeuralDims dims;

  bool operator==(const TrainConfig &) const = default;
};

struct NeuralInstance {
  ContextSequence sequence;
  SurfaceFeatures surface;
  Label label = Label::kNonAnaphoric;
};

// One instance per mention of `doc`, labelled with the gold label.
std::vector<NeuralInstance> BuildNeuralInstances(const Document &doc);

// Every symbol occurring in the instances' sequences.
std::set<std::string> SequenceVocabulary(std::span<const NeuralInstance> instances);

// Embedding rows of a sequence, unknown symbols mapped to <OOV>.
std::vector<std::size_t> EncodeSequence(const EmbeddingTable &table,
                                        const ContextSequence &sequence);

// Dropout on the LSTM representation; inactive when rng is null or rate 0.
struct DropoutSpec {
  double rate = 0.0;
  std::mt19937_64 *rng = nullptr;
};

struct ForwardResult {
  std::array<double, 2> probabilities{};  // {NonAnaphoric, Anaphoric}
  Eigen::VectorXd representation;         // 2H, before dropout
  Eigen::VectorXd dropped;                // 2H, after dropout
};

ForwardResult Forward(const LstmParams &params, const EmbeddingTable &table,
                      const ContextSequence &sequence,
                      const SurfaceFeatures &surface,
                      const DropoutSpec &dropout = {}, bool use_surface = true);

// Gradients shaped like the flat parameter vector and the embedding data.
struct Gradients {
  Eigen::VectorXd params;
  Eigen::VectorXd embeddings;
};

// Mean cross-entropy of a batch. When `grad` is given it receives the
// gradient of that mean (resized and zeroed first).
double BatchLoss(const LstmParams &params, const EmbeddingTable &table,
                 std::span<const NeuralInstance> batch,
                 const DropoutSpec &dropout = {}, bool use_surface = true,
                 Gradients *grad = nullptr);

struct NeuralModel {
  LstmParams params;
  EmbeddingTable table;
  TrainConfig config;
};

struct BatchLog {
  std::size_t epoch = 0;
  std::size_t batch = 0;  // global optimizer step, from 0
  std::size_t size = 0;
  double loss = 0.0;
};

// Minibatch Adam over seeded shuffles of `instances`. Throws TrainingError
// naming the batch when the loss stops being finite.
NeuralModel TrainNeural(std::span<const NeuralInstance> instances,
                        const TrainConfig &config, EmbeddingTable table,
                        const std::function<void(const BatchLog &)> &on_batch = {});

// Runs `steps` Adam updates on one fixed batch, starting from `model`;
// returns the loss before each update.
std::vector<double> TrainOnBatch(NeuralModel &model,
                                 std::span<const NeuralInstance> batch,
                                 std::size_t steps);

struct NeuralPrediction {
  Label label = Label::kNonAnaphoric;
  double probability = 0.0;  // of `label`
  double anaphoric_probability = 0.0;
};

// Argmax without dropout; an exact tie is NonAnaphoric.
NeuralPrediction PredictNeural(const NeuralModel &model,
                               const ContextSequence &sequence,
                               const SurfaceFeatures &surface);

void SaveNeuralModel(const NeuralModel &model, std::ostream &out);
NeuralModel LoadNeuralModel(std::istream &in);

inline constexpr std::string_view kNeuralModelMagic = "ANAPHLSTM";
inline constexpr std::uint32_t kNeuralModelVersion = 1;

}  // namespace anaphor

#endif  // ANAPHOR_NEURAL_H_
