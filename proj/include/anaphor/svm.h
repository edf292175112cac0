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

// Soft-margin SVM over pruned binary features with the anchored degree-2
// polynomial kernel K(x, z) = (x.z + 1)^2, trained by sequential minimal
// optimization.

#ifndef ANAPHOR_SVM_H_
#define ANAPHOR_SVM_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "anaphor/corpus.h"
#include "anaphor/features.h"

namespace anaphor {

// Sorted, duplicate-free feature indices of a binary vector.
using IndexVector = std::vector<std::uint32_t>;

class FeatureDictionary {
 public:
  struct Entry {
    std::uint32_t index = 0;
    std::size_t count = 0;
  };

  // Counts every feature once per instance and keeps those seen in at least
  // `min_count` instances. Indices follow first occurrence.
  static FeatureDictionary Build(std::span<const SparseFeatureVector> training,
                                 std::size_t min_count = 10);

  // Unknown features are dropped.
  IndexVector Encode(const SparseFeatureVector &v) const;

  // Appends an entry with the next free index; used when loading models.
  void Insert(const std::string &feature, std::size_t count);

  const Entry *Find(const std::string &feature) const;
  const std::vector<std::string> &features() const { return features_; }
  std::size_t count(std::uint32_t index) const { return counts_[index]; }
  std::size_t size() const { return features_.size(); }

 private:
  std::unordered_map<std::string, Entry> entries_;
  std::vector<std::string> features_;  // by index
  std::vector<std::size_t> counts_;    // by index
};

// (|x & z| + 1)^2 for sorted binary index vectors.
double AnchoredKernel(std::span<const std::uint32_t> x,
                      std::span<const std::uint32_t> z);

struct SvmInstance {
  IndexVector x;
  int y = 1;  // +1 anaphoric, -1 non-anaphoric
};

struct SmoOptions {
  double c = 1.0;
  double tol = 1e-3;
  int max_passes = 10;
  // Multiplies C for positive instances (class-weighted cost).
  double positive_weight = 1.0;
  std::uint64_t seed = 1;
  std::size_t cache_bytes = std::size_t{256} << 20;
  // Safety cap on optimization steps; 0 means 100 * n + 10000.
  std::size_t max_iterations = 0;
};

struct SmoSweep {
  std::size_t sweep = 0;
  bool full = false;
  std::size_t violators = 0;
  std::size_t changed = 0;
};

struct SvmModel {
  FeatureDictionary dictionary;
  std::vector<IndexVector> support_vectors;
  std::vector<double> alphas;  // alpha_i * y_i
  double bias = 0.0;
  double c = 1.0;
  double positive_weight = 1.0;

  double Margin(std::span<const std::uint32_t> x) const;
};

// Solves the dual over the given instances. Throws TrainingError when only
// one class is present. `on_sweep` observes each outer-loop pass.
SvmModel TrainSmo(std::span<const SvmInstance> instances,
                  const SmoOptions &options = {},
                  const std::function<void(const SmoSweep &)> &on_sweep = {});

// Dual objective sum(alpha) - 1/2 sum_ij a_i a_j y_i y_j K_ij of a trained
// model restricted to its support vectors.
double DualObjective(const SvmModel &model);

struct SvmPrediction {
  Label label = Label::kNonAnaphoric;
  double margin = 0.0;
};

// Anaphoric iff the margin is strictly positive.
SvmPrediction Predict(const SvmModel &model, const SparseFeatureVector &v);

void SaveSvmModel(const SvmModel &model, std::ostream &out);
SvmModel LoadSvmModel(std::istream &in);

inline constexpr std::string_view kSvmModelMagic = "anaphor-svm";
inline constexpr int kSvmModelVersion = 1;

}  // namespace anaphor

#endif  // ANAPHOR_SVM_H_
