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

// Platt's SMO: the first multiplier comes from the KKT violators of the
// current sweep, the second maximizes |E1 - E2| among unbounded multipliers,
// falling back to scans from a random offset. Errors are kept for every
// instance as F_i = sum_j a_j y_j K_ij - y_i, i.e. without the bias, so the
// bias only enters through the KKT test.

#include "anaphor/svm.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <list>
#include <random>
#include <sstream>

namespace anaphor {

FeatureDictionary FeatureDictionary::Build(
    std::span<const SparseFeatureVector> training, std::size_t min_count) {
  if (training.empty()) throw TrainingError("empty training set");
  std::unordered_map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  for (const SparseFeatureVector &v : training) {
    for (const std::string &f : v.entries()) {
      auto [it, inserted] = counts.emplace(f, 0);
      if (inserted) order.push_back(f);
      ++it->second;
    }
  }
  FeatureDictionary dict;
  for (const std::string &f : order) {
    const std::size_t c = counts.at(f);
    if (c >= min_count) dict.Insert(f, c);
  }
  if (dict.size() == 0) {
    throw TrainingError("empty dictionary: no feature occurs in at least " +
                        std::to_string(min_count) + " instances (min_count=" +
                        std::to_string(min_count) + ")");
  }
  return dict;
}

void FeatureDictionary::Insert(const std::string &feature, std::size_t count) {
  const auto index = static_cast<std::uint32_t>(features_.size());
  auto [it, inserted] = entries_.emplace(feature, Entry{index, count});
  if (!inserted) return;
  features_.push_back(feature);
  counts_.push_back(count);
}

const FeatureDictionary::Entry *FeatureDictionary::Find(
    const std::string &feature) const {
  auto it = entries_.find(feature);
  return it == entries_.end() ? nullptr : &it->second;
}

IndexVector FeatureDictionary::Encode(const SparseFeatureVector &v) const {
  IndexVector out;
  out.reserve(v.size());
  for (const std::string &f : v.entries()) {
    if (const Entry *e = Find(f)) out.push_back(e->index);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double AnchoredKernel(std::span<const std::uint32_t> x,
                      std::span<const std::uint32_t> z) {
  std::size_t common = 0;
  auto a = x.begin();
  auto b = z.begin();
  while (a != x.end() && b != z.end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      ++common;
      ++a;
      ++b;
    }
  }
  const double dot = static_cast<double>(common) + 1.0;
  return dot * dot;
}

double SvmModel::Margin(std::span<const std::uint32_t> x) const {
  double sum = bias;
  for (std::size_t i = 0; i < support_vectors.size(); ++i)
    sum += alphas[i] * AnchoredKernel(support_vectors[i], x);
  return sum;
}

namespace {

// LRU cache of full kernel rows.
class KernelCache {
 public:
  KernelCache(std::span<const SvmInstance> data, std::size_t bytes)
      : data_(data) {
    const std::size_t row_bytes = std::max<std::size_t>(1, data.size()) * sizeof(double);
    capacity_ = std::max<std::size_t>(2, bytes / row_bytes);
  }

  const std::vector<double> &Row(std::size_t i) {
    auto it = index_.find(i);
    if (it != index_.end()) {
      rows_.splice(rows_.begin(), rows_, it->second);
      return it->second->second;
    }
    if (rows_.size() >= capacity_) {
      index_.erase(rows_.back().first);
      rows_.pop_back();
    }
    std::vector<double> row(data_.size());
    for (std::size_t j = 0; j < data_.size(); ++j) {
      row[j] = AnchoredKernel(data_[i].x, data_[j].x);
      if (!std::isfinite(row[j])) {
        throw TrainingError("internal error: non-finite kernel value");
      }
    }
    rows_.emplace_front(i, std::move(row));
    index_[i] = rows_.begin();
    return rows_.front().second;
  }

 private:
  using Entry = std::pair<std::size_t, std::vector<double>>;
  std::span<const SvmInstance> data_;
  std::size_t capacity_;
  std::list<Entry> rows_;
  std::unordered_map<std::size_t, std::list<Entry>::iterator> index_;
};

class SmoSolver {
 public:
  SmoSolver(std::span<const SvmInstance> data, const SmoOptions &options)
      : data_(data),
        opt_(options),
        n_(data.size()),
        cache_(data, options.cache_bytes),
        rng_(options.seed) {
    alpha_.assign(n_, 0.0);
    grad_.resize(n_);
    diag_.resize(n_);
    cost_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      grad_[i] = -static_cast<double>(data_[i].y);
      diag_[i] = AnchoredKernel(data_[i].x, data_[i].x);
      cost_[i] = data_[i].y > 0 ? opt_.c * opt_.positive_weight : opt_.c;
    }
    // Platt's test compares each error with the running bias; half the
    // tolerance there keeps the final spread of unbounded errors within tol.
    kkt_tol_ = 0.5 * opt_.tol;
    max_steps_ = opt_.max_iterations ? opt_.max_iterations : 100 * n_ + 10000;
  }

  void Solve(const std::function<void(const SmoSweep &)> &on_sweep) {
    bool examine_all = true;
    int quiet = 0;
    std::size_t sweep = 0;
    while (steps_ < max_steps_) {
      violators_ = 0;
      std::size_t changed = 0;
      for (std::size_t i = 0; i < n_ && steps_ < max_steps_; ++i) {
        if (examine_all || IsFree(i)) changed += ExamineExample(i);
      }
      if (on_sweep) on_sweep({++sweep, examine_all, violators_, changed});
      if (examine_all) {
        if (changed == 0) {
          if (++quiet >= opt_.max_passes) break;
        } else {
          quiet = 0;
          examine_all = false;
        }
      } else if (changed == 0) {
        examine_all = true;
      }
    }
    bias_ = FinalBias();
  }

  SvmModel Model() const {
    SvmModel model;
    model.bias = bias_;
    model.c = opt_.c;
    model.positive_weight = opt_.positive_weight;
    for (std::size_t i = 0; i < n_; ++i) {
      if (alpha_[i] > 1e-12) {
        model.support_vectors.push_back(data_[i].x);
        model.alphas.push_back(alpha_[i] * data_[i].y);
      }
    }
    return model;
  }

 private:
  bool IsFree(std::size_t i) const {
    return alpha_[i] > 0.0 && alpha_[i] < cost_[i];
  }

  double Error(std::size_t i) const { return grad_[i] + bias_; }

  int ExamineExample(std::size_t i2) {
    const double y2 = data_[i2].y;
    const double a2 = alpha_[i2];
    const double r2 = Error(i2) * y2;
    if (!((r2 < -kkt_tol_ && a2 < cost_[i2]) || (r2 > kkt_tol_ && a2 > 0.0)))
      return 0;
    ++violators_;

    const double e2 = Error(i2);
    std::size_t best = n_;
    double best_gap = -1.0;
    std::size_t free_count = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!IsFree(i)) continue;
      ++free_count;
      const double gap = std::fabs(Error(i) - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (free_count > 1 && best != n_ && TakeStep(best, i2)) return 1;

    const std::size_t offset = n_ ? rng_() % n_ : 0;
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i1 = (offset + k) % n_;
      if (IsFree(i1) && TakeStep(i1, i2)) return 1;
    }
    const std::size_t offset_all = n_ ? rng_() % n_ : 0;
    for (std::size_t k = 0; k < n_; ++k) {
      const std::size_t i1 = (offset_all + k) % n_;
      if (TakeStep(i1, i2)) return 1;
    }
    return 0;
  }

  bool TakeStep(std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double y1 = data_[i1].y;
    const double y2 = data_[i2].y;
    const double a1 = alpha_[i1];
    const double a2 = alpha_[i2];
    const double c1 = cost_[i1];
    const double c2 = cost_[i2];
    const double e1 = Error(i1);
    const double e2 = Error(i2);

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(c2, c1 - a1 + a2);
    } else {
      lo = std::max(0.0, a1 + a2 - c1);
      hi = std::min(c2, a1 + a2);
    }
    if (hi - lo <= 1e-15) return false;

    const double k12 = AnchoredKernel(data_[i1].x, data_[i2].x);
    const double eta = diag_[i1] + diag_[i2] - 2.0 * k12;
    double new_a2;
    if (eta > 1e-12) {
      new_a2 = std::clamp(a2 + y2 * (e1 - e2) / eta, lo, hi);
    } else {
      // Flat curvature: the dual is linear along the constraint line.
      const double slope = y2 * (e1 - e2);
      if (slope > 1e-12) {
        new_a2 = hi;
      } else if (slope < -1e-12) {
        new_a2 = lo;
      } else {
        return false;
      }
    }
    if (std::fabs(new_a2 - a2) < 1e-12 * (new_a2 + a2 + 1e-12)) return false;

    double new_a1 = a1 + y1 * y2 * (a2 - new_a2);
    new_a1 = std::clamp(new_a1, 0.0, c1);
    if (new_a1 < 1e-12 * c1) new_a1 = 0.0;
    if (new_a1 > c1 * (1.0 - 1e-12)) new_a1 = c1;
    if (new_a2 < 1e-12 * c2) new_a2 = 0.0;
    if (new_a2 > c2 * (1.0 - 1e-12)) new_a2 = c2;

    const double d1 = y1 * (new_a1 - a1);
    const double d2 = y2 * (new_a2 - a2);
    const double b1 = bias_ - e1 - d1 * diag_[i1] - d2 * k12;
    const double b2 = bias_ - e2 - d1 * k12 - d2 * diag_[i2];
    alpha_[i1] = new_a1;
    alpha_[i2] = new_a2;
    if (IsFree(i1)) {
      bias_ = b1;
    } else if (IsFree(i2)) {
      bias_ = b2;
    } else {
      bias_ = 0.5 * (b1 + b2);
    }

    // The cache keeps at least two rows, so row1 survives fetching row2.
    const std::vector<double> &row1 = cache_.Row(i1);
    const std::vector<double> &row2 = cache_.Row(i2);
    for (std::size_t i = 0; i < n_; ++i) grad_[i] += d1 * row1[i] + d2 * row2[i];
    ++steps_;
    return true;
  }

  // Average over unbounded multipliers of -F_i; without any, the midpoint of
  // the interval allowed by the bounded ones.
  double FinalBias() const {
    double sum = 0.0;
    std::size_t free = 0;
    double lower = -HUGE_VAL, upper = HUGE_VAL;
    for (std::size_t i = 0; i < n_; ++i) {
      const double candidate = -grad_[i];
      if (IsFree(i)) {
        sum += candidate;
        ++free;
      } else if ((alpha_[i] == 0.0) == (data_[i].y > 0)) {
        lower = std::max(lower, candidate);
      } else {
        upper = std::min(upper, candidate);
      }
    }
    if (free > 0) return sum / static_cast<double>(free);
    if (std::isinf(lower) && std::isinf(upper)) return 0.0;
    if (std::isinf(lower)) return upper;
    if (std::isinf(upper)) return lower;
    return 0.5 * (lower + upper);
  }

  std::span<const SvmInstance> data_;
  SmoOptions opt_;
  std::size_t n_;
  KernelCache cache_;
  std::mt19937_64 rng_;
  std::vector<double> alpha_, grad_, diag_, cost_;
  double bias_ = 0.0;
  double kkt_tol_ = 0.0;
  std::size_t steps_ = 0;
  std::size_t max_steps_ = 0;
  std::size_t violators_ = 0;
};

std::string FormatDouble(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double ParseDouble(const std::string &s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ModelFormatError("svm model: bad number '" + s + "'");
  return v;
}

}  // namespace

SvmModel TrainSmo(std::span<const SvmInstance> instances,
                  const SmoOptions &options,
                  const std::function<void(const SmoSweep &)> &on_sweep) {
  std::size_t positives = 0;
  for (const SvmInstance &inst : instances) {
    if (inst.y != 1 && inst.y != -1)
      throw TrainingError("labels must be +1 or -1");
    if (inst.y > 0) ++positives;
  }
  if (instances.size() < 2 || positives == 0 || positives == instances.size()) {
    throw TrainingError(
        "degenerate training set: both classes need at least one instance");
  }
  SmoSolver solver(instances, options);
  solver.Solve(on_sweep);
  return solver.Model();
}

double DualObjective(const SvmModel &model) {
  double linear = 0.0, quadratic = 0.0;
  const std::size_t m = model.support_vectors.size();
  for (std::size_t i = 0; i < m; ++i) {
    linear += std::fabs(model.alphas[i]);
    for (std::size_t j = 0; j < m; ++j) {
      quadratic += model.alphas[i] * model.alphas[j] *
                   AnchoredKernel(model.support_vectors[i], model.support_vectors[j]);
    }
  }
  return linear - 0.5 * quadratic;
}

SvmPrediction Predict(const SvmModel &model, const SparseFeatureVector &v) {
  const IndexVector x = model.dictionary.Encode(v);
  SvmPrediction p;
  p.margin = model.Margin(x);
  p.label = p.margin > 0.0 ? Label::kAnaphoric : Label::kNonAnaphoric;
  return p;
}

void SaveSvmModel(const SvmModel &model, std::ostream &out) {
  out << kSvmModelMagic << ' ' << kSvmModelVersion << '\n';
  out << "c " << FormatDouble(model.c) << '\n';
  out << "positive_weight " << FormatDouble(model.positive_weight) << '\n';
  out << "bias " << FormatDouble(model.bias) << '\n';
  const auto &features = model.dictionary.features();
  out << "dictionary " << features.size() << '\n';
  for (std::uint32_t i = 0; i < features.size(); ++i)
    out << features[i] << '\t' << i << '\t' << model.dictionary.count(i) << '\n';
  out << "support_vectors " << model.support_vectors.size() << '\n';
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    out << FormatDouble(model.alphas[i]) << '\t';
    for (std::size_t k = 0; k < model.support_vectors[i].size(); ++k)
      out << (k ? " " : "") << model.support_vectors[i][k];
    out << '\n';
  }
  out << "end\n";
}

SvmModel LoadSvmModel(std::istream &in) {
  auto next_line = [&in](const char *what) {
    std::string line;
    if (!std::getline(in, line))
      throw ModelFormatError(std::string("svm model: truncated before ") + what);
    return line;
  };
  auto keyed = [&](const char *key) {
    std::istringstream s(next_line(key));
    std::string k, v;
    s >> k >> v;
    if (k != key) throw ModelFormatError(std::string("svm model: expected ") + key);
    return v;
  };

  {
    std::istringstream header(next_line("header"));
    std::string magic;
    int version = 0;
    header >> magic >> version;
    if (magic != kSvmModelMagic)
      throw ModelFormatError("not an svm model file");
    if (version != kSvmModelVersion) {
      throw ModelFormatError("svm model version " + std::to_string(version) +
                             " is not supported (expected " +
                             std::to_string(kSvmModelVersion) + ")");
    }
  }
  SvmModel model;
  model.c = ParseDouble(keyed("c"));
  model.positive_weight = ParseDouble(keyed("positive_weight"));
  model.bias = ParseDouble(keyed("bias"));
  const std::size_t dict_size = std::stoul(keyed("dictionary"));
  for (std::size_t i = 0; i < dict_size; ++i) {
    std::string line = next_line("dictionary entry");
    auto t1 = line.find('\t');
    auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos)
      throw ModelFormatError("svm model: bad dictionary line " + std::to_string(i));
    if (std::stoul(line.substr(t1 + 1, t2 - t1 - 1)) != i)
      throw ModelFormatError("svm model: dictionary indices are not dense");
    model.dictionary.Insert(line.substr(0, t1), std::stoul(line.substr(t2 + 1)));
  }
  const std::size_t sv_count = std::stoul(keyed("support_vectors"));
  for (std::size_t i = 0; i < sv_count; ++i) {
    std::string line = next_line("support vector");
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ModelFormatError("svm model: bad support vector line");
    model.alphas.push_back(ParseDouble(line.substr(0, tab)));
    IndexVector x;
    std::istringstream s(line.substr(tab + 1));
    std::uint32_t index;
    while (s >> index) {
      if (index >= dict_size)
        throw ModelFormatError("svm model: feature index out of range");
      x.push_back(index);
    }
    model.support_vectors.push_back(std::move(x));
  }
  if (next_line("end") != "end") throw ModelFormatError("svm model: missing end");
  return model;
}

}  // namespace anaphor
