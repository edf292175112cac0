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

#include "anaphor/neural.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>

#include "anaphor/errors.h"

namespace anaphor {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

// Uniform double in [lo, hi) from the top 53 bits of one draw.
double Uniform(std::mt19937_64 &rng, double lo, double hi) {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

constexpr std::array<std::string_view, 4> kSpecialSymbols = {
    kMentionPlaceholder, kMentionSeparator, kHeadSeparator, kOovSymbol};

std::vector<double> RandomRow(std::size_t dim, std::mt19937_64 &rng) {
  const double scale = 0.5 / static_cast<double>(dim);
  std::vector<double> row(dim);
  for (double &v : row) v = Uniform(rng, -scale, scale);
  return row;
}

// One parsed line of an embedding stream.
struct VectorLine {
  std::string word;
  std::string_view values;  // the text after the word
};

std::size_t CountFields(std::string_view s) {
  std::size_t count = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i == s.size()) break;
    ++count;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
  }
  return count;
}

std::vector<double> ParseValues(std::string_view s, std::size_t dim,
                                std::size_t line_no) {
  std::vector<double> out;
  out.reserve(dim);
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i == s.size()) break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + j, v);
    if (ec != std::errc() || ptr != s.data() + j) {
      throw FormatError("embeddings line " + std::to_string(line_no) +
                        ": bad number '" + std::string(s.substr(i, j - i)) + "'");
    }
    out.push_back(v);
    i = j;
  }
  return out;
}

// Reads the stream, validating every line, and returns the vectors of the
// wanted words (all words when `wanted` is null) in stream order.
std::vector<std::pair<std::string, std::vector<double>>> ReadVectors(
    std::istream &in, const std::set<std::string> *wanted, std::size_t dim) {
  std::vector<std::pair<std::string, std::vector<double>>> out;
  std::set<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    if (line.empty()) continue;
    auto space = line.find_first_of(" \t");
    if (space == std::string_view::npos) space = line.size();
    std::string word(line.substr(0, space));
    std::string_view rest = line.substr(space);
    const std::size_t fields = CountFields(rest);
    if (fields != dim) {
      throw FormatError("embeddings line " + std::to_string(line_no) +
                        ": expected " + std::to_string(dim) + " values, found " +
                        std::to_string(fields));
    }
    if (wanted && !wanted->count(word)) continue;
    if (!seen.insert(word).second) continue;  // first occurrence wins
    out.emplace_back(std::move(word), ParseValues(rest, dim, line_no));
  }
  return out;
}

Eigen::Map<const MatrixXd> ConstMatrix(const VectorXd &flat, std::size_t offset,
                                       std::size_t rows, std::size_t cols) {
  return {flat.data() + offset, static_cast<Index>(rows), static_cast<Index>(cols)};
}

Eigen::Map<MatrixXd> MutableMatrix(VectorXd &flat, std::size_t offset,
                                   std::size_t rows, std::size_t cols) {
  return {flat.data() + offset, static_cast<Index>(rows), static_cast<Index>(cols)};
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Activations of one direction, in processing order.
struct DirectionTrace {
  MatrixXd x;      // E x T inputs
  MatrixXd gates;  // 4H x T post-activation (i, f, o, g)
  MatrixXd cells;  // H x T
  MatrixXd tanh_cells;
  MatrixXd hidden;  // H x T
};

void RunDirection(const LstmParams &params, LstmParams::Direction dir,
                  DirectionTrace &trace) {
  const Index hidden = static_cast<Index>(params.dims().hidden);
  const Index steps = trace.x.cols();
  const auto w = params.InputWeights(dir);
  const auto u = params.RecurrentWeights(dir);
  const auto b = params.Bias(dir);

  MatrixXd pre = w * trace.x;
  pre.colwise() += b;
  trace.gates.resize(4 * hidden, steps);
  trace.cells.resize(hidden, steps);
  trace.tanh_cells.resize(hidden, steps);
  trace.hidden.resize(hidden, steps);

  VectorXd h = VectorXd::Zero(hidden);
  VectorXd c = VectorXd::Zero(hidden);
  VectorXd a(4 * hidden);
  for (Index t = 0; t < steps; ++t) {
    a.noalias() = pre.col(t);
    a.noalias() += u * h;
    for (Index k = 0; k < 3 * hidden; ++k) a[k] = Sigmoid(a[k]);
    for (Index k = 3 * hidden; k < 4 * hidden; ++k) a[k] = std::tanh(a[k]);
    c = a.segment(hidden, hidden).cwiseProduct(c) +
        a.head(hidden).cwiseProduct(a.segment(3 * hidden, hidden));
    const VectorXd tc = c.array().tanh();
    h = a.segment(2 * hidden, hidden).cwiseProduct(tc);
    trace.gates.col(t) = a;
    trace.cells.col(t) = c;
    trace.tanh_cells.col(t) = tc;
    trace.hidden.col(t) = h;
  }
}

// Backpropagation through time for one direction. `dh_last` is the gradient
// of the final hidden state. Accumulates weight gradients into `grad` and
// returns the input gradients (E x T, processing order).
MatrixXd BackwardDirection(const LstmParams &params, LstmParams::Direction dir,
                           const DirectionTrace &trace, const VectorXd &dh_last,
                           LstmParams &grad) {
  const Index hidden = static_cast<Index>(params.dims().hidden);
  const Index steps = trace.x.cols();
  const auto w = params.InputWeights(dir);
  const auto u = params.RecurrentWeights(dir);

  MatrixXd da(4 * hidden, steps);
  VectorXd dh = dh_last;
  VectorXd dc = VectorXd::Zero(hidden);
  for (Index t = steps - 1; t >= 0; --t) {
    const auto gates = trace.gates.col(t);
    const auto in = gates.head(hidden).array();
    const auto forget = gates.segment(hidden, hidden).array();
    const auto out = gates.segment(2 * hidden, hidden).array();
    const auto cand = gates.segment(3 * hidden, hidden).array();
    const auto tc = trace.tanh_cells.col(t).array();

    const Eigen::ArrayXd d_out = dh.array() * tc;
    dc.array() += dh.array() * out * (1.0 - tc.square());
    const Eigen::ArrayXd d_in = dc.array() * cand;
    const Eigen::ArrayXd d_cand = dc.array() * in;
    Eigen::ArrayXd d_forget;
    if (t > 0) {
      d_forget = dc.array() * trace.cells.col(t - 1).array();
    } else {
      d_forget = Eigen::ArrayXd::Zero(hidden);
    }
    da.col(t).head(hidden) = d_in * in * (1.0 - in);
    da.col(t).segment(hidden, hidden) = d_forget * forget * (1.0 - forget);
    da.col(t).segment(2 * hidden, hidden) = d_out * out * (1.0 - out);
    da.col(t).segment(3 * hidden, hidden) = d_cand * (1.0 - cand.square());
    dh.noalias() = u.transpose() * da.col(t);
    dc.array() *= forget;
  }

  grad.InputWeights(dir).noalias() += da * trace.x.transpose();
  if (steps > 1) {
    grad.RecurrentWeights(dir).noalias() +=
        da.rightCols(steps - 1) * trace.hidden.leftCols(steps - 1).transpose();
  }
  grad.Bias(dir) += da.rowwise().sum();
  return w.transpose() * da;
}

struct InstanceTrace {
  std::vector<std::size_t> rows;
  DirectionTrace fwd, bwd;
  VectorXd representation, mask, features;
  std::array<double, 2> probabilities{};
};

void ForwardInstance(const LstmParams &params, const EmbeddingTable &table,
                     std::span<const std::size_t> rows,
                     const SurfaceFeatures &surface, const DropoutSpec &dropout,
                     bool use_surface, InstanceTrace &tr) {
  const NeuralDims &dims = params.dims();
  if (table.dim() != dims.embedding) {
    throw std::invalid_argument("embedding table dimension " +
                                std::to_string(table.dim()) +
                                " does not match the model (" +
                                std::to_string(dims.embedding) + ")");
  }
  const Index steps = static_cast<Index>(rows.size());
  const Index hidden = static_cast<Index>(dims.hidden);
  const auto emb = table.Matrix();
  tr.rows.assign(rows.begin(), rows.end());
  tr.fwd.x.resize(emb.rows(), steps);
  tr.bwd.x.resize(emb.rows(), steps);
  for (Index t = 0; t < steps; ++t) {
    tr.fwd.x.col(t) = emb.col(static_cast<Index>(rows[t]));
    tr.bwd.x.col(steps - 1 - t) = emb.col(static_cast<Index>(rows[t]));
  }
  RunDirection(params, LstmParams::kForward, tr.fwd);
  RunDirection(params, LstmParams::kBackward, tr.bwd);

  tr.representation.resize(2 * hidden);
  tr.representation.head(hidden) = tr.fwd.hidden.col(steps - 1);
  tr.representation.tail(hidden) = tr.bwd.hidden.col(steps - 1);

  tr.mask = VectorXd::Ones(2 * hidden);
  if (dropout.rng && dropout.rate > 0.0) {
    const double keep = 1.0 - dropout.rate;
    for (Index k = 0; k < 2 * hidden; ++k) {
      tr.mask[k] = Uniform(*dropout.rng, 0.0, 1.0) < keep ? 1.0 / keep : 0.0;
    }
  }

  const Index surf_dim = static_cast<Index>(dims.surface);
  tr.features.resize(2 * hidden + surf_dim);
  tr.features.head(2 * hidden) = tr.representation.cwiseProduct(tr.mask);
  for (Index k = 0; k < surf_dim; ++k)
    tr.features[2 * hidden + k] = use_surface ? surface.values[k] : 0.0;

  const Eigen::Vector2d logits = params.OutputWeights() * tr.features + params.OutputBias();
  const double top = logits.maxCoeff();
  const double e0 = std::exp(logits[0] - top);
  const double e1 = std::exp(logits[1] - top);
  tr.probabilities = {e0 / (e0 + e1), e1 / (e0 + e1)};
}

// Gradient of `scale` * cross-entropy of one traced instance.
void BackwardInstance(const LstmParams &params, const InstanceTrace &tr,
                      Label label, double scale, LstmParams &grad,
                      Eigen::Map<MatrixXd> &emb_grad) {
  const Index hidden = static_cast<Index>(params.dims().hidden);
  Eigen::Vector2d dlogits(tr.probabilities[0], tr.probabilities[1]);
  dlogits[label == Label::kAnaphoric ? 1 : 0] -= 1.0;
  dlogits *= scale;

  grad.OutputWeights().noalias() += dlogits * tr.features.transpose();
  grad.OutputBias() += dlogits;
  const VectorXd dfeatures = params.OutputWeights().transpose() * dlogits;
  const VectorXd drep = dfeatures.head(2 * hidden).cwiseProduct(tr.mask);

  const MatrixXd dx_fwd =
      BackwardDirection(params, LstmParams::kForward, tr.fwd, drep.head(hidden), grad);
  const MatrixXd dx_bwd =
      BackwardDirection(params, LstmParams::kBackward, tr.bwd, drep.tail(hidden), grad);
  const Index steps = static_cast<Index>(tr.rows.size());
  for (Index t = 0; t < steps; ++t) {
    emb_grad.col(static_cast<Index>(tr.rows[t])) +=
        dx_fwd.col(t) + dx_bwd.col(steps - 1 - t);
  }
}

double CrossEntropy(const std::array<double, 2> &p, Label label) {
  return -std::log(p[label == Label::kAnaphoric ? 1 : 0]);
}

struct AdamState {
  VectorXd m, v;
};

class Adam {
 public:
  Adam(const TrainConfig &cfg, std::size_t params, std::size_t embeddings)
      : cfg_(cfg) {
    params_.m = VectorXd::Zero(static_cast<Index>(params));
    params_.v = VectorXd::Zero(static_cast<Index>(params));
    emb_.m = VectorXd::Zero(static_cast<Index>(embeddings));
    emb_.v = VectorXd::Zero(static_cast<Index>(embeddings));
  }

  void Step(const Gradients &g, VectorXd &params, Eigen::Map<VectorXd> embeddings) {
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    Update(params_, g.params, params, c1, c2);
    Update(emb_, g.embeddings, embeddings, c1, c2);
  }

 private:
  template <typename Target>
  void Update(AdamState &s, const VectorXd &g, Target &&theta, double c1,
              double c2) {
    s.m = cfg_.beta1 * s.m + (1.0 - cfg_.beta1) * g;
    s.v = cfg_.beta2 * s.v + (1.0 - cfg_.beta2) * g.cwiseAbs2();
    theta.array() -= cfg_.learning_rate * (s.m.array() / c1) /
                     ((s.v.array() / c2).sqrt() + cfg_.epsilon);
  }

  TrainConfig cfg_;
  AdamState params_, emb_;
  std::size_t t_ = 0;
};

// Rows of every instance, computed once.
std::vector<std::vector<std::size_t>> EncodeAll(
    const EmbeddingTable &table, std::span<const NeuralInstance> instances) {
  std::vector<std::vector<std::size_t>> out;
  out.reserve(instances.size());
  for (const NeuralInstance &inst : instances)
    out.push_back(EncodeSequence(table, inst.sequence));
  return out;
}

double BatchLossEncoded(const LstmParams &params, const EmbeddingTable &table,
                        std::span<const NeuralInstance> instances,
                        std::span<const std::vector<std::size_t>> rows,
                        std::span<const std::size_t> members,
                        const DropoutSpec &dropout, bool use_surface,
                        Gradients *grad) {
  LstmParams pgrad(params.dims());
  if (grad) {
    grad->embeddings = VectorXd::Zero(static_cast<Index>(table.data().size()));
  }
  Eigen::Map<MatrixXd> emb_grad(grad ? grad->embeddings.data() : nullptr,
                                static_cast<Index>(table.dim()),
                                static_cast<Index>(table.size()));
  const double scale = 1.0 / static_cast<double>(members.size());
  double loss = 0.0;
  InstanceTrace tr;
  for (std::size_t k : members) {
    const NeuralInstance &inst = instances[k];
    ForwardInstance(params, table, rows[k], inst.surface, dropout, use_surface, tr);
    loss += CrossEntropy(tr.probabilities, inst.label);
    if (grad) BackwardInstance(params, tr, inst.label, scale, pgrad, emb_grad);
  }
  if (grad) grad->params = std::move(pgrad.flat());
  return loss * scale;
}

void WriteU64(std::ostream &out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

std::uint64_t ReadU64(std::istream &in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char *>(buf), 8))
    throw ModelFormatError("lstm model: truncated file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

void WriteDouble(std::ostream &out, double d) {
  std::uint64_t bits;
  std::memcpy(&bits, &d, sizeof bits);
  WriteU64(out, bits);
}

double ReadDouble(std::istream &in) {
  const std::uint64_t bits = ReadU64(in);
  double d;
  std::memcpy(&d, &bits, sizeof d);
  return d;
}

void WriteString(std::ostream &out, const std::string &s) {
  WriteU64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string ReadString(std::istream &in) {
  const std::uint64_t n = ReadU64(in);
  if (n > (std::uint64_t{1} << 20)) throw ModelFormatError("lstm model: corrupt string");
  std::string s(n, '\0');
  if (!in.read(s.data(), static_cast<std::streamsize>(n)))
    throw ModelFormatError("lstm model: truncated file");
  return s;
}

}  // namespace

std::optional<std::size_t> EmbeddingTable::Find(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t EmbeddingTable::Lookup(std::string_view symbol) const {
  if (auto row = Find(symbol)) return *row;
  auto oov = Find(kOovSymbol);
  if (!oov) throw std::logic_error("embedding table has no <OOV> row");
  return *oov;
}

std::size_t EmbeddingTable::Add(const std::string &symbol,
                                std::span<const double> values) {
  if (values.size() != dim_) {
    throw std::invalid_argument("embedding row for '" + symbol + "' has " +
                                std::to_string(values.size()) + " values, expected " +
                                std::to_string(dim_));
  }
  auto [it, inserted] = index_.emplace(symbol, symbols_.size());
  if (!inserted) return it->second;
  symbols_.push_back(symbol);
  data_.insert(data_.end(), values.begin(), values.end());
  return it->second;
}

EmbeddingTable LoadEmbeddings(std::istream &in,
                              const std::optional<std::set<std::string>> &restriction,
                              std::size_t dim, std::uint64_t seed,
                              std::vector<std::string> *warnings) {
  std::mt19937_64 rng(seed);
  EmbeddingTable table(dim);
  for (std::string_view s : kSpecialSymbols) table.Add(std::string(s), RandomRow(dim, rng));

  auto vectors = ReadVectors(in, restriction ? &*restriction : nullptr, dim);
  if (restriction) {
    if (vectors.empty() && !restriction->empty() && warnings) {
      warnings->push_back("embedding stream provided no vectors; all " +
                          std::to_string(restriction->size()) +
                          " vocabulary rows are random");
    }
    std::unordered_map<std::string, std::size_t> found;
    for (std::size_t i = 0; i < vectors.size(); ++i) found[vectors[i].first] = i;
    for (const std::string &symbol : *restriction) {
      if (table.Contains(symbol)) continue;
      auto it = found.find(symbol);
      if (it != found.end()) {
        table.Add(symbol, vectors[it->second].second);
      } else {
        table.Add(symbol, RandomRow(dim, rng));
      }
    }
  } else {
    for (const auto &[word, values] : vectors) table.Add(word, values);
  }
  return table;
}

EmbeddingTable ExtendVocabulary(const EmbeddingTable &table,
                                const std::set<std::string> &symbols,
                                std::istream &in, std::uint64_t seed,
                                std::vector<std::string> *warnings) {
  std::set<std::string> missing;
  for (const std::string &s : symbols) {
    if (!table.Contains(s)) missing.insert(s);
  }
  EmbeddingTable out = table;
  auto vectors = ReadVectors(in, &missing, table.dim());
  if (vectors.empty() && !missing.empty() && warnings) {
    warnings->push_back("embedding stream provided no vectors for the " +
                        std::to_string(missing.size()) + " new symbols");
  }
  std::unordered_map<std::string, std::size_t> found;
  for (std::size_t i = 0; i < vectors.size(); ++i) found[vectors[i].first] = i;
  std::mt19937_64 rng(seed);
  for (const std::string &symbol : missing) {
    auto it = found.find(symbol);
    if (it != found.end()) {
      out.Add(symbol, vectors[it->second].second);
    } else {
      out.Add(symbol, RandomRow(table.dim(), rng));
    }
  }
  return out;
}

double OovRate(const EmbeddingTable &table, std::span<const std::string> tokens) {
  if (tokens.empty()) return 0.0;
  std::size_t oov = 0;
  for (const std::string &t : tokens) {
    if (!table.Contains(t)) ++oov;
  }
  return static_cast<double>(oov) / static_cast<double>(tokens.size());
}

LstmParams::Layout LstmParams::MakeLayout(const NeuralDims &d) {
  Layout l{};
  std::size_t offset = 0;
  const std::size_t h4 = 4 * d.hidden;
  for (int dir = 0; dir < 2; ++dir) {
    l.w[dir] = offset;
    offset += h4 * d.embedding;
    l.u[dir] = offset;
    offset += h4 * d.hidden;
    l.b[dir] = offset;
    offset += h4;
  }
  l.out_w = offset;
  offset += 2 * (2 * d.hidden + d.surface);
  l.out_b = offset;
  offset += 2;
  l.total = offset;
  return l;
}

LstmParams::LstmParams(NeuralDims dims)
    : dims_(dims),
      layout_(MakeLayout(dims)),
      flat_(VectorXd::Zero(static_cast<Index>(layout_.total))) {}

LstmParams LstmParams::Random(NeuralDims dims, std::uint64_t seed) {
  LstmParams p(dims);
  std::mt19937_64 rng(seed);
  for (Index i = 0; i < p.flat_.size(); ++i) p.flat_[i] = Uniform(rng, -0.08, 0.08);
  const Index hidden = static_cast<Index>(dims.hidden);
  for (Direction d : {kForward, kBackward}) {
    auto b = p.Bias(d);
    b.setZero();
    b.segment(hidden, hidden).setOnes();
  }
  p.OutputBias().setZero();
  return p;
}

Eigen::Map<MatrixXd> LstmParams::InputWeights(Direction d) {
  return MutableMatrix(flat_, layout_.w[d], 4 * dims_.hidden, dims_.embedding);
}
Eigen::Map<MatrixXd> LstmParams::RecurrentWeights(Direction d) {
  return MutableMatrix(flat_, layout_.u[d], 4 * dims_.hidden, dims_.hidden);
}
Eigen::Map<VectorXd> LstmParams::Bias(Direction d) {
  return {flat_.data() + layout_.b[d], static_cast<Index>(4 * dims_.hidden)};
}
Eigen::Map<MatrixXd> LstmParams::OutputWeights() {
  return MutableMatrix(flat_, layout_.out_w, 2, 2 * dims_.hidden + dims_.surface);
}
Eigen::Map<VectorXd> LstmParams::OutputBias() {
  return {flat_.data() + layout_.out_b, 2};
}
Eigen::Map<const MatrixXd> LstmParams::InputWeights(Direction d) const {
  return ConstMatrix(flat_, layout_.w[d], 4 * dims_.hidden, dims_.embedding);
}
Eigen::Map<const MatrixXd> LstmParams::RecurrentWeights(Direction d) const {
  return ConstMatrix(flat_, layout_.u[d], 4 * dims_.hidden, dims_.hidden);
}
Eigen::Map<const VectorXd> LstmParams::Bias(Direction d) const {
  return {flat_.data() + layout_.b[d], static_cast<Index>(4 * dims_.hidden)};
}
Eigen::Map<const MatrixXd> LstmParams::OutputWeights() const {
  return ConstMatrix(flat_, layout_.out_w, 2, 2 * dims_.hidden + dims_.surface);
}
Eigen::Map<const VectorXd> LstmParams::OutputBias() const {
  return {flat_.data() + layout_.out_b, 2};
}

std::vector<LstmParams::Block> LstmParams::Blocks() const {
  static constexpr std::array<const char *, 4> kGates = {"input", "forget",
                                                         "output", "candidate"};
  std::vector<Block> blocks;
  const std::size_t h = dims_.hidden;
  for (int dir = 0; dir < 2; ++dir) {
    const std::string prefix = dir == kForward ? "forward." : "backward.";
    for (std::size_t g = 0; g < 4; ++g) {
      Block w{prefix + kGates[g] + ".W", {}};
      for (std::size_t c = 0; c < dims_.embedding; ++c)
        for (std::size_t r = g * h; r < (g + 1) * h; ++r)
          w.indices.push_back(layout_.w[dir] + c * 4 * h + r);
      Block u{prefix + kGates[g] + ".U", {}};
      for (std::size_t c = 0; c < h; ++c)
        for (std::size_t r = g * h; r < (g + 1) * h; ++r)
          u.indices.push_back(layout_.u[dir] + c * 4 * h + r);
      Block b{prefix + kGates[g] + ".b", {}};
      for (std::size_t r = g * h; r < (g + 1) * h; ++r)
        b.indices.push_back(layout_.b[dir] + r);
      blocks.push_back(std::move(w));
      blocks.push_back(std::move(u));
      blocks.push_back(std::move(b));
    }
  }
  Block ow{"output.W", {}};
  for (std::size_t i = layout_.out_w; i < layout_.out_b; ++i) ow.indices.push_back(i);
  Block ob{"output.b", {layout_.out_b, layout_.out_b + 1}};
  blocks.push_back(std::move(ow));
  blocks.push_back(std::move(ob));
  return blocks;
}

std::vector<NeuralInstance> BuildNeuralInstances(const Document &doc) {
  const std::vector<MatchFlags> flags = ComputeMatchFlags(doc);
  std::vector<NeuralInstance> out;
  out.reserve(doc.mentions.size());
  for (std::size_t i = 0; i < doc.mentions.size(); ++i) {
    out.push_back({BuildContextSequence(doc, i), ExtractSurfaceFeatures(doc, i, flags[i]),
                   doc.mentions[i].gold_label});
  }
  return out;
}

std::set<std::string> SequenceVocabulary(std::span<const NeuralInstance> instances) {
  std::set<std::string> vocab;
  for (const NeuralInstance &inst : instances)
    vocab.insert(inst.sequence.begin(), inst.sequence.end());
  return vocab;
}

std::vector<std::size_t> EncodeSequence(const EmbeddingTable &table,
                                        const ContextSequence &sequence) {
  std::vector<std::size_t> rows;
  rows.reserve(sequence.size());
  for (const std::string &s : sequence) rows.push_back(table.Lookup(s));
  return rows;
}

ForwardResult Forward(const LstmParams &params, const EmbeddingTable &table,
                      const ContextSequence &sequence,
                      const SurfaceFeatures &surface, const DropoutSpec &dropout,
                      bool use_surface) {
  if (sequence.empty()) throw std::invalid_argument("empty context sequence");
  InstanceTrace tr;
  const auto rows = EncodeSequence(table, sequence);
  ForwardInstance(params, table, rows, surface, dropout, use_surface, tr);
  ForwardResult r;
  r.probabilities = tr.probabilities;
  r.representation = tr.representation;
  r.dropped = tr.representation.cwiseProduct(tr.mask);
  return r;
}

double BatchLoss(const LstmParams &params, const EmbeddingTable &table,
                 std::span<const NeuralInstance> batch, const DropoutSpec &dropout,
                 bool use_surface, Gradients *grad) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const auto rows = EncodeAll(table, batch);
  std::vector<std::size_t> members(batch.size());
  std::iota(members.begin(), members.end(), std::size_t{0});
  return BatchLossEncoded(params, table, batch, rows, members, dropout,
                          use_surface, grad);
}

NeuralModel TrainNeural(std::span<const NeuralInstance> instances,
                        const TrainConfig &config, EmbeddingTable table,
                        const std::function<void(const BatchLog &)> &on_batch) {
  if (instances.empty()) throw TrainingError("no training instances");
  if (config.batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  if (!(config.dropout >= 0.0 && config.dropout < 1.0))
    throw std::invalid_argument("dropout must be in [0, 1)");
  if (table.dim() != config.dims.embedding) {
    throw std::invalid_argument("embedding dimension " + std::to_string(table.dim()) +
                                " does not match the configured " +
                                std::to_string(config.dims.embedding));
  }

  NeuralModel model{LstmParams::Random(config.dims, config.seed), std::move(table),
                    config};
  const auto rows = EncodeAll(model.table, instances);
  // Separate streams for shuffling and dropout masks.
  std::mt19937_64 shuffle_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::mt19937_64 dropout_rng(config.seed ^ 0xc2b2ae3d27d4eb4fULL);
  DropoutSpec dropout{config.dropout, &dropout_rng};
  Adam adam(config, static_cast<std::size_t>(model.params.flat().size()),
            model.table.data().size());

  std::vector<std::size_t> order(instances.size());
  std::size_t step = 0;
  Gradients grad;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[shuffle_rng() % i]);
    }
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      std::span<const std::size_t> members(order.data() + begin, end - begin);
      const double loss =
          BatchLossEncoded(model.params, model.table, instances, rows, members,
                           dropout, config.use_surface, &grad);
      if (!std::isfinite(loss)) {
        throw TrainingError("non-finite loss at batch " + std::to_string(step));
      }
      Eigen::Map<VectorXd> emb(model.table.data().data(),
                               static_cast<Index>(model.table.data().size()));
      adam.Step(grad, model.params.flat(), emb);
      if (on_batch) on_batch({epoch, step, members.size(), loss});
      ++step;
    }
  }
  return model;
}

std::vector<double> TrainOnBatch(NeuralModel &model,
                                 std::span<const NeuralInstance> batch,
                                 std::size_t steps) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  const auto rows = EncodeAll(model.table, batch);
  std::vector<std::size_t> members(batch.size());
  std::iota(members.begin(), members.end(), std::size_t{0});
  std::mt19937_64 dropout_rng(model.config.seed);
  DropoutSpec dropout{model.config.dropout, &dropout_rng};
  Adam adam(model.config, static_cast<std::size_t>(model.params.flat().size()),
            model.table.data().size());
  std::vector<double> losses;
  Gradients grad;
  for (std::size_t s = 0; s < steps; ++s) {
    losses.push_back(BatchLossEncoded(model.params, model.table, batch, rows,
                                      members, dropout, model.config.use_surface,
                                      &grad));
    Eigen::Map<VectorXd> emb(model.table.data().data(),
                             static_cast<Index>(model.table.data().size()));
    adam.Step(grad, model.params.flat(), emb);
  }
  return losses;
}

NeuralPrediction PredictNeural(const NeuralModel &model,
                               const ContextSequence &sequence,
                               const SurfaceFeatures &surface) {
  const ForwardResult r = Forward(model.params, model.table, sequence, surface, {},
                                  model.config.use_surface);
  NeuralPrediction p;
  p.anaphoric_probability = r.probabilities[1];
  if (r.probabilities[1] > r.probabilities[0]) {
    p.label = Label::kAnaphoric;
    p.probability = r.probabilities[1];
  } else {
    p.label = Label::kNonAnaphoric;
    p.probability = r.probabilities[0];
  }
  return p;
}

void SaveNeuralModel(const NeuralModel &model, std::ostream &out) {
  out.write(kNeuralModelMagic.data(), static_cast<std::streamsize>(kNeuralModelMagic.size()));
  WriteU64(out, kNeuralModelVersion);
  const TrainConfig &c = model.config;
  WriteU64(out, c.dims.embedding);
  WriteU64(out, c.dims.hidden);
  WriteU64(out, c.dims.surface);
  WriteU64(out, c.batch_size);
  WriteDouble(out, c.dropout);
  WriteU64(out, c.epochs);
  WriteDouble(out, c.learning_rate);
  WriteDouble(out, c.beta1);
  WriteDouble(out, c.beta2);
  WriteDouble(out, c.epsilon);
  WriteU64(out, c.seed);
  WriteU64(out, c.use_surface ? 1 : 0);

  WriteU64(out, model.table.dim());
  WriteU64(out, model.table.size());
  for (const std::string &s : model.table.symbols()) WriteString(out, s);
  for (double v : model.table.data()) WriteDouble(out, v);

  const VectorXd &flat = model.params.flat();
  WriteU64(out, static_cast<std::uint64_t>(flat.size()));
  for (Index i = 0; i < flat.size(); ++i) WriteDouble(out, flat[i]);
}

NeuralModel LoadNeuralModel(std::istream &in) {
  std::string magic(kNeuralModelMagic.size(), '\0');
  if (!in.read(magic.data(), static_cast<std::streamsize>(magic.size())) ||
      magic != kNeuralModelMagic) {
    throw ModelFormatError("not an lstm model file");
  }
  const std::uint64_t version = ReadU64(in);
  if (version != kNeuralModelVersion) {
    throw ModelFormatError("lstm model version " + std::to_string(version) +
                           " is not supported (expected " +
                           std::to_string(kNeuralModelVersion) + ")");
  }
  TrainConfig c;
  c.dims.embedding = ReadU64(in);
  c.dims.hidden = ReadU64(in);
  c.dims.surface = ReadU64(in);
  if (c.dims.surface != kSurfaceDim) throw ModelFormatError("lstm model: bad surface size");
  c.batch_size = ReadU64(in);
  c.dropout = ReadDouble(in);
  c.epochs = ReadU64(in);
  c.learning_rate = ReadDouble(in);
  c.beta1 = ReadDouble(in);
  c.beta2 = ReadDouble(in);
  c.epsilon = ReadDouble(in);
  c.seed = ReadU64(in);
  c.use_surface = ReadU64(in) != 0;

  const std::uint64_t dim = ReadU64(in);
  const std::uint64_t rows = ReadU64(in);
  if (dim != c.dims.embedding) throw ModelFormatError("lstm model: embedding size mismatch");
  std::vector<std::string> symbols;
  symbols.reserve(rows);
  for (std::uint64_t i = 0; i < rows; ++i) symbols.push_back(ReadString(in));
  EmbeddingTable table(dim);
  std::vector<double> row(dim);
  for (std::uint64_t i = 0; i < rows; ++i) {
    for (double &v : row) v = ReadDouble(in);
    table.Add(symbols[i], row);
  }
  if (table.size() != rows) throw ModelFormatError("lstm model: duplicate vocabulary entry");

  LstmParams params(c.dims);
  const std::uint64_t n = ReadU64(in);
  if (n != static_cast<std::uint64_t>(params.flat().size()))
    throw ModelFormatError("lstm model: parameter count mismatch");
  for (Index i = 0; i < params.flat().size(); ++i) params.flat()[i] = ReadDouble(in);
  return NeuralModel{std::move(params), std::move(table), c};
}

}  // namespace anaphor
