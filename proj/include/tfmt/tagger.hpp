// Copyright (c) 2026.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Three-head token classifier over normalized (lowercase) tokens. A single
// windowed encoder feeds linear heads for punctuation, casing and ITN spans.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tfmt/datapipe.hpp"
#include "tfmt/rng.hpp"
#include "tfmt/text.hpp"

namespace tfmt {

enum class Head : std::uint8_t { kPunct = 0, kCase = 1, kItn = 2 };
inline constexpr std::size_t kNumHeads = 3;
inline constexpr std::array<std::size_t, kNumHeads> kHeadSizes = {kNumPunct, kNumCase, kNumItn};
std::string_view to_string(Head h);

class Vocabulary {
 public:
  static constexpr std::size_t kUnk = 0;
  static constexpr std::size_t kPad = 1;

  Vocabulary();
  // Tokens seen at least `min_count` times, in first-seen order.
  static Vocabulary build(std::span<const CorpusRecord> corpus, std::size_t min_count = 1);
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::size_t id(std::string_view token) const;
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

// y = W x + b with W row-major rows x cols.
struct Dense {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> w;
  std::vector<double> b;

  static Dense zeros(std::size_t rows, std::size_t cols);
};

struct TaggerConfig {
  std::size_t embed_dim = 24;
  std::size_t hidden_dim = 96;
  std::size_t radius = 3;
  std::array<double, kNumHeads> alpha = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  // Training.
  std::size_t steps = 2000;
  std::size_t batch_size = 8;
  double learning_rate = 1.0;
  double clip_norm = 5.0;
  double init_scale = 0.1;
  std::uint64_t seed = 1;
};

struct TaggerModel {
  Vocabulary vocab;
  std::size_t embed_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t radius = 0;
  std::vector<double> embedding;  // vocab.size() x embed_dim
  Dense hidden;                   // hidden_dim x (2 radius + 1) embed_dim
  std::array<std::optional<Dense>, kNumHeads> heads;
  std::array<double, kNumHeads> alpha{};

  // Random initialization; every head present.
  static TaggerModel create(Vocabulary vocab, const TaggerConfig& cfg);

  bool has_head(Head h) const { return heads[static_cast<std::size_t>(h)].has_value(); }
  std::size_t window_dim() const { return (2 * radius + 1) * embed_dim; }

  // Copy of the encoder with only head `h`, whose weight becomes 1.
  TaggerModel single_head(Head h) const;

  // Same shapes, all parameters zero.
  TaggerModel zeros_like() const;

  // Every parameter tensor in a fixed order (embedding, hidden w/b, head w/b).
  std::vector<std::span<double>> parameters();
  std::vector<std::span<const double>> parameters() const;

  // nullopt when shapes, loss weights and finiteness all hold.
  std::optional<std::string> validate() const;
};

// Encoder output: n rows of hidden_dim values.
struct Encoded {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<double> values;
  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
};

std::vector<std::size_t> token_ids(const TaggerModel& model, std::span<const std::string> tokens);
Encoded encode(const TaggerModel& model, std::span<const std::string> tokens);
// Encoder passes run on the calling thread so far.
std::size_t encoder_passes();

// Per present head: n rows of softmax probabilities. Absent heads are empty.
struct TaggerOutput {
  std::size_t n = 0;
  std::array<std::vector<double>, kNumHeads> logits;
  std::array<std::vector<double>, kNumHeads> probs;
};

TaggerOutput forward(const TaggerModel& model, std::span<const std::string> tokens);

struct LossValue {
  double total = 0.0;
  std::array<double, kNumHeads> head{};
};

// Mean token cross-entropy per head and their alpha-weighted sum. Throws
// std::invalid_argument for an empty batch or a label/token length mismatch.
LossValue loss(const TaggerModel& model, std::span<const CorpusRecord> batch);

// Loss plus its gradient, laid out like model.parameters().
LossValue loss_and_gradient(const TaggerModel& model, std::span<const CorpusRecord> batch, TaggerModel& grad);

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainResult {
  std::vector<double> losses;  // one per step
};

// Minibatch SGD with global-norm gradient clipping. Deterministic for a
// fixed cfg.seed. Throws TrainingDiverged on a non-finite loss.
TrainResult train_tagger(TaggerModel& model, std::span<const CorpusRecord> corpus, const TaggerConfig& cfg,
                         const std::function<void(std::size_t, double)>& on_step = {});

// Argmax per head, lowest index on ties. Absent heads yield O / LOWER / O.
std::vector<TokenLabels> predict(const TaggerModel& model, std::span<const std::string> tokens);
std::vector<TokenLabels> labels_from_output(const TaggerOutput& out);

struct HeadAccuracy {
  std::array<std::size_t, kNumHeads> correct{};
  std::size_t tokens = 0;
  double accuracy(Head h) const;
};
HeadAccuracy evaluate_accuracy(const TaggerModel& model, std::span<const CorpusRecord> corpus);

void save_tagger(const TaggerModel& model, const std::string& path);
TaggerModel load_tagger(const std::string& path);
std::string tagger_to_json(const TaggerModel& model);
TaggerModel tagger_from_json(std::string_view text);

// ---------------------------------------------------------------------------
// Span extraction

enum class SpanKind : std::uint8_t { kItn = 0, kMixed = 1 };
std::string_view to_string(SpanKind k);

// Half-open token ranges; context contains core.
struct ConversionSpan {
  SpanKind kind = SpanKind::kItn;
  std::size_t core_begin = 0;
  std::size_t core_end = 0;
  std::size_t context_begin = 0;
  std::size_t context_end = 0;
  friend bool operator==(const ConversionSpan&, const ConversionSpan&) = default;
};

// Maximal ITN runs and single MIXED tokens, widened by `radius` on each side
// within [0, labels.size()). Spans whose contexts overlap or touch merge into
// one (cores and contexts unioned, ITN kind wins). Output is sorted and
// disjoint.
std::vector<ConversionSpan> extract_spans(std::span<const TokenLabels> labels, std::size_t radius = 1);

}  // namespace tfmt
