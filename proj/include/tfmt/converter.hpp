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

// Second stage: character-level encoder-decoder that rewrites extracted
// spans, a grammar-backed oracle with the same contract, and reintegration
// of converted cores into the formatted token stream.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tfmt/datapipe.hpp"
#include "tfmt/grammar.hpp"
#include "tfmt/rng.hpp"
#include "tfmt/tagger.hpp"

namespace tfmt {

// ---------------------------------------------------------------------------
// Character vocabulary

class CharVocab {
 public:
  static constexpr int kUnk = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kSep = 3;

  static const CharVocab& standard();

  std::size_t size() const { return symbols_.size(); }
  // "<sep>" maps to kSep; characters outside the table map to kUnk and are
  // counted in *unknown.
  std::vector<int> encode(std::string_view text, std::size_t* unknown = nullptr) const;
  // Sentinels render as "<unk>", "<bos>", "<eos>", "<sep>".
  std::string decode(std::span<const int> ids) const;
  bool covers(std::string_view text) const;
  const std::string& characters() const { return chars_; }

 private:
  CharVocab();
  std::vector<std::string> symbols_;
  std::string chars_;
  int index_[256];
};

inline constexpr std::string_view kSepMarker = "<sep>";

// ---------------------------------------------------------------------------
// Model

struct Seq2SeqConfig {
  std::size_t embed_dim = 32;
  std::size_t enc_hidden = 64;  // per direction
  std::size_t dec_hidden = 128;
  double max_output_factor = 3.0;
  std::size_t max_output_constant = 16;
  double init_scale = 1.0;
  std::uint64_t seed = 1;
};

// Gates stacked as [reset; update; candidate]; weights row-major [3H][in].
template <typename T>
struct GruParams {
  std::size_t in = 0;
  std::size_t hid = 0;
  std::vector<T> wx, wh, bx, bh;
};

struct Seq2SeqExample {
  std::vector<int> input;
  // Without <bos>; ends with <eos>.
  std::vector<int> target;
};

struct DecodeResult {
  std::vector<int> ids;  // without <bos>/<eos>
  bool truncated = false;
  std::size_t cap = 0;
};

template <typename T>
class Seq2Seq {
 public:
  Seq2SeqConfig config;
  std::size_t vocab = 0;
  std::vector<T> emb_in;    // vocab x E
  std::vector<T> emb_out;   // vocab x E
  GruParams<T> enc_f, enc_b;
  GruParams<T> dec;         // input E + Hd (previous attentional output)
  std::vector<T> w_init, b_init;  // Hd x 2He
  std::vector<T> w_att;           // Hd x 2He
  std::vector<T> w_comb, b_comb;  // Hd x (Hd + 2He)
  std::vector<T> w_out, b_out;    // vocab x Hd

  static Seq2Seq create(const Seq2SeqConfig& cfg, std::size_t vocab_size);
  Seq2Seq zeros_like() const;
  template <typename U>
  Seq2Seq<U> cast() const;

  std::vector<std::span<T>> tensors();
  std::vector<std::span<const T>> tensors() const;
  static std::vector<std::string> tensor_names();
  std::optional<std::string> validate() const;

  // Mean token cross-entropy under teacher forcing.
  T loss(std::span<const Seq2SeqExample> batch) const;
  // Same value; `grad` receives dLoss/dparams laid out like tensors().
  T loss_and_gradient(std::span<const Seq2SeqExample> batch, Seq2Seq& grad) const;

  std::size_t length_cap(std::size_t input_length) const;
  // Argmax at every step, lowest index on ties; stops at <eos> or the cap.
  DecodeResult greedy_decode(std::span<const int> input) const;
};

extern template class Seq2Seq<float>;
extern template class Seq2Seq<double>;

// ---------------------------------------------------------------------------
// Training

struct ConverterPair {
  std::string input;   // "left<sep>core<sep>right"
  std::string output;  // "<sep>written core<sep>"
  EntityClass entity_class = EntityClass::kNone;
  friend bool operator==(const ConverterPair&, const ConverterPair&) = default;
};

struct PhaseConfig {
  std::size_t steps = 0;
  std::size_t batch_size = 32;
  double learning_rate = 2e-3;
  // Cosine decay from learning_rate to learning_rate * final_lr_fraction.
  double final_lr_fraction = 0.05;
  double clip_norm = 5.0;
  std::uint64_t seed = 1;
};

struct ConverterTrainConfig {
  PhaseConfig generic;  // phase 1
  PhaseConfig itn;      // phase 2
};

class ConverterDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Seq2SeqExample make_example(const ConverterPair& pair);

// Adam on teacher-forced cross-entropy. Deterministic for a fixed seed.
// Returns one loss per step. Throws ConverterDiverged on a non-finite loss.
std::vector<double> train_phase(Seq2Seq<float>& model, std::span<const ConverterPair> pairs, const PhaseConfig& cfg,
                                const std::function<void(std::size_t, double)>& on_step = {});

std::vector<double> train_converter(Seq2Seq<float>& model, std::span<const ConverterPair> generic,
                                    std::span<const ConverterPair> itn, const ConverterTrainConfig& cfg,
                                    const std::function<void(std::size_t, double)>& on_step = {});

void save_converter(const Seq2Seq<float>& model, const std::string& path);
Seq2Seq<float> load_converter(const std::string& path);
std::string converter_to_json(const Seq2Seq<float>& model);
Seq2Seq<float> converter_from_json(std::string_view text);

// JSON Lines with fields input/output (and optional class).
void write_pairs(std::ostream& out, std::span<const ConverterPair> pairs);
std::vector<ConverterPair> read_pairs(std::istream& in);

// ---------------------------------------------------------------------------
// Spans and backends

// Formatted tokens around one extracted span. `core` excludes the carried
// mark of its last token.
struct SpanText {
  SpanKind kind = SpanKind::kItn;
  std::vector<std::string> left;
  std::vector<std::string> core;
  std::vector<std::string> right;
  std::optional<char> carried_punct;
};

SpanText make_span_text(std::span<const std::string> formatted, const ConversionSpan& span);

// "left<sep>core<sep>right", tokens space-joined within each part.
std::string encode_span(const SpanText& span);
// Core text between the first two separators, or nullopt.
std::optional<std::string> core_between_separators(std::string_view text);

enum class ConvertStatus : std::uint8_t { kConverted, kIdentity, kTruncated, kMalformedOutput };
std::string_view to_string(ConvertStatus s);

struct ConvertResult {
  std::string text;  // converted core with the carried mark re-appended
  ConvertStatus status = ConvertStatus::kIdentity;
  std::string diagnostic;
};

class ConverterBackend {
 public:
  virtual ~ConverterBackend() = default;
  virtual ConvertResult convert(const SpanText& span) const = 0;
  virtual std::string name() const = 0;
};

// Scans core tokens left to right: longest grammar inverse parse, then the
// mixed-case lexicon, then the token itself.
class OracleBackend final : public ConverterBackend {
 public:
  explicit OracleBackend(const Grammar& grammar) : grammar_(grammar) {}
  ConvertResult convert(const SpanText& span) const override;
  std::string name() const override { return "oracle"; }

 private:
  const Grammar& grammar_;
};

class NeuralBackend final : public ConverterBackend {
 public:
  explicit NeuralBackend(Seq2Seq<float> model) : model_(std::move(model)) {}
  ConvertResult convert(const SpanText& span) const override;
  std::string name() const override { return "neural"; }
  const Seq2Seq<float>& model() const { return model_; }

 private:
  Seq2Seq<float> model_;
};

// Mixed-case spelling of a lowercase word, if the lexicon knows it.
std::optional<std::string> mixed_case_lookup(std::string_view lower);

// Replaces each span core with its output. Throws std::invalid_argument on
// a count mismatch or unsorted/overlapping spans.
std::vector<std::string> reintegrate_tokens(std::span<const std::string> formatted,
                                            std::span<const ConversionSpan> spans,
                                            std::span<const std::string> outputs);
std::string reintegrate(std::span<const std::string> formatted, std::span<const ConversionSpan> spans,
                        std::span<const std::string> outputs);

// Spoken tokens with predicted punctuation and casing applied. MIXED tokens
// stay lowercase for the converter.
std::vector<std::string> apply_labels(std::span<const std::string> spoken, std::span<const TokenLabels> labels);

// ---------------------------------------------------------------------------
// Training pairs

// Pairs cut from labelled records with gold labels: every ITN/MIXED span,
// plus identity spans around `identity_rate` of the plain tokens.
std::vector<ConverterPair> pairs_from_record(const CorpusRecord& rec, std::size_t radius, double identity_rate,
                                             Rng& rng);

// `count` pairs per class, each from a template sentence embedding one
// generated entity.
std::vector<ConverterPair> make_entity_pairs(const Grammar& grammar, std::span<const EntityClass> classes,
                                             std::size_t count, std::size_t radius, Rng& rng);

// Identity-heavy pairs from the mixed synthetic corpus.
std::vector<ConverterPair> make_generic_pairs(const Grammar& grammar, std::size_t count, std::size_t radius,
                                              Rng& rng);

}  // namespace tfmt
