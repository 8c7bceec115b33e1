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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "tfmt/converter.hpp"

namespace tfmt {

// ---------------------------------------------------------------------------
// CharVocab

CharVocab::CharVocab() {
  symbols_ = {"<unk>", "<bos>", "<eos>", "<sep>"};
  chars_ = " ";
  for (char c = 'a'; c <= 'z'; ++c) chars_ += c;
  for (char c = 'A'; c <= 'Z'; ++c) chars_ += c;
  for (char c = '0'; c <= '9'; ++c) chars_ += c;
  chars_ += "$@.,-/:#%'?";
  std::fill(std::begin(index_), std::end(index_), kUnk);
  for (char c : chars_) {
    index_[static_cast<unsigned char>(c)] = static_cast<int>(symbols_.size());
    symbols_.emplace_back(1, c);
  }
}

const CharVocab& CharVocab::standard() {
  static const CharVocab v;
  return v;
}

std::vector<int> CharVocab::encode(std::string_view text, std::size_t* unknown) const {
  std::vector<int> out;
  out.reserve(text.size());
  std::size_t unk = 0;
  for (std::size_t i = 0; i < text.size();) {
    if (text.substr(i, kSepMarker.size()) == kSepMarker) {
      out.push_back(kSep);
      i += kSepMarker.size();
      continue;
    }
    const int id = index_[static_cast<unsigned char>(text[i])];
    if (id == kUnk) ++unk;
    out.push_back(id);
    ++i;
  }
  if (unknown) *unknown = unk;
  return out;
}

std::string CharVocab::decode(std::span<const int> ids) const {
  std::string out;
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= symbols_.size()) throw std::out_of_range("CharVocab::decode");
    out += symbols_[id];
  }
  return out;
}

bool CharVocab::covers(std::string_view text) const {
  std::size_t unk = 0;
  encode(text, &unk);
  return unk == 0;
}

// ---------------------------------------------------------------------------
// Training

Seq2SeqExample make_example(const ConverterPair& pair) {
  const CharVocab& v = CharVocab::standard();
  Seq2SeqExample ex{v.encode(pair.input), v.encode(pair.output)};
  ex.target.push_back(CharVocab::kEos);
  return ex;
}

namespace {

// Epoch-wise shuffle; within windows of 50 batches, examples are sorted by
// input length so that padding stays small. Batch order is shuffled again.
class BatchSampler {
 public:
  BatchSampler(const std::vector<Seq2SeqExample>& ex, std::size_t batch, Rng& rng)
      : ex_(ex), batch_(std::max<std::size_t>(1, std::min(batch, ex.size()))), rng_(rng) {}

  std::vector<Seq2SeqExample> next() {
    if (pos_ == batches_.size()) refill();
    std::vector<Seq2SeqExample> out;
    for (std::size_t i : batches_[pos_]) out.push_back(ex_[i]);
    ++pos_;
    return out;
  }

 private:
  void refill() {
    std::vector<std::size_t> idx(ex_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    rng_.shuffle(idx);
    const std::size_t window = batch_ * 50;
    batches_.clear();
    for (std::size_t w = 0; w < idx.size(); w += window) {
      const auto end = idx.begin() + static_cast<std::ptrdiff_t>(std::min(idx.size(), w + window));
      std::stable_sort(idx.begin() + static_cast<std::ptrdiff_t>(w), end, [&](std::size_t a, std::size_t b) {
        return ex_[a].input.size() < ex_[b].input.size();
      });
      for (auto it = idx.begin() + static_cast<std::ptrdiff_t>(w); it < end;) {
        const auto stop = std::min(end, it + static_cast<std::ptrdiff_t>(batch_));
        batches_.emplace_back(it, stop);
        it = stop;
      }
    }
    rng_.shuffle(batches_);
    pos_ = 0;
  }

  const std::vector<Seq2SeqExample>& ex_;
  std::size_t batch_;
  Rng& rng_;
  std::vector<std::vector<std::size_t>> batches_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<double> train_phase(Seq2Seq<float>& model, std::span<const ConverterPair> pairs, const PhaseConfig& cfg,
                                const std::function<void(std::size_t, double)>& on_step) {
  if (pairs.empty()) throw std::invalid_argument("train_phase: no training pairs");
  if (cfg.batch_size == 0) throw std::invalid_argument("train_phase: batch_size must be positive");
  std::vector<Seq2SeqExample> examples;
  examples.reserve(pairs.size());
  for (const auto& p : pairs) examples.push_back(make_example(p));

  Rng rng(cfg.seed);
  BatchSampler sampler(examples, cfg.batch_size, rng);
  Seq2Seq<float> grad = model.zeros_like();
  Seq2Seq<float> m1 = model.zeros_like();
  Seq2Seq<float> m2 = model.zeros_like();
  auto params = model.tensors();
  auto gs = grad.tensors();
  auto ms = m1.tensors();
  auto vs = m2.tensors();
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;

  std::vector<double> losses;
  losses.reserve(cfg.steps);
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    for (auto& g : gs) std::fill(g.begin(), g.end(), 0.0f);
    const auto batch = sampler.next();
    const double loss = model.loss_and_gradient(batch, grad);
    if (!std::isfinite(loss)) {
      std::ostringstream os;
      os << "converter training diverged at step " << step << ": loss " << loss;
      throw ConverterDiverged(os.str());
    }
    double norm2 = 0;
    for (const auto& g : gs)
      for (float x : g) norm2 += static_cast<double>(x) * x;
    const double norm = std::sqrt(norm2);
    if (!std::isfinite(norm)) throw ConverterDiverged("converter gradient is not finite at step " + std::to_string(step));
    const double scale = (cfg.clip_norm > 0 && norm > cfg.clip_norm) ? cfg.clip_norm / norm : 1.0;
    const double t = static_cast<double>(step + 1);
    const double c1 = 1.0 - std::pow(kBeta1, t), c2 = 1.0 - std::pow(kBeta2, t);
    const double progress = cfg.steps > 1 ? static_cast<double>(step) / static_cast<double>(cfg.steps - 1) : 0.0;
    const double f = cfg.final_lr_fraction;
    const double lr = cfg.learning_rate * (f + (1 - f) * 0.5 * (1 + std::cos(3.141592653589793 * progress)));
    for (std::size_t i = 0; i < params.size(); ++i) {
      for (std::size_t j = 0; j < params[i].size(); ++j) {
        const double g = gs[i][j] * scale;
        const double m = kBeta1 * ms[i][j] + (1 - kBeta1) * g;
        const double v = kBeta2 * vs[i][j] + (1 - kBeta2) * g * g;
        ms[i][j] = static_cast<float>(m);
        vs[i][j] = static_cast<float>(v);
        if (lr != 0) params[i][j] -= static_cast<float>(lr * (m / c1) / (std::sqrt(v / c2) + kEps));
      }
    }
    losses.push_back(loss);
    if (on_step) on_step(step, loss);
  }
  return losses;
}

std::vector<double> train_converter(Seq2Seq<float>& model, std::span<const ConverterPair> generic,
                                    std::span<const ConverterPair> itn, const ConverterTrainConfig& cfg,
                                    const std::function<void(std::size_t, double)>& on_step) {
  if (generic.empty() && itn.empty()) throw std::invalid_argument("train_converter: no training pairs");
  std::vector<double> losses;
  if (!generic.empty() && cfg.generic.steps > 0) losses = train_phase(model, generic, cfg.generic, on_step);
  if (!itn.empty() && cfg.itn.steps > 0) {
    const std::size_t offset = losses.size();
    auto shifted = [&](std::size_t s, double l) {
      if (on_step) on_step(offset + s, l);
    };
    const auto second = train_phase(model, itn, cfg.itn, shifted);
    losses.insert(losses.end(), second.begin(), second.end());
  }
  return losses;
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {
constexpr const char* kConverterFormat = "tfmt-converter";
constexpr int kConverterVersion = 1;
}  // namespace

std::string converter_to_json(const Seq2Seq<float>& m) {
  nlohmann::json j;
  j["format"] = kConverterFormat;
  j["version"] = kConverterVersion;
  j["layout"] =
      "row-major [out][in]; GRU gates stacked reset, update, candidate; decoder input is "
      "[embedding; previous attentional output]; combine input is [decoder state; context]";
  j["vocab"] = CharVocab::standard().characters();
  j["vocab_size"] = m.vocab;
  j["embed_dim"] = m.config.embed_dim;
  j["enc_hidden"] = m.config.enc_hidden;
  j["dec_hidden"] = m.config.dec_hidden;
  j["max_output_factor"] = m.config.max_output_factor;
  j["max_output_constant"] = m.config.max_output_constant;
  nlohmann::json tensors = nlohmann::json::object();
  const auto names = Seq2Seq<float>::tensor_names();
  const auto ts = m.tensors();
  for (std::size_t i = 0; i < ts.size(); ++i) tensors[names[i]] = std::vector<float>(ts[i].begin(), ts[i].end());
  j["tensors"] = tensors;
  return j.dump();
}

Seq2Seq<float> converter_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != kConverterFormat) throw std::runtime_error("not a converter checkpoint");
    if (j.at("version").get<int>() != kConverterVersion)
      throw std::runtime_error("unsupported converter checkpoint version " + j.at("version").dump());
    if (j.at("vocab").get<std::string>() != CharVocab::standard().characters())
      throw std::runtime_error("converter checkpoint vocabulary differs from this build");
    Seq2SeqConfig cfg;
    cfg.embed_dim = j.at("embed_dim").get<std::size_t>();
    cfg.enc_hidden = j.at("enc_hidden").get<std::size_t>();
    cfg.dec_hidden = j.at("dec_hidden").get<std::size_t>();
    cfg.max_output_factor = j.at("max_output_factor").get<double>();
    cfg.max_output_constant = j.at("max_output_constant").get<std::size_t>();
    Seq2Seq<float> m = Seq2Seq<float>::create(cfg, j.at("vocab_size").get<std::size_t>());
    const auto names = Seq2Seq<float>::tensor_names();
    auto ts = m.tensors();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const auto v = j.at("tensors").at(names[i]).get<std::vector<float>>();
      if (v.size() != ts[i].size()) throw std::runtime_error("tensor " + names[i] + " has the wrong size");
      std::copy(v.begin(), v.end(), ts[i].begin());
    }
    if (auto err = m.validate()) throw std::runtime_error("invalid converter checkpoint: " + *err);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed converter checkpoint: ") + e.what());
  }
}

void save_converter(const Seq2Seq<float>& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << converter_to_json(model) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

Seq2Seq<float> load_converter(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return converter_from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Pair files

void write_pairs(std::ostream& out, std::span<const ConverterPair> pairs) {
  for (const auto& p : pairs) {
    nlohmann::json j = {{"input", p.input}, {"output", p.output}};
    if (p.entity_class != EntityClass::kNone) j["class"] = std::string(to_string(p.entity_class));
    out << j.dump() << '\n';
  }
}

std::vector<ConverterPair> read_pairs(std::istream& in) {
  std::vector<ConverterPair> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ConverterPair p;
      p.input = j.at("input").get<std::string>();
      p.output = j.at("output").get<std::string>();
      if (j.contains("class")) {
        const auto c = entity_class_from_string(j.at("class").get<std::string>());
        if (!c) throw std::runtime_error("unknown class " + j.at("class").dump());
        p.entity_class = *c;
      }
      if (p.input.empty()) throw std::runtime_error("empty input");
      out.push_back(std::move(p));
    } catch (const std::exception& e) {
      throw std::runtime_error("pairs line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace tfmt
