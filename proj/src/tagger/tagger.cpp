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

#include "tfmt/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "tfmt/kernels.hpp"

namespace tfmt {
namespace {

thread_local std::size_t g_encoder_passes = 0;

using simd::kernels;

void softmax_rows(const std::vector<double>& logits, std::size_t k, std::vector<double>& probs) {
  probs.resize(logits.size());
  for (std::size_t r = 0; r < logits.size() / k; ++r) {
    const double* s = logits.data() + r * k;
    double* p = probs.data() + r * k;
    const double mx = *std::max_element(s, s + k);
    double z = 0.0;
    for (std::size_t c = 0; c < k; ++c) z += (p[c] = std::exp(s[c] - mx));
    for (std::size_t c = 0; c < k; ++c) p[c] /= z;
  }
}

// Window inputs x_i: embeddings of tokens i-R..i+R, padded at the edges.
void gather_window(const TaggerModel& m, const std::vector<std::size_t>& ids, std::size_t i, double* x) {
  const auto n = static_cast<std::ptrdiff_t>(ids.size());
  const auto r = static_cast<std::ptrdiff_t>(m.radius);
  for (std::ptrdiff_t o = -r; o <= r; ++o) {
    const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + o;
    const std::size_t id = (j < 0 || j >= n) ? Vocabulary::kPad : ids[static_cast<std::size_t>(j)];
    std::copy_n(m.embedding.data() + id * m.embed_dim, m.embed_dim, x + static_cast<std::size_t>(o + r) * m.embed_dim);
  }
}

// Pre-activations and activations for every token of one sequence.
struct SeqCache {
  std::vector<std::size_t> ids;
  std::vector<double> x;  // n x window_dim
  std::vector<double> z;  // n x hidden_dim, after tanh
};

void encode_into(const TaggerModel& m, SeqCache& c) {
  const std::size_t n = c.ids.size();
  const std::size_t wd = m.window_dim();
  const std::size_t hd = m.hidden_dim;
  c.x.assign(n * wd, 0.0);
  c.z.resize(n * hd);
  const auto& k = kernels<double>();
  for (std::size_t i = 0; i < n; ++i) {
    gather_window(m, c.ids, i, c.x.data() + i * wd);
    double* z = c.z.data() + i * hd;
    std::copy(m.hidden.b.begin(), m.hidden.b.end(), z);
    k.gemv(m.hidden.w.data(), hd, wd, c.x.data() + i * wd, z);
    k.tanh(z, z, hd);
  }
  ++g_encoder_passes;
}

void head_logits(const Dense& head, const std::vector<double>& z, std::size_t n, std::vector<double>& logits) {
  logits.resize(n * head.rows);
  const auto& k = kernels<double>();
  for (std::size_t i = 0; i < n; ++i) {
    double* s = logits.data() + i * head.rows;
    std::copy(head.b.begin(), head.b.end(), s);
    k.gemv(head.w.data(), head.rows, head.cols, z.data() + i * head.cols, s);
  }
}

std::size_t label_index(const TokenLabels& l, std::size_t head) {
  switch (head) {
    case 0:
      return static_cast<std::size_t>(l.punct);
    case 1:
      return static_cast<std::size_t>(l.casing);
    default:
      return static_cast<std::size_t>(l.itn);
  }
}

void check_record(const CorpusRecord& r) {
  if (r.labels.size() != r.spoken.size()) {
    throw std::invalid_argument("record '" + r.id + "' has " + std::to_string(r.spoken.size()) + " tokens but " +
                                std::to_string(r.labels.size()) + " labels");
  }
}

std::size_t batch_tokens(std::span<const CorpusRecord> batch) {
  if (batch.empty()) throw std::invalid_argument("tagger loss: empty batch");
  std::size_t n = 0;
  for (const auto& r : batch) {
    check_record(r);
    n += r.spoken.size();
  }
  if (n == 0) throw std::invalid_argument("tagger loss: batch has no tokens");
  return n;
}

Dense random_dense(std::size_t rows, std::size_t cols, double scale, Rng& rng) {
  Dense d = Dense::zeros(rows, cols);
  const double s = scale / std::sqrt(static_cast<double>(std::max<std::size_t>(cols, 1)));
  for (auto& v : d.w) v = rng.normal() * s * 3.0;
  return d;
}

}  // namespace

std::string_view to_string(Head h) {
  switch (h) {
    case Head::kPunct:
      return "punct";
    case Head::kCase:
      return "case";
    case Head::kItn:
      return "itn";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary() : tokens_{"<unk>", "<pad>"}, index_{{"<unk>", kUnk}, {"<pad>", kPad}} {}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  Vocabulary v;
  for (auto& t : tokens) {
    if (v.index_.count(t)) continue;
    v.index_.emplace(t, v.tokens_.size());
    v.tokens_.push_back(std::move(t));
  }
  return v;
}

Vocabulary Vocabulary::build(std::span<const CorpusRecord> corpus, std::size_t min_count) {
  std::unordered_map<std::string, std::size_t> counts;
  std::vector<std::string> order;
  for (const auto& r : corpus) {
    for (const auto& t : r.spoken) {
      if (counts[t]++ == 0) order.push_back(t);
    }
  }
  std::vector<std::string> kept;
  for (auto& t : order) {
    if (counts[t] >= min_count) kept.push_back(std::move(t));
  }
  return from_tokens(std::move(kept));
}

std::size_t Vocabulary::id(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

// ---------------------------------------------------------------------------
// Model

Dense Dense::zeros(std::size_t rows, std::size_t cols) {
  Dense d;
  d.rows = rows;
  d.cols = cols;
  d.w.assign(rows * cols, 0.0);
  d.b.assign(rows, 0.0);
  return d;
}

TaggerModel TaggerModel::create(Vocabulary vocab, const TaggerConfig& cfg) {
  TaggerModel m;
  m.vocab = std::move(vocab);
  m.embed_dim = cfg.embed_dim;
  m.hidden_dim = cfg.hidden_dim;
  m.radius = cfg.radius;
  m.alpha = cfg.alpha;
  Rng rng(cfg.seed ^ 0x7461676765720000ULL);
  m.embedding.resize(m.vocab.size() * m.embed_dim);
  for (auto& v : m.embedding) v = rng.normal() * cfg.init_scale;
  m.hidden = random_dense(m.hidden_dim, m.window_dim(), cfg.init_scale, rng);
  for (std::size_t h = 0; h < kNumHeads; ++h) m.heads[h] = random_dense(kHeadSizes[h], m.hidden_dim, cfg.init_scale, rng);
  if (auto err = m.validate()) throw std::invalid_argument("tagger config: " + *err);
  return m;
}

TaggerModel TaggerModel::single_head(Head h) const {
  TaggerModel m = *this;
  for (std::size_t k = 0; k < kNumHeads; ++k) {
    if (k != static_cast<std::size_t>(h)) {
      m.heads[k].reset();
      m.alpha[k] = 0.0;
    } else {
      m.alpha[k] = 1.0;
    }
  }
  return m;
}

TaggerModel TaggerModel::zeros_like() const {
  TaggerModel g = *this;
  for (auto p : g.parameters()) std::fill(p.begin(), p.end(), 0.0);
  return g;
}

std::vector<std::span<double>> TaggerModel::parameters() {
  std::vector<std::span<double>> ps = {embedding, hidden.w, hidden.b};
  for (auto& h : heads) {
    if (!h) continue;
    ps.emplace_back(h->w);
    ps.emplace_back(h->b);
  }
  return ps;
}

std::vector<std::span<const double>> TaggerModel::parameters() const {
  std::vector<std::span<const double>> ps = {embedding, hidden.w, hidden.b};
  for (const auto& h : heads) {
    if (!h) continue;
    ps.emplace_back(h->w);
    ps.emplace_back(h->b);
  }
  return ps;
}

std::optional<std::string> TaggerModel::validate() const {
  if (embed_dim == 0 || hidden_dim == 0) return "embedding and hidden sizes must be positive";
  if (embedding.size() != vocab.size() * embed_dim) return "embedding table has the wrong size";
  if (hidden.rows != hidden_dim || hidden.cols != window_dim() || hidden.w.size() != hidden.rows * hidden.cols ||
      hidden.b.size() != hidden.rows) {
    return "hidden layer has the wrong shape";
  }
  double alpha_sum = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < kNumHeads; ++k) {
    const auto& h = heads[k];
    if (!h) {
      if (alpha[k] != 0.0) return "absent head has a nonzero loss weight";
      continue;
    }
    any = true;
    if (h->rows != kHeadSizes[k] || h->cols != hidden_dim || h->w.size() != h->rows * h->cols ||
        h->b.size() != h->rows) {
      return "head " + std::string(to_string(static_cast<Head>(k))) + " has the wrong shape";
    }
    if (!(alpha[k] > 0.0)) return "loss weights of present heads must be positive";
    alpha_sum += alpha[k];
  }
  if (!any) return "model has no heads";
  if (std::abs(alpha_sum - 1.0) > 1e-9) return "loss weights must sum to 1";
  for (auto p : parameters()) {
    if (!std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); })) return "non-finite parameter";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Inference

std::vector<std::size_t> token_ids(const TaggerModel& model, std::span<const std::string> tokens) {
  std::vector<std::size_t> ids(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) ids[i] = model.vocab.id(tokens[i]);
  return ids;
}

Encoded encode(const TaggerModel& model, std::span<const std::string> tokens) {
  SeqCache c;
  c.ids = token_ids(model, tokens);
  encode_into(model, c);
  return {tokens.size(), model.hidden_dim, std::move(c.z)};
}

std::size_t encoder_passes() { return g_encoder_passes; }

TaggerOutput forward(const TaggerModel& model, std::span<const std::string> tokens) {
  const Encoded enc = encode(model, tokens);
  TaggerOutput out;
  out.n = enc.n;
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    if (!model.heads[h]) continue;
    head_logits(*model.heads[h], enc.values, enc.n, out.logits[h]);
    softmax_rows(out.logits[h], kHeadSizes[h], out.probs[h]);
  }
  return out;
}

std::vector<TokenLabels> labels_from_output(const TaggerOutput& out) {
  std::vector<TokenLabels> labels(out.n);
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    if (out.logits[h].empty()) continue;
    const std::size_t k = kHeadSizes[h];
    for (std::size_t i = 0; i < out.n; ++i) {
      const double* s = out.logits[h].data() + i * k;
      // max_element returns the first maximum.
      const auto best = static_cast<std::size_t>(std::max_element(s, s + k) - s);
      switch (h) {
        case 0:
          labels[i].punct = static_cast<Punct>(best);
          break;
        case 1:
          labels[i].casing = static_cast<CaseForm>(best);
          break;
        default:
          labels[i].itn = static_cast<ItnLabel>(best);
          break;
      }
    }
  }
  return labels;
}

std::vector<TokenLabels> predict(const TaggerModel& model, std::span<const std::string> tokens) {
  if (tokens.empty()) return {};
  return labels_from_output(forward(model, tokens));
}

double HeadAccuracy::accuracy(Head h) const {
  return tokens ? static_cast<double>(correct[static_cast<std::size_t>(h)]) / static_cast<double>(tokens) : 0.0;
}

HeadAccuracy evaluate_accuracy(const TaggerModel& model, std::span<const CorpusRecord> corpus) {
  HeadAccuracy acc;
  for (const auto& r : corpus) {
    check_record(r);
    const auto pred = predict(model, r.spoken);
    for (std::size_t i = 0; i < pred.size(); ++i) {
      acc.correct[0] += pred[i].punct == r.labels[i].punct;
      acc.correct[1] += pred[i].casing == r.labels[i].casing;
      acc.correct[2] += pred[i].itn == r.labels[i].itn;
    }
    acc.tokens += pred.size();
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Loss and gradient

LossValue loss(const TaggerModel& model, std::span<const CorpusRecord> batch) {
  const auto total_tokens = static_cast<double>(batch_tokens(batch));
  LossValue lv;
  for (const auto& r : batch) {
    const TaggerOutput out = forward(model, r.spoken);
    for (std::size_t h = 0; h < kNumHeads; ++h) {
      if (!model.heads[h]) continue;
      const std::size_t k = kHeadSizes[h];
      for (std::size_t i = 0; i < out.n; ++i) {
        lv.head[h] -= std::log(std::max(out.probs[h][i * k + label_index(r.labels[i], h)], 1e-300));
      }
    }
  }
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    lv.head[h] /= total_tokens;
    lv.total += model.alpha[h] * lv.head[h];
  }
  return lv;
}

LossValue loss_and_gradient(const TaggerModel& model, std::span<const CorpusRecord> batch, TaggerModel& grad) {
  const auto total_tokens = static_cast<double>(batch_tokens(batch));
  for (auto p : grad.parameters()) std::fill(p.begin(), p.end(), 0.0);
  const auto& k = kernels<double>();
  const std::size_t wd = model.window_dim();
  const std::size_t hd = model.hidden_dim;
  LossValue lv;
  SeqCache c;
  std::vector<double> logits;
  std::vector<double> probs;
  std::vector<double> dz;
  std::vector<double> dx(wd);
  for (const auto& r : batch) {
    c.ids = token_ids(model, r.spoken);
    encode_into(model, c);
    const std::size_t n = c.ids.size();
    dz.assign(n * hd, 0.0);
    for (std::size_t h = 0; h < kNumHeads; ++h) {
      if (!model.heads[h]) continue;
      const Dense& head = *model.heads[h];
      Dense& ghead = *grad.heads[h];
      const std::size_t kk = kHeadSizes[h];
      head_logits(head, c.z, n, logits);
      softmax_rows(logits, kk, probs);
      const double scale = model.alpha[h] / total_tokens;
      for (std::size_t i = 0; i < n; ++i) {
        double* p = probs.data() + i * kk;
        const std::size_t y = label_index(r.labels[i], h);
        lv.head[h] -= std::log(std::max(p[y], 1e-300));
        // dL/ds = alpha (p - onehot) / N
        p[y] -= 1.0;
        for (std::size_t j = 0; j < kk; ++j) p[j] *= scale;
        k.ger(1.0, p, kk, c.z.data() + i * hd, hd, ghead.w.data());
        for (std::size_t j = 0; j < kk; ++j) ghead.b[j] += p[j];
        k.gemv_t(head.w.data(), kk, hd, p, dz.data() + i * hd);
      }
    }
    const auto nr = static_cast<std::ptrdiff_t>(n);
    const auto rad = static_cast<std::ptrdiff_t>(model.radius);
    for (std::size_t i = 0; i < n; ++i) {
      double* da = dz.data() + i * hd;
      const double* z = c.z.data() + i * hd;
      for (std::size_t j = 0; j < hd; ++j) da[j] *= 1.0 - z[j] * z[j];
      k.ger(1.0, da, hd, c.x.data() + i * wd, wd, grad.hidden.w.data());
      for (std::size_t j = 0; j < hd; ++j) grad.hidden.b[j] += da[j];
      std::fill(dx.begin(), dx.end(), 0.0);
      k.gemv_t(model.hidden.w.data(), hd, wd, da, dx.data());
      for (std::ptrdiff_t o = -rad; o <= rad; ++o) {
        const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + o;
        const std::size_t id = (j < 0 || j >= nr) ? Vocabulary::kPad : c.ids[static_cast<std::size_t>(j)];
        k.axpy(1.0, dx.data() + static_cast<std::size_t>(o + rad) * model.embed_dim, grad.embedding.data() + id * model.embed_dim,
               model.embed_dim);
      }
    }
  }
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    lv.head[h] /= total_tokens;
    lv.total += model.alpha[h] * lv.head[h];
  }
  return lv;
}

TrainResult train_tagger(TaggerModel& model, std::span<const CorpusRecord> corpus, const TaggerConfig& cfg,
                         const std::function<void(std::size_t, double)>& on_step) {
  if (corpus.empty()) throw std::invalid_argument("train_tagger: empty corpus");
  if (auto err = model.validate()) throw std::invalid_argument("train_tagger: " + *err);
  Rng rng(cfg.seed);
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::size_t cursor = 0;
  TaggerModel grad = model.zeros_like();
  TrainResult result;
  result.losses.reserve(cfg.steps);
  std::vector<CorpusRecord> batch;
  const std::size_t bs = std::max<std::size_t>(1, std::min(cfg.batch_size, corpus.size()));
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    batch.clear();
    while (batch.size() < bs) {
      if (cursor == order.size()) {
        rng.shuffle(order);
        cursor = 0;
      }
      batch.push_back(corpus[order[cursor++]]);
    }
    const LossValue lv = loss_and_gradient(model, batch, grad);
    if (!std::isfinite(lv.total)) {
      std::ostringstream os;
      os << "tagger loss became non-finite at step " << step << " (punct " << lv.head[0] << ", case "
         << lv.head[1] << ", itn " << lv.head[2] << "); lower the learning rate";
      throw TrainingDiverged(os.str());
    }
    double norm2 = 0.0;
    for (auto g : grad.parameters()) norm2 += kernels<double>().dot(g.data(), g.data(), g.size());
    const double norm = std::sqrt(norm2);
    double lr = cfg.learning_rate;
    if (cfg.clip_norm > 0.0 && norm > cfg.clip_norm) lr *= cfg.clip_norm / norm;
    if (lr != 0.0) {
      auto ps = model.parameters();
      auto gs = grad.parameters();
      for (std::size_t i = 0; i < ps.size(); ++i) kernels<double>().axpy(-lr, gs[i].data(), ps[i].data(), ps[i].size());
    }
    result.losses.push_back(lv.total);
    if (on_step) on_step(step, lv.total);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace {

constexpr const char* kTaggerFormat = "tfmt-tagger";
constexpr int kTaggerVersion = 1;

nlohmann::json dense_json(const Dense& d) {
  return {{"rows", d.rows}, {"cols", d.cols}, {"w", d.w}, {"b", d.b}};
}

Dense dense_from_json(const nlohmann::json& j) {
  Dense d;
  d.rows = j.at("rows").get<std::size_t>();
  d.cols = j.at("cols").get<std::size_t>();
  d.w = j.at("w").get<std::vector<double>>();
  d.b = j.at("b").get<std::vector<double>>();
  return d;
}

}  // namespace

std::string tagger_to_json(const TaggerModel& m) {
  nlohmann::json j;
  j["format"] = kTaggerFormat;
  j["version"] = kTaggerVersion;
  j["layout"] = "row-major; embedding [vocab][embed]; hidden [hidden][window*embed]; heads [labels][hidden]";
  j["vocab"] = m.vocab.tokens();
  j["embed_dim"] = m.embed_dim;
  j["hidden_dim"] = m.hidden_dim;
  j["radius"] = m.radius;
  j["alpha"] = m.alpha;
  j["embedding"] = m.embedding;
  j["hidden"] = dense_json(m.hidden);
  nlohmann::json heads = nlohmann::json::object();
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    if (m.heads[h]) heads[std::string(to_string(static_cast<Head>(h)))] = dense_json(*m.heads[h]);
  }
  j["heads"] = heads;
  return j.dump();
}

TaggerModel tagger_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != kTaggerFormat) throw std::runtime_error("not a tagger checkpoint");
    if (j.at("version").get<int>() != kTaggerVersion) {
      throw std::runtime_error("unsupported tagger checkpoint version " + j.at("version").dump());
    }
    TaggerModel m;
    m.vocab = Vocabulary::from_tokens(j.at("vocab").get<std::vector<std::string>>());
    m.embed_dim = j.at("embed_dim").get<std::size_t>();
    m.hidden_dim = j.at("hidden_dim").get<std::size_t>();
    m.radius = j.at("radius").get<std::size_t>();
    m.alpha = j.at("alpha").get<std::array<double, kNumHeads>>();
    m.embedding = j.at("embedding").get<std::vector<double>>();
    m.hidden = dense_from_json(j.at("hidden"));
    for (std::size_t h = 0; h < kNumHeads; ++h) {
      const std::string name(to_string(static_cast<Head>(h)));
      if (j.at("heads").contains(name)) m.heads[h] = dense_from_json(j.at("heads").at(name));
    }
    if (auto err = m.validate()) throw std::runtime_error("invalid tagger checkpoint: " + *err);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed tagger checkpoint: ") + e.what());
  }
}

void save_tagger(const TaggerModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << tagger_to_json(model) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

TaggerModel load_tagger(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return tagger_from_json(ss.str());
}

}  // namespace tfmt
