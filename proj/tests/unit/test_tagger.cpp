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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "tfmt/tagger.hpp"

namespace tfmt {
namespace {

const Grammar& g() { return Grammar::builtin(); }

std::vector<CorpusRecord> corpus(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CorpusRecord> out;
  for (const auto& s : synthesize_corpus(g(), n, rng)) out.push_back(*derive_labels(g(), s).record);
  return out;
}

TaggerConfig small_config() {
  TaggerConfig cfg;
  cfg.embed_dim = 4;
  cfg.hidden_dim = 6;
  cfg.radius = 1;
  cfg.init_scale = 0.5;
  return cfg;
}

TaggerModel small_model(std::uint64_t seed) {
  TaggerConfig cfg = small_config();
  cfg.seed = seed;
  return TaggerModel::create(Vocabulary::from_tokens({"a", "b", "c", "d"}), cfg);
}

CorpusRecord random_record(Rng& rng, std::size_t n) {
  static const std::vector<std::string> words = {"a", "b", "c", "d", "zz"};
  CorpusRecord r;
  for (std::size_t i = 0; i < n; ++i) {
    r.spoken.push_back(words[rng.below(words.size())]);
    r.labels.push_back({static_cast<Punct>(rng.below(4)), static_cast<CaseForm>(rng.below(4)),
                        static_cast<ItnLabel>(rng.below(2))});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Encoder

TEST(Encode, ShapeContract) {
  const auto m = small_model(1);
  const std::vector<std::string> toks = {"a", "b", "zz", "c"};
  const Encoded e = encode(m, toks);
  EXPECT_EQ(e.n, 4u);
  EXPECT_EQ(e.dim, 6u);
  EXPECT_EQ(e.values.size(), 24u);
}

TEST(Encode, PermutingOutsideWindowKeepsVector) {
  Rng rng(3);
  TaggerConfig cfg = small_config();
  cfg.radius = 2;
  const auto m = TaggerModel::create(Vocabulary::from_tokens({"a", "b", "c", "d", "e", "f"}), cfg);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "q"};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.range(1, 12);
    std::vector<std::string> toks(n);
    for (auto& t : toks) t = rng.pick(vocab);
    const std::size_t i = rng.below(n);
    std::vector<std::size_t> outside;
    for (std::size_t j = 0; j < n; ++j) {
      if (j + cfg.radius < i || j > i + cfg.radius) outside.push_back(j);
    }
    auto permuted = toks;
    std::vector<std::string> vals;
    for (auto j : outside) vals.push_back(permuted[j]);
    rng.shuffle(vals);
    for (std::size_t k = 0; k < outside.size(); ++k) permuted[outside[k]] = vals[k];
    const auto a = encode(m, toks);
    const auto b = encode(m, permuted);
    for (std::size_t d = 0; d < a.dim; ++d) ASSERT_EQ(a.row(i)[d], b.row(i)[d]);
  }
}

TEST(Encode, ZeroParametersGiveIdenticalRows) {
  auto m = small_model(1).zeros_like();
  const std::vector<std::string> toks = {"a", "b", "zz"};
  const auto e = encode(m, toks);
  for (std::size_t i = 1; i < e.n; ++i) {
    for (std::size_t d = 0; d < e.dim; ++d) EXPECT_EQ(e.row(i)[d], e.row(0)[d]);
  }
}

// ---------------------------------------------------------------------------
// Forward

TEST(Forward, DistributionsSumToOneWithOneEncoderPass) {
  Rng rng(5);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto m = small_model(seed);
    const auto r = random_record(rng, rng.range(1, 9));
    const std::size_t before = encoder_passes();
    const TaggerOutput out = forward(m, r.spoken);
    EXPECT_EQ(encoder_passes() - before, 1u);
    for (std::size_t h = 0; h < kNumHeads; ++h) {
      const std::size_t k = kHeadSizes[h];
      ASSERT_EQ(out.probs[h].size(), out.n * k);
      for (std::size_t i = 0; i < out.n; ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < k; ++c) s += out.probs[h][i * k + c];
        EXPECT_NEAR(s, 1.0, 1e-6);
      }
    }
  }
}

TEST(Forward, UntrainedIsNearUniform) {
  TaggerConfig cfg;
  cfg.init_scale = 0.01;
  const auto m = TaggerModel::create(Vocabulary::from_tokens({"a", "b"}), cfg);
  const std::vector<std::string> toks = {"a", "b", "a"};
  const auto out = forward(m, toks);
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    for (double p : out.probs[h]) EXPECT_NEAR(p, 1.0 / static_cast<double>(kHeadSizes[h]), 0.02);
  }
}

TEST(Forward, SingleHeadModelsNeedThreePasses) {
  const auto m = small_model(2);
  const std::vector<std::string> toks = {"a", "c", "b", "d"};
  const auto shared = predict(m, toks);
  std::vector<TokenLabels> combined(toks.size());
  const std::size_t before = encoder_passes();
  for (std::size_t h = 0; h < kNumHeads; ++h) {
    const auto single = m.single_head(static_cast<Head>(h));
    EXPECT_FALSE(single.validate());
    const auto lab = predict(single, toks);
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (h == 0) combined[i].punct = lab[i].punct;
      if (h == 1) combined[i].casing = lab[i].casing;
      if (h == 2) combined[i].itn = lab[i].itn;
    }
  }
  EXPECT_EQ(encoder_passes() - before, 3u);
  EXPECT_EQ(combined, shared);
}

// ---------------------------------------------------------------------------
// Loss

// Plain-loop forward pass, independent of the kernel table.
double oracle_loss(const TaggerModel& m, const std::vector<CorpusRecord>& batch, std::array<double, 3>& heads) {
  heads = {0, 0, 0};
  std::size_t count = 0;
  for (const auto& r : batch) {
    const std::size_t n = r.spoken.size();
    const std::size_t R = m.radius;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> x;
      for (std::size_t o = 0; o <= 2 * R; ++o) {
        const long j = static_cast<long>(i + o) - static_cast<long>(R);
        const std::size_t id = (j < 0 || j >= static_cast<long>(n)) ? Vocabulary::kPad : m.vocab.id(r.spoken[j]);
        for (std::size_t d = 0; d < m.embed_dim; ++d) x.push_back(m.embedding[id * m.embed_dim + d]);
      }
      std::vector<double> z(m.hidden_dim);
      for (std::size_t a = 0; a < m.hidden_dim; ++a) {
        double s = m.hidden.b[a];
        for (std::size_t c = 0; c < x.size(); ++c) s += m.hidden.w[a * x.size() + c] * x[c];
        z[a] = std::tanh(s);
      }
      const std::array<std::size_t, 3> y = {static_cast<std::size_t>(r.labels[i].punct),
                                            static_cast<std::size_t>(r.labels[i].casing),
                                            static_cast<std::size_t>(r.labels[i].itn)};
      for (std::size_t h = 0; h < 3; ++h) {
        const Dense& W = *m.heads[h];
        std::vector<double> s(W.rows);
        for (std::size_t a = 0; a < W.rows; ++a) {
          s[a] = W.b[a];
          for (std::size_t c = 0; c < W.cols; ++c) s[a] += W.w[a * W.cols + c] * z[c];
        }
        double lse = 0.0;
        for (double v : s) lse += std::exp(v);
        heads[h] += std::log(lse) - s[y[h]];
      }
      ++count;
    }
  }
  double total = 0.0;
  for (std::size_t h = 0; h < 3; ++h) {
    heads[h] /= static_cast<double>(count);
    total += m.alpha[h] * heads[h];
  }
  return total;
}

TEST(Loss, MatchesScalarOracle) {
  Rng rng(9);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto m = small_model(seed);
    std::vector<CorpusRecord> batch = {random_record(rng, 5), random_record(rng, 3)};
    std::array<double, 3> heads{};
    const double total = oracle_loss(m, batch, heads);
    const LossValue lv = loss(m, batch);
    EXPECT_NEAR(lv.total, total, 1e-12);
    for (std::size_t h = 0; h < 3; ++h) EXPECT_NEAR(lv.head[h], heads[h], 1e-12);
    EXPECT_NEAR(lv.total, (lv.head[0] + lv.head[1] + lv.head[2]) / 3.0, 1e-12);
  }
}

TEST(Loss, ConfidentCorrectPredictionsGiveZero) {
  auto m = small_model(1).zeros_like();
  m.heads[0]->b[static_cast<std::size_t>(Punct::kNone)] = 800.0;
  m.heads[1]->b[static_cast<std::size_t>(CaseForm::kLower)] = 800.0;
  m.heads[2]->b[static_cast<std::size_t>(ItnLabel::kO)] = 800.0;
  CorpusRecord r;
  r.spoken = {"a", "b", "c"};
  r.labels.assign(3, TokenLabels{});
  std::vector<CorpusRecord> batch = {r};
  EXPECT_EQ(loss(m, batch).total, 0.0);
}

TEST(Loss, EmptyBatchIsAnError) {
  const auto m = small_model(1);
  EXPECT_THROW(loss(m, std::vector<CorpusRecord>{}), std::invalid_argument);
}

TEST(Gradient, MatchesCentralDifferences) {
  Rng rng(11);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto m = small_model(seed);
    const std::vector<CorpusRecord> batch = {random_record(rng, 5)};
    TaggerModel grad = m.zeros_like();
    loss_and_gradient(m, batch, grad);
    auto ps = m.parameters();
    auto gs = grad.parameters();
    double worst = 0.0;
    for (std::size_t t = 0; t < ps.size(); ++t) {
      for (std::size_t i = 0; i < ps[t].size(); ++i) {
        const double saved = ps[t][i];
        const double h = 1e-6;
        ps[t][i] = saved + h;
        const double up = loss(m, batch).total;
        ps[t][i] = saved - h;
        const double down = loss(m, batch).total;
        ps[t][i] = saved;
        const double numeric = (up - down) / (2 * h);
        const double analytic = gs[t][i];
        const double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-6});
        worst = std::max(worst, std::abs(numeric - analytic) / scale);
      }
    }
    EXPECT_LT(worst, 1e-4) << "seed " << seed;
  }
}

// ---------------------------------------------------------------------------
// Training and prediction

TEST(Train, ZeroLearningRateLeavesParameters) {
  auto m = small_model(4);
  const auto before = tagger_to_json(m);
  Rng rng(1);
  std::vector<CorpusRecord> data = {random_record(rng, 4), random_record(rng, 6)};
  TaggerConfig cfg = small_config();
  cfg.learning_rate = 0.0;
  cfg.steps = 20;
  train_tagger(m, data, cfg);
  EXPECT_EQ(tagger_to_json(m), before);
}

TEST(Train, NonFiniteParametersAreRejected) {
  auto m = small_model(4);
  Rng rng(1);
  std::vector<CorpusRecord> data = {random_record(rng, 4)};
  m.hidden.w[0] = std::numeric_limits<double>::quiet_NaN();
  TaggerConfig cfg = small_config();
  cfg.steps = 3;
  EXPECT_THROW(train_tagger(m, data, cfg), std::invalid_argument);
}

TEST(Train, OverfitsSyntheticCorpus) {
  const auto data = corpus(200, 2024);
  TaggerConfig cfg;
  auto m = TaggerModel::create(Vocabulary::build(data), cfg);
  const auto result = train_tagger(m, data, cfg);
  const auto acc = evaluate_accuracy(m, data);
  EXPECT_GE(acc.accuracy(Head::kPunct), 0.99);
  EXPECT_GE(acc.accuracy(Head::kCase), 0.99);
  EXPECT_GE(acc.accuracy(Head::kItn), 0.99);
  // Smoothed loss falls from window to window, allowing a little noise.
  std::vector<double> windows;
  for (std::size_t s = 0; s + 50 <= result.losses.size(); s += 50) {
    windows.push_back(std::accumulate(result.losses.begin() + s, result.losses.begin() + s + 50, 0.0) / 50.0);
  }
  std::size_t rises = 0;
  for (std::size_t w = 1; w < windows.size(); ++w) rises += windows[w] > windows[w - 1];
  EXPECT_LE(rises, windows.size() / 4) ;
  EXPECT_LT(windows.back(), 0.1 * windows.front());
  // A training sentence comes back with its exact labels.
  EXPECT_EQ(predict(m, data[0].spoken), data[0].labels);
  // Deterministic for a fixed seed.
  auto m2 = TaggerModel::create(Vocabulary::build(data), cfg);
  TaggerConfig short_cfg = cfg;
  short_cfg.steps = 30;
  auto m3 = m2;
  train_tagger(m2, data, short_cfg);
  train_tagger(m3, data, short_cfg);
  EXPECT_EQ(tagger_to_json(m2), tagger_to_json(m3));
}

TEST(Predict, EmptyAndArgmaxInvariance) {
  const auto m = small_model(7);
  EXPECT_TRUE(predict(m, std::vector<std::string>{}).empty());
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto r = random_record(rng, 6);
    auto scaled = m;
    const double c = rng.uniform(0.1, 10.0);
    for (auto& h : scaled.heads) {
      for (auto& v : h->w) v *= c;
      for (auto& v : h->b) v *= c;
    }
    EXPECT_EQ(predict(m, r.spoken), predict(scaled, r.spoken));
  }
}

TEST(Checkpoint, RoundTrip) {
  const auto m = small_model(3);
  const auto back = tagger_from_json(tagger_to_json(m));
  EXPECT_EQ(tagger_to_json(back), tagger_to_json(m));
  const std::vector<std::string> toks = {"a", "zz", "d"};
  const auto a = forward(m, toks);
  const auto b = forward(back, toks);
  EXPECT_EQ(a.logits, b.logits);
  EXPECT_THROW(tagger_from_json("{\"format\":\"other\"}"), std::runtime_error);
}

TEST(Validate, RejectsBadWeights) {
  auto m = small_model(1);
  m.alpha = {0.5, 0.5, 0.5};
  EXPECT_TRUE(m.validate());
  m.alpha = {1.0, 0.0, 0.0};
  EXPECT_TRUE(m.validate());
}

// ---------------------------------------------------------------------------
// Span extraction

std::vector<TokenLabels> itn_at(std::size_t n, std::initializer_list<std::size_t> itn,
                                std::initializer_list<std::size_t> mixed = {}) {
  std::vector<TokenLabels> l(n);
  for (auto i : itn) l[i].itn = ItnLabel::kItn;
  for (auto i : mixed) l[i].casing = CaseForm::kMixed;
  return l;
}

TEST(Spans, Fixtures) {
  EXPECT_TRUE(extract_spans(std::vector<TokenLabels>(6), 1).empty());
  const auto s = extract_spans(itn_at(10, {3, 4, 5, 6, 7}), 1);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0], (ConversionSpan{SpanKind::kItn, 3, 8, 2, 9}));
  // ITN run 2..3 and MIXED at 6: contexts [1,5) and [5,8) touch.
  const auto m = extract_spans(itn_at(10, {2, 3}, {6}), 1);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0], (ConversionSpan{SpanKind::kItn, 2, 7, 1, 8}));
  const auto apart = extract_spans(itn_at(10, {1}, {7}), 1);
  ASSERT_EQ(apart.size(), 2u);
  EXPECT_EQ(apart[1].kind, SpanKind::kMixed);
  EXPECT_EQ(extract_spans(itn_at(3, {0, 1, 2}), 1)[0], (ConversionSpan{SpanKind::kItn, 0, 3, 0, 3}));
}

TEST(Spans, RandomAgainstIntervalMergeOracle) {
  Rng rng(31);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = rng.below(20);
    const std::size_t radius = rng.below(3);
    std::vector<TokenLabels> l(n);
    for (auto& x : l) {
      if (rng.chance(0.25)) x.itn = ItnLabel::kItn;
      if (rng.chance(0.15)) x.casing = CaseForm::kMixed;
    }
    // Oracle: mark context cells per seed, then merge runs of marked cells
    // where neighbouring seed contexts touch.
    struct Iv {
      long cb, ce, b, e;
      bool itn;
    };
    std::vector<Iv> seeds;
    for (std::size_t i = 0; i < n; ++i) {
      const bool itn = l[i].itn == ItnLabel::kItn;
      if (itn && (i == 0 || l[i - 1].itn != ItnLabel::kItn)) {
        std::size_t j = i;
        while (j < n && l[j].itn == ItnLabel::kItn) ++j;
        seeds.push_back({(long)i, (long)j, 0, 0, true});
      } else if (!itn && l[i].casing == CaseForm::kMixed) {
        seeds.push_back({(long)i, (long)i + 1, 0, 0, false});
      }
    }
    for (auto& s : seeds) {
      s.b = std::max(0L, s.cb - (long)radius);
      s.e = std::min((long)n, s.ce + (long)radius);
    }
    std::vector<Iv> merged;
    for (const auto& s : seeds) {
      bool joined = false;
      for (auto& m : merged) {
        if (!(s.e < m.b || m.e < s.b)) {
          m.b = std::min(m.b, s.b);
          m.e = std::max(m.e, s.e);
          m.cb = std::min(m.cb, s.cb);
          m.ce = std::max(m.ce, s.ce);
          m.itn = m.itn || s.itn;
          joined = true;
          break;
        }
      }
      if (!joined) merged.push_back(s);
    }
    const auto got = extract_spans(l, radius);
    ASSERT_EQ(got.size(), merged.size());
    std::vector<int> cover(n, 0);
    for (std::size_t k = 0; k < got.size(); ++k) {
      EXPECT_EQ((long)got[k].core_begin, merged[k].cb);
      EXPECT_EQ((long)got[k].core_end, merged[k].ce);
      EXPECT_EQ((long)got[k].context_begin, merged[k].b);
      EXPECT_EQ((long)got[k].context_end, merged[k].e);
      EXPECT_EQ(got[k].kind == SpanKind::kItn, merged[k].itn);
      if (k) EXPECT_LE(got[k - 1].context_end, got[k].context_begin);
      for (std::size_t i = got[k].core_begin; i < got[k].core_end; ++i) ++cover[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (l[i].itn == ItnLabel::kItn || l[i].casing == CaseForm::kMixed) EXPECT_EQ(cover[i], 1);
    }
  }
}

}  // namespace
}  // namespace tfmt
