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

#include "tfmt/converter.hpp"

namespace tfmt {

namespace {

// Written text behind spoken tokens [begin, end), or nullopt when a
// provenance span straddles either boundary.
std::optional<std::string> written_core(const CorpusRecord& rec, const std::vector<Token>& written, std::size_t begin,
                                        std::size_t end) {
  std::optional<std::size_t> wb, we;
  std::size_t covered = 0;
  for (const auto& p : rec.provenance) {
    if (p.spoken_begin == p.spoken_end) continue;
    if (p.spoken_end <= begin || p.spoken_begin >= end) continue;
    if (p.spoken_begin < begin || p.spoken_end > end) return std::nullopt;
    if (!wb) wb = p.written_begin;
    we = p.written_end;
    covered += p.spoken_end - p.spoken_begin;
  }
  if (!wb || covered != end - begin) return std::nullopt;
  return entity_candidate(written, *wb, *we);
}

EntityClass span_class(const CorpusRecord& rec, const ConversionSpan& s) {
  for (const auto& p : rec.provenance)
    if (p.entity_class != EntityClass::kNone && p.spoken_begin < s.core_end && p.spoken_end > s.core_begin)
      return p.entity_class;
  return EntityClass::kNone;
}

ConverterPair make_pair(const SpanText& st, const std::string& target, EntityClass c) {
  return ConverterPair{encode_span(st), std::string(kSepMarker) + target + std::string(kSepMarker), c};
}

}  // namespace

std::vector<ConverterPair> pairs_from_record(const CorpusRecord& rec, std::size_t radius, double identity_rate,
                                             Rng& rng) {
  const auto formatted = apply_labels(rec.spoken, rec.labels);
  const auto written = tokenize(rec.written);
  const auto spans = extract_spans(rec.labels, radius);
  const CharVocab& vocab = CharVocab::standard();
  std::vector<ConverterPair> out;
  std::vector<bool> in_core(formatted.size(), false);
  for (const auto& s : spans) {
    for (std::size_t k = s.core_begin; k < s.core_end; ++k) in_core[k] = true;
    const SpanText st = make_span_text(formatted, s);
    const auto target = written_core(rec, written, s.core_begin, s.core_end);
    if (!target || target->empty()) continue;
    ConverterPair p = make_pair(st, *target, span_class(rec, s));
    if (vocab.covers(p.input) && vocab.covers(p.output)) out.push_back(std::move(p));
  }
  if (identity_rate > 0) {
    const std::size_t n = formatted.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (in_core[i] || !rng.chance(identity_rate)) continue;
      ConversionSpan s{SpanKind::kItn, i, i + 1, i >= radius ? i - radius : 0, std::min(n, i + 1 + radius)};
      const SpanText st = make_span_text(formatted, s);
      ConverterPair p = make_pair(st, join(st.core), EntityClass::kNone);
      if (vocab.covers(p.input)) out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<ConverterPair> make_entity_pairs(const Grammar& grammar, std::span<const EntityClass> classes,
                                             std::size_t count, std::size_t radius, Rng& rng) {
  std::vector<ConverterPair> out;
  const TemplateBank& bank = default_template_bank();
  for (EntityClass c : classes) {
    std::size_t have = 0;
    std::size_t rounds = 0;
    while (have < count) {
      if (++rounds > 100) throw std::runtime_error("make_entity_pairs: cannot produce pairs for " +
                                                   std::string(to_string(c)));
      for (const auto& sentence : synthesize(grammar, c, count - have, bank, rng)) {
        const auto outcome = derive_labels(grammar, sentence);
        if (!outcome.record) continue;
        Rng unused(0);
        for (auto& p : pairs_from_record(*outcome.record, radius, 0.0, unused)) {
          if (p.entity_class != c) continue;
          out.push_back(std::move(p));
          ++have;
          break;
        }
      }
    }
  }
  return out;
}

std::vector<ConverterPair> make_generic_pairs(const Grammar& grammar, std::size_t count, std::size_t radius,
                                              Rng& rng) {
  std::vector<ConverterPair> out;
  std::size_t rounds = 0;
  while (out.size() < count) {
    if (++rounds > 1000) throw std::runtime_error("make_generic_pairs: corpus yields no pairs");
    const std::size_t batch = std::max<std::size_t>(16, (count - out.size()) / 4);
    for (const auto& sentence : synthesize_corpus(grammar, batch, rng)) {
      const auto outcome = derive_labels(grammar, sentence);
      if (!outcome.record) continue;
      for (auto& p : pairs_from_record(*outcome.record, radius, 0.15, rng)) {
        if (out.size() == count) break;
        out.push_back(std::move(p));
      }
    }
  }
  return out;
}

}  // namespace tfmt
