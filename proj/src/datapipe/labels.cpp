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

#include "tfmt/datapipe.hpp"
#include "tfmt/numbers.hpp"

namespace tfmt {
namespace {

std::vector<TokenLabels> labels_from_provenance(const std::vector<Token>& written, std::size_t n_spoken,
                                                const std::vector<ProvenanceSpan>& prov) {
  std::vector<TokenLabels> labels(n_spoken);
  for (const auto& span : prov) {
    if (span.spoken_begin == span.spoken_end) continue;
    const bool entity = span.entity_class != EntityClass::kNone;
    const CaseForm form = entity ? CaseForm::kLower : classify_case(written[span.written_begin].text);
    for (std::size_t k = span.spoken_begin; k < span.spoken_end; ++k) {
      labels[k].casing = form;
      labels[k].itn = entity ? ItnLabel::kItn : ItnLabel::kO;
    }
    labels[span.spoken_end - 1].punct = written[span.written_end - 1].post_punct;
  }
  return labels;
}

bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

LabelOutcome derive_labels(const Grammar& grammar, std::string_view written, std::string id) {
  NormalizationResult norm = normalize(grammar, written);
  if (norm.spoken.empty()) return {std::nullopt, "normalization produced no spoken tokens"};
  CorpusRecord rec;
  rec.id = std::move(id);
  rec.written = std::string(written);
  rec.labels = labels_from_provenance(norm.written, norm.spoken.size(), norm.provenance);
  rec.spoken = std::move(norm.spoken);
  rec.provenance = std::move(norm.provenance);
  return {std::move(rec), {}};
}

LabelOutcome derive_labels_from_pair(const Grammar& grammar, std::string_view written,
                                     std::span<const std::string> spoken, std::string id) {
  const std::vector<Token> toks = tokenize(written);
  std::vector<ProvenanceSpan> prov;
  std::size_t si = 0;
  std::size_t i = 0;
  constexpr std::size_t kMaxSpokenEntity = 48;
  while (i < toks.size()) {
    ProvenanceSpan span;
    span.written_begin = i;
    span.spoken_begin = si;
    bool done = false;
    for (std::size_t j = std::min(toks.size(), i + kMaxEntityTokens); j > i && !done; --j) {
      const std::string cand = entity_candidate(toks, i, j);
      if (!grammar.match_written(cand)) continue;
      const std::size_t max_k = std::min(spoken.size() - si, kMaxSpokenEntity);
      for (std::size_t k = max_k; k >= 1 && !done; --k) {
        const auto stretch = spoken.subspan(si, k);
        for (const auto& rule : grammar.rules()) {
          const auto parses = grammar.inverse_parse_exact(rule, stretch);
          if (std::find(parses.begin(), parses.end(), cand) == parses.end()) continue;
          span.written_end = j;
          span.spoken_end = si + k;
          span.entity_class = rule.entity_class;
          done = true;
          break;
        }
      }
    }
    if (!done) {
      const std::string& text = toks[i].text;
      const std::string form = has_digit(text) ? ascii_lower(text) : plain_word(text);
      span.written_end = i + 1;
      span.malformed = has_digit(text);
      if (form.empty()) {
        span.spoken_end = si;
      } else if (si < spoken.size() && spoken[si] == form) {
        span.spoken_end = si + 1;
      } else {
        return {std::nullopt, "written token " + std::to_string(i) + " ('" + text + "') does not align with spoken token " +
                                  std::to_string(si)};
      }
    }
    prov.push_back(span);
    si = span.spoken_end;
    i = span.written_end;
  }
  if (si != spoken.size()) return {std::nullopt, "unaligned trailing spoken tokens"};
  if (spoken.empty()) return {std::nullopt, "empty spoken form"};
  CorpusRecord rec;
  rec.id = std::move(id);
  rec.written = std::string(written);
  rec.spoken.assign(spoken.begin(), spoken.end());
  rec.labels = labels_from_provenance(toks, spoken.size(), prov);
  rec.provenance = std::move(prov);
  return {std::move(rec), {}};
}

std::optional<std::string> validate_record(const CorpusRecord& rec) {
  if (rec.labels.size() != rec.spoken.size()) return "label count differs from spoken token count";
  const auto toks = tokenize(rec.written);
  std::size_t next_spoken = 0;
  std::size_t next_written = 0;
  std::vector<const ProvenanceSpan*> owner(rec.spoken.size(), nullptr);
  for (const auto& p : rec.provenance) {
    if (p.spoken_begin != next_spoken || p.spoken_end < p.spoken_begin) return "provenance spoken spans not contiguous";
    if (p.written_begin != next_written || p.written_end <= p.written_begin) return "provenance written spans not contiguous";
    if (p.written_end > toks.size() || p.spoken_end > rec.spoken.size()) return "provenance out of range";
    for (std::size_t k = p.spoken_begin; k < p.spoken_end; ++k) owner[k] = &p;
    next_spoken = p.spoken_end;
    next_written = p.written_end;
  }
  if (next_spoken != rec.spoken.size()) return "provenance does not cover spoken tokens";
  if (next_written != toks.size()) return "provenance does not cover written tokens";
  for (std::size_t k = 0; k < rec.spoken.size(); ++k) {
    const TokenLabels& l = rec.labels[k];
    const ProvenanceSpan& p = *owner[k];
    const bool entity = p.entity_class != EntityClass::kNone;
    if ((l.itn == ItnLabel::kItn) != entity) return "ITN label disagrees with provenance at token " + std::to_string(k);
    if (l.casing == CaseForm::kMixed &&
        (entity || classify_case(toks[p.written_begin].text) != CaseForm::kMixed)) {
      return "MIXED label without a mixed-case written word at token " + std::to_string(k);
    }
  }
  return std::nullopt;
}

std::vector<std::string> spoken_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (std::string w : split_whitespace(ascii_lower(text))) {
    while (!w.empty() && (w.back() == '.' || w.back() == ',' || w.back() == '?' || w.back() == '!')) w.pop_back();
    if (w.empty()) continue;
    if (w.find('-') != std::string::npos) {
      std::vector<std::string> parts;
      std::size_t start = 0;
      bool numeric = true;
      while (true) {
        const std::size_t dash = w.find('-', start);
        parts.push_back(w.substr(start, dash == std::string::npos ? dash : dash - start));
        numeric &= numbers::is_number_word(parts.back());
        if (dash == std::string::npos) break;
        start = dash + 1;
      }
      if (numeric) {
        for (auto& p : parts) out.push_back(std::move(p));
        continue;
      }
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace tfmt
