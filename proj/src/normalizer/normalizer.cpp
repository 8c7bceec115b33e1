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

#include "tfmt/normalizer.hpp"

#include <algorithm>

namespace tfmt {
namespace {

bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

std::string plain_word(std::string_view word) {
  std::string out;
  for (char c : ascii_lower(word)) {
    const auto u = static_cast<unsigned char>(c);
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'' || c == '-' || u >= 0x80) {
      out.push_back(c);
    }
  }
  const auto edge = [](char c) { return c == '\'' || c == '-'; };
  while (!out.empty() && edge(out.back())) out.pop_back();
  std::size_t lead = 0;
  while (lead < out.size() && edge(out[lead])) ++lead;
  return out.substr(lead);
}

std::string entity_candidate(std::span<const Token> tokens, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t k = begin; k < end; ++k) {
    if (k > begin) out.push_back(' ');
    out += tokens[k].text;
    if (k + 1 < end && tokens[k].post_punct != Punct::kNone) out.push_back(punct_char(tokens[k].post_punct));
  }
  return out;
}

NormalizationResult normalize(const Grammar& grammar, std::string_view written) {
  NormalizationResult r;
  r.written = tokenize(written);
  const std::size_t n = r.written.size();
  std::size_t i = 0;
  while (i < n) {
    ProvenanceSpan span;
    span.written_begin = i;
    span.spoken_begin = r.spoken.size();
    std::optional<WrittenMatch> match;
    std::size_t end = i + 1;
    for (std::size_t j = std::min(n, i + kMaxEntityTokens); j > i; --j) {
      match = grammar.match_written(entity_candidate(r.written, i, j));
      if (match) {
        end = j;
        break;
      }
    }
    if (match) {
      for (auto& w : match->spoken) r.spoken.push_back(std::move(w));
      span.entity_class = match->entity_class;
    } else {
      const std::string& text = r.written[i].text;
      if (has_digit(text)) {
        r.spoken.push_back(ascii_lower(text));
        span.malformed = true;
      } else if (std::string w = plain_word(text); !w.empty()) {
        r.spoken.push_back(std::move(w));
      }
    }
    span.written_end = end;
    span.spoken_end = r.spoken.size();
    r.provenance.push_back(span);
    i = end;
  }
  return r;
}

RoundTripReport grammar_roundtrip_check(const Grammar& grammar, EntityClass entity_class,
                                        std::size_t samples, std::uint64_t seed) {
  RoundTripReport report;
  report.entity_class = entity_class;
  report.samples = samples;
  const auto rules = grammar.rules_for(entity_class);
  if (rules.empty()) return report;
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const GrammarRule& rule = *rules[rng.below(rules.size())];
    const std::string w = grammar.generate(rule, rng);
    auto check = [&](std::vector<std::string> spoken) {
      auto m = grammar.inverse_parse(spoken);
      const bool ok = m && m->consumed == spoken.size() && m->written == w;
      if (!ok) {
        report.failures.push_back(
            {w, std::move(spoken), m ? std::optional<std::string>(m->written) : std::nullopt, rule.index});
      }
    };
    check(normalize(grammar, w).spoken);
    if (auto own = grammar.expand(rule, w)) {
      check(std::move(*own));
    } else {
      report.failures.push_back({w, {}, std::nullopt, rule.index});
    }
  }
  return report;
}

}  // namespace tfmt
