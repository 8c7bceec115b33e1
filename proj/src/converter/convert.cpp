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
#include <map>

#include "tfmt/converter.hpp"
#include "tfmt/normalizer.hpp"

namespace tfmt {

namespace {

bool is_mark(char c) { return c == '.' || c == ',' || c == '?'; }

std::string strip_trailing_marks(std::string_view s) {
  while (!s.empty() && is_mark(s.back())) s.remove_suffix(1);
  return std::string(s);
}

ConvertResult identity_result(const SpanText& span, ConvertStatus status, std::string diagnostic) {
  ConvertResult r;
  r.text = join(span.core);
  if (span.carried_punct) r.text.push_back(*span.carried_punct);
  r.status = status;
  r.diagnostic = std::move(diagnostic);
  return r;
}

}  // namespace

std::string_view to_string(ConvertStatus s) {
  switch (s) {
    case ConvertStatus::kConverted:
      return "converted";
    case ConvertStatus::kIdentity:
      return "identity";
    case ConvertStatus::kTruncated:
      return "truncated";
    case ConvertStatus::kMalformedOutput:
      return "malformed-output";
  }
  return "?";
}

SpanText make_span_text(std::span<const std::string> formatted, const ConversionSpan& span) {
  if (span.core_begin >= span.core_end) throw std::invalid_argument("make_span_text: empty core");
  if (span.context_begin > span.core_begin || span.core_end > span.context_end || span.context_end > formatted.size())
    throw std::invalid_argument("make_span_text: span outside the token list");
  SpanText st;
  st.kind = span.kind;
  st.left.assign(formatted.begin() + span.context_begin, formatted.begin() + span.core_begin);
  st.core.assign(formatted.begin() + span.core_begin, formatted.begin() + span.core_end);
  st.right.assign(formatted.begin() + span.core_end, formatted.begin() + span.context_end);
  std::string& last = st.core.back();
  if (last.size() > 1 && is_mark(last.back())) {
    st.carried_punct = last.back();
    last.pop_back();
  }
  return st;
}

std::string encode_span(const SpanText& span) {
  std::string out = join(span.left);
  out += kSepMarker;
  out += join(span.core);
  out += kSepMarker;
  out += join(span.right);
  return out;
}

std::optional<std::string> core_between_separators(std::string_view text) {
  const auto a = text.find(kSepMarker);
  if (a == std::string_view::npos) return std::nullopt;
  const auto start = a + kSepMarker.size();
  const auto b = text.find(kSepMarker, start);
  if (b == std::string_view::npos) return std::nullopt;
  return std::string(text.substr(start, b - start));
}

std::optional<std::string> mixed_case_lookup(std::string_view lower) {
  static const std::map<std::string, std::string, std::less<>> table = [] {
    std::map<std::string, std::string, std::less<>> t;
    for (std::string_view w : mixed_case_lexicon()) t.emplace(ascii_lower(w), std::string(w));
    return t;
  }();
  const auto it = table.find(ascii_lower(lower));
  if (it == table.end()) return std::nullopt;
  return it->second;
}

ConvertResult OracleBackend::convert(const SpanText& span) const {
  if (span.core.empty()) throw std::invalid_argument("convert: empty core");
  // Parsing sees lowercase words without marks; a mark on the last token a
  // conversion consumes is re-attached to its output.
  std::vector<std::string> words, marks;
  for (const auto& t : span.core) {
    words.push_back(ascii_lower(strip_trailing_marks(t)));
    marks.push_back(t.substr(strip_trailing_marks(t).size()));
  }
  std::vector<std::string> pieces;
  bool changed = false;
  for (std::size_t i = 0; i < words.size();) {
    if (auto m = grammar_.inverse_parse(std::span<const std::string>(words).subspan(i)); m && m->consumed > 0) {
      pieces.push_back(m->written + marks[i + m->consumed - 1]);
      changed = true;
      i += m->consumed;
      continue;
    }
    if (auto mc = mixed_case_lookup(words[i]); mc && *mc + marks[i] != span.core[i]) {
      pieces.push_back(*mc + marks[i]);
      changed = true;
    } else {
      pieces.push_back(span.core[i]);
    }
    ++i;
  }
  if (!changed) return identity_result(span, ConvertStatus::kIdentity, {});
  ConvertResult r;
  r.text = join(pieces);
  r.status = r.text == join(span.core) ? ConvertStatus::kIdentity : ConvertStatus::kConverted;
  if (span.carried_punct) r.text.push_back(*span.carried_punct);
  return r;
}

ConvertResult NeuralBackend::convert(const SpanText& span) const {
  if (span.core.empty()) throw std::invalid_argument("convert: empty core");
  const CharVocab& vocab = CharVocab::standard();
  std::size_t unknown = 0;
  const auto ids = vocab.encode(encode_span(span), &unknown);
  std::string diag;
  if (unknown > 0) diag = std::to_string(unknown) + " input character(s) mapped to <unk>";
  const DecodeResult d = model_.greedy_decode(ids);
  const std::string text = vocab.decode(d.ids);
  auto with = [&](std::string more) { return diag.empty() ? more : diag + "; " + more; };
  if (d.truncated)
    return identity_result(span, ConvertStatus::kTruncated,
                           with("decoder reached the length cap of " + std::to_string(d.cap)));
  const auto core = core_between_separators(text);
  if (!core || core->empty() || core->find('<') != std::string::npos)
    return identity_result(span, ConvertStatus::kMalformedOutput, with("decoder output lacks a delimited core: " + text));
  ConvertResult r;
  r.text = *core;
  r.status = *core == join(span.core) ? ConvertStatus::kIdentity : ConvertStatus::kConverted;
  if (span.carried_punct) r.text.push_back(*span.carried_punct);
  r.diagnostic = diag;
  return r;
}

std::vector<std::string> reintegrate_tokens(std::span<const std::string> formatted,
                                            std::span<const ConversionSpan> spans,
                                            std::span<const std::string> outputs) {
  if (spans.size() != outputs.size())
    throw std::invalid_argument("reintegrate: " + std::to_string(spans.size()) + " spans but " +
                                std::to_string(outputs.size()) + " outputs");
  std::vector<std::string> out;
  out.reserve(formatted.size());
  std::size_t pos = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    if (s.core_begin >= s.core_end || s.core_end > formatted.size())
      throw std::invalid_argument("reintegrate: span " + std::to_string(i) + " has an invalid core");
    if (s.core_begin < pos)
      throw std::invalid_argument("reintegrate: span " + std::to_string(i) + " overlaps or is out of order");
    out.insert(out.end(), formatted.begin() + pos, formatted.begin() + s.core_begin);
    if (!outputs[i].empty()) out.push_back(outputs[i]);
    pos = s.core_end;
  }
  out.insert(out.end(), formatted.begin() + pos, formatted.end());
  return out;
}

std::string reintegrate(std::span<const std::string> formatted, std::span<const ConversionSpan> spans,
                        std::span<const std::string> outputs) {
  return join(reintegrate_tokens(formatted, spans, outputs));
}

std::vector<std::string> apply_labels(std::span<const std::string> spoken, std::span<const TokenLabels> labels) {
  if (spoken.size() != labels.size())
    throw std::invalid_argument("apply_labels: " + std::to_string(spoken.size()) + " tokens but " +
                                std::to_string(labels.size()) + " labels");
  std::vector<std::string> out;
  out.reserve(spoken.size());
  for (std::size_t i = 0; i < spoken.size(); ++i) {
    std::string w = labels[i].casing == CaseForm::kMixed ? spoken[i] : apply_case(spoken[i], labels[i].casing);
    if (labels[i].punct != Punct::kNone) w.push_back(punct_char(labels[i].punct));
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace tfmt
