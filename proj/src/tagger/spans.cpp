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

#include "tfmt/tagger.hpp"

namespace tfmt {

std::string_view to_string(SpanKind k) { return k == SpanKind::kItn ? "ITN" : "MIXED"; }

std::vector<ConversionSpan> extract_spans(std::span<const TokenLabels> labels, std::size_t radius) {
  const std::size_t n = labels.size();
  std::vector<ConversionSpan> raw;
  auto widen = [&](SpanKind kind, std::size_t b, std::size_t e) {
    raw.push_back({kind, b, e, b >= radius ? b - radius : 0, std::min(n, e + radius)});
  };
  std::size_t i = 0;
  while (i < n) {
    if (labels[i].itn == ItnLabel::kItn) {
      std::size_t j = i;
      while (j < n && labels[j].itn == ItnLabel::kItn) ++j;
      widen(SpanKind::kItn, i, j);
      i = j;
    } else {
      if (labels[i].casing == CaseForm::kMixed) widen(SpanKind::kMixed, i, i + 1);
      ++i;
    }
  }
  std::vector<ConversionSpan> out;
  for (const auto& s : raw) {
    if (!out.empty() && out.back().context_end >= s.context_begin) {
      ConversionSpan& m = out.back();
      m.core_end = std::max(m.core_end, s.core_end);
      m.context_end = std::max(m.context_end, s.context_end);
      if (s.kind == SpanKind::kItn) m.kind = SpanKind::kItn;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace tfmt
