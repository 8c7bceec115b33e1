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

// Written -> spoken normalization with span provenance, plus the
// bidirectionality check over generated grammar samples.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tfmt/grammar.hpp"
#include "tfmt/text.hpp"

namespace tfmt {

// Written tokens [written_begin, written_end) produced spoken tokens
// [spoken_begin, spoken_end). The spoken range is empty for written tokens
// that carry no pronounceable characters.
struct ProvenanceSpan {
  std::size_t written_begin = 0;
  std::size_t written_end = 0;
  std::size_t spoken_begin = 0;
  std::size_t spoken_end = 0;
  EntityClass entity_class = EntityClass::kNone;
  // Unmatched numeric token copied through verbatim.
  bool malformed = false;

  friend bool operator==(const ProvenanceSpan&, const ProvenanceSpan&) = default;
};

struct NormalizationResult {
  std::vector<Token> written;
  std::vector<std::string> spoken;
  std::vector<ProvenanceSpan> provenance;
};

// Longest written entity spans considered, in tokens.
inline constexpr std::size_t kMaxEntityTokens = 4;

NormalizationResult normalize(const Grammar& grammar, std::string_view written);

// Lowercased word with everything but letters, digits, apostrophes, hyphens
// and non-ASCII bytes removed; leading/trailing apostrophes and hyphens are
// stripped. Empty when nothing pronounceable remains.
std::string plain_word(std::string_view word);

// Written text of tokens [begin, end) as one entity candidate: inner tokens
// keep their punctuation, the last token's punctuation is excluded.
std::string entity_candidate(std::span<const Token> tokens, std::size_t begin, std::size_t end);

inline std::optional<InverseMatch> inverse_parse(const Grammar& grammar,
                                                 std::span<const std::string> spoken) {
  return grammar.inverse_parse(spoken);
}

struct RoundTripFailure {
  std::string written;
  std::vector<std::string> spoken;
  std::optional<std::string> recovered;
  std::size_t rule = 0;
};

struct RoundTripReport {
  EntityClass entity_class = EntityClass::kNone;
  std::size_t samples = 0;
  std::vector<RoundTripFailure> failures;
};

// Draws `samples` written strings from the class's rules and checks that
// inverse parsing their spoken forms recovers them exactly, both for the
// normalize() expansion and for each drawing rule's own template.
RoundTripReport grammar_roundtrip_check(const Grammar& grammar, EntityClass entity_class,
                                        std::size_t samples, std::uint64_t seed);

}  // namespace tfmt
