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

// Word tokens, casing forms and edit-distance alignment shared by every
// other module.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tfmt {

// Raised when a caller violates a documented precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Post-punctuation label set. Enumerator order is the label index used by
// the tagger head (lowest index wins argmax ties).
enum class Punct : std::uint8_t { kPeriod = 0, kComma = 1, kQuestion = 2, kNone = 3 };
inline constexpr std::size_t kNumPunct = 4;

// Truecasing label set, same indexing convention.
enum class CaseForm : std::uint8_t { kCapital = 0, kAcronym = 1, kMixed = 2, kLower = 3 };
inline constexpr std::size_t kNumCase = 4;

// ITN span label set.
enum class ItnLabel : std::uint8_t { kItn = 0, kO = 1 };
inline constexpr std::size_t kNumItn = 2;

// Per-token label triple predicted by the three tagger heads.
struct TokenLabels {
  Punct punct = Punct::kNone;
  CaseForm casing = CaseForm::kLower;
  ItnLabel itn = ItnLabel::kO;

  friend bool operator==(const TokenLabels&, const TokenLabels&) = default;
};

std::string_view to_string(Punct p);
std::string_view to_string(ItnLabel l);
std::optional<ItnLabel> itn_from_string(std::string_view s);
std::string_view to_string(CaseForm c);
std::optional<Punct> punct_from_string(std::string_view s);
std::optional<CaseForm> case_from_string(std::string_view s);

// '.', ',', '?' or '\0' for kNone.
char punct_char(Punct p);
std::optional<Punct> punct_from_char(char c);

struct Token {
  std::string text;
  // Byte offsets of `text` in the source string, end exclusive.
  std::size_t start = 0;
  std::size_t end = 0;
  Punct post_punct = Punct::kNone;

  Token() = default;
  explicit Token(std::string t, Punct p = Punct::kNone) : text(std::move(t)), post_punct(p) {}

  friend bool operator==(const Token& a, const Token& b) {
    return a.text == b.text && a.post_punct == b.post_punct;
  }
};

// Splits on ASCII whitespace and detaches one trailing '.', ',' or '?' into
// post_punct. Abbreviations ("Mr.", "e.g.", "U.S.") keep their final period.
std::vector<Token> tokenize(std::string_view text);
std::string detokenize(std::span<const Token> tokens);

// True if a trailing period on `word` belongs to the word itself.
bool is_abbreviation(std::string_view word);

// ASCII-only case helpers; other bytes pass through unchanged.
std::string ascii_lower(std::string_view s);
std::string ascii_upper(std::string_view s);
std::vector<std::string> split_whitespace(std::string_view s);
std::string join(std::span<const std::string> parts, std::string_view sep = " ");
// Collapses whitespace runs to one space and trims both ends.
std::string normalize_whitespace(std::string_view s);
// Decodes UTF-8; invalid bytes decode to U+FFFD.
std::u32string utf8_decode(std::string_view s);
std::string utf8_encode(std::u32string_view s);

CaseForm classify_case(std::string_view word);
// Throws ContractError for CaseForm::kMixed, which only the span converter
// can realize.
std::string apply_case(std::string_view word, CaseForm form);

// ---------------------------------------------------------------------------
// Alignment

// Enumerator order is the tie-break preference during backtrace.
enum class EditOp : std::uint8_t { kMatch = 0, kSub = 1, kDel = 2, kIns = 3 };

struct AlignedPair {
  EditOp op;
  std::optional<std::size_t> ref;
  std::optional<std::size_t> hyp;

  friend bool operator==(const AlignedPair&, const AlignedPair&) = default;
};

struct Alignment {
  std::vector<AlignedPair> ops;
  // Total cost under the costs used to build the alignment; with unit costs
  // this is the number of non-match operations.
  long cost = 0;
};

// Cost of substituting two unequal items. Must be >= 0.
using SubstCost = std::function<long(std::string_view ref, std::string_view hyp)>;

long unit_subst_cost(std::string_view, std::string_view);

// Minimum-cost alignment with unit insertion/deletion cost. Among optimal
// alignments the backtrace from the end prefers MATCH, then SUB, then DEL,
// then INS.
Alignment align_words(std::span<const std::string> ref, std::span<const std::string> hyp,
                      const SubstCost& subst_cost = unit_subst_cost);

// Unit-cost Levenshtein distance over code points.
std::size_t edit_distance(std::u32string_view ref, std::u32string_view hyp);

// Checks the index-coverage invariants; returns an error message or nullopt.
std::optional<std::string> validate_alignment(const Alignment& a, std::size_t ref_len,
                                              std::size_t hyp_len);

}  // namespace tfmt
