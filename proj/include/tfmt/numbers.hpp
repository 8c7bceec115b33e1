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

// English number verbalization and the matching spoken-form parsers.
//
// Parsers take a token span and return every valid parse that starts at
// token 0, longest first. Callers pick among them, which lets the grammar
// engine backtrack across neighbouring slots.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tfmt::numbers {

inline constexpr std::uint64_t kMaxCardinal = 999'999'999;

struct NumberParse {
  std::size_t consumed = 0;
  std::uint64_t value = 0;
};

struct DigitParse {
  std::size_t consumed = 0;
  std::string digits;
};

std::string_view digit_word(int d);
// "zero" .. "nine" (and "oh" when allow_oh) to 0..9.
std::optional<int> digit_value(std::string_view word, bool allow_oh = false);
bool is_number_word(std::string_view word);

// Words for 0..kMaxCardinal without "and" or hyphens.
std::string cardinal_words(std::uint64_t n);
std::string ordinal_words(std::uint64_t n);
std::string_view ordinal_suffix(std::uint64_t n);
// Years 1000..2999: "nineteen oh five", "nineteen hundred", "two thousand twenty four".
std::string year_words(int year);
// Digit-by-digit: "07" -> "zero seven".
std::string digit_words(std::string_view digits);

// "1234" / "12,345" style used for written cardinals: plain below 10,000,
// comma-grouped from 10,000 up.
std::string format_cardinal(std::uint64_t n);
// Parses a canonical written cardinal; nullopt if not canonical.
std::optional<std::uint64_t> parse_written_cardinal(std::string_view s);

// Standard cardinals ("four hundred and fifty six", "two thousand twenty
// four") plus the informal hundreds form ("one twenty three" = 123).
std::vector<NumberParse> parse_cardinal(std::span<const std::string> toks);
std::vector<NumberParse> parse_ordinal(std::span<const std::string> toks);
std::vector<NumberParse> parse_year(std::span<const std::string> toks);
// 1..99 as used for cents.
std::vector<NumberParse> parse_below_hundred(std::span<const std::string> toks);

// Exactly `n_digits` digits built from chunks: single digit words, two-digit
// numbers ("twelve", "thirty four"), hundreds ("eight hundred") and
// thousands ("three thousand four hundred and fifty six").
std::vector<DigitParse> parse_digit_chunks(std::span<const std::string> toks, std::size_t n_digits);
// One or more single digit words, up to max_digits.
std::vector<DigitParse> parse_digit_run(std::span<const std::string> toks, std::size_t max_digits);

}  // namespace tfmt::numbers
