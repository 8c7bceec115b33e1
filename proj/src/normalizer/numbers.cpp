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

#include "tfmt/numbers.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace tfmt::numbers {
namespace {

constexpr std::array<std::string_view, 10> kDigits = {"zero", "one", "two",   "three", "four",
                                                      "five", "six", "seven", "eight", "nine"};
constexpr std::array<std::string_view, 10> kTeens = {"ten",     "eleven",  "twelve",    "thirteen",
                                                     "fourteen", "fifteen", "sixteen",   "seventeen",
                                                     "eighteen", "nineteen"};
constexpr std::array<std::string_view, 10> kTens = {"",      "",      "twenty",  "thirty", "forty",
                                                    "fifty", "sixty", "seventy", "eighty", "ninety"};

const std::map<std::string_view, std::string_view>& ordinal_to_cardinal() {
  static const std::map<std::string_view, std::string_view> m = {
      {"first", "one"},          {"second", "two"},         {"third", "three"},
      {"fourth", "four"},        {"fifth", "five"},         {"sixth", "six"},
      {"seventh", "seven"},      {"eighth", "eight"},       {"ninth", "nine"},
      {"tenth", "ten"},          {"eleventh", "eleven"},    {"twelfth", "twelve"},
      {"thirteenth", "thirteen"}, {"fourteenth", "fourteen"}, {"fifteenth", "fifteen"},
      {"sixteenth", "sixteen"},  {"seventeenth", "seventeen"}, {"eighteenth", "eighteen"},
      {"nineteenth", "nineteen"}, {"twentieth", "twenty"},   {"thirtieth", "thirty"},
      {"fortieth", "forty"},     {"fiftieth", "fifty"},     {"sixtieth", "sixty"},
      {"seventieth", "seventy"}, {"eightieth", "eighty"},   {"ninetieth", "ninety"},
      {"hundredth", "hundred"},  {"thousandth", "thousand"}, {"millionth", "million"}};
  return m;
}

std::string_view cardinal_to_ordinal(std::string_view w) {
  for (const auto& [ord, card] : ordinal_to_cardinal()) {
    if (card == w) return ord;
  }
  return {};
}

std::optional<int> unit_value(std::string_view w) {
  for (int i = 1; i < 10; ++i) {
    if (kDigits[static_cast<std::size_t>(i)] == w) return i;
  }
  return std::nullopt;
}

std::optional<int> teen_value(std::string_view w) {
  for (int i = 0; i < 10; ++i) {
    if (kTeens[static_cast<std::size_t>(i)] == w) return 10 + i;
  }
  return std::nullopt;
}

std::optional<int> tens_value(std::string_view w) {
  for (int i = 2; i < 10; ++i) {
    if (kTens[static_cast<std::size_t>(i)] == w) return 10 * i;
  }
  return std::nullopt;
}

bool at(std::span<const std::string> t, std::size_t i, std::string_view w) {
  return i < t.size() && t[i] == w;
}

void sort_longest_first(std::vector<NumberParse>& v) {
  std::stable_sort(v.begin(), v.end(),
                   [](const NumberParse& a, const NumberParse& b) { return a.consumed > b.consumed; });
  v.erase(std::unique(v.begin(), v.end(),
                      [](const NumberParse& a, const NumberParse& b) {
                        return a.consumed == b.consumed && a.value == b.value;
                      }),
          v.end());
}

// 1..99 starting at `pos`.
std::vector<NumberParse> below_hundred_at(std::span<const std::string> t, std::size_t pos) {
  std::vector<NumberParse> out;
  if (pos >= t.size()) return out;
  if (auto u = unit_value(t[pos])) out.push_back({1, static_cast<std::uint64_t>(*u)});
  if (auto v = teen_value(t[pos])) out.push_back({1, static_cast<std::uint64_t>(*v)});
  if (auto v = tens_value(t[pos])) {
    if (pos + 1 < t.size()) {
      if (auto u = unit_value(t[pos + 1])) out.push_back({2, static_cast<std::uint64_t>(*v + *u)});
    }
    out.push_back({1, static_cast<std::uint64_t>(*v)});
  }
  return out;
}

// 1..999 starting at `pos`; consumed is relative to pos.
std::vector<NumberParse> group_at(std::span<const std::string> t, std::size_t pos) {
  std::vector<NumberParse> out;
  if (pos >= t.size()) return out;
  if (auto u = unit_value(t[pos]); u && at(t, pos + 1, "hundred")) {
    const std::uint64_t base = static_cast<std::uint64_t>(*u) * 100;
    std::size_t next = pos + 2;
    for (std::size_t skip_and : {1, 0}) {
      if (skip_and && !at(t, next, "and")) continue;
      for (const auto& r : below_hundred_at(t, next + skip_and)) {
        out.push_back({2 + skip_and + r.consumed, base + r.value});
      }
    }
    out.push_back({2, base});
  }
  for (const auto& r : below_hundred_at(t, pos)) out.push_back(r);
  return out;
}

constexpr std::array<std::uint64_t, 3> kScale = {1, 1000, 1000000};
constexpr std::array<std::string_view, 3> kScaleWord = {"", "thousand", "million"};

void scaled(std::span<const std::string> t, std::size_t pos, std::size_t level, std::uint64_t acc,
            bool any, std::vector<NumberParse>& out) {
  if (any) out.push_back({pos, acc});
  for (std::size_t l = level; l-- > 0;) {
    std::vector<std::size_t> starts = {pos};
    if (any && l == 0 && at(t, pos, "and")) starts.push_back(pos + 1);
    for (std::size_t s : starts) {
      for (const auto& g : group_at(t, s)) {
        const std::size_t end = s + g.consumed;
        if (l == 0) {
          out.push_back({end, acc + g.value});
        } else if (at(t, end, kScaleWord[l])) {
          scaled(t, end + 1, l, acc + g.value * kScale[l], true, out);
        }
      }
    }
  }
}

}  // namespace

std::string_view digit_word(int d) { return kDigits.at(static_cast<std::size_t>(d)); }

std::optional<int> digit_value(std::string_view word, bool allow_oh) {
  for (int i = 0; i < 10; ++i) {
    if (kDigits[static_cast<std::size_t>(i)] == word) return i;
  }
  if (allow_oh && word == "oh") return 0;
  return std::nullopt;
}

bool is_number_word(std::string_view w) {
  if (digit_value(w, true) || teen_value(w) || tens_value(w)) return true;
  if (w == "hundred" || w == "thousand" || w == "million") return true;
  return ordinal_to_cardinal().count(w) > 0;
}

std::string format_cardinal(std::uint64_t n) {
  std::string digits = std::to_string(n);
  if (n < 10000) return digits;
  std::string out;
  const std::size_t lead = digits.size() % 3 == 0 ? 3 : digits.size() % 3;
  out = digits.substr(0, lead);
  for (std::size_t i = lead; i < digits.size(); i += 3) {
    out.push_back(',');
    out += digits.substr(i, 3);
  }
  return out;
}

std::optional<std::uint64_t> parse_written_cardinal(std::string_view s) {
  if (s.empty() || s.size() > 11) return std::nullopt;
  std::string digits;
  for (char c : s) {
    if (c >= '0' && c <= '9') {
      digits.push_back(c);
    } else if (c != ',') {
      return std::nullopt;
    }
  }
  if (digits.empty() || digits.size() > 9) return std::nullopt;
  if (digits.size() > 1 && digits[0] == '0') return std::nullopt;
  const std::uint64_t v = std::stoull(digits);
  if (v > kMaxCardinal || format_cardinal(v) != s) return std::nullopt;
  return v;
}

std::string cardinal_words(std::uint64_t n) {
  if (n == 0) return "zero";
  auto group = [](std::uint64_t g) {
    std::string out;
    const std::uint64_t h = g / 100;
    const std::uint64_t r = g % 100;
    if (h) {
      out += kDigits[h];
      out += " hundred";
    }
    if (r) {
      if (!out.empty()) out.push_back(' ');
      if (r < 10) {
        out += kDigits[r];
      } else if (r < 20) {
        out += kTeens[r - 10];
      } else {
        out += kTens[r / 10];
        if (r % 10) {
          out.push_back(' ');
          out += kDigits[r % 10];
        }
      }
    }
    return out;
  };
  std::string out;
  for (std::size_t l = 3; l-- > 0;) {
    const std::uint64_t g = (n / kScale[l]) % 1000;
    if (!g) continue;
    if (!out.empty()) out.push_back(' ');
    out += group(g);
    if (l) {
      out.push_back(' ');
      out += kScaleWord[l];
    }
  }
  return out;
}

std::string ordinal_words(std::uint64_t n) {
  std::string words = cardinal_words(n);
  const std::size_t sp = words.rfind(' ');
  const std::size_t start = sp == std::string::npos ? 0 : sp + 1;
  const std::string_view last = std::string_view(words).substr(start);
  if (last == "zero") return words.substr(0, start) + "zeroth";
  return words.substr(0, start) + std::string(cardinal_to_ordinal(last));
}

std::string_view ordinal_suffix(std::uint64_t n) {
  const std::uint64_t r100 = n % 100;
  if (r100 >= 11 && r100 <= 13) return "th";
  switch (n % 10) {
    case 1:
      return "st";
    case 2:
      return "nd";
    case 3:
      return "rd";
    default:
      return "th";
  }
}

std::string year_words(int year) {
  if (year >= 2000 || year % 1000 == 0) return cardinal_words(static_cast<std::uint64_t>(year));
  const int hi = year / 100;
  const int lo = year % 100;
  std::string out = cardinal_words(static_cast<std::uint64_t>(hi));
  if (lo == 0) return out + " hundred";
  if (lo < 10) return out + " oh " + std::string(kDigits[static_cast<std::size_t>(lo)]);
  return out + " " + cardinal_words(static_cast<std::uint64_t>(lo));
}

std::string digit_words(std::string_view digits) {
  std::string out;
  for (char c : digits) {
    if (!out.empty()) out.push_back(' ');
    out += kDigits.at(static_cast<std::size_t>(c - '0'));
  }
  return out;
}

std::vector<NumberParse> parse_cardinal(std::span<const std::string> toks) {
  std::vector<NumberParse> out;
  if (toks.empty()) return out;
  if (toks[0] == "zero") out.push_back({1, 0});
  scaled(toks, 0, 3, 0, false, out);
  // Informal hundreds: "one twenty three" = 123.
  if (auto u = unit_value(toks[0])) {
    for (const auto& r : below_hundred_at(toks, 1)) {
      if (r.value >= 10) out.push_back({1 + r.consumed, static_cast<std::uint64_t>(*u) * 100 + r.value});
    }
  }
  sort_longest_first(out);
  return out;
}

std::vector<NumberParse> parse_ordinal(std::span<const std::string> toks) {
  std::vector<NumberParse> out;
  const auto& table = ordinal_to_cardinal();
  const std::size_t limit = std::min<std::size_t>(toks.size(), 12);
  for (std::size_t e = 1; e <= limit; ++e) {
    auto it = table.find(toks[e - 1]);
    if (it == table.end()) continue;
    std::vector<std::string> copy(toks.begin(), toks.begin() + static_cast<std::ptrdiff_t>(e));
    copy.back() = std::string(it->second);
    for (const auto& p : parse_cardinal(copy)) {
      if (p.consumed == e && p.value > 0) out.push_back(p);
    }
  }
  sort_longest_first(out);
  return out;
}

std::vector<NumberParse> parse_year(std::span<const std::string> toks) {
  std::vector<NumberParse> out;
  for (const auto& p : parse_cardinal(toks)) {
    if (p.value >= 1000 && p.value <= 2999) out.push_back(p);
  }
  for (const auto& first : below_hundred_at(toks, 0)) {
    if (first.value < 10 || first.value > 29) continue;
    const std::size_t pos = first.consumed;
    const std::uint64_t base = first.value * 100;
    if (at(toks, pos, "hundred")) out.push_back({pos + 1, base});
    if (at(toks, pos, "oh") && pos + 1 < toks.size()) {
      if (auto u = unit_value(toks[pos + 1])) out.push_back({pos + 2, base + static_cast<std::uint64_t>(*u)});
    }
    for (const auto& second : below_hundred_at(toks, pos)) {
      if (second.value >= 10) out.push_back({pos + second.consumed, base + second.value});
    }
  }
  sort_longest_first(out);
  return out;
}

std::vector<NumberParse> parse_below_hundred(std::span<const std::string> toks) {
  auto out = below_hundred_at(toks, 0);
  sort_longest_first(out);
  return out;
}

namespace {

void digit_chunks(std::span<const std::string> t, std::size_t pos, std::string& acc, std::size_t n,
                  std::vector<DigitParse>& out) {
  if (acc.size() == n) {
    out.push_back({pos, acc});
    return;
  }
  if (pos >= t.size()) return;
  auto push = [&](std::size_t consumed, const std::string& chunk) {
    if (acc.size() + chunk.size() > n) return;
    const std::size_t keep = acc.size();
    acc += chunk;
    digit_chunks(t, pos + consumed, acc, n, out);
    acc.resize(keep);
  };
  if (auto d = digit_value(t[pos], true)) push(1, std::string(1, static_cast<char>('0' + *d)));
  // Multi-digit chunks are taken maximally: "thirty four" is 34, never 30
  // followed by 4, so one digit string has one chunking.
  if (auto r = below_hundred_at(t, pos); !r.empty() && r[0].value >= 10) {
    push(r[0].consumed, std::to_string(r[0].value));
  }
  if (auto g = group_at(t, pos); !g.empty() && g[0].value >= 100) {
    push(g[0].consumed, std::to_string(g[0].value));
  }
  if (auto c = parse_cardinal(t.subspan(pos)); !c.empty() && c[0].value >= 1000 && c[0].value <= 9999) {
    push(c[0].consumed, std::to_string(c[0].value));
  }
}

}  // namespace

std::vector<DigitParse> parse_digit_chunks(std::span<const std::string> toks, std::size_t n_digits) {
  std::vector<DigitParse> out;
  std::string acc;
  digit_chunks(toks, 0, acc, n_digits, out);
  std::stable_sort(out.begin(), out.end(),
                   [](const DigitParse& a, const DigitParse& b) { return a.consumed > b.consumed; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const DigitParse& a, const DigitParse& b) {
                          return a.consumed == b.consumed && a.digits == b.digits;
                        }),
            out.end());
  return out;
}

std::vector<DigitParse> parse_digit_run(std::span<const std::string> toks, std::size_t max_digits) {
  std::vector<DigitParse> out;
  std::string acc;
  for (std::size_t i = 0; i < toks.size() && acc.size() < max_digits; ++i) {
    auto d = digit_value(toks[i]);
    if (!d) break;
    acc.push_back(static_cast<char>('0' + *d));
    out.push_back({i + 1, acc});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace tfmt::numbers
