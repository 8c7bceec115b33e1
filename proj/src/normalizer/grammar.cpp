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

#include "tfmt/grammar.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "tfmt/numbers.hpp"
#include "tfmt/text.hpp"

namespace tfmt {
namespace detail {
extern const std::string_view kBuiltinGrammar;
}

namespace {

constexpr std::array<std::string_view, 12> kMonths = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

constexpr std::array<std::string_view, 9> kTlds = {"com", "org", "net", "edu", "gov",
                                                   "io",  "co",  "us",  "info"};

constexpr std::array<std::string_view, 3> kScales = {"thousand", "million", "billion"};

constexpr std::array<EntityClass, 11> kClasses = {
    EntityClass::kCardinal, EntityClass::kOrdinal,    EntityClass::kDate,
    EntityClass::kCurrency, EntityClass::kPhone,      EntityClass::kEmail,
    EntityClass::kUrl,      EntityClass::kCreditCard, EntityClass::kSsn,
    EntityClass::kZip,      EntityClass::kDecimal};

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

bool all_lower_alpha(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), is_lower);
}

// Letter runs inside labels must not collide with words that carry meaning
// in spoken labels.
bool reserved_run(std::string_view w) {
  return w == "dot" || w == "at" || numbers::is_number_word(w);
}

bool valid_label(std::string_view s) {
  if (s.empty() || !is_lower(s[0])) return false;
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_lower(s[i])) {
      std::size_t j = i;
      while (j < s.size() && is_lower(s[j])) ++j;
      if (reserved_run(s.substr(i, j - i))) return false;
      i = j;
    } else if (is_digit(s[i])) {
      ++i;
    } else {
      return false;
    }
  }
  return true;
}

bool is_tld(std::string_view s) {
  return std::find(kTlds.begin(), kTlds.end(), s) != kTlds.end();
}

std::vector<std::string> split_words(std::string_view s) { return split_whitespace(s); }

void append_words(std::vector<std::string>& out, std::string_view words) {
  for (auto& w : split_words(words)) out.push_back(std::move(w));
}

std::vector<std::string> label_words(std::string_view label) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < label.size()) {
    if (is_digit(label[i])) {
      out.emplace_back(numbers::digit_word(label[i] - '0'));
      ++i;
    } else {
      std::size_t j = i;
      while (j < label.size() && !is_digit(label[j])) ++j;
      out.emplace_back(label.substr(i, j - i));
      i = j;
    }
  }
  return out;
}

std::vector<std::string> dotted_words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = s.find('.', start);
    for (auto& w : label_words(s.substr(start, dot == std::string_view::npos ? dot : dot - start))) {
      out.push_back(std::move(w));
    }
    if (dot == std::string_view::npos) break;
    out.emplace_back("dot");
    start = dot + 1;
  }
  return out;
}

std::optional<std::uint64_t> parse_ordinal_written(std::string_view s) {
  if (s.size() < 3) return std::nullopt;
  const std::string_view digits = s.substr(0, s.size() - 2);
  const std::string_view suffix = s.substr(s.size() - 2);
  if (digits.empty() || digits.size() > 9 || digits[0] == '0') return std::nullopt;
  if (!std::all_of(digits.begin(), digits.end(), is_digit)) return std::nullopt;
  const std::uint64_t v = std::stoull(std::string(digits));
  if (numbers::ordinal_suffix(v) != suffix) return std::nullopt;
  return v;
}

// ---------------------------------------------------------------------------
// Written side: candidate end offsets for a slot starting at `pos`, longest
// first.

std::vector<std::size_t> dotted_ends(std::string_view s, std::size_t pos, bool need_tld) {
  std::vector<std::size_t> ends;
  // Labels separated by dots; collect every end that closes a label.
  std::size_t label_start = pos;
  std::size_t labels = 0;
  while (label_start < s.size()) {
    std::size_t run = label_start;
    while (run < s.size() && (is_lower(s[run]) || is_digit(s[run]))) ++run;
    if (run == label_start) break;
    // A label may end anywhere inside the run when it is the last one.
    for (std::size_t e = run; e > label_start; --e) {
      const std::string_view lab = s.substr(label_start, e - label_start);
      if (!valid_label(lab)) continue;
      const bool ok = need_tld ? (labels >= 1 && is_tld(lab)) : true;
      if (ok) ends.push_back(e);
    }
    if (!valid_label(s.substr(label_start, run - label_start))) break;
    ++labels;
    if (run < s.size() && s[run] == '.') {
      label_start = run + 1;
    } else {
      break;
    }
  }
  std::sort(ends.begin(), ends.end(), std::greater<>());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  return ends;
}

std::vector<std::size_t> written_ends(const Slot& slot, std::string_view s, std::size_t pos) {
  std::vector<std::size_t> ends;
  std::size_t digit_end = pos;
  while (digit_end < s.size() && is_digit(s[digit_end])) ++digit_end;
  const std::size_t ndig = digit_end - pos;
  switch (slot.type) {
    case SlotType::kCardinal: {
      std::size_t e = pos;
      while (e < s.size() && (is_digit(s[e]) || s[e] == ',')) ++e;
      for (std::size_t k = e; k > pos; --k) {
        if (numbers::parse_written_cardinal(s.substr(pos, k - pos))) ends.push_back(k);
      }
      break;
    }
    case SlotType::kOrdinal:
    case SlotType::kDay: {
      if (ndig == 0 || digit_end + 2 > s.size()) break;
      auto v = parse_ordinal_written(s.substr(pos, ndig + 2));
      if (!v) break;
      if (slot.type == SlotType::kDay && (*v < 1 || *v > 31)) break;
      ends.push_back(digit_end + 2);
      break;
    }
    case SlotType::kMonth:
      for (auto m : kMonths) {
        if (s.substr(pos, m.size()) == m) ends.push_back(pos + m.size());
      }
      break;
    case SlotType::kYear:
      if (ndig >= 4) {
        const int y = std::stoi(std::string(s.substr(pos, 4)));
        if (y >= 1000 && y <= 2999) ends.push_back(pos + 4);
      }
      break;
    case SlotType::kDigits:
      if (ndig >= slot.width) ends.push_back(pos + slot.width);
      break;
    case SlotType::kDigitRun:
      for (std::size_t k = ndig; k >= 1; --k) ends.push_back(pos + k);
      break;
    case SlotType::kCents:
      if (ndig >= 2 && s.substr(pos, 2) != "00") ends.push_back(pos + 2);
      break;
    case SlotType::kScale:
      for (auto w : kScales) {
        if (s.substr(pos, w.size()) == w) ends.push_back(pos + w.size());
      }
      break;
    case SlotType::kLabel: {
      std::size_t e = pos;
      while (e < s.size() && (is_lower(s[e]) || is_digit(s[e]))) ++e;
      for (std::size_t k = e; k > pos; --k) {
        if (valid_label(s.substr(pos, k - pos))) ends.push_back(k);
      }
      break;
    }
    case SlotType::kDotted:
      ends = dotted_ends(s, pos, false);
      break;
    case SlotType::kDomain:
      ends = dotted_ends(s, pos, true);
      break;
  }
  return ends;
}

std::vector<std::string> verbalize(const Slot& slot, std::string_view v) {
  std::vector<std::string> out;
  switch (slot.type) {
    case SlotType::kCardinal:
      append_words(out, numbers::cardinal_words(*numbers::parse_written_cardinal(v)));
      break;
    case SlotType::kOrdinal:
    case SlotType::kDay:
      append_words(out, numbers::ordinal_words(*parse_ordinal_written(v)));
      break;
    case SlotType::kMonth:
      out.push_back(ascii_lower(v));
      break;
    case SlotType::kYear:
      append_words(out, numbers::year_words(std::stoi(std::string(v))));
      break;
    case SlotType::kDigits:
    case SlotType::kDigitRun:
      append_words(out, numbers::digit_words(v));
      break;
    case SlotType::kCents:
      append_words(out, numbers::cardinal_words(std::stoull(std::string(v))));
      break;
    case SlotType::kScale:
      out.emplace_back(v);
      break;
    case SlotType::kLabel:
      out = label_words(v);
      break;
    case SlotType::kDotted:
    case SlotType::kDomain:
      out = dotted_words(v);
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spoken side.

struct SlotParse {
  std::size_t consumed = 0;
  std::string written;
};

bool letter_token(std::string_view w) { return all_lower_alpha(w) && !reserved_run(w); }

// Labels alternate letter tokens and single digit words, starting with
// letters; returns (consumed, written) for every prefix, longest first.
std::vector<SlotParse> parse_label(std::span<const std::string> t, std::size_t pos) {
  std::vector<SlotParse> out;
  if (pos >= t.size() || !letter_token(t[pos])) return out;
  std::string acc = t[pos];
  out.push_back({1, acc});
  bool last_letters = true;
  for (std::size_t i = pos + 1; i < t.size(); ++i) {
    if (auto d = numbers::digit_value(t[i])) {
      acc.push_back(static_cast<char>('0' + *d));
      last_letters = false;
    } else if (!last_letters && letter_token(t[i])) {
      acc += t[i];
      last_letters = true;
    } else {
      break;
    }
    out.push_back({i - pos + 1, acc});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void parse_dotted_rec(std::span<const std::string> t, std::size_t pos, std::size_t start,
                      std::string acc, std::size_t labels, bool need_tld,
                      std::vector<SlotParse>& out) {
  for (const auto& lab : parse_label(t, pos)) {
    const std::string written = labels ? acc + "." + lab.written : lab.written;
    const std::size_t end = pos + lab.consumed;
    if (!need_tld || (labels >= 1 && is_tld(lab.written))) out.push_back({end - start, written});
    if (end < t.size() && t[end] == "dot") {
      parse_dotted_rec(t, end + 1, start, written, labels + 1, need_tld, out);
    }
  }
}

std::vector<SlotParse> parse_slot(const Slot& slot, std::span<const std::string> t,
                                  std::size_t pos) {
  std::vector<SlotParse> out;
  if (pos >= t.size()) return out;
  const auto rest = t.subspan(pos);
  switch (slot.type) {
    case SlotType::kCardinal:
      for (const auto& p : numbers::parse_cardinal(rest)) {
        out.push_back({p.consumed, numbers::format_cardinal(p.value)});
      }
      break;
    case SlotType::kOrdinal:
    case SlotType::kDay:
      for (const auto& p : numbers::parse_ordinal(rest)) {
        if (slot.type == SlotType::kDay && p.value > 31) continue;
        out.push_back({p.consumed, std::to_string(p.value) + std::string(numbers::ordinal_suffix(p.value))});
      }
      break;
    case SlotType::kMonth:
      for (auto m : kMonths) {
        if (ascii_lower(m) == rest[0]) out.push_back({1, std::string(m)});
      }
      break;
    case SlotType::kYear:
      for (const auto& p : numbers::parse_year(rest)) out.push_back({p.consumed, std::to_string(p.value)});
      break;
    case SlotType::kDigits:
      for (auto& p : numbers::parse_digit_chunks(rest, slot.width)) {
        out.push_back({p.consumed, std::move(p.digits)});
      }
      break;
    case SlotType::kDigitRun:
      for (auto& p : numbers::parse_digit_run(rest, 16)) out.push_back({p.consumed, std::move(p.digits)});
      break;
    case SlotType::kCents:
      for (const auto& p : numbers::parse_below_hundred(rest)) {
        std::string w = std::to_string(p.value);
        if (w.size() < 2) w.insert(w.begin(), '0');
        out.push_back({p.consumed, w});
      }
      break;
    case SlotType::kScale:
      if (std::find(kScales.begin(), kScales.end(), rest[0]) != kScales.end()) out.push_back({1, rest[0]});
      break;
    case SlotType::kLabel:
      out = parse_label(t, pos);
      break;
    case SlotType::kDotted:
    case SlotType::kDomain:
      parse_dotted_rec(t, pos, pos, "", 0, slot.type == SlotType::kDomain, out);
      std::stable_sort(out.begin(), out.end(),
                       [](const SlotParse& a, const SlotParse& b) { return a.consumed > b.consumed; });
      break;
  }
  return out;
}

using SlotCache = std::map<std::tuple<SlotType, std::size_t, std::size_t>, std::vector<SlotParse>>;

const std::vector<SlotParse>& cached_parse(SlotCache& cache, const Slot& slot,
                                           std::span<const std::string> t, std::size_t pos) {
  const auto key = std::make_tuple(slot.type, slot.width, pos);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, parse_slot(slot, t, pos)).first;
  return it->second;
}

std::string render_written(const GrammarRule& rule, const std::vector<std::string>& values) {
  std::string out;
  for (const auto& part : rule.written) {
    out += part.slot < 0 ? part.literal : values[static_cast<std::size_t>(part.slot)];
  }
  return out;
}

// Visits every spoken parse of `rule` from `pos`; `emit(end, values)`.
template <typename Emit>
void walk_spoken(const GrammarRule& rule, std::span<const std::string> t, std::size_t part,
                 std::size_t pos, std::vector<std::string>& values, SlotCache& cache, Emit& emit) {
  if (part == rule.spoken.size()) {
    emit(pos, values);
    return;
  }
  const PatternPart& p = rule.spoken[part];
  if (p.slot < 0) {
    if (pos < t.size() && t[pos] == p.literal) walk_spoken(rule, t, part + 1, pos + 1, values, cache, emit);
    return;
  }
  const auto& slot = rule.slots[static_cast<std::size_t>(p.slot)];
  for (const auto& alt : cached_parse(cache, slot, t, pos)) {
    values[static_cast<std::size_t>(p.slot)] = alt.written;
    walk_spoken(rule, t, part + 1, pos + alt.consumed, values, cache, emit);
  }
}

bool match_written_rec(const GrammarRule& rule, std::string_view s, std::size_t part, std::size_t pos,
                       std::vector<std::string>& values) {
  if (part == rule.written.size()) return pos == s.size();
  const PatternPart& p = rule.written[part];
  if (p.slot < 0) {
    if (s.substr(pos, p.literal.size()) != p.literal) return false;
    return match_written_rec(rule, s, part + 1, pos + p.literal.size(), values);
  }
  const auto& slot = rule.slots[static_cast<std::size_t>(p.slot)];
  for (std::size_t end : written_ends(slot, s, pos)) {
    values[static_cast<std::size_t>(p.slot)] = std::string(s.substr(pos, end - pos));
    if (match_written_rec(rule, s, part + 1, end, values)) return true;
  }
  return false;
}

std::optional<Slot> parse_slot_decl(std::string_view name, std::string_view type) {
  Slot slot;
  slot.name = std::string(name);
  static const std::map<std::string_view, SlotType> kTypes = {
      {"cardinal", SlotType::kCardinal}, {"ordinal", SlotType::kOrdinal},
      {"day", SlotType::kDay},           {"month", SlotType::kMonth},
      {"year", SlotType::kYear},         {"digits+", SlotType::kDigitRun},
      {"cents", SlotType::kCents},       {"scale", SlotType::kScale},
      {"label", SlotType::kLabel},       {"dotted", SlotType::kDotted},
      {"domain", SlotType::kDomain}};
  if (auto it = kTypes.find(type); it != kTypes.end()) {
    slot.type = it->second;
    return slot;
  }
  if (type.size() == 7 && type.substr(0, 6) == "digits" && type[6] >= '1' && type[6] <= '9') {
    slot.type = SlotType::kDigits;
    slot.width = static_cast<std::size_t>(type[6] - '0');
    return slot;
  }
  return std::nullopt;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

GrammarRule parse_rule(std::string_view line, std::size_t lineno, std::size_t index) {
  const std::size_t bar1 = line.find('|');
  const std::size_t bar2 = bar1 == std::string_view::npos ? bar1 : line.find('|', bar1 + 1);
  if (bar2 == std::string_view::npos) throw GrammarError(lineno, "expected 'CLASS PRIORITY | written | spoken'");
  GrammarRule rule;
  rule.index = index;
  const auto head = split_whitespace(line.substr(0, bar1));
  if (head.size() != 2) throw GrammarError(lineno, "rule head must be 'CLASS PRIORITY'");
  auto cls = entity_class_from_string(head[0]);
  if (!cls || *cls == EntityClass::kNone) throw GrammarError(lineno, "unknown entity class '" + head[0] + "'");
  rule.entity_class = *cls;
  try {
    std::size_t used = 0;
    rule.priority = std::stoi(head[1], &used);
    if (used != head[1].size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw GrammarError(lineno, "priority must be an integer");
  }
  const std::string_view written = trim(line.substr(bar1 + 1, bar2 - bar1 - 1));
  const std::string_view spoken = trim(line.substr(bar2 + 1));
  if (written.empty() || spoken.empty()) throw GrammarError(lineno, "empty pattern or template");
  rule.written_source = std::string(written);
  rule.spoken_source = std::string(spoken);

  std::string lit;
  for (std::size_t i = 0; i < written.size();) {
    if (written[i] == '}') throw GrammarError(lineno, "unbalanced '}' in written pattern");
    if (written[i] != '{') {
      lit.push_back(written[i++]);
      continue;
    }
    const std::size_t close = written.find('}', i);
    if (close == std::string_view::npos) throw GrammarError(lineno, "unterminated slot");
    const std::string_view decl = written.substr(i + 1, close - i - 1);
    const std::size_t colon = decl.find(':');
    if (colon == std::string_view::npos) throw GrammarError(lineno, "slot must be {name:type}");
    auto slot = parse_slot_decl(decl.substr(0, colon), decl.substr(colon + 1));
    if (!slot || slot->name.empty()) throw GrammarError(lineno, "bad slot '" + std::string(decl) + "'");
    for (const auto& s : rule.slots) {
      if (s.name == slot->name) throw GrammarError(lineno, "duplicate slot '" + slot->name + "'");
    }
    if (!lit.empty()) rule.written.push_back({std::move(lit), -1});
    lit.clear();
    if (!rule.written.empty() && rule.written.back().slot >= 0) {
      throw GrammarError(lineno, "adjacent slots need a literal separator");
    }
    rule.written.push_back({"", static_cast<int>(rule.slots.size())});
    rule.slots.push_back(std::move(*slot));
    i = close + 1;
  }
  if (!lit.empty()) rule.written.push_back({std::move(lit), -1});

  std::vector<int> uses(rule.slots.size(), 0);
  for (const auto& word : split_whitespace(spoken)) {
    if (word.front() == '{') {
      if (word.back() != '}') throw GrammarError(lineno, "bad slot reference '" + word + "'");
      const std::string name = word.substr(1, word.size() - 2);
      int found = -1;
      for (std::size_t k = 0; k < rule.slots.size(); ++k) {
        if (rule.slots[k].name == name) found = static_cast<int>(k);
      }
      if (found < 0) throw GrammarError(lineno, "template references unknown slot '" + name + "'");
      ++uses[static_cast<std::size_t>(found)];
      rule.spoken.push_back({"", found});
    } else {
      if (word.find_first_of("{}") != std::string::npos || ascii_lower(word) != word) {
        throw GrammarError(lineno, "template words must be lowercase literals: '" + word + "'");
      }
      rule.spoken.push_back({word, -1});
    }
  }
  for (std::size_t k = 0; k < uses.size(); ++k) {
    if (uses[k] != 1) throw GrammarError(lineno, "slot '" + rule.slots[k].name + "' must appear once in the template");
  }
  return rule;
}

// ---------------------------------------------------------------------------
// Generators.

std::uint64_t random_magnitude(Rng& rng, std::span<const double> weights) {
  double total = 0;
  for (double w : weights) total += w;
  double r = rng.uniform() * total;
  std::size_t digits = 1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (r < weights[i]) {
      digits = i + 1;
      break;
    }
    r -= weights[i];
    digits = i + 1;
  }
  if (digits == 1) return rng.below(10);
  std::uint64_t lo = 1;
  for (std::size_t i = 1; i < digits; ++i) lo *= 10;
  return lo + rng.below(lo * 9);
}

std::string random_digits(Rng& rng, std::size_t n) {
  std::string s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng.below(10)));
  return s;
}

std::string random_label(Rng& rng) {
  static constexpr std::string_view kConsonants = "bcdfghjklmnprstvwz";
  static constexpr std::string_view kVowels = "aeiou";
  while (true) {
    std::string s;
    const std::size_t len = 2 + rng.below(6);
    for (std::size_t i = 0; i < len; ++i) {
      const auto& set = (i % 2 == 0) ? kConsonants : kVowels;
      s.push_back(set[rng.below(set.size())]);
    }
    if (rng.chance(0.25)) s += random_digits(rng, 1 + rng.below(2));
    if (valid_label(s) && !is_tld(s)) return s;
  }
}

std::string generate_slot(const Slot& slot, Rng& rng) {
  static constexpr std::array<double, 9> kCardinalWeights = {0.14, 0.2, 0.2, 0.16, 0.1,
                                                             0.08, 0.05, 0.04, 0.03};
  static constexpr std::array<double, 6> kOrdinalWeights = {0.35, 0.35, 0.15, 0.08, 0.04, 0.03};
  switch (slot.type) {
    case SlotType::kCardinal:
      return numbers::format_cardinal(random_magnitude(rng, kCardinalWeights));
    case SlotType::kOrdinal: {
      const std::uint64_t v = std::max<std::uint64_t>(1, random_magnitude(rng, kOrdinalWeights));
      return std::to_string(v) + std::string(numbers::ordinal_suffix(v));
    }
    case SlotType::kDay: {
      const std::uint64_t v = 1 + rng.below(31);
      return std::to_string(v) + std::string(numbers::ordinal_suffix(v));
    }
    case SlotType::kMonth:
      return std::string(kMonths[rng.below(kMonths.size())]);
    case SlotType::kYear:
      return std::to_string(rng.chance(0.85) ? rng.range(1900, 2099) : rng.range(1000, 2999));
    case SlotType::kDigits:
      return random_digits(rng, slot.width);
    case SlotType::kDigitRun:
      return random_digits(rng, 1 + rng.below(3));
    case SlotType::kCents: {
      const std::uint64_t v = 1 + rng.below(99);
      return (v < 10 ? "0" : "") + std::to_string(v);
    }
    case SlotType::kScale:
      return std::string(kScales[rng.below(kScales.size())]);
    case SlotType::kLabel:
      return random_label(rng);
    case SlotType::kDotted:
    case SlotType::kDomain: {
      std::string s = random_label(rng);
      if (rng.chance(0.3)) s += "." + random_label(rng);
      if (slot.type == SlotType::kDomain) s += "." + std::string(kTlds[rng.below(kTlds.size())]);
      return s;
    }
  }
  return {};
}

}  // namespace

std::string_view to_string(EntityClass c) {
  switch (c) {
    case EntityClass::kNone:
      return "NONE";
    case EntityClass::kCardinal:
      return "CARDINAL";
    case EntityClass::kOrdinal:
      return "ORDINAL";
    case EntityClass::kDate:
      return "DATE";
    case EntityClass::kCurrency:
      return "CURRENCY";
    case EntityClass::kPhone:
      return "PHONE";
    case EntityClass::kEmail:
      return "EMAIL";
    case EntityClass::kUrl:
      return "URL";
    case EntityClass::kCreditCard:
      return "CREDIT_CARD";
    case EntityClass::kSsn:
      return "SSN";
    case EntityClass::kZip:
      return "ZIP";
    case EntityClass::kDecimal:
      return "DECIMAL";
  }
  return "NONE";
}

std::optional<EntityClass> entity_class_from_string(std::string_view s) {
  if (s == "NONE") return EntityClass::kNone;
  for (auto c : kClasses) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::span<const EntityClass> entity_classes() { return kClasses; }
std::span<const std::string_view> month_names() { return kMonths; }
std::span<const std::string_view> top_level_domains() { return kTlds; }

GrammarError::GrammarError(std::size_t line, const std::string& what)
    : std::runtime_error("grammar line " + std::to_string(line) + ": " + what), line_(line) {}

std::string_view Grammar::builtin_source() { return detail::kBuiltinGrammar; }

const Grammar& Grammar::builtin() {
  static const Grammar g = parse(builtin_source());
  return g;
}

Grammar Grammar::parse(std::string_view text) {
  Grammar g;
  std::size_t lineno = 0;
  bool header = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const std::string_view line = trim(raw);
    if (!header) {
      if (line.empty()) continue;
      if (line != "#!tfmt-grammar 1") throw GrammarError(lineno, "missing '#!tfmt-grammar 1' header");
      header = true;
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    g.rules_.push_back(parse_rule(line, lineno, g.rules_.size()));
  }
  if (!header) throw GrammarError(lineno, "missing '#!tfmt-grammar 1' header");
  if (g.rules_.empty()) throw GrammarError(lineno, "grammar has no rules");
  g.by_priority_.resize(g.rules_.size());
  for (std::size_t i = 0; i < g.rules_.size(); ++i) g.by_priority_[i] = i;
  std::stable_sort(g.by_priority_.begin(), g.by_priority_.end(), [&](std::size_t a, std::size_t b) {
    return g.rules_[a].priority > g.rules_[b].priority;
  });
  return g;
}

Grammar Grammar::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open grammar file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::optional<WrittenMatch> Grammar::match_written(std::string_view candidate) const {
  if (candidate.empty()) return std::nullopt;
  for (std::size_t idx : by_priority_) {
    const GrammarRule& rule = rules_[idx];
    if (auto spoken = expand(rule, candidate)) {
      return WrittenMatch{idx, rule.entity_class, std::move(*spoken)};
    }
  }
  return std::nullopt;
}

std::optional<std::vector<std::string>> Grammar::expand(const GrammarRule& rule,
                                                        std::string_view written) const {
  const PatternPart& first = rule.written.front();
  if (first.slot < 0 && written.substr(0, first.literal.size()) != first.literal) return std::nullopt;
  std::vector<std::string> values(rule.slots.size());
  if (!match_written_rec(rule, written, 0, 0, values)) return std::nullopt;
  std::vector<std::string> out;
  for (const auto& part : rule.spoken) {
    if (part.slot < 0) {
      out.push_back(part.literal);
    } else {
      const auto idx = static_cast<std::size_t>(part.slot);
      for (auto& w : verbalize(rule.slots[idx], values[idx])) out.push_back(std::move(w));
    }
  }
  return out;
}

std::optional<InverseMatch> Grammar::inverse_parse(std::span<const std::string> spoken) const {
  std::optional<InverseMatch> best;
  SlotCache cache;
  for (const GrammarRule& rule : rules_) {
    std::size_t rule_best = 0;
    std::string rule_written;
    std::vector<std::string> values(rule.slots.size());
    auto emit = [&](std::size_t end, const std::vector<std::string>& vals) {
      if (end > rule_best) {
        rule_best = end;
        rule_written = render_written(rule, vals);
      }
    };
    walk_spoken(rule, spoken, 0, 0, values, cache, emit);
    if (rule_best == 0) continue;
    const bool better = !best || rule_best > best->consumed ||
                        (rule_best == best->consumed && rule.priority > rules_[best->rule].priority);
    if (better) best = InverseMatch{std::move(rule_written), rule_best, rule.entity_class, rule.index};
  }
  return best;
}

std::vector<std::string> Grammar::inverse_parse_exact(const GrammarRule& rule,
                                                      std::span<const std::string> spoken) const {
  std::vector<std::string> out;
  SlotCache cache;
  std::vector<std::string> values(rule.slots.size());
  auto emit = [&](std::size_t end, const std::vector<std::string>& vals) {
    if (end == spoken.size()) out.push_back(render_written(rule, vals));
  };
  walk_spoken(rule, spoken, 0, 0, values, cache, emit);
  return out;
}

std::string Grammar::generate(const GrammarRule& rule, Rng& rng) const {
  std::vector<std::string> values(rule.slots.size());
  for (std::size_t i = 0; i < rule.slots.size(); ++i) values[i] = generate_slot(rule.slots[i], rng);
  return render_written(rule, values);
}

std::vector<const GrammarRule*> Grammar::rules_for(EntityClass c) const {
  std::vector<const GrammarRule*> out;
  for (const auto& r : rules_) {
    if (r.entity_class == c) out.push_back(&r);
  }
  return out;
}

}  // namespace tfmt
