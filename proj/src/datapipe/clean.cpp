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
#include <array>

#include "tfmt/datapipe.hpp"

namespace tfmt {
namespace {

bool is_mark(char c) { return c == '.' || c == ',' || c == '?' || c == '!' || c == ';' || c == ':'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_alpha(char c) { return is_upper(c) || is_lower(c); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

constexpr std::array<std::string_view, 5> kFillers = {"well", "umm", "mmm", "uh", "like"};

std::string_view strip_trailing_marks(std::string_view w) {
  while (!w.empty() && (w.back() == '.' || w.back() == ',' || w.back() == '?')) w.remove_suffix(1);
  return w;
}

bool ends_with_ellipsis(std::string_view w) { return w.size() >= 3 && w.substr(w.size() - 3) == "..."; }

// Word i starts a sentence: it is first, or the previous word ends with a
// sentence mark that is neither an ellipsis nor part of an abbreviation.
bool sentence_start(const std::vector<std::string>& words, std::size_t i) {
  if (i == 0) return true;
  std::string_view prev = words[i - 1];
  if (prev.empty()) return false;
  const char last = prev.back();
  if (last != '.' && last != '?' && last != '!') return false;
  if (ends_with_ellipsis(prev)) return false;
  if (last == '.' && is_abbreviation(prev)) return false;
  return true;
}

// Addresses, numbers and handles keep their casing.
bool case_protected(std::string_view w) {
  const std::string_view core = strip_trailing_marks(w);
  return std::any_of(core.begin(), core.end(), [](char c) { return is_digit(c) || c == '@' || c == '.'; });
}

std::vector<std::string> words_of(std::string_view s) { return split_whitespace(s); }

std::string lower_first(std::string w) {
  for (char& c : w) {
    if (is_alpha(c)) {
      if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
      break;
    }
  }
  return w;
}

bool is_capital_word(std::string_view core) {
  return !core.empty() && is_upper(core.front()) && classify_case(core) == CaseForm::kCapital;
}

bool is_emoji(char32_t c) {
  return (c >= 0x1F000 && c <= 0x1FAFF) || (c >= 0x2600 && c <= 0x27BF) || (c >= 0x2B00 && c <= 0x2BFF) ||
         (c >= 0xFE00 && c <= 0xFE0F) || c == 0x200D || (c >= 0xE0020 && c <= 0xE007F);
}

// "John:", "Speaker 2:", "INTERVIEWER:" at `pos`; returns the length
// including trailing spaces, or 0.
std::size_t speaker_label_at(std::string_view s, std::size_t pos) {
  std::size_t i = pos;
  for (int word = 0; word < 3; ++word) {
    const std::size_t begin = i;
    if (i >= s.size()) return 0;
    if (word == 0 && !is_upper(s[i])) return 0;
    while (i < s.size() && (is_alpha(s[i]) || is_digit(s[i]))) ++i;
    if (i == begin) return 0;
    if (i < s.size() && s[i] == ':') {
      ++i;
      if (i < s.size() && s[i] != ' ') return 0;
      while (i < s.size() && s[i] == ' ') ++i;
      return i - pos;
    }
    if (i >= s.size() || s[i] != ' ') return 0;
    ++i;
    if (i < s.size() && !is_upper(s[i]) && !is_digit(s[i])) return 0;
  }
  return 0;
}

}  // namespace

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::kPunctuationDensity:
      return "punctuation-density";
    case RejectReason::kMissingTerminal:
      return "missing-terminal";
    case RejectReason::kUppercaseDensity:
      return "uppercase-density";
    case RejectReason::kLength:
      return "length";
    case RejectReason::kSymbol:
      return "symbol";
  }
  return "unknown";
}

std::span<const std::string_view> filler_words() { return kFillers; }

FilterDecision coarse_filter(std::string_view text, const FilterConfig& cfg) {
  const std::size_t words = split_whitespace(text).size();
  if (words == 0) return {false, RejectReason::kLength};
  const auto marks = static_cast<std::size_t>(std::count_if(text.begin(), text.end(), is_mark));
  if (static_cast<double>(marks) > cfg.coarse_max_marks_per_word * static_cast<double>(words)) {
    return {false, RejectReason::kPunctuationDensity};
  }
  if (cfg.coarse_require_terminal) {
    std::string_view t = text;
    while (!t.empty() && (t.back() == ' ' || t.back() == '\n' || t.back() == '\r' || t.back() == '\t' ||
                          t.back() == '"' || t.back() == '\'' || t.back() == ')')) {
      t.remove_suffix(1);
    }
    if (t.empty() || (t.back() != '.' && t.back() != '?' && t.back() != '!')) {
      return {false, RejectReason::kMissingTerminal};
    }
  }
  const auto upper = static_cast<std::size_t>(std::count_if(text.begin(), text.end(), is_upper));
  const auto letters = static_cast<std::size_t>(std::count_if(text.begin(), text.end(), is_alpha));
  if (letters > 0 && static_cast<double>(upper) > cfg.coarse_max_upper_ratio * static_cast<double>(letters)) {
    return {false, RejectReason::kUppercaseDensity};
  }
  return {true, std::nullopt};
}

FilterDecision fine_filter(std::string_view text, const FilterConfig& cfg) {
  const auto toks = tokenize(text);
  if (toks.size() < cfg.min_words || toks.size() > cfg.max_words) return {false, RejectReason::kLength};
  const auto marks = static_cast<std::size_t>(
      std::count_if(toks.begin(), toks.end(), [](const Token& t) { return t.post_punct != Punct::kNone; }));
  if (static_cast<double>(marks) > cfg.max_marks_per_word * static_cast<double>(toks.size())) {
    return {false, RejectReason::kPunctuationDensity};
  }
  const auto upper = static_cast<std::size_t>(std::count_if(text.begin(), text.end(), is_upper));
  const auto letters = static_cast<std::size_t>(std::count_if(text.begin(), text.end(), is_alpha));
  if (letters == 0) return {false, RejectReason::kUppercaseDensity};
  const double ratio = static_cast<double>(upper) / static_cast<double>(letters);
  if (ratio < cfg.min_upper_ratio || ratio > cfg.max_upper_ratio) return {false, RejectReason::kUppercaseDensity};
  if (text.find_first_of(cfg.disallowed_symbols) != std::string_view::npos) return {false, RejectReason::kSymbol};
  return {true, std::nullopt};
}

void FilterStats::record(const FilterDecision& d) {
  ++in;
  if (d.keep) {
    ++out;
  } else {
    ++rejected[static_cast<std::size_t>(d.reason.value_or(RejectReason::kSymbol))];
  }
}

void FilterStats::merge(const FilterStats& other) {
  in += other.in;
  out += other.out;
  for (std::size_t i = 0; i < kNumRejectReasons; ++i) rejected[i] += other.rejected[i];
}

std::size_t FilterStats::total_rejected() const {
  std::size_t n = 0;
  for (auto r : rejected) n += r;
  return n;
}

namespace clean_rules {

std::string remove_brackets(std::string_view s) {
  std::vector<bool> drop(s.size(), false);
  std::vector<std::pair<std::size_t, char>> stack;
  auto closer_of = [](char open) { return open == '(' ? ')' : open == '[' ? ']' : '}'; };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(' || c == '[' || c == '{') {
      stack.emplace_back(i, c);
    } else if (c == ')' || c == ']' || c == '}') {
      if (!stack.empty() && closer_of(stack.back().second) == c) {
        for (std::size_t k = stack.back().first; k <= i; ++k) drop[k] = true;
        stack.pop_back();
      } else {
        drop[i] = true;
      }
    }
  }
  for (const auto& open : stack) drop[open.first] = true;
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!drop[i]) out.push_back(s[i]);
  }
  return out;
}

std::string remove_markup(std::string_view s) {
  std::string no_tags;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '<' && i + 1 < s.size() && (is_alpha(s[i + 1]) || s[i + 1] == '/' || s[i + 1] == '!')) {
      const std::size_t close = s.find('>', i);
      const std::size_t reopen = s.find('<', i + 1);
      if (close != std::string_view::npos && (reopen == std::string_view::npos || reopen > close)) {
        no_tags.push_back(' ');
        i = close;
        continue;
      }
    }
    if (s[i] == '&') {
      std::size_t j = i + 1;
      while (j < s.size() && j - i <= 8 && (is_alpha(s[j]) || s[j] == '#' || is_digit(s[j]))) ++j;
      if (j < s.size() && s[j] == ';' && j > i + 1) {
        no_tags.push_back(' ');
        i = j;
        continue;
      }
    }
    no_tags.push_back(s[i]);
  }
  std::u32string cps = utf8_decode(no_tags);
  cps.erase(std::remove_if(cps.begin(), cps.end(), is_emoji), cps.end());
  const std::string no_emoji = utf8_encode(cps);

  std::string out;
  std::size_t i = 0;
  bool at_boundary = true;
  while (i < no_emoji.size()) {
    if (at_boundary) {
      std::size_t j = i;
      while (j < no_emoji.size() && no_emoji[j] == ' ') ++j;
      if (const std::size_t len = speaker_label_at(no_emoji, j)) {
        i = j + len;
        continue;
      }
    }
    const char c = no_emoji[i];
    out.push_back(c);
    if (c == '.' || c == '?' || c == '!' || c == '\n') {
      at_boundary = true;
    } else if (c != ' ') {
      at_boundary = false;
    }
    ++i;
  }
  return out;
}

std::string remove_leading_punct(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\n' || is_mark(s.front()))) {
    s.remove_prefix(1);
  }
  return std::string(s);
}

std::string collapse_punct(std::string_view s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_mark(s[i])) {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && is_mark(s[j])) ++j;
    const std::string_view run = s.substr(i, j - i);
    const bool only_periods = run.find_first_not_of('.') == std::string_view::npos;
    if (only_periods && run.size() >= 3) {
      out += "...";
    } else if (run.find('?') != std::string_view::npos) {
      out.push_back('?');
    } else if (run.find_first_of(".!") != std::string_view::npos) {
      out.push_back('.');
    } else {
      out.push_back(run.front());
    }
    i = j;
  }
  return out;
}

// " ,x" becomes ", x"; a detached run before a space or the end is glued
// back. Runs holding '.' stay put when glued forward (".5", ".com").
std::string fix_spacing(std::string_view s) {
  const std::string norm = normalize_whitespace(s);
  std::string out;
  for (std::size_t i = 0; i < norm.size(); ++i) {
    if (norm[i] == ' ' && i + 1 < norm.size() && is_mark(norm[i + 1])) {
      std::size_t j = i + 1;
      while (j < norm.size() && is_mark(norm[j])) ++j;
      const std::string_view run(norm.data() + i + 1, j - i - 1);
      if (j == norm.size() || norm[j] == ' ') continue;
      if (run.find('.') == std::string_view::npos) {
        out += run;
        out.push_back(' ');
        i = j - 1;
        continue;
      }
    }
    out.push_back(norm[i]);
  }
  return out;
}

std::string capitalize_sentences(std::string_view s) {
  auto words = words_of(s);
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string& w = words[i];
    if (!sentence_start(words, i) || case_protected(w) || !is_lower(w.front())) continue;
    if (classify_case(w) != CaseForm::kLower) continue;
    w.front() = static_cast<char>(w.front() - 'a' + 'A');
  }
  return join(words);
}

std::string standardize_abbreviations(std::string_view s) {
  auto words = words_of(s);
  for (auto& w : words) {
    std::string_view core = w;
    std::size_t tail_start = core.size();
    while (tail_start > 0 && (core[tail_start - 1] == '.' || core[tail_start - 1] == ',' || core[tail_start - 1] == '?')) {
      --tail_start;
    }
    std::string tail(core.substr(tail_start));
    const std::string lower = ascii_lower(core.substr(0, tail_start));
    std::string canon;
    if (lower == "mr") canon = "Mr.";
    if (lower == "dr") canon = "Dr.";
    if (lower == "prof") canon = "Prof.";
    if (!canon.empty()) {
      if (!tail.empty() && tail.front() == '.') tail.erase(tail.begin());
      w = canon + tail;
    } else if (lower == "ok") {
      w = "OK" + tail;
    }
  }
  return join(words);
}

std::string lowercase_fillers(std::string_view s) {
  auto words = words_of(s);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string_view core = strip_trailing_marks(words[i]);
    const std::string lower = ascii_lower(core);
    if (std::find(kFillers.begin(), kFillers.end(), lower) == kFillers.end()) continue;
    if (!sentence_start(words, i) && is_capital_word(core)) words[i] = lower_first(words[i]);
  }
  return join(words);
}

std::string lowercase_after_ellipsis(std::string_view s) {
  auto words = words_of(s);
  for (std::size_t i = 1; i < words.size(); ++i) {
    if (!ends_with_ellipsis(words[i - 1])) continue;
    const std::string_view core = strip_trailing_marks(words[i]);
    const std::string lower = ascii_lower(core);
    if (lower == "i" || lower.rfind("i'", 0) == 0) continue;
    if (is_capital_word(core)) words[i] = lower_first(words[i]);
  }
  return join(words);
}

std::string lowercase_you(std::string_view s) {
  auto words = words_of(s);
  for (std::size_t i = 1; i < words.size(); ++i) {
    const std::string_view core = strip_trailing_marks(words[i]);
    if (core != "You" && core != "Your") continue;
    const char prev = words[i - 1].back();
    if (prev != '.' && prev != '?') words[i] = lower_first(words[i]);
  }
  return join(words);
}

std::string replace_symbols(std::string_view s) {
  static constexpr std::array<char32_t, 7> kDrop = {U'¿', U'¡', U'©', U'®',
                                                    U'¦', U'¬', U'™'};
  std::u32string cps = utf8_decode(s);
  std::u32string kept;
  for (char32_t c : cps) {
    if (std::find(kDrop.begin(), kDrop.end(), c) != kDrop.end()) continue;
    kept.push_back(c == U'_' ? U' ' : c);
  }
  // Ellipses: dropped mid-text, a period at the end.
  auto words = words_of(utf8_encode(kept));
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string& w = words[i];
    if (!ends_with_ellipsis(w)) continue;
    w.resize(w.size() - 3);
    if (i + 1 == words.size() && !w.empty()) w.push_back('.');
  }
  words.erase(std::remove(words.begin(), words.end(), std::string()), words.end());
  return join(words);
}

}  // namespace clean_rules

std::string clean(std::string_view text) {
  using namespace clean_rules;
  std::string cur(text);
  for (int pass = 0; pass < 8; ++pass) {
    std::string next = remove_brackets(cur);
    next = remove_markup(next);
    next = remove_leading_punct(next);
    next = collapse_punct(next);
    next = fix_spacing(next);
    next = capitalize_sentences(next);
    next = standardize_abbreviations(next);
    next = lowercase_fillers(next);
    next = lowercase_after_ellipsis(next);
    next = lowercase_you(next);
    next = replace_symbols(next);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

}  // namespace tfmt
