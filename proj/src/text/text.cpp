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

#include "tfmt/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>

namespace tfmt {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_alpha(char c) { return is_upper(c) || is_lower(c); }

constexpr std::array<std::string_view, 19> kAbbreviations = {
    "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "jr.", "sr.", "vs.", "etc.",
    "inc.", "ltd.", "co.", "corp.", "mt.", "ft.", "no.", "approx.", "dept."};

// "e.g.", "U.S.", "a.m.": single letters each followed by a period.
bool is_initialism(std::string_view w) {
  if (w.size() < 4 || w.size() % 2 != 0) return false;
  for (std::size_t i = 0; i < w.size(); i += 2) {
    if (!is_alpha(w[i]) || w[i + 1] != '.') return false;
  }
  return true;
}

}  // namespace

std::string_view to_string(Punct p) {
  switch (p) {
    case Punct::kPeriod:
      return "PERIOD";
    case Punct::kComma:
      return "COMMA";
    case Punct::kQuestion:
      return "QUESTION";
    case Punct::kNone:
      return "O";
  }
  return "O";
}

std::string_view to_string(CaseForm c) {
  switch (c) {
    case CaseForm::kCapital:
      return "CAPITAL";
    case CaseForm::kAcronym:
      return "ACRONYM";
    case CaseForm::kMixed:
      return "MIXED";
    case CaseForm::kLower:
      return "LOWER";
  }
  return "LOWER";
}

std::optional<Punct> punct_from_string(std::string_view s) {
  for (auto p : {Punct::kPeriod, Punct::kComma, Punct::kQuestion, Punct::kNone}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

std::optional<CaseForm> case_from_string(std::string_view s) {
  for (auto c : {CaseForm::kCapital, CaseForm::kAcronym, CaseForm::kMixed, CaseForm::kLower}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::string_view to_string(ItnLabel l) { return l == ItnLabel::kItn ? "ITN" : "O"; }

std::optional<ItnLabel> itn_from_string(std::string_view s) {
  if (s == "ITN") return ItnLabel::kItn;
  if (s == "O") return ItnLabel::kO;
  return std::nullopt;
}

char punct_char(Punct p) {
  switch (p) {
    case Punct::kPeriod:
      return '.';
    case Punct::kComma:
      return ',';
    case Punct::kQuestion:
      return '?';
    case Punct::kNone:
      return '\0';
  }
  return '\0';
}

std::optional<Punct> punct_from_char(char c) {
  switch (c) {
    case '.':
      return Punct::kPeriod;
    case ',':
      return Punct::kComma;
    case '?':
      return Punct::kQuestion;
    default:
      return std::nullopt;
  }
}

bool is_abbreviation(std::string_view word) {
  if (word.empty() || word.back() != '.') return false;
  if (is_initialism(word)) return true;
  const std::string lower = ascii_lower(word);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) != kAbbreviations.end();
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    if (i >= text.size()) break;
    const std::size_t begin = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    std::string_view word = text.substr(begin, i - begin);
    Token tok;
    tok.start = begin;
    if (word.size() > 1) {
      if (auto p = punct_from_char(word.back()); p && !(*p == Punct::kPeriod && is_abbreviation(word))) {
        tok.post_punct = *p;
        word.remove_suffix(1);
      }
    }
    tok.text = std::string(word);
    tok.end = begin + word.size();
    out.push_back(std::move(tok));
  }
  return out;
}

std::string detokenize(std::span<const Token> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i].text;
    if (tokens[i].post_punct != Punct::kNone) out.push_back(punct_char(tokens[i].post_punct));
  }
  return out;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (is_upper(c)) c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string ascii_upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (is_lower(c)) c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t b = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > b) out.emplace_back(s.substr(b, i - b));
  }
  return out;
}

std::string join(std::span<const std::string> parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string normalize_whitespace(std::string_view s) {
  const auto words = split_whitespace(s);
  return join(words);
}

std::u32string utf8_decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      len = 1;
      cp = b0;
    } else if ((b0 >> 5) == 0x6) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 >> 4) == 0xE) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 >> 3) == 0x1E) {
      len = 4;
      cp = b0 & 0x07;
    }
    bool ok = len > 0 && i + static_cast<std::size_t>(len) <= s.size();
    for (int k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b >> 6) != 0x2) {
        ok = false;
      } else {
        cp = (cp << 6) | (b & 0x3F);
      }
    }
    if (!ok) {
      out.push_back(U'�');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

std::string utf8_encode(std::u32string_view s) {
  std::string out;
  for (char32_t cp : s) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

CaseForm classify_case(std::string_view word) {
  bool any_upper = false;
  bool all_upper = true;
  bool first_seen = false;
  bool first_upper = false;
  bool rest_lower = true;
  for (char c : word) {
    if (!is_alpha(c)) continue;
    const bool up = is_upper(c);
    any_upper |= up;
    all_upper &= up;
    if (!first_seen) {
      first_seen = true;
      first_upper = up;
    } else if (up) {
      rest_lower = false;
    }
  }
  if (!any_upper) return CaseForm::kLower;
  // Single uppercase letters such as "I" count as acronyms.
  if (all_upper) return CaseForm::kAcronym;
  if (first_upper && rest_lower) return CaseForm::kCapital;
  return CaseForm::kMixed;
}

std::string apply_case(std::string_view word, CaseForm form) {
  switch (form) {
    case CaseForm::kLower:
      return ascii_lower(word);
    case CaseForm::kAcronym:
      return ascii_upper(word);
    case CaseForm::kCapital: {
      std::string out(word);
      for (char& c : out) {
        if (is_alpha(c)) {
          if (is_lower(c)) c = static_cast<char>(c - 'a' + 'A');
          break;
        }
      }
      return out;
    }
    case CaseForm::kMixed:
      break;
  }
  throw ContractError("apply_case: MIXED casing is produced by the span converter, not applied per token");
}

// ---------------------------------------------------------------------------

long unit_subst_cost(std::string_view, std::string_view) { return 1; }

Alignment align_words(std::span<const std::string> ref, std::span<const std::string> hyp,
                      const SubstCost& subst_cost) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t w = m + 1;
  std::vector<long> d((n + 1) * w);
  std::vector<long> diag_cost(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      diag_cost[i * m + j] = ref[i] == hyp[j] ? 0 : subst_cost(ref[i], hyp[j]);
    }
  }
  for (std::size_t j = 0; j <= m; ++j) d[j] = static_cast<long>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    d[i * w] = static_cast<long>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const long diag = d[(i - 1) * w + (j - 1)] + diag_cost[(i - 1) * m + (j - 1)];
      const long del = d[(i - 1) * w + j] + 1;
      const long ins = d[i * w + (j - 1)] + 1;
      d[i * w + j] = std::min({diag, del, ins});
    }
  }

  Alignment out;
  out.cost = d[n * w + m];
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const long here = d[i * w + j];
    if (i > 0 && j > 0 && here == d[(i - 1) * w + (j - 1)] + diag_cost[(i - 1) * m + (j - 1)]) {
      const bool same = ref[i - 1] == hyp[j - 1];
      out.ops.push_back({same ? EditOp::kMatch : EditOp::kSub, i - 1, j - 1});
      --i;
      --j;
    } else if (i > 0 && here == d[(i - 1) * w + j] + 1) {
      out.ops.push_back({EditOp::kDel, i - 1, std::nullopt});
      --i;
    } else {
      out.ops.push_back({EditOp::kIns, std::nullopt, j - 1});
      --j;
    }
  }
  std::reverse(out.ops.begin(), out.ops.end());
  return out;
}

std::size_t edit_distance(std::u32string_view ref, std::u32string_view hyp) {
  std::vector<std::size_t> prev(hyp.size() + 1);
  std::vector<std::size_t> cur(hyp.size() + 1);
  for (std::size_t j = 0; j <= hyp.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= hyp.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[hyp.size()];
}

std::optional<std::string> validate_alignment(const Alignment& a, std::size_t ref_len,
                                              std::size_t hyp_len) {
  std::size_t next_ref = 0;
  std::size_t next_hyp = 0;
  for (const auto& op : a.ops) {
    const bool want_ref = op.op != EditOp::kIns;
    const bool want_hyp = op.op != EditOp::kDel;
    if (want_ref != op.ref.has_value() || want_hyp != op.hyp.has_value()) {
      return "operation has the wrong index slots";
    }
    if (op.ref) {
      if (*op.ref != next_ref) return "reference indices out of order";
      ++next_ref;
    }
    if (op.hyp) {
      if (*op.hyp != next_hyp) return "hypothesis indices out of order";
      ++next_hyp;
    }
  }
  if (next_ref != ref_len) return "reference indices not fully covered";
  if (next_hyp != hyp_len) return "hypothesis indices not fully covered";
  return std::nullopt;
}

}  // namespace tfmt
