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

// Brute-force references shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tfmt/metrics.hpp"
#include "tfmt/rng.hpp"
#include "tfmt/text.hpp"

namespace tfmt::oracle {

enum class Move { kDiag, kDel, kIns };
using Op = std::pair<Move, std::pair<int, int>>;

// Memoized edit distance plus greedy backtrace that takes the first optimal
// move in the order diagonal, deletion, insertion from the end.
inline std::vector<Op> alignment(const std::vector<std::string>& r, const std::vector<std::string>& h) {
  std::map<std::pair<int, int>, int> memo;
  std::function<int(int, int)> d = [&](int i, int j) -> int {
    if (i == 0) return j;
    if (j == 0) return i;
    auto it = memo.find({i, j});
    if (it != memo.end()) return it->second;
    const int v = std::min({d(i - 1, j - 1) + (r[i - 1] == h[j - 1] ? 0 : 1), d(i - 1, j) + 1, d(i, j - 1) + 1});
    memo[{i, j}] = v;
    return v;
  };
  std::vector<Op> rev;
  int i = static_cast<int>(r.size());
  int j = static_cast<int>(h.size());
  while (i > 0 || j > 0) {
    const int here = d(i, j);
    if (i > 0 && j > 0 && d(i - 1, j - 1) + (r[i - 1] == h[j - 1] ? 0 : 1) == here) {
      rev.push_back({Move::kDiag, {i - 1, j - 1}});
      --i;
      --j;
    } else if (i > 0 && d(i - 1, j) + 1 == here) {
      rev.push_back({Move::kDel, {i - 1, -1}});
      --i;
    } else {
      rev.push_back({Move::kIns, {-1, j - 1}});
      --j;
    }
  }
  return {rev.rbegin(), rev.rend()};
}

// An insertion counts when the nearest aligned reference word on either side
// is restricted.
inline std::size_t restricted_errors(const std::vector<std::string>& r, const std::vector<bool>& mask,
                                     const std::vector<std::string>& h) {
  const auto ops = alignment(r, h);
  std::size_t errors = 0;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const auto [mv, idx] = ops[k];
    if (mv == Move::kDiag) {
      errors += mask[idx.first] && r[idx.first] != h[idx.second];
    } else if (mv == Move::kDel) {
      errors += mask[idx.first];
    } else {
      bool adjacent = false;
      for (std::size_t a = k; a-- > 0;) {
        if (ops[a].first != Move::kIns) {
          adjacent = adjacent || mask[ops[a].second.first];
          break;
        }
      }
      for (std::size_t b = k + 1; b < ops.size(); ++b) {
        if (ops[b].first != Move::kIns) {
          adjacent = adjacent || mask[ops[b].second.first];
          break;
        }
      }
      errors += adjacent;
    }
  }
  return errors;
}

// Words are a key letter optionally followed by one mark; the oracle aligns
// on keys and compares mark slots.
inline std::size_t per_errors(const std::vector<std::string>& r, const std::vector<std::string>& h) {
  auto key = [](const std::string& w) { return std::string(1, w[0]); };
  auto mark = [](const std::string& w) { return w.size() > 1 ? w[1] : ' '; };
  std::vector<std::string> rk;
  std::vector<std::string> hk;
  for (const auto& w : r) rk.push_back(key(w));
  for (const auto& w : h) hk.push_back(key(w));
  std::size_t errors = 0;
  for (const auto& [mv, idx] : alignment(rk, hk)) {
    const char rm = idx.first >= 0 ? mark(r[idx.first]) : ' ';
    const char hm = idx.second >= 0 ? mark(h[idx.second]) : ' ';
    errors += rm != hm;
  }
  return errors;
}

inline std::size_t per_marks(const std::vector<std::string>& r) {
  return static_cast<std::size_t>(std::count_if(r.begin(), r.end(), [](const std::string& w) { return w.size() > 1; }));
}

inline std::size_t char_distance(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
    }
  }
  return d[a.size()][b.size()];
}

// Marks removed, whitespace collapsed, decoded to code points.
inline std::u32string cer_view(const std::string& s) {
  std::string kept;
  for (char c : s) {
    if (c != '.' && c != ',' && c != '?') kept += c;
  }
  return utf8_decode(normalize_whitespace(kept));
}

inline std::string random_cer_text(Rng& rng, std::size_t max_len) {
  static const std::string alphabet = "abAB .,?";
  std::string s;
  const std::size_t len = rng.below(max_len + 1);
  for (std::size_t k = 0; k < len; ++k) {
    const std::size_t c = rng.below(alphabet.size() + 1);
    if (c == alphabet.size()) {
      s += "\xC3\xA9";
    } else {
      s += alphabet[c];
    }
  }
  return s;
}

inline ClassScore count_class(const std::vector<std::size_t>& r, const std::vector<std::size_t>& h, std::size_t c) {
  ClassScore s;
  for (std::size_t i = 0; i < r.size(); ++i) {
    s.tp += r[i] == c && h[i] == c;
    s.fp += r[i] != c && h[i] == c;
    s.fn += r[i] == c && h[i] != c;
  }
  return s;
}

// Recounts every class of every head independently; true when `rep` matches.
inline bool f1_matches(const std::vector<TokenLabels>& r, const std::vector<TokenLabels>& h, const F1Report& rep) {
  auto column = [](const std::vector<TokenLabels>& v, int head) {
    std::vector<std::size_t> out;
    for (const auto& l : v) {
      out.push_back(head == 0   ? static_cast<std::size_t>(l.punct)
                    : head == 1 ? static_cast<std::size_t>(l.casing)
                                : static_cast<std::size_t>(l.itn));
    }
    return out;
  };
  auto f1 = [](const ClassScore& s) {
    const double p = s.tp + s.fp ? double(s.tp) / double(s.tp + s.fp) : 0.0;
    const double rc = s.tp + s.fn ? double(s.tp) / double(s.tp + s.fn) : 0.0;
    return p + rc > 0 ? 2 * p * rc / (p + rc) : 0.0;
  };
  auto check = [&](const auto& scores, int head) {
    for (std::size_t c = 0; c < scores.size(); ++c) {
      const ClassScore want = count_class(column(r, head), column(h, head), c);
      if (!(scores[c] == want) || scores[c].f1() != f1(want)) return false;
    }
    return true;
  };
  return check(rep.punct, 0) && check(rep.casing, 1) && check(rep.itn, 2);
}

inline TokenLabels random_labels(Rng& rng) {
  return {static_cast<Punct>(rng.below(kNumPunct)), static_cast<CaseForm>(rng.below(kNumCase)),
          static_cast<ItnLabel>(rng.below(kNumItn))};
}

inline std::vector<std::vector<std::string>> all_sequences(const std::vector<std::string>& vocab, std::size_t max_len) {
  std::vector<std::vector<std::string>> out = {{}};
  std::vector<std::vector<std::string>> frontier = {{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto& s : frontier) {
      for (const auto& w : vocab) {
        auto t = s;
        t.push_back(w);
        next.push_back(t);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

inline std::vector<std::string> random_sequence(const std::vector<std::string>& vocab, std::size_t min_len,
                                                std::size_t max_len, Rng& rng) {
  std::vector<std::string> s(rng.range(min_len, max_len));
  for (auto& w : s) w = rng.pick(vocab);
  return s;
}

// Noisy transcript-like text for cleaning and filter properties.
inline std::string random_messy(Rng& rng) {
  static const std::vector<std::string> pieces = {
      "hello", "world", "mr", "dr", "ok", "well", "Umm", "you", "Your", "I", "it's", "(aside)", "[note]",
      "{x}", "<i>", "</i>", "&amp;", "SPEAKER:", "!!", "?!", "...", "..", ",", ".", "?", "!", ";",
      "\xC2\xBF", "\xC2\xA1", "\xC2\xA9", "\xC2\xAE", "_", "snake_case", "\xF0\x9F\x98\x80", "  ",
      "John", "NASA", "iPhone", "42", "3.5", "$12", "a@b.com", "(", ")", "Well", "Like", "prof"};
  std::string s;
  const std::size_t n = rng.range(0, 14);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.chance(0.7)) s += ' ';
    s += rng.pick(pieces);
  }
  return s;
}

}  // namespace tfmt::oracle
