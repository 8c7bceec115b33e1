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

#include <gtest/gtest.h>

#include <functional>
#include <map>

#include "tfmt/rng.hpp"
#include "tfmt/text.hpp"

namespace tfmt {
namespace {

TEST(Tokenize, DetachesTrailingMarks) {
  const auto t = tokenize("hello, world.");
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0], Token("hello", Punct::kComma));
  EXPECT_EQ(t[1], Token("world", Punct::kPeriod));
  EXPECT_EQ(t[1].start, 7u);
  EXPECT_EQ(t[1].end, 12u);
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize("   ").empty());
}

TEST(Tokenize, GuardsKeepInternalAndAbbreviationDots) {
  auto t = tokenize("ai21.labs.com");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0], Token("ai21.labs.com"));
  t = tokenize("Mr. Smith paid $12.3 in the U.S. today?");
  ASSERT_EQ(t.size(), 8u);
  EXPECT_EQ(t[0], Token("Mr."));
  EXPECT_EQ(t[3], Token("$12.3"));
  EXPECT_EQ(t[6], Token("U.S."));
  EXPECT_EQ(t[7], Token("today", Punct::kQuestion));
  t = tokenize("?");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].text, "?");
}

TEST(Detokenize, Basics) {
  const std::vector<Token> toks = {Token("hello", Punct::kComma), Token("world", Punct::kPeriod)};
  EXPECT_EQ(detokenize(toks), "hello, world.");
  EXPECT_EQ(detokenize(std::vector<Token>{}), "");
}

TEST(Detokenize, RoundTripOnGeneratedSentences) {
  Rng rng(3);
  const std::vector<std::string> vocab = {"a", "the", "cat", "Sat", "on", "MAT", "x1", "don't"};
  const std::vector<std::string> marks = {"", "", "", ".", ",", "?"};
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    const std::size_t n = rng.below(12);
    for (std::size_t k = 0; k < n; ++k) {
      if (k) s += ' ';
      s += rng.pick(vocab) + rng.pick(marks);
    }
    EXPECT_EQ(detokenize(tokenize(s)), s);
  }
}

TEST(Case, ClassifyFixtures) {
  EXPECT_EQ(classify_case("McDonald's"), CaseForm::kMixed);
  EXPECT_EQ(classify_case("SSA"), CaseForm::kAcronym);
  EXPECT_EQ(classify_case("the"), CaseForm::kLower);
  EXPECT_EQ(classify_case("Sarah"), CaseForm::kCapital);
  EXPECT_EQ(classify_case("I"), CaseForm::kAcronym);
  EXPECT_EQ(classify_case("I'm"), CaseForm::kCapital);
  EXPECT_EQ(classify_case("JavaScript"), CaseForm::kMixed);
  EXPECT_EQ(classify_case("iPhone"), CaseForm::kMixed);
  EXPECT_EQ(classify_case("123"), CaseForm::kLower);
}

TEST(Case, ApplyFixtures) {
  EXPECT_EQ(apply_case("ceo", CaseForm::kAcronym), "CEO");
  EXPECT_EQ(apply_case("sarah", CaseForm::kCapital), "Sarah");
  EXPECT_EQ(apply_case("OK", CaseForm::kLower), "ok");
  EXPECT_EQ(apply_case("'tis", CaseForm::kCapital), "'Tis");
  EXPECT_THROW(apply_case("javascript", CaseForm::kMixed), ContractError);
  try {
    apply_case("javascript", CaseForm::kMixed);
  } catch (const ContractError& e) {
    EXPECT_NE(std::string(e.what()).find("converter"), std::string::npos);
  }
}

TEST(Case, ClassifyApplyConsistency) {
  Rng rng(5);
  for (int i = 0; i < 3000; ++i) {
    std::string w;
    // Two or more letters: a single letter in ACRONYM and CAPITAL form is
    // the same string.
    const std::size_t n = 2 + rng.below(9);
    for (std::size_t k = 0; k < n; ++k) w.push_back(static_cast<char>('a' + rng.below(26)));
    for (CaseForm f : {CaseForm::kLower, CaseForm::kCapital, CaseForm::kAcronym}) {
      EXPECT_EQ(classify_case(apply_case(ascii_lower(w), f)), f) << w;
    }
  }
}

// Enumerates every alignment path and returns the minimum cost together
// with the path whose reversed op sequence is lexicographically smallest.
struct OracleResult {
  long cost;
  std::vector<EditOp> ops;
};

OracleResult oracle_align(const std::vector<std::string>& r, const std::vector<std::string>& h) {
  OracleResult best{std::numeric_limits<long>::max(), {}};
  std::vector<EditOp> path;
  std::function<void(std::size_t, std::size_t, long)> rec = [&](std::size_t i, std::size_t j, long cost) {
    if (i == r.size() && j == h.size()) {
      std::vector<EditOp> rev(path.rbegin(), path.rend());
      std::vector<EditOp> best_rev(best.ops.rbegin(), best.ops.rend());
      if (cost < best.cost || (cost == best.cost && rev < best_rev)) best = {cost, path};
      return;
    }
    if (i < r.size() && j < h.size()) {
      const bool eq = r[i] == h[j];
      path.push_back(eq ? EditOp::kMatch : EditOp::kSub);
      rec(i + 1, j + 1, cost + (eq ? 0 : 1));
      path.pop_back();
    }
    if (i < r.size()) {
      path.push_back(EditOp::kDel);
      rec(i + 1, j, cost + 1);
      path.pop_back();
    }
    if (j < h.size()) {
      path.push_back(EditOp::kIns);
      rec(i, j + 1, cost + 1);
      path.pop_back();
    }
  };
  rec(0, 0, 0);
  return best;
}

std::vector<EditOp> ops_of(const Alignment& a) {
  std::vector<EditOp> out;
  for (const auto& p : a.ops) out.push_back(p.op);
  return out;
}

TEST(Align, SpecFixtures) {
  const std::vector<std::string> ab = {"a", "b"};
  auto a = align_words(ab, ab);
  EXPECT_EQ(a.cost, 0);
  EXPECT_EQ(ops_of(a), (std::vector<EditOp>{EditOp::kMatch, EditOp::kMatch}));

  const std::vector<std::string> abc = {"a", "b", "c"};
  const std::vector<std::string> ac = {"a", "c"};
  a = align_words(abc, ac);
  EXPECT_EQ(a.cost, 1);
  EXPECT_EQ(ops_of(a), (std::vector<EditOp>{EditOp::kMatch, EditOp::kDel, EditOp::kMatch}));
  EXPECT_EQ(a.ops[1].ref, 1u);
  EXPECT_FALSE(a.ops[1].hyp.has_value());

  const std::vector<std::string> none;
  const std::vector<std::string> x = {"x"};
  a = align_words(none, x);
  EXPECT_EQ(a.cost, 1);
  EXPECT_EQ(ops_of(a), (std::vector<EditOp>{EditOp::kIns}));
}

void enumerate_seqs(std::size_t max_len, std::size_t vocab, std::vector<std::vector<std::string>>& out) {
  std::vector<std::string> cur;
  std::function<void()> rec = [&]() {
    out.push_back(cur);
    if (cur.size() == max_len) return;
    for (std::size_t v = 0; v < vocab; ++v) {
      cur.push_back(std::string(1, static_cast<char>('a' + v)));
      rec();
      cur.pop_back();
    }
  };
  rec();
}

TEST(Align, ExhaustiveAgainstPathEnumeration) {
  std::vector<std::vector<std::string>> seqs;
  enumerate_seqs(4, 3, seqs);
  for (const auto& r : seqs) {
    for (const auto& h : seqs) {
      const auto a = align_words(r, h);
      const auto o = oracle_align(r, h);
      ASSERT_EQ(a.cost, o.cost);
      ASSERT_EQ(ops_of(a), o.ops);
      ASSERT_FALSE(validate_alignment(a, r.size(), h.size()).has_value());
    }
  }
}

TEST(Align, RandomUpToSixAgainstPathEnumeration) {
  Rng rng(9);
  for (int it = 0; it < 300; ++it) {
    std::vector<std::string> r(rng.below(7)), h(rng.below(7));
    for (auto& w : r) w = std::string(1, static_cast<char>('a' + rng.below(3)));
    for (auto& w : h) w = std::string(1, static_cast<char>('a' + rng.below(3)));
    const auto a = align_words(r, h);
    const auto o = oracle_align(r, h);
    ASSERT_EQ(a.cost, o.cost);
    ASSERT_EQ(ops_of(a), o.ops);
  }
}

TEST(Align, CustomSubstitutionCost) {
  const std::vector<std::string> r = {"a"};
  const std::vector<std::string> h = {"b"};
  const auto a = align_words(r, h, [](std::string_view, std::string_view) { return 5L; });
  EXPECT_EQ(a.cost, 2);
  // Backtrace from the end takes DEL before INS.
  EXPECT_EQ(ops_of(a), (std::vector<EditOp>{EditOp::kIns, EditOp::kDel}));
}

TEST(Align, ValidatorRejectsBrokenCoverage) {
  Alignment a;
  a.ops = {{EditOp::kMatch, 0, 0}, {EditOp::kMatch, 0, 1}};
  EXPECT_TRUE(validate_alignment(a, 1, 2).has_value());
}

TEST(EditDistance, AgainstRecursiveOracle) {
  Rng rng(21);
  std::function<std::size_t(const std::u32string&, const std::u32string&, std::size_t, std::size_t,
                            std::map<std::pair<std::size_t, std::size_t>, std::size_t>&)>
      rec = [&](const std::u32string& a, const std::u32string& b, std::size_t i, std::size_t j,
                std::map<std::pair<std::size_t, std::size_t>, std::size_t>& memo) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    auto key = std::make_pair(i, j);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const std::size_t v = std::min({rec(a, b, i + 1, j + 1, memo) + (a[i] == b[j] ? 0 : 1),
                                    rec(a, b, i + 1, j, memo) + 1, rec(a, b, i, j + 1, memo) + 1});
    memo[key] = v;
    return v;
  };
  for (int it = 0; it < 500; ++it) {
    std::u32string a(rng.below(12), U'a'), b(rng.below(12), U'a');
    for (auto& c : a) c = U'a' + static_cast<char32_t>(rng.below(4));
    for (auto& c : b) c = U'a' + static_cast<char32_t>(rng.below(4));
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
    EXPECT_EQ(edit_distance(a, b), rec(a, b, 0, 0, memo));
  }
}

TEST(Utf8, RoundTrip) {
  const std::string s = "caf\xC3\xA9 \xE2\x82\xAC";
  EXPECT_EQ(utf8_decode(s).size(), 6u);
  EXPECT_EQ(utf8_encode(utf8_decode(s)), s);
}

}  // namespace
}  // namespace tfmt
