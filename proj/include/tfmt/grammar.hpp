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

// Declarative entity rules compiled in both directions.
//
// Rule file format, one rule per line after the header `#!tfmt-grammar 1`:
//
//   CLASS PRIORITY | written pattern | spoken template
//
// The written pattern is literal text with typed slots `{name:type}`; the
// spoken template is space-separated literal words and slot references
// `{name}`. Every slot appears exactly once on each side. Blank lines and
// lines starting with '#' are ignored.
//
// Slot types:
//   cardinal  0..999,999,999 written canonically ("1234", "12,345")
//   ordinal   "21st"
//   day       ordinal in 1..31
//   month     "March"
//   year      1000..2999
//   digitsN   exactly N digits, spoken digit by digit (N in 1..9)
//   digits+   one or more digits, spoken digit by digit
//   cents     "01".."99", spoken as a cardinal
//   scale     thousand | million | billion
//   label     lowercase letters and digits, starting with a letter
//   dotted    label(.label)*
//   domain    label(.label)*.tld with tld from a fixed list

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tfmt/rng.hpp"

namespace tfmt {

enum class EntityClass : std::uint8_t {
  kNone = 0,
  kCardinal,
  kOrdinal,
  kDate,
  kCurrency,
  kPhone,
  kEmail,
  kUrl,
  kCreditCard,
  kSsn,
  kZip,
  kDecimal,
};

std::string_view to_string(EntityClass c);
std::optional<EntityClass> entity_class_from_string(std::string_view s);
// Every class except kNone, in enumerator order.
std::span<const EntityClass> entity_classes();

class GrammarError : public std::runtime_error {
 public:
  GrammarError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class SlotType : std::uint8_t {
  kCardinal,
  kOrdinal,
  kDay,
  kMonth,
  kYear,
  kDigits,
  kDigitRun,
  kCents,
  kScale,
  kLabel,
  kDotted,
  kDomain,
};

struct Slot {
  std::string name;
  SlotType type = SlotType::kCardinal;
  std::size_t width = 0;  // kDigits only
};

// Literal text when slot < 0, otherwise a slot index.
struct PatternPart {
  std::string literal;
  int slot = -1;
};

struct GrammarRule {
  EntityClass entity_class = EntityClass::kNone;
  int priority = 0;
  std::size_t index = 0;  // position in the rule file
  std::string written_source;
  std::string spoken_source;
  std::vector<Slot> slots;
  std::vector<PatternPart> written;  // literal characters and slots
  std::vector<PatternPart> spoken;   // literal words and slots
};

struct WrittenMatch {
  std::size_t rule = 0;
  EntityClass entity_class = EntityClass::kNone;
  std::vector<std::string> spoken;
};

struct InverseMatch {
  std::string written;
  std::size_t consumed = 0;
  EntityClass entity_class = EntityClass::kNone;
  std::size_t rule = 0;

  friend bool operator==(const InverseMatch&, const InverseMatch&) = default;
};

class Grammar {
 public:
  static const Grammar& builtin();
  static Grammar parse(std::string_view text);
  static Grammar load(const std::filesystem::path& path);
  static std::string_view builtin_source();

  std::span<const GrammarRule> rules() const { return rules_; }

  // Highest-priority rule whose written pattern matches all of `candidate`.
  std::optional<WrittenMatch> match_written(std::string_view candidate) const;
  // Spoken words for `written` under one specific rule.
  std::optional<std::vector<std::string>> expand(const GrammarRule& rule,
                                                 std::string_view written) const;
  // Longest spoken prefix any rule parses; ties go to higher priority, then
  // to the earlier rule. Input tokens are lowercase and punctuation-free.
  std::optional<InverseMatch> inverse_parse(std::span<const std::string> spoken) const;
  // Every full parse of `spoken` under `rule` consuming exactly all tokens.
  std::vector<std::string> inverse_parse_exact(const GrammarRule& rule,
                                               std::span<const std::string> spoken) const;

  // Random member of the rule's written domain.
  std::string generate(const GrammarRule& rule, Rng& rng) const;
  std::vector<const GrammarRule*> rules_for(EntityClass c) const;

 private:
  std::vector<GrammarRule> rules_;
  std::vector<std::size_t> by_priority_;
};

// Month names, capitalized, January first.
std::span<const std::string_view> month_names();
std::span<const std::string_view> top_level_domains();

}  // namespace tfmt
