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

#include <array>
#include <stdexcept>

#include "tfmt/datapipe.hpp"

namespace tfmt {
namespace {

constexpr std::array<std::string_view, 18> kMixedLexicon = {
    "McDonald's", "JavaScript", "iPhone",  "iPad",      "YouTube", "PowerPoint",
    "eBay",       "LinkedIn",   "GitHub",  "PayPal",    "McAllister", "AICorp's",
    "FedEx",      "WordPress",  "MacBook", "PlayStation", "DeShawn", "McKenzie"};

constexpr std::array<std::string_view, 14> kNames = {"Sarah", "John",  "Maria",  "David", "Emily",
                                                     "Michael", "Priya", "Carlos", "Laura", "Kevin",
                                                     "Aisha", "Tom",   "Nina",   "Oscar"};
constexpr std::array<std::string_view, 10> kPlaces = {"Newark", "Boston", "Chicago", "Denver", "Seattle",
                                                      "Austin", "Dallas", "Phoenix", "Atlanta", "Portland"};
constexpr std::array<std::string_view, 10> kAcronyms = {"CEO", "NASA", "SSA", "FBI", "IBM",
                                                        "NBA", "CFO", "HR",  "IRS", "UN"};

// Plain sentences with {NAME}, {PLACE}, {ACRO}, {MIXED} and at most one {X}.
constexpr std::array<std::string_view, 24> kCorpusTemplates = {
    "{NAME} said the {ACRO} would visit {PLACE} next week.",
    "Did {NAME} already send the {MIXED} files to the team?",
    "After lunch, {NAME} and I reviewed the {ACRO} budget together.",
    "I think {MIXED} is popular in {PLACE}, but not everywhere.",
    "Why did the {ACRO} cancel the trip to {PLACE} this spring?",
    "{NAME} bought a new {MIXED} for her brother in {PLACE}.",
    "Well, the {ACRO} office in {PLACE} opened at nine this morning.",
    "Can you ask {NAME} whether the {MIXED} update is ready?",
    "The {ACRO} report from {PLACE} was longer than we expected.",
    "We met {NAME} at the {MIXED} store near the station.",
    "My manager asked {NAME} to call {X} before noon.",
    "{NAME} wrote down {X} on the back of the envelope.",
    "Honestly, I forgot that {X} was on the list.",
    "Is {X} the right one for the {ACRO} form?",
    "The note from {NAME} mentioned {X} twice.",
    "Last year in {PLACE}, the {ACRO} team used {MIXED} for everything.",
    "I told {NAME} about the {MIXED} problem, and she laughed.",
    "When will the {ACRO} finally answer our letter?",
    "The clerk in {PLACE} typed {X} into the system.",
    "According to {NAME}, {X} is still correct.",
    "Our friends in {PLACE} prefer {MIXED} over everything else.",
    "The {ACRO} asked {NAME} to confirm {X} by email.",
    "Sadly, the meeting with {NAME} ran late again.",
    "Who told the {ACRO} about the plan for {PLACE}?",
};

std::string replace_all(std::string s, std::string_view key, std::string_view value) {
  std::size_t pos = 0;
  while ((pos = s.find(key, pos)) != std::string::npos) {
    s.replace(pos, key.size(), value);
    pos += value.size();
  }
  return s;
}

std::string entity_value(const Grammar& grammar, EntityClass c, Rng& rng) {
  const auto rules = grammar.rules_for(c);
  if (rules.empty()) throw std::invalid_argument("grammar has no rules for " + std::string(to_string(c)));
  return grammar.generate(*rules[rng.below(rules.size())], rng);
}

}  // namespace

std::span<const std::string_view> mixed_case_lexicon() { return kMixedLexicon; }

const TemplateBank& default_template_bank() {
  static const TemplateBank bank = {
      {EntityClass::kCardinal,
       {"We counted {X} people at the event last night.",
        "The warehouse shipped {X} boxes before the holiday rush.",
        "About {X} students signed up for the new course this year.",
        "She has read {X} pages of the report so far."}},
      {EntityClass::kOrdinal,
       {"Our team finished in {X} place at the regional contest.",
        "This is the {X} time I have called about the same issue.",
        "He celebrated his {X} birthday with a small dinner."}},
      {EntityClass::kDate,
       {"The meeting was moved to {X} because of the storm.",
        "Her contract started on {X} and runs for a full year.",
        "We signed the lease on {X} after a long search."}},
      {EntityClass::kCurrency,
       {"The repair bill came to {X} after taxes and fees.",
        "They raised {X} for the local food bank.",
        "A single ticket now costs {X} at the front desk."}},
      {EntityClass::kPhone,
       {"Please call our support line at {X} for more help.",
        "You can reach the front office at {X} during business hours.",
        "Luckily, she called the real bank at {X} to report the scam."}},
      {EntityClass::kEmail,
       {"Send your resume to {X} before the end of the week.",
        "For questions, write to us at {X} and we will reply.",
        "The invoice came from {X} late on a quiet afternoon."}},
      {EntityClass::kUrl,
       {"You can find the full schedule at {X} next week.",
        "Check out our website at {X} for more details.",
        "The recipe was posted on {X} by a home cook."}},
      {EntityClass::kCreditCard,
       {"The confirmation email says {X} was charged for the order.",
        "He read the card number {X} over the phone to the agent.",
        "They even gave me a {X} card to cover the trip expenses."}},
      {EntityClass::kSsn,
       {"His social security number is {X} according to the old tax records.",
        "The form asked for the number {X} on the first page.",
        "She wrote {X} in the box for her social security number."}},
      {EntityClass::kZip,
       {"The package was sent to an address in zip code {X} last week.",
        "Our new office is located in the {X} area of the city.",
        "Enter {X} as the postal code on the shipping form."}},
      {EntityClass::kDecimal,
       {"The average rating rose to {X} points this quarter.",
        "The sensor measured {X} degrees during the afternoon test.",
        "Each sample weighed about {X} grams on the old scale."}},
  };
  return bank;
}

std::vector<std::string> synthesize(const Grammar& grammar, EntityClass entity_class, std::size_t count,
                                    const TemplateBank& bank, Rng& rng) {
  auto it = bank.find(entity_class);
  if (it == bank.end() || it->second.empty()) {
    std::string known;
    for (const auto& [c, templates] : bank) {
      if (templates.empty()) continue;
      if (!known.empty()) known += ", ";
      known += to_string(c);
    }
    throw std::invalid_argument("no templates for entity class " + std::string(to_string(entity_class)) +
                                "; known classes: " + known);
  }
  std::vector<std::string> out;
  out.reserve(count);
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 100 * (count + 1)) {
      throw std::runtime_error("synthesize: templates for " + std::string(to_string(entity_class)) +
                               " keep failing the fine filter");
    }
    std::string s = replace_all(rng.pick(it->second), "{X}", entity_value(grammar, entity_class, rng));
    if (fine_filter(s).keep) out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> synthesize_corpus(const Grammar& grammar, std::size_t count, Rng& rng) {
  std::vector<std::string> out;
  out.reserve(count);
  const auto& bank = default_template_bank();
  const auto classes = entity_classes();
  auto one_sentence = [&]() {
    std::string s;
    if (rng.chance(0.4)) {
      const EntityClass c = classes[rng.below(classes.size())];
      s = replace_all(rng.pick(bank.at(c)), "{X}", entity_value(grammar, c, rng));
    } else {
      s = std::string(kCorpusTemplates[rng.below(kCorpusTemplates.size())]);
      if (s.find("{X}") != std::string::npos) {
        s = replace_all(s, "{X}", entity_value(grammar, classes[rng.below(classes.size())], rng));
      }
    }
    s = replace_all(s, "{NAME}", kNames[rng.below(kNames.size())]);
    s = replace_all(s, "{PLACE}", kPlaces[rng.below(kPlaces.size())]);
    s = replace_all(s, "{ACRO}", kAcronyms[rng.below(kAcronyms.size())]);
    s = replace_all(s, "{MIXED}", kMixedLexicon[rng.below(kMixedLexicon.size())]);
    return s;
  };
  while (out.size() < count) {
    std::string doc = one_sentence();
    if (rng.chance(0.35)) doc += " " + one_sentence();
    out.push_back(std::move(doc));
  }
  return out;
}

}  // namespace tfmt
