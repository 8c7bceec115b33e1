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

// Corpus preparation: coarse filter, cleaning, fine filter, label
// derivation from normalizer provenance, and template-based synthesis.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tfmt/grammar.hpp"
#include "tfmt/normalizer.hpp"
#include "tfmt/text.hpp"

namespace tfmt {

enum class RejectReason : std::uint8_t {
  kPunctuationDensity = 0,
  kMissingTerminal,
  kUppercaseDensity,
  kLength,
  kSymbol,
};
inline constexpr std::size_t kNumRejectReasons = 5;

std::string_view to_string(RejectReason r);

struct FilterDecision {
  bool keep = true;
  std::optional<RejectReason> reason;
};

struct FilterConfig {
  // Coarse stage.
  double coarse_max_marks_per_word = 1.0;
  bool coarse_require_terminal = true;
  double coarse_max_upper_ratio = 0.6;
  // Fine stage.
  std::size_t min_words = 5;
  std::size_t max_words = 600;
  double max_marks_per_word = 1.0 / 3.0;
  double min_upper_ratio = 0.005;
  double max_upper_ratio = 0.30;
  std::string disallowed_symbols = "#&<>_;:!()[]{}*~^|\\=+`\"";
};

// Marks are '.', ',', '?', '!', ';', ':' characters.
FilterDecision coarse_filter(std::string_view text, const FilterConfig& cfg = {});
// Marks are the sentence marks tokenize() detaches; words are tokens.
FilterDecision fine_filter(std::string_view text, const FilterConfig& cfg = {});

// Rejection counters; in == out + sum(rejected) after every record().
struct FilterStats {
  std::size_t in = 0;
  std::size_t out = 0;
  std::array<std::size_t, kNumRejectReasons> rejected{};

  void record(const FilterDecision& d);
  void merge(const FilterStats& other);
  std::size_t total_rejected() const;
  bool conserved() const { return in == out + total_rejected(); }
};

// Individual cleaning rules, applied by clean() in this order.
namespace clean_rules {
std::string remove_brackets(std::string_view s);
std::string remove_markup(std::string_view s);  // emoji, HTML tags, speaker labels
std::string remove_leading_punct(std::string_view s);
std::string collapse_punct(std::string_view s);  // '!' -> '.', "..." kept as ellipsis
std::string fix_spacing(std::string_view s);
std::string capitalize_sentences(std::string_view s);
std::string standardize_abbreviations(std::string_view s);
std::string lowercase_fillers(std::string_view s);
std::string lowercase_after_ellipsis(std::string_view s);
std::string lowercase_you(std::string_view s);
std::string replace_symbols(std::string_view s);  // also resolves ellipses
}  // namespace clean_rules

// Filler words lowercased mid-sentence.
std::span<const std::string_view> filler_words();

// Applies the rule list repeatedly until the text stops changing, so
// clean(clean(s)) == clean(s).
std::string clean(std::string_view text);

struct CorpusRecord {
  std::string id;
  std::string written;
  std::vector<std::string> spoken;
  std::vector<TokenLabels> labels;
  std::vector<ProvenanceSpan> provenance;
};

struct LabelOutcome {
  std::optional<CorpusRecord> record;
  std::string drop_reason;
};

LabelOutcome derive_labels(const Grammar& grammar, std::string_view written, std::string id = {});

// Labels for an externally supplied spoken form: walks the written tokens,
// matching plain words by their normalized form and entities by an exact
// inverse parse of a spoken stretch.
LabelOutcome derive_labels_from_pair(const Grammar& grammar, std::string_view written,
                                     std::span<const std::string> spoken, std::string id = {});

// nullopt when the record satisfies every structural invariant.
std::optional<std::string> validate_record(const CorpusRecord& rec);

// Carrier sentences with one "{X}" placeholder per entity class.
using TemplateBank = std::map<EntityClass, std::vector<std::string>>;
const TemplateBank& default_template_bank();

// `count` sentences embedding written entities of the class; every output
// passes fine_filter. Throws std::invalid_argument for a class without
// templates, listing the classes that have them.
std::vector<std::string> synthesize(const Grammar& grammar, EntityClass entity_class, std::size_t count,
                                    const TemplateBank& bank, Rng& rng);

// Mixed sentences for tagger training: entities of every class, acronyms,
// mixed-case words, commas and questions.
std::vector<std::string> synthesize_corpus(const Grammar& grammar, std::size_t count, Rng& rng);

// Mixed-case words known to the oracle converter.
std::span<const std::string_view> mixed_case_lexicon();

// Spoken-form tokens from raw ASR text: lowercased, whitespace split, sentence
// marks dropped, hyphenated number words ("twenty-four") split.
std::vector<std::string> spoken_tokens(std::string_view text);

}  // namespace tfmt
