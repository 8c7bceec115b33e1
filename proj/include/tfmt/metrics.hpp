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

// Evaluation metrics over (reference, hypothesis) text pairs. Ratios are
// fractions; undefined denominators are reported through Tally::defined().

#include <array>
#include <chrono>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tfmt/grammar.hpp"
#include "tfmt/text.hpp"

namespace tfmt {

struct Tally {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t total = 0;  // denominator

  std::size_t errors() const { return substitutions + insertions + deletions; }
  bool defined() const { return total > 0; }
  // nullopt when total == 0.
  std::optional<double> ratio() const;
  Tally& operator+=(const Tally& o);
  friend bool operator==(const Tally&, const Tally&) = default;
};

// Punctuation error rate: words aligned case- and punctuation-insensitively,
// then the PERIOD/COMMA/QUESTION slot after each word compared. Denominator
// is the reference mark count.
Tally per(std::string_view ref, std::string_view hyp);

// Character edit distance after removing '.', ',', '?' and collapsing
// whitespace; case-sensitive. Denominator is the reference code point count.
Tally cer(std::string_view ref, std::string_view hyp);

// WER restricted to a subset of reference words. An insertion counts when
// the reference word on either side of it in the alignment is restricted.
Tally restricted_wer(std::span<const std::string> ref, const std::vector<bool>& restricted,
                     std::span<const std::string> hyp);

// Restricted set: reference words inside normalizer entity spans; words are
// lowercased with trailing sentence marks removed.
Tally i_wer(std::string_view ref_formatted, std::string_view hyp, const Grammar& grammar);

// Restricted set: reference words whose case form is MIXED; comparison is
// case-sensitive.
Tally m_wer(std::string_view ref_formatted, std::string_view hyp);

struct ClassScore {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  // False when the class occurs in neither sequence.
  bool applicable() const { return tp + fp + fn > 0; }
  double precision() const;
  double recall() const;
  // 2PR/(P+R), 0 when P+R == 0.
  double f1() const;
  ClassScore& operator+=(const ClassScore& o);
  friend bool operator==(const ClassScore&, const ClassScore&) = default;
};

struct F1Report {
  std::array<ClassScore, kNumPunct> punct{};
  std::array<ClassScore, kNumCase> casing{};
  std::array<ClassScore, kNumItn> itn{};
  F1Report& operator+=(const F1Report& o);
};

// Throws std::invalid_argument on a length mismatch.
F1Report class_f1(std::span<const TokenLabels> ref, std::span<const TokenLabels> hyp);

struct MetricReport {
  Tally per;
  Tally cer;
  Tally i_wer;
  Tally m_wer;
  F1Report f1;
  bool has_f1 = false;
  std::size_t documents = 0;

  void add_pair(std::string_view ref, std::string_view hyp, const Grammar& grammar);
  std::string to_json() const;
  // Columns PER, CER, M-WER, I-WER in percent; "n/a" for undefined ratios.
  std::string summary_table() const;
};

struct TimingBucket {
  std::string name;
  std::size_t documents = 0;
  std::size_t words = 0;
  double total_seconds = 0.0;
  double mean_seconds() const { return documents ? total_seconds / static_cast<double>(documents) : 0.0; }
};

// Wall-clock seconds per document of `run`, bucketed by word count: "short"
// below `long_threshold` words, "long" otherwise. Buckets without documents
// are omitted.
std::vector<TimingBucket> time_documents(std::span<const std::string> docs,
                                         const std::function<void(const std::string&)>& run,
                                         std::size_t long_threshold = 1000);

}  // namespace tfmt
