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

// JSON Lines encoding of corpus records and filter statistics.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfmt/datapipe.hpp"

namespace tfmt {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string record_to_json(const CorpusRecord& rec);
// Throws FormatError on malformed JSON, unknown label names or missing fields.
CorpusRecord record_from_json(std::string_view line);

void write_records(std::ostream& out, const std::vector<CorpusRecord>& recs);
// Blank lines are skipped; errors carry the 1-based line number.
std::vector<CorpusRecord> read_records(std::istream& in);
std::vector<CorpusRecord> read_records_file(const std::string& path);

std::string stats_to_json(const FilterStats& coarse, const FilterStats& fine, std::size_t dropped_labels);

}  // namespace tfmt
