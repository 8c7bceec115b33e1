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

// End-to-end orchestration: configuration, the two-stage formatter, ordered
// parallel streaming and the run manifest.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfmt/converter.hpp"
#include "tfmt/datapipe.hpp"
#include "tfmt/tagger.hpp"

namespace tfmt {

// Bad input data (exit code 2).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Missing, unreadable or invalid model (exit code 3).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed configuration (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  std::string grammar;            // empty: built-in grammar
  std::string tagger;             // checkpoint path
  std::string converter = "oracle";  // checkpoint path or "oracle"
  std::size_t context_radius = 1;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::size_t long_threshold = 1000;
  std::string manifest;           // empty: no manifest
  FilterConfig filters;
  TaggerConfig tagger_train;
  Seq2SeqConfig converter_model;
  PhaseConfig converter_train = [] {
    PhaseConfig p;
    p.steps = 4000;
    return p;
  }();
};

// "key = value" lines; lines starting with '#' are comments (values may
// contain '#'); unknown keys and unparsable
// values throw ConfigError naming the line.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::string& path);
// Applies one key; same errors as parse_config.
void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value);
// Every key in a fixed order; parsing the text back reproduces it.
std::string config_to_text(const PipelineConfig& cfg);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);
// Digest of a file's bytes; throws DataError when unreadable.
std::string file_digest(const std::string& path);

const Grammar& load_grammar(const PipelineConfig& cfg);

struct FormattedDocument {
  std::string text;
  std::vector<std::string> diagnostics;
};

class Formatter {
 public:
  Formatter(const Grammar& grammar, TaggerModel tagger, std::unique_ptr<ConverterBackend> converter,
            std::size_t context_radius);
  // Throws ModelError when a checkpoint cannot be loaded.
  static Formatter from_config(const PipelineConfig& cfg);

  // One spoken-form document to written form. Conversion failures degrade
  // to the identity core with a diagnostic.
  FormattedDocument format(std::string_view spoken) const;

  const TaggerModel& tagger() const { return tagger_; }
  const ConverterBackend& converter() const { return *converter_; }

 private:
  const Grammar& grammar_;
  TaggerModel tagger_;
  std::unique_ptr<ConverterBackend> converter_;
  std::size_t radius_;
};

struct StreamStats {
  std::size_t documents = 0;
  std::size_t diagnostics = 0;
};

// One output line per input line, in order, regardless of `workers`.
// Diagnostics go to `diag` prefixed with the 1-based line number.
StreamStats format_stream(const Formatter& formatter, std::istream& in, std::ostream& out, std::ostream& diag,
                          std::size_t workers, std::size_t chunk = 256);

struct ManifestEntry {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> checkpoints;  // path -> digest
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> outputs;
};

std::string manifest_to_json(const ManifestEntry& e);
ManifestEntry manifest_from_json(std::string_view line);
// Appends one JSON line; returns false (and leaves the run alone) when the
// file cannot be written.
bool append_manifest(const std::string& path, const ManifestEntry& e);
std::vector<ManifestEntry> read_manifest(const std::string& path);

}  // namespace tfmt
