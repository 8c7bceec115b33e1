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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tfmt/pipeline.hpp"

namespace tfmt {
namespace {

const Grammar& g() { return Grammar::builtin(); }

// Tagger overfit on a small mixed corpus plus the given written sentences.
TaggerModel overfit_tagger(const std::vector<std::string>& extra) {
  Rng rng(5);
  std::vector<CorpusRecord> corpus;
  for (const auto& s : synthesize_corpus(g(), 150, rng)) corpus.push_back(*derive_labels(g(), s).record);
  for (const auto& s : extra) corpus.push_back(*derive_labels(g(), s).record);
  TaggerConfig cfg;
  cfg.steps = 2000;
  TaggerModel m = TaggerModel::create(Vocabulary::build(corpus), cfg);
  train_tagger(m, corpus, cfg);
  return m;
}

const std::vector<std::string>& sentences() {
  static const std::vector<std::string> s = {
      "On March 15th, 2024, CEO Sarah McAllister announced that AICorp's revenue reached $12.3 million.",
      "Please call 1-800-772-1213 before noon.",
      "Did you see the JavaScript talk?",
  };
  return s;
}

const TaggerModel& tagger() {
  static const TaggerModel m = overfit_tagger(sentences());
  return m;
}

Formatter oracle_formatter() { return Formatter(g(), tagger(), std::make_unique<OracleBackend>(g()), 1); }

std::string spoken_of(const std::string& written) { return join(derive_labels(g(), written).record->spoken); }

// ---------------------------------------------------------------------------
// Configuration

TEST(Config, ParsesKeysCommentsAndOverrides) {
  const auto cfg = parse_config(
      "# pipeline\n"
      "  # indented comment\n"
      "tagger = t.json\n"
      "converter=oracle\n"
      "\n"
      "context_radius = 2\n"
      "filter.coarse_require_terminal = false\n"
      "converter.learning_rate = 0.005\n");
  EXPECT_EQ(cfg.tagger, "t.json");
  EXPECT_EQ(cfg.context_radius, 2u);
  EXPECT_FALSE(cfg.filters.coarse_require_terminal);
  EXPECT_DOUBLE_EQ(cfg.converter_train.learning_rate, 0.005);
  EXPECT_EQ(parse_config("filter.disallowed_symbols = #&<\n").filters.disallowed_symbols, "#&<");
}

TEST(Config, TextRoundTrip) {
  PipelineConfig c;
  c.seed = 42;
  c.tagger_train.learning_rate = 0.3;
  c.filters.disallowed_symbols = "#&";
  const std::string text = config_to_text(c);
  EXPECT_EQ(config_to_text(parse_config(text)), text);
  EXPECT_EQ(config_to_text(parse_config("")), config_to_text(PipelineConfig{}));
}

TEST(Config, ErrorsNameTheLine) {
  try {
    parse_config("seed = 1\nbogus = 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
  EXPECT_THROW(parse_config("seed = x\n"), ConfigError);
  EXPECT_THROW(parse_config("context_radius = -1\n"), ConfigError);
  EXPECT_THROW(parse_config("just words\n"), ConfigError);
  EXPECT_THROW(parse_config("filter.coarse_require_terminal = maybe\n"), ConfigError);
  EXPECT_THROW(parse_config("workers = 0\n"), ConfigError);
}

TEST(Hash, Fnv1aKnownVectors) {
  EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
  EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
  EXPECT_EQ(hex64(fnv1a64("foobar")), "85944171f73967e8");
}

TEST(Formatter, MissingCheckpointIsModelError) {
  PipelineConfig cfg;
  EXPECT_THROW(Formatter::from_config(cfg), ModelError);
  cfg.tagger = "/nonexistent/tagger.json";
  EXPECT_THROW(Formatter::from_config(cfg), ModelError);
}

// ---------------------------------------------------------------------------
// Formatting

TEST(Formatter, IntroductionSentenceWithOracle) {
  const auto f = oracle_formatter();
  const std::string written = sentences()[0];
  const auto doc = f.format(spoken_of(written));
  EXPECT_EQ(doc.text, written);
  EXPECT_TRUE(doc.diagnostics.empty());
}

TEST(Formatter, EmptyLineGivesEmptyLine) {
  const auto f = oracle_formatter();
  EXPECT_EQ(f.format("").text, "");
  EXPECT_EQ(f.format("   ").text, "");
}

class ThrowingBackend final : public ConverterBackend {
 public:
  ConvertResult convert(const SpanText&) const override { throw std::runtime_error("boom"); }
  std::string name() const override { return "throwing"; }
};

TEST(Formatter, FailingConversionOnlyAffectsItsSpan) {
  const Formatter bad(g(), tagger(), std::make_unique<ThrowingBackend>(), 1);
  const Formatter good = oracle_formatter();
  const std::string spoken = spoken_of(sentences()[1]);
  const auto a = bad.format(spoken);
  ASSERT_FALSE(a.diagnostics.empty());
  EXPECT_NE(a.diagnostics[0].find("boom"), std::string::npos);
  // Identity fallback: same as formatting with the entity left spoken.
  const auto words = split_whitespace(a.text);
  const auto ref = split_whitespace(good.format(spoken).text);
  EXPECT_EQ(words.front(), ref.front());
  EXPECT_EQ(words.back(), ref.back());
  EXPECT_NE(a.text.find("one eight zero zero seven seven two one two one three"), std::string::npos) << a.text;
}

TEST(Stream, OrderAndDeterminismAcrossWorkerCounts) {
  const auto f = oracle_formatter();
  std::string input;
  Rng rng(8);
  const auto corpus = synthesize_corpus(g(), 60, rng);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    input += i % 7 == 3 ? std::string() : spoken_of(corpus[i]);
    input += '\n';
  }
  std::string first;
  for (std::size_t workers : {1, 2, 4}) {
    std::istringstream in(input);
    std::ostringstream out, diag;
    const auto stats = format_stream(f, in, out, diag, workers, 16);
    EXPECT_EQ(stats.documents, corpus.size());
    if (first.empty()) first = out.str();
    EXPECT_EQ(out.str(), first) << "workers " << workers;
  }
  // 1:1 line correspondence, blank lines preserved in place.
  std::istringstream lines(first);
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    if (n % 7 == 3) EXPECT_EQ(line, "");
    else EXPECT_FALSE(line.empty());
    ++n;
  }
  EXPECT_EQ(n, corpus.size());
}

// ---------------------------------------------------------------------------
// Manifest

TEST(Manifest, RoundTripAndUnwritablePath) {
  const auto dir = std::filesystem::temp_directory_path() / "tfmt_manifest_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "m.jsonl").string();
  std::filesystem::remove(path);
  ManifestEntry e;
  e.command = "format";
  e.config_hash = "fnv1a64:00";
  e.seed = 9;
  e.inputs["in.txt"] = "fnv1a64:11";
  e.outputs["out.txt"] = "fnv1a64:22";
  ASSERT_TRUE(append_manifest(path, e));
  e.seed = 10;
  ASSERT_TRUE(append_manifest(path, e));
  const auto back = read_manifest(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].seed, 9u);
  EXPECT_EQ(back[1].seed, 10u);
  EXPECT_EQ(back[1].outputs.at("out.txt"), "fnv1a64:22");
  EXPECT_FALSE(append_manifest((dir / "no" / "such" / "dir" / "m.jsonl").string(), e));
  std::filesystem::remove_all(dir);
}

TEST(Manifest, FileDigestTracksContent) {
  const auto path = (std::filesystem::temp_directory_path() / "tfmt_digest_test.txt").string();
  {
    std::ofstream(path) << "abc";
  }
  const auto a = file_digest(path);
  EXPECT_EQ(a, "fnv1a64:" + hex64(fnv1a64("abc")));
  {
    std::ofstream(path) << "abd";
  }
  EXPECT_NE(file_digest(path), a);
  std::filesystem::remove(path);
  EXPECT_THROW(file_digest(path), DataError);
}

}  // namespace
}  // namespace tfmt
