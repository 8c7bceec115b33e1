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

// tfmt: command-line entry point for corpus preparation, training of both
// stages, formatting and evaluation.
//
// Exit codes: 0 success, 1 usage or configuration, 2 data, 3 model.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "tfmt/converter.hpp"
#include "tfmt/datapipe.hpp"
#include "tfmt/metrics.hpp"
#include "tfmt/pipeline.hpp"
#include "tfmt/records_io.hpp"
#include "tfmt/tagger.hpp"

namespace {

using namespace tfmt;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitModel = 3;

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string manifest;
};

PipelineConfig resolve_config(const Common& c) {
  PipelineConfig cfg = c.config_path.empty() ? PipelineConfig{} : load_config(c.config_path);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!c.manifest.empty()) cfg.manifest = c.manifest;
  return cfg;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

class Manifest {
 public:
  Manifest(const PipelineConfig& cfg, std::string command) : cfg_(cfg) {
    e_.command = std::move(command);
    e_.config_hash = "fnv1a64:" + hex64(fnv1a64(config_to_text(cfg)));
    e_.seed = cfg.seed;
  }
  void input(const std::string& p) { e_.inputs[p] = file_digest(p); }
  void output(const std::string& p) { e_.outputs[p] = file_digest(p); }
  void checkpoint(const std::string& p) {
    if (p != "oracle") e_.checkpoints[p] = file_digest(p);
  }
  void commit() const {
    if (cfg_.manifest.empty()) return;
    if (!append_manifest(cfg_.manifest, e_))
      std::cerr << "warning: cannot append to manifest " << cfg_.manifest << '\n';
  }

 private:
  const PipelineConfig& cfg_;
  ManifestEntry e_;
};

// ---------------------------------------------------------------------------

int run_prep(const PipelineConfig& cfg, const std::string& in_path, const std::string& out_path,
             const std::string& stats_path) {
  const Grammar& grammar = load_grammar(cfg);
  const auto lines = read_lines(in_path);
  FilterStats coarse, fine;
  std::size_t dropped = 0;
  std::vector<CorpusRecord> records;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto c = coarse_filter(lines[i], cfg.filters);
    coarse.record(c);
    if (!c.keep) continue;
    const std::string cleaned = clean(lines[i]);
    const auto f = fine_filter(cleaned, cfg.filters);
    fine.record(f);
    if (!f.keep) continue;
    auto outcome = derive_labels(grammar, cleaned, "line-" + std::to_string(i + 1));
    if (!outcome.record) {
      ++dropped;
      continue;
    }
    records.push_back(std::move(*outcome.record));
  }
  {
    auto out = open_out(out_path);
    write_records(out, records);
  }
  const std::string stats = stats_to_json(coarse, fine, dropped);
  if (!stats_path.empty()) {
    auto s = open_out(stats_path);
    s << stats << '\n';
  }
  std::cerr << "prep: " << lines.size() << " lines in, " << records.size() << " records out\n" << stats << '\n';
  Manifest m(cfg, "prep");
  m.input(in_path);
  m.output(out_path);
  m.commit();
  return 0;
}

int run_synthesize(const PipelineConfig& cfg, const std::string& kind, const std::vector<std::string>& class_names,
                   std::size_t count, const std::string& out_path) {
  const Grammar& grammar = load_grammar(cfg);
  Rng rng(cfg.seed);
  std::vector<EntityClass> classes;
  for (const auto& n : class_names) {
    const auto c = entity_class_from_string(n);
    if (!c) throw ConfigError("unknown entity class '" + n + "'");
    classes.push_back(*c);
  }
  if (classes.empty())
    for (const auto& [c, templates] : default_template_bank()) classes.push_back(c);
  auto out = open_out(out_path);
  if (kind == "sentences") {
    for (EntityClass c : classes)
      for (const auto& s : synthesize(grammar, c, count, default_template_bank(), rng)) out << s << '\n';
  } else if (kind == "corpus") {
    for (const auto& s : synthesize_corpus(grammar, count, rng)) out << s << '\n';
  } else if (kind == "records") {
    std::vector<CorpusRecord> recs;
    for (const auto& s : synthesize_corpus(grammar, count, rng))
      if (auto o = derive_labels(grammar, s, "synth-" + std::to_string(recs.size())); o.record)
        recs.push_back(std::move(*o.record));
    write_records(out, recs);
  } else if (kind == "entity-pairs") {
    write_pairs(out, make_entity_pairs(grammar, classes, count, cfg.context_radius, rng));
  } else if (kind == "generic-pairs") {
    write_pairs(out, make_generic_pairs(grammar, count, cfg.context_radius, rng));
  } else {
    throw ConfigError("unknown --kind '" + kind + "'");
  }
  out.close();
  Manifest m(cfg, "synthesize " + kind);
  m.output(out_path);
  m.commit();
  return 0;
}

int run_train_tagger(const PipelineConfig& cfg, const std::string& corpus_path, const std::string& out_path) {
  std::vector<CorpusRecord> corpus;
  try {
    corpus = read_records_file(corpus_path);
  } catch (const FormatError& e) {
    throw DataError(e.what());
  }
  if (corpus.empty()) throw DataError("training corpus " + corpus_path + " is empty");
  TaggerModel model = TaggerModel::create(Vocabulary::build(corpus), cfg.tagger_train);
  const auto result = train_tagger(model, corpus, cfg.tagger_train, [](std::size_t step, double loss) {
    if ((step + 1) % 500 == 0) std::cerr << "step " << step + 1 << " loss " << loss << '\n';
  });
  save_tagger(model, out_path);
  const HeadAccuracy acc = evaluate_accuracy(model, corpus);
  std::cerr << "train-tagger: final loss " << result.losses.back() << ", training accuracy punct "
            << acc.accuracy(Head::kPunct) << " case " << acc.accuracy(Head::kCase) << " itn "
            << acc.accuracy(Head::kItn) << '\n';
  Manifest m(cfg, "train-tagger");
  m.input(corpus_path);
  m.output(out_path);
  m.commit();
  return 0;
}

int run_train_converter(const PipelineConfig& cfg, const std::string& pairs_path, const std::string& phase,
                        const std::string& init_path, const std::string& out_path) {
  if (phase != "generic" && phase != "itn") throw ConfigError("--phase must be generic or itn");
  std::vector<ConverterPair> pairs;
  {
    std::ifstream in(pairs_path, std::ios::binary);
    if (!in) throw DataError("cannot open " + pairs_path);
    try {
      pairs = read_pairs(in);
    } catch (const std::runtime_error& e) {
      throw DataError(e.what());
    }
  }
  if (pairs.empty()) throw DataError("pairs file " + pairs_path + " is empty");
  Seq2Seq<float> model;
  if (!init_path.empty()) {
    try {
      model = load_converter(init_path);
    } catch (const std::exception& e) {
      throw ModelError(std::string("converter: ") + e.what());
    }
  } else {
    model = Seq2Seq<float>::create(cfg.converter_model, CharVocab::standard().size());
  }
  const auto losses = train_phase(model, pairs, cfg.converter_train, [](std::size_t step, double loss) {
    if ((step + 1) % 500 == 0) std::cerr << "step " << step + 1 << " loss " << loss << '\n';
  });
  save_converter(model, out_path);
  if (!losses.empty()) std::cerr << "train-converter (" << phase << "): final loss " << losses.back() << '\n';
  Manifest m(cfg, "train-converter " + phase);
  m.input(pairs_path);
  if (!init_path.empty()) m.checkpoint(init_path);
  m.output(out_path);
  m.commit();
  return 0;
}

int run_format(const PipelineConfig& cfg, const std::string& in_path, const std::string& out_path,
               const std::string& diag_path) {
  const Formatter formatter = Formatter::from_config(cfg);
  std::ifstream in_file;
  std::istream* in = &std::cin;
  if (in_path != "-") {
    in_file.open(in_path, std::ios::binary);
    if (!in_file) throw DataError("cannot open " + in_path);
    in = &in_file;
  }
  std::ofstream out_file, diag_file;
  std::ostream* out = &std::cout;
  std::ostream* diag = &std::cerr;
  if (out_path != "-") {
    out_file = open_out(out_path);
    out = &out_file;
  }
  if (!diag_path.empty()) {
    diag_file = open_out(diag_path);
    diag = &diag_file;
  }
  const StreamStats stats = format_stream(formatter, *in, *out, *diag, cfg.workers);
  out->flush();
  if (out_file.is_open()) out_file.close();
  std::cerr << "format: " << stats.documents << " documents, " << stats.diagnostics << " diagnostics\n";
  Manifest m(cfg, "format");
  m.checkpoint(cfg.tagger);
  m.checkpoint(cfg.converter);
  if (in_path != "-") m.input(in_path);
  if (out_path != "-") m.output(out_path);
  m.commit();
  return 0;
}

int run_eval(const PipelineConfig& cfg, const std::string& ref_path, const std::string& hyp_path,
             const std::string& records_path, const std::string& spoken_path, const std::string& json_path) {
  const Grammar& grammar = load_grammar(cfg);
  const auto ref = read_lines(ref_path);
  const auto hyp = read_lines(hyp_path);
  if (ref.size() != hyp.size())
    throw DataError("reference has " + std::to_string(ref.size()) + " lines but hypothesis has " +
                    std::to_string(hyp.size()));
  MetricReport report;
  for (std::size_t i = 0; i < ref.size(); ++i) report.add_pair(ref[i], hyp[i], grammar);
  Manifest m(cfg, "eval");
  m.input(ref_path);
  m.input(hyp_path);
  if (!records_path.empty()) {
    if (cfg.tagger.empty()) throw ConfigError("--records needs a tagger checkpoint");
    TaggerModel tagger;
    try {
      tagger = load_tagger(cfg.tagger);
    } catch (const std::exception& e) {
      throw ModelError(std::string("tagger: ") + e.what());
    }
    std::vector<CorpusRecord> recs;
    try {
      recs = read_records_file(records_path);
    } catch (const FormatError& e) {
      throw DataError(e.what());
    }
    for (const auto& r : recs) report.f1 += class_f1(r.labels, predict(tagger, r.spoken));
    report.has_f1 = true;
    m.input(records_path);
    m.checkpoint(cfg.tagger);
  }
  std::cout << report.summary_table();
  if (!spoken_path.empty()) {
    const Formatter formatter = Formatter::from_config(cfg);
    const auto docs = read_lines(spoken_path);
    const auto buckets =
        time_documents(docs, [&](const std::string& d) { (void)formatter.format(d); }, cfg.long_threshold);
    for (const auto& b : buckets)
      std::cout << "timing " << b.name << ": " << b.documents << " documents, " << b.words << " words, "
                << b.mean_seconds() << " s/document\n";
    m.input(spoken_path);
  }
  if (!json_path.empty()) {
    auto out = open_out(json_path);
    out << report.to_json() << '\n';
    out.close();
    m.output(json_path);
  }
  m.commit();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage text formatting for spoken-form transcripts"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--config", common.config_path, "Key = value configuration file")->check(CLI::ExistingFile);
  app.add_option("--set", common.overrides, "Override one configuration key (key=value)");
  app.add_option("--manifest", common.manifest, "Append a run record to this JSON Lines file");

  std::string in_path, out_path, stats_path, diag_path, kind = "corpus", phase, init_path, pairs_path, corpus_path;
  std::string tagger_path, converter_path, ref_path, hyp_path, records_path, spoken_path, json_path;
  std::vector<std::string> classes;
  std::size_t count = 100;

  auto* prep = app.add_subcommand("prep", "Filter, clean and label raw written text (one document per line)");
  prep->add_option("--in", in_path, "Raw text")->required();
  prep->add_option("--out", out_path, "Labelled records (JSON Lines)")->required();
  prep->add_option("--stats", stats_path, "Filter statistics (JSON)");

  auto* synth = app.add_subcommand("synthesize", "Generate synthetic sentences, records or converter pairs");
  synth->add_option("--kind", kind, "sentences | corpus | records | entity-pairs | generic-pairs");
  synth->add_option("--class", classes, "Entity class (repeatable; default: all with templates)");
  synth->add_option("--count", count, "Items (per class for sentences and entity-pairs)");
  synth->add_option("--out", out_path, "Output file")->required();

  auto* ttag = app.add_subcommand("train-tagger", "Train the multi-head tagger");
  ttag->add_option("--corpus", corpus_path, "Labelled records (JSON Lines)")->required();
  ttag->add_option("--out", out_path, "Checkpoint path")->required();

  auto* tconv = app.add_subcommand("train-converter", "Run one training phase of the span converter");
  tconv->add_option("--pairs", pairs_path, "Training pairs (JSON Lines)")->required();
  tconv->add_option("--phase", phase, "generic | itn")->required();
  tconv->add_option("--init", init_path, "Checkpoint to continue from");
  tconv->add_option("--out", out_path, "Checkpoint path")->required();

  auto* fmt = app.add_subcommand("format", "Format spoken-form text (one document per line)");
  fmt->add_option("--tagger", tagger_path, "Tagger checkpoint");
  fmt->add_option("--converter", converter_path, "Converter checkpoint or 'oracle'");
  fmt->add_option("--in", in_path, "Input file or '-'")->required();
  fmt->add_option("--out", out_path, "Output file or '-'")->required();
  fmt->add_option("--diag", diag_path, "Diagnostics file (default: stderr)");

  auto* ev = app.add_subcommand("eval", "Score formatted hypotheses against written references");
  ev->add_option("--ref", ref_path, "Reference written text")->required();
  ev->add_option("--hyp", hyp_path, "Hypothesis text")->required();
  ev->add_option("--records", records_path, "Labelled records for per-class F1 of the tagger");
  ev->add_option("--tagger", tagger_path, "Tagger checkpoint");
  ev->add_option("--converter", converter_path, "Converter checkpoint or 'oracle' (timing only)");
  ev->add_option("--spoken", spoken_path, "Spoken documents to time end to end");
  ev->add_option("--json", json_path, "Write the full report as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    PipelineConfig cfg = resolve_config(common);
    if (!tagger_path.empty()) cfg.tagger = tagger_path;
    if (!converter_path.empty()) cfg.converter = converter_path;
    if (*prep) return run_prep(cfg, in_path, out_path, stats_path);
    if (*synth) return run_synthesize(cfg, kind, classes, count, out_path);
    if (*ttag) return run_train_tagger(cfg, corpus_path, out_path);
    if (*tconv) return run_train_converter(cfg, pairs_path, phase, init_path, out_path);
    if (*fmt) return run_format(cfg, in_path, out_path, diag_path);
    if (*ev) return run_eval(cfg, ref_path, hyp_path, records_path, spoken_path, json_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kExitModel;
  } catch (const TrainingDiverged& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kExitModel;
  } catch (const ConverterDiverged& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kExitModel;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
