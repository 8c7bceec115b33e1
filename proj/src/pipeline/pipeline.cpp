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

#include "tfmt/pipeline.hpp"

#include <atomic>
#include <charconv>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace tfmt {

// ---------------------------------------------------------------------------
// Configuration

namespace {

struct Field {
  const char* key;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, const std::string&)> set;
};

template <typename T>
T parse_number(const std::string& key, const std::string& v) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ConfigError("invalid value for " + key + ": '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("invalid value for " + key + ": '" + v + "' (expected true or false)");
}

std::string fmt_double(double d) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, r.ptr);
}

template <typename M>
Field num(const char* key, M PipelineConfig::*outer) {
  return {key, [outer](const PipelineConfig& c) {
            if constexpr (std::is_floating_point_v<M>) return fmt_double(c.*outer);
            else return std::to_string(c.*outer);
          },
          [outer, key](PipelineConfig& c, const std::string& v) { c.*outer = parse_number<M>(key, v); }};
}

template <typename S, typename M>
Field nested(const char* key, S PipelineConfig::*outer, M S::*inner) {
  return {key,
          [outer, inner](const PipelineConfig& c) {
            const M& v = c.*outer.*inner;
            if constexpr (std::is_same_v<M, bool>) return std::string(v ? "true" : "false");
            else if constexpr (std::is_same_v<M, std::string>) return v;
            else if constexpr (std::is_floating_point_v<M>) return fmt_double(v);
            else return std::to_string(v);
          },
          [outer, inner, key](PipelineConfig& c, const std::string& v) {
            M& dst = c.*outer.*inner;
            if constexpr (std::is_same_v<M, bool>) dst = parse_bool(key, v);
            else if constexpr (std::is_same_v<M, std::string>) dst = v;
            else dst = parse_number<M>(key, v);
          }};
}

Field str(const char* key, std::string PipelineConfig::*m) {
  return {key, [m](const PipelineConfig& c) { return c.*m; },
          [m](PipelineConfig& c, const std::string& v) { c.*m = v; }};
}

const std::vector<Field>& fields() {
  using P = PipelineConfig;
  static const std::vector<Field> f = {
      str("grammar", &P::grammar),
      str("tagger", &P::tagger),
      str("converter", &P::converter),
      num("context_radius", &P::context_radius),
      num("seed", &P::seed),
      num("workers", &P::workers),
      num("long_threshold", &P::long_threshold),
      str("manifest", &P::manifest),
      nested("filter.coarse_max_marks_per_word", &P::filters, &FilterConfig::coarse_max_marks_per_word),
      nested("filter.coarse_require_terminal", &P::filters, &FilterConfig::coarse_require_terminal),
      nested("filter.coarse_max_upper_ratio", &P::filters, &FilterConfig::coarse_max_upper_ratio),
      nested("filter.min_words", &P::filters, &FilterConfig::min_words),
      nested("filter.max_words", &P::filters, &FilterConfig::max_words),
      nested("filter.max_marks_per_word", &P::filters, &FilterConfig::max_marks_per_word),
      nested("filter.min_upper_ratio", &P::filters, &FilterConfig::min_upper_ratio),
      nested("filter.max_upper_ratio", &P::filters, &FilterConfig::max_upper_ratio),
      nested("filter.disallowed_symbols", &P::filters, &FilterConfig::disallowed_symbols),
      nested("tagger.embed_dim", &P::tagger_train, &TaggerConfig::embed_dim),
      nested("tagger.hidden_dim", &P::tagger_train, &TaggerConfig::hidden_dim),
      nested("tagger.radius", &P::tagger_train, &TaggerConfig::radius),
      nested("tagger.steps", &P::tagger_train, &TaggerConfig::steps),
      nested("tagger.batch_size", &P::tagger_train, &TaggerConfig::batch_size),
      nested("tagger.learning_rate", &P::tagger_train, &TaggerConfig::learning_rate),
      nested("tagger.clip_norm", &P::tagger_train, &TaggerConfig::clip_norm),
      nested("tagger.init_scale", &P::tagger_train, &TaggerConfig::init_scale),
      nested("tagger.seed", &P::tagger_train, &TaggerConfig::seed),
      nested("converter.embed_dim", &P::converter_model, &Seq2SeqConfig::embed_dim),
      nested("converter.enc_hidden", &P::converter_model, &Seq2SeqConfig::enc_hidden),
      nested("converter.dec_hidden", &P::converter_model, &Seq2SeqConfig::dec_hidden),
      nested("converter.max_output_factor", &P::converter_model, &Seq2SeqConfig::max_output_factor),
      nested("converter.max_output_constant", &P::converter_model, &Seq2SeqConfig::max_output_constant),
      nested("converter.init_scale", &P::converter_model, &Seq2SeqConfig::init_scale),
      nested("converter.seed", &P::converter_model, &Seq2SeqConfig::seed),
      nested("converter.steps", &P::converter_train, &PhaseConfig::steps),
      nested("converter.batch_size", &P::converter_train, &PhaseConfig::batch_size),
      nested("converter.learning_rate", &P::converter_train, &PhaseConfig::learning_rate),
      nested("converter.final_lr_fraction", &P::converter_train, &PhaseConfig::final_lr_fraction),
      nested("converter.clip_norm", &P::converter_train, &PhaseConfig::clip_norm),
      nested("converter.train_seed", &P::converter_train, &PhaseConfig::seed),
  };
  return f;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.set(cfg, value);
      return;
    }
  }
  throw ConfigError("unknown configuration key '" + key + "'");
}

PipelineConfig parse_config(std::string_view text) {
  PipelineConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(n) + ": expected key = value");
    try {
      set_config_value(cfg, trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(n) + ": " + e.what());
    }
  }
  if (cfg.workers == 0) throw ConfigError("workers must be at least 1");
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_text(const PipelineConfig& cfg) {
  std::string out;
  for (const auto& f : fields()) {
    out += f.key;
    out += " = ";
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 15];
  return s;
}

std::string file_digest(const std::string& path) { return "fnv1a64:" + hex64(fnv1a64(read_file(path))); }

const Grammar& load_grammar(const PipelineConfig& cfg) {
  if (cfg.grammar.empty()) return Grammar::builtin();
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<Grammar>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[cfg.grammar];
  if (!slot) {
    try {
      slot = std::make_unique<Grammar>(Grammar::load(cfg.grammar));
    } catch (const std::exception& e) {
      cache.erase(cfg.grammar);
      throw DataError(std::string("grammar: ") + e.what());
    }
  }
  return *slot;
}

// ---------------------------------------------------------------------------
// Formatter

Formatter::Formatter(const Grammar& grammar, TaggerModel tagger, std::unique_ptr<ConverterBackend> converter,
                     std::size_t context_radius)
    : grammar_(grammar), tagger_(std::move(tagger)), converter_(std::move(converter)), radius_(context_radius) {
  if (!converter_) throw ModelError("formatter needs a converter backend");
}

Formatter Formatter::from_config(const PipelineConfig& cfg) {
  const Grammar& grammar = load_grammar(cfg);
  if (cfg.tagger.empty()) throw ModelError("no tagger checkpoint configured");
  TaggerModel tagger;
  try {
    tagger = load_tagger(cfg.tagger);
  } catch (const std::exception& e) {
    throw ModelError(std::string("tagger: ") + e.what());
  }
  std::unique_ptr<ConverterBackend> conv;
  if (cfg.converter == "oracle") {
    conv = std::make_unique<OracleBackend>(grammar);
  } else {
    try {
      conv = std::make_unique<NeuralBackend>(load_converter(cfg.converter));
    } catch (const std::exception& e) {
      throw ModelError(std::string("converter: ") + e.what());
    }
  }
  return Formatter(grammar, std::move(tagger), std::move(conv), cfg.context_radius);
}

FormattedDocument Formatter::format(std::string_view spoken_text) const {
  FormattedDocument doc;
  const auto spoken = spoken_tokens(spoken_text);
  if (spoken.empty()) return doc;
  const auto labels = predict(tagger_, spoken);
  const auto formatted = apply_labels(spoken, labels);
  const auto spans = extract_spans(labels, radius_);
  std::vector<std::string> outputs;
  outputs.reserve(spans.size());
  for (const auto& s : spans) {
    const SpanText st = make_span_text(formatted, s);
    ConvertResult r;
    try {
      r = converter_->convert(st);
    } catch (const std::exception& e) {
      r.text = join(st.core);
      if (st.carried_punct) r.text.push_back(*st.carried_punct);
      r.status = ConvertStatus::kIdentity;
      r.diagnostic = std::string("conversion failed: ") + e.what();
    }
    const bool degraded = r.status == ConvertStatus::kTruncated || r.status == ConvertStatus::kMalformedOutput;
    const bool mixed_kept = s.kind == SpanKind::kMixed && r.status == ConvertStatus::kIdentity;
    if (degraded || mixed_kept || !r.diagnostic.empty()) {
      std::string msg = "tokens " + std::to_string(s.core_begin) + "-" + std::to_string(s.core_end) + " (" +
                        std::string(to_string(s.kind)) + "): " + std::string(to_string(r.status));
      if (mixed_kept && r.diagnostic.empty()) msg += ": no mixed-case form, kept lowercase";
      if (!r.diagnostic.empty()) msg += ": " + r.diagnostic;
      doc.diagnostics.push_back(std::move(msg));
    }
    outputs.push_back(std::move(r.text));
  }
  doc.text = reintegrate(formatted, spans, outputs);
  return doc;
}

StreamStats format_stream(const Formatter& formatter, std::istream& in, std::ostream& out, std::ostream& diag,
                          std::size_t workers, std::size_t chunk) {
  StreamStats stats;
  workers = std::max<std::size_t>(1, workers);
  chunk = std::max<std::size_t>(1, chunk);
  std::vector<std::string> lines;
  std::vector<FormattedDocument> results;
  std::string line;
  bool more = true;
  while (more) {
    lines.clear();
    while (lines.size() < chunk && (more = static_cast<bool>(std::getline(in, line)))) lines.push_back(line);
    if (lines.empty()) break;
    results.assign(lines.size(), {});
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < lines.size();) {
        try {
          results[i] = formatter.format(lines[i]);
        } catch (const std::exception& e) {
          results[i].text = lines[i];
          results[i].diagnostics = {std::string("document left unformatted: ") + e.what()};
        }
      }
    };
    const std::size_t n_threads = std::min(workers, lines.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < lines.size(); ++i) {
      out << results[i].text << '\n';
      for (const auto& d : results[i].diagnostics) diag << "line " << stats.documents + i + 1 << ": " << d << '\n';
      stats.diagnostics += results[i].diagnostics.size();
    }
    stats.documents += lines.size();
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Manifest

std::string manifest_to_json(const ManifestEntry& e) {
  nlohmann::json j;
  j["command"] = e.command;
  j["config_hash"] = e.config_hash;
  j["seed"] = e.seed;
  j["checkpoints"] = e.checkpoints;
  j["inputs"] = e.inputs;
  j["outputs"] = e.outputs;
  return j.dump();
}

ManifestEntry manifest_from_json(std::string_view line) {
  try {
    const auto j = nlohmann::json::parse(line);
    ManifestEntry e;
    e.command = j.at("command").get<std::string>();
    e.config_hash = j.at("config_hash").get<std::string>();
    e.seed = j.at("seed").get<std::uint64_t>();
    e.checkpoints = j.at("checkpoints").get<std::map<std::string, std::string>>();
    e.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    e.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(std::string("malformed manifest line: ") + ex.what());
  }
}

bool append_manifest(const std::string& path, const ManifestEntry& e) {
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) return false;
  out << manifest_to_json(e) << '\n';
  return static_cast<bool>(out);
}

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open manifest " + path);
  std::vector<ManifestEntry> out;
  std::string line;
  while (std::getline(in, line))
    if (!trim(line).empty()) out.push_back(manifest_from_json(line));
  return out;
}

}  // namespace tfmt
