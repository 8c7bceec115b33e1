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

#include "tfmt/metrics.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "tfmt/normalizer.hpp"

namespace tfmt {
namespace {

bool is_sentence_mark(char c) { return c == '.' || c == ',' || c == '?' || c == '!' || c == ';' || c == ':'; }

std::string strip_marks(std::string_view w) {
  while (!w.empty() && is_sentence_mark(w.back())) w.remove_suffix(1);
  while (!w.empty() && is_sentence_mark(w.front())) w.remove_prefix(1);
  return std::string(w);
}

struct MarkedWord {
  std::string key;
  Punct mark = Punct::kNone;
};

// Lone mark tokens attach to the preceding word when it has no mark.
std::vector<MarkedWord> marked_words(std::string_view text) {
  std::vector<MarkedWord> out;
  for (const Token& t : tokenize(text)) {
    std::string key = ascii_lower(strip_marks(t.text));
    if (key.empty()) {
      if (!out.empty() && out.back().mark == Punct::kNone) {
        if (t.text.find('?') != std::string::npos) {
          out.back().mark = Punct::kQuestion;
        } else if (t.text.find('.') != std::string::npos) {
          out.back().mark = Punct::kPeriod;
        } else if (t.text.find(',') != std::string::npos) {
          out.back().mark = Punct::kComma;
        }
      }
      continue;
    }
    out.push_back({std::move(key), t.post_punct});
  }
  return out;
}

double safe_div(std::size_t a, std::size_t b) { return b ? static_cast<double>(a) / static_cast<double>(b) : 0.0; }

}  // namespace

std::optional<double> Tally::ratio() const {
  if (!defined()) return std::nullopt;
  return static_cast<double>(errors()) / static_cast<double>(total);
}

Tally& Tally::operator+=(const Tally& o) {
  substitutions += o.substitutions;
  insertions += o.insertions;
  deletions += o.deletions;
  total += o.total;
  return *this;
}

Tally per(std::string_view ref, std::string_view hyp) {
  const auto r = marked_words(ref);
  const auto h = marked_words(hyp);
  std::vector<std::string> rk;
  std::vector<std::string> hk;
  for (const auto& w : r) rk.push_back(w.key);
  for (const auto& w : h) hk.push_back(w.key);
  Tally t;
  for (const auto& w : r) t.total += (w.mark != Punct::kNone);
  for (const auto& op : align_words(rk, hk).ops) {
    const Punct rm = op.ref ? r[*op.ref].mark : Punct::kNone;
    const Punct hm = op.hyp ? h[*op.hyp].mark : Punct::kNone;
    if (rm == hm) continue;
    if (rm == Punct::kNone) {
      ++t.insertions;
    } else if (hm == Punct::kNone) {
      ++t.deletions;
    } else {
      ++t.substitutions;
    }
  }
  return t;
}

Tally cer(std::string_view ref, std::string_view hyp) {
  auto prep = [](std::string_view s) {
    std::string kept;
    for (char c : s) {
      if (c != '.' && c != ',' && c != '?') kept.push_back(c);
    }
    return utf8_decode(normalize_whitespace(kept));
  };
  const std::u32string r = prep(ref);
  const std::u32string h = prep(hyp);
  // Edit distance does not split into S/I/D; all errors are booked as
  // substitutions.
  Tally t;
  t.substitutions = edit_distance(r, h);
  t.total = r.size();
  return t;
}

Tally restricted_wer(std::span<const std::string> ref, const std::vector<bool>& restricted,
                     std::span<const std::string> hyp) {
  if (ref.size() != restricted.size()) throw std::invalid_argument("restricted mask length mismatch");
  Tally t;
  for (bool b : restricted) t.total += b;
  const auto ops = align_words(ref, hyp).ops;
  // Next reference index at or after each op position.
  std::vector<std::optional<std::size_t>> next_ref(ops.size() + 1);
  for (std::size_t k = ops.size(); k-- > 0;) next_ref[k] = ops[k].ref ? ops[k].ref : next_ref[k + 1];
  std::optional<std::size_t> prev_ref;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const auto& op = ops[k];
    switch (op.op) {
      case EditOp::kMatch:
        break;
      case EditOp::kSub:
        t.substitutions += restricted[*op.ref];
        break;
      case EditOp::kDel:
        t.deletions += restricted[*op.ref];
        break;
      case EditOp::kIns: {
        const bool before = prev_ref && restricted[*prev_ref];
        const bool after = next_ref[k + 1] && restricted[*next_ref[k + 1]];
        t.insertions += (before || after);
        break;
      }
    }
    if (op.ref) prev_ref = op.ref;
  }
  return t;
}

Tally i_wer(std::string_view ref_formatted, std::string_view hyp, const Grammar& grammar) {
  const NormalizationResult norm = normalize(grammar, ref_formatted);
  std::vector<bool> in_entity(norm.written.size(), false);
  for (const auto& p : norm.provenance) {
    if (p.entity_class == EntityClass::kNone) continue;
    for (std::size_t i = p.written_begin; i < p.written_end; ++i) in_entity[i] = true;
  }
  std::vector<std::string> ref;
  std::vector<bool> mask;
  for (std::size_t i = 0; i < norm.written.size(); ++i) {
    std::string w = ascii_lower(strip_marks(norm.written[i].text));
    if (w.empty()) continue;
    ref.push_back(std::move(w));
    mask.push_back(in_entity[i]);
  }
  std::vector<std::string> h;
  for (const Token& t : tokenize(hyp)) {
    std::string w = ascii_lower(strip_marks(t.text));
    if (!w.empty()) h.push_back(std::move(w));
  }
  return restricted_wer(ref, mask, h);
}

Tally m_wer(std::string_view ref_formatted, std::string_view hyp) {
  std::vector<std::string> ref;
  std::vector<std::string> h;
  for (const Token& t : tokenize(ref_formatted)) {
    std::string w = strip_marks(t.text);
    if (!w.empty()) ref.push_back(std::move(w));
  }
  for (const Token& t : tokenize(hyp)) {
    std::string w = strip_marks(t.text);
    if (!w.empty()) h.push_back(std::move(w));
  }
  std::vector<bool> mask;
  for (const auto& w : ref) mask.push_back(classify_case(w) == CaseForm::kMixed);
  return restricted_wer(ref, mask, h);
}

double ClassScore::precision() const { return safe_div(tp, tp + fp); }
double ClassScore::recall() const { return safe_div(tp, tp + fn); }
double ClassScore::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

ClassScore& ClassScore::operator+=(const ClassScore& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  return *this;
}

F1Report& F1Report::operator+=(const F1Report& o) {
  for (std::size_t i = 0; i < punct.size(); ++i) punct[i] += o.punct[i];
  for (std::size_t i = 0; i < casing.size(); ++i) casing[i] += o.casing[i];
  for (std::size_t i = 0; i < itn.size(); ++i) itn[i] += o.itn[i];
  return *this;
}

F1Report class_f1(std::span<const TokenLabels> ref, std::span<const TokenLabels> hyp) {
  if (ref.size() != hyp.size()) {
    throw std::invalid_argument("class_f1: reference has " + std::to_string(ref.size()) +
                                " labels, hypothesis has " + std::to_string(hyp.size()));
  }
  F1Report rep;
  auto score = [](auto& arr, std::size_t r, std::size_t h) {
    if (r == h) {
      ++arr[r].tp;
    } else {
      ++arr[r].fn;
      ++arr[h].fp;
    }
  };
  for (std::size_t i = 0; i < ref.size(); ++i) {
    score(rep.punct, static_cast<std::size_t>(ref[i].punct), static_cast<std::size_t>(hyp[i].punct));
    score(rep.casing, static_cast<std::size_t>(ref[i].casing), static_cast<std::size_t>(hyp[i].casing));
    score(rep.itn, static_cast<std::size_t>(ref[i].itn), static_cast<std::size_t>(hyp[i].itn));
  }
  return rep;
}

void MetricReport::add_pair(std::string_view ref, std::string_view hyp, const Grammar& grammar) {
  per += tfmt::per(ref, hyp);
  cer += tfmt::cer(ref, hyp);
  i_wer += tfmt::i_wer(ref, hyp, grammar);
  m_wer += tfmt::m_wer(ref, hyp);
  ++documents;
}

namespace {

nlohmann::json tally_json(const Tally& t) {
  nlohmann::json j = {{"substitutions", t.substitutions}, {"insertions", t.insertions},
                      {"deletions", t.deletions},         {"errors", t.errors()},
                      {"total", t.total},                 {"defined", t.defined()}};
  j["ratio"] = t.ratio() ? nlohmann::json(*t.ratio()) : nlohmann::json(nullptr);
  return j;
}

template <std::size_t N, typename E>
nlohmann::json head_json(const std::array<ClassScore, N>& arr) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < N; ++i) {
    const ClassScore& s = arr[i];
    nlohmann::json c = {{"tp", s.tp}, {"fp", s.fp}, {"fn", s.fn}, {"applicable", s.applicable()}};
    if (s.applicable()) {
      c["precision"] = s.precision();
      c["recall"] = s.recall();
      c["f1"] = s.f1();
    }
    j[std::string(to_string(static_cast<E>(i)))] = c;
  }
  return j;
}

std::string percent(const Tally& t) {
  if (!t.defined()) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", 100.0 * *t.ratio());
  return buf;
}

}  // namespace

std::string MetricReport::to_json() const {
  nlohmann::json j = {{"documents", documents},
                      {"per", tally_json(per)},
                      {"cer", tally_json(cer)},
                      {"i_wer", tally_json(i_wer)},
                      {"m_wer", tally_json(m_wer)}};
  if (has_f1) {
    j["f1"] = {{"punct", head_json<kNumPunct, Punct>(f1.punct)},
               {"case", head_json<kNumCase, CaseForm>(f1.casing)},
               {"itn", head_json<kNumItn, ItnLabel>(f1.itn)}};
  }
  return j.dump(2);
}

std::string MetricReport::summary_table() const {
  std::ostringstream os;
  char line[128];
  std::snprintf(line, sizeof line, "%-10s %10s %10s %10s %10s\n", "docs", "PER (%)", "CER (%)", "M-WER (%)",
                "I-WER (%)");
  os << line;
  std::snprintf(line, sizeof line, "%-10zu %10s %10s %10s %10s\n", documents, percent(per).c_str(),
                percent(cer).c_str(), percent(m_wer).c_str(), percent(i_wer).c_str());
  os << line;
  if (has_f1) {
    auto row = [&](std::string_view name, const ClassScore& s) {
      if (!s.applicable()) {
        std::snprintf(line, sizeof line, "  %-10s %8s\n", std::string(name).c_str(), "n/a");
      } else {
        std::snprintf(line, sizeof line, "  %-10s %8.4f\n", std::string(name).c_str(), s.f1());
      }
      os << line;
    };
    os << "F1\n";
    for (std::size_t i = 0; i < kNumPunct; ++i) row(to_string(static_cast<Punct>(i)), f1.punct[i]);
    for (std::size_t i = 0; i < kNumCase; ++i) row(to_string(static_cast<CaseForm>(i)), f1.casing[i]);
    for (std::size_t i = 0; i < kNumItn; ++i) row(to_string(static_cast<ItnLabel>(i)), f1.itn[i]);
  }
  return os.str();
}

std::vector<TimingBucket> time_documents(std::span<const std::string> docs,
                                         const std::function<void(const std::string&)>& run,
                                         std::size_t long_threshold) {
  TimingBucket shrt{"short"};
  TimingBucket lng{"long"};
  for (const auto& d : docs) {
    const std::size_t words = split_whitespace(d).size();
    const auto t0 = std::chrono::steady_clock::now();
    run(d);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    TimingBucket& b = words < long_threshold ? shrt : lng;
    ++b.documents;
    b.words += words;
    b.total_seconds += secs;
  }
  std::vector<TimingBucket> out;
  if (shrt.documents) out.push_back(shrt);
  if (lng.documents) out.push_back(lng);
  return out;
}

}  // namespace tfmt
