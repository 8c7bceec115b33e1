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

#include "tfmt/records_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

namespace tfmt {
namespace {

using nlohmann::json;

template <typename T, typename F>
T parse_label(const json& v, F from_string, const char* what) {
  const auto s = v.get<std::string>();
  const auto parsed = from_string(s);
  if (!parsed) throw FormatError(std::string("unknown ") + what + " label '" + s + "'");
  return *parsed;
}

}  // namespace

std::string record_to_json(const CorpusRecord& rec) {
  json j;
  j["id"] = rec.id;
  j["written"] = rec.written;
  j["spoken"] = rec.spoken;
  json punct = json::array();
  json casing = json::array();
  json itn = json::array();
  for (const auto& l : rec.labels) {
    punct.push_back(std::string(to_string(l.punct)));
    casing.push_back(std::string(to_string(l.casing)));
    itn.push_back(std::string(to_string(l.itn)));
  }
  j["labels"] = {{"punct", punct}, {"case", casing}, {"itn", itn}};
  json prov = json::array();
  for (const auto& p : rec.provenance) {
    prov.push_back({{"written", {p.written_begin, p.written_end}},
                    {"spoken", {p.spoken_begin, p.spoken_end}},
                    {"class", std::string(to_string(p.entity_class))},
                    {"malformed", p.malformed}});
  }
  j["provenance"] = prov;
  return j.dump();
}

CorpusRecord record_from_json(std::string_view line) {
  try {
    const json j = json::parse(line);
    CorpusRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.written = j.at("written").get<std::string>();
    rec.spoken = j.at("spoken").get<std::vector<std::string>>();
    const json& labels = j.at("labels");
    const json& punct = labels.at("punct");
    const json& casing = labels.at("case");
    const json& itn = labels.at("itn");
    if (punct.size() != casing.size() || punct.size() != itn.size()) {
      throw FormatError("label arrays differ in length");
    }
    for (std::size_t i = 0; i < punct.size(); ++i) {
      TokenLabels l;
      l.punct = parse_label<Punct>(punct[i], punct_from_string, "punctuation");
      l.casing = parse_label<CaseForm>(casing[i], case_from_string, "case");
      l.itn = parse_label<ItnLabel>(itn[i], itn_from_string, "itn");
      rec.labels.push_back(l);
    }
    if (j.contains("provenance")) {
      for (const json& p : j.at("provenance")) {
        ProvenanceSpan s;
        s.written_begin = p.at("written").at(0).get<std::size_t>();
        s.written_end = p.at("written").at(1).get<std::size_t>();
        s.spoken_begin = p.at("spoken").at(0).get<std::size_t>();
        s.spoken_end = p.at("spoken").at(1).get<std::size_t>();
        s.entity_class = parse_label<EntityClass>(p.at("class"), entity_class_from_string, "entity class");
        s.malformed = p.value("malformed", false);
        rec.provenance.push_back(s);
      }
    }
    return rec;
  } catch (const json::exception& e) {
    throw FormatError(e.what());
  }
}

void write_records(std::ostream& out, const std::vector<CorpusRecord>& recs) {
  for (const auto& r : recs) out << record_to_json(r) << '\n';
}

std::vector<CorpusRecord> read_records(std::istream& in) {
  std::vector<CorpusRecord> recs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      recs.push_back(record_from_json(line));
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return recs;
}

std::vector<CorpusRecord> read_records_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_records(in);
}

std::string stats_to_json(const FilterStats& coarse, const FilterStats& fine, std::size_t dropped_labels) {
  auto one = [](const FilterStats& s) {
    json rej = json::object();
    for (std::size_t i = 0; i < kNumRejectReasons; ++i) {
      rej[std::string(to_string(static_cast<RejectReason>(i)))] = s.rejected[i];
    }
    return json{{"in", s.in}, {"out", s.out}, {"rejected", rej}};
  };
  return json{{"coarse", one(coarse)}, {"fine", one(fine)}, {"label_drops", dropped_labels}}.dump(2);
}

}  // namespace tfmt
