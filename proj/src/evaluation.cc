// Copyright 2026 The keyevent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "keyevent/evaluation.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"
#include "keyevent/error.h"
#include "keyevent/format.h"

namespace keyevent {

GroundTruth read_ground_truth(std::istream& in) {
  GroundTruth truth;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "truth line " + std::to_string(line_no) + ": ";
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + "malformed JSON");
    }
    if (!record.is_object() || !record.contains("event_id") ||
        !record.contains("doc_ids") || !record["doc_ids"].is_array()) {
      throw DataError(where + "expected {event_id, doc_ids: [...]}");
    }
    TruthEvent event;
    const auto& id = record["event_id"];
    if (id.is_string()) {
      event.id = id.get<std::string>();
    } else if (id.is_number_integer()) {
      event.id = std::to_string(id.get<long long>());
    } else {
      throw DataError(where + "event_id must be a string or integer");
    }
    for (const auto& d : record["doc_ids"]) {
      if (!d.is_string()) throw DataError(where + "doc ids must be strings");
      event.doc_ids.insert(d.get<std::string>());
    }
    if (event.doc_ids.empty()) throw DataError(where + "event has no documents");
    if (!seen.insert(event.id).second) {
      throw DataError(where + "duplicate event id " + event.id);
    }
    truth.events.push_back(std::move(event));
  }
  if (truth.events.empty()) throw DataError("ground truth has no events");
  return truth;
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_ground_truth(in);
}

void write_ground_truth(const GroundTruth& truth, std::ostream& out) {
  for (const auto& e : truth.events) {
    nlohmann::json record = {{"event_id", e.id}, {"doc_ids", e.doc_ids}};
    out << record.dump() << '\n';
  }
}

bool kmatch(std::span<const ScoredDoc> ranked, const std::set<std::string>& truth,
            int k) {
  if (k < 1) throw UsageError("k must be at least 1");
  const std::size_t top = std::min<std::size_t>(ranked.size(), k);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < top; ++i) hits += truth.contains(ranked[i].id);
  return 2 * hits > static_cast<std::size_t>(k);
}

KMetrics k_metrics(std::span<const KeyEvent> predicted, const GroundTruth& truth,
                   int k) {
  if (k < 1) throw UsageError("k must be at least 1");
  KMetrics m;
  m.k = k;
  std::vector<bool> matched(truth.events.size(), false);
  for (const auto& event : predicted) {
    if (event.documents.size() >= static_cast<std::size_t>(k)) ++m.predictions;
    for (std::size_t t = 0; t < truth.events.size(); ++t) {
      if (kmatch(event.documents, truth.events[t].doc_ids, k)) matched[t] = true;
    }
  }
  m.matched = static_cast<std::size_t>(std::count(matched.begin(), matched.end(), true));
  if (m.predictions > 0) {
    m.precision = std::min(1.0, static_cast<double>(m.matched) /
                                    static_cast<double>(m.predictions));
  }
  if (!truth.events.empty()) {
    m.recall = static_cast<double>(m.matched) /
               static_cast<double>(truth.events.size());
  }
  if (m.precision + m.recall > 0.0) {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  return m;
}

void write_metrics(std::span<const KMetrics> rows, std::ostream& out) {
  out << "k\tprecision\trecall\tf1\tmatched\tpredictions\n";
  for (const auto& m : rows) {
    out << m.k << '\t' << format_fixed(m.precision, 4) << '\t'
        << format_fixed(m.recall, 4) << '\t' << format_fixed(m.f1, 4) << '\t'
        << m.matched << '\t' << m.predictions << '\n';
  }
}

}  // namespace keyevent
