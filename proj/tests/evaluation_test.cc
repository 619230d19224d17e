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

#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "keyevent/error.h"

namespace keyevent {
namespace {

std::vector<ScoredDoc> ranked(const std::vector<std::string>& ids) {
  std::vector<ScoredDoc> out;
  double s = 1.0;
  for (const auto& id : ids) out.push_back({id, s -= 0.01});
  return out;
}

KeyEvent event(const std::string& id, const std::vector<std::string>& docs) {
  return {id, ranked(docs), {}, {}};
}

TEST_CASE("kmatch needs a strict majority of the top k") {
  const std::set<std::string> g = {"a", "b", "c"};
  CHECK(kmatch(ranked({"a", "x", "b", "y", "c", "z"}), g, 5));
  CHECK_FALSE(kmatch(ranked({"a", "x", "b", "y"}), g, 4));
  CHECK_FALSE(kmatch(ranked({"x", "y", "z", "a", "b", "c"}), g, 5));
  CHECK(kmatch(ranked({"a", "b"}), g, 3));
  CHECK_FALSE(kmatch(ranked({"a"}), g, 3));
}

TEST_CASE("kmatch equals set intersection on an overlap table") {
  // Row i puts i truth docs into the top 10.
  const std::set<std::string> g = {"t0", "t1", "t2", "t3", "t4", "t5",
                                   "t6", "t7", "t8", "t9"};
  for (int hits = 0; hits <= 10; ++hits) {
    std::vector<std::string> ids;
    for (int i = 0; i < 10; ++i) {
      ids.push_back(i < hits ? "t" + std::to_string(i) : "n" + std::to_string(i));
    }
    ids.push_back("t9");  // beyond the top 10
    CHECK(kmatch(ranked(ids), g, 10) == (2 * hits > 10));
  }
}

TEST_CASE("k metrics worked example") {
  GroundTruth truth{{{"G1", {"a1", "a2", "a3", "a4", "a5"}},
                     {"G2", {"b1", "b2", "b3", "b4", "b5"}}}};
  const std::vector<KeyEvent> predicted = {
      event("E1", {"a1", "a2", "a3", "x1", "x2"}),
      event("E2", {"b1", "b2", "b3", "b4", "x3"}),
      event("E3", {"a4", "a5", "b5", "x4", "x5"})};
  const auto m = k_metrics(predicted, truth, 5);
  CHECK(m.matched == 2);
  CHECK(m.predictions == 3);
  CHECK(m.precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.recall == 1.0);
  CHECK(m.f1 == doctest::Approx(0.8));
}

TEST_CASE("k metrics edge cases") {
  GroundTruth truth{{{"G1", {"a1", "a2", "a3"}}}};
  const std::vector<KeyEvent> short_events = {event("E1", {"a1", "a2"})};
  const auto none = k_metrics(short_events, truth, 5);
  CHECK(none.precision == 0.0);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);

  const std::vector<KeyEvent> exact = {event("E1", {"a1", "a2", "a3"})};
  const auto perfect = k_metrics(exact, truth, 3);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);

  // A short prediction still counts toward recall but not the denominator.
  const std::vector<KeyEvent> mixed = {event("E1", {"a1", "a2"}),
                                       event("E2", {"x1", "x2", "x3"})};
  const auto m = k_metrics(mixed, truth, 3);
  CHECK(m.matched == 1);
  CHECK(m.predictions == 1);
  CHECK(m.precision == 1.0);
  CHECK(m.recall == 1.0);
}

TEST_CASE("ground truth file") {
  std::istringstream in(
      R"({"event_id": "G1", "doc_ids": ["a", "b"]})" "\n\n"
      R"({"event_id": 7, "doc_ids": ["c"]})" "\n");
  const auto truth = read_ground_truth(in);
  REQUIRE(truth.events.size() == 2);
  CHECK(truth.events[1].id == "7");
  CHECK(truth.events[0].doc_ids == std::set<std::string>{"a", "b"});

  std::ostringstream out;
  write_ground_truth(truth, out);
  std::istringstream again(out.str());
  CHECK(read_ground_truth(again).events.size() == 2);

  std::istringstream empty_event(R"({"event_id": "G", "doc_ids": []})" "\n");
  CHECK_THROWS_AS(read_ground_truth(empty_event), DataError);
  std::istringstream dup(R"({"event_id": "G", "doc_ids": ["a"]})" "\n"
                         R"({"event_id": "G", "doc_ids": ["b"]})" "\n");
  CHECK_THROWS_AS(read_ground_truth(dup), DataError);
  std::istringstream nothing("");
  CHECK_THROWS_AS(read_ground_truth(nothing), DataError);
  std::istringstream broken("{\"event_id\": \n");
  CHECK_THROWS_AS(read_ground_truth(broken), DataError);
}

TEST_CASE("metrics table") {
  std::vector<KMetrics> rows = {{5, 2.0 / 3.0, 1.0, 0.8, 2, 3}};
  std::ostringstream out;
  write_metrics(rows, out);
  CHECK(out.str() ==
        "k\tprecision\trecall\tf1\tmatched\tpredictions\n"
        "5\t0.6667\t1.0000\t0.8000\t2\t3\n");
}

}  // namespace
}  // namespace keyevent
