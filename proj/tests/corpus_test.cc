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

#include "keyevent/corpus.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "keyevent/error.h"
#include "keyevent/rng.h"
#include "test_util.h"

namespace keyevent {
namespace {

using testing::make_corpus;

Corpus parse(const std::string& jsonl) {
  std::istringstream in(jsonl);
  return read_corpus(in);
}

std::string error_of(const std::string& jsonl) {
  try {
    parse(jsonl);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

TEST_CASE("read_corpus spans calendar days") {
  const Corpus c = parse(
      R"({"id":"a","date":"2019-08-13","text":"Police fired tear gas."})" "\n"
      R"({"id":"b","date":"2019-08-12","title":"T","text":"Airport closed. Flights cancelled."})" "\n"
      R"({"id":"c","date":"2019-08-14","text":"Calm returned."})" "\n");
  CHECK(c.size() == 3);
  CHECK(c.span().width() == 3);
  CHECK(c.origin_days() == testing::epoch("2019-08-12"));
  CHECK(c[1].day == 0);
  CHECK(c[1].sentences.size() == 2);
  CHECK(c[1].title == "T");
  CHECK(c.find("c") == DocIndex{2});
  CHECK_FALSE(c.find("zz").has_value());
}

TEST_CASE("read_corpus errors name the line") {
  CHECK(error_of(R"({"id":"a","date":"2019-08-13","text":"x"})" "\n"
                 R"({"id":"b","text":"y"})" "\n")
            .find("line 2") != std::string::npos);
  CHECK(error_of(R"({"id":"a1","date":"2019-08-13","text":"x"})" "\n"
                 R"({"id":"a1","date":"2019-08-14","text":"y"})" "\n")
            .find("duplicate id") != std::string::npos);
  CHECK(error_of(R"({"id":"a","date":"2019-02-30","text":"x"})" "\n")
            .find("line 1") != std::string::npos);
  CHECK(error_of("{not json\n").find("line 1") != std::string::npos);
  CHECK(error_of(R"({"id":"a","date":"2019-08-13","text":"..."})" "\n")
            .find("line 1") != std::string::npos);
}

TEST_CASE("write_corpus round trip") {
  const Corpus c = make_corpus({{0, "One two. Three."}, {4, "Four five."}});
  std::ostringstream out;
  write_corpus(c, out);
  const Corpus back = parse(out.str());
  REQUIRE(back.size() == 2);
  CHECK(back[1].day == 4);
  CHECK(back[0].raw_sentences == c[0].raw_sentences);
  CHECK(back.span() == c.span());
}

TEST_CASE("quiet days are representable") {
  const Corpus c = make_corpus({{0, "a."}, {3, "b."}, {3, "c."}});
  CHECK(c.span() == DaySpan{0, 3});
  CHECK(c.docs_on(1).empty());
  CHECK(c.docs_on(3).size() == 2);
  CHECK(c.docs_on(-5).empty());
  CHECK(c.docs_on(99).empty());
}

TEST_CASE("lead sentences") {
  const Corpus c = make_corpus({{0, "One. Two. Three. Four."}});
  CHECK(c[0].lead(3) == "One. Two. Three.");
  CHECK(c[0].lead(9) == "One. Two. Three. Four.");
}

// Independent BM25 over token counts.
std::vector<double> bm25_oracle(const std::vector<std::vector<std::string>>& docs,
                                const std::string& term) {
  const double k1 = 1.2, b = 0.75;
  const double n_docs = static_cast<double>(docs.size());
  double avgdl = 0;
  for (const auto& d : docs) avgdl += static_cast<double>(d.size());
  avgdl /= n_docs;
  double df = 0;
  for (const auto& d : docs) df += std::count(d.begin(), d.end(), term) > 0;
  const double idf = std::log(1 + (n_docs - df + 0.5) / (df + 0.5));
  std::vector<double> out;
  for (const auto& d : docs) {
    const double tf = static_cast<double>(std::count(d.begin(), d.end(), term));
    const double dl = static_cast<double>(d.size());
    out.push_back(idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * dl / avgdl)));
  }
  return out;
}

TEST_CASE("bm25 matches a hand oracle on five documents") {
  const std::vector<std::string> texts = {
      "Ebola outbreak spreads. Ebola cases rise in the east.",
      "Vaccine trial begins for ebola.",
      "Elections were held on Sunday.",
      "Health workers report ebola deaths and ebola fears and more ebola.",
      "Markets closed higher."};
  std::vector<testing::DocSpec> specs;
  std::vector<std::vector<std::string>> tokens;
  for (const auto& t : texts) {
    specs.push_back({0, t, ""});
    tokens.push_back(tokenize(t));
  }
  const Corpus c = make_corpus(specs);
  const std::vector<std::string> query = {"Ebola", "ebola"};
  const auto got = bm25_scores(c, query);
  const auto want = bm25_oracle(tokens, "ebola");
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
  }

  const auto r = retrieve_theme(c, query, c.span());
  std::vector<std::pair<double, std::string>> oracle;
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (want[i] > 0) oracle.push_back({-want[i], c[i].id});
  }
  std::sort(oracle.begin(), oracle.end());
  REQUIRE(r.ranking.size() == oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) {
    CHECK(r.ranking[i].id == oracle[i].second);
  }
  CHECK(r.corpus.size() == 3);
  CHECK_FALSE(r.corpus.find("d2").has_value());
  CHECK(r.corpus.origin_days() == c.origin_days());
}

TEST_CASE("retrieval window, monotonicity and top fraction") {
  const Corpus c = make_corpus({{0, "protest police airport."},
                                {0, "nothing relevant."},
                                {5, "protest police airport protest."},
                                {1, "protest only."},
                                {2, "police only here."}});
  const std::vector<std::string> q = {"protest", "police", "airport"};
  const auto scores = bm25_scores(c, q);
  CHECK(scores[1] == 0.0);
  CHECK(scores[0] > scores[3]);

  const auto windowed = retrieve_theme(c, q, DaySpan{0, 2});
  CHECK_FALSE(windowed.corpus.find("d2").has_value());
  CHECK(windowed.ranking.front().id == "d0");

  const auto top = retrieve_theme(
      c, q, c.span(), {RetrievalCutoff::Mode::kTopFraction, 0.5});
  CHECK(top.ranking.size() == 2);  // ceil(0.5 * 4)
  CHECK_THROWS_AS(retrieve_theme(c, q, c.span(),
                                 {RetrievalCutoff::Mode::kTopFraction, 1.5}),
                  UsageError);
}

TEST_CASE("occurrence index counts") {
  const Corpus c = make_corpus(
      {{5, "The Hong Kong airport closed. Hong Kong Airport reopened."},
       {5, "a b a b a."},
       {6, "Hong Kong airport again."}});
  const std::vector<std::string> phrases = {"hong kong airport", "A B", "a b",
                                            "missing phrase"};
  const auto index = OccurrenceIndex::build(c, phrases);
  CHECK(index.phrases().size() == 3);
  CHECK(index.doc_freq("hong kong airport", 0) == 2);
  CHECK(index.day_freq("hong kong airport", 5) == 2);
  CHECK(index.day_freq("hong kong airport", 6) == 1);
  CHECK(index.total_freq("hong kong airport") == 3);
  CHECK(index.doc_count("hong kong airport") == 2);
  CHECK(index.doc_freq("a b", 1) == 2);
  CHECK(index.doc_presence("missing phrase").empty());
  CHECK(index.day_presence("missing phrase").empty());
  CHECK(index.day_presence("hong kong airport") == std::vector<int>{5, 6});
}

TEST_CASE("occurrence counts match a scan on random corpora") {
  Rng rng(7);
  const std::vector<std::string> words = {"a", "b", "c"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<testing::DocSpec> specs;
    std::vector<std::vector<std::string>> sentences;  // per doc, one sentence
    for (int d = 0; d < 8; ++d) {
      std::string text;
      std::vector<std::string> toks;
      const int len = 1 + static_cast<int>(rng.uniform_index(12));
      for (int i = 0; i < len; ++i) {
        toks.push_back(words[rng.uniform_index(3)]);
        text += toks.back() + " ";
      }
      specs.push_back({static_cast<int>(rng.uniform_index(4)), text + ".", ""});
      sentences.push_back(toks);
    }
    const Corpus c = make_corpus(specs);
    const std::vector<std::string> phrases = {"a", "a b", "b a b", "c c"};
    const auto index = OccurrenceIndex::build(c, phrases);
    for (const auto& p : phrases) {
      const auto target = tokenize(p);
      std::map<int, std::size_t> by_day;
      std::size_t total = 0;
      for (std::size_t d = 0; d < sentences.size(); ++d) {
        std::size_t n = 0;
        const auto& s = sentences[d];
        for (std::size_t i = 0; i + target.size() <= s.size(); ++i) {
          n += std::equal(target.begin(), target.end(), s.begin() + i);
        }
        CHECK(index.doc_freq(p, d) == n);
        by_day[c[d].day] += n;
        total += n;
      }
      for (int day = 0; day < 4; ++day) {
        CHECK(index.day_freq(p, day) == by_day[day]);
      }
      CHECK(index.total_freq(p) == total);
      CHECK(index.doc_presence(p).empty() == index.day_presence(p).empty());
    }
  }
}

}  // namespace
}  // namespace keyevent
