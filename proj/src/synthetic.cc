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

#include "keyevent/synthetic.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>

#include "keyevent/error.h"
#include "keyevent/rng.h"

namespace keyevent {
namespace {

namespace fs = std::filesystem;

constexpr int kWindowGap = 6;  // quiet days kept between planted windows

const char* const kMonths[] = {"January", "February", "March",     "April",
                               "May",     "June",     "July",      "August",
                               "September", "October", "November", "December"};

// Pronounceable made-up words; none is an English function word, month or
// weekday, so they never trigger the date matcher.
std::vector<std::string> make_vocabulary(std::size_t n) {
  static const std::string consonants = "bdfgklmnprstvz";
  static const std::string vowels = "aeiou";
  Rng rng(0x766f636162ULL);
  std::set<std::string> seen;
  std::vector<std::string> words;
  while (words.size() < n) {
    std::string w;
    const int syllables = 2 + static_cast<int>(rng.uniform_index(2));
    for (int s = 0; s < syllables; ++s) {
      w += consonants[rng.uniform_index(consonants.size())];
      w += vowels[rng.uniform_index(vowels.size())];
    }
    if (rng.bernoulli(0.3)) w += "nrs"[rng.uniform_index(3)];
    if (seen.insert(w).second) words.push_back(w);
  }
  return words;
}

struct Draft {
  int day = 0;
  int truth = -1;  // planted event index, -1 for background
  bool redated = false;
  std::string title;
  std::string text;
};

std::string date_words(int epoch_days) {
  const CivilDate d = from_epoch_days(epoch_days);
  return "on " + std::string(kMonths[d.month - 1]) + " " + std::to_string(d.day);
}

// Sentences of filler words with each mention inserted as an unbroken unit.
std::string compose(Rng& rng, const std::vector<std::string>& filler,
                    const std::vector<std::string>& mentions,
                    const std::optional<std::string>& lead_date) {
  const std::size_t num_sentences = 5 + rng.uniform_index(4);
  std::vector<std::vector<std::string>> sentences(num_sentences);
  for (auto& s : sentences) {
    const std::size_t len = 6 + rng.uniform_index(6);
    for (std::size_t i = 0; i < len; ++i) {
      s.push_back(filler[rng.uniform_index(filler.size())]);
    }
  }
  for (const auto& m : mentions) {
    auto& s = sentences[rng.uniform_index(num_sentences)];
    s.insert(s.begin() + static_cast<std::ptrdiff_t>(rng.uniform_index(s.size() + 1)), m);
  }
  if (lead_date) {
    auto& s = sentences.front();
    s.insert(s.begin() + static_cast<std::ptrdiff_t>(1 + rng.uniform_index(s.size())),
             *lead_date);
  }
  std::string text;
  for (const auto& s : sentences) {
    std::string sentence;
    for (const auto& unit : s) {
      if (!sentence.empty()) sentence += ' ';
      sentence += unit;
    }
    sentence[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sentence[0])));
    if (!text.empty()) text += ' ';
    text += sentence + '.';
  }
  return text;
}

std::string make_title(Rng& rng, const std::vector<std::string>& filler,
                       const std::string& phrase) {
  std::string title = filler[rng.uniform_index(filler.size())];
  title[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(title[0])));
  if (!phrase.empty()) title += " " + phrase;
  for (int i = 0; i < 2; ++i) title += " " + filler[rng.uniform_index(filler.size())];
  return title;
}

Vector noisy(Vector v, Rng& rng, double sigma) {
  for (double& x : v) x += sigma * rng.normal();
  return v;
}

}  // namespace

SynthCorpus generate_synthetic(const SynthConfig& c) {
  if (c.num_events < 1 || c.docs_per_event < 1 || c.noise_docs < 0 ||
      c.span_days < 1 || c.signature_phrases < 1 || c.theme_phrases < 0 ||
      c.background_phrases < 0 || c.distractor_phrases < 0 || c.dim < 1) {
    throw UsageError("synthetic counts must be at least 1");
  }
  if (c.redate_fraction < 0.0 || c.redate_fraction > 1.0 || c.date_in_lead < 0.0 ||
      c.date_in_lead > 1.0 || c.signature_rate <= 0.0 || c.signature_rate > 1.0) {
    throw UsageError("synthetic fractions must lie in [0, 1]");
  }
  const auto start = parse_iso_date(c.start_date);
  if (!start) throw UsageError("bad start date: " + c.start_date);
  const int start_epoch = to_epoch_days(*start);

  Rng rng(c.seed);
  const std::size_t e_count = static_cast<std::size_t>(c.num_events);
  const std::size_t sig = static_cast<std::size_t>(c.signature_phrases);
  const std::size_t phrase_words =
      2 * (2 * e_count * sig + c.theme_phrases + c.background_phrases +
           c.distractor_phrases);
  const std::vector<std::string> vocab = make_vocabulary(400 + phrase_words);
  const std::vector<std::string> filler(vocab.begin(), vocab.begin() + 400);
  std::size_t next_word = 400;
  auto new_phrase = [&] {
    std::string p = vocab[next_word] + " " + vocab[next_word + 1];
    next_word += 2;
    return p;
  };

  // Windows of 1-3 days separated by quiet gaps.
  std::vector<DaySpan> windows;
  for (std::size_t e = 0; e < e_count; ++e) {
    bool placed = false;
    for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
      const int len = 1 + static_cast<int>(rng.uniform_index(3));
      const int lo = std::min(2, c.span_days - len);
      const int hi = std::max(lo, c.span_days - len - 2);
      const int first = lo + static_cast<int>(rng.uniform_index(hi - lo + 1));
      const DaySpan w{first, first + len - 1};
      if (w.first < 0 || w.last >= c.span_days) continue;
      placed = std::none_of(windows.begin(), windows.end(), [&](const DaySpan& o) {
        return w.first <= o.last + kWindowGap && o.first <= w.last + kWindowGap;
      });
      if (placed) windows.push_back(w);
    }
    if (!placed) throw UsageError("planted windows do not fit into span_days");
  }
  std::sort(windows.begin(), windows.end(),
            [](const DaySpan& a, const DaySpan& b) { return a.first < b.first; });

  SynthCorpus out;
  for (std::size_t e = 0; e < e_count; ++e) {
    SynthEvent ev;
    ev.id = "T" + std::to_string(e + 1);
    ev.window = windows[e];
    for (std::size_t j = 0; j < sig; ++j) ev.signatures.push_back(new_phrase());
    for (std::size_t j = 0; j < sig; ++j) ev.synonyms.push_back(new_phrase());
    out.events.push_back(std::move(ev));
  }
  std::vector<std::string> themes, background, distractors;
  for (int i = 0; i < c.theme_phrases; ++i) themes.push_back(new_phrase());
  for (int i = 0; i < c.background_phrases; ++i) background.push_back(new_phrase());
  for (int i = 0; i < c.distractor_phrases; ++i) distractors.push_back(new_phrase());

  auto in_any_window = [&](int day, int margin) {
    return std::any_of(windows.begin(), windows.end(), [&](const DaySpan& w) {
      return day >= w.first - margin && day <= w.last + margin;
    });
  };

  auto shared_mentions = [&](std::vector<std::string>& mentions) {
    for (const auto& p : themes) {
      if (rng.bernoulli(0.85)) mentions.push_back(p);
    }
    for (const auto& p : background) {
      if (rng.bernoulli(0.2)) mentions.push_back(p);
    }
  };

  std::vector<Draft> drafts;
  for (std::size_t e = 0; e < e_count; ++e) {
    const SynthEvent& ev = out.events[e];
    const std::size_t n = static_cast<std::size_t>(c.docs_per_event);
    const auto redate_count = static_cast<std::size_t>(
        std::llround(c.redate_fraction * static_cast<double>(n)));
    std::vector<bool> redate(n, false);
    for (std::size_t i : rng.sample_without_replacement(n, redate_count)) redate[i] = true;
    for (std::size_t i = 0; i < n; ++i) {
      Draft d;
      d.truth = static_cast<int>(e);
      d.redated = redate[i];
      const int event_day =
          ev.window.first + static_cast<int>(rng.uniform_index(ev.window.width()));
      d.day = event_day;
      if (d.redated) {
        bool ok = false;
        for (int attempt = 0; attempt < 10000 && !ok; ++attempt) {
          d.day = static_cast<int>(rng.uniform_index(c.span_days));
          ok = !in_any_window(d.day, 2);
        }
        if (!ok) throw UsageError("no room to re-date documents outside windows");
      }
      const auto& words = d.redated ? ev.synonyms : ev.signatures;
      std::vector<std::string> mentions;
      for (const auto& p : words) {
        if (!rng.bernoulli(c.signature_rate)) continue;
        const std::size_t times = 1 + rng.uniform_index(3);
        for (std::size_t t = 0; t < times; ++t) mentions.push_back(p);
      }
      if (mentions.empty()) mentions.push_back(words.front());
      shared_mentions(mentions);
      std::optional<std::string> lead;
      if (d.redated || rng.bernoulli(c.date_in_lead)) {
        lead = date_words(start_epoch + event_day);
      }
      d.title = make_title(rng, filler, words[rng.uniform_index(words.size())]);
      d.text = compose(rng, filler, mentions, lead);
      drafts.push_back(std::move(d));
    }
  }
  for (int i = 0; i < c.noise_docs; ++i) {
    Draft d;
    d.day = static_cast<int>(rng.uniform_index(c.span_days));
    std::vector<std::string> mentions;
    shared_mentions(mentions);
    for (const auto& p : distractors) {
      if (rng.bernoulli(0.05)) mentions.push_back(p);
    }
    d.title = make_title(rng, filler, "");
    d.text = compose(rng, filler, mentions, std::nullopt);
    drafts.push_back(std::move(d));
  }

  // Ids follow publication order so they carry no trace of the truth.
  std::vector<std::size_t> order(drafts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return drafts[a].day < drafts[b].day;
  });

  const std::size_t d_dim =
      std::max<std::size_t>(static_cast<std::size_t>(c.dim), e_count + 3);
  const std::size_t theme_slot = d_dim - 1;
  const std::size_t bg_first = e_count;
  const std::size_t bg_count = d_dim - 1 - e_count;

  int origin = start_epoch + drafts[order.front()].day;
  std::vector<Document> docs;
  out.truth.events.resize(e_count);
  for (std::size_t e = 0; e < e_count; ++e) out.truth.events[e].id = out.events[e].id;
  out.doc_vectors = EmbeddingTable(d_dim);
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    const Draft& d = drafts[order[rank]];
    char id[24];
    std::snprintf(id, sizeof(id), "d%04zu", rank + 1);
    docs.push_back(make_document(id, from_epoch_days(start_epoch + d.day), d.title,
                                 d.text, origin));
    Vector v(d_dim, 0.0);
    v[theme_slot] = 0.5;
    if (d.truth >= 0) {
      v[static_cast<std::size_t>(d.truth)] = 1.0;
      out.truth.events[static_cast<std::size_t>(d.truth)].doc_ids.insert(id);
      if (d.redated) out.redated.push_back(id);
    } else {
      v[bg_first + rng.uniform_index(bg_count)] = 1.0;
    }
    out.doc_vectors.insert(id, noisy(std::move(v), rng, c.doc_noise));
  }
  out.corpus = Corpus(std::move(docs), origin);
  for (auto& ev : out.events) {
    ev.window.first = out.corpus.day_of(start_epoch + ev.window.first);
    ev.window.last = out.corpus.day_of(start_epoch + ev.window.last);
  }

  const std::size_t p_dim = 2 * d_dim;
  out.phrase_vectors = EmbeddingTable(p_dim);
  auto slot_pair = [&](std::size_t slot) {
    Vector v(p_dim, 0.0);
    v[slot] = 1.0;
    v[d_dim + slot] = 1.0;
    return v;
  };
  for (std::size_t e = 0; e < e_count; ++e) {
    const SynthEvent& ev = out.events[e];
    for (std::size_t j = 0; j < sig; ++j) {
      out.phrase_vectors.insert(ev.signatures[j],
                                noisy(slot_pair(e), rng, c.phrase_noise));
      Vector syn = slot_pair(e);
      syn[bg_first + (e + j) % bg_count] += 0.6;
      out.phrase_vectors.insert(ev.synonyms[j], noisy(std::move(syn), rng, c.phrase_noise));
      out.phrases.push_back(ev.signatures[j]);
      out.phrases.push_back(ev.synonyms[j]);
    }
  }
  for (const auto& p : themes) {
    out.phrase_vectors.insert(p, noisy(slot_pair(theme_slot), rng, c.phrase_noise));
    out.phrases.push_back(p);
  }
  for (const auto& p : background) {
    out.phrase_vectors.insert(p, noisy(Vector(p_dim, 0.0), rng, 1.0));
    out.phrases.push_back(p);
  }
  for (const auto& p : distractors) {
    out.phrase_vectors.insert(p, noisy(Vector(p_dim, 0.0), rng, 1.0));
    out.phrases.push_back(p);
  }
  std::sort(out.phrases.begin(), out.phrases.end());

  nlohmann::json events = nlohmann::json::array();
  for (const auto& ev : out.events) {
    events.push_back({{"id", ev.id},
                      {"start", format_iso(out.corpus.date_of(ev.window.first))},
                      {"end", format_iso(out.corpus.date_of(ev.window.last))},
                      {"signatures", ev.signatures},
                      {"synonyms", ev.synonyms}});
  }
  out.metadata = {
      {"seed", c.seed},
      {"num_events", c.num_events},
      {"docs_per_event", c.docs_per_event},
      {"noise_docs", c.noise_docs},
      {"span_days", c.span_days},
      {"start_date", c.start_date},
      {"redate_fraction", c.redate_fraction},
      {"date_in_lead", c.date_in_lead},
      {"signature_rate", c.signature_rate},
      {"events", events},
      {"theme_phrases", themes},
      {"background_phrases", background},
      {"distractor_phrases", distractors},
      {"redated_docs", out.redated},
      {"doc_vectors",
       {{"dim", d_dim},
        {"event_doc", "onehot(event index) + 0.5*onehot(theme slot) + N(0, doc_noise)"},
        {"background_doc",
         "onehot(random background slot) + 0.5*onehot(theme slot) + N(0, doc_noise)"},
        {"event_slots", "0 .. num_events-1"},
        {"background_slots", "num_events .. dim-2"},
        {"theme_slot", theme_slot},
        {"doc_noise", c.doc_noise}}},
      {"phrase_vectors",
       {{"dim", p_dim},
        {"signature", "[onehot(event) ; onehot(event)] + N(0, phrase_noise)"},
        {"synonym", "signature direction + 0.6*onehot(background slot) + N(0, phrase_noise)"},
        {"theme", "[onehot(theme slot) ; onehot(theme slot)] + N(0, phrase_noise)"},
        {"background", "N(0, 1) per dimension"},
        {"distractor", "N(0, 1) per dimension"},
        {"phrase_noise", c.phrase_noise}}},
      {"text",
       {{"event_doc",
         "each signature (synonym when re-dated) w.p. signature_rate, 1-3 mentions; each theme "
         "phrase w.p. 0.85; each background phrase w.p. 0.2; event date in the first sentence w.p. date_in_lead "
         "(always when re-dated)"},
        {"background_doc",
         "each theme phrase w.p. 0.85; each background phrase w.p. 0.2; each "
         "distractor w.p. 0.05"},
        {"redated_doc", "published at least 3 days from every planted window"}}}};
  return out;
}

void write_synthetic(const SynthCorpus& synth, const fs::path& dir) {
  fs::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw DataError("cannot write " + (dir / name).string());
    return out;
  };
  {
    auto out = open("corpus.jsonl");
    write_corpus(synth.corpus, out);
  }
  {
    auto out = open("truth.jsonl");
    write_ground_truth(synth.truth, out);
  }
  {
    auto out = open("phrases.txt");
    for (const auto& p : synth.phrases) out << p << '\n';
  }
  save_embeddings(synth.phrase_vectors, dir / "phrase_vectors.tsv");
  save_embeddings(synth.doc_vectors, dir / "doc_vectors.tsv");
  {
    auto out = open("synth_meta.json");
    out << synth.metadata.dump(2) << '\n';
  }
}

}  // namespace keyevent
