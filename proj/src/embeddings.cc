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

#include "keyevent/embeddings.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "keyevent/error.h"
#include "keyevent/format.h"
#include "keyevent/rng.h"

namespace keyevent {

using json = nlohmann::json;

bool EmbeddingTable::contains(std::string_view key) const {
  return vectors_.find(key) != vectors_.end();
}

const Vector* EmbeddingTable::find(std::string_view key) const {
  const auto it = vectors_.find(key);
  return it == vectors_.end() ? nullptr : &it->second;
}

const Vector& EmbeddingTable::at(std::string_view key) const {
  const Vector* v = find(key);
  if (!v) throw DataError("no embedding for '" + std::string(key) + "'");
  return *v;
}

void EmbeddingTable::insert(std::string key, Vector vector) {
  if (dim_ == 0) dim_ = vector.size();
  if (vector.size() != dim_) {
    throw DataError("embedding for '" + key + "' has dimension " +
                    std::to_string(vector.size()) + ", expected " +
                    std::to_string(dim_));
  }
  if (key.find('\t') != std::string::npos) {
    throw DataError("embedding key contains a tab: '" + key + "'");
  }
  const auto [it, inserted] = vectors_.emplace(std::move(key), std::move(vector));
  if (!inserted) throw DataError("duplicate embedding key '" + it->first + "'");
}

EmbeddingTable read_embeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("vector file is empty");
  const auto header = split_tabs(line);
  if (header.size() != 2 || header[0] != "dim") {
    throw DataError("vector file must start with \"dim<TAB>D\"");
  }
  const std::size_t dim = parse_size(header[1], "dim", 1);
  if (dim == 0) throw DataError("vector dimension must be positive");
  EmbeddingTable table(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    Vector v;
    v.reserve(fields.size() - 1);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      v.push_back(parse_double(fields[i], "vector component", line_no));
    }
    if (v.size() != dim) {
      throw DataError("vector file line " + std::to_string(line_no) +
                      ": dimension mismatch for key '" + fields[0] + "' (" +
                      std::to_string(v.size()) + " vs " + std::to_string(dim) +
                      ")");
    }
    table.insert(std::move(fields[0]), std::move(v));
  }
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vector file " + path.string());
  return read_embeddings(in);
}

void write_embeddings(const EmbeddingTable& table, std::ostream& out) {
  out << "dim\t" << table.dim() << '\n';
  for (const auto& [key, v] : table.entries()) {
    out << key;
    for (double x : v) out << '\t' << format_double(x);
    out << '\n';
  }
}

void save_embeddings(const EmbeddingTable& table,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write vector file " + path.string());
  write_embeddings(table, out);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw UsageError("cosine of vectors with different dimensions");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

Vector mean_vector(std::span<const Vector> vectors) {
  if (vectors.empty()) return {};
  Vector out(vectors.front().size(), 0.0);
  for (const auto& v : vectors) {
    if (v.size() != out.size()) throw UsageError("mean of unequal vectors");
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += v[i];
  }
  for (double& x : out) x /= static_cast<double>(vectors.size());
  return out;
}

// ---------------------------------------------------------------------------

EmbeddingCache::EmbeddingCache(std::filesystem::path dir, std::string model_id)
    : dir_(std::move(dir)), model_id_(std::move(model_id)) {}

std::filesystem::path EmbeddingCache::path_for(std::string_view key) const {
  std::uint64_t h = fnv1a64(model_id_);
  h = fnv1a64(std::string_view("\x1f", 1), h);
  h = fnv1a64(key, h);
  char name[32];
  std::snprintf(name, sizeof(name), "%016llx.vec",
                static_cast<unsigned long long>(h));
  return dir_ / name;
}

std::optional<Vector> EmbeddingCache::get(std::string_view key) const {
  std::ifstream in(path_for(key));
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;
  const auto fields = split_tabs(line);
  if (fields.empty() || fields[0] != key) return std::nullopt;  // collision
  Vector v;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    v.push_back(parse_double(fields[i], "cached component", 1));
  }
  return v;
}

void EmbeddingCache::put(std::string_view key,
                         std::span<const double> vector) const {
  std::filesystem::create_directories(dir_);
  const auto target = path_for(key);
  const auto tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DataError("cannot write cache file " + tmp);
    out << key;
    for (double x : vector) out << '\t' << format_double(x);
    out << '\n';
  }
  std::filesystem::rename(tmp, target);
}

// ---------------------------------------------------------------------------

ServiceEndpoint ServiceEndpoint::parse(std::string_view address) {
  std::string_view rest = address;
  if (rest.rfind("http://", 0) == 0) rest.remove_prefix(7);
  while (!rest.empty() && rest.back() == '/') rest.remove_suffix(1);
  const auto colon = rest.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw UsageError("endpoint must look like host:port, got '" +
                     std::string(address) + "'");
  }
  ServiceEndpoint ep;
  ep.host = std::string(rest.substr(0, colon));
  const auto port = parse_int(rest.substr(colon + 1), "port", 0);
  if (port <= 0 || port > 65535) throw UsageError("endpoint port out of range");
  ep.port = static_cast<int>(port);
  return ep;
}

EmbedRequest phrase_request(std::string_view phrase, const Corpus& corpus,
                            std::size_t max_mentions) {
  const Tokens target = tokenize(phrase);
  EmbedRequest req;
  req.key = join_tokens(target);
  json mentions = json::array();
  for (const Document& doc : corpus.documents()) {
    for (const auto& sentence : doc.sentences) {
      for (std::size_t i = 0; !target.empty() && i + target.size() <= sentence.size();
           ++i) {
        if (!std::equal(target.begin(), target.end(), sentence.begin() + i)) {
          continue;
        }
        if (mentions.size() >= max_mentions) break;
        mentions.push_back({{"tokens", sentence},
                            {"start", i},
                            {"end", i + target.size()}});
      }
    }
  }
  req.payload = {{"phrase", req.key}, {"mentions", std::move(mentions)}};
  return req;
}

EmbedRequest document_request(const Document& doc) {
  json sentences = json::array();
  for (std::size_t i = 0; i < doc.raw_sentences.size() && i < 3; ++i) {
    sentences.push_back(doc.raw_sentences[i]);
  }
  return {doc.id, {{"sentences", std::move(sentences)}}};
}

namespace {

enum class Outcome { kVector, kUnknown };

struct Reply {
  Outcome outcome = Outcome::kUnknown;
  Vector vector;
};

Reply request_one(const ServiceEndpoint& ep, const char* path,
                  const EmbedRequest& req, const FetchOptions& options,
                  std::atomic<std::size_t>& counter) {
  json body = req.payload;
  body["model"] = ep.model_id;
  body["key"] = req.key;
  const std::string payload = body.dump();

  std::string last_error = "no attempt made";
  auto backoff = options.initial_backoff;
  for (int attempt = 0; attempt < options.attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(ep.host, ep.port);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    ++counter;
    auto res = client.Post(path, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 404) return {Outcome::kUnknown, {}};
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ServiceError("embedding service rejected '" + req.key + "': HTTP " +
                         std::to_string(res->status) + " " + res->body);
    }
    try {
      const json reply = json::parse(res->body);
      return {Outcome::kVector, reply.at("vector").get<Vector>()};
    } catch (const json::exception& e) {
      throw ServiceError("malformed reply for '" + req.key + "': " + e.what());
    }
  }
  throw ServiceError("embedding service " + ep.host + ":" +
                     std::to_string(ep.port) + " unreachable for '" + req.key +
                     "' after " + std::to_string(options.attempts) +
                     " attempts (" + last_error + ")");
}

}  // namespace

FetchResult fetch_missing(EmbeddingTable& table, EmbedKind kind,
                          std::span<const EmbedRequest> requests,
                          const ServiceEndpoint& endpoint,
                          const FetchOptions& options) {
  FetchResult result;
  std::vector<const EmbedRequest*> pending;
  std::set<std::string, std::less<>> queued;
  for (const auto& req : requests) {
    if (table.contains(req.key) || !queued.insert(req.key).second) continue;
    if (options.cache) {
      if (auto v = options.cache->get(req.key)) {
        table.insert(req.key, std::move(*v));
        result.cached.push_back(req.key);
        continue;
      }
    }
    pending.push_back(&req);
  }
  if (pending.empty()) return result;

  const char* path =
      kind == EmbedKind::kPhrase ? "/v1/embed/phrase" : "/v1/embed/document";
  std::vector<Reply> replies(pending.size());
  std::vector<std::exception_ptr> errors(pending.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> counter{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pending.size(); i = next++) {
      try {
        replies[i] = request_one(endpoint, path, *pending[i], options, counter);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers =
      std::max<std::size_t>(1, std::min(options.max_in_flight, pending.size()));
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < n_workers; ++w) workers.emplace_back(worker);
  for (auto& t : workers) t.join();
  result.network_requests = counter.load();

  // Insert in request order so the table contents never depend on timing.
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    const std::string& key = pending[i]->key;
    if (replies[i].outcome == Outcome::kUnknown) {
      result.missing.push_back(key);
      continue;
    }
    if (options.cache) options.cache->put(key, replies[i].vector);
    table.insert(key, std::move(replies[i].vector));
    result.fetched.push_back(key);
  }
  return result;
}

}  // namespace keyevent
