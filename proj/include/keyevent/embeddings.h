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

// Phrase and document vectors: the TSV vector file, an on-disk cache, and the
// HTTP client for the embedding service.
//
// Vector file:
//   dim<TAB>D
//   key<TAB>f1<TAB>...<TAB>fD
// Keys may contain spaces but not tabs.
//
// Service protocol (JSON over HTTP):
//   POST /v1/embed/phrase    {"model", "key", "phrase", "mentions": [
//                              {"tokens": [...], "start": i, "end": j}]}
//   POST /v1/embed/document  {"model", "key", "sentences": [...]}
//   200 -> {"key", "vector": [...]}; 404 -> unknown key; 5xx -> retried.

#ifndef KEYEVENT_EMBEDDINGS_H_
#define KEYEVENT_EMBEDDINGS_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "keyevent/corpus.h"

namespace keyevent {

using Vector = std::vector<double>;

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  // 0 until the first vector fixes it.
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }

  bool contains(std::string_view key) const;
  const Vector* find(std::string_view key) const;
  // Throws DataError naming the key when absent.
  const Vector& at(std::string_view key) const;

  // Throws DataError on a duplicate key or a dimension mismatch.
  void insert(std::string key, Vector vector);

  const std::map<std::string, Vector, std::less<>>& entries() const {
    return vectors_;
  }

 private:
  std::size_t dim_ = 0;
  std::map<std::string, Vector, std::less<>> vectors_;
};

EmbeddingTable read_embeddings(std::istream& in);
EmbeddingTable load_embeddings(const std::filesystem::path& path);
void write_embeddings(const EmbeddingTable& table, std::ostream& out);
void save_embeddings(const EmbeddingTable& table,
                     const std::filesystem::path& path);

// a.b / (|a||b|); 0 when either vector is zero. Throws UsageError on a
// dimension mismatch.
double cosine(std::span<const double> a, std::span<const double> b);

// Element-wise mean of equally sized vectors.
Vector mean_vector(std::span<const Vector> vectors);

// ---------------------------------------------------------------------------
// Disk cache, one file per key, named by a content hash of (model id, key).

class EmbeddingCache {
 public:
  EmbeddingCache(std::filesystem::path dir, std::string model_id);

  std::optional<Vector> get(std::string_view key) const;
  void put(std::string_view key, std::span<const double> vector) const;
  std::filesystem::path path_for(std::string_view key) const;

 private:
  std::filesystem::path dir_;
  std::string model_id_;
};

// ---------------------------------------------------------------------------
// Service client

struct ServiceEndpoint {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string model_id = "default";

  // Accepts "host:port" or "http://host:port".
  static ServiceEndpoint parse(std::string_view address);
};

enum class EmbedKind { kPhrase, kDocument };

struct EmbedRequest {
  std::string key;
  nlohmann::json payload;  // kind-specific body fields
};

// Mentions of `phrase` across the corpus as sentence tokens plus a
// [start, end) token span, capped at `max_mentions` (first ones in corpus
// order).
EmbedRequest phrase_request(std::string_view phrase, const Corpus& corpus,
                            std::size_t max_mentions = 200);
// Lead-3 sentences (all of them when the document is shorter).
EmbedRequest document_request(const Document& doc);

struct FetchOptions {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{50};
  std::size_t max_in_flight = 4;
  std::chrono::seconds timeout{10};
  const EmbeddingCache* cache = nullptr;
};

struct FetchResult {
  std::vector<std::string> fetched;   // served by the endpoint
  std::vector<std::string> cached;    // read from the disk cache
  std::vector<std::string> missing;   // endpoint reported unknown
  std::size_t network_requests = 0;   // including retries
};

// Extends `table` with vectors for every request key it lacks. Keys already
// present are skipped without any network traffic. Transport failures and
// 5xx responses are retried with exponential backoff; a key that still fails
// raises ServiceError.
FetchResult fetch_missing(EmbeddingTable& table, EmbedKind kind,
                          std::span<const EmbedRequest> requests,
                          const ServiceEndpoint& endpoint,
                          const FetchOptions& options = {});

}  // namespace keyevent

#endif  // KEYEVENT_EMBEDDINGS_H_
