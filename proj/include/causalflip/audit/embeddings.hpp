#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalflip/bench/question.hpp"
#include "causalflip/util/transport.hpp"

namespace causalflip {

// Dense vectors keyed by question id. All vectors share one dimension and
// have finite components.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::string provider = {}) : provider_(std::move(provider)) {}

  // Throws ValidationError on a dimension mismatch or non-finite value.
  void insert(const std::string& id, std::vector<double> vector);

  const std::vector<double>* find(const std::string& id) const;
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return vectors_.size(); }
  const std::string& provider() const { return provider_; }
  const std::map<std::string, std::vector<double>>& vectors() const { return vectors_; }

  // JSONL: {"id", "vector"} per line.
  static EmbeddingTable load(const std::string& path, std::string provider = {});
  void save(const std::string& path) const;

 private:
  std::string provider_;
  std::size_t dimension_ = 0;
  std::map<std::string, std::vector<double>> vectors_;
};

struct EmbeddingItem {
  std::string id;
  std::string text;
};

struct EmbeddingResult {
  std::string id;
  std::vector<double> vector;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string tag() const = 0;
  // One result per item, any order. May throw util::TransportError.
  virtual std::vector<EmbeddingResult> embed(std::span<const EmbeddingItem> items) = 0;
};

// Feature-hashed bag of lowercase word unigrams and bigrams, L2-normalized.
// Offline and deterministic; a stand-in when no embedding service is running.
class HashingEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HashingEmbeddingProvider(std::size_t dimension = 256) : dimension_(dimension) {}
  std::string tag() const override;
  std::vector<EmbeddingResult> embed(std::span<const EmbeddingItem> items) override;

 private:
  std::size_t dimension_;
};

// Wire format: request {"items": [{"id", "text"}]}, response
// {"items": [{"id", "vector"}]}.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
 public:
  RemoteEmbeddingProvider(std::string tag, std::unique_ptr<util::JsonTransport> transport)
      : tag_(std::move(tag)), transport_(std::move(transport)) {}
  std::string tag() const override { return tag_; }
  std::vector<EmbeddingResult> embed(std::span<const EmbeddingItem> items) override;

 private:
  std::string tag_;
  std::unique_ptr<util::JsonTransport> transport_;
};

// Config: {"type": "hashing", "dimension": 256}
//       | {"type": "http", "url": ..., "path": "/embed", "timeout_ms": ..., "tag": ...}
//       | {"type": "process", "command": ..., "tag": ...}
// CAUSALFLIP_EMBEDDING_URL and CAUSALFLIP_EMBEDDING_TOKEN override the http
// url and bearer token.
std::unique_ptr<EmbeddingProvider> make_embedding_provider(const nlohmann::json& config);

// On-disk cache: one {"text_hash", "provider", "vector"} record per line.
class EmbeddingCache {
 public:
  EmbeddingCache() = default;
  EmbeddingCache(EmbeddingCache&& other) noexcept : entries_(other.take()) {}
  EmbeddingCache& operator=(EmbeddingCache&& other) noexcept {
    if (this != &other) {
      auto taken = other.take();
      std::lock_guard lock(mutex_);
      entries_ = std::move(taken);
    }
    return *this;
  }
  static EmbeddingCache load(const std::string& path);  // missing file -> empty
  void save(const std::string& path) const;

  std::optional<std::vector<double>> lookup(const std::string& provider, const std::string& text_hash) const;
  void insert(const std::string& provider, const std::string& text_hash, std::vector<double> vector);
  std::size_t size() const;

 private:
  std::map<std::pair<std::string, std::string>, std::vector<double>> take() {
    std::lock_guard lock(mutex_);
    return std::move(entries_);
  }

  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, std::vector<double>> entries_;
};

struct FetchOptions {
  std::size_t batch_size = 32;
  std::size_t max_in_flight = 8;
  util::RetryPolicy retry;
};

// Embeds every question's text, serving hits from `cache` (may be null) and
// fetching misses in batches with bounded concurrency and retries.
EmbeddingTable fetch_embeddings(const std::vector<QuestionInstance>& questions, EmbeddingProvider& provider,
                                EmbeddingCache* cache, const FetchOptions& options = {});

}  // namespace causalflip
