#include "causalflip/audit/embeddings.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <thread>

#include <fmt/format.h>

#include "causalflip/errors.hpp"
#include "causalflip/util/hash.hpp"
#include "causalflip/util/jsonl.hpp"
#include "causalflip/util/strings.hpp"

namespace causalflip {

namespace {

std::vector<double> vector_from_json(const nlohmann::json& value, std::size_t line) {
  if (!value.is_array()) throw ParseError("\"vector\" must be an array of numbers", line);
  std::vector<double> out;
  out.reserve(value.size());
  for (const auto& c : value) {
    if (!c.is_number()) throw ParseError("\"vector\" must be an array of numbers", line);
    out.push_back(c.get<double>());
  }
  return out;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::optional<std::string> env(const char* name) {
  if (const char* v = std::getenv(name); v != nullptr && *v != '\0') return std::string(v);
  return std::nullopt;
}

}  // namespace

void EmbeddingTable::insert(const std::string& id, std::vector<double> vector) {
  if (vector.empty()) throw ValidationError(fmt::format("embedding for {} is empty", id));
  if (vectors_.empty()) {
    dimension_ = vector.size();
  } else if (vector.size() != dimension_) {
    throw ValidationError(
        fmt::format("embedding for {} has dimension {}, table has {}", id, vector.size(), dimension_));
  }
  for (double c : vector) {
    if (!std::isfinite(c)) throw ValidationError(fmt::format("embedding for {} has a non-finite component", id));
  }
  vectors_[id] = std::move(vector);
}

const std::vector<double>* EmbeddingTable::find(const std::string& id) const {
  const auto it = vectors_.find(id);
  return it == vectors_.end() ? nullptr : &it->second;
}

EmbeddingTable EmbeddingTable::load(const std::string& path, std::string provider) {
  EmbeddingTable table(std::move(provider));
  util::for_each_jsonl(path, [&](const nlohmann::json& record, std::size_t line) {
    const auto id = util::require_string(record, "id", line);
    if (!record.contains("vector")) throw ParseError("missing field \"vector\"", line);
    try {
      table.insert(id, vector_from_json(record["vector"], line));
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("{}: line {}: {}", path, line, e.what()));
    }
  });
  return table;
}

void EmbeddingTable::save(const std::string& path) const {
  std::vector<util::OrderedJson> records;
  for (const auto& [id, vector] : vectors_) {
    util::OrderedJson r;
    r["id"] = id;
    r["vector"] = vector;
    records.push_back(std::move(r));
  }
  util::write_jsonl(path, records);
}

std::string HashingEmbeddingProvider::tag() const { return fmt::format("hashing-{}", dimension_); }

std::vector<EmbeddingResult> HashingEmbeddingProvider::embed(std::span<const EmbeddingItem> items) {
  std::vector<EmbeddingResult> out;
  out.reserve(items.size());
  for (const auto& item : items) {
    std::vector<double> v(dimension_, 0.0);
    const auto tokens = words(item.text);
    const auto add = [&](const std::string& feature) {
      const auto h = fnv1a(feature);
      v[h % dimension_] += (h >> 63) != 0 ? -1.0 : 1.0;
    };
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      add(tokens[i]);
      if (i + 1 < tokens.size()) add(tokens[i] + " " + tokens[i + 1]);
    }
    double sq = 0.0;
    for (double c : v) sq += c * c;
    if (sq > 0.0) {
      const double norm = std::sqrt(sq);
      for (double& c : v) c /= norm;
    }
    out.push_back({item.id, std::move(v)});
  }
  return out;
}

std::vector<EmbeddingResult> RemoteEmbeddingProvider::embed(std::span<const EmbeddingItem> items) {
  nlohmann::json request;
  request["items"] = nlohmann::json::array();
  for (const auto& item : items) request["items"].push_back({{"id", item.id}, {"text", item.text}});
  const auto response = transport_->post(request);
  std::vector<EmbeddingResult> out;
  try {
    for (const auto& entry : response.at("items")) {
      out.push_back({entry.at("id").get<std::string>(), vector_from_json(entry.at("vector"), 0)});
    }
  } catch (const std::exception& e) {
    throw util::TransportError(util::TransportError::Kind::BadPayload,
                               fmt::format("{}: malformed embedding response ({})", transport_->describe(), e.what()));
  }
  return out;
}

std::unique_ptr<EmbeddingProvider> make_embedding_provider(const nlohmann::json& config) {
  const auto type = config.value("type", std::string("hashing"));
  if (type == "hashing") {
    return std::make_unique<HashingEmbeddingProvider>(config.value("dimension", std::size_t{256}));
  }
  if (type == "http") {
    util::HttpOptions options;
    options.base_url = env("CAUSALFLIP_EMBEDDING_URL").value_or(config.value("url", std::string()));
    if (options.base_url.empty()) throw ConfigError("http embedding provider needs \"url\"");
    options.path = config.value("path", std::string("/embed"));
    options.timeout = std::chrono::milliseconds(config.value("timeout_ms", 30000));
    options.bearer_token = env("CAUSALFLIP_EMBEDDING_TOKEN");
    if (!options.bearer_token && config.contains("token")) options.bearer_token = config["token"].get<std::string>();
    const auto tag = config.value("tag", "http:" + options.base_url + options.path);
    return std::make_unique<RemoteEmbeddingProvider>(tag, util::make_http_transport(std::move(options)));
  }
  if (type == "process") {
    const auto command = config.value("command", std::string());
    if (command.empty()) throw ConfigError("process embedding provider needs \"command\"");
    const auto tag = config.value("tag", "process:" + command);
    return std::make_unique<RemoteEmbeddingProvider>(tag, util::make_process_transport(command));
  }
  throw ConfigError(fmt::format("unknown embedding provider type \"{}\"", type));
}

EmbeddingCache EmbeddingCache::load(const std::string& path) {
  EmbeddingCache cache;
  if (!std::ifstream(path)) return cache;
  util::for_each_jsonl(path, [&](const nlohmann::json& record, std::size_t line) {
    cache.entries_[{util::require_string(record, "provider", line), util::require_string(record, "text_hash", line)}] =
        vector_from_json(record.value("vector", nlohmann::json()), line);
  });
  return cache;
}

void EmbeddingCache::save(const std::string& path) const {
  std::lock_guard lock(mutex_);
  std::vector<util::OrderedJson> records;
  for (const auto& [key, vector] : entries_) {
    util::OrderedJson r;
    r["text_hash"] = key.second;
    r["provider"] = key.first;
    r["vector"] = vector;
    records.push_back(std::move(r));
  }
  util::write_jsonl(path, records);
}

std::optional<std::vector<double>> EmbeddingCache::lookup(const std::string& provider,
                                                          const std::string& text_hash) const {
  std::lock_guard lock(mutex_);
  const auto it = entries_.find({provider, text_hash});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void EmbeddingCache::insert(const std::string& provider, const std::string& text_hash, std::vector<double> vector) {
  std::lock_guard lock(mutex_);
  entries_[{provider, text_hash}] = std::move(vector);
}

std::size_t EmbeddingCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

EmbeddingTable fetch_embeddings(const std::vector<QuestionInstance>& questions, EmbeddingProvider& provider,
                                EmbeddingCache* cache, const FetchOptions& options) {
  const auto tag = provider.tag();
  // Requests are keyed by text hash so repeated texts are fetched once.
  std::map<std::string, std::string> misses;
  std::map<std::string, std::vector<double>> by_hash;
  std::vector<std::string> hashes;
  hashes.reserve(questions.size());
  for (const auto& q : questions) {
    auto h = util::sha256_hex(q.question_text);
    if (!by_hash.contains(h)) {
      if (auto hit = cache != nullptr ? cache->lookup(tag, h) : std::nullopt) {
        by_hash[h] = std::move(*hit);
      } else {
        misses.emplace(h, q.question_text);
      }
    }
    hashes.push_back(std::move(h));
  }

  std::vector<std::vector<EmbeddingItem>> batches;
  const auto batch_size = std::max<std::size_t>(options.batch_size, 1);
  for (const auto& [h, text] : misses) {
    if (batches.empty() || batches.back().size() >= batch_size) batches.emplace_back();
    batches.back().push_back({h, text});
  }

  std::mutex results_mutex;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  const auto worker = [&] {
    for (auto i = next++; i < batches.size() && !failed; i = next++) {
      try {
        auto results = util::with_retries(options.retry, [&] { return provider.embed(batches[i]); });
        std::lock_guard lock(results_mutex);
        for (auto& r : results) {
          if (cache != nullptr) cache->insert(tag, r.id, r.vector);
          by_hash[r.id] = std::move(r.vector);
        }
      } catch (...) {
        std::lock_guard lock(results_mutex);
        if (!failed.exchange(true)) first_error = std::current_exception();
      }
    }
  };
  {
    const auto threads = std::min(std::max<std::size_t>(options.max_in_flight, 1), batches.size());
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);

  EmbeddingTable table(tag);
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const auto it = by_hash.find(hashes[i]);
    if (it == by_hash.end()) {
      throw CoverageError(fmt::format("provider {} returned no vector for question {}", tag, questions[i].id));
    }
    table.insert(questions[i].id, it->second);
  }
  return table;
}

}  // namespace causalflip
