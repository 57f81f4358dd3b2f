#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "causalflip/errors.hpp"

namespace causalflip::util {

// Failure talking to an external service. `retryable()` separates transient
// conditions (connection refused, timeouts, 5xx) from malformed exchanges.
class TransportError : public Error {
 public:
  enum class Kind { Unreachable, Timeout, BadStatus, BadPayload };

  TransportError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }
  bool retryable() const noexcept { return kind_ != Kind::BadPayload; }

 private:
  Kind kind_;
};

// Request/response exchange of JSON documents. Implementations must be safe
// to call from several threads at once.
class JsonTransport {
 public:
  virtual ~JsonTransport() = default;
  virtual nlohmann::json post(const nlohmann::json& body) = 0;
  virtual std::string describe() const = 0;
};

struct HttpOptions {
  std::string base_url;  // scheme://host:port
  std::string path = "/";
  std::chrono::milliseconds timeout{30000};
  std::optional<std::string> bearer_token;
};

std::unique_ptr<JsonTransport> make_http_transport(HttpOptions options);

// Runs `command` through the shell once per request, with the request JSON on
// stdin and a single JSON document expected on stdout.
std::unique_ptr<JsonTransport> make_process_transport(std::string command);

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{100};
  double multiplier = 2.0;
};

// Calls `fn` until it succeeds, a non-retryable TransportError escapes, or
// `max_attempts` is exhausted (the last error is rethrown). Sleeps
// initial_backoff * multiplier^(attempt-1) between attempts.
template <typename Fn>
auto with_retries(const RetryPolicy& policy, Fn&& fn) -> decltype(fn()) {
  auto delay = policy.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    try {
      return fn();
    } catch (const TransportError& e) {
      if (!e.retryable() || attempt >= policy.max_attempts) throw;
    }
    std::this_thread::sleep_for(delay);
    delay = std::chrono::milliseconds(static_cast<long long>(static_cast<double>(delay.count()) * policy.multiplier));
  }
}

}  // namespace causalflip::util
