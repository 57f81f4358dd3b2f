#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalflip/util/transport.hpp"

namespace causalflip {

struct DecodeParams {
  std::string strategy = "greedy";
  double temperature = 0.0;
  double top_p = 1.0;
};

struct InferenceRequest {
  std::string id;
  std::string prompt;
  int max_new_tokens = 128;
  DecodeParams decode;
};

struct InferenceResponse {
  std::string id;
  std::string completion;
};

class InferenceProvider {
 public:
  virtual ~InferenceProvider() = default;
  // Responses may come back in any order. Transport failures surface as
  // util::TransportError; a malformed reply as TransportError(BadPayload).
  virtual std::vector<InferenceResponse> generate(std::span<const InferenceRequest> requests) = 0;
  virtual std::string describe() const = 0;
};

nlohmann::json to_json(const InferenceRequest& request);

// Batch generation wire format shared with the model server:
//   request  {"requests": [{"id", "prompt", "max_new_tokens", "decode": {...}}]}
//   response {"responses": [{"id", "completion"}]}
class RemoteInferenceProvider final : public InferenceProvider {
 public:
  explicit RemoteInferenceProvider(std::unique_ptr<util::JsonTransport> transport)
      : transport_(std::move(transport)) {}
  std::vector<InferenceResponse> generate(std::span<const InferenceRequest> requests) override;
  std::string describe() const override { return transport_->describe(); }

 private:
  std::unique_ptr<util::JsonTransport> transport_;
};

// Canned completions by question id, for replaying stored outputs. Unknown
// ids raise TransportError(BadPayload).
class TableInferenceProvider final : public InferenceProvider {
 public:
  explicit TableInferenceProvider(std::map<std::string, std::string> completions)
      : completions_(std::move(completions)) {}
  // JSONL of {"id", "completion"}.
  static TableInferenceProvider load(const std::string& path);
  std::vector<InferenceResponse> generate(std::span<const InferenceRequest> requests) override;
  std::string describe() const override { return "table"; }

 private:
  std::map<std::string, std::string> completions_;
};

struct ProviderSettings {
  int max_new_tokens = 128;
  DecodeParams decode;
};

// Config: {"type": "http", "url": ..., "path": "/generate", "timeout_ms": ...}
//       | {"type": "process", "command": ...}
//       | {"type": "table", "path": ...}
// plus optional "max_new_tokens" and "decode". CAUSALFLIP_PROVIDER_URL and
// CAUSALFLIP_PROVIDER_TOKEN override the http url and bearer token.
std::unique_ptr<InferenceProvider> make_inference_provider(const nlohmann::json& config);
ProviderSettings provider_settings(const nlohmann::json& config);

}  // namespace causalflip
