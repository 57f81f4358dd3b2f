#include "causalflip/eval/provider.hpp"

#include <cstdlib>
#include <optional>

#include <fmt/format.h>

#include "causalflip/errors.hpp"
#include "causalflip/util/jsonl.hpp"

namespace causalflip {

namespace {

using util::TransportError;

std::optional<std::string> env(const char* name) {
  if (const char* v = std::getenv(name); v != nullptr && *v != '\0') return std::string(v);
  return std::nullopt;
}

nlohmann::json decode_json(const DecodeParams& d) {
  return {{"strategy", d.strategy}, {"temperature", d.temperature}, {"top_p", d.top_p}};
}

}  // namespace

nlohmann::json to_json(const InferenceRequest& request) {
  return {{"id", request.id},
          {"prompt", request.prompt},
          {"max_new_tokens", request.max_new_tokens},
          {"decode", decode_json(request.decode)}};
}

std::vector<InferenceResponse> RemoteInferenceProvider::generate(std::span<const InferenceRequest> requests) {
  nlohmann::json body;
  auto& list = body["requests"] = nlohmann::json::array();
  for (const auto& r : requests) list.push_back(to_json(r));

  const auto reply = transport_->post(body);
  const auto it = reply.find("responses");
  if (!reply.is_object() || it == reply.end() || !it->is_array()) {
    throw TransportError(TransportError::Kind::BadPayload, "reply has no \"responses\" array");
  }
  std::vector<InferenceResponse> out;
  out.reserve(it->size());
  for (const auto& item : *it) {
    if (!item.is_object() || !item.contains("id") || !item["id"].is_string() || !item.contains("completion") ||
        !item["completion"].is_string()) {
      throw TransportError(TransportError::Kind::BadPayload, "response entries need string \"id\" and \"completion\"");
    }
    out.push_back({item["id"].get<std::string>(), item["completion"].get<std::string>()});
  }
  return out;
}

TableInferenceProvider TableInferenceProvider::load(const std::string& path) {
  std::map<std::string, std::string> completions;
  util::for_each_jsonl(path, [&](const nlohmann::json& record, std::size_t line) {
    auto id = util::require_string(record, "id", line);
    auto completion = util::require_string(record, "completion", line);
    if (!completions.emplace(std::move(id), std::move(completion)).second) {
      throw ParseError("duplicate id in completion table", line);
    }
  });
  return TableInferenceProvider(std::move(completions));
}

std::vector<InferenceResponse> TableInferenceProvider::generate(std::span<const InferenceRequest> requests) {
  std::vector<InferenceResponse> out;
  out.reserve(requests.size());
  for (const auto& r : requests) {
    const auto it = completions_.find(r.id);
    if (it == completions_.end()) {
      throw TransportError(TransportError::Kind::BadPayload, fmt::format("no stored completion for {}", r.id));
    }
    out.push_back({r.id, it->second});
  }
  return out;
}

std::unique_ptr<InferenceProvider> make_inference_provider(const nlohmann::json& config) {
  if (!config.is_object()) throw ConfigError("provider config must be a JSON object");
  const auto type = config.value("type", std::string());
  if (type == "http") {
    util::HttpOptions options;
    options.base_url = env("CAUSALFLIP_PROVIDER_URL").value_or(config.value("url", std::string()));
    if (options.base_url.empty()) throw ConfigError("http provider needs \"url\"");
    options.path = config.value("path", std::string("/generate"));
    options.timeout = std::chrono::milliseconds(config.value("timeout_ms", 120000));
    options.bearer_token = env("CAUSALFLIP_PROVIDER_TOKEN");
    if (!options.bearer_token && config.contains("token")) options.bearer_token = config["token"].get<std::string>();
    return std::make_unique<RemoteInferenceProvider>(util::make_http_transport(std::move(options)));
  }
  if (type == "process") {
    const auto command = config.value("command", std::string());
    if (command.empty()) throw ConfigError("process provider needs \"command\"");
    return std::make_unique<RemoteInferenceProvider>(util::make_process_transport(command));
  }
  if (type == "table") {
    const auto path = config.value("path", std::string());
    if (path.empty()) throw ConfigError("table provider needs \"path\"");
    return std::make_unique<TableInferenceProvider>(TableInferenceProvider::load(path));
  }
  throw ConfigError(fmt::format("unknown provider type \"{}\"", type));
}

ProviderSettings provider_settings(const nlohmann::json& config) {
  ProviderSettings s;
  try {
    s.max_new_tokens = config.value("max_new_tokens", s.max_new_tokens);
    if (const auto it = config.find("decode"); it != config.end()) {
      s.decode.strategy = it->value("strategy", s.decode.strategy);
      s.decode.temperature = it->value("temperature", s.decode.temperature);
      s.decode.top_p = it->value("top_p", s.decode.top_p);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("provider settings: ") + e.what());
  }
  if (s.max_new_tokens < 1) throw ConfigError("max_new_tokens must be >= 1");
  return s;
}

}  // namespace causalflip
