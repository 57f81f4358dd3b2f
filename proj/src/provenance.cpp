#include "causalflip/provenance.hpp"

#include <filesystem>

#include "causalflip/errors.hpp"
#include "causalflip/util/strings.hpp"

namespace causalflip {

std::string provenance_path(const std::string& artifact_path) { return artifact_path + ".provenance.json"; }

nlohmann::ordered_json to_json(const ProvenanceRecord& record) {
  nlohmann::ordered_json doc;
  doc["tool"] = record.tool;
  doc["version"] = record.version;
  doc["command"] = record.command;
  doc["seed"] = record.seed ? nlohmann::ordered_json(*record.seed) : nlohmann::ordered_json(nullptr);
  doc["config_hash"] = record.config_hash;
  doc["parameters"] = record.parameters;
  auto inputs = nlohmann::ordered_json::array();
  for (const auto& [path, digest] : record.inputs) inputs.push_back({{"path", path}, {"sha256", digest}});
  doc["inputs"] = inputs;
  doc["replacement_rounds"] = record.replacement_rounds;
  doc["artifact_sha256"] = record.artifact_sha256;
  doc["generated_at"] = record.generated_at;
  return doc;
}

ProvenanceRecord provenance_from_json(const nlohmann::json& doc) {
  ProvenanceRecord record;
  try {
    record.tool = doc.value("tool", record.tool);
    record.version = doc.value("version", "");
    record.command = doc.value("command", "");
    if (doc.contains("seed") && !doc["seed"].is_null()) record.seed = doc["seed"].get<std::uint64_t>();
    record.config_hash = doc.value("config_hash", "");
    if (doc.contains("parameters")) record.parameters = nlohmann::ordered_json(doc["parameters"]);
    for (const auto& input : doc.value("inputs", nlohmann::json::array())) {
      record.inputs.emplace_back(input.at("path").get<std::string>(), input.at("sha256").get<std::string>());
    }
    record.replacement_rounds = doc.value("replacement_rounds", std::vector<std::string>{});
    record.artifact_sha256 = doc.value("artifact_sha256", "");
    record.generated_at = doc.value("generated_at", "");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("provenance record: ") + e.what());
  }
  return record;
}

void write_provenance(const std::string& artifact_path, const ProvenanceRecord& record) {
  util::write_file(provenance_path(artifact_path), to_json(record).dump(2) + "\n");
}

std::optional<ProvenanceRecord> read_provenance(const std::string& artifact_path) {
  const auto path = provenance_path(artifact_path);
  if (!std::filesystem::exists(path)) return std::nullopt;
  try {
    return provenance_from_json(nlohmann::json::parse(util::read_file(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace causalflip
