#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace causalflip {

// Sidecar written next to every artifact as "<artifact>.provenance.json".
// Timestamps live here only, so artifacts stay byte-comparable.
struct ProvenanceRecord {
  std::string tool = "causalflip";
  std::string version;
  std::string command;
  std::optional<std::uint64_t> seed;
  std::string config_hash;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256
  std::vector<std::string> replacement_rounds;
  std::string artifact_sha256;
  std::string generated_at;
};

std::string provenance_path(const std::string& artifact_path);

nlohmann::ordered_json to_json(const ProvenanceRecord& record);
ProvenanceRecord provenance_from_json(const nlohmann::json& doc);

void write_provenance(const std::string& artifact_path, const ProvenanceRecord& record);
std::optional<ProvenanceRecord> read_provenance(const std::string& artifact_path);

}  // namespace causalflip
