#include "causalflip/audit/replace.hpp"

#include <fmt/format.h>

#include "causalflip/errors.hpp"
#include "causalflip/util/hash.hpp"
#include "causalflip/util/strings.hpp"

namespace causalflip {

std::vector<Replacement> parse_replacements(const nlohmann::json& doc) {
  std::vector<Replacement> out;
  if (doc.is_object()) {
    for (const auto& [from, to] : doc.items()) {
      if (!to.is_string()) throw ParseError(fmt::format("replacement for \"{}\" must be a string", from));
      out.push_back({from, to.get<std::string>(), {}});
    }
  } else if (doc.is_array()) {
    for (const auto& entry : doc) {
      if (!entry.is_object() || !entry.contains("from") || !entry.contains("to")) {
        throw ParseError("replacement entries need \"from\" and \"to\"");
      }
      Replacement r{entry["from"].get<std::string>(), entry["to"].get<std::string>(), {}};
      for (const auto& id : entry.value("pairs", nlohmann::json::array())) r.pair_ids.insert(id.get<std::string>());
      out.push_back(std::move(r));
    }
  } else {
    throw ParseError("replacement map must be a JSON object or array");
  }
  for (const auto& r : out) {
    if (util::trim(r.from).empty() || util::trim(r.to).empty()) {
      throw ValidationError("replacement phrases must be non-empty");
    }
  }
  return out;
}

std::vector<Replacement> load_replacements(const std::string& path) {
  try {
    return parse_replacements(nlohmann::json::parse(util::read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(fmt::format("{}: {}", path, e.what()));
  }
}

std::string replacements_hash(const std::vector<Replacement>& replacements) {
  auto doc = nlohmann::json::array();
  for (const auto& r : replacements) {
    doc.push_back({{"from", r.from}, {"to", r.to}, {"pairs", std::vector<std::string>(r.pair_ids.begin(), r.pair_ids.end())}});
  }
  return util::sha256_hex(doc.dump());
}

Benchmark apply_replacements(const Benchmark& benchmark, const std::vector<Replacement>& replacements,
                             const TemplateSet& templates) {
  for (const auto& r : replacements) {
    if (r.to.empty()) throw ValidationError(fmt::format("replacement for \"{}\" is empty", r.from));
  }
  Benchmark out;
  out.dataset_kind = benchmark.dataset_kind;
  out.provenance = benchmark.provenance;
  out.provenance.replacement_rounds.push_back(replacements_hash(replacements));
  out.pairs.reserve(benchmark.pairs.size());

  for (const auto& pair : benchmark.pairs) {
    auto triple = pair.q1.triple();
    // Each phrase is matched against the original text once, so A->B, B->C
    // does not chain.
    for (auto* phrase : {&triple.x, &triple.y, &triple.z}) {
      for (const auto& r : replacements) {
        if (*phrase == r.from && (r.pair_ids.empty() || r.pair_ids.contains(pair.pair_id))) {
          *phrase = r.to;
          break;
        }
      }
    }
    try {
      triple.validate();
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("pair {}: replacement collides within the triple ({})", pair.pair_id, e.what()));
    }
    auto updated = make_pair(triple, pair.q1.structure(), pair.q1.template_family, pair.pair_id, templates);
    if (updated.q1.label != pair.q1.label || updated.q2.label != pair.q2.label) {
      throw ValidationError(fmt::format("pair {}: labels changed under replacement", pair.pair_id));
    }
    out.pairs.push_back(std::move(updated));
  }
  out.validate();
  return out;
}

}  // namespace causalflip
