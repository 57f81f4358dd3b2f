#pragma once

#include <map>
#include <string>
#include <tuple>

#include <nlohmann/json.hpp>

#include "causalflip/causal/structure.hpp"

namespace causalflip {

enum class TemplateFamily : std::uint8_t { Default, Alternative };

std::string_view to_string(TemplateFamily family);
TemplateFamily parse_template_family(std::string_view name);

// Phrasing for the reasoning steps. Edge templates use {from}/{to}; the
// structural clauses use {X}/{Y}/{Z}.
struct ReasoningTemplates {
  std::string edge_present;
  std::string edge_absent_no_path;
  std::string edge_absent_indirect;
  std::string conjunction = " AND ";
  std::string conclusion = ", therefore";
  std::map<std::tuple<DatasetKind, Polarity, QueryKind>, std::string> structural;
};

// All user-editable text: question templates keyed by (kind, family, query)
// and reasoning templates keyed by (kind, polarity, query).
class TemplateSet {
 public:
  using QuestionKey = std::tuple<DatasetKind, TemplateFamily, QueryKind>;

  // The shipped config/templates.json, compiled in.
  static const TemplateSet& defaults();

  // Throws ConfigError on unknown keys, unknown placeholders or a
  // version mismatch. Missing entries are tolerated until used.
  static TemplateSet from_json(const nlohmann::json& doc);
  static TemplateSet load(const std::string& path);

  nlohmann::json to_json() const;

  // Throws ConfigError naming the key when absent.
  const std::string& question(DatasetKind kind, TemplateFamily family, QueryKind query) const;
  const std::string& structural_clause(StructureSpec structure, QueryKind query) const;

  const ReasoningTemplates& reasoning() const { return reasoning_; }

 private:
  std::map<QuestionKey, std::string> questions_;
  ReasoningTemplates reasoning_;
};

}  // namespace causalflip
