#include "causalflip/causal/templates.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "causalflip/embedded_config.hpp"
#include "causalflip/errors.hpp"
#include "causalflip/util/strings.hpp"

namespace causalflip {

namespace {

constexpr int kTemplateVersion = 1;

void check_placeholders(const std::string& tmpl, const std::set<std::string>& allowed, const std::string& key) {
  for (const auto& name : util::placeholders(tmpl)) {
    if (!allowed.contains(name)) {
      throw ConfigError(fmt::format("template {} uses unknown placeholder {{{}}}", key, name));
    }
  }
}

const nlohmann::json& child(const nlohmann::json& node, const std::string& name, const std::string& where) {
  const auto it = node.find(name);
  if (it == node.end() || !it->is_object()) {
    throw ConfigError(fmt::format("templates: expected object \"{}\" under {}", name, where));
  }
  return *it;
}

std::string string_field(const nlohmann::json& node, const std::string& name, const std::string& where) {
  const auto it = node.find(name);
  if (it == node.end() || !it->is_string()) {
    throw ConfigError(fmt::format("templates: expected string \"{}\" under {}", name, where));
  }
  return it->get<std::string>();
}

template <typename Parse>
auto parse_key(std::string_view name, Parse parse, const std::string& where) {
  try {
    return parse(name);
  } catch (const ParseError&) {
    throw ConfigError(fmt::format("templates: unknown key \"{}\" under {}", name, where));
  }
}

}  // namespace

std::string_view to_string(TemplateFamily family) {
  return family == TemplateFamily::Default ? "default" : "alternative";
}

TemplateFamily parse_template_family(std::string_view name) {
  if (name == "default") return TemplateFamily::Default;
  if (name == "alternative") return TemplateFamily::Alternative;
  throw ParseError(fmt::format("unknown template family \"{}\"", name));
}

const TemplateSet& TemplateSet::defaults() {
  static const TemplateSet instance = from_json(nlohmann::json::parse(embedded::kTemplatesJson));
  return instance;
}

TemplateSet TemplateSet::load(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(util::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
  return from_json(doc);
}

TemplateSet TemplateSet::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("templates: document must be an object");
  if (doc.value("version", kTemplateVersion) != kTemplateVersion) {
    throw ConfigError(fmt::format("templates: unsupported version {}", doc["version"].dump()));
  }
  const std::set<std::string> roles{"X", "Y", "Z"};
  TemplateSet set;

  if (const auto q = doc.find("questions"); q != doc.end()) {
    for (const auto& [kind_name, families] : q->items()) {
      const auto kind = parse_key(kind_name, parse_dataset_kind, "questions");
      for (const auto& [family_name, queries] : families.items()) {
        const auto family = parse_key(family_name, parse_template_family, "questions." + kind_name);
        for (const auto& [query_name, text] : queries.items()) {
          const auto where = fmt::format("questions.{}.{}", kind_name, family_name);
          const auto query = parse_key(query_name, parse_query_kind, where);
          if (!text.is_string()) throw ConfigError(fmt::format("templates: {}.{} must be a string", where, query_name));
          check_placeholders(text.get<std::string>(), roles, where + "." + query_name);
          set.questions_[{kind, family, query}] = text.get<std::string>();
        }
      }
    }
  }

  if (const auto r = doc.find("reasoning"); r != doc.end()) {
    const std::set<std::string> endpoints{"from", "to"};
    auto& rt = set.reasoning_;
    rt.edge_present = string_field(*r, "edge_present", "reasoning");
    rt.edge_absent_no_path = string_field(*r, "edge_absent_no_path", "reasoning");
    rt.edge_absent_indirect = string_field(*r, "edge_absent_indirect", "reasoning");
    check_placeholders(rt.edge_present, endpoints, "reasoning.edge_present");
    check_placeholders(rt.edge_absent_no_path, endpoints, "reasoning.edge_absent_no_path");
    check_placeholders(rt.edge_absent_indirect, endpoints, "reasoning.edge_absent_indirect");
    rt.conjunction = r->value("conjunction", rt.conjunction);
    rt.conclusion = r->value("conclusion", rt.conclusion);
    const auto& structural = child(*r, "structural", "reasoning");
    for (const auto& [kind_name, polarities] : structural.items()) {
      const auto kind = parse_key(kind_name, parse_dataset_kind, "reasoning.structural");
      for (const auto& [polarity_name, queries] : polarities.items()) {
        const auto polarity = parse_key(polarity_name, parse_polarity, "reasoning.structural." + kind_name);
        for (const auto& [query_name, text] : queries.items()) {
          const auto where = fmt::format("reasoning.structural.{}.{}", kind_name, polarity_name);
          const auto query = parse_key(query_name, parse_query_kind, where);
          if (!text.is_string()) throw ConfigError(fmt::format("templates: {}.{} must be a string", where, query_name));
          check_placeholders(text.get<std::string>(), roles, where + "." + query_name);
          rt.structural[{kind, polarity, query}] = text.get<std::string>();
        }
      }
    }
  }
  return set;
}

nlohmann::json TemplateSet::to_json() const {
  nlohmann::json doc;
  doc["version"] = kTemplateVersion;
  for (const auto& [key, text] : questions_) {
    const auto& [kind, family, query] = key;
    doc["questions"][std::string(to_string(kind))][std::string(to_string(family))][std::string(to_string(query))] =
        text;
  }
  auto& r = doc["reasoning"];
  r["edge_present"] = reasoning_.edge_present;
  r["edge_absent_no_path"] = reasoning_.edge_absent_no_path;
  r["edge_absent_indirect"] = reasoning_.edge_absent_indirect;
  r["conjunction"] = reasoning_.conjunction;
  r["conclusion"] = reasoning_.conclusion;
  r["structural"] = nlohmann::json::object();
  for (const auto& [key, text] : reasoning_.structural) {
    const auto& [kind, polarity, query] = key;
    r["structural"][std::string(to_string(kind))][std::string(to_string(polarity))][std::string(to_string(query))] =
        text;
  }
  return doc;
}

const std::string& TemplateSet::question(DatasetKind kind, TemplateFamily family, QueryKind query) const {
  const auto it = questions_.find({kind, family, query});
  if (it == questions_.end()) {
    throw ConfigError(fmt::format("no question template for {}.{}.{}", to_string(kind), to_string(family),
                                  to_string(query)));
  }
  return it->second;
}

const std::string& TemplateSet::structural_clause(StructureSpec structure, QueryKind query) const {
  const auto it = reasoning_.structural.find({structure.kind, structure.polarity, query});
  if (it == reasoning_.structural.end()) {
    throw ConfigError(fmt::format("no reasoning template for {}.{}.{}", to_string(structure.kind),
                                  to_string(structure.polarity), to_string(query)));
  }
  return it->second;
}

}  // namespace causalflip
