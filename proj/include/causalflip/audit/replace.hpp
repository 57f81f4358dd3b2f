#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalflip/bench/benchmark.hpp"
#include "causalflip/causal/templates.hpp"

namespace causalflip {

struct Replacement {
  std::string from;
  std::string to;
  // Restrict the substitution to these pairs; empty means every pair.
  std::set<std::string> pair_ids;
};

// Accepts either a plain object {"old phrase": "new phrase", ...} or an
// array of {"from", "to", "pairs": [pair ids]} entries.
std::vector<Replacement> parse_replacements(const nlohmann::json& doc);
std::vector<Replacement> load_replacements(const std::string& path);

std::string replacements_hash(const std::vector<Replacement>& replacements);

// Substitutes phrases in each pair's triple, re-renders question and
// reasoning text, and re-derives labels. Appends a replacement round to the
// provenance. Throws ValidationError on an empty replacement phrase or when a
// substitution makes two phrases of one triple collide.
Benchmark apply_replacements(const Benchmark& benchmark, const std::vector<Replacement>& replacements,
                             const TemplateSet& templates = TemplateSet::defaults());

}  // namespace causalflip
