#pragma once

#include <cstdint>
#include <vector>

#include "causalflip/bench/benchmark.hpp"
#include "causalflip/causal/templates.hpp"

namespace causalflip {

struct GenerationConfig {
  DatasetKind dataset_kind = DatasetKind::Confounder;
  std::vector<EventTriple> triples_base;
  std::vector<EventTriple> triples_opposite;
  int pairs_per_category = 250;
  std::uint64_t seed = 0;
  // Draw Base and Opposite pairs from the union of both pools.
  bool share_pools = false;
};

// Emits exactly pairs_per_category pairs in each of BD, BA, OD and OA. Every
// pair uses its own triple. Byte-identical output for a fixed config.
// Throws UsageError (pairs_per_category < 1) or CapacityError.
Benchmark generate_benchmark(const GenerationConfig& config, const TemplateSet& templates = TemplateSet::defaults());

// SHA-256 over the canonical config plus the templates in use.
std::string generation_config_hash(const GenerationConfig& config, const TemplateSet& templates);

}  // namespace causalflip
