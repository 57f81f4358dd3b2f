#include "causalflip/bench/generate.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "causalflip/errors.hpp"
#include "causalflip/util/hash.hpp"
#include "causalflip/util/rng.hpp"

namespace causalflip {

namespace {

nlohmann::ordered_json triples_json(const std::vector<EventTriple>& triples) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& t : triples) out.push_back({t.id, t.x, t.y, t.z, std::string(to_string(t.pool))});
  return out;
}

std::size_t id_width(std::size_t count) {
  std::size_t width = 1;
  for (std::size_t n = count > 0 ? count - 1 : 0; n >= 10; n /= 10) ++width;
  return std::max<std::size_t>(width, 4);
}

struct Draw {
  Category category;
  StructureSpec structure;
  TemplateFamily family;
};

}  // namespace

std::string generation_config_hash(const GenerationConfig& config, const TemplateSet& templates) {
  nlohmann::ordered_json doc;
  doc["dataset_kind"] = std::string(to_string(config.dataset_kind));
  doc["pairs_per_category"] = config.pairs_per_category;
  doc["seed"] = config.seed;
  doc["share_pools"] = config.share_pools;
  doc["triples_base"] = triples_json(config.triples_base);
  doc["triples_opposite"] = triples_json(config.triples_opposite);
  doc["templates"] = templates.to_json();
  return util::sha256_hex(doc.dump());
}

Benchmark generate_benchmark(const GenerationConfig& config, const TemplateSet& templates) {
  if (config.pairs_per_category < 1) {
    throw UsageError(fmt::format("pairs_per_category must be >= 1, got {}", config.pairs_per_category));
  }
  const auto per_category = static_cast<std::size_t>(config.pairs_per_category);
  for (const auto* pool : {&config.triples_base, &config.triples_opposite}) {
    for (const auto& t : *pool) t.validate();
  }

  util::DeterministicRng rng(config.seed);
  const auto kind = config.dataset_kind;
  const std::array<Draw, 4> draws{{
      {Category::BD, {kind, Polarity::Base}, TemplateFamily::Default},
      {Category::BA, {kind, Polarity::Base}, TemplateFamily::Alternative},
      {Category::OD, {kind, Polarity::Opposite}, TemplateFamily::Default},
      {Category::OA, {kind, Polarity::Opposite}, TemplateFamily::Alternative},
  }};

  // Each category draws a disjoint slice of a shuffled pool.
  std::array<std::vector<EventTriple>, 4> assigned;
  const auto take = [&](std::vector<EventTriple> pool, std::span<const Draw> targets, const char* pool_name) {
    std::set<std::string> seen;
    std::erase_if(pool, [&](const EventTriple& t) { return !seen.insert(t.id).second; });
    std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    rng.shuffle(std::span<EventTriple>(pool));
    std::size_t cursor = 0;
    for (const auto& draw : targets) {
      const auto available = pool.size() - cursor;
      if (available < per_category) {
        throw CapacityError(fmt::format("category {} needs {} triples from the {} pool but only {} remain "
                                        "(shortfall {})",
                                        to_string(draw.category), per_category, pool_name, available,
                                        per_category - available));
      }
      auto& slot = assigned[static_cast<std::size_t>(draw.category)];
      slot.assign(pool.begin() + static_cast<std::ptrdiff_t>(cursor),
                  pool.begin() + static_cast<std::ptrdiff_t>(cursor + per_category));
      cursor += per_category;
    }
  };
  if (config.share_pools) {
    auto shared = config.triples_base;
    shared.insert(shared.end(), config.triples_opposite.begin(), config.triples_opposite.end());
    take(std::move(shared), draws, "shared");
  } else {
    take(config.triples_base, std::span(draws).first(2), "base");
    take(config.triples_opposite, std::span(draws).subspan(2), "opposite");
  }

  Benchmark bench;
  bench.dataset_kind = kind;
  bench.provenance.seed = config.seed;
  bench.provenance.config_hash = generation_config_hash(config, templates);
  const auto width = id_width(per_category);
  for (const auto& draw : draws) {
    const auto& triples = assigned[static_cast<std::size_t>(draw.category)];
    for (std::size_t i = 0; i < triples.size(); ++i) {
      auto pair_id = fmt::format("{}-{}-{:0{}}", to_string(kind), to_string(draw.category), i, width);
      bench.pairs.push_back(make_pair(triples[i], draw.structure, draw.family, std::move(pair_id), templates));
    }
  }
  std::sort(bench.pairs.begin(), bench.pairs.end(), [](const auto& a, const auto& b) { return a.pair_id < b.pair_id; });
  bench.validate();
  return bench;
}

}  // namespace causalflip
