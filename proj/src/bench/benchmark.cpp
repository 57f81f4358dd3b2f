#include "causalflip/bench/benchmark.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "causalflip/errors.hpp"

namespace causalflip {

std::vector<QuestionInstance> Benchmark::questions() const {
  std::vector<QuestionInstance> out;
  out.reserve(pairs.size() * 2);
  for (const auto& pair : pairs) {
    out.push_back(pair.q1);
    out.push_back(pair.q2);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

std::map<Category, std::size_t> Benchmark::category_counts() const {
  std::map<Category, std::size_t> counts;
  for (auto c : kAllCategories) counts[c] = 0;
  for (const auto& pair : pairs) ++counts[pair.category()];
  return counts;
}

void Benchmark::validate() const {
  for (const auto& pair : pairs) {
    pair.validate();
    if (pair.q1.dataset_kind != dataset_kind) {
      throw ValidationError(fmt::format("pair {} belongs to {}, benchmark is {}", pair.pair_id,
                                        to_string(pair.q1.dataset_kind), to_string(dataset_kind)));
    }
  }
  const auto counts = category_counts();
  const auto expected = counts.at(Category::BD);
  for (const auto& [category, count] : counts) {
    if (count != expected) {
      throw ValidationError(fmt::format("unbalanced categories: BD={} BA={} OD={} OA={}", counts.at(Category::BD),
                                        counts.at(Category::BA), counts.at(Category::OD), counts.at(Category::OA)));
    }
  }
}

}  // namespace causalflip
