#include "causalflip/bench/split.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "causalflip/errors.hpp"
#include "causalflip/util/rng.hpp"

namespace causalflip {

DatasetSplit pairwise_split(const Benchmark& benchmark, std::uint64_t seed) {
  std::map<Category, std::vector<const QuestionPair*>> by_category;
  for (const auto& pair : benchmark.pairs) by_category[pair.category()].push_back(&pair);
  for (const auto& [category, pairs] : by_category) {
    if (pairs.size() % 2 != 0) {
      throw BalanceError(fmt::format("category {} has {} pairs; an even count is needed for an exact Q1/Q2 "
                                     "balance",
                                     to_string(category), pairs.size()));
    }
  }

  util::DeterministicRng rng(seed);
  DatasetSplit split;
  split.seed = seed;
  for (auto category : kAllCategories) {
    auto& pairs = by_category[category];
    std::sort(pairs.begin(), pairs.end(), [](const auto* a, const auto* b) { return a->pair_id < b->pair_id; });
    rng.shuffle(std::span<const QuestionPair*>(pairs));
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const bool q1_to_train = i % 2 == 0;
      auto train = q1_to_train ? pairs[i]->q1 : pairs[i]->q2;
      auto test = q1_to_train ? pairs[i]->q2 : pairs[i]->q1;
      train.split = SplitTag::Train;
      test.split = SplitTag::Test;
      split.train.push_back(std::move(train));
      split.test.push_back(std::move(test));
    }
  }
  const auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
  std::sort(split.train.begin(), split.train.end(), by_id);
  std::sort(split.test.begin(), split.test.end(), by_id);
  return split;
}

}  // namespace causalflip
