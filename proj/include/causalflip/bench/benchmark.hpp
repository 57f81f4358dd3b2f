#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causalflip/bench/question.hpp"

namespace causalflip {

struct Provenance {
  std::string config_hash;
  std::uint64_t seed = 0;
  // One entry per apply_replacements round: hash of the replacement map.
  std::vector<std::string> replacement_rounds;

  bool operator==(const Provenance&) const = default;
};

struct Benchmark {
  DatasetKind dataset_kind = DatasetKind::Confounder;
  std::vector<QuestionPair> pairs;  // sorted by pair_id
  Provenance provenance;

  std::vector<QuestionInstance> questions() const;  // sorted by id
  std::map<Category, std::size_t> category_counts() const;

  // Pair invariants plus |BD| = |BA| = |OD| = |OA|. Throws ValidationError.
  void validate() const;
};

struct DatasetSplit {
  std::vector<QuestionInstance> train;  // sorted by id
  std::vector<QuestionInstance> test;   // sorted by id
  std::uint64_t seed = 0;
};

}  // namespace causalflip
