#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalflip/audit/embeddings.hpp"
#include "causalflip/bench/benchmark.hpp"

namespace causalflip {

enum class SkewKind : std::uint8_t { CountBased, SimilarityBased };

std::string_view to_string(SkewKind kind);

struct Offender {
  std::string item;  // event phrase (count) or question id (similarity)
  double score = 0.0;
  std::vector<Category> categories;  // categories the item occurs in
  // Count audits: pairs per category, in BD/BA/OD/OA order.
  std::array<std::size_t, 4> category_counts{};
  std::size_t occurrences = 0;

  bool operator==(const Offender&) const = default;
};

struct SkewReport {
  SkewKind kind = SkewKind::CountBased;
  std::vector<Offender> offenders;  // descending score
  double threshold_used = 0.0;
  int k = 0;                 // neighbour count, similarity audits only
  std::string generated_at;  // stamped by the caller; empty by default

  nlohmann::ordered_json to_json() const;
};

struct CountSkewOptions {
  // Flag a phrase when its largest category share strictly exceeds this.
  double threshold = 0.6;
  // Phrases seen in fewer pairs carry no distribution worth flagging.
  std::size_t min_pairs = 2;
};

// For each event phrase, counts the pairs it occurs in per category and
// flags phrases whose maximum category share exceeds the threshold. Ranked
// by share, then occurrences, then phrase. Throws UsageError unless
// threshold is in (0, 1].
SkewReport count_skew(const Benchmark& benchmark, const CountSkewOptions& options = {});

// For every question, takes its k most cosine-similar other questions (ties
// by ascending id). A question's score is the number of lists it appears in.
// Questions with a non-zero score are reported, ties ranked by id. Throws
// CoverageError naming the first question without an embedding, UsageError
// when k < 1.
SkewReport neighbor_skew(const Benchmark& benchmark, const EmbeddingTable& embeddings, int k = 5);

// First `n` offender items.
std::vector<std::string> top_offenders(const SkewReport& report, std::size_t n = 5);

}  // namespace causalflip
