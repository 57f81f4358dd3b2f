#include "causalflip/audit/skew.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "causalflip/errors.hpp"

namespace causalflip {

std::string_view to_string(SkewKind kind) { return kind == SkewKind::CountBased ? "count" : "similarity"; }

nlohmann::ordered_json SkewReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["kind"] = std::string(to_string(kind));
  doc["threshold_used"] = threshold_used;
  doc["k"] = kind == SkewKind::SimilarityBased ? nlohmann::ordered_json(k) : nlohmann::ordered_json(nullptr);
  doc["generated_at"] = generated_at;
  auto list = nlohmann::ordered_json::array();
  for (const auto& o : offenders) {
    nlohmann::ordered_json entry;
    entry["item"] = o.item;
    entry["score"] = o.score;
    auto categories = nlohmann::ordered_json::array();
    for (auto c : o.categories) categories.push_back(std::string(to_string(c)));
    entry["categories"] = categories;
    if (kind == SkewKind::CountBased) {
      nlohmann::ordered_json counts;
      for (auto c : kAllCategories) counts[std::string(to_string(c))] = o.category_counts[static_cast<std::size_t>(c)];
      entry["category_counts"] = counts;
      entry["occurrences"] = o.occurrences;
    }
    list.push_back(std::move(entry));
  }
  doc["offenders"] = list;
  return doc;
}

SkewReport count_skew(const Benchmark& benchmark, const CountSkewOptions& options) {
  if (!(options.threshold > 0.0 && options.threshold <= 1.0)) {
    throw UsageError(fmt::format("count threshold must be in (0, 1], got {}", options.threshold));
  }
  std::map<std::string, std::array<std::size_t, 4>> counts;
  for (const auto& pair : benchmark.pairs) {
    const auto slot = static_cast<std::size_t>(pair.category());
    for (const auto* phrase : {&pair.q1.x, &pair.q1.y, &pair.q1.z}) ++counts[*phrase][slot];
  }

  SkewReport report;
  report.kind = SkewKind::CountBased;
  report.threshold_used = options.threshold;
  for (const auto& [phrase, per_category] : counts) {
    const auto total = std::accumulate(per_category.begin(), per_category.end(), std::size_t{0});
    if (total < options.min_pairs) continue;
    const auto peak = *std::max_element(per_category.begin(), per_category.end());
    const double share = static_cast<double>(peak) / static_cast<double>(total);
    if (!(share > options.threshold)) continue;
    Offender o;
    o.item = phrase;
    o.score = share;
    o.category_counts = per_category;
    o.occurrences = total;
    for (auto c : kAllCategories) {
      if (per_category[static_cast<std::size_t>(c)] > 0) o.categories.push_back(c);
    }
    report.offenders.push_back(std::move(o));
  }
  std::sort(report.offenders.begin(), report.offenders.end(), [](const Offender& a, const Offender& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.occurrences != b.occurrences) return a.occurrences > b.occurrences;
    return a.item < b.item;
  });
  return report;
}

SkewReport neighbor_skew(const Benchmark& benchmark, const EmbeddingTable& embeddings, int k) {
  if (k < 1) throw UsageError(fmt::format("k must be >= 1, got {}", k));
  const auto questions = benchmark.questions();
  const auto n = questions.size();

  std::vector<const std::vector<double>*> vectors;
  std::vector<double> norms;
  vectors.reserve(n);
  norms.reserve(n);
  for (const auto& q : questions) {
    const auto* v = embeddings.find(q.id);
    if (v == nullptr) throw CoverageError(fmt::format("no embedding for question {}", q.id));
    vectors.push_back(v);
    double sq = 0.0;
    for (double c : *v) sq += c * c;
    norms.push_back(std::sqrt(sq));
  }
  const auto cosine = [&](std::size_t a, std::size_t b) {
    if (norms[a] == 0.0 || norms[b] == 0.0) return 0.0;
    double dot = 0.0;
    const auto& va = *vectors[a];
    const auto& vb = *vectors[b];
    for (std::size_t i = 0; i < va.size(); ++i) dot += va[i] * vb[i];
    return dot / (norms[a] * norms[b]);
  };

  // Questions are in ascending id order, so index order is the id tie-break.
  std::vector<std::size_t> hits(n, 0);
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(k), n > 0 ? n - 1 : 0);
  std::vector<std::pair<double, std::size_t>> row;
  for (std::size_t i = 0; i < n; ++i) {
    row.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) row.emplace_back(cosine(i, j), j);
    }
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(take), row.end(),
                      [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });
    for (std::size_t r = 0; r < take; ++r) ++hits[row[r].second];
  }

  SkewReport report;
  report.kind = SkewKind::SimilarityBased;
  report.k = k;
  for (std::size_t i = 0; i < n; ++i) {
    if (hits[i] == 0) continue;
    Offender o;
    o.item = questions[i].id;
    o.score = static_cast<double>(hits[i]);
    o.categories = {questions[i].category};
    o.occurrences = hits[i];
    report.offenders.push_back(std::move(o));
  }
  std::stable_sort(report.offenders.begin(), report.offenders.end(),
                   [](const Offender& a, const Offender& b) { return a.score > b.score; });
  return report;
}

std::vector<std::string> top_offenders(const SkewReport& report, std::size_t n) {
  std::vector<std::string> items;
  for (std::size_t i = 0; i < std::min(n, report.offenders.size()); ++i) items.push_back(report.offenders[i].item);
  return items;
}

}  // namespace causalflip
