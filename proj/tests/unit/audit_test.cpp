#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "causalflip/audit/embeddings.hpp"
#include "causalflip/audit/replace.hpp"
#include "causalflip/audit/skew.hpp"
#include "causalflip/errors.hpp"
#include "fixtures.hpp"

namespace causalflip {
namespace {

using testing::make_benchmark;
using testing::TempDir;

QuestionPair pair_in(Category category, const EventTriple& t, int index) {
  const auto polarity = (category == Category::BD || category == Category::BA) ? Polarity::Base : Polarity::Opposite;
  const auto family =
      (category == Category::BD || category == Category::OD) ? TemplateFamily::Default : TemplateFamily::Alternative;
  return make_pair(t, {DatasetKind::Confounder, polarity}, family,
                   "confounder-" + std::string(to_string(category)) + "-" + std::to_string(1000 + index),
                   TemplateSet::defaults());
}

Benchmark bench_of(std::vector<QuestionPair> pairs) {
  Benchmark b;
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& c) { return a.pair_id < c.pair_id; });
  b.pairs = std::move(pairs);
  return b;
}

// Independent count: distinct pairs per phrase and category, from questions.
std::map<std::string, std::array<std::size_t, 4>> brute_counts(const Benchmark& b) {
  std::map<std::string, std::map<std::size_t, std::set<std::string>>> seen;
  for (const auto& q : b.questions()) {
    for (const auto& phrase : {q.x, q.y, q.z}) seen[phrase][static_cast<std::size_t>(q.category)].insert(q.pair_id);
  }
  std::map<std::string, std::array<std::size_t, 4>> out;
  for (const auto& [phrase, cats] : seen) {
    auto& row = out[phrase];
    row.fill(0);
    for (const auto& [c, ids] : cats) row[c] = ids.size();
  }
  return out;
}

TEST(CountSkew, PhraseOnlyInOneCategoryScoresOne) {
  const EventTriple a{"a1", "ice cream sales", "sunburns", "summer", TriplePool::Base};
  const EventTriple b{"a2", "ice cream sales", "beach visits", "heat", TriplePool::Base};
  const auto report = count_skew(bench_of({pair_in(Category::BD, a, 0), pair_in(Category::BD, b, 1)}));
  ASSERT_FALSE(report.offenders.empty());
  EXPECT_EQ(report.offenders.front().item, "ice cream sales");
  EXPECT_DOUBLE_EQ(report.offenders.front().score, 1.0);
  EXPECT_EQ(report.offenders.front().occurrences, 2u);
}

TEST(CountSkew, UniformPhraseIsNotFlagged) {
  std::vector<QuestionPair> pairs;
  int i = 0;
  for (auto c : kAllCategories) {
    pairs.push_back(pair_in(c, {"u" + std::to_string(i), "rain", "mud " + std::to_string(i), "day " + std::to_string(i),
                                TriplePool::Base},
                            i));
    ++i;
  }
  const auto report = count_skew(bench_of(pairs));
  for (const auto& o : report.offenders) EXPECT_NE(o.item, "rain");
  const auto counts = brute_counts(bench_of(pairs));
  EXPECT_EQ(counts.at("rain"), (std::array<std::size_t, 4>{1, 1, 1, 1}));
}

TEST(CountSkew, MatchesBruteForceOnRandomFixtures) {
  std::mt19937 gen(1234);
  const std::vector<std::string> vocab{"rain", "wind", "heat", "snow", "fog", "hail", "sleet", "drought"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<QuestionPair> pairs;
    const int n = 4 + static_cast<int>(gen() % 20);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> pick = vocab;
      std::shuffle(pick.begin(), pick.end(), gen);
      const auto category = kAllCategories[gen() % 4];
      pairs.push_back(pair_in(category, {"r" + std::to_string(i), pick[0], pick[1], pick[2], TriplePool::Base}, i));
    }
    const auto bench = bench_of(pairs);
    const double threshold = 0.3 + 0.1 * static_cast<double>(gen() % 6);
    const auto report = count_skew(bench, {threshold, 2});

    std::vector<std::tuple<double, std::size_t, std::string>> expected;
    for (const auto& [phrase, row] : brute_counts(bench)) {
      std::size_t total = 0, peak = 0;
      for (auto v : row) {
        total += v;
        peak = std::max(peak, v);
      }
      const double share = static_cast<double>(peak) / static_cast<double>(total);
      if (total >= 2 && share > threshold) expected.emplace_back(share, total, phrase);
    }
    std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
      if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) > std::get<1>(b);
      return std::get<2>(a) < std::get<2>(b);
    });
    ASSERT_EQ(report.offenders.size(), expected.size()) << "trial " << trial;
    const auto counts = brute_counts(bench);
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_EQ(report.offenders[i].item, std::get<2>(expected[i]));
      EXPECT_EQ(report.offenders[i].score, std::get<0>(expected[i]));
      EXPECT_EQ(report.offenders[i].category_counts, counts.at(std::get<2>(expected[i])));
    }
  }
}

TEST(CountSkew, RejectsBadThreshold) {
  const auto bench = make_benchmark(DatasetKind::Chain, 1, 1);
  EXPECT_THROW(count_skew(bench, {0.0, 2}), UsageError);
  EXPECT_THROW(count_skew(bench, {1.5, 2}), UsageError);
}

// Brute-force reference: full sort per row, cosine recomputed from scratch.
std::vector<std::pair<std::string, std::size_t>> brute_neighbors(const std::vector<std::string>& ids,
                                                                 const std::vector<std::vector<double>>& vecs, int k) {
  const auto n = ids.size();
  const auto cosine = [&](std::size_t a, std::size_t b) {
    double dot = 0, aa = 0, bb = 0;
    for (std::size_t i = 0; i < vecs[a].size(); ++i) {
      dot += vecs[a][i] * vecs[b][i];
      aa += vecs[a][i] * vecs[a][i];
      bb += vecs[b][i] * vecs[b][i];
    }
    if (aa == 0 || bb == 0) return 0.0;
    return dot / (std::sqrt(aa) * std::sqrt(bb));
  };
  std::map<std::string, std::size_t> hits;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(j);
    }
    std::sort(others.begin(), others.end(), [&](std::size_t a, std::size_t b) {
      const double ca = cosine(i, a), cb = cosine(i, b);
      if (ca != cb) return ca > cb;
      return ids[a] < ids[b];
    });
    for (std::size_t r = 0; r < std::min<std::size_t>(k, others.size()); ++r) ++hits[ids[others[r]]];
  }
  std::vector<std::pair<std::string, std::size_t>> out(hits.begin(), hits.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

TEST(NeighborSkew, MatchesBruteForceIncludingTies) {
  std::mt19937 gen(77);
  for (int trial = 0; trial < 40; ++trial) {
    const int per_category = 1 + static_cast<int>(gen() % 6);  // up to 48 questions
    const auto bench = make_benchmark(DatasetKind::Confounder, per_category, trial);
    const auto questions = bench.questions();
    EmbeddingTable table;
    std::vector<std::string> ids;
    std::vector<std::vector<double>> vecs;
    for (const auto& q : questions) {
      // Small integer components make exact ties and zero vectors common.
      std::vector<double> v(3);
      for (auto& c : v) c = static_cast<double>(static_cast<int>(gen() % 3) - 1);
      table.insert(q.id, v);
      ids.push_back(q.id);
      vecs.push_back(v);
    }
    const int k = 1 + static_cast<int>(gen() % 6);
    const auto report = neighbor_skew(bench, table, k);
    const auto expected = brute_neighbors(ids, vecs, k);
    ASSERT_EQ(report.offenders.size(), expected.size()) << "trial " << trial;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_EQ(report.offenders[i].item, expected[i].first) << "trial " << trial << " rank " << i;
      EXPECT_EQ(report.offenders[i].score, static_cast<double>(expected[i].second));
    }
  }
}

TEST(NeighborSkew, MissingEmbeddingIsCoverageError) {
  const auto bench = make_benchmark(DatasetKind::Chain, 1, 1);
  EmbeddingTable table;
  const auto questions = bench.questions();
  for (std::size_t i = 1; i < questions.size(); ++i) table.insert(questions[i].id, {1.0, 0.0});
  try {
    neighbor_skew(bench, table, 2);
    FAIL();
  } catch (const CoverageError& e) {
    EXPECT_NE(std::string(e.what()).find(questions[0].id), std::string::npos);
  }
  EXPECT_THROW(neighbor_skew(bench, table, 0), UsageError);
}

TEST(EmbeddingTable, RejectsDimensionMismatchAndNonFinite) {
  EmbeddingTable t;
  t.insert("a", {1.0, 2.0});
  EXPECT_THROW(t.insert("b", {1.0}), ValidationError);
  EXPECT_THROW(t.insert("c", {1.0, NAN}), ValidationError);
}

TEST(EmbeddingTable, FileRoundTrip) {
  TempDir dir;
  EmbeddingTable t;
  t.insert("q1", {0.5, -1.0});
  t.insert("q2", {2.0, 0.0});
  t.save(dir.path("e.jsonl"));
  EXPECT_EQ(EmbeddingTable::load(dir.path("e.jsonl")).vectors(), t.vectors());
}

class CountingProvider final : public EmbeddingProvider {
 public:
  std::string tag() const override { return "counting"; }
  std::vector<EmbeddingResult> embed(std::span<const EmbeddingItem> items) override {
    calls += 1;
    items_seen += items.size();
    std::vector<EmbeddingResult> out;
    for (const auto& it : items) out.push_back({it.id, {static_cast<double>(it.text.size()), 1.0}});
    return out;
  }
  std::atomic<int> calls{0};
  std::atomic<std::size_t> items_seen{0};
};

TEST(FetchEmbeddings, BatchesAndServesCacheHits) {
  TempDir dir;
  const auto questions = make_benchmark(DatasetKind::Collider, 2, 1).questions();
  CountingProvider provider;
  EmbeddingCache cache;
  const auto table = fetch_embeddings(questions, provider, &cache, {4, 3, {}});
  EXPECT_EQ(table.size(), questions.size());
  EXPECT_EQ(provider.items_seen.load(), questions.size());
  EXPECT_EQ(provider.calls.load(), static_cast<int>((questions.size() + 3) / 4));
  cache.save(dir.path("cache.jsonl"));

  auto reloaded = EmbeddingCache::load(dir.path("cache.jsonl"));
  CountingProvider second;
  const auto again = fetch_embeddings(questions, second, &reloaded);
  EXPECT_EQ(second.calls.load(), 0);
  EXPECT_EQ(again.vectors(), table.vectors());
}

TEST(HashingProvider, DeterministicAndNormalized) {
  HashingEmbeddingProvider p(64);
  const std::vector<EmbeddingItem> items{{"a", "Will rain cause mud?"}, {"b", "Will rain cause mud?"}, {"c", ""}};
  const auto r = p.embed(items);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].vector, r[1].vector);
  double sq = 0;
  for (double c : r[0].vector) sq += c * c;
  EXPECT_NEAR(sq, 1.0, 1e-12);
}

TEST(Replace, SubstitutesRerendersAndKeepsLabels) {
  const auto bench = make_benchmark(DatasetKind::Confounder, 2, 3);
  const auto target = bench.pairs.front().q1.x;
  const auto out = apply_replacements(bench, {{target, "a brand new event", {}}});
  ASSERT_EQ(out.pairs.size(), bench.pairs.size());
  EXPECT_EQ(out.pairs.front().q1.x, "a brand new event");
  EXPECT_NE(out.pairs.front().q1.question_text.find("a brand new event"), std::string::npos);
  EXPECT_NE(out.pairs.front().q1.reasoning_text.find("a brand new event"), std::string::npos);
  for (std::size_t i = 0; i < out.pairs.size(); ++i) {
    EXPECT_EQ(out.pairs[i].q1.label, bench.pairs[i].q1.label);
    EXPECT_EQ(out.pairs[i].q2.label, bench.pairs[i].q2.label);
  }
  EXPECT_EQ(out.provenance.replacement_rounds.size(), bench.provenance.replacement_rounds.size() + 1);
  out.validate();
}

TEST(Replace, ScopedToListedPairs) {
  const auto bench = make_benchmark(DatasetKind::Confounder, 2, 3);
  const auto phrase = bench.pairs[0].q1.x;
  const auto elsewhere = apply_replacements(bench, {{phrase, "drizzle", {bench.pairs[1].pair_id}}});
  EXPECT_EQ(elsewhere.pairs[0].q1.x, phrase);
  EXPECT_EQ(elsewhere.pairs[0].q1.question_text, bench.pairs[0].q1.question_text);
  const auto here = apply_replacements(bench, {{phrase, "drizzle", {bench.pairs[0].pair_id}}});
  EXPECT_EQ(here.pairs[0].q1.x, "drizzle");
  EXPECT_EQ(here.pairs[0].q2.x, "drizzle");
}

TEST(Replace, RejectsCollisionAndEmpty) {
  const auto bench = make_benchmark(DatasetKind::Chain, 1, 1);
  const auto& q = bench.pairs.front().q1;
  EXPECT_THROW(apply_replacements(bench, {{q.x, q.y, {}}}), ValidationError);
  EXPECT_THROW(apply_replacements(bench, {{q.x, "", {}}}), ValidationError);
}

TEST(Replace, ParsesBothMapShapes) {
  const auto plain = parse_replacements(nlohmann::json{{"rain", "drizzle"}});
  ASSERT_EQ(plain.size(), 1u);
  EXPECT_EQ(plain[0].to, "drizzle");
  const auto scoped = parse_replacements(nlohmann::json::parse(R"([{"from":"a","to":"b","pairs":["p1"]}])"));
  ASSERT_EQ(scoped.size(), 1u);
  EXPECT_EQ(scoped[0].pair_ids, (std::set<std::string>{"p1"}));
  EXPECT_THROW(parse_replacements(nlohmann::json(3)), Error);
  EXPECT_EQ(replacements_hash(plain), replacements_hash(parse_replacements(nlohmann::json{{"rain", "drizzle"}})));
}

}  // namespace
}  // namespace causalflip
