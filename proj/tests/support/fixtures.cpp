#include "fixtures.hpp"

#include <atomic>
#include <fstream>
#include <random>

#include <fmt/format.h>

#include "causalflip/bench/generate.hpp"

namespace causalflip::testing {

std::vector<EventTriple> make_triples(std::size_t count, TriplePool pool, const std::string& tag) {
  const auto p = pool == TriplePool::Base ? "b" : "o";
  std::vector<EventTriple> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back({fmt::format("{}{}{:05d}", tag, p, i), fmt::format("{} {} rising output {:05d}", tag, p, i),
                   fmt::format("{} {} falling demand {:05d}", tag, p, i), fmt::format("{} {} cold season {:05d}", tag, p, i),
                   pool});
  }
  return out;
}

Benchmark make_benchmark(DatasetKind kind, int per_category, std::uint64_t seed) {
  GenerationConfig config;
  config.dataset_kind = kind;
  config.pairs_per_category = per_category;
  config.seed = seed;
  config.triples_base = make_triples(static_cast<std::size_t>(per_category) * 2, TriplePool::Base);
  config.triples_opposite = make_triples(static_cast<std::size_t>(per_category) * 2, TriplePool::Opposite);
  return generate_benchmark(config);
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  root_ = std::filesystem::temp_directory_path() /
          fmt::format("causalflip-test-{}-{}", rd(), counter.fetch_add(1));
  std::filesystem::create_directories(root_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(root_, ec);
}

std::string write_text(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

}  // namespace causalflip::testing
