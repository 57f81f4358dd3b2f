#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "causalflip/bench/benchmark.hpp"
#include "causalflip/causal/triple.hpp"

namespace causalflip::testing {

// Synthetic triples whose phrases are unique across the whole pool set.
std::vector<EventTriple> make_triples(std::size_t count, TriplePool pool, const std::string& tag = "t");

// A balanced benchmark with `per_category` pairs in each category.
Benchmark make_benchmark(DatasetKind kind, int per_category, std::uint64_t seed);

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string path(const std::string& name) const { return (root_ / name).string(); }
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

// Writes `text` to `path` and returns the path.
std::string write_text(const std::string& path, const std::string& text);

}  // namespace causalflip::testing
