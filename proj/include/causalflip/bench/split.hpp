#pragma once

#include <cstdint>

#include "causalflip/bench/benchmark.hpp"

namespace causalflip {

// Sends one member of every pair to train and the other to test. Within each
// category the pairs are permuted by `seed` and alternate Q1-to-train /
// Q2-to-train, so Q1 and Q2 counts match exactly in both halves.
// Throws BalanceError when a category holds an odd number of pairs.
DatasetSplit pairwise_split(const Benchmark& benchmark, std::uint64_t seed);

}  // namespace causalflip
