#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalflip/bench/benchmark.hpp"

namespace causalflip {

inline constexpr int kFormatVersion = 1;

nlohmann::ordered_json to_record(const QuestionInstance& question);
// Throws ParseError on missing/unknown field values or a format_version
// mismatch.
QuestionInstance question_from_record(const nlohmann::json& record, std::size_t line = 0);

// One question record per line, ordered by id.
std::string serialize_questions(const std::vector<QuestionInstance>& questions);
std::vector<QuestionInstance> load_questions(const std::string& path);

void write_benchmark(const std::string& path, const Benchmark& benchmark);
// Regroups records into pairs and validates them. Provenance is read from
// the sidecar "<path>.provenance.json" when present.
Benchmark load_benchmark(const std::string& path);
Benchmark benchmark_from_questions(const std::vector<QuestionInstance>& questions);

void write_split(const std::string& train_path, const std::string& test_path, const DatasetSplit& split);


}  // namespace causalflip
