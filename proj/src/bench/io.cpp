#include "causalflip/bench/io.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "causalflip/errors.hpp"
#include "causalflip/provenance.hpp"
#include "causalflip/util/jsonl.hpp"
#include "causalflip/util/strings.hpp"

namespace causalflip {

nlohmann::ordered_json to_record(const QuestionInstance& q) {
  nlohmann::ordered_json r;
  r["format_version"] = kFormatVersion;
  r["id"] = q.id;
  r["pair_id"] = q.pair_id;
  r["triple_id"] = q.triple_id;
  r["dataset_kind"] = std::string(to_string(q.dataset_kind));
  r["polarity"] = std::string(to_string(q.polarity));
  r["template_family"] = std::string(to_string(q.template_family));
  r["query_kind"] = std::string(to_string(q.query_kind));
  r["category"] = std::string(to_string(q.category));
  r["x"] = q.x;
  r["y"] = q.y;
  r["z"] = q.z;
  r["question_text"] = q.question_text;
  r["label"] = std::string(to_string(q.label));
  r["reasoning_text"] = q.reasoning_text;
  r["split"] = q.split ? nlohmann::ordered_json(std::string(to_string(*q.split))) : nlohmann::ordered_json(nullptr);
  return r;
}

QuestionInstance question_from_record(const nlohmann::json& record, std::size_t line) {
  const auto version = record.find("format_version");
  if (version == record.end() || !version->is_number_integer()) {
    throw ParseError("missing format_version", line);
  }
  if (version->get<int>() != kFormatVersion) {
    throw ParseError(fmt::format("unsupported format_version {} (this build reads {})", version->get<int>(),
                                 kFormatVersion),
                     line);
  }
  const auto str = [&](const char* field) { return util::require_string(record, field, line); };
  const auto parsed = [&](auto parse, const char* field) {
    try {
      return parse(str(field));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line);
    }
  };
  QuestionInstance q;
  q.id = str("id");
  q.pair_id = str("pair_id");
  q.triple_id = str("triple_id");
  q.dataset_kind = parsed(parse_dataset_kind, "dataset_kind");
  q.polarity = parsed(parse_polarity, "polarity");
  q.template_family = parsed(parse_template_family, "template_family");
  q.query_kind = parsed(parse_query_kind, "query_kind");
  q.category = parsed(parse_category, "category");
  q.x = str("x");
  q.y = str("y");
  q.z = str("z");
  q.question_text = str("question_text");
  q.label = parsed(parse_label, "label");
  q.reasoning_text = str("reasoning_text");
  if (const auto it = record.find("split"); it != record.end() && !it->is_null()) {
    q.split = parsed(parse_split_tag, "split");
  }
  try {
    q.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("line {}: {}", line, e.what()));
  }
  return q;
}

std::string serialize_questions(const std::vector<QuestionInstance>& questions) {
  std::vector<const QuestionInstance*> ordered;
  for (const auto& q : questions) ordered.push_back(&q);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) { return a->id < b->id; });
  std::vector<util::OrderedJson> records;
  records.reserve(ordered.size());
  for (const auto* q : ordered) records.push_back(to_record(*q));
  return util::to_jsonl(records);
}

std::vector<QuestionInstance> load_questions(const std::string& path) {
  std::vector<QuestionInstance> questions;
  std::map<std::string, std::size_t> seen;
  util::for_each_jsonl(path, [&](const nlohmann::json& record, std::size_t line) {
    auto q = question_from_record(record, line);
    if (const auto [it, fresh] = seen.emplace(q.id, line); !fresh) {
      throw ValidationError(fmt::format("{}: line {}: question id {} already defined on line {}", path, line, q.id,
                                        it->second));
    }
    questions.push_back(std::move(q));
  });
  std::sort(questions.begin(), questions.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return questions;
}

void write_benchmark(const std::string& path, const Benchmark& benchmark) {
  util::write_file(path, serialize_questions(benchmark.questions()));
}

Benchmark benchmark_from_questions(const std::vector<QuestionInstance>& questions) {
  std::map<std::string, QuestionPair> pairs;
  for (const auto& q : questions) {
    auto& pair = pairs[q.pair_id];
    pair.pair_id = q.pair_id;
    auto& slot = q.query_kind == QueryKind::Q1 ? pair.q1 : pair.q2;
    if (!slot.id.empty()) throw ValidationError(fmt::format("pair {} has two {} members", q.pair_id, to_string(q.query_kind)));
    slot = q;
    slot.split.reset();
  }
  Benchmark bench;
  if (!questions.empty()) bench.dataset_kind = questions.front().dataset_kind;
  for (auto& [id, pair] : pairs) {
    if (pair.q1.id.empty() || pair.q2.id.empty()) {
      throw ValidationError(fmt::format("pair {} is missing a member", id));
    }
    bench.pairs.push_back(std::move(pair));
  }
  bench.validate();
  return bench;
}

Benchmark load_benchmark(const std::string& path) {
  auto bench = benchmark_from_questions(load_questions(path));
  if (const auto prov = read_provenance(path)) {
    bench.provenance.config_hash = prov->config_hash;
    bench.provenance.seed = prov->seed.value_or(0);
    bench.provenance.replacement_rounds = prov->replacement_rounds;
  }
  return bench;
}

void write_split(const std::string& train_path, const std::string& test_path, const DatasetSplit& split) {
  util::write_file(train_path, serialize_questions(split.train));
  util::write_file(test_path, serialize_questions(split.test));
}

}  // namespace causalflip
