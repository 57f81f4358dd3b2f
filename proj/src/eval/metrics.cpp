#include "causalflip/eval/metrics.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "causalflip/errors.hpp"
#include "causalflip/util/jsonl.hpp"

namespace causalflip {

EvalRecord make_record(std::string question_id, std::string completion, Label gold, ParseMode mode) {
  EvalRecord r;
  r.question_id = std::move(question_id);
  r.parsed = parse_answer(completion, mode);
  r.raw_completion = std::move(completion);
  r.gold = gold;
  r.correct = matches(r.parsed, gold);
  return r;
}

nlohmann::ordered_json to_json(const EvalRecord& record) {
  nlohmann::ordered_json r;
  r["question_id"] = record.question_id;
  r["raw_completion"] = record.raw_completion;
  r["parsed"] = std::string(to_string(record.parsed));
  r["gold"] = std::string(to_string(record.gold));
  r["correct"] = record.correct;
  if (!record.error.empty()) r["error"] = record.error;
  return r;
}

EvalRecord eval_record_from_json(const nlohmann::json& doc, std::size_t line) {
  EvalRecord r;
  try {
    r.question_id = util::require_string(doc, "question_id", line);
    r.raw_completion = util::require_string(doc, "raw_completion", line);
    r.parsed = parse_answer_name(util::require_string(doc, "parsed", line));
    r.gold = parse_label(util::require_string(doc, "gold", line));
    r.error = doc.value("error", std::string());
  } catch (const ParseError& e) {
    if (e.line() != 0 || line == 0) throw;
    throw ParseError(e.what(), line);
  }
  r.correct = matches(r.parsed, r.gold);
  if (const auto it = doc.find("correct"); it != doc.end() && (!it->is_boolean() || it->get<bool>() != r.correct)) {
    throw ParseError(fmt::format("record {}: \"correct\" disagrees with parsed and gold", r.question_id), line);
  }
  return r;
}

void write_records(const std::string& path, const std::vector<EvalRecord>& records) {
  std::vector<util::OrderedJson> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(to_json(r));
  util::write_jsonl(path, out);
}

std::vector<EvalRecord> load_records(const std::string& path) {
  std::vector<EvalRecord> out;
  util::for_each_jsonl(path, [&](const nlohmann::json& doc, std::size_t line) {
    out.push_back(eval_record_from_json(doc, line));
  });
  return out;
}

Metrics score(const std::vector<EvalRecord>& records, const std::vector<QuestionInstance>& questions) {
  if (records.empty()) throw UsageError("cannot score an empty set of records");
  std::unordered_map<std::string_view, const QuestionInstance*> by_id;
  for (const auto& q : questions) by_id.emplace(q.id, &q);

  Metrics m;
  std::set<std::string_view> seen;
  for (const auto& r : records) {
    const auto it = by_id.find(r.question_id);
    if (it == by_id.end()) throw JoinError(fmt::format("record {} has no matching question", r.question_id));
    if (!seen.insert(r.question_id).second) {
      throw ValidationError(fmt::format("question {} is scored more than once", r.question_id));
    }
    const auto& q = *it->second;
    if (q.label != r.gold) {
      throw ValidationError(fmt::format("record {} has gold {} but the question says {}", r.question_id,
                                        to_string(r.gold), to_string(q.label)));
    }
    const bool correct = matches(r.parsed, r.gold);
    const bool valid = r.parsed != Answer::Invalid;
    for (auto* tally : {&m.per_category[q.category], &m.per_query_kind[q.query_kind]}) {
      tally->total += 1;
      tally->correct += correct ? 1 : 0;
      tally->valid += valid ? 1 : 0;
    }
    m.total += 1;
    m.correct_count += correct ? 1 : 0;
    m.valid_count += valid ? 1 : 0;
    m.question_ids.push_back(r.question_id);
  }
  std::sort(m.question_ids.begin(), m.question_ids.end());
  m.accuracy = static_cast<double>(m.correct_count) / static_cast<double>(m.total);
  return m;
}

namespace {

nlohmann::ordered_json tally_json(const Tally& t) {
  return {{"accuracy", t.accuracy()}, {"correct", t.correct}, {"valid", t.valid}, {"total", t.total}};
}

}  // namespace

nlohmann::ordered_json Metrics::to_json() const {
  nlohmann::ordered_json doc;
  doc["accuracy"] = accuracy;
  doc["correct"] = correct_count;
  doc["valid"] = valid_count;
  doc["total"] = total;
  auto& cats = doc["per_category"] = nlohmann::ordered_json::object();
  for (const auto& [c, t] : per_category) cats[std::string(causalflip::to_string(c))] = tally_json(t);
  auto& queries = doc["per_query_kind"] = nlohmann::ordered_json::object();
  for (const auto& [k, t] : per_query_kind) queries[std::string(causalflip::to_string(k))] = tally_json(t);
  return doc;
}

std::string Metrics::to_table() const {
  std::string out = fmt::format("{:<10} {:>9} {:>8} {:>8} {:>8}\n", "slice", "accuracy", "correct", "valid", "total");
  const auto row = [&](std::string_view name, const Tally& t) {
    out += fmt::format("{:<10} {:>9.4f} {:>8} {:>8} {:>8}\n", name, t.accuracy(), t.correct, t.valid, t.total);
  };
  row("all", Tally{correct_count, valid_count, total});
  for (const auto& [c, t] : per_category) row(causalflip::to_string(c), t);
  for (const auto& [k, t] : per_query_kind) row(causalflip::to_string(k), t);
  return out;
}

DegradationRow degradation(const Metrics& clean, const Metrics& noisy, std::string dataset, std::string strategy) {
  if (clean.question_ids != noisy.question_ids) {
    std::vector<std::string> only_clean, only_noisy;
    std::set_difference(clean.question_ids.begin(), clean.question_ids.end(), noisy.question_ids.begin(),
                        noisy.question_ids.end(), std::back_inserter(only_clean));
    std::set_difference(noisy.question_ids.begin(), noisy.question_ids.end(), clean.question_ids.begin(),
                        clean.question_ids.end(), std::back_inserter(only_noisy));
    throw ValidationError(fmt::format("clean and noisy runs cover different questions; only clean: [{}]; only noisy: [{}]",
                                      fmt::join(only_clean, ", "), fmt::join(only_noisy, ", ")));
  }
  DegradationRow row;
  row.dataset = std::move(dataset);
  row.strategy = std::move(strategy);
  row.clean_accuracy = clean.accuracy;
  row.noisy_accuracy = noisy.accuracy;
  row.delta = clean.accuracy - noisy.accuracy;
  for (const auto& [c, t] : clean.per_category) {
    if (const auto it = noisy.per_category.find(c); it != noisy.per_category.end()) {
      row.per_category_delta[c] = t.accuracy() - it->second.accuracy();
    }
  }
  return row;
}

DegradationReport degradation_report(std::vector<DegradationRow> rows) {
  DegradationReport report;
  std::map<std::string, std::pair<double, std::size_t>> sums;
  for (const auto& r : rows) {
    auto& [sum, n] = sums[r.strategy];
    sum += r.delta;
    n += 1;
  }
  for (const auto& [strategy, s] : sums) report.mean_delta_by_strategy[strategy] = s.first / static_cast<double>(s.second);
  report.rows = std::move(rows);
  return report;
}

nlohmann::ordered_json DegradationReport::to_json() const {
  nlohmann::ordered_json doc;
  auto& out = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["dataset"] = r.dataset;
    row["strategy"] = r.strategy;
    row["clean_accuracy"] = r.clean_accuracy;
    row["noisy_accuracy"] = r.noisy_accuracy;
    row["delta"] = r.delta;
    auto& cats = row["per_category_delta"] = nlohmann::ordered_json::object();
    for (const auto& [c, d] : r.per_category_delta) cats[std::string(causalflip::to_string(c))] = d;
    out.push_back(std::move(row));
  }
  doc["mean_delta_by_strategy"] = mean_delta_by_strategy;
  return doc;
}

std::string DegradationReport::to_table() const {
  std::string out = fmt::format("{:<12} {:<12} {:>8} {:>8} {:>8}\n", "dataset", "strategy", "clean", "noisy", "delta");
  for (const auto& r : rows) {
    out += fmt::format("{:<12} {:<12} {:>8.3f} {:>8.3f} {:>+8.3f}\n", r.dataset, r.strategy, r.clean_accuracy,
                       r.noisy_accuracy, r.delta);
  }
  for (const auto& [strategy, d] : mean_delta_by_strategy) {
    out += fmt::format("{:<12} {:<12} {:>8} {:>8} {:>+8.3f}\n", "mean", strategy, "", "", d);
  }
  return out;
}

}  // namespace causalflip
