#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalflip/bench/question.hpp"
#include "causalflip/eval/parse.hpp"

namespace causalflip {

struct EvalRecord {
  std::string question_id;
  std::string raw_completion;
  Answer parsed = Answer::Invalid;
  Label gold = Label::No;
  bool correct = false;
  std::string error;  // set when the provider failed for this question

  bool operator==(const EvalRecord&) const = default;
};

EvalRecord make_record(std::string question_id, std::string completion, Label gold, ParseMode mode = ParseMode::Strict);

nlohmann::ordered_json to_json(const EvalRecord& record);
EvalRecord eval_record_from_json(const nlohmann::json& doc, std::size_t line = 0);
void write_records(const std::string& path, const std::vector<EvalRecord>& records);
std::vector<EvalRecord> load_records(const std::string& path);

struct Tally {
  std::size_t correct = 0;
  std::size_t valid = 0;
  std::size_t total = 0;

  double accuracy() const { return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total); }
  bool operator==(const Tally&) const = default;
};

struct Metrics {
  double accuracy = 0.0;  // correct_count / total
  std::size_t correct_count = 0;
  std::size_t total = 0;
  std::size_t valid_count = 0;
  std::map<Category, Tally> per_category;
  std::map<QueryKind, Tally> per_query_kind;
  std::vector<std::string> question_ids;  // sorted population

  nlohmann::ordered_json to_json() const;
  std::string to_table() const;
};

// Accuracy = (1/N) sum 1(parsed == gold); Invalid counts as wrong.
// Breakdowns come from the question metadata. Throws UsageError for an empty
// record list, JoinError for an unknown question id, ValidationError for
// duplicate ids or a gold label that disagrees with the question.
Metrics score(const std::vector<EvalRecord>& records, const std::vector<QuestionInstance>& questions);

struct DegradationRow {
  std::string dataset;
  std::string strategy;
  double clean_accuracy = 0.0;
  double noisy_accuracy = 0.0;
  double delta = 0.0;  // clean - noisy, signed
  std::map<Category, double> per_category_delta;
};

// Throws ValidationError listing ids missing from either run when the two
// populations differ.
DegradationRow degradation(const Metrics& clean, const Metrics& noisy, std::string dataset = {},
                           std::string strategy = {});

struct DegradationReport {
  std::vector<DegradationRow> rows;
  std::map<std::string, double> mean_delta_by_strategy;

  nlohmann::ordered_json to_json() const;
  std::string to_table() const;
};

DegradationReport degradation_report(std::vector<DegradationRow> rows);

}  // namespace causalflip
