#include "causalflip/train/export.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "causalflip/errors.hpp"
#include "causalflip/util/jsonl.hpp"

namespace causalflip {

namespace {

nlohmann::ordered_json span_json(const Span& span) { return nlohmann::ordered_json::array({span.begin, span.end}); }

Span span_from_json(const nlohmann::json& value, const char* field, std::size_t line) {
  const auto offset = [](const nlohmann::json& v) { return v.is_number_integer() && v.get<std::int64_t>() >= 0; };
  if (!value.is_array() || value.size() != 2 || !offset(value[0]) || !offset(value[1])) {
    throw ParseError(fmt::format("\"{}\" must be [begin, end]", field), line);
  }
  return {value[0].get<std::size_t>(), value[1].get<std::size_t>()};
}

}  // namespace

MaskSchedule effective_schedule(TrainingMode mode, const MaskSchedule& requested) {
  if (mode == TrainingMode::ImplicitCot) return requested;
  auto none = MaskSchedule::none();
  none.ramp_steps = requested.ramp_steps;
  return none;
}

TrainingExport export_training(const std::vector<QuestionInstance>& questions, const ExportOptions& options) {
  options.schedule.validate();
  if (options.noisy_prefix) {
    if (options.mode == TrainingMode::NoCot) throw ModeError("a noisy prefix cannot be injected into nocot samples");
    std::set<std::string> phrases;
    for (const auto& q : questions) phrases.insert({q.x, q.y, q.z});
    const std::vector<std::string> list(phrases.begin(), phrases.end());
    validate_prefix(*options.noisy_prefix, list);
  }

  TrainingExport out;
  out.schedule = effective_schedule(options.mode, options.schedule);
  out.samples.reserve(questions.size());
  for (const auto& q : questions) {
    auto sample = assemble_sample(q, options.mode);
    if (options.noisy_prefix) sample = inject_noisy_prefix(sample, *options.noisy_prefix);
    sample.validate();
    out.samples.push_back(std::move(sample));
  }
  std::sort(out.samples.begin(), out.samples.end(),
            [](const auto& a, const auto& b) { return a.question_id < b.question_id; });
  return out;
}

nlohmann::ordered_json to_record(const TrainingSample& sample, const MaskSchedule& schedule) {
  nlohmann::ordered_json r;
  r["question_id"] = sample.question_id;
  r["mode"] = std::string(to_string(sample.mode));
  r["full_text"] = sample.full_text;
  r["question_span"] = span_json(sample.question_span);
  r["reasoning_span"] = sample.reasoning_span ? span_json(*sample.reasoning_span) : nlohmann::ordered_json(nullptr);
  r["answer_span"] = span_json(sample.answer_span);
  r["label"] = std::string(to_string(sample.label));
  r["schedule"] = to_json(schedule);
  r["noisy"] = sample.noisy;
  return r;
}

TrainingSample sample_from_record(const nlohmann::json& record, std::size_t line) {
  TrainingSample s;
  try {
    s.question_id = util::require_string(record, "question_id", line);
    s.mode = parse_training_mode(util::require_string(record, "mode", line));
    s.full_text = util::require_string(record, "full_text", line);
    s.question_span = span_from_json(record.value("question_span", nlohmann::json()), "question_span", line);
    if (const auto it = record.find("reasoning_span"); it != record.end() && !it->is_null()) {
      s.reasoning_span = span_from_json(*it, "reasoning_span", line);
    }
    s.answer_span = span_from_json(record.value("answer_span", nlohmann::json()), "answer_span", line);
    s.label = parse_label(util::require_string(record, "label", line));
    s.noisy = record.value("noisy", false);
  } catch (const ParseError& e) {
    if (e.line() != 0 || line == 0) throw;
    throw ParseError(e.what(), line);
  }
  s.validate();
  return s;
}

void write_training_export(const std::string& path, const TrainingExport& exported) {
  std::vector<util::OrderedJson> records;
  records.reserve(exported.samples.size());
  for (const auto& s : exported.samples) records.push_back(to_record(s, exported.schedule));
  util::write_jsonl(path, records);
}

TrainingExport load_training_export(const std::string& path) {
  TrainingExport out;
  bool first = true;
  util::for_each_jsonl(path, [&](const nlohmann::json& record, std::size_t line) {
    out.samples.push_back(sample_from_record(record, line));
    const auto schedule = schedule_from_json(record.value("schedule", nlohmann::json::object()));
    if (first) {
      out.schedule = schedule;
      first = false;
    } else if (!(schedule == out.schedule)) {
      throw ValidationError(fmt::format("{}: line {}: schedule differs from the first record", path, line));
    }
  });
  return out;
}

}  // namespace causalflip
