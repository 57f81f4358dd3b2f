#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "causalflip/train/sample.hpp"
#include "causalflip/train/schedule.hpp"

namespace causalflip {

struct ExportOptions {
  TrainingMode mode = TrainingMode::ImplicitCot;
  MaskSchedule schedule;
  std::optional<NoisyPrefixSpec> noisy_prefix;
};

// The schedule actually attached to exported samples: `requested` for
// ImplicitCot, the all-supervised schedule otherwise.
MaskSchedule effective_schedule(TrainingMode mode, const MaskSchedule& requested);

struct TrainingExport {
  std::vector<TrainingSample> samples;  // ordered by question id
  MaskSchedule schedule;
};

// assemble -> inject (optional) -> export. The prefix is validated against
// every event phrase in `questions` before injection.
TrainingExport export_training(const std::vector<QuestionInstance>& questions, const ExportOptions& options);

// {question_id, mode, full_text, question_span, reasoning_span, answer_span,
//  label, schedule: {kind, T_ramp, terminal_fraction[, stages]}, noisy}
nlohmann::ordered_json to_record(const TrainingSample& sample, const MaskSchedule& schedule);
TrainingSample sample_from_record(const nlohmann::json& record, std::size_t line = 0);

void write_training_export(const std::string& path, const TrainingExport& exported);
TrainingExport load_training_export(const std::string& path);

}  // namespace causalflip
