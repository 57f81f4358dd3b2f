#include "causalflip/train/schedule.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "causalflip/errors.hpp"

namespace causalflip {

namespace {

// floor(terminal * numerator / denominator) for non-negative integers. Exact
// when terminal is 0 or 1, which covers every shipped configuration.
std::int64_t scaled_floor(double terminal, std::int64_t numerator, std::int64_t denominator) {
  if (terminal == 0.0 || numerator == 0) return 0;
  if (terminal == 1.0) return numerator / denominator;
  const long double value = static_cast<long double>(terminal) * static_cast<long double>(numerator) /
                            static_cast<long double>(denominator);
  return static_cast<std::int64_t>(std::floor(value + 1e-12L));
}

}  // namespace

std::string_view to_string(ScheduleKind kind) { return kind == ScheduleKind::Linear ? "linear" : "stepwise"; }

ScheduleKind parse_schedule_kind(std::string_view name) {
  if (name == "linear") return ScheduleKind::Linear;
  if (name == "stepwise") return ScheduleKind::Stepwise;
  throw ParseError(fmt::format("unknown schedule kind \"{}\"", name));
}

void MaskSchedule::validate() const {
  if (ramp_steps < 1) throw UsageError(fmt::format("ramp_steps must be >= 1, got {}", ramp_steps));
  if (stages < 1) throw UsageError(fmt::format("stages must be >= 1, got {}", stages));
  if (!(terminal_fraction >= 0.0 && terminal_fraction <= 1.0)) {
    throw UsageError(fmt::format("terminal_fraction must be in [0, 1], got {}", terminal_fraction));
  }
}

double mask_fraction(std::int64_t step, const MaskSchedule& schedule) {
  if (step < 0) throw UsageError(fmt::format("training step must be >= 0, got {}", step));
  schedule.validate();
  const auto clamped = std::min(step, schedule.ramp_steps);
  if (schedule.kind == ScheduleKind::Linear) {
    if (clamped == schedule.ramp_steps) return schedule.terminal_fraction;
    return schedule.terminal_fraction * (static_cast<double>(clamped) / static_cast<double>(schedule.ramp_steps));
  }
  const auto stage = clamped * schedule.stages / schedule.ramp_steps;
  if (stage == schedule.stages) return schedule.terminal_fraction;
  return schedule.terminal_fraction * (static_cast<double>(stage) / static_cast<double>(schedule.stages));
}

std::int64_t masked_reasoning_tokens(std::int64_t step, std::int64_t reasoning_tokens, const MaskSchedule& schedule) {
  if (step < 0) throw UsageError(fmt::format("training step must be >= 0, got {}", step));
  if (reasoning_tokens < 0) throw UsageError("reasoning token count must be >= 0");
  schedule.validate();
  const auto clamped = std::min(step, schedule.ramp_steps);
  std::int64_t r = 0;
  if (schedule.kind == ScheduleKind::Linear) {
    r = scaled_floor(schedule.terminal_fraction, clamped * reasoning_tokens, schedule.ramp_steps);
  } else {
    const auto stage = clamped * schedule.stages / schedule.ramp_steps;
    r = scaled_floor(schedule.terminal_fraction, stage * reasoning_tokens, schedule.stages);
  }
  return std::clamp<std::int64_t>(r, 0, reasoning_tokens);
}

bool reasoning_token_supervised(std::int64_t k, std::int64_t step, std::int64_t reasoning_tokens,
                                const MaskSchedule& schedule) {
  if (k < 1 || k > reasoning_tokens) {
    throw UsageError(fmt::format("reasoning token index {} outside [1, {}]", k, reasoning_tokens));
  }
  return k > masked_reasoning_tokens(step, reasoning_tokens, schedule);
}

std::int64_t ramp_steps_for(std::int64_t samples, std::int64_t batch_size, std::int64_t epochs, double ramp_fraction) {
  if (samples < 0 || batch_size < 1 || epochs < 1) throw UsageError("invalid training size for ramp computation");
  if (!(ramp_fraction > 0.0 && ramp_fraction <= 1.0)) {
    throw UsageError(fmt::format("ramp fraction must be in (0, 1], got {}", ramp_fraction));
  }
  const auto total = epochs * ((samples + batch_size - 1) / batch_size);
  return std::max<std::int64_t>(1, std::llround(ramp_fraction * static_cast<double>(total)));
}

nlohmann::ordered_json to_json(const MaskSchedule& schedule) {
  nlohmann::ordered_json doc;
  doc["kind"] = std::string(to_string(schedule.kind));
  doc["T_ramp"] = schedule.ramp_steps;
  doc["terminal_fraction"] = schedule.terminal_fraction;
  if (schedule.kind == ScheduleKind::Stepwise) doc["stages"] = schedule.stages;
  return doc;
}

MaskSchedule schedule_from_json(const nlohmann::json& doc) {
  MaskSchedule s;
  try {
    s.kind = parse_schedule_kind(doc.at("kind").get<std::string>());
    s.ramp_steps = doc.at("T_ramp").get<std::int64_t>();
    s.terminal_fraction = doc.at("terminal_fraction").get<double>();
    s.stages = doc.value("stages", std::int64_t{1});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("schedule: ") + e.what());
  }
  s.validate();
  return s;
}

}  // namespace causalflip
