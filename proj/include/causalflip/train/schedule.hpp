#pragma once

#include <cstdint>
#include <string_view>

#include <nlohmann/json.hpp>

namespace causalflip {

enum class ScheduleKind : std::uint8_t { Linear, Stepwise };

std::string_view to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(std::string_view name);

// How much of the reasoning segment is removed from supervision at each
// training step. The fraction starts at 0, never decreases, and holds at
// terminal_fraction from ramp_steps on.
//
//   Linear:   rho(t) = terminal * min(1, t / ramp_steps)
//   Stepwise: rho(t) = terminal * min(1, floor(t * stages / ramp_steps) / stages)
//
// The trainer turns rho into a token count per example with
// masked_reasoning_tokens and supervises reasoning token k (1-based) iff
// k > r(t). Answer tokens are always supervised.
struct MaskSchedule {
  ScheduleKind kind = ScheduleKind::Linear;
  std::int64_t ramp_steps = 1;
  double terminal_fraction = 1.0;
  std::int64_t stages = 1;  // Stepwise only

  // No masking at any step: the explicit-CoT configuration.
  static MaskSchedule none() { return {ScheduleKind::Linear, 1, 0.0, 1}; }

  // Throws UsageError unless ramp_steps >= 1, stages >= 1 and
  // terminal_fraction is in [0, 1].
  void validate() const;

  bool operator==(const MaskSchedule&) const = default;
};

// rho(t) in [0, 1]. Throws UsageError for t < 0.
double mask_fraction(std::int64_t step, const MaskSchedule& schedule);

// r(t) = floor(rho(t) * L), computed without accumulating rounding error.
std::int64_t masked_reasoning_tokens(std::int64_t step, std::int64_t reasoning_tokens, const MaskSchedule& schedule);

// m_k(t) = 1[k > r(t)] for 1-based reasoning token index k.
bool reasoning_token_supervised(std::int64_t k, std::int64_t step, std::int64_t reasoning_tokens,
                                const MaskSchedule& schedule);

// Training steps covered by the ramp when masking spans `ramp_fraction` of
// epochs * ceil(samples / batch_size) steps. At least 1.
std::int64_t ramp_steps_for(std::int64_t samples, std::int64_t batch_size, std::int64_t epochs, double ramp_fraction);

nlohmann::ordered_json to_json(const MaskSchedule& schedule);
MaskSchedule schedule_from_json(const nlohmann::json& doc);

}  // namespace causalflip
