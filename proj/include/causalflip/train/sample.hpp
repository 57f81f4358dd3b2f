#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "causalflip/bench/question.hpp"

namespace causalflip {

enum class TrainingMode : std::uint8_t { NoCot, ExplicitCot, ImplicitCot };

std::string_view to_string(TrainingMode mode);  // nocot | explicit | implicit
TrainingMode parse_training_mode(std::string_view name);

// Half-open [begin, end) offsets in Unicode code points into full_text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

// Layout: question "\n" [reasoning "\n"] answer.
inline constexpr std::string_view kSegmentSeparator = "\n";
// Placed between an injected prefix and the original reasoning.
inline constexpr std::string_view kPrefixSeparator = " ";

struct TrainingSample {
  std::string question_id;
  TrainingMode mode = TrainingMode::NoCot;
  std::string full_text;
  Span question_span;
  std::optional<Span> reasoning_span;
  Span answer_span;
  Label label = Label::No;
  bool noisy = false;

  std::string_view segment(Span span) const;
  std::string_view question_text() const { return segment(question_span); }
  std::string_view answer_text() const { return segment(answer_span); }
  std::string_view reasoning_text() const;  // empty for NoCot

  // Span ordering/coverage, answer text and mode consistency.
  void validate() const;

  bool operator==(const TrainingSample&) const = default;
};

// Implicit and explicit samples are textually identical; masking is applied
// at loss time from the exported schedule. Throws ValidationError when a CoT
// mode meets a question without reasoning text.
TrainingSample assemble_sample(const QuestionInstance& question, TrainingMode mode);

struct NoisyPrefixSpec {
  std::string text;

  // The shipped default paragraph.
  static NoisyPrefixSpec defaults();
  // Reads and trims a prefix file.
  static NoisyPrefixSpec load(const std::string& path);
};

// Throws ValidationError if the prefix mentions any of `phrases`
// (case-insensitive).
void validate_prefix(const NoisyPrefixSpec& spec, std::span<const std::string> phrases);

// Inserts the prefix at the start of the reasoning span. Question, answer and
// label are untouched and the original reasoning follows the prefix verbatim.
// An empty prefix returns the sample unchanged. Throws ModeError for NoCot
// samples or samples that already carry a prefix.
TrainingSample inject_noisy_prefix(const TrainingSample& sample, const NoisyPrefixSpec& spec);

}  // namespace causalflip
