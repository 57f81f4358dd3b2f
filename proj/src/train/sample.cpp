#include "causalflip/train/sample.hpp"

#include <fmt/format.h>

#include "causalflip/embedded_config.hpp"
#include "causalflip/errors.hpp"
#include "causalflip/util/strings.hpp"
#include "causalflip/util/utf8.hpp"

namespace causalflip {

std::string_view to_string(TrainingMode mode) {
  switch (mode) {
    case TrainingMode::NoCot: return "nocot";
    case TrainingMode::ExplicitCot: return "explicit";
    case TrainingMode::ImplicitCot: return "implicit";
  }
  return "?";
}

TrainingMode parse_training_mode(std::string_view name) {
  if (name == "nocot") return TrainingMode::NoCot;
  if (name == "explicit") return TrainingMode::ExplicitCot;
  if (name == "implicit") return TrainingMode::ImplicitCot;
  throw ParseError(fmt::format("unknown training mode \"{}\"", name));
}

std::string_view TrainingSample::segment(Span span) const {
  return util::codepoint_slice(full_text, span.begin, span.end);
}

std::string_view TrainingSample::reasoning_text() const {
  return reasoning_span ? segment(*reasoning_span) : std::string_view{};
}

void TrainingSample::validate() const {
  const auto fail = [&](std::string_view why) {
    throw ValidationError(fmt::format("sample {}: {}", question_id, why));
  };
  const auto sep = util::codepoint_count(kSegmentSeparator);
  const auto length = util::codepoint_count(full_text);
  if (question_span.begin != 0 || question_span.end < question_span.begin) fail("question span must start at 0");
  if (answer_span.end != length || answer_span.end < answer_span.begin) fail("answer span must end the text");
  if ((mode == TrainingMode::NoCot) == reasoning_span.has_value()) fail("reasoning span presence does not match mode");
  Span previous = question_span;
  for (const auto* span : {reasoning_span ? &*reasoning_span : nullptr, &answer_span}) {
    if (span == nullptr) continue;
    if (span->begin != previous.end + sep || span->end < span->begin) fail("spans are not ordered and separated");
    if (segment({previous.end, span->begin}) != kSegmentSeparator) fail("unexpected text between segments");
    previous = *span;
  }
  if (answer_text() != to_string(label)) fail("answer text must be exactly the label");
}

TrainingSample assemble_sample(const QuestionInstance& question, TrainingMode mode) {
  TrainingSample s;
  s.question_id = question.id;
  s.mode = mode;
  s.label = question.label;
  const auto answer = to_string(question.label);
  const auto sep = util::codepoint_count(kSegmentSeparator);

  s.full_text = question.question_text;
  s.question_span = {0, util::codepoint_count(question.question_text)};
  std::size_t cursor = s.question_span.end;
  if (mode != TrainingMode::NoCot) {
    if (util::trim(question.reasoning_text).empty()) {
      throw ValidationError(fmt::format("question {} has no reasoning text for {} export", question.id, to_string(mode)));
    }
    s.full_text += kSegmentSeparator;
    s.full_text += question.reasoning_text;
    s.reasoning_span = Span{cursor + sep, cursor + sep + util::codepoint_count(question.reasoning_text)};
    cursor = s.reasoning_span->end;
  }
  s.full_text += kSegmentSeparator;
  s.full_text += answer;
  s.answer_span = {cursor + sep, cursor + sep + util::codepoint_count(answer)};
  return s;
}

NoisyPrefixSpec NoisyPrefixSpec::defaults() { return {std::string(util::trim(embedded::kNoisyPrefix))}; }

NoisyPrefixSpec NoisyPrefixSpec::load(const std::string& path) {
  return {std::string(util::trim(util::read_file(path)))};
}

void validate_prefix(const NoisyPrefixSpec& spec, std::span<const std::string> phrases) {
  for (const auto& phrase : phrases) {
    if (!phrase.empty() && util::contains_case_insensitive(spec.text, phrase)) {
      throw ValidationError(fmt::format("noisy prefix mentions the event phrase \"{}\"", phrase));
    }
  }
}

TrainingSample inject_noisy_prefix(const TrainingSample& sample, const NoisyPrefixSpec& spec) {
  if (sample.mode == TrainingMode::NoCot || !sample.reasoning_span) {
    throw ModeError(fmt::format("sample {}: a noisy prefix needs a reasoning segment", sample.question_id));
  }
  if (sample.noisy) throw ModeError(fmt::format("sample {}: noisy prefix already injected", sample.question_id));
  if (spec.text.empty()) return sample;

  const auto inserted = spec.text + std::string(kPrefixSeparator);
  const auto shift = util::codepoint_count(inserted);
  const auto at = util::byte_offset(sample.full_text, sample.reasoning_span->begin);

  TrainingSample out = sample;
  out.full_text.insert(at, inserted);
  out.reasoning_span->end += shift;
  out.answer_span.begin += shift;
  out.answer_span.end += shift;
  out.noisy = true;
  return out;
}

}  // namespace causalflip
