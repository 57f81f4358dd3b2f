#include "causalflip/eval/prompt.hpp"

#include <fmt/format.h>

#include "causalflip/errors.hpp"

namespace causalflip {

std::string_view to_string(Condition condition) { return condition == Condition::Clean ? "clean" : "noisy"; }

Condition parse_condition(std::string_view name) {
  if (name == "clean") return Condition::Clean;
  if (name == "noisy") return Condition::Noisy;
  throw ParseError(fmt::format("unknown condition \"{}\"", name));
}

EvalPrompt build_prompt(const QuestionInstance& question, Condition condition, const PromptOptions& options) {
  EvalPrompt p{question.id, {}, condition};
  if (!options.format_instruction.empty()) {
    p.text = options.format_instruction;
    p.text += '\n';
  }
  p.text += question.question_text;
  if (condition == Condition::Noisy && !options.noisy_prefix.empty()) {
    p.text += '\n';
    p.text += options.noisy_prefix;
  }
  return p;
}

}  // namespace causalflip
