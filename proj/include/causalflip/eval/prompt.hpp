#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "causalflip/bench/question.hpp"

namespace causalflip {

enum class Condition : std::uint8_t { Clean, Noisy };

std::string_view to_string(Condition condition);
Condition parse_condition(std::string_view name);

inline constexpr std::string_view kDefaultFormatInstruction =
    "Answer the following causal question. You may reason before answering, but the last line of your "
    "response must contain only the single word Yes or No.";

struct PromptOptions {
  std::string format_instruction{kDefaultFormatInstruction};
  // Appended after the question under Condition::Noisy, i.e. ahead of any
  // reasoning the model generates.
  std::string noisy_prefix;
};

struct EvalPrompt {
  std::string question_id;
  std::string text;
  Condition condition = Condition::Clean;
};

// Clean: instruction "\n" question. Noisy: instruction "\n" question "\n"
// prefix (the prefix is skipped when empty).
EvalPrompt build_prompt(const QuestionInstance& question, Condition condition, const PromptOptions& options = {});

}  // namespace causalflip
