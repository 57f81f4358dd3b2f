#pragma once

#include <cstdint>
#include <string_view>

#include "causalflip/causal/structure.hpp"

namespace causalflip {

enum class Answer : std::uint8_t { Yes, No, Invalid };

std::string_view to_string(Answer answer);
Answer parse_answer_name(std::string_view name);

enum class ParseMode : std::uint8_t {
  Strict,   // bare, case-sensitive "Yes" / "No" only
  Lenient,  // also case-insensitive and tolerant of trailing punctuation
};

// Looks at the last line of the trimmed completion. Strict mode accepts only
// the exact words "Yes" and "No"; everything else is Invalid.
Answer parse_answer(std::string_view completion, ParseMode mode = ParseMode::Strict);

inline bool matches(Answer answer, Label gold) {
  return (answer == Answer::Yes && gold == Label::Yes) || (answer == Answer::No && gold == Label::No);
}

}  // namespace causalflip
