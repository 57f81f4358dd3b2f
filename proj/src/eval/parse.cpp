#include "causalflip/eval/parse.hpp"

#include <fmt/format.h>

#include "causalflip/errors.hpp"
#include "causalflip/util/strings.hpp"

namespace causalflip {

std::string_view to_string(Answer answer) {
  switch (answer) {
    case Answer::Yes: return "Yes";
    case Answer::No: return "No";
    case Answer::Invalid: return "Invalid";
  }
  return "?";
}

Answer parse_answer_name(std::string_view name) {
  if (name == "Yes") return Answer::Yes;
  if (name == "No") return Answer::No;
  if (name == "Invalid") return Answer::Invalid;
  throw ParseError(fmt::format("unknown answer \"{}\"", name));
}

namespace {

std::string_view last_line(std::string_view text) {
  text = util::trim(text);
  const auto nl = text.find_last_of('\n');
  return util::trim(nl == std::string_view::npos ? text : text.substr(nl + 1));
}

Answer lenient(std::string_view line) {
  auto word = util::to_lower(line);
  std::string_view v = word;
  if (v.starts_with("answer:")) v = util::trim(v.substr(7));
  const auto strip = std::string_view("*\"'`.!");
  while (!v.empty() && strip.find(v.front()) != std::string_view::npos) v.remove_prefix(1);
  while (!v.empty() && strip.find(v.back()) != std::string_view::npos) v.remove_suffix(1);
  if (v == "yes") return Answer::Yes;
  if (v == "no") return Answer::No;
  return Answer::Invalid;
}

}  // namespace

Answer parse_answer(std::string_view completion, ParseMode mode) {
  const auto line = last_line(completion);
  if (mode == ParseMode::Lenient) return lenient(line);
  if (line == "Yes") return Answer::Yes;
  if (line == "No") return Answer::No;
  return Answer::Invalid;
}

}  // namespace causalflip
