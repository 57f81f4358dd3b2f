#include "causalflip/util/utf8.hpp"

#include <stdexcept>

namespace causalflip::util {

namespace {
bool is_continuation(char c) { return (static_cast<unsigned char>(c) & 0xC0) == 0x80; }
}  // namespace

std::size_t codepoint_count(std::string_view s) {
  std::size_t count = 0;
  for (char c : s) {
    if (!is_continuation(c)) ++count;
  }
  return count;
}

std::size_t byte_offset(std::string_view s, std::size_t index) {
  std::size_t seen = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (is_continuation(s[i])) continue;
    if (seen == index) return i;
    ++seen;
  }
  if (seen == index) return s.size();
  throw std::out_of_range("code point index past end of string");
}

std::string_view codepoint_slice(std::string_view s, std::size_t begin, std::size_t end) {
  const auto b = byte_offset(s, begin);
  const auto e = byte_offset(s, end);
  return s.substr(b, e - b);
}

}  // namespace causalflip::util
