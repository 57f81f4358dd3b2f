#pragma once

#include <cstddef>
#include <string_view>

namespace causalflip::util {

// Code-point count of a UTF-8 string (continuation bytes are not counted).
std::size_t codepoint_count(std::string_view s);

// Byte offset of the code point at `index`; `index == codepoint_count(s)`
// maps to s.size(). Throws std::out_of_range past the end.
std::size_t byte_offset(std::string_view s, std::size_t index);

// Substring by half-open code-point range.
std::string_view codepoint_slice(std::string_view s, std::size_t begin, std::size_t end);

}  // namespace causalflip::util
