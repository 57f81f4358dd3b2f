#pragma once

#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace causalflip::util {

using OrderedJson = nlohmann::ordered_json;

// Calls `fn(record, line_number)` for each non-blank line. Lines that are not
// valid JSON objects raise ParseError carrying the line number.
void for_each_jsonl(const std::string& path, const std::function<void(const nlohmann::json&, std::size_t)>& fn);

// Serializes one record per line, '\n' terminated, no trailing whitespace.
std::string to_jsonl(const std::vector<OrderedJson>& records);

void write_jsonl(const std::string& path, const std::vector<OrderedJson>& records);

// Typed field access with line-numbered ParseErrors.
std::string require_string(const nlohmann::json& record, const char* field, std::size_t line);

}  // namespace causalflip::util
