#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace causalflip::util {

std::string_view trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char delim);

std::string to_lower(std::string_view s);

bool contains_case_insensitive(std::string_view haystack, std::string_view needle);

// Number of non-overlapping occurrences of `needle` in `haystack`.
std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

// Single-pass substitution of `{name}` placeholders. Substituted values are
// never rescanned, so a phrase containing braces is copied verbatim. Throws
// ConfigError on an unknown or unterminated placeholder.
std::string instantiate(std::string_view tmpl, const std::map<std::string, std::string, std::less<>>& values);

// Placeholder names used by a template, in order of first appearance.
std::vector<std::string> placeholders(std::string_view tmpl);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// ISO-8601 UTC timestamp, second resolution.
std::string utc_timestamp();

}  // namespace causalflip::util
