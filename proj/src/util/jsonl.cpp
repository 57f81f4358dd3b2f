#include "causalflip/util/jsonl.hpp"

#include <fstream>

#include <fmt/format.h>

#include "causalflip/errors.hpp"
#include "causalflip/util/strings.hpp"

namespace causalflip::util {

void for_each_jsonl(const std::string& path, const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open {} for reading", path));
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(fmt::format("{}: invalid JSON ({})", path, e.what()), number);
    }
    if (!record.is_object()) throw ParseError(fmt::format("{}: expected a JSON object", path), number);
    fn(record, number);
  }
}

std::string to_jsonl(const std::vector<OrderedJson>& records) {
  std::string out;
  for (const auto& record : records) {
    out += record.dump();
    out.push_back('\n');
  }
  return out;
}

void write_jsonl(const std::string& path, const std::vector<OrderedJson>& records) {
  write_file(path, to_jsonl(records));
}

std::string require_string(const nlohmann::json& record, const char* field, std::size_t line) {
  const auto it = record.find(field);
  if (it == record.end() || !it->is_string()) {
    throw ParseError(fmt::format("missing or non-string field \"{}\"", field), line);
  }
  return it->get<std::string>();
}

}  // namespace causalflip::util
