#include "causalflip/bench/triples.hpp"

#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "causalflip/errors.hpp"
#include "causalflip/util/strings.hpp"

namespace causalflip {

namespace {

void finish(std::vector<EventTriple>& triples, std::size_t line, EventTriple triple, std::set<std::string>& ids) {
  try {
    triple.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("line {}: {}", line, e.what()));
  }
  if (!ids.insert(triple.id).second) {
    throw ValidationError(fmt::format("line {}: duplicate triple id \"{}\"", line, triple.id));
  }
  triples.push_back(std::move(triple));
}

}  // namespace

std::vector<EventTriple> parse_triples_tsv(const std::string& text) {
  std::vector<EventTriple> triples;
  std::set<std::string> ids;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (util::trim(raw).empty() || util::trim(raw).front() == '#') continue;
    auto cells = util::split(raw, '\t');
    if (util::trim(cells.front()) == "id") continue;
    if (cells.size() != 5) {
      throw ParseError(fmt::format("expected 5 tab-separated fields (id, x, y, z, pool), found {} in \"{}\"",
                                   cells.size(), raw),
                       number);
    }
    EventTriple t;
    t.id = std::string(util::trim(cells[0]));
    t.x = std::string(util::trim(cells[1]));
    t.y = std::string(util::trim(cells[2]));
    t.z = std::string(util::trim(cells[3]));
    try {
      t.pool = parse_triple_pool(util::trim(cells[4]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), number);
    }
    finish(triples, number, std::move(t), ids);
  }
  return triples;
}

std::vector<EventTriple> parse_triples_jsonl(const std::string& text) {
  std::vector<EventTriple> triples;
  std::set<std::string> ids;
  std::istringstream in(text);
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (util::trim(raw).empty()) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error&) {
      throw ParseError("invalid JSON", number);
    }
    if (!record.is_object()) throw ParseError("expected a JSON object", number);
    const auto field = [&](const char* name) {
      const auto it = record.find(name);
      if (it == record.end() || !it->is_string()) {
        throw ParseError(fmt::format("row is missing string field \"{}\"", name), number);
      }
      return std::string(util::trim(it->get<std::string>()));
    };
    EventTriple t;
    t.id = field("id");
    t.x = field("x");
    t.y = field("y");
    t.z = field("z");
    try {
      t.pool = parse_triple_pool(field("pool"));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), number);
    }
    finish(triples, number, std::move(t), ids);
  }
  return triples;
}

std::vector<EventTriple> load_triples(const std::string& path) {
  const auto text = util::read_file(path);
  try {
    if (path.ends_with(".jsonl")) return parse_triples_jsonl(text);
    return parse_triples_tsv(text);
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path, e.what()));
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace causalflip
