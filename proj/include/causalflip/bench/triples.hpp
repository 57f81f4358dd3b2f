#pragma once

#include <string>
#include <vector>

#include "causalflip/causal/triple.hpp"

namespace causalflip {

// Reads event triples from a file. Two layouts are accepted:
//   *.jsonl  one object per line: {"id", "x", "y", "z", "pool"}
//   other    tab-separated: id, x, y, z, pool (an optional header row whose
//            first cell is "id" is skipped; '#' lines are comments)
// Throws ParseError (with line number) on malformed rows and ValidationError
// on invalid triples or duplicate ids.
std::vector<EventTriple> load_triples(const std::string& path);

std::vector<EventTriple> parse_triples_tsv(const std::string& text);
std::vector<EventTriple> parse_triples_jsonl(const std::string& text);

}  // namespace causalflip
