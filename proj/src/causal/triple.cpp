#include "causalflip/causal/triple.hpp"

#include <fmt/format.h>

#include "causalflip/errors.hpp"

namespace causalflip {

std::string_view to_string(TriplePool pool) { return pool == TriplePool::Base ? "base" : "opposite"; }

TriplePool parse_triple_pool(std::string_view name) {
  if (name == "base") return TriplePool::Base;
  if (name == "opposite") return TriplePool::Opposite;
  throw ParseError(fmt::format("unknown pool \"{}\" (expected base or opposite)", name));
}

const std::string& EventTriple::phrase(Role role) const {
  switch (role) {
    case Role::X: return x;
    case Role::Y: return y;
    case Role::Z: return z;
  }
  return x;
}

void EventTriple::validate() const {
  if (id.empty()) throw ValidationError("triple id is empty");
  for (auto role : {Role::X, Role::Y, Role::Z}) {
    if (phrase(role).empty()) {
      throw ValidationError(fmt::format("triple {}: phrase {} is empty", id, to_string(role)));
    }
  }
  if (x == y || x == z || y == z) {
    throw ValidationError(fmt::format("triple {}: phrases must be pairwise distinct", id));
  }
}

}  // namespace causalflip
