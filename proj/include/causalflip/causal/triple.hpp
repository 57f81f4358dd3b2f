#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "causalflip/causal/structure.hpp"

namespace causalflip {

// Which structure pool a triple was authored for.
enum class TriplePool : std::uint8_t { Base, Opposite };

std::string_view to_string(TriplePool pool);
TriplePool parse_triple_pool(std::string_view name);

struct EventTriple {
  std::string id;
  std::string x;
  std::string y;
  std::string z;
  TriplePool pool = TriplePool::Base;

  const std::string& phrase(Role role) const;

  // Throws ValidationError unless id and all phrases are non-empty and the
  // three phrases are pairwise distinct.
  void validate() const;

  bool operator==(const EventTriple&) const = default;
};

}  // namespace causalflip
