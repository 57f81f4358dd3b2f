#pragma once

#include <string>
#include <vector>

#include "causalflip/causal/structure.hpp"
#include "causalflip/causal/templates.hpp"
#include "causalflip/causal/triple.hpp"

namespace causalflip {

enum class EdgeFact : std::uint8_t {
  Present,
  AbsentNoPath,    // no directed path at all
  AbsentIndirect,  // no edge, but reachable through the third node
};

struct ReasoningStep {
  Edge edge;
  EdgeFact fact;

  bool operator==(const ReasoningStep&) const = default;
};

// One step per asserted edge, in the query's edge order, each classified
// against edges_for(structure).
std::vector<ReasoningStep> reasoning_steps(StructureSpec structure, const CausalQuery& query);

// "<edge facts> AND <structural clause>, therefore", with roles bound to the
// triple's phrases. Deterministic.
std::string reasoning_text(StructureSpec structure, const CausalQuery& query, const EventTriple& triple,
                           const TemplateSet& templates = TemplateSet::defaults());

}  // namespace causalflip
