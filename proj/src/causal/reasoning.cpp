#include "causalflip/causal/reasoning.hpp"

#include "causalflip/util/strings.hpp"

namespace causalflip {

namespace {

using Bindings = std::map<std::string, std::string, std::less<>>;

Bindings role_bindings(const EventTriple& triple) {
  return {{"X", triple.x}, {"Y", triple.y}, {"Z", triple.z}};
}

const std::string& edge_template(const ReasoningTemplates& t, EdgeFact fact) {
  switch (fact) {
    case EdgeFact::Present: return t.edge_present;
    case EdgeFact::AbsentNoPath: return t.edge_absent_no_path;
    case EdgeFact::AbsentIndirect: return t.edge_absent_indirect;
  }
  return t.edge_present;
}

}  // namespace

std::vector<ReasoningStep> reasoning_steps(StructureSpec structure, const CausalQuery& query) {
  const auto graph = edges_for(structure);
  std::vector<ReasoningStep> steps;
  for (const auto& edge : query.asserted.edges()) {
    EdgeFact fact = EdgeFact::Present;
    if (!graph.contains(edge)) {
      fact = graph.reachable(edge.from, edge.to) ? EdgeFact::AbsentIndirect : EdgeFact::AbsentNoPath;
    }
    steps.push_back({edge, fact});
  }
  return steps;
}

std::string reasoning_text(StructureSpec structure, const CausalQuery& query, const EventTriple& triple,
                           const TemplateSet& templates) {
  const auto& rt = templates.reasoning();
  const auto bindings = role_bindings(triple);
  std::string text;
  for (const auto& step : reasoning_steps(structure, query)) {
    const Bindings endpoints{{"from", triple.phrase(step.edge.from)}, {"to", triple.phrase(step.edge.to)}};
    if (!text.empty()) text += rt.conjunction;
    text += util::instantiate(edge_template(rt, step.fact), endpoints);
  }
  text += rt.conjunction;
  text += util::instantiate(templates.structural_clause(structure, query.query), bindings);
  text += rt.conclusion;
  return text;
}

}  // namespace causalflip
