#include "causalflip/causal/structure.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "causalflip/errors.hpp"

namespace causalflip {

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::Confounder: return "confounder";
    case DatasetKind::Chain: return "chain";
    case DatasetKind::Collider: return "collider";
  }
  return "?";
}

std::string_view to_string(Polarity polarity) { return polarity == Polarity::Base ? "base" : "opposite"; }
std::string_view to_string(QueryKind query) { return query == QueryKind::Q1 ? "q1" : "q2"; }
std::string_view to_string(Label label) { return label == Label::Yes ? "Yes" : "No"; }

std::string_view to_string(Role role) {
  switch (role) {
    case Role::X: return "X";
    case Role::Y: return "Y";
    case Role::Z: return "Z";
  }
  return "?";
}

DatasetKind parse_dataset_kind(std::string_view name) {
  for (auto kind : kAllDatasetKinds) {
    if (to_string(kind) == name) return kind;
  }
  throw ParseError(fmt::format("unknown dataset kind \"{}\"", name));
}

Polarity parse_polarity(std::string_view name) {
  for (auto polarity : kAllPolarities) {
    if (to_string(polarity) == name) return polarity;
  }
  throw ParseError(fmt::format("unknown polarity \"{}\"", name));
}

QueryKind parse_query_kind(std::string_view name) {
  for (auto query : kAllQueryKinds) {
    if (to_string(query) == name) return query;
  }
  throw ParseError(fmt::format("unknown query kind \"{}\"", name));
}

Label parse_label(std::string_view name) {
  if (name == "Yes") return Label::Yes;
  if (name == "No") return Label::No;
  throw ParseError(fmt::format("unknown label \"{}\"", name));
}

std::string to_string(Edge edge) { return fmt::format("{}->{}", to_string(edge.from), to_string(edge.to)); }

EdgeSet::EdgeSet(std::initializer_list<Edge> edges) : EdgeSet(std::span<const Edge>(edges.begin(), edges.size())) {}

EdgeSet::EdgeSet(std::span<const Edge> edges) : edges_(edges.begin(), edges.end()) {
  std::sort(edges_.begin(), edges_.end());
  if (edges_.size() > 2) throw ValidationError("an edge set holds at most two edges");
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw ValidationError("duplicate edge");
  }
  for (const auto& e : edges_) {
    if (e.from == e.to) throw ValidationError(fmt::format("self-loop {}", to_string(e)));
  }
  // With two edges over three nodes the only possible cycle is A->B, B->A.
  if (edges_.size() == 2 && edges_[0].from == edges_[1].to && edges_[0].to == edges_[1].from) {
    throw ValidationError("cyclic edge set");
  }
}

bool EdgeSet::contains(Edge edge) const { return std::binary_search(edges_.begin(), edges_.end(), edge); }

bool EdgeSet::contains_all(const EdgeSet& other) const {
  return std::all_of(other.edges_.begin(), other.edges_.end(), [this](Edge e) { return contains(e); });
}

bool EdgeSet::reachable(Role from, Role to) const {
  std::vector<Role> frontier{from};
  std::vector<Role> seen;
  while (!frontier.empty()) {
    const Role node = frontier.back();
    frontier.pop_back();
    for (const auto& e : edges_) {
      if (e.from != node) continue;
      if (e.to == to) return true;
      if (std::find(seen.begin(), seen.end(), e.to) == seen.end()) {
        seen.push_back(e.to);
        frontier.push_back(e.to);
      }
    }
  }
  return false;
}

std::array<StructureSpec, 6> all_structures() {
  std::array<StructureSpec, 6> out{};
  std::size_t i = 0;
  for (auto kind : kAllDatasetKinds) {
    for (auto polarity : kAllPolarities) out[i++] = {kind, polarity};
  }
  return out;
}

std::string to_string(StructureSpec structure) {
  return fmt::format("{}-{}", to_string(structure.kind), to_string(structure.polarity));
}

EdgeSet edges_for(StructureSpec structure) {
  using enum Role;
  const bool base = structure.polarity == Polarity::Base;
  switch (structure.kind) {
    case DatasetKind::Confounder:
      return base ? EdgeSet{{Z, X}, {Z, Y}} : EdgeSet{{X, Y}};
    case DatasetKind::Chain:
      return base ? EdgeSet{{X, Y}, {Y, Z}} : EdgeSet{{X, Z}};
    case DatasetKind::Collider:
      return base ? EdgeSet{{X, Z}, {Y, Z}} : EdgeSet{{X, Y}};
  }
  throw UsageError("invalid structure");
}

CausalQuery query_for(DatasetKind kind, QueryKind query) {
  using enum Role;
  const bool direct = query == QueryKind::Q1;
  switch (kind) {
    case DatasetKind::Confounder:
      return {kind, query, direct ? EdgeSet{{X, Y}} : EdgeSet{{Z, X}, {Z, Y}}};
    case DatasetKind::Chain:
      return {kind, query, direct ? EdgeSet{{X, Z}} : EdgeSet{{X, Y}, {Y, Z}}};
    case DatasetKind::Collider:
      return {kind, query, direct ? EdgeSet{{X, Y}} : EdgeSet{{X, Z}, {Y, Z}}};
  }
  throw UsageError("invalid dataset kind");
}

Label derive_label(const EdgeSet& graph, const EdgeSet& asserted) {
  return graph.contains_all(asserted) ? Label::Yes : Label::No;
}

Label derive_label(StructureSpec structure, const CausalQuery& query) {
  if (structure.kind != query.kind) {
    throw UsageError(fmt::format("query for {} cannot be labeled against structure {}", to_string(query.kind),
                                 to_string(structure)));
  }
  return derive_label(edges_for(structure), query.asserted);
}

}  // namespace causalflip
