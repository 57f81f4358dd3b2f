#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace causalflip {

enum class DatasetKind : std::uint8_t { Confounder, Chain, Collider };
enum class Polarity : std::uint8_t { Base, Opposite };
enum class QueryKind : std::uint8_t { Q1, Q2 };
enum class Label : std::uint8_t { Yes, No };

// Symbolic node of a three-event causal graph. Phrases are bound only when
// text is rendered.
enum class Role : std::uint8_t { X, Y, Z };

inline constexpr std::array<DatasetKind, 3> kAllDatasetKinds{DatasetKind::Confounder, DatasetKind::Chain,
                                                             DatasetKind::Collider};
inline constexpr std::array<Polarity, 2> kAllPolarities{Polarity::Base, Polarity::Opposite};
inline constexpr std::array<QueryKind, 2> kAllQueryKinds{QueryKind::Q1, QueryKind::Q2};

std::string_view to_string(DatasetKind kind);
std::string_view to_string(Polarity polarity);
std::string_view to_string(QueryKind query);
std::string_view to_string(Label label);
std::string_view to_string(Role role);

// Inverse of to_string. Throw ParseError on unknown names.
DatasetKind parse_dataset_kind(std::string_view name);
Polarity parse_polarity(std::string_view name);
QueryKind parse_query_kind(std::string_view name);
Label parse_label(std::string_view name);

inline Label flip(Label label) { return label == Label::Yes ? Label::No : Label::Yes; }

struct Edge {
  Role from;
  Role to;

  auto operator<=>(const Edge&) const = default;
};

std::string to_string(Edge edge);  // "X->Y"

// Directed edges over {X, Y, Z}: no self-loops, no duplicates, acyclic, at
// most two edges. Stored sorted so equal sets compare equal.
class EdgeSet {
 public:
  EdgeSet() = default;
  // Throws ValidationError when the invariants do not hold.
  EdgeSet(std::initializer_list<Edge> edges);
  explicit EdgeSet(std::span<const Edge> edges);

  bool contains(Edge edge) const;
  bool contains_all(const EdgeSet& other) const;
  // True if a directed path of length >= 1 leads from `from` to `to`.
  bool reachable(Role from, Role to) const;

  std::span<const Edge> edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  bool operator==(const EdgeSet&) const = default;

 private:
  std::vector<Edge> edges_;
};

struct StructureSpec {
  DatasetKind kind;
  Polarity polarity;

  bool operator==(const StructureSpec&) const = default;
};

// The six valid structures, in (kind, polarity) order.
std::array<StructureSpec, 6> all_structures();

std::string to_string(StructureSpec structure);  // "confounder-base"

struct CausalQuery {
  DatasetKind kind;
  QueryKind query;
  EdgeSet asserted;
};

// Canonical causal graph of a structure.
EdgeSet edges_for(StructureSpec structure);

// Edges a question type asserts: Q1 a single direct edge, Q2 a two-edge
// conjunction.
CausalQuery query_for(DatasetKind kind, QueryKind query);

// Yes iff every asserted edge is in the graph. This is a pure function of
// the two edge sets.
Label derive_label(const EdgeSet& graph, const EdgeSet& asserted);

// Throws UsageError when the query was built for another dataset kind.
Label derive_label(StructureSpec structure, const CausalQuery& query);

}  // namespace causalflip
