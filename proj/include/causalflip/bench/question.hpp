#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "causalflip/causal/structure.hpp"
#include "causalflip/causal/templates.hpp"
#include "causalflip/causal/triple.hpp"

namespace causalflip {

enum class Category : std::uint8_t { BD, BA, OD, OA };
enum class SplitTag : std::uint8_t { Train, Test };

inline constexpr std::array<Category, 4> kAllCategories{Category::BD, Category::BA, Category::OD, Category::OA};

std::string_view to_string(Category category);
std::string_view to_string(SplitTag tag);
Category parse_category(std::string_view name);
SplitTag parse_split_tag(std::string_view name);

Category category_of(Polarity polarity, TemplateFamily family);

struct QuestionInstance {
  std::string id;
  std::string pair_id;
  std::string triple_id;
  DatasetKind dataset_kind = DatasetKind::Confounder;
  Polarity polarity = Polarity::Base;
  TemplateFamily template_family = TemplateFamily::Default;
  QueryKind query_kind = QueryKind::Q1;
  std::string question_text;
  Label label = Label::No;
  std::string reasoning_text;
  Category category = Category::BD;
  // Event phrases the question was rendered from; needed to re-render after
  // replacements and for count-based audits.
  std::string x;
  std::string y;
  std::string z;
  std::optional<SplitTag> split;

  StructureSpec structure() const { return {dataset_kind, polarity}; }
  EventTriple triple() const;

  // Throws ValidationError if category or label disagree with the metadata.
  void validate() const;

  bool operator==(const QuestionInstance&) const = default;
};

struct QuestionPair {
  std::string pair_id;
  QuestionInstance q1;
  QuestionInstance q2;

  Category category() const { return q1.category; }

  // Shared metadata, Q1/Q2 roles and flipped labels.
  void validate() const;

  bool operator==(const QuestionPair&) const = default;
};

// Renders the (kind, family, query) template. Polarity never changes the
// wording; it is accepted so callers can pass a full question key.
std::string render_question(const EventTriple& triple, DatasetKind kind, Polarity polarity, TemplateFamily family,
                            QueryKind query, const TemplateSet& templates = TemplateSet::defaults());

// Builds a fully rendered instance with its label derived from the structure.
QuestionInstance make_question(const EventTriple& triple, StructureSpec structure, TemplateFamily family,
                               QueryKind query, std::string pair_id, const TemplateSet& templates);

QuestionPair make_pair(const EventTriple& triple, StructureSpec structure, TemplateFamily family,
                       std::string pair_id, const TemplateSet& templates);

}  // namespace causalflip
