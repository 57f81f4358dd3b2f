#include "causalflip/bench/question.hpp"

#include <fmt/format.h>

#include "causalflip/causal/reasoning.hpp"
#include "causalflip/errors.hpp"
#include "causalflip/util/strings.hpp"

namespace causalflip {

std::string_view to_string(Category category) {
  switch (category) {
    case Category::BD: return "BD";
    case Category::BA: return "BA";
    case Category::OD: return "OD";
    case Category::OA: return "OA";
  }
  return "?";
}

std::string_view to_string(SplitTag tag) { return tag == SplitTag::Train ? "train" : "test"; }

Category parse_category(std::string_view name) {
  for (auto c : kAllCategories) {
    if (to_string(c) == name) return c;
  }
  throw ParseError(fmt::format("unknown category \"{}\"", name));
}

SplitTag parse_split_tag(std::string_view name) {
  if (name == "train") return SplitTag::Train;
  if (name == "test") return SplitTag::Test;
  throw ParseError(fmt::format("unknown split tag \"{}\"", name));
}

Category category_of(Polarity polarity, TemplateFamily family) {
  if (polarity == Polarity::Base) return family == TemplateFamily::Default ? Category::BD : Category::BA;
  return family == TemplateFamily::Default ? Category::OD : Category::OA;
}

EventTriple QuestionInstance::triple() const {
  return {triple_id, x, y, z, polarity == Polarity::Base ? TriplePool::Base : TriplePool::Opposite};
}

void QuestionInstance::validate() const {
  if (category != category_of(polarity, template_family)) {
    throw ValidationError(fmt::format("question {}: category {} does not match {}/{}", id, to_string(category),
                                      to_string(polarity), to_string(template_family)));
  }
  const auto expected = derive_label(structure(), query_for(dataset_kind, query_kind));
  if (label != expected) {
    throw ValidationError(fmt::format("question {}: label {} but {} {} derives {}", id, to_string(label),
                                      to_string(structure()), to_string(query_kind), to_string(expected)));
  }
}

void QuestionPair::validate() const {
  q1.validate();
  q2.validate();
  if (q1.pair_id != pair_id || q2.pair_id != pair_id) {
    throw ValidationError(fmt::format("pair {}: member pair_id mismatch", pair_id));
  }
  if (q1.query_kind != QueryKind::Q1 || q2.query_kind != QueryKind::Q2) {
    throw ValidationError(fmt::format("pair {}: members must be Q1 then Q2", pair_id));
  }
  if (q1.triple_id != q2.triple_id || q1.dataset_kind != q2.dataset_kind || q1.polarity != q2.polarity ||
      q1.template_family != q2.template_family || q1.x != q2.x || q1.y != q2.y || q1.z != q2.z) {
    throw ValidationError(fmt::format("pair {}: members disagree on triple or structure", pair_id));
  }
  if (q1.label == q2.label) throw ValidationError(fmt::format("pair {}: labels do not flip", pair_id));
}

std::string render_question(const EventTriple& triple, DatasetKind kind, Polarity /*polarity*/,
                            TemplateFamily family, QueryKind query, const TemplateSet& templates) {
  return util::instantiate(templates.question(kind, family, query),
                           {{"X", triple.x}, {"Y", triple.y}, {"Z", triple.z}});
}

QuestionInstance make_question(const EventTriple& triple, StructureSpec structure, TemplateFamily family,
                               QueryKind query, std::string pair_id, const TemplateSet& templates) {
  const auto causal_query = query_for(structure.kind, query);
  QuestionInstance q;
  q.id = fmt::format("{}-{}", pair_id, to_string(query));
  q.pair_id = std::move(pair_id);
  q.triple_id = triple.id;
  q.dataset_kind = structure.kind;
  q.polarity = structure.polarity;
  q.template_family = family;
  q.query_kind = query;
  q.question_text = render_question(triple, structure.kind, structure.polarity, family, query, templates);
  q.label = derive_label(structure, causal_query);
  q.reasoning_text = reasoning_text(structure, causal_query, triple, templates);
  q.category = category_of(structure.polarity, family);
  q.x = triple.x;
  q.y = triple.y;
  q.z = triple.z;
  return q;
}

QuestionPair make_pair(const EventTriple& triple, StructureSpec structure, TemplateFamily family,
                       std::string pair_id, const TemplateSet& templates) {
  QuestionPair pair;
  pair.pair_id = pair_id;
  pair.q1 = make_question(triple, structure, family, QueryKind::Q1, pair_id, templates);
  pair.q2 = make_question(triple, structure, family, QueryKind::Q2, pair_id, templates);
  return pair;
}

}  // namespace causalflip
