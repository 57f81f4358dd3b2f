#include <map>
#include <tuple>

#include <gtest/gtest.h>

#include "causalflip/causal/reasoning.hpp"
#include "causalflip/causal/structure.hpp"
#include "causalflip/causal/templates.hpp"
#include "causalflip/errors.hpp"

namespace causalflip {
namespace {

using enum Role;

// Hand-transcribed: under every Base structure question (i) is "No" and
// question (ii) is "Yes"; the opposite structure flips both.
const std::map<std::tuple<DatasetKind, Polarity, QueryKind>, Label> kTruth = {
    {{DatasetKind::Confounder, Polarity::Base, QueryKind::Q1}, Label::No},
    {{DatasetKind::Confounder, Polarity::Base, QueryKind::Q2}, Label::Yes},
    {{DatasetKind::Confounder, Polarity::Opposite, QueryKind::Q1}, Label::Yes},
    {{DatasetKind::Confounder, Polarity::Opposite, QueryKind::Q2}, Label::No},
    {{DatasetKind::Chain, Polarity::Base, QueryKind::Q1}, Label::No},
    {{DatasetKind::Chain, Polarity::Base, QueryKind::Q2}, Label::Yes},
    {{DatasetKind::Chain, Polarity::Opposite, QueryKind::Q1}, Label::Yes},
    {{DatasetKind::Chain, Polarity::Opposite, QueryKind::Q2}, Label::No},
    {{DatasetKind::Collider, Polarity::Base, QueryKind::Q1}, Label::No},
    {{DatasetKind::Collider, Polarity::Base, QueryKind::Q2}, Label::Yes},
    {{DatasetKind::Collider, Polarity::Opposite, QueryKind::Q1}, Label::Yes},
    {{DatasetKind::Collider, Polarity::Opposite, QueryKind::Q2}, Label::No},
};

TEST(DeriveLabel, MatchesTruthTableForAllTwelveCells) {
  std::size_t checked = 0;
  for (auto structure : all_structures()) {
    for (auto q : kAllQueryKinds) {
      const auto expected = kTruth.at({structure.kind, structure.polarity, q});
      EXPECT_EQ(derive_label(structure, query_for(structure.kind, q)), expected)
          << to_string(structure) << " " << to_string(q);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 12u);
}

TEST(DeriveLabel, QueriesFlipWithinEveryStructure) {
  for (auto structure : all_structures()) {
    const auto q1 = derive_label(structure, query_for(structure.kind, QueryKind::Q1));
    const auto q2 = derive_label(structure, query_for(structure.kind, QueryKind::Q2));
    EXPECT_EQ(q2, flip(q1)) << to_string(structure);
  }
}

TEST(DeriveLabel, PolarityFlipsEveryQuery) {
  for (auto kind : kAllDatasetKinds) {
    for (auto q : kAllQueryKinds) {
      const auto query = query_for(kind, q);
      EXPECT_EQ(derive_label({kind, Polarity::Base}, query), flip(derive_label({kind, Polarity::Opposite}, query)));
    }
  }
}

TEST(DeriveLabel, EdgeSetFormIsSubsetTest) {
  const EdgeSet graph{{Z, X}, {Z, Y}};
  EXPECT_EQ(derive_label(graph, EdgeSet{{Z, X}}), Label::Yes);
  EXPECT_EQ(derive_label(graph, EdgeSet{{Z, X}, {Z, Y}}), Label::Yes);
  EXPECT_EQ(derive_label(graph, EdgeSet{{X, Y}}), Label::No);
  EXPECT_EQ(derive_label(graph, EdgeSet{{Z, X}, {X, Y}}), Label::No);
}

TEST(DeriveLabel, RejectsQueryForAnotherKind) {
  EXPECT_THROW(derive_label({DatasetKind::Chain, Polarity::Base}, query_for(DatasetKind::Collider, QueryKind::Q1)),
               UsageError);
}

TEST(EdgeSet, CanonicalGraphs) {
  EXPECT_EQ(edges_for({DatasetKind::Confounder, Polarity::Base}), (EdgeSet{{Z, X}, {Z, Y}}));
  EXPECT_EQ(edges_for({DatasetKind::Chain, Polarity::Base}), (EdgeSet{{X, Y}, {Y, Z}}));
  EXPECT_EQ(edges_for({DatasetKind::Collider, Polarity::Base}), (EdgeSet{{X, Z}, {Y, Z}}));
  EXPECT_TRUE(edges_for({DatasetKind::Chain, Polarity::Base}).reachable(X, Z));
  EXPECT_FALSE(edges_for({DatasetKind::Collider, Polarity::Base}).reachable(X, Y));
}

TEST(EdgeSet, RejectsSelfLoopsCyclesDuplicatesAndExcessEdges) {
  EXPECT_THROW((EdgeSet{{X, X}}), ValidationError);
  EXPECT_THROW((EdgeSet{{X, Y}, {Y, X}}), ValidationError);
  EXPECT_THROW((EdgeSet{{X, Y}, {X, Y}}), ValidationError);
  EXPECT_THROW((EdgeSet{{X, Y}, {Y, Z}, {X, Z}}), ValidationError);
}

TEST(EdgeSet, OrderDoesNotMatter) { EXPECT_EQ((EdgeSet{{Y, Z}, {X, Y}}), (EdgeSet{{X, Y}, {Y, Z}})); }

TEST(Names, RoundTripAndRejectUnknown) {
  for (auto kind : kAllDatasetKinds) EXPECT_EQ(parse_dataset_kind(to_string(kind)), kind);
  for (auto p : kAllPolarities) EXPECT_EQ(parse_polarity(to_string(p)), p);
  for (auto q : kAllQueryKinds) EXPECT_EQ(parse_query_kind(to_string(q)), q);
  EXPECT_EQ(parse_label("Yes"), Label::Yes);
  EXPECT_THROW(parse_dataset_kind("fork"), ParseError);
  EXPECT_THROW(parse_label("yes"), ParseError);
}

const EventTriple kTriple{"t1", "umbrella sales", "traffic jams", "monsoon season", TriplePool::Base};

TEST(Reasoning, ConfounderBaseQ1MatchesExemplar) {
  const auto text = reasoning_text({DatasetKind::Confounder, Polarity::Base},
                                   query_for(DatasetKind::Confounder, QueryKind::Q1), kTriple);
  EXPECT_EQ(text,
            "No directed causal path from umbrella sales to traffic jams AND adjusting for monsoon season closes the "
            "backdoor between umbrella sales and traffic jams, therefore");
}

TEST(Reasoning, ChainBaseQ1UsesIndirectPhrasing) {
  const auto steps = reasoning_steps({DatasetKind::Chain, Polarity::Base}, query_for(DatasetKind::Chain, QueryKind::Q1));
  ASSERT_EQ(steps.size(), 1u);
  EXPECT_EQ(steps[0].fact, EdgeFact::AbsentIndirect);
}

TEST(Reasoning, StepsAgreeWithLabel) {
  for (auto structure : all_structures()) {
    for (auto q : kAllQueryKinds) {
      const auto query = query_for(structure.kind, q);
      bool all_present = true;
      for (const auto& step : reasoning_steps(structure, query)) all_present &= step.fact == EdgeFact::Present;
      EXPECT_EQ(all_present, derive_label(structure, query) == Label::Yes);
    }
  }
}

TEST(Reasoning, MentionsEveryPhraseAndEndsWithConclusion) {
  for (auto structure : all_structures()) {
    for (auto q : kAllQueryKinds) {
      const auto text = reasoning_text(structure, query_for(structure.kind, q), kTriple);
      for (const auto& phrase : {kTriple.x, kTriple.y, kTriple.z}) {
        EXPECT_NE(text.find(phrase), std::string::npos) << to_string(structure) << " " << phrase;
      }
      EXPECT_TRUE(text.ends_with(", therefore"));
      EXPECT_EQ(text, reasoning_text(structure, query_for(structure.kind, q), kTriple));
    }
  }
}

TEST(Templates, DefaultsCoverEveryKey) {
  const auto& t = TemplateSet::defaults();
  for (auto kind : kAllDatasetKinds) {
    for (auto family : {TemplateFamily::Default, TemplateFamily::Alternative}) {
      for (auto q : kAllQueryKinds) EXPECT_FALSE(t.question(kind, family, q).empty());
    }
  }
  for (auto s : all_structures()) {
    for (auto q : kAllQueryKinds) EXPECT_FALSE(t.structural_clause(s, q).empty());
  }
  EXPECT_EQ(t.question(DatasetKind::Confounder, TemplateFamily::Default, QueryKind::Q1),
            "Will the increase of {X} cause {Y} during {Z}?");
}

TEST(Templates, JsonRoundTrip) {
  const auto& t = TemplateSet::defaults();
  const auto again = TemplateSet::from_json(t.to_json());
  EXPECT_EQ(again.to_json(), t.to_json());
}

TEST(Templates, RejectsUnknownPlaceholderAndVersion) {
  auto doc = TemplateSet::defaults().to_json();
  doc["questions"]["chain"]["default"]["q1"] = "Does {W} matter?";
  EXPECT_THROW(TemplateSet::from_json(doc), ConfigError);
  auto versioned = TemplateSet::defaults().to_json();
  versioned["version"] = 99;
  EXPECT_THROW(TemplateSet::from_json(versioned), ConfigError);
}

}  // namespace
}  // namespace causalflip
