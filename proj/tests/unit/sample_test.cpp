#include <gtest/gtest.h>

#include "causalflip/bench/io.hpp"
#include "causalflip/errors.hpp"
#include "causalflip/train/export.hpp"
#include "causalflip/util/utf8.hpp"
#include "fixtures.hpp"

namespace causalflip {
namespace {

using testing::make_benchmark;
using testing::TempDir;

QuestionInstance unicode_question() {
  const EventTriple t{"u1", "café openings", "crème brûlée sales", "the 🌧 season", TriplePool::Base};
  return make_question(t, {DatasetKind::Confounder, Polarity::Base}, TemplateFamily::Default, QueryKind::Q1,
                       "confounder-BD-0000", TemplateSet::defaults());
}

TEST(Sample, SegmentsReproduceSourceText) {
  const auto q = unicode_question();
  for (auto mode : {TrainingMode::NoCot, TrainingMode::ExplicitCot, TrainingMode::ImplicitCot}) {
    const auto s = assemble_sample(q, mode);
    s.validate();
    EXPECT_EQ(s.question_text(), q.question_text);
    EXPECT_EQ(s.answer_text(), "No");
    EXPECT_EQ(s.reasoning_text(), mode == TrainingMode::NoCot ? "" : q.reasoning_text);
    EXPECT_EQ(s.answer_span.end, util::codepoint_count(s.full_text));
    EXPECT_LT(s.answer_span.end, s.full_text.size());  // multi-byte text: code points < bytes
  }
}

TEST(Sample, ExplicitAndImplicitTextsAreIdentical) {
  const auto q = unicode_question();
  const auto e = assemble_sample(q, TrainingMode::ExplicitCot);
  const auto i = assemble_sample(q, TrainingMode::ImplicitCot);
  EXPECT_EQ(e.full_text, i.full_text);
  EXPECT_EQ(e.reasoning_span, i.reasoning_span);
}

TEST(Sample, NoCotLayout) {
  const auto q = unicode_question();
  const auto s = assemble_sample(q, TrainingMode::NoCot);
  EXPECT_EQ(s.full_text, q.question_text + "\nNo");
  EXPECT_FALSE(s.reasoning_span.has_value());
}

TEST(Sample, CotNeedsReasoning) {
  auto q = unicode_question();
  q.reasoning_text.clear();
  EXPECT_THROW(assemble_sample(q, TrainingMode::ExplicitCot), ValidationError);
  EXPECT_NO_THROW(assemble_sample(q, TrainingMode::NoCot));
}

TEST(NoisyPrefix, PreservesEverythingButReasoningStart) {
  const auto prefix = NoisyPrefixSpec::defaults();
  ASSERT_FALSE(prefix.text.empty());
  for (const auto& q : make_benchmark(DatasetKind::Chain, 2, 8).questions()) {
    const auto clean = assemble_sample(q, TrainingMode::ImplicitCot);
    const auto noisy = inject_noisy_prefix(clean, prefix);
    noisy.validate();
    EXPECT_TRUE(noisy.noisy);
    EXPECT_EQ(noisy.question_text(), clean.question_text());
    EXPECT_EQ(noisy.answer_text(), clean.answer_text());
    EXPECT_EQ(noisy.label, clean.label);
    EXPECT_EQ(noisy.reasoning_span->begin, clean.reasoning_span->begin);
    EXPECT_EQ(noisy.reasoning_text(), prefix.text + " " + std::string(clean.reasoning_text()));
    EXPECT_TRUE(noisy.reasoning_text().starts_with(prefix.text));
    std::size_t count = 0;
    for (auto pos = noisy.full_text.find(prefix.text); pos != std::string::npos;
         pos = noisy.full_text.find(prefix.text, pos + 1)) {
      ++count;
    }
    EXPECT_EQ(count, 1u);
  }
}

TEST(NoisyPrefix, ModeAndIdempotenceRules) {
  const auto q = unicode_question();
  const NoisyPrefixSpec p{"Clouds drifted by."};
  EXPECT_THROW(inject_noisy_prefix(assemble_sample(q, TrainingMode::NoCot), p), ModeError);
  const auto once = inject_noisy_prefix(assemble_sample(q, TrainingMode::ExplicitCot), p);
  EXPECT_THROW(inject_noisy_prefix(once, p), ModeError);
  const auto clean = assemble_sample(q, TrainingMode::ExplicitCot);
  EXPECT_EQ(inject_noisy_prefix(clean, NoisyPrefixSpec{""}), clean);
}

TEST(NoisyPrefix, UnicodeSpansShiftByCodePoints) {
  const auto q = unicode_question();
  const NoisyPrefixSpec p{"Ünïcödé weather ☀"};
  const auto clean = assemble_sample(q, TrainingMode::ExplicitCot);
  const auto noisy = inject_noisy_prefix(clean, p);
  EXPECT_EQ(noisy.answer_span.begin - clean.answer_span.begin, util::codepoint_count(p.text) + 1);
  EXPECT_EQ(noisy.answer_text(), "No");
}

TEST(NoisyPrefix, RejectsPrefixMentioningEvents) {
  const NoisyPrefixSpec p{"We talked about Café Openings all afternoon."};
  const std::vector<std::string> phrases{"café openings"};
  EXPECT_THROW(validate_prefix(p, phrases), ValidationError);
  EXPECT_NO_THROW(validate_prefix(NoisyPrefixSpec::defaults(), phrases));
}

TEST(Export, ImplicitCarriesRequestedScheduleExplicitCarriesNone) {
  const auto questions = make_benchmark(DatasetKind::Collider, 2, 1).questions();
  const MaskSchedule ramp{ScheduleKind::Linear, 20, 1.0, 1};
  const auto implicit = export_training(questions, {TrainingMode::ImplicitCot, ramp, std::nullopt});
  EXPECT_EQ(implicit.schedule, ramp);
  const auto explicit_cot = export_training(questions, {TrainingMode::ExplicitCot, ramp, std::nullopt});
  EXPECT_EQ(explicit_cot.schedule.terminal_fraction, 0.0);
  EXPECT_EQ(implicit.samples.size(), questions.size());
  EXPECT_THROW(export_training(questions, {TrainingMode::NoCot, ramp, NoisyPrefixSpec::defaults()}), ModeError);
}

TEST(Export, FileRoundTripAndRecordShape) {
  TempDir dir;
  const auto questions = make_benchmark(DatasetKind::Confounder, 2, 5).questions();
  const auto exported = export_training(
      questions, {TrainingMode::ImplicitCot, {ScheduleKind::Stepwise, 12, 1.0, 3}, NoisyPrefixSpec::defaults()});
  write_training_export(dir.path("x.jsonl"), exported);
  const auto loaded = load_training_export(dir.path("x.jsonl"));
  EXPECT_EQ(loaded.samples, exported.samples);
  EXPECT_EQ(loaded.schedule, exported.schedule);

  const auto record = to_record(exported.samples.front(), exported.schedule);
  for (const char* field : {"question_id", "mode", "full_text", "question_span", "reasoning_span", "answer_span",
                            "label", "schedule", "noisy"}) {
    EXPECT_TRUE(record.contains(field)) << field;
  }
  EXPECT_EQ(record["schedule"]["T_ramp"], 12);
}

TEST(Export, RecordWithBrokenSpansIsRejected) {
  const auto q = unicode_question();
  auto record = nlohmann::json(to_record(assemble_sample(q, TrainingMode::ExplicitCot), MaskSchedule::none()));
  record["answer_span"] = {0, 2};
  EXPECT_THROW(sample_from_record(record, 3), ValidationError);
  record.erase("answer_span");
  EXPECT_THROW(sample_from_record(record, 3), ParseError);
}

}  // namespace
}  // namespace causalflip
