#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "causalflip/bench/split.hpp"
#include "causalflip/errors.hpp"
#include "causalflip/eval/runner.hpp"
#include "fixtures.hpp"

namespace causalflip {
namespace {

using testing::make_benchmark;
using testing::TempDir;
using util::TransportError;

util::RetryPolicy fast_retry() { return {3, std::chrono::milliseconds(1), 2.0}; }

std::map<std::string, std::string> gold_table(const std::vector<QuestionInstance>& qs) {
  std::map<std::string, std::string> t;
  for (const auto& q : qs) t[q.id] = "Reasoning here.\n" + std::string(to_string(q.label));
  return t;
}

// Callback-driven mock that records concurrency and requests.
class ScriptedProvider final : public InferenceProvider {
 public:
  using Fn = std::function<std::string(const InferenceRequest&, int call)>;
  explicit ScriptedProvider(Fn fn) : fn_(std::move(fn)) {}

  std::vector<InferenceResponse> generate(std::span<const InferenceRequest> requests) override {
    const auto now = ++in_flight_;
    for (auto seen = max_in_flight_.load(); now > seen && !max_in_flight_.compare_exchange_weak(seen, now);) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
    std::vector<InferenceResponse> out;
    try {
      for (const auto& r : requests) {
        int call;
        {
          std::lock_guard lock(mutex_);
          call = ++calls_[r.id];
          prompts_[r.id] = r.prompt;
        }
        out.push_back({r.id, fn_(r, call)});
      }
    } catch (...) {
      --in_flight_;
      throw;
    }
    --in_flight_;
    return out;
  }
  std::string describe() const override { return "scripted"; }

  int max_in_flight() const { return max_in_flight_.load(); }
  int calls(const std::string& id) {
    std::lock_guard lock(mutex_);
    return calls_[id];
  }
  std::size_t distinct_ids() {
    std::lock_guard lock(mutex_);
    return calls_.size();
  }
  std::string prompt(const std::string& id) {
    std::lock_guard lock(mutex_);
    return prompts_[id];
  }

 private:
  Fn fn_;
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
  std::mutex mutex_;
  std::map<std::string, int> calls_;
  std::map<std::string, std::string> prompts_;
};

TEST(RunEval, GoldEchoScoresOneInIdOrder) {
  auto qs = make_benchmark(DatasetKind::Chain, 4, 1).questions();
  std::reverse(qs.begin(), qs.end());
  TableInferenceProvider provider(gold_table(qs));
  RunOptions options;
  options.retry = fast_retry();
  const auto records = run_eval(qs, provider, options);
  ASSERT_EQ(records.size(), qs.size());
  EXPECT_TRUE(std::is_sorted(records.begin(), records.end(),
                             [](const auto& a, const auto& b) { return a.question_id < b.question_id; }));
  EXPECT_EQ(score(records, qs).accuracy, 1.0);
}

TEST(RunEval, RespectsConcurrencyBound) {
  const auto qs = make_benchmark(DatasetKind::Confounder, 6, 1).questions();
  ScriptedProvider provider([](const InferenceRequest&, int) { return std::string("Yes"); });
  RunOptions options;
  options.concurrency = 3;
  options.retry = fast_retry();
  run_eval(qs, provider, options);
  EXPECT_LE(provider.max_in_flight(), 3);
  EXPECT_GE(provider.max_in_flight(), 1);
}

TEST(RunEval, RetriesTransientFailures) {
  const auto qs = make_benchmark(DatasetKind::Collider, 1, 1).questions();
  ScriptedProvider provider([](const InferenceRequest&, int call) -> std::string {
    if (call < 3) throw TransportError(TransportError::Kind::Timeout, "slow");
    return "No";
  });
  RunOptions options;
  options.retry = fast_retry();
  const auto records = run_eval(qs, provider, options);
  for (const auto& r : records) {
    EXPECT_EQ(r.parsed, Answer::No);
    EXPECT_EQ(provider.calls(r.question_id), 3);
  }
}

TEST(RunEval, MalformedReplyBecomesInvalidRecord) {
  const auto qs = make_benchmark(DatasetKind::Collider, 1, 1).questions();
  const auto bad = qs.front().id;
  ScriptedProvider provider([&](const InferenceRequest& r, int) -> std::string {
    if (r.id == bad) throw TransportError(TransportError::Kind::BadPayload, "garbled");
    return "Yes";
  });
  RunOptions options;
  options.retry = fast_retry();
  const auto records = run_eval(qs, provider, options);
  EXPECT_EQ(records.front().parsed, Answer::Invalid);
  EXPECT_FALSE(records.front().error.empty());
  EXPECT_FALSE(records.front().correct);
  EXPECT_EQ(provider.calls(bad), 1);
  EXPECT_TRUE(records.back().error.empty());
}

TEST(RunEval, UnreachableProviderAbortsAndCheckpointResumes) {
  TempDir dir;
  const auto qs = make_benchmark(DatasetKind::Chain, 4, 2).questions();
  const auto cutoff = qs[qs.size() / 2].id;
  RunOptions options;
  options.retry = fast_retry();
  options.concurrency = 1;
  options.checkpoint_path = dir.path("ckpt.jsonl");

  ScriptedProvider failing([&](const InferenceRequest& r, int) -> std::string {
    if (r.id >= cutoff) throw TransportError(TransportError::Kind::Unreachable, "connection refused");
    return "Yes";
  });
  try {
    run_eval(qs, failing, options);
    FAIL() << "expected ProviderUnavailable";
  } catch (const ProviderUnavailable& e) {
    EXPECT_EQ(e.checkpoint(), options.checkpoint_path);
  }
  EXPECT_EQ(failing.calls(cutoff), 3);

  ScriptedProvider healthy([](const InferenceRequest&, int) { return std::string("No"); });
  const auto records = run_eval(qs, healthy, options);
  ASSERT_EQ(records.size(), qs.size());
  EXPECT_EQ(healthy.distinct_ids(), qs.size() / 2);
  for (const auto& r : records) {
    EXPECT_EQ(r.parsed, r.question_id < cutoff ? Answer::Yes : Answer::No) << r.question_id;
  }
}

TEST(RunEval, NoisyConditionAppendsPrefixAfterQuestion) {
  const auto qs = make_benchmark(DatasetKind::Chain, 1, 2).questions();
  ScriptedProvider provider([](const InferenceRequest&, int) { return std::string("Yes"); });
  RunOptions options;
  options.condition = Condition::Noisy;
  options.prompt.noisy_prefix = "Birds sang outside.";
  run_eval(qs, provider, options);
  EXPECT_TRUE(provider.prompt(qs.front().id).ends_with(qs.front().question_text + "\nBirds sang outside."));
  options.prompt.noisy_prefix.clear();
  EXPECT_THROW(run_eval(qs, provider, options), UsageError);
}

TEST(RunEval, PairedLabelPredictorScoresZero) {
  for (auto kind : kAllDatasetKinds) {
    const auto split = pairwise_split(make_benchmark(kind, 10, 3), 17);
    std::map<std::string, Label> train_label;
    for (const auto& q : split.train) train_label[q.pair_id] = q.label;
    std::map<std::string, std::string> table;
    for (const auto& q : split.test) table[q.id] = std::string(to_string(train_label.at(q.pair_id)));
    TableInferenceProvider provider(table);
    const auto records = run_eval(split.test, provider);
    EXPECT_EQ(score(records, split.test).accuracy, 0.0);
  }
}

TEST(TableProvider, LoadsJsonlAndRejectsUnknownIds) {
  TempDir dir;
  testing::write_text(dir.path("t.jsonl"), R"({"id":"a","completion":"Yes"})"
                                           "\n");
  auto provider = TableInferenceProvider::load(dir.path("t.jsonl"));
  const std::vector<InferenceRequest> known{{"a", "p", 8, {}}};
  EXPECT_EQ(provider.generate(known).front().completion, "Yes");
  const std::vector<InferenceRequest> unknown{{"b", "p", 8, {}}};
  EXPECT_THROW(provider.generate(unknown), TransportError);
}

}  // namespace
}  // namespace causalflip
