#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "causalflip/bench/question.hpp"
#include "causalflip/eval/metrics.hpp"
#include "causalflip/eval/prompt.hpp"
#include "causalflip/eval/provider.hpp"

namespace causalflip {

// The provider stayed unreachable after retries. Answers gathered so far are
// in the checkpoint; rerunning with the same checkpoint resumes.
class ProviderUnavailable : public Error {
 public:
  ProviderUnavailable(const std::string& what, std::string checkpoint)
      : Error(what), checkpoint_(std::move(checkpoint)) {}
  const std::string& checkpoint() const { return checkpoint_; }

 private:
  std::string checkpoint_;
};

struct RunOptions {
  Condition condition = Condition::Clean;
  PromptOptions prompt;
  std::size_t concurrency = 8;
  util::RetryPolicy retry;
  ParseMode parse_mode = ParseMode::Strict;
  ProviderSettings settings;
  // JSONL of completed records. Existing entries are reused and only
  // unanswered ids are sent. Empty disables checkpointing.
  std::string checkpoint_path;
};

// One record per question in id order. At most `concurrency` requests are in
// flight. A question whose reply is malformed or rejected is recorded as
// Invalid with an error note; an unreachable provider aborts the run with
// ProviderUnavailable.
std::vector<EvalRecord> run_eval(const std::vector<QuestionInstance>& questions, InferenceProvider& provider,
                                 const RunOptions& options = {});

}  // namespace causalflip
