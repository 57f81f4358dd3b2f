#include "causalflip/eval/runner.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "causalflip/errors.hpp"
#include "causalflip/util/jsonl.hpp"

namespace causalflip {

namespace {

using util::TransportError;

class Checkpoint {
 public:
  explicit Checkpoint(std::string path) : path_(std::move(path)) {
    if (path_.empty() || !std::ifstream(path_)) return;
    util::for_each_jsonl(path_, [&](const nlohmann::json& doc, std::size_t line) {
      auto r = eval_record_from_json(doc, line);
      done_[r.question_id] = std::move(r);
    });
  }

  const std::map<std::string, EvalRecord>& done() const { return done_; }

  void append(const EvalRecord& record) {
    if (path_.empty()) return;
    std::lock_guard lock(mutex_);
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    out << to_json(record).dump() << '\n';
    if (!out) throw Error(fmt::format("cannot append to checkpoint {}", path_));
  }

 private:
  std::string path_;
  std::map<std::string, EvalRecord> done_;
  std::mutex mutex_;
};

}  // namespace

std::vector<EvalRecord> run_eval(const std::vector<QuestionInstance>& questions, InferenceProvider& provider,
                                 const RunOptions& options) {
  if (options.concurrency < 1) throw UsageError("concurrency must be >= 1");
  if (options.condition == Condition::Noisy && options.prompt.noisy_prefix.empty()) {
    throw UsageError("the noisy condition needs a non-empty prefix");
  }

  std::vector<const QuestionInstance*> ordered;
  ordered.reserve(questions.size());
  for (const auto& q : questions) ordered.push_back(&q);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->id < b->id; });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i]->id == ordered[i - 1]->id) throw ValidationError(fmt::format("duplicate question id {}", ordered[i]->id));
  }

  Checkpoint checkpoint(options.checkpoint_path);
  std::vector<std::optional<EvalRecord>> results(ordered.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const auto it = checkpoint.done().find(ordered[i]->id);
    if (it != checkpoint.done().end() && it->second.error.empty()) {
      if (it->second.gold != ordered[i]->label) {
        throw ValidationError(fmt::format("checkpoint gold for {} disagrees with the test set", ordered[i]->id));
      }
      results[i] = it->second;
    } else {
      pending.push_back(i);
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto work = [&] {
    while (!abort.load()) {
      const auto slot = next.fetch_add(1);
      if (slot >= pending.size()) return;
      const auto index = pending[slot];
      const auto& q = *ordered[index];
      const InferenceRequest request{q.id, build_prompt(q, options.condition, options.prompt).text,
                                     options.settings.max_new_tokens, options.settings.decode};
      try {
        const auto responses = util::with_retries(options.retry, [&] {
          return provider.generate(std::span<const InferenceRequest>(&request, 1));
        });
        const auto it = std::find_if(responses.begin(), responses.end(), [&](const auto& r) { return r.id == q.id; });
        if (it == responses.end()) throw TransportError(TransportError::Kind::BadPayload, "reply lacks this id");
        results[index] = make_record(q.id, it->completion, q.label, options.parse_mode);
        checkpoint.append(*results[index]);
      } catch (const TransportError& e) {
        if (e.retryable()) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          abort = true;
          return;
        }
        auto record = make_record(q.id, "", q.label, options.parse_mode);
        record.error = e.what();
        results[index] = std::move(record);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        abort = true;
        return;
      }
    }
  };

  {
    const auto n = std::min(options.concurrency, std::max<std::size_t>(pending.size(), 1));
    std::vector<std::jthread> workers;
    workers.reserve(n);
    for (std::size_t i = 0; i < n; ++i) workers.emplace_back(work);
  }

  if (failure) {
    try {
      std::rethrow_exception(failure);
    } catch (const TransportError& e) {
      throw ProviderUnavailable(fmt::format("provider {} unavailable: {}", provider.describe(), e.what()),
                                options.checkpoint_path);
    }
  }

  std::vector<EvalRecord> out;
  out.reserve(results.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

}  // namespace causalflip
