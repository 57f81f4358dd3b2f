#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "causalflip/audit/embeddings.hpp"
#include "causalflip/audit/replace.hpp"
#include "causalflip/audit/skew.hpp"
#include "causalflip/bench/generate.hpp"
#include "causalflip/bench/io.hpp"
#include "causalflip/bench/split.hpp"
#include "causalflip/bench/triples.hpp"
#include "causalflip/embedded_config.hpp"
#include "causalflip/errors.hpp"
#include "causalflip/eval/metrics.hpp"
#include "causalflip/eval/runner.hpp"
#include "causalflip/provenance.hpp"
#include "causalflip/train/export.hpp"
#include "causalflip/util/hash.hpp"
#include "causalflip/util/strings.hpp"

namespace causalflip::cli {

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
};

struct GenerateArgs {
  std::string dataset = "confounder";
  int pairs_per_category = 250;
  std::string triples;
  std::string templates;
  std::string out;
  bool share_pools = false;
};

struct AuditArgs {
  std::string benchmark;
  std::string mode = "count";
  int k = 5;
  double threshold = 0.6;
  std::size_t min_pairs = 2;
  std::string embeddings;
  std::string provider;
  std::string cache;
  std::string out;
};

struct ReplaceArgs {
  std::string benchmark;
  std::string map;
  std::string templates;
  std::string out;
};

struct SplitArgs {
  std::string benchmark;
  std::string out_train;
  std::string out_test;
};

struct ExportArgs {
  std::string split;
  std::string mode = "implicit";
  std::string schedule = "linear";
  double ramp_frac = 0.667;
  double terminal = 1.0;
  std::int64_t ramp_steps = 0;
  std::int64_t stages = 0;
  std::int64_t epochs = 3;
  std::int64_t batch_size = 4;
  std::string noisy_prefix;
  bool noisy = false;
  std::string out;
};

struct EvaluateArgs {
  std::string test;
  std::string provider;
  std::string condition = "clean";
  std::size_t concurrency = 8;
  std::string noisy_prefix;
  std::string instruction;
  std::string checkpoint;
  bool lenient = false;
  std::string out;
  std::string metrics;
};

struct ReportArgs {
  std::vector<std::string> clean;
  std::vector<std::string> noisy;
  std::vector<std::string> test;
  std::vector<std::string> dataset;
  std::vector<std::string> strategy;
  std::string out;
};

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(util::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::pair<std::string, std::string> input(const std::string& path) { return {path, util::sha256_file(path)}; }

ProvenanceRecord stamp(std::string command, std::optional<std::uint64_t> seed, std::string config_hash = {}) {
  ProvenanceRecord rec;
  rec.version = std::string(embedded::kVersion);
  rec.command = std::move(command);
  rec.seed = seed;
  rec.config_hash = std::move(config_hash);
  rec.generated_at = util::utc_timestamp();
  return rec;
}

void finish(const std::string& artifact, ProvenanceRecord rec) {
  rec.artifact_sha256 = util::sha256_file(artifact);
  write_provenance(artifact, rec);
}

std::string params_hash(const nlohmann::ordered_json& params) { return util::sha256_hex(params.dump()); }

std::uint64_t require_seed(const Globals& g, const char* command) {
  if (!g.seed) throw UsageError(fmt::format("{} needs --seed", command));
  return *g.seed;
}

NoisyPrefixSpec prefix_from(const std::string& path) {
  return path.empty() ? NoisyPrefixSpec::defaults() : NoisyPrefixSpec::load(path);
}

int cmd_generate(const GenerateArgs& a, const Globals& g, spdlog::logger& log, std::ostream& out) {
  GenerationConfig config;
  config.dataset_kind = parse_dataset_kind(a.dataset);
  config.pairs_per_category = a.pairs_per_category;
  config.seed = require_seed(g, "generate");
  config.share_pools = a.share_pools;
  for (auto& t : load_triples(a.triples)) {
    (t.pool == TriplePool::Base ? config.triples_base : config.triples_opposite).push_back(std::move(t));
  }
  const auto templates = a.templates.empty() ? TemplateSet::defaults() : TemplateSet::load(a.templates);
  const auto bench = generate_benchmark(config, templates);
  write_benchmark(a.out, bench);

  auto rec = stamp("generate", config.seed, bench.provenance.config_hash);
  rec.parameters = {{"dataset", a.dataset}, {"pairs_per_category", a.pairs_per_category}, {"share_pools", a.share_pools}};
  rec.inputs.push_back(input(a.triples));
  if (!a.templates.empty()) rec.inputs.push_back(input(a.templates));
  finish(a.out, rec);
  log.info("msg=generated pairs={} questions={} out={}", bench.pairs.size(), bench.pairs.size() * 2, a.out);
  out << fmt::format("wrote {} pairs to {}\n", bench.pairs.size(), a.out);
  return 0;
}

int cmd_audit(const AuditArgs& a, const Globals&, spdlog::logger& log, std::ostream& out) {
  const auto bench = load_benchmark(a.benchmark);
  SkewReport report;
  auto rec = stamp("audit", std::nullopt, bench.provenance.config_hash);
  rec.inputs.push_back(input(a.benchmark));
  if (a.mode == "count") {
    report = count_skew(bench, {a.threshold, a.min_pairs});
    rec.parameters = {{"mode", a.mode}, {"threshold", a.threshold}, {"min_pairs", a.min_pairs}};
  } else if (a.mode == "similarity") {
    EmbeddingTable table;
    std::string provider_tag;
    if (!a.embeddings.empty()) {
      table = EmbeddingTable::load(a.embeddings);
      rec.inputs.push_back(input(a.embeddings));
      provider_tag = "file";
    } else {
      const auto config = a.provider.empty() ? nlohmann::json{{"type", "hashing"}} : read_json(a.provider);
      auto provider = make_embedding_provider(config);
      provider_tag = provider->tag();
      auto cache = a.cache.empty() ? EmbeddingCache() : EmbeddingCache::load(a.cache);
      table = fetch_embeddings(bench.questions(), *provider, a.cache.empty() ? nullptr : &cache);
      if (!a.cache.empty()) cache.save(a.cache);
    }
    report = neighbor_skew(bench, table, a.k);
    rec.parameters = {{"mode", a.mode}, {"k", a.k}, {"embedding_provider", provider_tag}};
  } else {
    throw UsageError(fmt::format("--mode must be count or similarity, got \"{}\"", a.mode));
  }
  util::write_file(a.out, report.to_json().dump(2) + "\n");
  finish(a.out, rec);
  log.info("msg=audited mode={} offenders={} out={}", a.mode, report.offenders.size(), a.out);
  for (const auto& item : top_offenders(report, 5)) out << item << '\n';
  return 0;
}

int cmd_replace(const ReplaceArgs& a, const Globals&, spdlog::logger& log, std::ostream& out) {
  const auto bench = load_benchmark(a.benchmark);
  const auto map = load_replacements(a.map);
  const auto templates = a.templates.empty() ? TemplateSet::defaults() : TemplateSet::load(a.templates);
  const auto replaced = apply_replacements(bench, map, templates);
  write_benchmark(a.out, replaced);

  auto rec = stamp("replace", replaced.provenance.seed, replaced.provenance.config_hash);
  rec.replacement_rounds = replaced.provenance.replacement_rounds;
  rec.parameters = {{"replacements", map.size()}};
  rec.inputs = {input(a.benchmark), input(a.map)};
  finish(a.out, rec);
  log.info("msg=replaced entries={} rounds={} out={}", map.size(), rec.replacement_rounds.size(), a.out);
  out << fmt::format("applied {} replacements to {}\n", map.size(), a.out);
  return 0;
}

int cmd_split(const SplitArgs& a, const Globals& g, spdlog::logger& log, std::ostream& out) {
  const auto bench = load_benchmark(a.benchmark);
  const auto seed = require_seed(g, "split");
  const auto split = pairwise_split(bench, seed);
  write_split(a.out_train, a.out_test, split);
  for (const auto* path : {&a.out_train, &a.out_test}) {
    auto rec = stamp("split", seed, bench.provenance.config_hash);
    rec.replacement_rounds = bench.provenance.replacement_rounds;
    rec.parameters = {{"half", path == &a.out_train ? "train" : "test"}};
    rec.inputs.push_back(input(a.benchmark));
    finish(*path, rec);
  }
  log.info("msg=split train={} test={}", split.train.size(), split.test.size());
  out << fmt::format("train {} / test {}\n", split.train.size(), split.test.size());
  return 0;
}

int cmd_export(const ExportArgs& a, const Globals&, spdlog::logger& log, std::ostream& out) {
  const auto questions = load_questions(a.split);
  ExportOptions options;
  options.mode = parse_training_mode(a.mode);
  options.schedule.kind = parse_schedule_kind(a.schedule);
  options.schedule.terminal_fraction = a.terminal;
  options.schedule.ramp_steps = a.ramp_steps > 0 ? a.ramp_steps
                                                 : ramp_steps_for(static_cast<std::int64_t>(questions.size()),
                                                                  a.batch_size, a.epochs, a.ramp_frac);
  options.schedule.stages = options.schedule.kind == ScheduleKind::Stepwise ? (a.stages > 0 ? a.stages : a.epochs) : 1;
  if (a.noisy || !a.noisy_prefix.empty()) options.noisy_prefix = prefix_from(a.noisy_prefix);

  const auto exported = export_training(questions, options);
  write_training_export(a.out, exported);

  nlohmann::ordered_json params = {{"mode", a.mode},
                                   {"schedule", to_json(exported.schedule)},
                                   {"ramp_frac", a.ramp_frac},
                                   {"epochs", a.epochs},
                                   {"batch_size", a.batch_size},
                                   {"noisy", options.noisy_prefix.has_value()}};
  if (options.noisy_prefix) params["noisy_prefix_sha256"] = util::sha256_hex(options.noisy_prefix->text);
  auto rec = stamp("export-training", std::nullopt, params_hash(params));
  rec.parameters = params;
  rec.inputs.push_back(input(a.split));
  if (!a.noisy_prefix.empty()) rec.inputs.push_back(input(a.noisy_prefix));
  finish(a.out, rec);
  log.info("msg=exported samples={} mode={} T_ramp={} out={}", exported.samples.size(), a.mode,
           exported.schedule.ramp_steps, a.out);
  out << fmt::format("wrote {} samples to {}\n", exported.samples.size(), a.out);
  return 0;
}

int cmd_evaluate(const EvaluateArgs& a, const Globals&, spdlog::logger& log, std::ostream& out) {
  const auto questions = load_questions(a.test);
  const auto config = read_json(a.provider);
  auto provider = make_inference_provider(config);

  RunOptions options;
  options.condition = parse_condition(a.condition);
  options.concurrency = a.concurrency;
  options.parse_mode = a.lenient ? ParseMode::Lenient : ParseMode::Strict;
  options.settings = provider_settings(config);
  options.checkpoint_path = a.checkpoint;
  if (!a.instruction.empty()) options.prompt.format_instruction = util::read_file(a.instruction);
  if (options.condition == Condition::Noisy) options.prompt.noisy_prefix = prefix_from(a.noisy_prefix).text;

  const auto records = run_eval(questions, *provider, options);
  write_records(a.out, records);
  const auto metrics = score(records, questions);

  nlohmann::ordered_json params = {{"condition", a.condition},
                                   {"provider", provider->describe()},
                                   {"max_new_tokens", options.settings.max_new_tokens},
                                   {"decode",
                                    {{"strategy", options.settings.decode.strategy},
                                     {"temperature", options.settings.decode.temperature},
                                     {"top_p", options.settings.decode.top_p}}},
                                   {"parse_mode", a.lenient ? "lenient" : "strict"},
                                   {"format_instruction", options.prompt.format_instruction}};
  if (!options.prompt.noisy_prefix.empty()) params["noisy_prefix_sha256"] = util::sha256_hex(options.prompt.noisy_prefix);
  auto rec = stamp("evaluate", std::nullopt, params_hash(params));
  rec.parameters = params;
  rec.inputs = {input(a.test), input(a.provider)};
  finish(a.out, rec);
  if (!a.metrics.empty()) {
    util::write_file(a.metrics, metrics.to_json().dump(2) + "\n");
    finish(a.metrics, rec);
  }
  log.info("msg=evaluated condition={} accuracy={:.4f} valid={} total={}", a.condition, metrics.accuracy,
           metrics.valid_count, metrics.total);
  out << metrics.to_table();
  return 0;
}

int cmd_report(const ReportArgs& a, const Globals&, spdlog::logger& log, std::ostream& out) {
  const auto n = a.clean.size();
  if (a.noisy.size() != n) throw UsageError("--clean and --noisy must be given the same number of times");
  if (a.test.size() != 1 && a.test.size() != n) throw UsageError("give --test once or once per --clean");
  const auto label = [&](const std::vector<std::string>& v, std::size_t i) {
    if (v.empty()) return std::string();
    if (v.size() == 1) return v.front();
    if (v.size() != n) throw UsageError("--dataset/--strategy must be given once or once per --clean");
    return v[i];
  };

  ProvenanceRecord rec = stamp("report", std::nullopt);
  std::vector<DegradationRow> rows;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& test_path = a.test.size() == 1 ? a.test.front() : a.test[i];
    const auto questions = load_questions(test_path);
    const auto clean = score(load_records(a.clean[i]), questions);
    const auto noisy = score(load_records(a.noisy[i]), questions);
    rows.push_back(degradation(clean, noisy, label(a.dataset, i), label(a.strategy, i)));
    rec.inputs.push_back(input(a.clean[i]));
    rec.inputs.push_back(input(a.noisy[i]));
    if (a.test.size() != 1 || i == 0) rec.inputs.push_back(input(test_path));
  }
  const auto report = degradation_report(std::move(rows));
  util::write_file(a.out, report.to_json().dump(2) + "\n");
  finish(a.out, rec);
  log.info("msg=reported rows={} out={}", report.rows.size(), a.out);
  out << report.to_table();
  return 0;
}

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
  auto logger = std::make_shared<spdlog::logger>("causalflip", sink);
  logger->set_pattern("ts=%Y-%m-%dT%H:%M:%SZ level=%l %v", spdlog::pattern_time_type::utc);
  return logger;
}

}  // namespace

int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"causalflip: label-flipped causal benchmark pipeline", "causalflip"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file supplying flag values");
  Globals g;
  app.add_option("--seed", g.seed, "Seed for generate and split");
  app.set_version_flag("--version", std::string(embedded::kVersion));

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a balanced label-flipped benchmark");
  generate->add_option("--dataset", gen.dataset, "confounder | chain | collider")->capture_default_str();
  generate->add_option("--pairs-per-category", gen.pairs_per_category)->capture_default_str();
  generate->add_option("--triples", gen.triples, "Event triples (.jsonl or TSV)")->required()->check(CLI::ExistingFile);
  generate->add_option("--templates", gen.templates, "Template set JSON")->check(CLI::ExistingFile);
  generate->add_flag("--share-pools", gen.share_pools, "Draw both polarities from one pool");
  generate->add_option("--out", gen.out)->required();

  AuditArgs aud;
  auto* audit = app.add_subcommand("audit", "Report count or similarity skew");
  audit->add_option("--benchmark", aud.benchmark)->required()->check(CLI::ExistingFile);
  audit->add_option("--mode", aud.mode, "count | similarity")->capture_default_str();
  audit->add_option("--k", aud.k)->capture_default_str();
  audit->add_option("--threshold", aud.threshold)->capture_default_str();
  audit->add_option("--min-pairs", aud.min_pairs)->capture_default_str();
  audit->add_option("--embeddings", aud.embeddings, "Precomputed {id, vector} JSONL")->check(CLI::ExistingFile);
  audit->add_option("--provider", aud.provider, "Embedding provider config JSON")->check(CLI::ExistingFile);
  audit->add_option("--cache", aud.cache, "Embedding cache JSONL");
  audit->add_option("--out", aud.out)->required();

  ReplaceArgs rep;
  auto* replace = app.add_subcommand("replace", "Apply an event-phrase replacement map");
  replace->add_option("--benchmark", rep.benchmark)->required()->check(CLI::ExistingFile);
  replace->add_option("--map", rep.map)->required()->check(CLI::ExistingFile);
  replace->add_option("--templates", rep.templates)->check(CLI::ExistingFile);
  replace->add_option("--out", rep.out)->required();

  SplitArgs spl;
  auto* split = app.add_subcommand("split", "Pairwise train/test split");
  split->add_option("--benchmark", spl.benchmark)->required()->check(CLI::ExistingFile);
  split->add_option("--out-train", spl.out_train)->required();
  split->add_option("--out-test", spl.out_test)->required();

  ExportArgs exp;
  auto* export_cmd = app.add_subcommand("export-training", "Write training samples with segment spans");
  export_cmd->add_option("--split", exp.split, "Training split JSONL")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--mode", exp.mode, "nocot | explicit | implicit")->capture_default_str();
  export_cmd->add_option("--schedule", exp.schedule, "linear | stepwise")->capture_default_str();
  export_cmd->add_option("--ramp-frac", exp.ramp_frac, "Ramp length as a fraction of training steps")
      ->capture_default_str();
  export_cmd->add_option("--terminal", exp.terminal)->capture_default_str();
  export_cmd->add_option("--ramp-steps", exp.ramp_steps, "Explicit ramp length; overrides --ramp-frac");
  export_cmd->add_option("--stages", exp.stages, "Stepwise stages (default: --epochs)");
  export_cmd->add_option("--epochs", exp.epochs)->capture_default_str();
  export_cmd->add_option("--batch-size", exp.batch_size)->capture_default_str();
  export_cmd->add_option("--noisy-prefix", exp.noisy_prefix, "Inject this prefix file")->check(CLI::ExistingFile);
  export_cmd->add_flag("--noisy", exp.noisy, "Inject the shipped prefix");
  export_cmd->add_option("--out", exp.out)->required();

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Query a model and score strict Yes/No answers");
  evaluate->add_option("--test", ev.test)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--provider", ev.provider, "Inference provider config JSON")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--condition", ev.condition, "clean | noisy")->capture_default_str();
  evaluate->add_option("--concurrency", ev.concurrency)->capture_default_str();
  evaluate->add_option("--noisy-prefix", ev.noisy_prefix, "Prefix file for the noisy condition")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--instruction", ev.instruction, "Format instruction file")->check(CLI::ExistingFile);
  evaluate->add_option("--checkpoint", ev.checkpoint, "Resumable JSONL of answered questions");
  evaluate->add_flag("--lenient", ev.lenient, "Accept case and punctuation variants");
  evaluate->add_option("--metrics", ev.metrics, "Also write metrics JSON here");
  evaluate->add_option("--out", ev.out)->required();

  ReportArgs rpt;
  auto* report = app.add_subcommand("report", "Clean-minus-noisy degradation table");
  report->add_option("--clean", rpt.clean)->required();
  report->add_option("--noisy", rpt.noisy)->required();
  report->add_option("--test", rpt.test)->required();
  report->add_option("--dataset", rpt.dataset);
  report->add_option("--strategy", rpt.strategy);
  report->add_option("--out", rpt.out)->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code != 0) err << app.help();
    return code;
  }

  auto log = make_logger(err);
  try {
    if (generate->parsed()) return cmd_generate(gen, g, *log, out);
    if (audit->parsed()) return cmd_audit(aud, g, *log, out);
    if (replace->parsed()) return cmd_replace(rep, g, *log, out);
    if (split->parsed()) return cmd_split(spl, g, *log, out);
    if (export_cmd->parsed()) return cmd_export(exp, g, *log, out);
    if (evaluate->parsed()) return cmd_evaluate(ev, g, *log, out);
    if (report->parsed()) return cmd_report(rpt, g, *log, out);
  } catch (const UsageError& e) {
    log->error("msg=\"{}\"", e.what());
    err << app.help();
    return 2;
  } catch (const ProviderUnavailable& e) {
    log->error("msg=\"{}\" checkpoint={}", e.what(), e.checkpoint().empty() ? "none" : e.checkpoint());
    return 3;
  } catch (const std::exception& e) {
    log->error("msg=\"{}\"", e.what());
    return 1;
  }
  return 1;
}

int run_subcommand(const std::vector<std::string>& args) { return run_subcommand(args, std::cout, std::cerr); }

}  // namespace causalflip::cli
