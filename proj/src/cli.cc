// Copyright 2026 The NewsGauge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "newsgauge/cli.h"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "newsgauge/defaults.h"
#include "newsgauge/endpoint.h"
#include "newsgauge/error.h"
#include "newsgauge/io.h"
#include "newsgauge/report.h"

namespace newsgauge {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// --- Config document parsing.

using KeyHandlers = std::map<std::string, std::function<void(const json&)>>;

void Dispatch(const json& obj, std::string_view where,
              const KeyHandlers& handlers) {
  if (!obj.is_object()) {
    throw ValidationError("config: '" + std::string(where) +
                          "' must be an object");
  }
  for (const auto& [key, value] : obj.items()) {
    auto it = handlers.find(key);
    if (it == handlers.end()) {
      throw ValidationError("config: unknown key '" + key + "' in '" +
                            std::string(where) + "'");
    }
    try {
      it->second(value);
    } catch (const json::exception& e) {
      throw ValidationError("config: bad value for '" + std::string(where) +
                            "." + key + "': " + e.what());
    }
  }
}

template <typename T>
std::function<void(const json&)> Set(T& target) {
  return [&target](const json& v) { target = v.get<T>(); };
}

std::function<void(const json&)> SetPath(std::optional<std::string>& target) {
  return [&target](const json& v) { target = v.get<std::string>(); };
}

DurationMode ParseDurationMode(std::string_view name) {
  if (name == "speech_sum") return DurationMode::kSpeechSum;
  if (name == "span") return DurationMode::kSpan;
  throw ValidationError("unknown duration mode '" + std::string(name) +
                        "' (expected speech_sum or span)");
}

std::string_view ToString(DurationMode mode) {
  return mode == DurationMode::kSpeechSum ? "speech_sum" : "span";
}

std::string_view ToString(TranscriptFormat format) {
  return format == TranscriptFormat::kUtteranceJsonl ? "utterance_jsonl"
                                                     : "asr_segments_json";
}

// --- Command-line flags. Every value is optional so that an unset flag
// falls back to the config document.

struct Flags {
  std::optional<std::string> config;
  std::optional<unsigned> jobs;

  std::vector<std::string> in;
  std::optional<std::string> out;
  std::optional<std::string> taxonomy, channels, fewshot, dialogues, labels,
      annotations, columns, gender_spans, gender_offsets, format;
  std::optional<std::string> per_topic_out, json_out, analytics, scores,
      agreement;

  std::optional<double> max_gap_s, max_total_s;
  std::optional<std::string> duration_mode;

  std::optional<std::string> endpoint, model, protocol;
  std::optional<int> concurrency, max_tokens, retry_limit, backoff_base_ms,
      backoff_max_ms, timeout_ms;
  std::optional<double> temperature;
  std::optional<std::size_t> batch_size;

  std::optional<int> bootstrap;
  std::optional<double> confidence, test_fraction;
  std::optional<std::uint64_t> seed, split_seed;
  std::optional<std::string> split;

  std::optional<std::string> group_by, disparity;
};

template <typename T>
void Override(T& target, const std::optional<T>& flag) {
  if (flag) target = *flag;
}

void OverridePath(std::optional<std::string>& target,
                  const std::optional<std::string>& flag) {
  if (flag) target = flag;
}

RunConfig Resolve(const Flags& f) {
  RunConfig cfg;
  if (f.config) cfg = RunConfig::FromJson(read_file(*f.config));

  RunConfig::Paths& p = cfg.paths;
  OverridePath(p.taxonomy, f.taxonomy);
  OverridePath(p.channels, f.channels);
  OverridePath(p.fewshot, f.fewshot);
  OverridePath(p.dialogues, f.dialogues);
  OverridePath(p.labels, f.labels);
  OverridePath(p.annotations, f.annotations);
  OverridePath(p.annotation_columns, f.columns);
  OverridePath(p.gender_spans, f.gender_spans);
  OverridePath(p.gender_offsets, f.gender_offsets);
  OverridePath(p.out, f.out);
  if (f.format) cfg.transcript_format = parse_transcript_format(*f.format);

  Override(cfg.assembly.max_gap_s, f.max_gap_s);
  Override(cfg.assembly.max_total_s, f.max_total_s);
  if (f.duration_mode) {
    cfg.assembly.duration_mode = ParseDurationMode(*f.duration_mode);
  }

  if (f.protocol) cfg.protocol = parse_protocol(*f.protocol);
  if (f.endpoint) {
    cfg.client.endpoint_url = *f.endpoint;
    cfg.classifier.endpoint_url = *f.endpoint;
  }
  Override(cfg.client.model, f.model);
  Override(cfg.client.max_in_flight, f.concurrency);
  Override(cfg.client.max_tokens, f.max_tokens);
  Override(cfg.client.temperature, f.temperature);
  if (f.retry_limit) {
    cfg.client.retry_limit = cfg.classifier.retry_limit = *f.retry_limit;
  }
  if (f.backoff_base_ms) {
    cfg.client.backoff_base_ms = cfg.classifier.backoff_base_ms =
        *f.backoff_base_ms;
  }
  Override(cfg.client.backoff_max_ms, f.backoff_max_ms);
  if (f.timeout_ms) {
    cfg.client.request_timeout_ms = cfg.classifier.request_timeout_ms =
        *f.timeout_ms;
  }
  Override(cfg.classifier.batch_size, f.batch_size);

  Override(cfg.evaluation.bootstrap, f.bootstrap);
  Override(cfg.evaluation.confidence, f.confidence);
  Override(cfg.evaluation.seed, f.seed);
  Override(cfg.split, f.split);
  Override(cfg.test_fraction, f.test_fraction);
  Override(cfg.split_seed, f.split_seed);

  if (f.group_by) cfg.group_by = parse_group_by(*f.group_by);
  if (f.disparity) cfg.disparity = parse_disparity_mode(*f.disparity);
  Override(cfg.jobs, f.jobs);
  cfg.evaluation.jobs = cfg.jobs;
  cfg.validate();
  return cfg;
}

// --- Stage helpers. Every input read is digested for the manifest.

class Inputs {
 public:
  std::string read(const fs::path& path) {
    std::string bytes = read_file(path);
    digests_.push_back({path.generic_string(), sha256_hex(bytes), bytes.size()});
    return bytes;
  }
  const std::vector<InputDigest>& digests() const { return digests_; }

 private:
  std::vector<InputDigest> digests_;
};

const std::string& Require(const std::optional<std::string>& value,
                           std::string_view flag) {
  if (!value || value->empty()) {
    throw ValidationError("missing required " + std::string(flag));
  }
  return *value;
}

Taxonomy LoadTaxonomy(const RunConfig& cfg, Inputs& inputs) {
  if (!cfg.paths.taxonomy) return Taxonomy::Builtin();
  return Taxonomy::FromJson(inputs.read(*cfg.paths.taxonomy));
}

std::vector<FewShotExample> LoadFewShot(const RunConfig& cfg,
                                        const Taxonomy& taxonomy,
                                        Inputs& inputs) {
  if (!cfg.paths.fewshot) return load_fewshot(default_fewshot_json(), taxonomy);
  return load_fewshot(inputs.read(*cfg.paths.fewshot), taxonomy);
}

ChannelRegistry LoadChannels(const RunConfig& cfg, Inputs& inputs) {
  if (!cfg.paths.channels) {
    if (cfg.group_by == GroupBy::kOwnership || cfg.group_by == GroupBy::kMedium) {
      throw ValidationError("--group-by " + std::string(to_string(cfg.group_by)) +
                            " needs --channels");
    }
    return {};
  }
  const std::string& path = *cfg.paths.channels;
  return load_channel_registry(inputs.read(path), path);
}

std::vector<Utterance> LoadUtterances(const std::vector<std::string>& paths,
                                      TranscriptFormat format, Inputs& inputs) {
  if (paths.empty()) throw ValidationError("missing required --in");
  std::vector<Utterance> all;
  IngestReport parsed;
  for (const auto& path : paths) {
    TranscriptIngest part = parse_transcripts(inputs.read(path), format, path);
    parsed.records += part.report.records;
    parsed.dropped_empty_text += part.report.dropped_empty_text;
    parsed.dropped_bad_duration += part.report.dropped_bad_duration;
    std::move(part.utterances.begin(), part.utterances.end(),
              std::back_inserter(all));
  }
  TranscriptIngest norm = normalize_utterances(std::move(all));
  spdlog::info(
      "ingest: {} records, {} kept, dropped {} empty-text and {} bad-duration, "
      "truncated {} overlaps",
      parsed.records, norm.utterances.size(),
      parsed.dropped_empty_text + norm.report.dropped_empty_text,
      parsed.dropped_bad_duration + norm.report.dropped_bad_duration,
      norm.report.truncated_overlaps);
  return std::move(norm.utterances);
}

std::vector<DialogueInput> ToInputs(const std::vector<Dialogue>& dialogues) {
  std::vector<DialogueInput> out;
  out.reserve(dialogues.size());
  for (const auto& d : dialogues) out.push_back({d.dialogue_id, d.text});
  return out;
}

std::vector<LabelSet> ToLabelSets(const std::vector<SyntheticAnnotation>& synth) {
  std::vector<LabelSet> out;
  out.reserve(synth.size());
  for (const auto& a : synth) out.push_back({a.dialogue_id, a.topics});
  return out;
}

// Runs the configured annotation protocol. Chat runs also write the full
// synthetic records to `synthetic_path` when given.
std::vector<LabelSet> Annotate(const RunConfig& cfg,
                               const std::vector<Dialogue>& dialogues,
                               const Taxonomy& taxonomy, Inputs& inputs,
                               const std::optional<fs::path>& synthetic_path) {
  std::vector<DialogueInput> batch = ToInputs(dialogues);
  if (cfg.protocol == AnnotateProtocol::kClassify) {
    spdlog::info("annotate: {} dialogues via classifier {}", batch.size(),
                 cfg.classifier.endpoint_url);
    return classify_batch(batch, taxonomy, cfg.classifier);
  }
  std::vector<FewShotExample> fewshot = LoadFewShot(cfg, taxonomy, inputs);
  spdlog::info("annotate: {} dialogues via {} (model {}, {} in flight)",
               batch.size(), cfg.client.endpoint_url, cfg.client.model,
               cfg.client.max_in_flight);
  std::vector<SyntheticAnnotation> synth =
      annotate_batch(batch, taxonomy, fewshot, cfg.client);
  if (synthetic_path) write_file(*synthetic_path, write_synthetic_jsonl(synth));
  return ToLabelSets(synth);
}

GenderSpanIndex LoadGenderSpans(const RunConfig& cfg, Inputs& inputs) {
  const fs::path dir = Require(cfg.paths.gender_spans, "--gender-spans");
  std::map<std::string, double> offsets;
  if (cfg.paths.gender_offsets) {
    json doc = json::parse(inputs.read(*cfg.paths.gender_offsets), nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
      throw ValidationError(*cfg.paths.gender_offsets +
                            ": expected an object of media_id -> offset_s");
    }
    for (const auto& [media, value] : doc.items()) {
      if (!value.is_number()) {
        throw ValidationError(*cfg.paths.gender_offsets + ": offset for '" +
                              media + "' is not a number");
      }
      offsets[media] = value.get<double>();
    }
  }
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw ValidationError("gender span directory " + dir.string() +
                          " does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    if (ext == ".csv" || ext == ".tsv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  GenderSpanIndex index;
  for (const auto& file : files) {
    std::string media = file.stem().string();
    if (index.count(media)) {
      throw ValidationError("gender spans for media '" + media +
                            "' given twice in " + dir.string());
    }
    auto off = offsets.find(media);
    index[media] = parse_gender_spans(inputs.read(file), media, {},
                                      off == offsets.end() ? 0.0 : off->second);
  }
  spdlog::info("analyze: gender spans for {} media files", index.size());
  return index;
}

std::vector<TopicGenderAggregate> Analyze(const RunConfig& cfg,
                                          const std::vector<Dialogue>& dialogues,
                                          const std::vector<LabelSet>& labels,
                                          Inputs& inputs) {
  GenderSpanIndex spans = LoadGenderSpans(cfg, inputs);
  ChannelRegistry registry = LoadChannels(cfg, inputs);
  std::set<std::string> missing_media;
  for (const auto& d : dialogues) {
    if (!spans.count(d.program_id)) missing_media.insert(d.program_id);
  }
  for (const auto& m : missing_media) {
    spdlog::warn("analyze: no gender spans for program {}; its speech counts as "
                 "ungendered",
                 m);
  }

  std::vector<TopicGenderAggregate> out =
      topic_gender_aggregate(dialogues, labels, spans, registry);
  if (cfg.group_by != GroupBy::kNone) {
    AggregateOptions options;
    options.group_by = cfg.group_by;
    options.on_unknown_channel = [](std::string_view channel) {
      spdlog::warn("analyze: channel {} is not in the registry", channel);
    };
    auto grouped =
        topic_gender_aggregate(dialogues, labels, spans, registry, options);
    std::move(grouped.begin(), grouped.end(), std::back_inserter(out));
  }
  if (out.empty()) return out;
  if (auto p = parity(out.front().global_unique)) {
    spdlog::info("analyze: {} dialogues, global parity {:.4f}",
                 out.front().n_dialogues, *p);
  }
  return out;
}

std::vector<HumanAnnotation> LoadAnnotations(const RunConfig& cfg,
                                             const Taxonomy& taxonomy,
                                             Inputs& inputs) {
  const std::string& path = Require(cfg.paths.annotations, "--gold/--annotations");
  AnnotationColumns columns;
  if (cfg.paths.annotation_columns) {
    columns =
        AnnotationColumns::FromJson(inputs.read(*cfg.paths.annotation_columns));
  }
  return load_annotations(inputs.read(path), taxonomy, columns, path);
}

EvaluationResult Evaluate(const RunConfig& cfg,
                          const std::vector<HumanAnnotation>& annotations,
                          const std::vector<LabelSet>& predictions) {
  std::vector<GoldMass> gold = build_gold_mass(annotations);
  if (cfg.split != "all") {
    std::vector<std::string> ids;
    for (const auto& g : gold) ids.push_back(g.dialogue_id);
    DatasetSplit split = split_dataset(ids, cfg.test_fraction, cfg.split_seed);
    const auto& keep = cfg.split == "test" ? split.test : split.dev;
    std::erase_if(gold, [&](const GoldMass& g) {
      return !std::binary_search(keep.begin(), keep.end(), g.dialogue_id);
    });
    spdlog::info("evaluate: {} split, {} of {} dialogues", cfg.split,
                 gold.size(), ids.size());
  }
  std::set<std::string> gold_ids;
  for (const auto& g : gold) gold_ids.insert(g.dialogue_id);
  std::vector<LabelSet> pred;
  for (const auto& p : predictions) {
    if (gold_ids.count(p.dialogue_id)) pred.push_back(p);
  }
  if (pred.size() < predictions.size()) {
    spdlog::info("evaluate: ignoring {} predictions without gold labels",
                 predictions.size() - pred.size());
  }
  EvaluationResult result = evaluate_predictions(gold, pred, cfg.evaluation);
  spdlog::info("evaluate: {} dialogues, micro-F1 {:.4f}, macro-F1 {:.4f}",
               result.n_dialogues, result.micro.f1, result.macro.f1);
  return result;
}

std::vector<Dialogue> LoadDialogues(const RunConfig& cfg, Inputs& inputs) {
  const std::string& path = Require(cfg.paths.dialogues, "--dialogues");
  return read_dialogues_jsonl(inputs.read(path), path);
}

std::vector<LabelSet> LoadLabels(const std::string& path,
                                 const Taxonomy& taxonomy, Inputs& inputs) {
  return read_label_sets(inputs.read(path), taxonomy, path);
}

RunMetadata Metadata(std::string command, const RunConfig& cfg,
                     const Inputs& inputs, std::string started_at) {
  RunMetadata m;
  m.command = std::move(command);
  m.config = cfg.to_json();
  m.seed = cfg.evaluation.seed;
  m.inputs = inputs.digests();
  m.started_at = std::move(started_at);
  return m;
}

fs::path SiblingPath(const fs::path& path, std::string_view name) {
  return path.has_parent_path() ? path.parent_path() / name : fs::path(name);
}

// --- Subcommands.

void CmdIngest(const Flags& f, const RunConfig& cfg) {
  Inputs inputs;
  std::vector<Utterance> utts = LoadUtterances(f.in, cfg.transcript_format, inputs);
  write_file(Require(cfg.paths.out, "--out"), write_utterances_jsonl(utts));
}

void CmdAssemble(const Flags& f, const RunConfig& cfg) {
  Inputs inputs;
  const std::string& out = Require(cfg.paths.out, "--out");
  std::vector<Utterance> utts =
      LoadUtterances(f.in, TranscriptFormat::kUtteranceJsonl, inputs);
  std::vector<Dialogue> dialogues = assemble_corpus(utts, cfg.assembly, cfg.jobs);
  double total = 0.0;
  for (const auto& d : dialogues) total += d.speech_duration_s;
  spdlog::info("assemble: {} utterances -> {} dialogues, mean {:.1f} s",
               utts.size(), dialogues.size(),
               dialogues.empty() ? 0.0 : total / dialogues.size());
  write_file(out, write_dialogues_jsonl(dialogues));
}

void CmdAnnotate(const Flags& f, const RunConfig& cfg) {
  Inputs inputs;
  const std::string& out = Require(cfg.paths.out, "--out");
  if (f.in.size() != 1) throw ValidationError("annotate takes exactly one --in");
  std::vector<Dialogue> dialogues = read_dialogues_jsonl(inputs.read(f.in[0]), f.in[0]);
  Taxonomy taxonomy = LoadTaxonomy(cfg, inputs);
  if (cfg.protocol == AnnotateProtocol::kChat) {
    Annotate(cfg, dialogues, taxonomy, inputs, fs::path(out));
  } else {
    write_file(out, write_label_sets(
                        Annotate(cfg, dialogues, taxonomy, inputs, std::nullopt)));
  }
}

void CmdExportTrain(const Flags& f, const RunConfig& cfg) {
  Inputs inputs;
  if (f.in.size() != 1) throw ValidationError("export-train takes exactly one --in");
  Taxonomy taxonomy = LoadTaxonomy(cfg, inputs);
  auto synth = read_synthetic_jsonl(inputs.read(f.in[0]), taxonomy, f.in[0]);
  write_file(Require(cfg.paths.out, "--out"), export_training_set(synth));
}

void CmdEvaluate(const Flags& f, const RunConfig& cfg) {
  Inputs inputs;
  const fs::path out = Require(cfg.paths.out, "--out");
  Taxonomy taxonomy = LoadTaxonomy(cfg, inputs);
  auto annotations = LoadAnnotations(cfg, taxonomy, inputs);
  auto predictions =
      LoadLabels(Require(cfg.paths.labels, "--pred"), taxonomy, inputs);
  EvaluationResult result = Evaluate(cfg, annotations, predictions);
  write_file(out, to_json(result).dump(2) + "\n");
  write_file(f.per_topic_out ? fs::path(*f.per_topic_out)
                             : SiblingPath(out, "scores_by_topic.csv"),
             scores_by_topic_csv(result));
}

void CmdAgreement(const Flags& f, const RunConfig& cfg) {
  Inputs inputs;
  const std::string& out = Require(cfg.paths.out, "--out");
  Taxonomy taxonomy = LoadTaxonomy(cfg, inputs);
  auto annotations = LoadAnnotations(cfg, taxonomy, inputs);
  std::vector<Dialogue> dialogues;
  if (cfg.paths.dialogues) dialogues = LoadDialogues(cfg, inputs);
  AgreementResult result = agreement_report(annotations, dialogues);
  if (result.global_alpha) {
    spdlog::info("agreement: {} dialogues, global alpha {:.4f}",
                 result.n_dialogues, *result.global_alpha);
  }
  write_file(out, agreement_csv(result));
  if (f.json_out) write_file(*f.json_out, to_json(result).dump(2) + "\n");
}

void CmdAnalyze(const std::string& started, const RunConfig& cfg) {
  Inputs inputs;
  const fs::path out = Require(cfg.paths.out, "--out");
  Taxonomy taxonomy = LoadTaxonomy(cfg, inputs);
  std::vector<Dialogue> dialogues = LoadDialogues(cfg, inputs);
  auto labels = LoadLabels(Require(cfg.paths.labels, "--labels"), taxonomy, inputs);
  ReportResults results;
  results.aggregates = Analyze(cfg, dialogues, labels, inputs);
  results.disparity_mode = cfg.disparity;
  results.metadata = Metadata("analyze", cfg, inputs, started);
  write_file(out / "analytics.json", to_json(results.aggregates).dump(2) + "\n");
  emit_report(results, out);
}

void CmdReport(const Flags& f, const std::string& started,
               const RunConfig& cfg) {
  Inputs inputs;
  ReportResults results;
  results.disparity_mode = cfg.disparity;
  auto load_json = [&](const std::string& path) {
    json doc = json::parse(inputs.read(path), nullptr, false);
    if (doc.is_discarded()) throw ValidationError(path + ": not valid JSON");
    return doc;
  };
  if (f.analytics) results.aggregates = aggregates_from_json(load_json(*f.analytics));
  if (f.scores) {
    json doc = load_json(*f.scores);
    if (!doc.empty()) results.evaluation = evaluation_from_json(doc);
  }
  if (f.agreement) results.agreement = agreement_from_json(load_json(*f.agreement));
  results.metadata = Metadata("report", cfg, inputs, started);
  emit_report(results, Require(cfg.paths.out, "--out"));
}

void CmdPipeline(const Flags& f, const std::string& started,
                 const RunConfig& cfg) {
  Inputs inputs;
  const fs::path out = Require(cfg.paths.out, "--out");
  Taxonomy taxonomy = LoadTaxonomy(cfg, inputs);

  std::vector<Utterance> utts =
      LoadUtterances(f.in, cfg.transcript_format, inputs);
  std::vector<Dialogue> dialogues = assemble_corpus(utts, cfg.assembly, cfg.jobs);
  spdlog::info("pipeline: {} dialogues", dialogues.size());
  write_file(out / "dialogues.jsonl", write_dialogues_jsonl(dialogues));

  std::vector<LabelSet> labels;
  if (cfg.paths.labels) {
    labels = LoadLabels(*cfg.paths.labels, taxonomy, inputs);
  } else {
    labels = Annotate(cfg, dialogues, taxonomy, inputs, out / "synthetic.jsonl");
  }
  write_file(out / "labels.jsonl", write_label_sets(labels));

  ReportResults results;
  results.disparity_mode = cfg.disparity;
  results.aggregates = Analyze(cfg, dialogues, labels, inputs);
  write_file(out / "analytics.json", to_json(results.aggregates).dump(2) + "\n");

  if (cfg.paths.annotations) {
    auto annotations = LoadAnnotations(cfg, taxonomy, inputs);
    results.evaluation = Evaluate(cfg, annotations, labels);
    results.agreement = agreement_report(annotations, dialogues);
    write_file(out / "scores_by_topic.csv",
               scores_by_topic_csv(*results.evaluation));
  }
  results.metadata = Metadata("pipeline", cfg, inputs, started);
  emit_report(results, out);
}

// --- Flag registration.

void AddCommon(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "Run configuration JSON");
  app->add_option("--jobs", f.jobs, "CPU worker threads")
      ->check(CLI::PositiveNumber);
  app->add_option("--taxonomy", f.taxonomy, "Taxonomy JSON (default: built in)");
}

void AddIn(CLI::App* app, Flags& f, std::string help) {
  app->add_option("--in", f.in, std::move(help));
}

void AddOut(CLI::App* app, Flags& f, std::string help) {
  app->add_option("--out", f.out, std::move(help));
}

void AddAssembly(CLI::App* app, Flags& f) {
  app->add_option("--max-gap-s", f.max_gap_s, "Join utterances closer than this");
  app->add_option("--max-total-s", f.max_total_s, "Dialogue duration cap");
  app->add_option("--duration-mode", f.duration_mode, "speech_sum or span");
}

void AddClient(CLI::App* app, Flags& f) {
  app->add_option("--endpoint", f.endpoint, "Inference server base URL");
  app->add_option("--model", f.model, "Model name sent to the chat endpoint");
  app->add_option("--protocol", f.protocol, "chat or classify");
  app->add_option("--concurrency", f.concurrency, "Max requests in flight");
  app->add_option("--fewshot", f.fewshot, "Few-shot examples JSON");
  app->add_option("--temperature", f.temperature);
  app->add_option("--max-tokens", f.max_tokens);
  app->add_option("--retry-limit", f.retry_limit);
  app->add_option("--backoff-base-ms", f.backoff_base_ms);
  app->add_option("--backoff-max-ms", f.backoff_max_ms);
  app->add_option("--timeout-ms", f.timeout_ms);
  app->add_option("--batch-size", f.batch_size, "Texts per /classify call");
}

void AddEvaluation(CLI::App* app, Flags& f) {
  app->add_option("--bootstrap", f.bootstrap, "Bootstrap resamples (0 = none)");
  app->add_option("--confidence", f.confidence, "Interval confidence level");
  app->add_option("--seed", f.seed, "Bootstrap seed");
  app->add_option("--split", f.split, "Evaluate on all, dev or test");
  app->add_option("--test-fraction", f.test_fraction);
  app->add_option("--split-seed", f.split_seed);
  app->add_option("--columns", f.columns, "Annotation column mapping JSON");
}

void AddAnalysis(CLI::App* app, Flags& f) {
  app->add_option("--gender-spans", f.gender_spans,
                  "Directory of <media_id>.csv segmenter outputs");
  app->add_option("--gender-offsets", f.gender_offsets,
                  "JSON object media_id -> offset seconds");
  app->add_option("--channels", f.channels, "Channel registry JSON");
  app->add_option("--group-by", f.group_by, "none, ownership, medium or channel");
  app->add_option("--disparity", f.disparity, "parity or distribution");
}

void SetupLogging() {
  static std::shared_ptr<spdlog::logger> logger = [] {
    auto l = spdlog::stderr_logger_mt("newsgauge");
    l->set_pattern("%Y-%m-%dT%H:%M:%S.%e %^%l%$ %v");
    spdlog::set_default_logger(l);
    return l;
  }();
  spdlog::level::level_enum level = spdlog::level::info;
  if (const char* env = std::getenv("NEWSGAUGE_LOG")) {
    level = spdlog::level::from_str(env);
  }
  logger->set_level(level);
}

}  // namespace

AnnotateProtocol parse_protocol(std::string_view name) {
  if (name == "chat") return AnnotateProtocol::kChat;
  if (name == "classify") return AnnotateProtocol::kClassify;
  throw ValidationError("unknown protocol '" + std::string(name) +
                        "' (expected chat or classify)");
}

std::string_view to_string(AnnotateProtocol protocol) {
  return protocol == AnnotateProtocol::kChat ? "chat" : "classify";
}

RunConfig RunConfig::FromJson(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ValidationError("config: not valid JSON");
  RunConfig c;
  std::string format, duration_mode, protocol, group_by, disparity;
  Paths& p = c.paths;
  Dispatch(doc, "config", {
      {"paths",
       [&](const json& v) {
         Dispatch(v, "paths",
                  {{"taxonomy", SetPath(p.taxonomy)},
                   {"channels", SetPath(p.channels)},
                   {"fewshot", SetPath(p.fewshot)},
                   {"transcripts", SetPath(p.transcripts)},
                   {"dialogues", SetPath(p.dialogues)},
                   {"labels", SetPath(p.labels)},
                   {"annotations", SetPath(p.annotations)},
                   {"annotation_columns", SetPath(p.annotation_columns)},
                   {"gender_spans", SetPath(p.gender_spans)},
                   {"gender_offsets", SetPath(p.gender_offsets)},
                   {"out", SetPath(p.out)}});
       }},
      {"transcript_format", Set(format)},
      {"assembly",
       [&](const json& v) {
         Dispatch(v, "assembly",
                  {{"max_gap_s", Set(c.assembly.max_gap_s)},
                   {"max_total_s", Set(c.assembly.max_total_s)},
                   {"duration_mode", Set(duration_mode)}});
       }},
      {"protocol", Set(protocol)},
      {"client",
       [&](const json& v) {
         ClientConfig& k = c.client;
         Dispatch(v, "client",
                  {{"endpoint", Set(k.endpoint_url)},
                   {"model", Set(k.model)},
                   {"temperature", Set(k.temperature)},
                   {"max_tokens", Set(k.max_tokens)},
                   {"max_in_flight", Set(k.max_in_flight)},
                   {"retry_limit", Set(k.retry_limit)},
                   {"backoff_base_ms", Set(k.backoff_base_ms)},
                   {"backoff_max_ms", Set(k.backoff_max_ms)},
                   {"request_timeout_ms", Set(k.request_timeout_ms)}});
       }},
      {"classifier",
       [&](const json& v) {
         ClassifierConfig& k = c.classifier;
         Dispatch(v, "classifier",
                  {{"endpoint", Set(k.endpoint_url)},
                   {"batch_size", Set(k.batch_size)},
                   {"retry_limit", Set(k.retry_limit)},
                   {"backoff_base_ms", Set(k.backoff_base_ms)},
                   {"request_timeout_ms", Set(k.request_timeout_ms)}});
       }},
      {"evaluation",
       [&](const json& v) {
         Dispatch(v, "evaluation",
                  {{"bootstrap", Set(c.evaluation.bootstrap)},
                   {"confidence", Set(c.evaluation.confidence)},
                   {"seed", Set(c.evaluation.seed)},
                   {"split", Set(c.split)},
                   {"test_fraction", Set(c.test_fraction)},
                   {"split_seed", Set(c.split_seed)}});
       }},
      {"analysis",
       [&](const json& v) {
         Dispatch(v, "analysis",
                  {{"group_by", Set(group_by)}, {"disparity", Set(disparity)}});
       }},
      {"jobs", Set(c.jobs)},
  });
  if (!format.empty()) c.transcript_format = parse_transcript_format(format);
  if (!duration_mode.empty()) {
    c.assembly.duration_mode = ParseDurationMode(duration_mode);
  }
  if (!protocol.empty()) c.protocol = parse_protocol(protocol);
  if (!group_by.empty()) c.group_by = parse_group_by(group_by);
  if (!disparity.empty()) c.disparity = parse_disparity_mode(disparity);
  return c;
}

void RunConfig::validate() const {
  assembly.validate();
  client.validate();
  parse_endpoint(classifier.endpoint_url);
  if (classifier.batch_size == 0) {
    throw ValidationError("classifier batch_size must be > 0");
  }
  if (evaluation.bootstrap < 0) throw ValidationError("bootstrap must be >= 0");
  if (!(evaluation.confidence > 0.0 && evaluation.confidence < 1.0)) {
    throw ValidationError("confidence must be in (0, 1)");
  }
  if (split != "all" && split != "dev" && split != "test") {
    throw ValidationError("split must be all, dev or test");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ValidationError("test_fraction must be in (0, 1)");
  }
  if (jobs < 1) throw ValidationError("jobs must be >= 1");
}

json RunConfig::to_json() const {
  json p = json::object();
  auto put = [&p](const char* key, const std::optional<std::string>& v) {
    if (v) p[key] = *v;
  };
  put("taxonomy", paths.taxonomy);
  put("channels", paths.channels);
  put("fewshot", paths.fewshot);
  put("transcripts", paths.transcripts);
  put("dialogues", paths.dialogues);
  put("labels", paths.labels);
  put("annotations", paths.annotations);
  put("annotation_columns", paths.annotation_columns);
  put("gender_spans", paths.gender_spans);
  put("gender_offsets", paths.gender_offsets);
  put("out", paths.out);
  return {
      {"paths", std::move(p)},
      {"transcript_format", ToString(transcript_format)},
      {"assembly",
       {{"max_gap_s", assembly.max_gap_s},
        {"max_total_s", assembly.max_total_s},
        {"duration_mode", ToString(assembly.duration_mode)}}},
      {"protocol", newsgauge::to_string(protocol)},
      {"client",
       {{"endpoint", client.endpoint_url},
        {"model", client.model},
        {"temperature", client.temperature},
        {"max_tokens", client.max_tokens},
        {"max_in_flight", client.max_in_flight},
        {"retry_limit", client.retry_limit},
        {"backoff_base_ms", client.backoff_base_ms},
        {"backoff_max_ms", client.backoff_max_ms},
        {"request_timeout_ms", client.request_timeout_ms}}},
      {"classifier",
       {{"endpoint", classifier.endpoint_url},
        {"batch_size", classifier.batch_size},
        {"retry_limit", classifier.retry_limit},
        {"backoff_base_ms", classifier.backoff_base_ms},
        {"request_timeout_ms", classifier.request_timeout_ms}}},
      {"evaluation",
       {{"bootstrap", evaluation.bootstrap},
        {"confidence", evaluation.confidence},
        {"seed", evaluation.seed},
        {"split", split},
        {"test_fraction", test_fraction},
        {"split_seed", split_seed}}},
      {"analysis",
       {{"group_by", newsgauge::to_string(group_by)},
        {"disparity", newsgauge::to_string(disparity)}}},
      {"jobs", jobs},
  };
}

int run(int argc, const char* const* argv) {
  SetupLogging();
  const std::string started = utc_timestamp();

  CLI::App app{"newsgauge: topic and speaking-time analytics for broadcast news"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* ingest = app.add_subcommand("ingest", "Normalize transcripts to utterance JSONL");
  AddCommon(ingest, f);
  AddIn(ingest, f, "Transcript files");
  AddOut(ingest, f, "Utterance JSONL");
  ingest->add_option("--format", f.format, "utterance_jsonl or asr_segments_json");

  CLI::App* assemble = app.add_subcommand("assemble", "Merge utterances into dialogues");
  AddCommon(assemble, f);
  AddIn(assemble, f, "Utterance JSONL");
  AddOut(assemble, f, "Dialogue JSONL");
  AddAssembly(assemble, f);

  CLI::App* annotate = app.add_subcommand("annotate", "Label dialogues with a served model");
  AddCommon(annotate, f);
  AddIn(annotate, f, "Dialogue JSONL");
  AddOut(annotate, f, "Synthetic (chat) or label (classify) JSONL");
  AddClient(annotate, f);

  CLI::App* export_train =
      app.add_subcommand("export-train", "Write a training set from synthetic labels");
  AddCommon(export_train, f);
  AddIn(export_train, f, "Synthetic JSONL");
  AddOut(export_train, f, "Training JSONL");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Score predictions against gold");
  AddCommon(evaluate, f);
  evaluate->add_option("--gold", f.annotations, "Human annotations CSV");
  evaluate->add_option("--pred", f.labels, "Prediction JSONL");
  AddOut(evaluate, f, "Scores JSON");
  evaluate->add_option("--per-topic-out", f.per_topic_out,
                       "Per-topic CSV (default: scores_by_topic.csv next to --out)");
  AddEvaluation(evaluate, f);

  CLI::App* agreement = app.add_subcommand("agreement", "Inter-annotator agreement table");
  AddCommon(agreement, f);
  agreement->add_option("--annotations", f.annotations, "Human annotations CSV");
  agreement->add_option("--dialogues", f.dialogues, "Dialogue JSONL for durations");
  agreement->add_option("--columns", f.columns, "Annotation column mapping JSON");
  agreement->add_option("--json-out", f.json_out, "Agreement JSON");
  AddOut(agreement, f, "Agreement CSV");

  CLI::App* analyze = app.add_subcommand("analyze", "Speaking time by topic and gender");
  AddCommon(analyze, f);
  analyze->add_option("--dialogues", f.dialogues, "Dialogue JSONL");
  analyze->add_option("--labels", f.labels, "Label JSONL");
  AddAnalysis(analyze, f);
  AddOut(analyze, f, "Report directory");

  CLI::App* report = app.add_subcommand("report", "Rebuild a report from stage outputs");
  AddCommon(report, f);
  report->add_option("--analytics", f.analytics, "analytics.json from analyze");
  report->add_option("--scores", f.scores, "Scores JSON from evaluate");
  report->add_option("--agreement", f.agreement, "Agreement JSON");
  report->add_option("--disparity", f.disparity, "parity or distribution");
  AddOut(report, f, "Report directory");

  CLI::App* pipeline = app.add_subcommand(
      "pipeline", "assemble -> annotate (or --predictions) -> analyze -> report");
  AddCommon(pipeline, f);
  AddIn(pipeline, f, "Transcript files");
  pipeline->add_option("--format", f.format, "utterance_jsonl or asr_segments_json");
  pipeline->add_option("--predictions", f.labels, "Use these labels, skip annotate");
  pipeline->add_option("--gold", f.annotations, "Human annotations CSV (optional)");
  AddOut(pipeline, f, "Output directory");
  AddAssembly(pipeline, f);
  AddClient(pipeline, f);
  AddEvaluation(pipeline, f);
  AddAnalysis(pipeline, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, std::cout, std::cerr);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, std::cout, std::cerr);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* target = &app;
    for (const CLI::App* sub : app.get_subcommands()) target = sub;
    std::cerr << target->help();
    return 1;
  }

  try {
    RunConfig cfg = Resolve(f);
    if (*ingest) {
      CmdIngest(f, cfg);
    } else if (*assemble) {
      CmdAssemble(f, cfg);
    } else if (*annotate) {
      CmdAnnotate(f, cfg);
    } else if (*export_train) {
      CmdExportTrain(f, cfg);
    } else if (*evaluate) {
      CmdEvaluate(f, cfg);
    } else if (*agreement) {
      CmdAgreement(f, cfg);
    } else if (*analyze) {
      CmdAnalyze(started, cfg);
    } else if (*report) {
      CmdReport(f, started, cfg);
    } else if (*pipeline) {
      CmdPipeline(f, started, cfg);
    }
    return 0;
  } catch (const ValidationError& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  for (const auto& a : args) argv.push_back(a.c_str());
  argv.push_back(nullptr);
  return run(static_cast<int>(args.size()), argv.data());
}

}  // namespace newsgauge
