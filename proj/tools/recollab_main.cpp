#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "recollab.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

[[noreturn]] void die(const std::string& stage, const std::string& message) {
  std::fprintf(stderr, "error (%s): %s\n", stage.c_str(), message.c_str());
  std::exit(1);
}

void check(recollab_status status, const std::string& stage) {
  if (status != RECOLLAB_OK)
    die(stage, std::string(recollab_status_name(status)) + ": " + recollab_last_error());
}

// Take ownership of a C string from the library and free it.
std::string take(char* text) {
  std::string out = text ? text : "";
  recollab_string_free(text);
  return out;
}

std::string read_file(const std::string& path, const std::string& stage) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(stage, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Write-temp-then-rename so readers never observe partial output.
void write_file(const std::string& path, const std::string& content,
                const std::string& stage) {
  const fs::path target(path);
  std::error_code ec;
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) die(stage, "cannot create " + target.parent_path().string());
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) die(stage, "cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) die(stage, "short write to " + tmp);
  }
  fs::rename(tmp, target, ec);
  if (ec) die(stage, "cannot rename " + tmp + ": " + ec.message());
}

struct PipelineFlags {
  std::string corpus;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> w;
  std::optional<std::uint32_t> tbuf;
  std::vector<int> ranks;
  std::string rule;
  std::string model;
  std::vector<int> sizes;
  std::vector<int> topn;
  std::vector<std::string> splits;
  std::string cache_dir;
  bool no_cache = false;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& flags) {
  cmd->add_option("--corpus", flags.corpus, "corpus file, line-delimited JSON records");
  cmd->add_option("--config", flags.config_path, "JSON config file; flags override it");
  cmd->add_option("--seed", flags.seed, "base seed for all randomness");
  cmd->add_option("--w", flags.w, "snapshot width in time units");
  cmd->add_option("--tbuf", flags.tbuf, "temporal buffer (trailing snapshots)");
  cmd->add_option("--ranks", flags.ranks, "ensemble decomposition ranks")->delimiter(',');
  cmd->add_option("--rule", flags.rule, "weight rule")
      ->check(CLI::IsMember({"count", "log"}));
  cmd->add_option("--model", flags.model, "model selection")
      ->check(CLI::IsMember({"hyper", "graph", "both", "baseline"}));
  cmd->add_option("--sizes", flags.sizes, "collaboration sizes to rank")->delimiter(',');
  cmd->add_option("--topn", flags.topn, "top-N cutoffs for metrics")->delimiter(',');
  cmd->add_option("--split", flags.splits,
                  "train_start:train_end:test_start:test_end (repeatable)");
  cmd->add_option("--cache-dir", flags.cache_dir,
                  "score cache directory (default: <out-dir>/cache)");
  cmd->add_flag("--no-cache", flags.no_cache, "disable the score cache");
  cmd->add_option("--out-dir", flags.out_dir, "output directory")->required();
}

json parse_split(const std::string& text, const std::string& stage) {
  std::vector<std::int64_t> values;
  std::stringstream in(text);
  std::string field;
  while (std::getline(in, field, ':')) {
    try {
      values.push_back(std::stoll(field));
    } catch (const std::exception&) {
      die(stage, "bad split component '" + field + "' in " + text);
    }
  }
  if (values.size() != 4)
    die(stage, "split must be train_start:train_end:test_start:test_end, got " + text);
  return {{"train_start", values[0]},
          {"train_end", values[1]},
          {"test_start", values[2]},
          {"test_end", values[3]}};
}

json build_config(const PipelineFlags& flags, const std::string& stage) {
  json config = json::object();
  if (!flags.config_path.empty()) {
    config = json::parse(read_file(flags.config_path, stage), nullptr, false);
    if (config.is_discarded())
      die(stage, "config file is not valid JSON: " + flags.config_path);
    if (!config.is_object()) die(stage, "config file must hold a JSON object");
  }
  if (!flags.corpus.empty()) config["corpus"] = flags.corpus;
  if (flags.seed) config["seed"] = *flags.seed;
  if (flags.w) config["w"] = *flags.w;
  if (flags.tbuf) config["tbuf"] = *flags.tbuf;
  if (!flags.ranks.empty()) config["ranks"] = flags.ranks;
  if (!flags.rule.empty()) config["rule"] = flags.rule;
  if (!flags.model.empty()) config["model"] = flags.model;
  if (!flags.sizes.empty()) config["sizes"] = flags.sizes;
  if (!flags.topn.empty()) config["topn"] = flags.topn;
  if (!flags.splits.empty()) {
    json splits = json::array();
    for (const auto& text : flags.splits) splits.push_back(parse_split(text, stage));
    config["splits"] = std::move(splits);
  }
  if (flags.no_cache)
    config["cache_dir"] = "";
  else if (!flags.cache_dir.empty())
    config["cache_dir"] = flags.cache_dir;
  else if (!config.contains("cache_dir"))
    config["cache_dir"] = (fs::path(flags.out_dir) / "cache").string();
  return config;
}

recollab_corpus* open_corpus(const json& config, const std::string& stage) {
  const std::string path = config.value("corpus", std::string());
  if (path.empty()) die(stage, "no corpus given; use --corpus or the config file");
  recollab_corpus* corpus = nullptr;
  check(recollab_corpus_open(path.c_str(), &corpus), "ingest");
  return corpus;
}

int cmd_predict(const PipelineFlags& flags) {
  const std::string stage = "predict";
  const json config = build_config(flags, stage);
  recollab_corpus* corpus = open_corpus(config, stage);

  recollab_result* result = nullptr;
  check(recollab_predict(corpus, config.dump().c_str(), &result), stage);

  char* names_text = nullptr;
  check(recollab_result_models(result, &names_text), stage);
  const json names = json::parse(take(names_text));
  const std::vector<int> sizes = config.contains("sizes")
                                     ? config.at("sizes").get<std::vector<int>>()
                                     : std::vector<int>{2, 3, 4, 5, 6, 7};

  write_file((fs::path(flags.out_dir) / "config.json").string(), config.dump(2) + "\n",
             stage);
  std::size_t files = 1;
  for (const auto& name : names) {
    const std::string model = name.get<std::string>();
    const fs::path model_dir = fs::path(flags.out_dir) / model;
    for (int size : sizes) {
      char* tsv = nullptr;
      check(recollab_result_ranking_tsv(result, model.c_str(), size, &tsv), stage);
      write_file((model_dir / ("ranking_size" + std::to_string(size) + ".tsv")).string(),
                 take(tsv), stage);
      ++files;
    }
    char* scores = nullptr;
    check(recollab_result_scores_tsv(result, model.c_str(), &scores), stage);
    write_file((model_dir / "scores.tsv").string(), take(scores), stage);
    ++files;
  }
  std::fprintf(stderr, "predict: wrote %zu files for %zu model(s) under %s\n", files,
               names.size(), flags.out_dir.c_str());
  recollab_result_close(result);
  recollab_corpus_close(corpus);
  return 0;
}

int cmd_evaluate(const PipelineFlags& flags) {
  const std::string stage = "evaluate";
  const json config = build_config(flags, stage);
  recollab_corpus* corpus = open_corpus(config, stage);

  recollab_result* result = nullptr;
  check(recollab_evaluate(corpus, config.dump().c_str(), &result), stage);

  char* metrics_text = nullptr;
  check(recollab_result_metrics_json(result, &metrics_text), stage);
  const std::string metrics = take(metrics_text);

  write_file((fs::path(flags.out_dir) / "config.json").string(), config.dump(2) + "\n",
             stage);
  write_file((fs::path(flags.out_dir) / "metrics.json").string(), metrics + "\n", stage);
  const json doc = json::parse(metrics);
  if (doc.contains("comparison") && !doc.at("comparison").is_null()) {
    const std::string table = doc.at("comparison").at("table").get<std::string>();
    write_file((fs::path(flags.out_dir) / "comparison.tsv").string(), table, stage);
    std::fputs(table.c_str(), stdout);
  }
  std::fprintf(stderr, "evaluate: wrote metrics under %s\n", flags.out_dir.c_str());
  recollab_result_close(result);
  recollab_corpus_close(corpus);
  return 0;
}

struct SynthFlags {
  std::uint32_t actors = 100;
  std::uint32_t groups = 10;
  std::uint32_t size_min = 3;
  std::uint32_t size_max = 5;
  double bg_rate = 0.0;
  double rate = 0.5;
  std::uint32_t snapshots = 10;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_synth(const SynthFlags& flags) {
  const std::string stage = "synth";
  const json params = {{"n_actors", flags.actors},
                       {"n_planted_groups", flags.groups},
                       {"group_size_min", flags.size_min},
                       {"group_size_max", flags.size_max},
                       {"background_pair_rate", flags.bg_rate},
                       {"recurrence_rate", flags.rate},
                       {"n_snapshots", flags.snapshots},
                       {"seed", flags.seed}};
  recollab_corpus* corpus = nullptr;
  check(recollab_corpus_synth(params.dump().c_str(), &corpus), stage);
  check(recollab_corpus_save(corpus, flags.out.c_str()), stage);
  char* stats_text = nullptr;
  check(recollab_corpus_stats(corpus, &stats_text), stage);
  std::printf("seed: %llu\n", static_cast<unsigned long long>(flags.seed));
  std::fprintf(stderr, "synth: %s -> %s\n", take(stats_text).c_str(), flags.out.c_str());
  recollab_corpus_close(corpus);
  return 0;
}

struct CompareFlags {
  std::string graph_path;
  std::string hyper_path;
  std::string out_dir;
};

// Accept either a bare per-model metrics report or a full evaluate document
// holding several models.
json extract_report(const std::string& path, const std::string& preferred,
                    const std::string& stage) {
  json doc = json::parse(read_file(path, stage), nullptr, false);
  if (doc.is_discarded()) die(stage, path + " is not valid JSON");
  if (!doc.is_object()) die(stage, path + " must hold a JSON object");
  if (!doc.contains("models")) return doc;
  const json& models = doc.at("models");
  if (models.contains(preferred)) return models.at(preferred);
  if (models.size() == 1) return models.begin().value();
  die(stage, path + " does not contain a '" + preferred + "' report");
}

int cmd_compare(const CompareFlags& flags) {
  const std::string stage = "compare";
  const json graph_report = extract_report(flags.graph_path, "graph", stage);
  const json hyper_report = extract_report(flags.hyper_path, "hypergraph", stage);
  char* out_text = nullptr;
  check(recollab_compare(graph_report.dump().c_str(), hyper_report.dump().c_str(),
                         &out_text),
        stage);
  const std::string comparison = take(out_text);
  const json doc = json::parse(comparison);
  std::fputs(doc.at("table").get<std::string>().c_str(), stdout);
  if (!flags.out_dir.empty()) {
    write_file((fs::path(flags.out_dir) / "comparison.json").string(), comparison + "\n",
               stage);
    write_file((fs::path(flags.out_dir) / "comparison.tsv").string(),
               doc.at("table").get<std::string>(), stage);
    std::fprintf(stderr, "compare: wrote comparison under %s\n", flags.out_dir.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"recollab: predicting recurring multi-actor collaborations"};
  app.require_subcommand(1);

  SynthFlags synth_flags;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  synth->add_option("--actors", synth_flags.actors, "actor pool size");
  synth->add_option("--groups", synth_flags.groups, "number of planted groups");
  synth->add_option("--size-min", synth_flags.size_min, "smallest group size");
  synth->add_option("--size-max", synth_flags.size_max, "largest group size");
  synth->add_option("--bg-rate", synth_flags.bg_rate,
                    "per-snapshot rate of each within-group pair");
  synth->add_option("--rate", synth_flags.rate, "mean per-snapshot group recurrence rate");
  synth->add_option("--snapshots", synth_flags.snapshots, "number of snapshots");
  synth->add_option("--seed", synth_flags.seed, "generator seed");
  synth->add_option("--out", synth_flags.out, "corpus output file")->required();

  PipelineFlags predict_flags;
  CLI::App* predict = app.add_subcommand("predict", "rank hyperedges by recurrence score");
  add_pipeline_flags(predict, predict_flags);

  PipelineFlags evaluate_flags;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score models against test-window ground truth");
  add_pipeline_flags(evaluate, evaluate_flags);

  CompareFlags compare_flags;
  CLI::App* compare =
      app.add_subcommand("compare", "tabulate graph vs hypergraph averaged F-scores");
  compare->add_option("graph_metrics", compare_flags.graph_path, "graph metrics JSON")
      ->required();
  compare->add_option("hyper_metrics", compare_flags.hyper_path, "hypergraph metrics JSON")
      ->required();
  compare->add_option("--out-dir", compare_flags.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(synth)) return cmd_synth(synth_flags);
  if (app.got_subcommand(predict)) return cmd_predict(predict_flags);
  if (app.got_subcommand(evaluate)) return cmd_evaluate(evaluate_flags);
  if (app.got_subcommand(compare)) return cmd_compare(compare_flags);
  return 1;
}
