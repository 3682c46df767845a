#include "recollab/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string_view>

#include "recollab/cp_als.hpp"
#include "recollab/errors.hpp"

namespace recollab {

namespace {

std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const char* rule_name(WeightRule rule) {
  return rule == WeightRule::count ? "count" : "log";
}

WeightRule rule_from(const std::string& name) {
  if (name == "count") return WeightRule::count;
  if (name == "log") return WeightRule::log;
  throw ConfigError("unknown weight rule: " + name);
}

const char* model_select_name(ModelSelect model) {
  switch (model) {
    case ModelSelect::hypergraph: return "hypergraph";
    case ModelSelect::graph: return "graph";
    case ModelSelect::both: return "both";
    case ModelSelect::baseline: return "baseline";
  }
  throw ConfigError("unknown model selector");
}

ModelSelect model_select_from(const std::string& name) {
  if (name == "hyper" || name == "hypergraph") return ModelSelect::hypergraph;
  if (name == "graph") return ModelSelect::graph;
  if (name == "both") return ModelSelect::both;
  if (name == "baseline") return ModelSelect::baseline;
  throw ConfigError("unknown model: " + name);
}

template <typename T>
void require(bool ok, const T& message) {
  if (!ok) throw ConfigError(message);
}

template <typename T>
void reject_duplicates(const std::vector<T>& values, const char* what) {
  std::set<T> seen(values.begin(), values.end());
  if (seen.size() != values.size())
    throw ConfigError(std::string("duplicate entries in ") + what);
}

SnapshotScheme make_scheme(std::int64_t train_start, std::int64_t train_end,
                           std::int64_t width) {
  SnapshotScheme scheme;
  scheme.origin = train_start;
  scheme.width = width;
  scheme.count = static_cast<std::uint32_t>((train_end - train_start) / width + 1);
  return scheme;
}

nlohmann::json score_vector_to_json(const ScoreVector& scores) {
  return {{"log_score", scores.log_score},
          {"zero_mass", scores.zero_mass},
          {"factor_count", scores.factor_count},
          {"clamped_count", scores.clamped_count}};
}

ScoreVector score_vector_from_json(const nlohmann::json& doc) {
  ScoreVector scores;
  scores.log_score = doc.at("log_score").get<std::vector<double>>();
  scores.zero_mass = doc.at("zero_mass").get<std::vector<std::uint8_t>>();
  scores.factor_count = doc.at("factor_count").get<std::size_t>();
  scores.clamped_count = doc.at("clamped_count").get<std::size_t>();
  if (scores.log_score.size() != scores.zero_mass.size())
    throw ParseError("score cache entry is inconsistent");
  return scores;
}

nlohmann::json stats_to_json(const EnsembleStats& stats) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& member : stats.members)
    members.push_back({{"rank", member.rank},
                       {"seed", member.seed},
                       {"fit", member.fit},
                       {"iterations", member.iterations},
                       {"sweep_sqerr", member.sweep_sqerr}});
  return members;
}

EnsembleStats stats_from_json(const nlohmann::json& doc) {
  EnsembleStats stats;
  for (const auto& entry : doc)
    stats.members.push_back({entry.at("rank").get<int>(),
                             entry.at("seed").get<std::uint64_t>(),
                             entry.at("fit").get<double>(),
                             entry.at("iterations").get<int>(),
                             entry.at("sweep_sqerr").get<std::vector<double>>()});
  return stats;
}

struct ModelRun {
  ScoreVector scores;
  nlohmann::json diagnostics;
};

// Content that fully determines a model's score vector: the training records,
// the tensor/decomposition configuration, and the model itself. Labels are
// excluded; scores only see actor ids.
std::string cache_material(const std::string& model,
                           const std::vector<PublicationRecord>& train,
                           std::size_t n_actors, const SnapshotScheme& scheme,
                           const PipelineConfig& config) {
  std::string material;
  for (const auto& record : train) {
    material += record.id;
    material += '\x1f';
    material += std::to_string(record.time);
    for (ActorId a : record.actors) {
      material += ',';
      material += std::to_string(a);
    }
    material += '\n';
  }
  material += "|actors=" + std::to_string(n_actors);
  material += "|origin=" + std::to_string(scheme.origin);
  material += "|width=" + std::to_string(scheme.width);
  material += "|count=" + std::to_string(scheme.count);
  material += std::string("|rule=") + rule_name(config.rule);
  material += "|ranks=";
  for (int k : config.ranks) material += std::to_string(k) + ",";
  material += "|tbuf=" + std::to_string(config.t_buf);
  material += "|seed=" + std::to_string(config.seed);
  material += "|iters=" + std::to_string(config.max_iters);
  char tol[32];
  std::snprintf(tol, sizeof(tol), "|tol=%.17g", config.tol);
  material += tol;
  material += "|model=" + model;
  return material;
}

std::optional<std::pair<ScoreVector, EnsembleStats>> cache_load(const std::string& path,
                                                                const std::string& key) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  try {
    const nlohmann::json doc = nlohmann::json::parse(in);
    if (doc.at("key").get<std::string>() != key) return std::nullopt;
    return std::make_pair(score_vector_from_json(doc.at("scores")),
                          stats_from_json(doc.at("stats")));
  } catch (const std::exception&) {
    return std::nullopt;  // corrupt cache entries are recomputed, not fatal
  }
}

ModelRun compute_scores(const std::string& model,
                        const std::vector<PublicationRecord>& train,
                        const HyperedgeRegistry& h_registry, const EdgeRegistry& e_registry,
                        std::size_t n_actors, const SnapshotScheme& scheme,
                        const PipelineConfig& config) {
  std::string cache_path;
  std::string cache_key;
  if (!config.cache_dir.empty()) {
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(
                      fnv1a(cache_material(model, train, n_actors, scheme, config))));
    cache_key = hex;
    cache_path = (std::filesystem::path(config.cache_dir) / ("scores-" + cache_key + ".json"))
                     .string();
    if (auto cached = cache_load(cache_path, cache_key)) {
      ModelRun run;
      run.scores = std::move(cached->first);
      // Diagnostics come out identical whether computed or cached, so the
      // cache never leaks into output files.
      run.diagnostics = {{"model", model}, {"members", stats_to_json(cached->second)}};
      return run;
    }
  }

  ModelRun run;
  EnsembleStats stats;
  if (model == kModelHypergraph) {
    const SparseTensor3 tensor =
        load_hypergraph_tensor(train, h_registry, n_actors, scheme, config.rule);
    CPConfig base;
    base.max_iters = config.max_iters;
    base.tol = config.tol;
    base.seed = config.seed;
    const SimilarityMatrix sim =
        ensemble_similarity(tensor, config.ranks, base, TemporalBuffer{config.t_buf}, &stats);
    run.scores = hyperedge_scores(sim, h_registry);
  } else if (model == kModelGraph) {
    const SparseTensor3 tensor =
        load_graph_tensor(train, h_registry, e_registry, n_actors, scheme, config.rule);
    CPConfig base;
    base.max_iters = config.max_iters;
    base.tol = config.tol;
    base.seed = config.seed;
    const SimilarityMatrix sim =
        ensemble_similarity(tensor, config.ranks, base, TemporalBuffer{config.t_buf}, &stats);
    run.scores = graph_hyperedge_scores(graph_edge_scores(sim, e_registry), h_registry,
                                        e_registry);
  } else if (model == kModelBaselineHyper) {
    run.scores = frequency_baseline(train, h_registry, scheme.count, BaselineMode::hyper);
  } else if (model == kModelBaselineClique) {
    run.scores = frequency_baseline(train, h_registry, scheme.count, BaselineMode::clique);
  } else {
    throw ConfigError("unknown model: " + model);
  }

  run.diagnostics = {{"model", model}, {"members", stats_to_json(stats)}};
  if (!cache_path.empty()) {
    nlohmann::json entry = {{"key", cache_key},
                            {"scores", score_vector_to_json(run.scores)},
                            {"stats", stats_to_json(stats)}};
    write_file_atomic(cache_path, entry.dump());
  }
  return run;
}

}  // namespace

void PipelineConfig::validate() const {
  for (const auto& split : splits) split.validate();
  require(snapshot_width >= 1, "snapshot width must be positive");
  require(!ranks.empty(), "ranks must be non-empty");
  for (int k : ranks) require(k >= 1, "ranks must be positive");
  reject_duplicates(ranks, "ranks");
  require(t_buf >= 1, "t_buf must be at least 1");
  require(!sizes.empty(), "sizes must be non-empty");
  for (int s : sizes) require(s >= 2, "sizes must be at least 2");
  reject_duplicates(sizes, "sizes");
  require(!top_n.empty(), "top_n must be non-empty");
  for (int n : top_n) require(n >= 1, "top_n values must be positive");
  reject_duplicates(top_n, "top_n");
  require(full_list_min >= 2, "full_list_min must be at least 2");
  require(max_iters >= 1, "max_iters must be positive");
  require(tol > 0, "tol must be positive");
}

std::vector<std::string> PipelineConfig::selected_models() const {
  switch (model) {
    case ModelSelect::hypergraph: return {kModelHypergraph};
    case ModelSelect::graph: return {kModelGraph};
    case ModelSelect::both: return {kModelHypergraph, kModelGraph};
    case ModelSelect::baseline: return {kModelBaselineHyper, kModelBaselineClique};
  }
  throw ConfigError("unknown model selector");
}

std::vector<int> PipelineConfig::full_list_sizes() const {
  std::vector<int> out;
  for (int s : sizes)
    if (s >= full_list_min) out.push_back(s);
  std::sort(out.begin(), out.end());
  return out;
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "corpus", "splits",        "w",     "rule",      "ranks", "tbuf",     "seed",
      "sizes",  "topn",          "model", "max_iters", "tol",   "cache_dir",
      "full_list_min"};
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) throw ConfigError("unknown config key: " + key);

  PipelineConfig config;
  try {
    if (doc.contains("corpus")) config.corpus_path = doc.at("corpus").get<std::string>();
    if (doc.contains("splits")) {
      config.splits.clear();
      for (const auto& entry : doc.at("splits")) {
        SplitSpec split;
        split.train_start = entry.at("train_start").get<std::int64_t>();
        split.train_end = entry.at("train_end").get<std::int64_t>();
        split.test_start = entry.at("test_start").get<std::int64_t>();
        split.test_end = entry.at("test_end").get<std::int64_t>();
        config.splits.push_back(split);
      }
    }
    if (doc.contains("w")) config.snapshot_width = doc.at("w").get<std::int64_t>();
    if (doc.contains("rule")) config.rule = rule_from(doc.at("rule").get<std::string>());
    if (doc.contains("ranks")) config.ranks = doc.at("ranks").get<std::vector<int>>();
    if (doc.contains("tbuf")) config.t_buf = doc.at("tbuf").get<std::uint32_t>();
    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("sizes")) config.sizes = doc.at("sizes").get<std::vector<int>>();
    if (doc.contains("topn")) config.top_n = doc.at("topn").get<std::vector<int>>();
    if (doc.contains("full_list_min"))
      config.full_list_min = doc.at("full_list_min").get<int>();
    if (doc.contains("model"))
      config.model = model_select_from(doc.at("model").get<std::string>());
    if (doc.contains("max_iters")) config.max_iters = doc.at("max_iters").get<int>();
    if (doc.contains("tol")) config.tol = doc.at("tol").get<double>();
    if (doc.contains("cache_dir")) config.cache_dir = doc.at("cache_dir").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return config;
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json splits_doc = nlohmann::json::array();
  for (const auto& split : splits)
    splits_doc.push_back({{"train_start", split.train_start},
                          {"train_end", split.train_end},
                          {"test_start", split.test_start},
                          {"test_end", split.test_end}});
  return {{"corpus", corpus_path},
          {"splits", std::move(splits_doc)},
          {"w", snapshot_width},
          {"rule", rule_name(rule)},
          {"ranks", ranks},
          {"tbuf", t_buf},
          {"seed", seed},
          {"sizes", sizes},
          {"topn", top_n},
          {"full_list_min", full_list_min},
          {"model", model_select_name(model)},
          {"max_iters", max_iters},
          {"tol", tol},
          {"cache_dir", cache_dir}};
}

const ModelScores* PredictResult::find_model(const std::string& name) const {
  for (const auto& entry : models)
    if (entry.model == name) return &entry;
  return nullptr;
}

PredictResult run_predict(const Corpus& corpus, const PipelineConfig& config) {
  config.validate();
  std::vector<PublicationRecord> records = preprocess(corpus.records);

  std::vector<PublicationRecord> train;
  std::int64_t window_start = 0;
  std::int64_t window_end = 0;
  if (!config.splits.empty()) {
    train = split_records(records, config.splits.front()).first;
    window_start = config.splits.front().train_start;
    window_end = config.splits.front().train_end;
  } else {
    if (records.empty())
      throw ComputeError("training stage: no usable records after preprocessing");
    train = std::move(records);
    window_start = window_end = train.front().time;
    for (const auto& record : train) {
      window_start = std::min(window_start, record.time);
      window_end = std::max(window_end, record.time);
    }
  }

  PredictResult result;
  auto registries = build_registries(train);
  result.h_registry = std::move(registries.first);
  result.e_registry = std::move(registries.second);
  result.scheme = make_scheme(window_start, window_end, config.snapshot_width);

  nlohmann::json model_diags = nlohmann::json::array();
  for (const std::string& model : config.selected_models()) {
    ModelRun run = compute_scores(model, train, result.h_registry, result.e_registry,
                                  corpus.actor_count(), result.scheme, config);
    ModelScores entry;
    entry.model = model;
    entry.scores = std::move(run.scores);
    entry.rankings = rank_by_size(entry.scores, result.h_registry, config.sizes);
    model_diags.push_back(std::move(run.diagnostics));
    result.models.push_back(std::move(entry));
  }

  result.diagnostics = {{"n_records_train", train.size()},
                        {"n_actors", corpus.actor_count()},
                        {"n_hyperedges", result.h_registry.size()},
                        {"n_edges", result.e_registry.size()},
                        {"snapshots",
                         {{"origin", result.scheme.origin},
                          {"width", result.scheme.width},
                          {"count", result.scheme.count}}},
                        {"models", std::move(model_diags)}};
  return result;
}

EvaluateResult run_evaluate(const Corpus& corpus, const PipelineConfig& config) {
  config.validate();
  if (config.splits.empty()) throw ConfigError("evaluate needs at least one split");
  const std::vector<PublicationRecord> records = preprocess(corpus.records);

  std::vector<std::pair<std::vector<PublicationRecord>, std::vector<PublicationRecord>>> parts;
  std::size_t total_test = 0;
  for (const auto& split : config.splits) {
    parts.push_back(split_records(records, split));
    total_test += parts.back().second.size();
  }
  if (total_test == 0) throw ComputeError("evaluation stage: no test records in any split");

  const std::vector<int> full_sizes = config.full_list_sizes();
  std::map<std::string, std::vector<SplitMetrics>> per_model;
  nlohmann::json split_diags = nlohmann::json::array();
  for (std::size_t s = 0; s < config.splits.size(); ++s) {
    const SplitSpec& split = config.splits[s];
    const auto& [train, test] = parts[s];
    const auto [h_registry, e_registry] = build_registries(train);
    const SnapshotScheme scheme =
        make_scheme(split.train_start, split.train_end, config.snapshot_width);
    const GroundTruth truth = ground_truth(test, h_registry);

    nlohmann::json truth_counts = nlohmann::json::object();
    for (const auto& [size, positives] : truth.positives)
      truth_counts[std::to_string(size)] = positives.size();
    nlohmann::json model_diags = nlohmann::json::array();

    for (const std::string& model : config.selected_models()) {
      ModelRun run = compute_scores(model, train, h_registry, e_registry,
                                    corpus.actor_count(), scheme, config);
      const auto rankings = rank_by_size(run.scores, h_registry, config.sizes);
      SplitMetrics metrics;
      metrics.split = split;
      for (int n : config.top_n)
        for (int size : config.sizes) {
          const RankedList& list = rankings.at(size);
          const double p = precision_at_n(list, truth, static_cast<std::size_t>(n));
          const double r = recall_at_n(list, truth, static_cast<std::size_t>(n));
          metrics.at_n[n][size] = {p, r, f_score(p, r)};
        }
      for (int size : full_sizes) {
        const auto [p, r] = full_list_metrics(rankings.at(size), truth);
        metrics.full_list[size] = {p, r, f_score(p, r)};
      }
      per_model[model].push_back(std::move(metrics));
      model_diags.push_back(std::move(run.diagnostics));
    }

    split_diags.push_back({{"split",
                            {{"train_start", split.train_start},
                             {"train_end", split.train_end},
                             {"test_start", split.test_start},
                             {"test_end", split.test_end}}},
                           {"n_train", train.size()},
                           {"n_test", test.size()},
                           {"n_hyperedges", h_registry.size()},
                           {"n_edges", e_registry.size()},
                           {"truth_counts", std::move(truth_counts)},
                           {"models", std::move(model_diags)}});
  }

  EvaluateResult result;
  for (auto& [model, splits] : per_model)
    result.reports.emplace(
        model, average_over_splits(std::move(splits), config.sizes, config.top_n, full_sizes));
  const auto graph_it = result.reports.find(kModelGraph);
  const auto hyper_it = result.reports.find(kModelHypergraph);
  if (graph_it != result.reports.end() && hyper_it != result.reports.end())
    result.comparison = compare_report(graph_it->second, hyper_it->second);
  result.diagnostics = {{"n_actors", corpus.actor_count()}, {"splits", std::move(split_diags)}};
  return result;
}

nlohmann::json EvaluateResult::to_json() const {
  nlohmann::json models = nlohmann::json::object();
  for (const auto& [name, report] : reports) models[name] = metrics_to_json(report);
  nlohmann::json doc = {{"models", std::move(models)}, {"diagnostics", diagnostics}};
  doc["comparison"] = comparison ? comparison_to_json(*comparison) : nlohmann::json(nullptr);
  return doc;
}

std::string format_ranking_tsv(const RankedList& list, const HyperedgeRegistry& registry,
                               const Corpus& corpus) {
  std::string out = "rank\tmembers\tlog_score\n";
  char buf[64];
  for (std::size_t i = 0; i < list.items.size(); ++i) {
    const auto& item = list.items[i];
    out += std::to_string(i + 1);
    out += '\t';
    const auto& members = registry.key(item.index).members;
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (m) out += ',';
      out += corpus.label(members[m]);
    }
    out += '\t';
    if (item.zero_mass) {
      out += "ZERO";
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g", item.log_score);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp(path + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace recollab
