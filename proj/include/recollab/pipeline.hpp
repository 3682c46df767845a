#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "recollab/corpus.hpp"
#include "recollab/eval.hpp"
#include "recollab/loader.hpp"
#include "recollab/scoring.hpp"
#include "recollab/synthetic.hpp"
#include "recollab/types.hpp"

namespace recollab {

enum class ModelSelect { hypergraph, graph, both, baseline };

/// Canonical model names as they appear in outputs.
inline constexpr const char* kModelHypergraph = "hypergraph";
inline constexpr const char* kModelGraph = "graph";
inline constexpr const char* kModelBaselineHyper = "baseline_hyper";
inline constexpr const char* kModelBaselineClique = "baseline_clique";

struct PipelineConfig {
  std::string corpus_path;  // carried for the CLI; the pipeline itself takes a Corpus
  std::vector<SplitSpec> splits;
  std::int64_t snapshot_width = 1;
  WeightRule rule = WeightRule::count;
  std::vector<int> ranks = {20, 40, 60, 80, 100, 120, 140, 160, 180, 200};
  std::uint32_t t_buf = 3;
  std::uint64_t seed = 0;
  std::vector<int> sizes = {2, 3, 4, 5, 6, 7};
  std::vector<int> top_n = {100, 1000};
  int full_list_min = 6;  // sizes at or above this also get whole-list metrics
  ModelSelect model = ModelSelect::both;
  int max_iters = 100;
  double tol = 1e-4;
  std::string cache_dir;  // empty disables caching of decomposition scores

  void validate() const;
  std::vector<std::string> selected_models() const;
  std::vector<int> full_list_sizes() const;

  static PipelineConfig from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;
};

/// Scores and rankings for one trained model over the training registry.
struct ModelScores {
  std::string model;
  ScoreVector scores;
  std::map<int, RankedList> rankings;  // per requested size
};

struct PredictResult {
  HyperedgeRegistry h_registry;
  EdgeRegistry e_registry;
  SnapshotScheme scheme;
  std::vector<ModelScores> models;
  nlohmann::json diagnostics;

  const ModelScores* find_model(const std::string& name) const;
};

/// Train on the first split's training window when splits are configured,
/// otherwise on the whole corpus, and score every selected model.
PredictResult run_predict(const Corpus& corpus, const PipelineConfig& config);

struct EvaluateResult {
  std::map<std::string, MetricsReport> reports;
  std::optional<ComparisonReport> comparison;  // present when hyper and graph both ran
  nlohmann::json diagnostics;

  nlohmann::json to_json() const;
};

/// Per-split train/score/evaluate over every configured split, averaged per
/// model; requires at least one split.
EvaluateResult run_evaluate(const Corpus& corpus, const PipelineConfig& config);

/// Ranking rows "rank<TAB>members<TAB>log_score" (ZERO for zero-mass).
std::string format_ranking_tsv(const RankedList& list,
                               const HyperedgeRegistry& registry,
                               const Corpus& corpus);

/// Write-temp-then-rename; directories are created as needed.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace recollab
