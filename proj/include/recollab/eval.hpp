#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "recollab/scoring.hpp"
#include "recollab/types.hpp"

namespace recollab {

/// Per cardinality: the training hyperedges whose actor set recurs in the
/// test window. Test records with unregistered actor sets are ignored.
struct GroundTruth {
  std::map<int, std::set<std::uint32_t>> positives;

  bool contains(int size, std::uint32_t index) const;
  std::size_t count(int size) const;
};

GroundTruth ground_truth(const std::vector<PublicationRecord>& test,
                         const HyperedgeRegistry& registry);

/// All hyperedges of one cardinality, descending score; zero-mass entries
/// sort below every scored entry; ties break by ascending index.
struct RankedList {
  struct Item {
    std::uint32_t index = 0;
    double log_score = 0.0;
    bool zero_mass = false;
  };
  int size_class = 0;
  std::vector<Item> items;
};

std::map<int, RankedList> rank_by_size(const ScoreVector& scores,
                                       const HyperedgeRegistry& registry,
                                       const std::vector<int>& sizes);

/// Hits among the top min(n, len) entries divided by n (the denominator stays
/// n even when fewer candidates exist).
double precision_at_n(const RankedList& list, const GroundTruth& truth, std::size_t n);

/// Hits among the top n divided by the number of positives; 0 when the truth
/// set is empty.
double recall_at_n(const RankedList& list, const GroundTruth& truth, std::size_t n);

/// Whole-list precision/recall; only non-zero-mass entries count as
/// predictions.
std::pair<double, double> full_list_metrics(const RankedList& list, const GroundTruth& truth);

struct PrfValues {
  double precision = 0.0;
  double recall = 0.0;
  double f_score = 0.0;
};

/// 2PR/(P+R), or 0 when P+R = 0.
double f_score(double precision, double recall);

struct MetricsBlock {
  std::map<int, std::map<int, PrfValues>> at_n;  // N -> size -> values
  std::map<int, PrfValues> full_list;            // size -> values
};

struct SplitMetrics : MetricsBlock {
  SplitSpec split;
};

struct MetricsReport {
  std::vector<int> sizes;
  std::vector<int> top_n;
  std::vector<int> full_list_sizes;
  std::vector<SplitMetrics> splits;
  MetricsBlock average;
};

/// Arithmetic mean of precision and recall across splits; the averaged
/// F-score is recombined from the averaged precision and recall, not averaged
/// itself. Throws on zero splits.
MetricsReport average_over_splits(std::vector<SplitMetrics> splits,
                                  const std::vector<int>& sizes,
                                  const std::vector<int>& top_n,
                                  const std::vector<int>& full_list_sizes);

/// Side-by-side averaged F-scores with the relative change
/// (F_hyper - F_graph) / F_graph; the delta is absent where F_graph = 0.
struct ComparisonReport {
  struct Row {
    std::optional<int> n;  // nullopt marks a full-list row
    int size = 0;
    double f_graph = 0.0;
    double f_hyper = 0.0;
    std::optional<double> rel_delta;
  };
  std::vector<Row> rows;
};

/// Both reports must cover identical sizes, N values, and split counts.
ComparisonReport compare_report(const MetricsReport& graph_metrics,
                                const MetricsReport& hyper_metrics);

nlohmann::json metrics_to_json(const MetricsReport& report);
MetricsReport metrics_from_json(const nlohmann::json& doc);
nlohmann::json comparison_to_json(const ComparisonReport& report);
std::string format_comparison_table(const ComparisonReport& report);

}  // namespace recollab
