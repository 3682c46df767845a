#include "recollab/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "recollab/errors.hpp"

namespace recollab {

bool GroundTruth::contains(int size, std::uint32_t index) const {
  const auto it = positives.find(size);
  return it != positives.end() && it->second.count(index) > 0;
}

std::size_t GroundTruth::count(int size) const {
  const auto it = positives.find(size);
  return it == positives.end() ? 0 : it->second.size();
}

GroundTruth ground_truth(const std::vector<PublicationRecord>& test,
                         const HyperedgeRegistry& registry) {
  GroundTruth truth;
  for (const auto& record : test) {
    const auto index = registry.lookup(HyperedgeKey{record.actors});
    if (!index) continue;  // never seen in training: not a recurrence candidate
    truth.positives[static_cast<int>(record.actors.size())].insert(*index);
  }
  return truth;
}

std::map<int, RankedList> rank_by_size(const ScoreVector& scores,
                                       const HyperedgeRegistry& registry,
                                       const std::vector<int>& sizes) {
  if (scores.size() != registry.size())
    throw std::invalid_argument("score vector does not match the registry");
  std::map<int, RankedList> lists;
  for (int size : sizes) lists[size].size_class = size;
  for (std::uint32_t i = 0; i < registry.size(); ++i) {
    const int size = static_cast<int>(registry.key(i).cardinality());
    const auto it = lists.find(size);
    if (it == lists.end()) continue;
    it->second.items.push_back({i, scores.log_score[i], scores.is_zero(i)});
  }
  for (auto& [size, list] : lists) {
    std::sort(list.items.begin(), list.items.end(),
              [](const RankedList::Item& x, const RankedList::Item& y) {
                if (x.zero_mass != y.zero_mass) return y.zero_mass;
                if (!x.zero_mass && x.log_score != y.log_score)
                  return x.log_score > y.log_score;
                return x.index < y.index;
              });
  }
  return lists;
}

double precision_at_n(const RankedList& list, const GroundTruth& truth, std::size_t n) {
  if (n == 0) throw std::invalid_argument("precision@N needs N >= 1");
  const std::size_t limit = std::min(n, list.items.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < limit; ++i)
    if (truth.contains(list.size_class, list.items[i].index)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(n);
}

double recall_at_n(const RankedList& list, const GroundTruth& truth, std::size_t n) {
  if (n == 0) throw std::invalid_argument("recall@N needs N >= 1");
  const std::size_t relevant = truth.count(list.size_class);
  if (relevant == 0) return 0.0;
  const std::size_t limit = std::min(n, list.items.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < limit; ++i)
    if (truth.contains(list.size_class, list.items[i].index)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(relevant);
}

std::pair<double, double> full_list_metrics(const RankedList& list, const GroundTruth& truth) {
  std::size_t predicted = 0;
  std::size_t hits = 0;
  for (const auto& item : list.items) {
    if (item.zero_mass) continue;
    ++predicted;
    if (truth.contains(list.size_class, item.index)) ++hits;
  }
  const std::size_t relevant = truth.count(list.size_class);
  const double precision =
      predicted == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(predicted);
  const double recall =
      relevant == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(relevant);
  return {precision, recall};
}

double f_score(double precision, double recall) {
  const double denom = precision + recall;
  if (denom <= 0.0) return 0.0;
  return 2.0 * precision * recall / denom;
}

MetricsReport average_over_splits(std::vector<SplitMetrics> splits,
                                  const std::vector<int>& sizes,
                                  const std::vector<int>& top_n,
                                  const std::vector<int>& full_list_sizes) {
  if (splits.empty()) throw ComputeError("cannot average over zero splits");
  MetricsReport report;
  report.sizes = sizes;
  report.top_n = top_n;
  report.full_list_sizes = full_list_sizes;
  report.splits = std::move(splits);

  const double denom = static_cast<double>(report.splits.size());
  for (int n : top_n)
    for (int size : sizes) {
      double p = 0.0, r = 0.0;
      for (const auto& split : report.splits) {
        const auto& values = split.at_n.at(n).at(size);
        p += values.precision;
        r += values.recall;
      }
      p /= denom;
      r /= denom;
      report.average.at_n[n][size] = {p, r, f_score(p, r)};
    }
  for (int size : full_list_sizes) {
    double p = 0.0, r = 0.0;
    for (const auto& split : report.splits) {
      const auto& values = split.full_list.at(size);
      p += values.precision;
      r += values.recall;
    }
    p /= denom;
    r /= denom;
    report.average.full_list[size] = {p, r, f_score(p, r)};
  }
  return report;
}

ComparisonReport compare_report(const MetricsReport& graph_metrics,
                                const MetricsReport& hyper_metrics) {
  if (graph_metrics.sizes != hyper_metrics.sizes ||
      graph_metrics.top_n != hyper_metrics.top_n ||
      graph_metrics.full_list_sizes != hyper_metrics.full_list_sizes ||
      graph_metrics.splits.size() != hyper_metrics.splits.size())
    throw ConfigError("comparison inputs cover different grids");

  ComparisonReport report;
  const auto add_row = [&report](std::optional<int> n, int size, double fg, double fh) {
    ComparisonReport::Row row;
    row.n = n;
    row.size = size;
    row.f_graph = fg;
    row.f_hyper = fh;
    if (fg != 0.0) row.rel_delta = (fh - fg) / fg;
    report.rows.push_back(row);
  };
  for (int n : graph_metrics.top_n)
    for (int size : graph_metrics.sizes)
      add_row(n, size, graph_metrics.average.at_n.at(n).at(size).f_score,
              hyper_metrics.average.at_n.at(n).at(size).f_score);
  for (int size : graph_metrics.full_list_sizes)
    add_row(std::nullopt, size, graph_metrics.average.full_list.at(size).f_score,
            hyper_metrics.average.full_list.at(size).f_score);
  return report;
}

namespace {

nlohmann::json prf_to_json(const PrfValues& values) {
  return {{"precision", values.precision},
          {"recall", values.recall},
          {"f_score", values.f_score}};
}

PrfValues prf_from_json(const nlohmann::json& doc) {
  return {doc.at("precision").get<double>(), doc.at("recall").get<double>(),
          doc.at("f_score").get<double>()};
}

nlohmann::json block_to_json(const MetricsBlock& block) {
  nlohmann::json at_n = nlohmann::json::object();
  for (const auto& [n, by_size] : block.at_n) {
    nlohmann::json row = nlohmann::json::object();
    for (const auto& [size, values] : by_size) row[std::to_string(size)] = prf_to_json(values);
    at_n[std::to_string(n)] = std::move(row);
  }
  nlohmann::json full = nlohmann::json::object();
  for (const auto& [size, values] : block.full_list)
    full[std::to_string(size)] = prf_to_json(values);
  return {{"at_n", std::move(at_n)}, {"full_list", std::move(full)}};
}

MetricsBlock block_from_json(const nlohmann::json& doc) {
  MetricsBlock block;
  for (const auto& [n, by_size] : doc.at("at_n").items())
    for (const auto& [size, values] : by_size.items())
      block.at_n[std::stoi(n)][std::stoi(size)] = prf_from_json(values);
  for (const auto& [size, values] : doc.at("full_list").items())
    block.full_list[std::stoi(size)] = prf_from_json(values);
  return block;
}

}  // namespace

nlohmann::json metrics_to_json(const MetricsReport& report) {
  nlohmann::json splits = nlohmann::json::array();
  for (const auto& split : report.splits) {
    nlohmann::json entry = block_to_json(split);
    entry["split"] = {{"train_start", split.split.train_start},
                      {"train_end", split.split.train_end},
                      {"test_start", split.split.test_start},
                      {"test_end", split.split.test_end}};
    splits.push_back(std::move(entry));
  }
  return {{"sizes", report.sizes},
          {"top_n", report.top_n},
          {"full_list_sizes", report.full_list_sizes},
          {"splits", std::move(splits)},
          {"average", block_to_json(report.average)}};
}

MetricsReport metrics_from_json(const nlohmann::json& doc) {
  try {
    MetricsReport report;
    report.sizes = doc.at("sizes").get<std::vector<int>>();
    report.top_n = doc.at("top_n").get<std::vector<int>>();
    report.full_list_sizes = doc.at("full_list_sizes").get<std::vector<int>>();
    for (const auto& entry : doc.at("splits")) {
      SplitMetrics split;
      static_cast<MetricsBlock&>(split) = block_from_json(entry);
      const auto& window = entry.at("split");
      split.split.train_start = window.at("train_start").get<std::int64_t>();
      split.split.train_end = window.at("train_end").get<std::int64_t>();
      split.split.test_start = window.at("test_start").get<std::int64_t>();
      split.split.test_end = window.at("test_end").get<std::int64_t>();
      report.splits.push_back(std::move(split));
    }
    report.average = block_from_json(doc.at("average"));
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed metrics document: ") + e.what());
  }
}

nlohmann::json comparison_to_json(const ComparisonReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : report.rows) {
    nlohmann::json entry = {{"size", row.size},
                            {"f_graph", row.f_graph},
                            {"f_hyper", row.f_hyper}};
    entry["n"] = row.n ? nlohmann::json(*row.n) : nlohmann::json(nullptr);
    entry["rel_delta"] = row.rel_delta ? nlohmann::json(*row.rel_delta) : nlohmann::json(nullptr);
    rows.push_back(std::move(entry));
  }
  return {{"rows", std::move(rows)}, {"table", format_comparison_table(report)}};
}

std::string format_comparison_table(const ComparisonReport& report) {
  std::string out = "scope\tsize\tf_graph\tf_hyper\trel_delta\n";
  char buf[128];
  for (const auto& row : report.rows) {
    const std::string scope = row.n ? "top" + std::to_string(*row.n) : "full";
    if (row.rel_delta)
      std::snprintf(buf, sizeof(buf), "%s\t%d\t%.6f\t%.6f\t%+.4f\n", scope.c_str(), row.size,
                    row.f_graph, row.f_hyper, *row.rel_delta);
    else
      std::snprintf(buf, sizeof(buf), "%s\t%d\t%.6f\t%.6f\tn/a\n", scope.c_str(), row.size,
                    row.f_graph, row.f_hyper);
    out += buf;
  }
  return out;
}

}  // namespace recollab
