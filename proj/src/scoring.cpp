#include "recollab/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "recollab/errors.hpp"
#include "recollab/loader.hpp"
#include "recollab/rng.hpp"

namespace recollab {

Eigen::VectorXd temporal_weights(const CPModel& model, TemporalBuffer buf) {
  const auto T = model.C.rows();
  if (buf.t_buf < 1) throw ConfigError("temporal buffer must be at least 1");
  if (static_cast<Eigen::Index>(buf.t_buf) > T)
    throw ConfigError("temporal buffer " + std::to_string(buf.t_buf) +
                      " exceeds the " + std::to_string(T) + " snapshots");
  const auto rows = static_cast<Eigen::Index>(buf.t_buf);
  return model.C.bottomRows(rows).colwise().mean();
}

SimilarityMatrix similarity_matrix(const CPModel& model, TemporalBuffer buf) {
  const Eigen::VectorXd gamma = temporal_weights(model, buf);
  const Eigen::VectorXd weights = gamma.cwiseProduct(model.lambda);
  return model.A * weights.asDiagonal() * model.B.transpose();
}

SimilarityMatrix ensemble_similarity(const SparseTensor3& tensor,
                                     const std::vector<int>& ranks,
                                     const CPConfig& base_config, TemporalBuffer buf,
                                     EnsembleStats* stats) {
  if (ranks.empty()) throw ConfigError("ensemble needs at least one rank");
  std::vector<int> ordered = ranks;
  std::sort(ordered.begin(), ordered.end());

  SimilarityMatrix acc = SimilarityMatrix::Zero(static_cast<Eigen::Index>(tensor.dim(0)),
                                                static_cast<Eigen::Index>(tensor.dim(1)));
  for (int rank : ordered) {
    CPConfig member_config = base_config;
    member_config.rank = rank;
    member_config.seed = derive_seed(base_config.seed, static_cast<std::uint64_t>(rank));
    CPModel model;
    try {
      model = cp_als(tensor, member_config);
    } catch (const std::exception& e) {
      throw ComputeError("ensemble member K=" + std::to_string(rank) + ": " + e.what());
    }
    SimilarityMatrix sim = similarity_matrix(model, buf);
    const double lo = sim.minCoeff();
    const double hi = sim.maxCoeff();
    if (hi > lo)
      sim = (sim.array() - lo) / (hi - lo);
    else
      sim.setZero();  // constant matrix carries no ordering
    acc += sim;
    if (stats)
      stats->members.push_back({rank, member_config.seed, model.fit, model.iterations,
                                model.sweep_sqerr});
  }
  acc /= static_cast<double>(ordered.size());
  return acc;
}

double ScoreVector::value(std::size_t i) const {
  return is_zero(i) ? 0.0 : std::exp(log_score[i]);
}

namespace {

// Multiply one similarity factor into a log-domain accumulator. Negative
// entries clamp to zero mass; the caller's counters track the clamp rate.
void consume_factor(double factor, double& acc, bool& zero, ScoreVector& out) {
  ++out.factor_count;
  if (factor < 0.0) ++out.clamped_count;
  if (factor <= 0.0)
    zero = true;
  else if (!zero)
    acc += std::log(factor);
}

}  // namespace

ScoreVector hyperedge_scores(const SimilarityMatrix& sim, const HyperedgeRegistry& registry) {
  if (sim.rows() != static_cast<Eigen::Index>(registry.size()))
    throw std::invalid_argument("similarity rows do not match the hyperedge registry");
  ScoreVector out;
  out.log_score.resize(registry.size(), 0.0);
  out.zero_mass.resize(registry.size(), 0);
  for (std::uint32_t i = 0; i < registry.size(); ++i) {
    double acc = 0.0;
    bool zero = false;
    for (ActorId p : registry.key(i).members)
      consume_factor(sim(i, static_cast<Eigen::Index>(p)), acc, zero, out);
    out.log_score[i] = acc;
    out.zero_mass[i] = zero ? 1 : 0;
  }
  return out;
}

ScoreVector graph_edge_scores(const SimilarityMatrix& sim, const EdgeRegistry& registry) {
  if (sim.rows() != static_cast<Eigen::Index>(registry.size()))
    throw std::invalid_argument("similarity rows do not match the edge registry");
  ScoreVector out;
  out.log_score.resize(registry.size(), 0.0);
  out.zero_mass.resize(registry.size(), 0);
  for (std::uint32_t i = 0; i < registry.size(); ++i) {
    const auto& [a, b] = registry.pair(i);
    double acc = 0.0;
    bool zero = false;
    consume_factor(sim(i, static_cast<Eigen::Index>(a)), acc, zero, out);
    consume_factor(sim(i, static_cast<Eigen::Index>(b)), acc, zero, out);
    out.log_score[i] = acc;
    out.zero_mass[i] = zero ? 1 : 0;
  }
  return out;
}

ScoreVector graph_hyperedge_scores(const ScoreVector& edge_scores,
                                   const HyperedgeRegistry& h_registry,
                                   const EdgeRegistry& e_registry) {
  if (edge_scores.size() != e_registry.size())
    throw std::invalid_argument("edge scores do not match the edge registry");
  ScoreVector out;
  out.log_score.resize(h_registry.size(), 0.0);
  out.zero_mass.resize(h_registry.size(), 0);
  for (std::uint32_t i = 0; i < h_registry.size(); ++i) {
    double acc = 0.0;
    bool zero = false;
    for (const auto& [a, b] : clique_expand(h_registry.key(i))) {
      const auto edge = e_registry.lookup(a, b);
      if (!edge) throw std::invalid_argument("clique pair missing from the edge registry");
      if (edge_scores.is_zero(*edge))
        zero = true;
      else if (!zero)
        acc += edge_scores.log_score[*edge];
    }
    out.log_score[i] = acc;
    out.zero_mass[i] = zero ? 1 : 0;
  }
  return out;
}

ScoreVector frequency_baseline(const std::vector<PublicationRecord>& train,
                               const HyperedgeRegistry& registry,
                               std::uint32_t n_periods, BaselineMode mode) {
  if (n_periods < 1) throw ConfigError("n_periods must be positive");

  // Distinct periods (time units) in which each hyperedge / pair occurred.
  std::map<std::uint32_t, std::set<std::int64_t>> edge_periods;
  std::map<std::uint64_t, std::set<std::int64_t>> pair_periods;
  for (const auto& record : train) {
    const auto index = registry.lookup(HyperedgeKey{record.actors});
    if (index) edge_periods[*index].insert(record.time);
    if (mode == BaselineMode::clique) {
      for (std::size_t a = 0; a + 1 < record.actors.size(); ++a)
        for (std::size_t b = a + 1; b < record.actors.size(); ++b) {
          const auto packed = (static_cast<std::uint64_t>(record.actors[a]) << 32) |
                              record.actors[b];
          pair_periods[packed].insert(record.time);
        }
    }
  }

  const double denom = static_cast<double>(n_periods);
  ScoreVector out;
  out.log_score.resize(registry.size(), 0.0);
  out.zero_mass.resize(registry.size(), 0);
  for (std::uint32_t i = 0; i < registry.size(); ++i) {
    if (mode == BaselineMode::hyper) {
      const auto it = edge_periods.find(i);
      const std::size_t hits = it == edge_periods.end() ? 0 : it->second.size();
      if (hits == 0)
        out.zero_mass[i] = 1;
      else
        out.log_score[i] = std::log(static_cast<double>(hits) / denom);
    } else {
      double acc = 0.0;
      bool zero = false;
      for (const auto& [a, b] : clique_expand(registry.key(i))) {
        const auto packed = (static_cast<std::uint64_t>(a) << 32) | b;
        const auto it = pair_periods.find(packed);
        const std::size_t hits = it == pair_periods.end() ? 0 : it->second.size();
        if (hits == 0) {
          zero = true;
          break;
        }
        acc += std::log(static_cast<double>(hits) / denom);
      }
      out.log_score[i] = acc;
      out.zero_mass[i] = zero ? 1 : 0;
    }
  }
  return out;
}

std::string format_score_dump(const ScoreVector& scores, const HyperedgeRegistry& registry,
                              const Corpus& corpus) {
  if (scores.size() != registry.size())
    throw std::invalid_argument("score vector does not match the registry");
  std::string out;
  char buf[64];
  for (std::uint32_t i = 0; i < registry.size(); ++i) {
    const auto& members = registry.key(i).members;
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (m) out += ',';
      out += corpus.label(members[m]);
    }
    out += '\t';
    if (scores.is_zero(i)) {
      out += "ZERO";
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g", scores.log_score[i]);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace recollab
