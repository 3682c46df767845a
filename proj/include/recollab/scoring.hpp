#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "recollab/cp_als.hpp"
#include "recollab/sparse_tensor.hpp"
#include "recollab/types.hpp"

namespace recollab {

/// Object-by-actor similarity; rows follow the source tensor's first mode.
using SimilarityMatrix = Eigen::MatrixXd;

/// Trailing window of the temporal factor used to compress time out of the
/// model. Must not exceed the number of snapshots.
struct TemporalBuffer {
  std::uint32_t t_buf = 3;
};

/// Per-component mean of the last t_buf rows of the temporal factor C.
Eigen::VectorXd temporal_weights(const CPModel& model, TemporalBuffer buf);

/// S = sum_k gamma_k * lambda_k * a_k b_k^T.
SimilarityMatrix similarity_matrix(const CPModel& model, TemporalBuffer buf);

struct EnsembleStats {
  struct Member {
    int rank = 0;
    std::uint64_t seed = 0;
    double fit = 0.0;
    int iterations = 0;
    std::vector<double> sweep_sqerr;
  };
  std::vector<Member> members;
};

/// Decompose the tensor once per requested rank (member seeds derived from
/// the base seed and the rank), min-max normalize each similarity matrix to
/// [0,1] over its own entries, and average element-wise in ascending-rank
/// order. A constant matrix normalizes to all zeros.
SimilarityMatrix ensemble_similarity(const SparseTensor3& tensor,
                                     const std::vector<int>& ranks,
                                     const CPConfig& base_config,
                                     TemporalBuffer buf,
                                     EnsembleStats* stats = nullptr);

/// Likelihood scores kept in log-domain; entries whose product hit a
/// non-positive factor are flagged zero-mass instead of holding -inf.
struct ScoreVector {
  std::vector<double> log_score;
  std::vector<std::uint8_t> zero_mass;
  std::size_t factor_count = 0;   // similarity factors consumed
  std::size_t clamped_count = 0;  // factors that were negative (clamped to 0)

  std::size_t size() const { return log_score.size(); }
  bool is_zero(std::size_t i) const { return zero_mass[i] != 0; }
  double value(std::size_t i) const;  // exp(log_score) or exactly 0
};

/// p_h(i) = prod over members p of S_h(i,p).
ScoreVector hyperedge_scores(const SimilarityMatrix& sim, const HyperedgeRegistry& registry);

/// q_g(i) = prod over the edge's two vertices p of S_g(i,p).
ScoreVector graph_edge_scores(const SimilarityMatrix& sim, const EdgeRegistry& registry);

/// p_g(i) = prod over the hyperedge's clique pairs q of q_g(q).
ScoreVector graph_hyperedge_scores(const ScoreVector& edge_scores,
                                   const HyperedgeRegistry& h_registry,
                                   const EdgeRegistry& e_registry);

enum class BaselineMode { hyper, clique };

/// Occurrence-frequency baseline over hyperedges. hyper: fraction of periods
/// (distinct time units) in which the hyperedge occurred. clique: product of
/// that fraction over its pairs, a pair counting as occurring in a period
/// whenever both actors appear in one record there.
ScoreVector frequency_baseline(const std::vector<PublicationRecord>& train,
                               const HyperedgeRegistry& registry,
                               std::uint32_t n_periods,
                               BaselineMode mode);

/// Inspection dump: one "member,member,...<TAB>log_score" line per hyperedge
/// in index order, ZERO standing in for zero-mass entries.
std::string format_score_dump(const ScoreVector& scores,
                              const HyperedgeRegistry& registry,
                              const Corpus& corpus);

}  // namespace recollab
